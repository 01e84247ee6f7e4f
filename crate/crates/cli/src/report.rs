//! JSON report written by every analysis command.

use serde::Serialize;
use serde_json::Value;

use rieszlab::diagnostics::{
    CriteriaRoutes, DualRoute, GramSpectrum, Verdict, BESSEL_ROUTE_AGREEMENT, DUAL_BESSEL_AGREEMENT,
    GRAM_RESOLUTION_FACTOR, GRAM_RESOLUTION_MARGIN,
};
use rieszlab::duals::{DUAL_TOLERANCE, GRAM_SOLVE_CONDITION_LIMIT};
use rieszlab::scaling::{BOUNDED_BELOW_FLOOR, EXPONENT_BAND, MIN_R_SQUARED, ZERO_FLOOR};
use rieszlab::seqcore::RANK_TOLERANCE_FACTOR;
use rieszlab::ScalingReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    pub rank_tolerance_factor: f64,
    /// Absolute rank cutoff for the analysed system.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_tolerance: Option<f64>,
    pub dual_tolerance: f64,
    pub gram_solve_condition_limit: f64,
    pub bessel_route_agreement: f64,
    pub gram_resolution_factor: f64,
    pub gram_resolution_margin: f64,
    pub dual_bessel_agreement: f64,
    pub exponent_band: f64,
    pub min_r_squared: f64,
    pub bounded_below_floor: f64,
    pub zero_floor: f64,
}

impl Tolerances {
    pub fn new(rank_tolerance: Option<f64>) -> Self {
        Self {
            rank_tolerance_factor: RANK_TOLERANCE_FACTOR,
            rank_tolerance,
            dual_tolerance: DUAL_TOLERANCE,
            gram_solve_condition_limit: GRAM_SOLVE_CONDITION_LIMIT,
            bessel_route_agreement: BESSEL_ROUTE_AGREEMENT,
            gram_resolution_factor: GRAM_RESOLUTION_FACTOR,
            gram_resolution_margin: GRAM_RESOLUTION_MARGIN,
            dual_bessel_agreement: DUAL_BESSEL_AGREEMENT,
            exponent_band: EXPONENT_BAND,
            min_r_squared: MIN_R_SQUARED,
            bounded_below_floor: BOUNDED_BELOW_FLOOR,
            zero_floor: ZERO_FLOOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bounds {
    pub riesz_lower: f64,
    pub bessel_upper: f64,
    pub conditioning: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Residuals {
    /// `minimal`, `partner` or `none`.
    pub dual: &'static str,
    pub biorthogonality: Option<f64>,
    pub duality_identity: Option<f64>,
}

impl Residuals {
    pub const NONE: Residuals = Residuals {
        dual: "none",
        biorthogonality: None,
        duality_identity: None,
    };

    pub fn from_route(route: &DualRoute) -> Self {
        match route {
            DualRoute::Evaluated {
                biorthogonality_residual,
                duality_residual,
                ..
            } => Residuals {
                dual: "minimal",
                biorthogonality: Some(*biorthogonality_residual),
                duality_identity: Some(*duality_residual),
            },
            _ => Self::NONE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub command: &'static str,
    pub input: Value,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram_spectrum: Option<GramSpectrum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Residuals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes: Option<CriteriaRoutes>,
    /// `description`, `fitAxis`, `perSize`, `fits`, `verdicts` of a family run.
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub family: Option<ScalingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement: Option<ScalingReport>,
}

impl Report {
    pub fn new(command: &'static str, input: Value, rank_tolerance: Option<f64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            input,
            tolerances: Tolerances::new(rank_tolerance),
            bounds: None,
            defect: None,
            gram_spectrum: None,
            residuals: None,
            verdict: None,
            routes: None,
            family: None,
            refinement: None,
        }
    }

    pub fn from_verdict(command: &'static str, input: Value, verdict: &Verdict) -> Self {
        let mut report = Self::new(command, input, Some(verdict.rank_tolerance));
        report.bounds = Some(Bounds {
            riesz_lower: verdict.bounds.riesz_lower,
            bessel_upper: verdict.bounds.bessel_upper,
            conditioning: verdict.bounds.conditioning.filter(|c| c.is_finite()),
        });
        report.defect = Some(verdict.bounds.completeness_defect);
        report.gram_spectrum = Some(verdict.gram_spectrum);
        report.residuals = Some(Residuals::from_route(&verdict.routes.dual));
        report.verdict = Some(verdict.kind.to_string());
        report.routes = Some(verdict.routes.clone());
        report
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
