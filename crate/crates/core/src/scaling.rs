//! Truncation studies: build a generator family at increasing sizes, measure
//! bounds and dual metrics at each size, and fit `log(metric) ~ p · log(n)`
//! to read off whether a quantity diverges, vanishes, or stays bounded. For
//! families whose ambient space grows with the truncation, `n` is the ambient
//! dimension; Gabor families share one grid and are fit against the size.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{bessel_bound, riesz_bounds, span_distance};
use crate::duals::{duality_identity_residual, minimal_dual};
use crate::error::{Error, Result};
use crate::generators::{self, GaborDiscretization, GeneratedPair, PointSet2D, TfNode};
use crate::par::{self, Execution};
use crate::seqcore::{CVector, VectorSequence};

/// Exponents beyond ±this band count as growth or decay.
pub const EXPONENT_BAND: f64 = 0.2;
/// Minimum coefficient of determination for a growth or decay verdict.
pub const MIN_R_SQUARED: f64 = 0.9;
/// Bounded metrics whose minimum exceeds this are bounded away from zero.
pub const BOUNDED_BELOW_FLOOR: f64 = 1e-6;
/// Metrics at or below this everywhere are treated as identically zero.
pub const ZERO_FLOOR: f64 = 1e-10;

pub const METRIC_RIESZ_LOWER: &str = "rieszLowerF";
pub const METRIC_BESSEL_UPPER: &str = "besselUpperF";
pub const METRIC_DEFECT_DISTANCE: &str = "defectDistanceF";
pub const METRIC_DUAL_BESSEL: &str = "besselUpperDual";
pub const METRIC_DUALITY_RESIDUAL: &str = "dualityResidual";

pub const METRICS: [&str; 5] = [
    METRIC_RIESZ_LOWER,
    METRIC_BESSEL_UPPER,
    METRIC_DEFECT_DISTANCE,
    METRIC_DUAL_BESSEL,
    METRIC_DUALITY_RESIDUAL,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GeneratorId {
    Orthonormal,
    WeightedPair,
    AlternatingWeightedPair,
    YoungExample,
    YoungGeneral,
    RieszSeeded,
    GaborPunctured,
    #[serde(rename = "gaborALS")]
    GaborAls,
    GaborFullLattice,
}

impl GeneratorId {
    fn is_gabor(&self) -> bool {
        matches!(
            self,
            GeneratorId::GaborPunctured | GeneratorId::GaborAls | GeneratorId::GaborFullLattice
        )
    }
}

/// Vector against which the distance to `span(F)` is measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Probe {
    /// The standard basis vector with this zero-based index.
    Basis(usize),
    /// A discretized Gaussian atom at this node (Gabor families).
    Atom(TfNode),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyParams {
    pub seed: u64,
    /// Complement dimension for `youngGeneral`.
    pub complement_dim: usize,
    /// Grid half-width for Gabor families; defaults to fit the largest size.
    pub half_width: Option<f64>,
    pub samples_per_unit: usize,
    /// Lattice spacings `(a, b)` for the full-lattice family.
    pub lattice_spacing: (f64, f64),
    pub probe: Option<Probe>,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            seed: 0,
            complement_dim: 2,
            half_width: None,
            samples_per_unit: 16,
            lattice_spacing: (1.0, 1.0),
            probe: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilySpec {
    pub generator: GeneratorId,
    pub params: FamilyParams,
    pub sizes: Vec<usize>,
}

impl FamilySpec {
    pub fn new(generator: GeneratorId, sizes: Vec<usize>) -> Result<Self> {
        Self::with_params(generator, FamilyParams::default(), sizes)
    }

    pub fn with_params(generator: GeneratorId, params: FamilyParams, sizes: Vec<usize>) -> Result<Self> {
        let spec = Self {
            generator,
            params,
            sizes,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() < 3 {
            return Err(Error::Family(format!(
                "need at least 3 sizes for an exponent fit, got {}",
                self.sizes.len()
            )));
        }
        if self.sizes[0] == 0 || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Family("sizes must be positive and strictly increasing".into()));
        }
        Ok(())
    }

    fn probe(&self) -> Probe {
        self.params.probe.unwrap_or(match self.generator {
            GeneratorId::GaborPunctured => Probe::Atom(TfNode::new(1.0, 0.0)),
            GeneratorId::GaborAls => Probe::Atom(TfNode::new(0.0, 0.0)),
            GeneratorId::GaborFullLattice => Probe::Atom(TfNode::new(0.5, 0.5)),
            _ => Probe::Basis(0),
        })
    }

    fn points(&self, size: usize) -> Result<PointSet2D> {
        match self.generator {
            GeneratorId::GaborPunctured => generators::punctured_lattice(size),
            GeneratorId::GaborAls => generators::als_point_set(size),
            GeneratorId::GaborFullLattice => {
                let (a, b) = self.params.lattice_spacing;
                generators::lattice_points(a, b, size)
            }
            _ => Err(Error::Family("not a Gabor family".into())),
        }
    }

    /// One discretization shared by every size, so that larger point sets
    /// extend smaller ones inside the same ambient space.
    fn discretization(&self) -> Result<GaborDiscretization> {
        let half_width = match self.params.half_width {
            Some(x) => x,
            None => {
                let largest = *self.sizes.last().expect("validated non-empty");
                let reach = self.points(largest)?.max_abs_tau();
                (reach.ceil() + generators::SAFE_MARGIN).max(6.0)
            }
        };
        GaborDiscretization::new(half_width, self.params.samples_per_unit)
    }

    fn build(&self, size: usize, disc: Option<&GaborDiscretization>) -> Result<GeneratedPair> {
        let alone = |f| GeneratedPair { f, g: None };
        match self.generator {
            GeneratorId::Orthonormal => generators::orthonormal(size).map(alone),
            GeneratorId::WeightedPair => generators::weighted_pair(size),
            GeneratorId::AlternatingWeightedPair => generators::alternating_weighted_pair(size),
            GeneratorId::YoungExample => generators::young_example(size),
            GeneratorId::YoungGeneral => generators::young_general(size, self.params.complement_dim, size),
            GeneratorId::RieszSeeded => generators::random_riesz(size, size_seed(self.params.seed, size)).map(alone),
            GeneratorId::GaborPunctured | GeneratorId::GaborAls | GeneratorId::GaborFullLattice => {
                let disc = disc.expect("Gabor families carry a discretization");
                generators::gaussian_gabor(&self.points(size)?, disc).map(alone)
            }
        }
    }
}

/// Per-size seed derived from the family seed.
pub fn size_seed(seed: u64, size: usize) -> u64 {
    seed.wrapping_add((size as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DualSource {
    /// The partner named by the construction.
    Designated,
    Minimal,
    /// No biorthogonal partner could be formed.
    Unavailable,
}

/// Abscissa of the growth fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FitAxis {
    /// The requested truncation size.
    Size,
    /// Dimension of the finite model space at each size.
    AmbientDim,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SizeRecord {
    pub size: usize,
    pub dim: usize,
    pub riesz_lower_f: f64,
    pub bessel_upper_f: f64,
    pub defect_distance_f: Option<f64>,
    pub bessel_upper_dual: Option<f64>,
    pub duality_residual: Option<f64>,
    pub dual_source: DualSource,
}

impl SizeRecord {
    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            METRIC_RIESZ_LOWER => Some(self.riesz_lower_f),
            METRIC_BESSEL_UPPER => Some(self.bessel_upper_f),
            METRIC_DEFECT_DISTANCE => self.defect_distance_f,
            METRIC_DUAL_BESSEL => self.bessel_upper_dual,
            METRIC_DUALITY_RESIDUAL => self.duality_residual,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub exponent: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AsymptoticVerdict {
    Diverges,
    VanishesToZero,
    StaysBounded,
    StaysBoundedBelow,
    /// A clear exponent with a poor fit; no asymptotic reading is claimed.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalingReport {
    pub description: String,
    pub fit_axis: FitAxis,
    pub per_size: Vec<SizeRecord>,
    pub fits: BTreeMap<String, Fit>,
    pub verdicts: BTreeMap<String, AsymptoticVerdict>,
}

impl ScalingReport {
    fn assemble(description: String, fit_axis: FitAxis, per_size: Vec<SizeRecord>) -> Result<Self> {
        let mut fits = BTreeMap::new();
        let mut verdicts = BTreeMap::new();
        for name in METRICS {
            let values: Option<Vec<f64>> = per_size.iter().map(|r| r.metric(name)).collect();
            let Some(values) = values else { continue };
            if values.iter().all(|v| v.abs() <= ZERO_FLOOR) {
                verdicts.insert(name.to_string(), AsymptoticVerdict::StaysBounded);
                continue;
            }
            if values.len() < 3 || values.iter().any(|&v| v <= ZERO_FLOOR) {
                continue;
            }
            let sizes: Vec<usize> = per_size
                .iter()
                .map(|r| match fit_axis {
                    FitAxis::Size => r.size,
                    FitAxis::AmbientDim => r.dim,
                })
                .collect();
            let fit = fit_growth(&sizes, &values)?;
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            verdicts.insert(name.to_string(), classify_growth(fit, min));
            fits.insert(name.to_string(), fit);
        }
        Ok(Self {
            description,
            fit_axis,
            per_size,
            fits,
            verdicts,
        })
    }

    pub fn fit(&self, metric: &str) -> Option<Fit> {
        self.fits.get(metric).copied()
    }

    pub fn verdict(&self, metric: &str) -> Option<AsymptoticVerdict> {
        self.verdicts.get(metric).copied()
    }

    pub fn metric_series(&self, metric: &str) -> Vec<Option<f64>> {
        self.per_size.iter().map(|r| r.metric(metric)).collect()
    }

    /// One row per size; missing metrics are empty cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,dim");
        for name in METRICS {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for record in &self.per_size {
            let _ = write!(out, "{},{}", record.size, record.dim);
            for name in METRICS {
                out.push(',');
                if let Some(v) = record.metric(name) {
                    let _ = write!(out, "{v:e}");
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Least-squares slope of `log(value)` against `log(size)` and its `r²`.
pub fn fit_growth(sizes: &[usize], values: &[f64]) -> Result<Fit> {
    if sizes.len() != values.len() || sizes.len() < 3 {
        return Err(Error::Family(format!(
            "fit needs equal-length series of at least 3 points, got {} sizes and {} values",
            sizes.len(),
            values.len()
        )));
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::FitDomain { index, value });
    }
    if let Some(index) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::FitDomain { index, value: 0.0 });
    }
    let xs: Vec<f64> = sizes.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let exponent = sxy / sxx;
    let intercept = y_mean - exponent * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + exponent * x)).powi(2))
        .sum();
    // constant data is fit exactly by a zero slope
    let r2 = if syy <= f64::EPSILON * f64::EPSILON * n {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(Fit { exponent, r2 })
}

pub fn classify_growth(fit: Fit, min_value: f64) -> AsymptoticVerdict {
    if fit.exponent.abs() <= EXPONENT_BAND {
        if min_value > BOUNDED_BELOW_FLOOR {
            AsymptoticVerdict::StaysBoundedBelow
        } else {
            AsymptoticVerdict::StaysBounded
        }
    } else if fit.r2 > MIN_R_SQUARED {
        if fit.exponent > 0.0 {
            AsymptoticVerdict::Diverges
        } else {
            AsymptoticVerdict::VanishesToZero
        }
    } else {
        AsymptoticVerdict::Inconclusive
    }
}

fn probe_vector(probe: Probe, f: &VectorSequence, disc: Option<&GaborDiscretization>) -> Result<Option<CVector>> {
    match probe {
        Probe::Basis(k) if k < f.dim() => Ok(Some(f.ambient().basis_vector(k))),
        Probe::Basis(_) => Ok(None),
        Probe::Atom(node) => match disc {
            Some(d) => d.atom(node).map(Some),
            None => Ok(None),
        },
    }
}

fn measure(size: usize, pair: &GeneratedPair, probe: Option<&CVector>) -> Result<SizeRecord> {
    let f = &pair.f;
    let (riesz_lower_f, bessel_upper_f) = riesz_bounds(f)?;
    let defect_distance_f = probe.map(|h| span_distance(f, h)).transpose()?;
    let (dual, dual_source) = match &pair.g {
        Some(g) => (Some(g.clone()), DualSource::Designated),
        None => match minimal_dual(f) {
            Ok(g) => (Some(g), DualSource::Minimal),
            Err(Error::NoBiorthogonalSequence { .. } | Error::IllConditioned { .. }) => (None, DualSource::Unavailable),
            Err(e) => return Err(e),
        },
    };
    let (bessel_upper_dual, duality_residual) = match &dual {
        Some(g) => (Some(bessel_bound(g)?), Some(duality_identity_residual(f, g)?)),
        None => (None, None),
    };
    Ok(SizeRecord {
        size,
        dim: f.dim(),
        riesz_lower_f,
        bessel_upper_f,
        defect_distance_f,
        bessel_upper_dual,
        duality_residual,
        dual_source,
    })
}

pub fn run_family(spec: &FamilySpec) -> Result<ScalingReport> {
    run_family_with(spec, Execution::Parallel)
}

/// [`run_family`] with explicit control over per-size parallelism.
pub fn run_family_with(spec: &FamilySpec, exec: Execution) -> Result<ScalingReport> {
    spec.validate()?;
    let disc = if spec.generator.is_gabor() {
        Some(spec.discretization()?)
    } else {
        None
    };
    let probe = spec.probe();
    let records = par::map(&spec.sizes, exec, |&size| {
        let at = |e: Error| Error::AtSize {
            size,
            source: Box::new(e),
        };
        let pair = spec.build(size, disc.as_ref()).map_err(at)?;
        let h = probe_vector(probe, &pair.f, disc.as_ref()).map_err(at)?;
        measure(size, &pair, h.as_ref()).map_err(at)
    });
    let per_size = records.into_iter().collect::<Result<Vec<_>>>()?;
    let mut description = format!("{:?} sizes={:?}", spec.generator, spec.sizes);
    if let Some(d) = &disc {
        let _ = write!(description, " X={} s={}", d.half_width(), d.samples_per_unit());
    }
    // Gabor systems live on one fixed grid; every other family grows its ambient space
    let axis = if spec.generator.is_gabor() {
        FitAxis::Size
    } else {
        FitAxis::AmbientDim
    };
    ScalingReport::assemble(description, axis, per_size)
}

/// Bounds of one Gabor system under successively finer grids; `size` in the
/// report is the samples-per-unit of each grid.
pub fn gabor_refinement_study(
    points: &PointSet2D,
    discretizations: &[GaborDiscretization],
    probe: Option<TfNode>,
) -> Result<ScalingReport> {
    if discretizations.is_empty() {
        return Err(Error::Discretization("refinement study needs at least one grid".into()));
    }
    if discretizations
        .windows(2)
        .any(|w| w[0].samples_per_unit() >= w[1].samples_per_unit())
    {
        return Err(Error::Discretization(
            "refinement grids must have strictly increasing samples_per_unit".into(),
        ));
    }
    let records = par::map(discretizations, Execution::Parallel, |disc| {
        let size = disc.samples_per_unit();
        let pair = GeneratedPair {
            f: generators::gaussian_gabor(points, disc)?,
            g: None,
        };
        let h = probe.map(|node| disc.atom(node)).transpose()?;
        measure(size, &pair, h.as_ref())
    });
    let per_size = records.into_iter().collect::<Result<Vec<_>>>()?;
    let grids: Vec<usize> = discretizations.iter().map(|d| d.samples_per_unit()).collect();
    ScalingReport::assemble(
        format!("gabor refinement nodes={} samplesPerUnit={grids:?}", points.len()),
        FitAxis::Size,
        per_size,
    )
}
