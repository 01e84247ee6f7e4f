//! Quantitative Riesz-basis criteria on finite systems.
//!
//! Three routes are evaluated and compared:
//!
//! * **synthesis**: extremal singular values of the synthesis matrix give the
//!   optimal constants `A = σ_min²`, `B = σ_max²` of
//!   `A Σ|c_k|² ≤ ‖Σ c_k f_k‖² ≤ B Σ|c_k|²`, and its numerical rank gives the
//!   completeness defect;
//! * **gram**: extremal eigenvalues of the Gram matrix, which must match the
//!   synthesis constants and decide whether the Gram operator is bijective;
//! * **dual**: when a minimal biorthogonal dual exists, both sequences are
//!   Bessel, the pair is biorthogonal, and completeness of the dual alone
//!   decides between a basis and an incomplete Riesz sequence.
//!
//! The routes are equivalent in exact arithmetic, so any disagreement is an
//! internal error rather than a verdict.

use serde::{Deserialize, Serialize};

use crate::duals;
use crate::error::{Error, Result};
use crate::seqcore::{self, check_ambient_vector, gram, CMatrix, CVector, VectorSequence};

/// Relative agreement required between the two computations of the Bessel bound.
pub const BESSEL_ROUTE_AGREEMENT: f64 = 1e-8;

/// Eigenvalues of a formed Gram matrix carry absolute error of order
/// `λ_max · max(n, m) · ε`; below this floor the Gram route cannot resolve
/// `λ_min` from zero.
pub const GRAM_RESOLUTION_FACTOR: f64 = 8.0 * f64::EPSILON;

/// Band above the Gram floor inside which a disagreement of the Gram route with
/// the synthesis route is attributed to resolution, not to an error.
pub const GRAM_RESOLUTION_MARGIN: f64 = 4.0;

/// Relative agreement between `B_dual` and `1/A` on the dual route.
pub const DUAL_BESSEL_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsReport {
    pub riesz_lower: f64,
    pub bessel_upper: f64,
    pub completeness_defect: usize,
    /// `B / A`, `None` when `A = 0`.
    pub conditioning: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    RieszBasis,
    RieszSequenceIncomplete,
    LinearlyDependent,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::RieszBasis => "RieszBasis",
            VerdictKind::RieszSequenceIncomplete => "RieszSequenceIncomplete",
            VerdictKind::LinearlyDependent => "LinearlyDependent",
        }
    }
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GramSpectrum {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub bijective: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GramRoute {
    pub kind: VerdictKind,
    /// False when `A` sits in the band the formed Gram matrix cannot resolve;
    /// the route is then not compared.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "status")]
pub enum DualRoute {
    /// No biorthogonal sequence exists for dependent systems.
    Skipped,
    /// The dual could not be built to the required accuracy.
    Unavailable { reason: String },
    Evaluated {
        kind: VerdictKind,
        biorthogonality_residual: f64,
        duality_residual: f64,
        dual_bessel_upper: f64,
        dual_defect: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CriteriaRoutes {
    pub synthesis: VerdictKind,
    pub gram: GramRoute,
    pub dual: DualRoute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub kind: VerdictKind,
    pub bounds: BoundsReport,
    pub gram_spectrum: GramSpectrum,
    pub rank_tolerance: f64,
    pub routes: CriteriaRoutes,
}

/// Singular values of the synthesis matrix with the shape they came from.
struct SynthesisSpectrum {
    sigma: Vec<f64>,
    dim: usize,
    count: usize,
}

impl SynthesisSpectrum {
    fn of(f: &VectorSequence) -> Self {
        Self {
            sigma: f.singular_values(),
            dim: f.dim(),
            count: f.count(),
        }
    }

    fn sigma_max(&self) -> f64 {
        self.sigma[0]
    }

    /// The `m`-th singular value, zero when `m > n`.
    fn sigma_min(&self) -> f64 {
        if self.count > self.dim {
            0.0
        } else {
            self.sigma[self.count - 1]
        }
    }

    fn tolerance(&self) -> f64 {
        seqcore::rank_tolerance(self.sigma_max(), self.dim, self.count)
    }

    fn rank(&self) -> usize {
        seqcore::numerical_rank(&self.sigma, self.dim, self.count)
    }

    fn bounds(&self) -> BoundsReport {
        let lower = self.sigma_min().powi(2);
        let upper = self.sigma_max().powi(2);
        BoundsReport {
            riesz_lower: lower,
            bessel_upper: upper,
            completeness_defect: self.dim - self.rank(),
            conditioning: (lower > 0.0).then(|| upper / lower),
        }
    }

    fn independent(&self) -> bool {
        self.sigma_min() > self.tolerance()
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn gram_floor(lambda_max: f64, dim: usize, count: usize) -> f64 {
    lambda_max.max(0.0) * dim.max(count) as f64 * GRAM_RESOLUTION_FACTOR
}

/// Smallest valid Bessel constant, `λ_max(gram) = σ_max²`.
pub fn bessel_bound(f: &VectorSequence) -> Result<f64> {
    let from_svd = SynthesisSpectrum::of(f).sigma_max().powi(2);
    let ev = gram(f).eigenvalues();
    let from_gram = ev[ev.len() - 1];
    let gap = relative_gap(from_svd, from_gram);
    if gap > BESSEL_ROUTE_AGREEMENT {
        return Err(Error::CriteriaDisagreement(format!(
            "Bessel bound: σ_max² = {from_svd:e} but λ_max(Gram) = {from_gram:e}"
        )));
    }
    Ok(from_svd)
}

/// Optimal `(A, B)` of the two-sided ℓ² inequality on the finite model.
pub fn riesz_bounds(f: &VectorSequence) -> Result<(f64, f64)> {
    let b = bessel_bound(f)?;
    let spectrum = SynthesisSpectrum::of(f);
    Ok((spectrum.sigma_min().powi(2), b))
}

pub fn bounds_report(f: &VectorSequence) -> BoundsReport {
    SynthesisSpectrum::of(f).bounds()
}

/// Codimension of `span(F)` in the ambient space.
pub fn completeness_defect(f: &VectorSequence) -> usize {
    f.dim() - f.numerical_rank()
}

/// Euclidean distance from `h` to `span(F)`, by SVD least squares.
pub fn span_distance(f: &VectorSequence, h: &CVector) -> Result<f64> {
    check_ambient_vector(f, h, "span distance probe")?;
    let tol = f.rank_tolerance();
    let svd = nalgebra::SVD::new(f.columns().clone(), true, true);
    let coeffs = svd
        .solve(h, tol)
        .map_err(|e| Error::Shape(format!("least squares failed: {e}")))?;
    let residual = h - f.columns() * coeffs;
    Ok(residual.norm().min(h.norm()))
}

/// Extremal Gram eigenvalues and whether the Gram operator is bijective.
///
/// The Gram matrix is formed explicitly, so its smallest eigenvalue is only
/// known to roughly `λ_max · max(n, m) · ε`; `bijective` requires `λ_min` above
/// both that floor and the squared rank tolerance.
pub fn gram_spectrum(f: &VectorSequence) -> Result<GramSpectrum> {
    let spectrum = SynthesisSpectrum::of(f);
    let ev = gram(f).eigenvalues();
    let (lambda_min, lambda_max) = (ev[0], ev[ev.len() - 1]);

    let (a, b) = (spectrum.sigma_min().powi(2), spectrum.sigma_max().powi(2));
    let floor = gram_floor(lambda_max, f.dim(), f.count());
    if relative_gap(lambda_max, b) > BESSEL_ROUTE_AGREEMENT
        || (lambda_min - a).abs() > BESSEL_ROUTE_AGREEMENT * lambda_max.max(b)
    {
        return Err(Error::CriteriaDisagreement(format!(
            "Gram spectrum [{lambda_min:e}, {lambda_max:e}] does not match synthesis bounds [{a:e}, {b:e}]"
        )));
    }
    let threshold = spectrum.tolerance().powi(2).max(floor);
    Ok(GramSpectrum {
        lambda_min,
        lambda_max,
        bijective: lambda_min > threshold,
    })
}

/// `max_{j,k} |⟨f_k, g_j⟩ − δ_{jk}|`.
pub fn biorthogonality_residual(f: &VectorSequence, g: &VectorSequence) -> Result<f64> {
    seqcore::check_same_shape(f, g, "biorthogonality pair")?;
    // (Gᴴ F)_{jk} = g_jᴴ f_k = ⟨f_k, g_j⟩
    let cross = g.columns().ad_mul(f.columns());
    let m = f.count();
    let mut worst: f64 = 0.0;
    for j in 0..m {
        for k in 0..m {
            let delta = if j == k { 1.0 } else { 0.0 };
            let z = cross[(j, k)] - nalgebra::Complex::new(delta, 0.0);
            worst = worst.max(z.norm());
        }
    }
    Ok(worst)
}

/// The canonical equivalent inner product `W = (F Fᴴ)⁻¹` under which a Riesz
/// basis becomes orthonormal: `⟨x, y⟩_W = yᴴ W x`.
pub fn equivalent_inner_product(f: &VectorSequence) -> Result<CMatrix> {
    let verdict = classify(f)?;
    if verdict.kind != VerdictKind::RieszBasis {
        return Err(Error::NotARieszBasis(format!("classified as {}", verdict.kind)));
    }
    let inv = f
        .columns()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotARieszBasis("synthesis matrix is not invertible".into()))?;
    Ok(inv.adjoint() * inv)
}

/// Gram matrix of `F` under `⟨x, y⟩_W = yᴴ W x`, i.e. `Fᴴ W F`.
pub fn weighted_gram(f: &VectorSequence, w: &CMatrix) -> Result<CMatrix> {
    if w.nrows() != f.dim() || w.ncols() != f.dim() {
        return Err(Error::Dimension {
            context: "inner product weight",
            expected: f.dim(),
            actual: w.nrows(),
        });
    }
    Ok(f.columns().ad_mul(&(w * f.columns())))
}

fn kind_from(independent: bool, complete: bool) -> VerdictKind {
    match (independent, complete) {
        (false, _) => VerdictKind::LinearlyDependent,
        (true, true) => VerdictKind::RieszBasis,
        (true, false) => VerdictKind::RieszSequenceIncomplete,
    }
}

fn dual_route(f: &VectorSequence, lower: f64) -> Result<DualRoute> {
    let g = match duals::minimal_dual(f) {
        Ok(g) => g,
        Err(e @ Error::IllConditioned { .. }) => return Ok(DualRoute::Unavailable { reason: e.to_string() }),
        Err(e) => return Err(e),
    };
    let biorthogonality_residual = biorthogonality_residual(f, &g)?;
    let dual_bessel_upper = bessel_bound(&g)?;
    bessel_bound(f)?;
    let dual_defect = completeness_defect(&g);
    let own_defect = completeness_defect(f);
    if dual_defect != own_defect {
        return Err(Error::CriteriaDisagreement(format!(
            "biorthogonal Bessel pair with unequal defects {own_defect} and {dual_defect}"
        )));
    }
    if relative_gap(dual_bessel_upper, 1.0 / lower) > DUAL_BESSEL_AGREEMENT {
        return Err(Error::CriteriaDisagreement(format!(
            "dual Bessel bound {dual_bessel_upper:e} differs from 1/A = {:e}",
            1.0 / lower
        )));
    }
    let duality_residual = duals::duality_identity_residual(f, &g)?;
    // Bessel + biorthogonal Bessel partner + completeness of the partner alone
    let kind = if dual_defect == 0 {
        if duality_residual > duals::DUAL_TOLERANCE {
            return Err(Error::CriteriaDisagreement(format!(
                "complete dual but reconstruction residual {duality_residual:e}"
            )));
        }
        VerdictKind::RieszBasis
    } else {
        VerdictKind::RieszSequenceIncomplete
    };
    Ok(DualRoute::Evaluated {
        kind,
        biorthogonality_residual,
        duality_residual,
        dual_bessel_upper,
        dual_defect,
    })
}

/// Classifies `F` and cross-checks every criterion route.
pub fn classify(f: &VectorSequence) -> Result<Verdict> {
    let spectrum = SynthesisSpectrum::of(f);
    let bounds = spectrum.bounds();
    let tol = spectrum.tolerance();
    let independent = spectrum.independent();
    let synthesis_kind = kind_from(independent, bounds.completeness_defect == 0);

    let gram_spectrum = gram_spectrum(f)?;
    let ev = gram(f).eigenvalues();
    let floor = gram_floor(gram_spectrum.lambda_max, f.dim(), f.count());
    let gram_rank = ev.iter().filter(|&&l| l > floor.max(tol * tol)).count();
    let gram_kind = kind_from(gram_rank == f.count(), gram_rank == f.dim());
    let resolved = !(bounds.riesz_lower > tol * tol && bounds.riesz_lower <= GRAM_RESOLUTION_MARGIN * floor);
    if resolved && gram_kind != synthesis_kind {
        return Err(Error::CriteriaDisagreement(format!(
            "synthesis route says {synthesis_kind}, Gram route says {gram_kind} (A = {:e}, λ_min = {:e})",
            bounds.riesz_lower, gram_spectrum.lambda_min
        )));
    }

    let dual = if independent {
        dual_route(f, bounds.riesz_lower)?
    } else {
        DualRoute::Skipped
    };
    if let DualRoute::Evaluated { kind, .. } = &dual {
        if *kind != synthesis_kind {
            return Err(Error::CriteriaDisagreement(format!(
                "synthesis route says {synthesis_kind}, dual route says {kind}"
            )));
        }
    }

    Ok(Verdict {
        kind: synthesis_kind,
        bounds,
        gram_spectrum,
        rank_tolerance: tol,
        routes: CriteriaRoutes {
            synthesis: synthesis_kind,
            gram: GramRoute {
                kind: gram_kind,
                resolved,
            },
            dual,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::seqcore::C64;
    use approx::assert_relative_eq;

    fn diag(values: &[f64]) -> VectorSequence {
        let n = values.len();
        VectorSequence::from_real_fn(n, n, |r, c| if r == c { values[r] } else { 0.0 }).unwrap()
    }

    fn e1_twice() -> VectorSequence {
        VectorSequence::from_real_fn(2, 2, |r, _| if r == 0 { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn bessel_bound_cases() {
        for n in 1..6 {
            assert_relative_eq!(
                bessel_bound(&VectorSequence::identity(n).unwrap()).unwrap(),
                1.0,
                epsilon = 1e-14
            );
        }
        assert_relative_eq!(
            bessel_bound(&diag(&[1., 2., 3., 4., 5.])).unwrap(),
            25.0,
            max_relative = 1e-12
        );
        let young = generators::young_example(4).unwrap();
        assert_relative_eq!(bessel_bound(&young.f).unwrap(), 5.0, max_relative = 1e-12);
    }

    #[test]
    fn riesz_bounds_cases() {
        let (a, b) = riesz_bounds(&VectorSequence::identity(3).unwrap()).unwrap();
        assert_relative_eq!(a, 1.0, epsilon = 1e-14);
        assert_relative_eq!(b, 1.0, epsilon = 1e-14);
        let (a, b) = riesz_bounds(&diag(&[1.0, 0.5, 1.0 / 3.0])).unwrap();
        assert_relative_eq!(a, 1.0 / 9.0, max_relative = 1e-12);
        assert_relative_eq!(b, 1.0, max_relative = 1e-12);
        let (a, b) = riesz_bounds(&e1_twice()).unwrap();
        assert!(a < 1e-28);
        assert_relative_eq!(b, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn wide_systems_have_zero_lower_bound() {
        let f = VectorSequence::from_real_fn(2, 3, |r, c| (r + 2 * c + 1) as f64).unwrap();
        let (a, _) = riesz_bounds(&f).unwrap();
        assert_eq!(a, 0.0);
        assert_eq!(classify(&f).unwrap().kind, VerdictKind::LinearlyDependent);
    }

    #[test]
    fn defects() {
        assert_eq!(completeness_defect(&VectorSequence::identity(4).unwrap()), 0);
        let young = generators::young_example(4).unwrap();
        assert_eq!(completeness_defect(&young.f), 1);
        assert_eq!(completeness_defect(young.g.as_ref().unwrap()), 1);
    }

    #[test]
    fn span_distance_young_closed_form() {
        for n in [4usize, 9] {
            let young = generators::young_example(n).unwrap();
            let e1 = young.f.ambient().basis_vector(0);
            let d = span_distance(&young.f, &e1).unwrap();
            assert_relative_eq!(d, 1.0 / ((n + 1) as f64).sqrt(), max_relative = 1e-12);
            let dg = span_distance(young.g.as_ref().unwrap(), &e1).unwrap();
            assert_relative_eq!(dg, 1.0, max_relative = 1e-12);
        }
        let f = VectorSequence::identity(3).unwrap();
        let h = CVector::from_element(3, C64::new(1.0, -2.0));
        assert!(span_distance(&f, &h).unwrap() < 1e-14);
        assert!(matches!(
            span_distance(&f, &CVector::zeros(2)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn gram_spectrum_cases() {
        let s = gram_spectrum(&VectorSequence::identity(3).unwrap()).unwrap();
        assert!(s.bijective);
        assert_relative_eq!(s.lambda_min, 1.0, epsilon = 1e-14);
        let s = gram_spectrum(&e1_twice()).unwrap();
        assert!(!s.bijective);
        assert!(s.lambda_min.abs() < 1e-14);
        assert_relative_eq!(s.lambda_max, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn biorthogonality_cases() {
        let id = VectorSequence::identity(4).unwrap();
        assert_eq!(biorthogonality_residual(&id, &id).unwrap(), 0.0);
        let pair = generators::weighted_pair(6).unwrap();
        assert!(biorthogonality_residual(&pair.f, pair.g.as_ref().unwrap()).unwrap() < 1e-15);
        let young = generators::young_example(4).unwrap();
        assert_eq!(
            biorthogonality_residual(&young.f, young.g.as_ref().unwrap()).unwrap(),
            0.0
        );
        assert!(biorthogonality_residual(&id, &VectorSequence::identity(3).unwrap()).is_err());
    }

    #[test]
    fn equivalent_inner_product_cases() {
        let w = equivalent_inner_product(&VectorSequence::identity(3).unwrap()).unwrap();
        assert!((w - CMatrix::identity(3, 3)).norm() < 1e-14);
        let f = diag(&[2.0, 1.0]);
        let w = equivalent_inner_product(&f).unwrap();
        assert_relative_eq!(w[(0, 0)].re, 0.25, max_relative = 1e-14);
        assert_relative_eq!(w[(1, 1)].re, 1.0, max_relative = 1e-14);
        let wg = weighted_gram(&f, &w).unwrap();
        assert!((wg - CMatrix::identity(2, 2)).norm() < 1e-14);

        let young = generators::young_example(4).unwrap();
        assert!(matches!(
            equivalent_inner_product(&young.f),
            Err(Error::NotARieszBasis(_))
        ));
        assert!(matches!(
            equivalent_inner_product(&e1_twice()),
            Err(Error::NotARieszBasis(_))
        ));
    }

    #[test]
    fn classify_cases() {
        let v = classify(&VectorSequence::identity(3).unwrap()).unwrap();
        assert_eq!(v.kind, VerdictKind::RieszBasis);
        assert!(matches!(
            v.routes.dual,
            DualRoute::Evaluated {
                kind: VerdictKind::RieszBasis,
                ..
            }
        ));

        let v = classify(&e1_twice()).unwrap();
        assert_eq!(v.kind, VerdictKind::LinearlyDependent);
        assert_eq!(v.routes.dual, DualRoute::Skipped);

        let young = generators::young_example(4).unwrap();
        let v = classify(&young.f).unwrap();
        assert_eq!(v.kind, VerdictKind::RieszSequenceIncomplete);
        assert_relative_eq!(v.bounds.riesz_lower, 1.0, max_relative = 1e-12);
        assert_eq!(v.bounds.completeness_defect, 1);
        assert!(v.routes.gram.resolved);
    }

    #[test]
    fn bounds_report_invariants() {
        let r = bounds_report(&diag(&[3.0, 0.5]));
        assert!(r.riesz_lower <= r.bessel_upper);
        assert_relative_eq!(r.conditioning.unwrap(), 36.0, max_relative = 1e-12);
        assert_eq!(bounds_report(&e1_twice()).completeness_defect, 1);
    }
}
