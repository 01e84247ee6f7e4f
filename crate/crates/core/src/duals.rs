//! Biorthogonal duals and the reconstruction identity they satisfy.
//!
//! For linearly independent `F` the biorthogonal partners are not unique when
//! `span(F)` is a proper subspace; [`minimal_dual`] always returns the one whose
//! members lie in `span(F)`, which is also the one with least column norms.

use nalgebra::{Cholesky, SVD};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{biorthogonality_residual, completeness_defect};
use crate::error::{Error, Result};
use crate::seqcore::{self, gram, CMatrix, CoefficientVector, VectorSequence};
use crate::spectral;

/// Accuracy contract for dual construction and biorthogonality checks.
pub const DUAL_TOLERANCE: f64 = 1e-8;

/// Above this Gram condition number the dual is taken from a QR factorization
/// of the synthesis matrix instead of a Cholesky solve with the Gram matrix.
pub const GRAM_SOLVE_CONDITION_LIMIT: f64 = 1e8;

/// `G = F · gram(F)⁻¹`.
pub fn minimal_dual(f: &VectorSequence) -> Result<VectorSequence> {
    let sigma = f.singular_values();
    let tolerance = seqcore::rank_tolerance(sigma[0], f.dim(), f.count());
    let sigma_min = if f.count() > f.dim() { 0.0 } else { sigma[f.count() - 1] };
    if sigma_min <= tolerance {
        return Err(Error::NoBiorthogonalSequence { sigma_min, tolerance });
    }
    let condition = (sigma[0] / sigma_min).powi(2);

    let by_cholesky = if condition <= GRAM_SOLVE_CONDITION_LIMIT {
        Cholesky::new(gram(f).into_entries()).map(|chol| chol.solve(&f.columns().adjoint()).adjoint())
    } else {
        None
    };
    let columns = match by_cholesky {
        Some(columns) => columns,
        None => dual_from_qr(f.columns()),
    };

    let g = VectorSequence::new(columns)?;
    let residual = biorthogonality_residual(f, &g)?;
    if residual > DUAL_TOLERANCE {
        return Err(Error::IllConditioned {
            residual,
            limit: DUAL_TOLERANCE,
            condition,
        });
    }
    Ok(g)
}

/// `Q R⁻ᴴ` from the thin QR factorization `F = Q R`; needs `count <= dim` and
/// full column rank.
fn dual_from_qr(columns: &CMatrix) -> CMatrix {
    let m = columns.ncols();
    let qr = columns.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let r_inv = r
        .solve_upper_triangular(&CMatrix::identity(m, m))
        .expect("independent columns give an invertible R");
    q * r_inv.adjoint()
}

/// Operator norm `‖T_F T_G* − I‖`, where `T_F T_G* h = Σ_k ⟨h, g_k⟩ f_k`.
pub fn duality_identity_residual(f: &VectorSequence, g: &VectorSequence) -> Result<f64> {
    seqcore::check_same_shape(f, g, "duality identity pair")?;
    let n = f.dim();
    let reconstruction = f.columns() * g.columns().adjoint();
    Ok(spectral::spectral_norm(&(reconstruction - CMatrix::identity(n, n))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoCompleteness {
    pub defect_f: usize,
    pub defect_g: usize,
    pub equal: bool,
}

/// Completeness defects of `F` and of its minimal dual.
pub fn co_completeness_check(f: &VectorSequence) -> Result<CoCompleteness> {
    let g = minimal_dual(f)?;
    let defect_f = completeness_defect(f);
    let defect_g = completeness_defect(&g);
    Ok(CoCompleteness {
        defect_f,
        defect_g,
        equal: defect_f == defect_g,
    })
}

/// `(⟨T_F c, g_j⟩)_j`, which recovers `c` for a biorthogonal pair.
pub fn injectivity_witness(f: &VectorSequence, g: &VectorSequence, c: &CoefficientVector) -> Result<CoefficientVector> {
    let residual = biorthogonality_residual(f, g)?;
    if residual > DUAL_TOLERANCE {
        return Err(Error::NotBiorthogonal {
            residual,
            limit: DUAL_TOLERANCE,
        });
    }
    let image = seqcore::synthesis(f, c)?;
    seqcore::analysis(g, &image)
}

/// Component of each dual member orthogonal to `span(F)`, as the largest norm.
pub fn off_span_component(f: &VectorSequence, g: &VectorSequence) -> Result<f64> {
    seqcore::check_same_shape(f, g, "off-span projection")?;
    let svd = SVD::new(f.columns().clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let tol = f.rank_tolerance();
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let basis = u.columns(0, rank);
    let projected = basis * basis.ad_mul(g.columns());
    let off = g.columns() - projected;
    Ok(off.column_iter().map(|col| col.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{classify, VerdictKind};
    use crate::generators;
    use crate::seqcore::C64;
    use approx::assert_relative_eq;

    fn unit(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_is_self_dual() {
        let id = VectorSequence::identity(4).unwrap();
        let g = minimal_dual(&id).unwrap();
        assert!((g.columns() - id.columns()).norm() < 1e-15);
        assert_eq!(duality_identity_residual(&id, &id).unwrap(), 0.0);
        let cc = co_completeness_check(&id).unwrap();
        assert_eq!((cc.defect_f, cc.defect_g, cc.equal), (0, 0, true));
    }

    #[test]
    fn weighted_dual_is_k_e_k() {
        let pair = generators::weighted_pair(5).unwrap();
        let g = minimal_dual(&pair.f).unwrap();
        assert!((g.columns() - pair.g.unwrap().columns()).camax() < 1e-12);
        let cc = co_completeness_check(&pair.f).unwrap();
        assert_eq!((cc.defect_f, cc.defect_g, cc.equal), (0, 0, true));
    }

    #[test]
    fn two_column_hand_dual() {
        let f = VectorSequence::from_real_fn(2, 2, |r, k| if r == 0 || k == 1 { 1.0 } else { 0.0 }).unwrap();
        let g = minimal_dual(&f).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[unit(1.), unit(0.), unit(-1.), unit(1.)]);
        assert!((g.columns() - expected).camax() < 1e-14);
    }

    #[test]
    fn dependent_columns_have_no_dual() {
        let f = VectorSequence::from_real_fn(3, 2, |r, _| if r == 0 { 1.0 } else { 0.0 }).unwrap();
        assert!(matches!(minimal_dual(&f), Err(Error::NoBiorthogonalSequence { .. })));
        assert!(matches!(
            co_completeness_check(&f),
            Err(Error::NoBiorthogonalSequence { .. })
        ));
        let wide = VectorSequence::identity(2)
            .unwrap()
            .concatenated(&VectorSequence::identity(2).unwrap())
            .unwrap();
        assert!(minimal_dual(&wide).is_err());
    }

    #[test]
    fn young_pair_residuals() {
        let young = generators::young_example(4).unwrap();
        let g = young.g.as_ref().unwrap();
        assert_relative_eq!(
            duality_identity_residual(&young.f, g).unwrap(),
            5f64.sqrt(),
            max_relative = 1e-12
        );
        let cc = co_completeness_check(&young.f).unwrap();
        assert_eq!((cc.defect_f, cc.defect_g, cc.equal), (1, 1, true));

        let c = CoefficientVector::unit(4, 0);
        let back = injectivity_witness(&young.f, g, &c).unwrap();
        assert_eq!(back, c);
        let zero = CoefficientVector::zeros(4);
        assert_eq!(injectivity_witness(&young.f, g, &zero).unwrap(), zero);
    }

    #[test]
    fn minimal_dual_stays_in_span() {
        let young = generators::young_example(6).unwrap();
        let g = minimal_dual(&young.f).unwrap();
        assert!(off_span_component(&young.f, &g).unwrap() <= 1e-10);
        // the designated partner e_k leaves span(F)
        assert!(off_span_component(&young.f, young.g.as_ref().unwrap()).unwrap() > 0.1);
    }

    #[test]
    fn injectivity_rejects_non_biorthogonal() {
        let f = VectorSequence::identity(3).unwrap();
        let g = f.scaled(unit(2.0)).unwrap();
        let err = injectivity_witness(&f, &g, &CoefficientVector::zeros(3)).unwrap_err();
        assert!(matches!(err, Error::NotBiorthogonal { .. }));
    }

    #[test]
    fn alternating_pair_is_riesz_at_finite_size() {
        let pair = generators::alternating_weighted_pair(7).unwrap();
        assert_eq!(classify(&pair.f).unwrap().kind, VerdictKind::RieszBasis);
        let g = minimal_dual(&pair.f).unwrap();
        assert!((g.columns() - pair.g.unwrap().columns()).camax() < 1e-12);
    }

    #[test]
    fn near_singular_pair_uses_stable_route() {
        for d in [1e-6, 1e-9, 1e-11] {
            let f = VectorSequence::from_real_fn(2, 2, |r, k| match (r, k) {
                (0, _) => 1.0,
                (1, 1) => d,
                _ => 0.0,
            })
            .unwrap();
            let g = minimal_dual(&f).unwrap();
            assert!(biorthogonality_residual(&f, &g).unwrap() < 1e-12, "d = {d}");
            // exact inverse-adjoint: g_1 = e_1 - e_2/d, g_2 = e_2/d
            assert!((g.columns()[(1, 0)] + unit(1.0 / d)).norm() <= 1e-12 / d);
        }
    }
}
