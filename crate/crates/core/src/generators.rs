//! Constructors for the named systems: orthonormal bases, images of bases under
//! invertible operators, the weighted and alternating diagonal pairs, Young's
//! complete/incomplete biorthogonal pair, and Gaussian Gabor systems on point
//! sets in the time-frequency plane.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{self, CMatrix, CVector, VectorSequence, C64};

/// Seeded random operators are redrawn until their condition number is at most this.
pub const MAX_RANDOM_CONDITION: f64 = 1e6;

/// Nodes must satisfy `|τ| ≤ X − SAFE_MARGIN` on a grid covering `[−X, X]`.
pub const SAFE_MARGIN: f64 = 3.0;

/// `‖e^{−πx²}‖_{L²} = 2^{−1/4}`.
pub fn gaussian_l2_norm() -> f64 {
    2f64.powf(-0.25)
}

/// A system `F` together with the biorthogonal partner the construction names, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedPair {
    pub f: VectorSequence,
    pub g: Option<VectorSequence>,
}

impl GeneratedPair {
    fn new(f: VectorSequence, g: Option<VectorSequence>) -> Result<Self> {
        if let Some(g) = &g {
            if g.dim() != f.dim() || g.count() != f.count() {
                return Err(Error::Shape("paired sequences must share shape".into()));
            }
        }
        Ok(Self { f, g })
    }
}

pub fn orthonormal(n: usize) -> Result<VectorSequence> {
    VectorSequence::identity(n)
}

/// The columns `(V e_k)_k` of an invertible operator.
pub fn riesz_from_operator(v: &CMatrix) -> Result<VectorSequence> {
    if v.nrows() != v.ncols() {
        return Err(Error::Dimension {
            context: "square operator",
            expected: v.nrows(),
            actual: v.ncols(),
        });
    }
    let f = VectorSequence::new(v.clone())?;
    let sigma = f.singular_values();
    let tolerance = seqcore::rank_tolerance(sigma[0], f.dim(), f.count());
    let sigma_min = sigma[sigma.len() - 1];
    if sigma_min <= tolerance {
        return Err(Error::SingularOperator { sigma_min, tolerance });
    }
    Ok(f)
}

/// Entries with independent `N(0, 1/2)` real and imaginary parts.
pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(scale * re, scale * im)
    })
}

/// Seeded complex Gaussian operator with condition number at most
/// [`MAX_RANDOM_CONDITION`] (rejection sampling).
pub fn random_operator(n: usize, seed: u64) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Shape("operator dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = random_complex_matrix(&mut rng, n, n);
        let sigma = crate::spectral::singular_values(&v);
        let sigma_min = sigma[n - 1];
        if sigma_min > 0.0 && sigma[0] / sigma_min <= MAX_RANDOM_CONDITION {
            return Ok(v);
        }
    }
}

pub fn random_riesz(n: usize, seed: u64) -> Result<VectorSequence> {
    riesz_from_operator(&random_operator(n, seed)?)
}

/// Seeded unitary from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary(n: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_complex_matrix(&mut rng, n, n);
    let qr = a.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phases so the distribution does not depend on QR sign conventions
    let phases = DVector::from_fn(n, |k, _| {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        }
    });
    q * CMatrix::from_diagonal(&phases)
}

fn diagonal_sequence(weights: impl Fn(usize) -> f64, n: usize) -> Result<VectorSequence> {
    VectorSequence::from_real_fn(n, n, |r, c| if r == c { weights(r + 1) } else { 0.0 })
}

/// `F = (e_k / k)`, `G = (k e_k)`: biorthogonal, only `F` is Bessel in the limit.
pub fn weighted_pair(n: usize) -> Result<GeneratedPair> {
    GeneratedPair::new(
        diagonal_sequence(|k| 1.0 / k as f64, n)?,
        Some(diagonal_sequence(|k| k as f64, n)?),
    )
}

/// `F = (e₁, 2e₂, e₃/3, 4e₄, …)`, `G = (e₁, e₂/2, 3e₃, e₄/4, …)`: neither is Bessel in the limit.
pub fn alternating_weighted_pair(n: usize) -> Result<GeneratedPair> {
    let up = |k: usize| if k.is_multiple_of(2) { k as f64 } else { 1.0 / k as f64 };
    let down = |k: usize| if k.is_multiple_of(2) { 1.0 / k as f64 } else { k as f64 };
    GeneratedPair::new(diagonal_sequence(up, n)?, Some(diagonal_sequence(down, n)?))
}

/// `F = (e_k + e₁)_{k=2..N+1}`, `G = (e_k)_{k=2..N+1}` in dimension `N + 1`.
pub fn young_example(n: usize) -> Result<GeneratedPair> {
    young_general(n, 1, n)
}

/// Young's construction with `K = span(e_{c+1}, …, e_{c+dim_k})` and complement
/// `span(e₁, …, e_c)`: `g_k` runs through the basis of `K` and `y_k` cycles
/// through the complement basis, `f_k = g_k + y_k`, for `k = 1..n`.
pub fn young_general(dim_k: usize, complement_dim: usize, n: usize) -> Result<GeneratedPair> {
    if dim_k == 0 || complement_dim == 0 || n == 0 {
        return Err(Error::Dimension {
            context: "Young construction needs a nonzero proper subspace and at least one member",
            expected: 1,
            actual: 0,
        });
    }
    if n > dim_k {
        return Err(Error::Dimension {
            context: "Young construction members vs subspace dimension",
            expected: dim_k,
            actual: n,
        });
    }
    let dim = dim_k + complement_dim;
    let g = VectorSequence::from_real_fn(dim, n, |r, k| if r == complement_dim + k { 1.0 } else { 0.0 })?;
    let f = VectorSequence::from_real_fn(dim, n, |r, k| {
        if r == complement_dim + k || r == k % complement_dim {
            1.0
        } else {
            0.0
        }
    })?;
    GeneratedPair::new(f, Some(g))
}

/// A node `(τ, μ)`: time shift and frequency shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TfNode {
    pub tau: f64,
    pub mu: f64,
}

impl TfNode {
    pub fn new(tau: f64, mu: f64) -> Self {
        Self { tau, mu }
    }

    fn distance(&self, other: &TfNode) -> f64 {
        (self.tau - other.tau).hypot(self.mu - other.mu)
    }
}

/// Pairwise distinct nodes in the time-frequency plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet2D {
    nodes: Vec<TfNode>,
    separation: f64,
}

impl PointSet2D {
    pub fn new(nodes: Vec<TfNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::PointSet("empty point set".into()));
        }
        if let Some(bad) = nodes.iter().find(|p| !(p.tau.is_finite() && p.mu.is_finite())) {
            return Err(Error::PointSet(format!("non-finite node ({}, {})", bad.tau, bad.mu)));
        }
        let mut separation = f64::INFINITY;
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                separation = separation.min(a.distance(b));
            }
        }
        if separation <= 0.0 {
            return Err(Error::PointSet("nodes must be pairwise distinct".into()));
        }
        Ok(Self { nodes, separation })
    }

    pub fn nodes(&self) -> &[TfNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Minimum pairwise distance; infinite for a single node.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn contains(&self, node: TfNode) -> bool {
        self.nodes.iter().any(|p| p.distance(&node) == 0.0)
    }

    pub fn max_abs_tau(&self) -> f64 {
        self.nodes.iter().map(|p| p.tau.abs()).fold(0.0, f64::max)
    }
}

/// All `(j a, k b)` with `|j|, |k| ≤ max_index`.
pub fn lattice_points(a: f64, b: f64, max_index: usize) -> Result<PointSet2D> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::PointSet("lattice spacings must be positive".into()));
    }
    let m = max_index as i64;
    let mut nodes = Vec::with_capacity((2 * max_index + 1).pow(2));
    for j in -m..=m {
        for k in -m..=m {
            nodes.push(TfNode::new(j as f64 * a, k as f64 * b));
        }
    }
    PointSet2D::new(nodes)
}

/// The integer lattice window with `(1, 0)` removed.
pub fn punctured_lattice(max_index: usize) -> Result<PointSet2D> {
    if max_index == 0 {
        return Err(Error::PointSet("punctured lattice needs max_index >= 1".into()));
    }
    let full = lattice_points(1.0, 1.0, max_index)?;
    let puncture = TfNode::new(1.0, 0.0);
    PointSet2D::new(full.nodes.into_iter().filter(|p| *p != puncture).collect())
}

/// `{(±1, 0)} ∪ {(0, ±√(2n))} ∪ {(±√(2n), 0)}` for `n = 1..n_max`.
pub fn als_point_set(n_max: usize) -> Result<PointSet2D> {
    if n_max == 0 {
        return Err(Error::PointSet("ALS point set needs n_max >= 1".into()));
    }
    let mut nodes = vec![TfNode::new(-1.0, 0.0), TfNode::new(1.0, 0.0)];
    for n in 1..=n_max {
        let r = (2.0 * n as f64).sqrt();
        nodes.extend([
            TfNode::new(0.0, r),
            TfNode::new(0.0, -r),
            TfNode::new(r, 0.0),
            TfNode::new(-r, 0.0),
        ]);
    }
    PointSet2D::new(nodes)
}

/// Uniform grid on `[−X, X]` with step `1/s`, scaled by `√(1/s)` so that
/// discrete inner products are Riemann sums of `L²(ℝ)` inner products.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GaborDiscretization {
    half_width: f64,
    samples_per_unit: usize,
}

impl GaborDiscretization {
    pub fn new(half_width: f64, samples_per_unit: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) || samples_per_unit == 0 {
            return Err(Error::Discretization(format!(
                "need half_width > 0 and samples_per_unit >= 1, got {half_width} and {samples_per_unit}"
            )));
        }
        let intervals = 2.0 * half_width * samples_per_unit as f64;
        if (intervals - intervals.round()).abs() > 1e-9 {
            return Err(Error::Discretization(format!(
                "2·X·s = {intervals} must be an integer so the grid hits ±X"
            )));
        }
        Ok(Self {
            half_width,
            samples_per_unit,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn samples_per_unit(&self) -> usize {
        self.samples_per_unit
    }

    pub fn grid_step(&self) -> f64 {
        1.0 / self.samples_per_unit as f64
    }

    pub fn normalization(&self) -> f64 {
        self.grid_step().sqrt()
    }

    /// `2 X s + 1` grid points, endpoints included.
    pub fn sample_count(&self) -> usize {
        (2.0 * self.half_width * self.samples_per_unit as f64).round() as usize + 1
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let step = self.grid_step();
        (0..self.sample_count()).map(move |l| -self.half_width + l as f64 * step)
    }

    pub fn safe_limit(&self) -> f64 {
        self.half_width - SAFE_MARGIN
    }

    /// The discretized atom `e^{2πiμx} e^{−π(x−τ)²}`.
    pub fn atom(&self, node: TfNode) -> Result<CVector> {
        if node.tau.abs() > self.safe_limit() {
            return Err(Error::Truncation {
                tau: node.tau,
                mu: node.mu,
                limit: self.safe_limit(),
            });
        }
        let scale = self.normalization();
        let values: Vec<C64> = self
            .grid()
            .map(|x| {
                let envelope = (-PI * (x - node.tau).powi(2)).exp();
                C64::from_polar(scale * envelope, 2.0 * PI * node.mu * x)
            })
            .collect();
        Ok(CVector::from_vec(values))
    }
}

/// One discretized Gaussian atom per node.
pub fn gaussian_gabor(points: &PointSet2D, disc: &GaborDiscretization) -> Result<VectorSequence> {
    let columns = points
        .nodes()
        .iter()
        .map(|&node| disc.atom(node))
        .collect::<Result<Vec<_>>>()?;
    VectorSequence::from_columns(&columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{bessel_bound, biorthogonality_residual, classify, riesz_bounds, VerdictKind};
    use crate::duals::{duality_identity_residual, minimal_dual};
    use crate::seqcore::{gram, inner};
    use approx::assert_relative_eq;

    #[test]
    fn orthonormal_gram_is_identity() {
        for n in [1, 3, 7] {
            let f = orthonormal(n).unwrap();
            assert_eq!(f.count(), n);
            assert_eq!(gram(&f).entries(), &CMatrix::identity(n, n));
        }
    }

    #[test]
    fn riesz_from_operator_cases() {
        let f = riesz_from_operator(&CMatrix::identity(3, 3)).unwrap();
        assert_eq!(f, orthonormal(3).unwrap());
        let v = CMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(2.0, 0.0), C64::new(1.0, 0.0)]));
        let (a, b) = riesz_bounds(&riesz_from_operator(&v).unwrap()).unwrap();
        assert_relative_eq!(a, 1.0, max_relative = 1e-12);
        assert_relative_eq!(b, 4.0, max_relative = 1e-12);
        let singular = CMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(matches!(
            riesz_from_operator(&singular),
            Err(Error::SingularOperator { .. })
        ));
        assert!(riesz_from_operator(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn seeded_riesz_is_reproducible_and_dualizable() {
        let a = random_riesz(8, 7).unwrap();
        let b = random_riesz(8, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_riesz(8, 8).unwrap());
        let g = minimal_dual(&a).unwrap();
        assert!(duality_identity_residual(&a, &g).unwrap() <= 1e-8);
        assert_eq!(classify(&a).unwrap().kind, VerdictKind::RieszBasis);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let u = random_unitary(6, 3);
        assert!((u.adjoint() * &u - CMatrix::identity(6, 6)).camax() < 1e-13);
    }

    #[test]
    fn weighted_pairs() {
        let p = weighted_pair(1).unwrap();
        assert_eq!(p.f, p.g.clone().unwrap());
        let p = weighted_pair(5).unwrap();
        assert_relative_eq!(bessel_bound(&p.f).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(bessel_bound(p.g.as_ref().unwrap()).unwrap(), 25.0, max_relative = 1e-12);

        let p = alternating_weighted_pair(2).unwrap();
        assert_eq!(p.f.columns()[(1, 1)].re, 2.0);
        assert_eq!(p.g.as_ref().unwrap().columns()[(1, 1)].re, 0.5);
        let p = alternating_weighted_pair(5).unwrap();
        assert_relative_eq!(bessel_bound(&p.f).unwrap(), 16.0, max_relative = 1e-12);
        assert_relative_eq!(bessel_bound(p.g.as_ref().unwrap()).unwrap(), 25.0, max_relative = 1e-12);
        for n in 1..12 {
            let p = alternating_weighted_pair(n).unwrap();
            assert!(biorthogonality_residual(&p.f, p.g.as_ref().unwrap()).unwrap() <= 1e-15);
        }
    }

    #[test]
    fn young_shapes() {
        let p = young_example(1).unwrap();
        assert_eq!((p.f.dim(), p.f.count()), (2, 1));
        assert_eq!(p.f.member(0).as_slice(), &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        let p = young_example(4).unwrap();
        assert_eq!((p.f.dim(), p.f.count()), (5, 4));
        assert_relative_eq!(bessel_bound(&p.f).unwrap(), 5.0, max_relative = 1e-12);
        assert_relative_eq!(bessel_bound(p.g.as_ref().unwrap()).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn young_general_cases() {
        assert_eq!(young_general(4, 1, 4).unwrap(), young_example(4).unwrap());
        let p = young_general(4, 2, 4).unwrap();
        let g = p.g.as_ref().unwrap();
        assert_eq!(p.f.dim(), 6);
        assert_eq!(biorthogonality_residual(&p.f, g).unwrap(), 0.0);
        assert_relative_eq!(bessel_bound(g).unwrap(), 1.0, max_relative = 1e-14);
        // y_k cycles e1, e2, e1, e2
        assert_eq!(p.f.columns()[(0, 2)].re, 1.0);
        assert_eq!(p.f.columns()[(1, 3)].re, 1.0);
        assert!(young_general(3, 1, 4).is_err());
        assert!(young_general(3, 0, 2).is_err());
    }

    #[test]
    fn point_sets() {
        let l = lattice_points(1.0, 1.0, 1).unwrap();
        assert_eq!(l.len(), 9);
        assert_eq!(l.separation(), 1.0);
        assert_eq!(lattice_points(1.0, 1.0, 2).unwrap().len(), 25);
        assert_eq!(lattice_points(0.5, 2.0, 1).unwrap().separation(), 0.5);

        let p = punctured_lattice(1).unwrap();
        assert_eq!(p.len(), 8);
        assert!(!p.contains(TfNode::new(1.0, 0.0)));
        assert!(p.contains(TfNode::new(-1.0, 0.0)));
        assert_eq!(punctured_lattice(2).unwrap().len(), 24);

        let a = als_point_set(1).unwrap();
        assert_eq!(a.len(), 6);
        assert!(a.contains(TfNode::new(0.0, 2f64.sqrt())));
        for n in 1..10 {
            assert_eq!(als_point_set(n).unwrap().len(), 2 + 4 * n);
        }
        assert!(PointSet2D::new(vec![TfNode::new(0.0, 0.0), TfNode::new(0.0, 0.0)]).is_err());
        assert!(PointSet2D::new(vec![]).is_err());
    }

    #[test]
    fn discretization_invariants() {
        let d = GaborDiscretization::new(6.0, 16).unwrap();
        assert_eq!(d.sample_count(), 193);
        assert_relative_eq!(
            d.grid_step() * (d.sample_count() - 1) as f64,
            12.0,
            max_relative = 1e-14
        );
        let last = d.grid().last().unwrap();
        assert_relative_eq!(last, 6.0, max_relative = 1e-14);
        assert!(GaborDiscretization::new(6.1, 1).is_err());
        assert!(GaborDiscretization::new(0.0, 4).is_err());
        assert!(GaborDiscretization::new(6.0, 0).is_err());
    }

    #[test]
    fn gaussian_column_norm_and_shifts() {
        let d = GaborDiscretization::new(6.0, 16).unwrap();
        let one = PointSet2D::new(vec![TfNode::new(0.0, 0.0)]).unwrap();
        let f = gaussian_gabor(&one, &d).unwrap();
        assert!((f.member(0).norm() - gaussian_l2_norm()).abs() < 1e-6);

        let expected = 0.5f64.sqrt() * (-PI / 2.0).exp();
        for other in [TfNode::new(1.0, 0.0), TfNode::new(0.0, 1.0)] {
            let pts = PointSet2D::new(vec![TfNode::new(0.0, 0.0), other]).unwrap();
            let f = gaussian_gabor(&pts, &d).unwrap();
            let ip = inner(&f.member(0), &f.member(1)).norm();
            assert!((ip - expected).abs() < 1e-5, "{ip} vs {expected}");
        }
    }

    #[test]
    fn truncation_window() {
        let d = GaborDiscretization::new(6.0, 16).unwrap();
        let pts = PointSet2D::new(vec![TfNode::new(3.5, 0.0)]).unwrap();
        let err = gaussian_gabor(&pts, &d).unwrap_err();
        assert!(matches!(err, Error::Truncation { tau, .. } if tau == 3.5));
        assert!(gaussian_gabor(&punctured_lattice(3).unwrap(), &d).is_ok());
    }
}
