//! Finite model of sequences in a separable Hilbert space.
//!
//! The space is complex `n`-space and a sequence `(f_k)` is truncated to `m`
//! members stored as the columns of an `n × m` matrix. Every module shares one
//! inner-product convention,
//!
//! ```text
//! ⟨x, y⟩ = yᴴ x
//! ```
//!
//! linear in the first slot and conjugate-linear in the second, so the analysis
//! coefficients of `h` are `(⟨h, f_k⟩)_k = Fᴴ h` and the Gram entry `(j, k)` is
//! `⟨f_k, f_j⟩ = (Fᴴ F)_{jk}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative factor of the shared numerical rank threshold
/// `σ_max · max(n, m) · RANK_TOLERANCE_FACTOR`.
pub const RANK_TOLERANCE_FACTOR: f64 = 1e-12;

/// Hermitian check on Gram matrices, relative to the largest entry.
pub const GRAM_HERMITIAN_TOLERANCE: f64 = 1e-12;

/// PSD check on Gram matrices, relative to the largest eigenvalue.
pub const GRAM_PSD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientSpace {
    dim: usize,
}

impl AmbientSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("ambient dimension must be at least 1".into()));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `k`-th standard basis vector (zero-based).
    pub fn basis_vector(&self, k: usize) -> CVector {
        let mut e = CVector::zeros(self.dim);
        e[k] = C64::new(1.0, 0.0);
        e
    }
}

/// A truncated sequence `(f_k)_{k=1..m}` held as the columns of an `n × m` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSequence {
    columns: CMatrix,
}

impl VectorSequence {
    pub fn new(columns: CMatrix) -> Result<Self> {
        if columns.nrows() == 0 || columns.ncols() == 0 {
            return Err(Error::Shape(format!(
                "a sequence needs dim >= 1 and count >= 1, got {}x{}",
                columns.nrows(),
                columns.ncols()
            )));
        }
        for col in 0..columns.ncols() {
            for row in 0..columns.nrows() {
                let z = columns[(row, col)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self { columns })
    }

    pub fn from_columns(columns: &[CVector]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::Shape("a sequence needs at least one member".into()));
        };
        let dim = first.len();
        for c in columns {
            if c.len() != dim {
                return Err(Error::Dimension {
                    context: "sequence member length",
                    expected: dim,
                    actual: c.len(),
                });
            }
        }
        Self::new(CMatrix::from_columns(columns))
    }

    /// Builds a real-valued sequence from an entry function `(row, col) -> value`.
    pub fn from_real_fn(dim: usize, count: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(CMatrix::from_fn(dim, count, |r, c| C64::new(f(r, c), 0.0)))
    }

    /// Identity columns `(e_k)_{k=1..n}`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(CMatrix::identity(n, n))
    }

    pub fn ambient(&self) -> AmbientSpace {
        AmbientSpace {
            dim: self.columns.nrows(),
        }
    }

    pub fn dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn count(&self) -> usize {
        self.columns.ncols()
    }

    pub fn columns(&self) -> &CMatrix {
        &self.columns
    }

    pub fn into_columns(self) -> CMatrix {
        self.columns
    }

    pub fn member(&self, k: usize) -> CVector {
        self.columns.column(k).into_owned()
    }

    /// `(α f_k)_k`.
    pub fn scaled(&self, alpha: C64) -> Result<Self> {
        Self::new(&self.columns * alpha)
    }

    /// `(V f_k)_k` for an `n × n` operator `V`.
    pub fn transformed(&self, operator: &CMatrix) -> Result<Self> {
        if operator.nrows() != operator.ncols() || operator.ncols() != self.dim() {
            return Err(Error::Dimension {
                context: "operator applied to sequence",
                expected: self.dim(),
                actual: operator.ncols(),
            });
        }
        Self::new(operator * &self.columns)
    }

    /// Members of `self` followed by members of `other`.
    pub fn concatenated(&self, other: &VectorSequence) -> Result<Self> {
        check_same_ambient(self, other, "concatenation")?;
        let mut joined = CMatrix::zeros(self.dim(), self.count() + other.count());
        joined.columns_mut(0, self.count()).copy_from(&self.columns);
        joined
            .columns_mut(self.count(), other.count())
            .copy_from(&other.columns);
        Self::new(joined)
    }

    /// Singular values of the synthesis matrix, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        spectral::singular_values(&self.columns)
    }

    /// The shared rank threshold `σ_max · max(n, m) · 1e-12`.
    pub fn rank_tolerance(&self) -> f64 {
        let sigma = self.singular_values();
        rank_tolerance(sigma.first().copied().unwrap_or(0.0), self.dim(), self.count())
    }

    pub fn numerical_rank(&self) -> usize {
        numerical_rank(&self.singular_values(), self.dim(), self.count())
    }
}

pub fn rank_tolerance(sigma_max: f64, dim: usize, count: usize) -> f64 {
    sigma_max * dim.max(count) as f64 * RANK_TOLERANCE_FACTOR
}

/// Number of singular values above the shared rank threshold.
pub fn numerical_rank(singular_values: &[f64], dim: usize, count: usize) -> usize {
    let sigma_max = singular_values.iter().copied().fold(0.0, f64::max);
    let tol = rank_tolerance(sigma_max, dim, count);
    singular_values.iter().filter(|&&s| s > tol).count()
}

pub(crate) fn check_same_shape(f: &VectorSequence, g: &VectorSequence, context: &'static str) -> Result<()> {
    check_same_ambient(f, g, context)?;
    if f.count() != g.count() {
        return Err(Error::Dimension {
            context,
            expected: f.count(),
            actual: g.count(),
        });
    }
    Ok(())
}

fn check_same_ambient(f: &VectorSequence, g: &VectorSequence, context: &'static str) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::Dimension {
            context,
            expected: f.dim(),
            actual: g.dim(),
        });
    }
    Ok(())
}

/// Finite model of a coefficient sequence `(c_k) ∈ ℓ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(CVector);

impl CoefficientVector {
    pub fn new(entries: CVector) -> Result<Self> {
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(Self(entries))
    }

    pub fn from_slice(entries: &[C64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(CVector::zeros(len))
    }

    /// The unit coefficient vector `δ_k` (zero-based `k`).
    pub fn unit(len: usize, k: usize) -> Self {
        let mut c = CVector::zeros(len);
        c[k] = C64::new(1.0, 0.0);
        Self(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &CVector {
        &self.0
    }

    pub fn into_entries(self) -> CVector {
        self.0
    }
}

/// The `m × m` Gram matrix, entry `(j, k) = ⟨f_k, f_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: CMatrix,
}

impl GramMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// `‖G − Gᴴ‖_max`.
    pub fn hermitian_defect(&self) -> f64 {
        let adj = self.entries.adjoint();
        (&self.entries - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        spectral::hermitian_eigenvalues(&self.entries)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= GRAM_HERMITIAN_TOLERANCE * self.max_abs_entry()
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        let ev = self.eigenvalues();
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        lo >= -GRAM_PSD_TOLERANCE * hi.max(0.0)
    }
}

/// `⟨x, y⟩ = yᴴ x`.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    y.dotc(x)
}

/// `T_F c = Σ_k c_k f_k`.
pub fn synthesis(f: &VectorSequence, c: &CoefficientVector) -> Result<CVector> {
    if c.len() != f.count() {
        return Err(Error::Dimension {
            context: "synthesis coefficients",
            expected: f.count(),
            actual: c.len(),
        });
    }
    Ok(f.columns() * c.entries())
}

/// `T_F* h = (⟨h, f_k⟩)_k`.
pub fn analysis(f: &VectorSequence, h: &CVector) -> Result<CoefficientVector> {
    check_ambient_vector(f, h, "analysis input")?;
    Ok(CoefficientVector(f.columns().ad_mul(h)))
}

pub fn gram(f: &VectorSequence) -> GramMatrix {
    GramMatrix {
        entries: f.columns().ad_mul(f.columns()),
    }
}

/// `T_F T_F* h = Σ_k ⟨h, f_k⟩ f_k`.
pub fn frame_apply(f: &VectorSequence, h: &CVector) -> Result<CVector> {
    let coeffs = analysis(f, h)?;
    synthesis(f, &coeffs)
}

pub(crate) fn check_ambient_vector(f: &VectorSequence, h: &CVector, context: &'static str) -> Result<()> {
    if h.len() != f.dim() {
        return Err(Error::Dimension {
            context,
            expected: f.dim(),
            actual: h.len(),
        });
    }
    Ok(())
}
