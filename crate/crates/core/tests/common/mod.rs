//! Brute-force oracles that share no code path with the library kernels.
#![allow(dead_code, clippy::needless_range_loop)]

use rieszlab::{CMatrix, CVector, VectorSequence, C64};

/// Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi on the real
/// symmetric embedding `[[Re, −Im], [Im, Re]]` (each eigenvalue appears twice
/// there; one copy of each pair is returned).
pub fn jacobi_hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let n = a.nrows();
    let size = 2 * n;
    let mut m = vec![vec![0.0f64; size]; size];
    for i in 0..n {
        for j in 0..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            m[i][j] = z.re;
            m[i + n][j + n] = z.re;
            m[i][j + n] = -z.im;
            m[i + n][j] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..size)
            .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let scale: f64 = (0..size).map(|i| m[i][i] * m[i][i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..size {
            for q in p + 1..size {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..size {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..size {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..size).map(|i| m[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

/// Gram matrix assembled entry by entry from explicit sums.
pub fn brute_gram(f: &VectorSequence) -> CMatrix {
    let cols = f.columns();
    let m = f.count();
    CMatrix::from_fn(m, m, |j, k| {
        (0..f.dim()).fold(C64::new(0.0, 0.0), |acc, r| acc + cols[(r, k)] * cols[(r, j)].conj())
    })
}

/// Extremal eigenvalues of the brute-force Gram matrix.
pub fn oracle_bounds(f: &VectorSequence) -> (f64, f64) {
    let ev = jacobi_hermitian_eigenvalues(&brute_gram(f));
    (ev[0], ev[ev.len() - 1])
}

/// `‖M‖₂ = sqrt(λ_max(Mᴴ M))`.
pub fn oracle_operator_norm(m: &CMatrix) -> f64 {
    let mhm = m.adjoint() * m;
    let ev = jacobi_hermitian_eigenvalues(&mhm);
    ev[ev.len() - 1].max(0.0).sqrt()
}

/// Distance from `h` to the span of the columns by modified Gram-Schmidt with
/// one reorthogonalization pass. Columns whose remainder falls below
/// `drop_tol · ‖column‖` are treated as dependent.
pub fn oracle_span_distance(f: &VectorSequence, h: &CVector, drop_tol: f64) -> f64 {
    let mut basis: Vec<CVector> = Vec::new();
    for k in 0..f.count() {
        let original = f.member(k);
        let mut v = original.clone();
        for _ in 0..2 {
            for q in &basis {
                let coeff = q.dotc(&v);
                v -= q * coeff;
            }
        }
        let norm = v.norm();
        if norm > drop_tol * original.norm().max(1e-300) {
            basis.push(v / C64::new(norm, 0.0));
        }
    }
    let mut r = h.clone();
    for _ in 0..2 {
        for q in &basis {
            let coeff = q.dotc(&r);
            r -= q * coeff;
        }
    }
    r.norm()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
