//! Cyclic complex Jacobi eigensolver for small dense Hermitian matrices.

use crate::error::{Error, Result};

use super::matrix::{CMatrix, C64};

/// Input must be Hermitian to this tolerance.
pub const EIG_HERMITIAN_TOL: f64 = 1e-8;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this
/// fraction of the input norm.
pub const EIG_REL_TOL: f64 = 1e-12;
pub const EIG_MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub basis: CMatrix,
}

impl Spectrum {
    /// Column `k` of the basis.
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.basis.dim()).map(|i| self.basis[(i, k)]).collect()
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let d = self.basis.dim();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| self.basis[(i, k)] * fl[k] * self.basis[(j, k)].conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| l)
    }
}

pub fn hermitian_eig(h: &CMatrix) -> Result<Spectrum> {
    let d = h.dim();
    let herr = h.hermiticity_error();
    if !(herr <= EIG_HERMITIAN_TOL) {
        return Err(Error::InvalidState(format!(
            "matrix is not Hermitian (deviation {herr:e})"
        )));
    }
    let mut a = h.hermitian_part();
    let mut v = CMatrix::identity(d);
    let norm = a.frobenius_norm();
    let threshold = EIG_REL_TOL * norm;

    let mut converged = false;
    for _ in 0..=EIG_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {EIG_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let basis = CMatrix::from_fn(d, |i, k| v[(i, order[k])]);
    Ok(Spectrum { eigenvalues, basis })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let d = a.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Zeroes `a[p][q]` with `a ← J† a J`, `v ← v J`, where `J` is a phase
/// correction on `q` followed by a real plane rotation in `(p, q)`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let phase = apq / abs;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let d = a.dim();
    for k in 0..d {
        let (xp, xq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = xp * jpp + xq * jqp;
        a[(k, q)] = xp * jpq + xq * jqq;
    }
    for k in 0..d {
        let (xp, xq) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * xp + jqp.conj() * xq;
        a[(q, k)] = jpq.conj() * xp + jqq.conj() * xq;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..d {
        let (xp, xq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = xp * jpp + xq * jqp;
        v[(k, q)] = xp * jpq + xq * jqq;
    }
}
