//! Relative entropy of entanglement of two-qubit states.
//!
//! `E(ρ) = min_{σ separable} S(ρ‖σ)` is minimized with Frank-Wolfe. The
//! separable two-qubit states are the convex hull of product pure states
//! `|a⟩⟨a| ⊗ |b⟩⟨b|`, so each linear subproblem is a minimization over
//! products, solved heuristically by alternating 2×2 eigenproblems with random
//! restarts. The iterate is kept as an explicit mixture of products.

use rand::Rng;

use crate::error::{Error, Result};
use crate::qstate::states::{random_pure_with, rng_from_seed};
use crate::qstate::{
    cross_log_trace, hermitian_eig, kron_vec, vec_norm, CMatrix, DensityMatrix, Spectrum, C64, SUPPORT_CUTOFF,
};

pub const LMO_DECREASE_TOL: f64 = 1e-12;
pub const LMO_MAX_ALTERNATIONS: usize = 200;
pub const LINE_SEARCH_ITERS: usize = 60;
/// Upper end of the step interval; keeps the iterate full rank.
pub const MAX_STEP: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReeOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for ReeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iters: 2000,
            restarts: 16,
            seed: 0,
        }
    }
}

/// `|a⟩ ⊗ |b⟩` for single-qubit unit vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductState {
    pub a: [C64; 2],
    pub b: [C64; 2],
}

impl ProductState {
    pub fn basis(i: usize, j: usize) -> Self {
        let e = |k: usize| {
            let mut v = [C64::new(0.0, 0.0); 2];
            v[k] = C64::new(1.0, 0.0);
            v
        };
        Self { a: e(i), b: e(j) }
    }

    pub fn vector(&self) -> Vec<C64> {
        kron_vec(&self.a, &self.b)
    }

    pub fn projector(&self) -> CMatrix {
        CMatrix::outer(&self.vector())
    }
}

#[derive(Debug, Clone)]
pub struct ReeResult {
    /// `S(ρ‖σ*)` in nats.
    pub value: f64,
    pub sigma_star: DensityMatrix,
    /// `σ*` as weights over product pure states.
    pub mixture: Vec<(f64, ProductState)>,
    /// Frank-Wolfe gap at the last evaluated iterate.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted step, starting from `σ₀ = I/4`.
    pub history: Vec<f64>,
}

/// Closed-form relative entropy of entanglement of a Bell-diagonal state with
/// largest Bell weight `F`: `ln 2 + F ln F + (1−F) ln(1−F)`.
pub fn bell_diagonal_ree_oracle(fidelity: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&fidelity) {
        return Err(Error::Domain(format!("fidelity {fidelity} outside [1/2, 1]")));
    }
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    Ok(std::f64::consts::LN_2 + xlnx(fidelity) + xlnx(1.0 - fidelity))
}

/// `(ln a − ln b)/(a − b)`, continuous at `a = b`.
fn log_divided_difference(a: f64, b: f64) -> f64 {
    if a == b {
        1.0 / a
    } else {
        ((a - b) / b).ln_1p() / (a - b)
    }
}

fn gradient_from_spectrum(rho: &CMatrix, sigma: &Spectrum) -> Result<CMatrix> {
    let mu = &sigma.eigenvalues;
    if mu[0] <= SUPPORT_CUTOFF {
        return Err(Error::Domain(format!(
            "sigma is rank-deficient (min eigenvalue {:e})",
            mu[0]
        )));
    }
    let v = &sigma.basis;
    let rotated = &(&v.adjoint() * rho) * v;
    let d = rho.dim();
    let inner = CMatrix::from_fn(d, |i, j| -rotated[(i, j)] * log_divided_difference(mu[i], mu[j]));
    Ok((&(v * &inner) * &v.adjoint()).hermitian_part())
}

/// Gradient of `σ ↦ −Tr ρ ln σ`: the Hermitian `G` with
/// `d/dt [−Tr ρ ln(σ + tΔ)]|₀ = Tr[Δ G]`.
pub fn ree_gradient(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<CMatrix> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    gradient_from_spectrum(rho.matrix(), &sigma.spectrum()?)
}

/// Minimum eigenpair of a 2×2 Hermitian matrix, in closed form.
fn min_eigvec(m: &CMatrix) -> (f64, [C64; 2]) {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let b = m[(0, 1)];
    let half_gap = ((a - d) / 2.0).hypot(b.norm());
    let lambda = (a + d) / 2.0 - half_gap;
    if b.norm() == 0.0 {
        let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        return (lambda, if a <= d { [one, zero] } else { [zero, one] });
    }
    // Two null vectors of (M − λ); keep the better conditioned one.
    let u = [b, C64::new(lambda - a, 0.0)];
    let w = [C64::new(lambda - d, 0.0), b.conj()];
    let v = if vec_norm(&u) >= vec_norm(&w) { u } else { w };
    let n = vec_norm(&v);
    (lambda, [v[0] / n, v[1] / n])
}

/// `(I ⊗ ⟨b|) G (I ⊗ |b⟩)`.
fn contract_second(g: &CMatrix, b: &[C64; 2]) -> CMatrix {
    CMatrix::from_fn(2, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..2 {
            for l in 0..2 {
                acc += b[k].conj() * g[(2 * i + k, 2 * j + l)] * b[l];
            }
        }
        acc
    })
    .hermitian_part()
}

/// `(⟨a| ⊗ I) G (|a⟩ ⊗ I)`.
fn contract_first(g: &CMatrix, a: &[C64; 2]) -> CMatrix {
    CMatrix::from_fn(2, |k, l| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += a[i].conj() * g[(2 * i + k, 2 * j + l)] * a[j];
            }
        }
        acc
    })
    .hermitian_part()
}

/// Approximately minimizes `⟨ab|G|ab⟩` over product states by alternating
/// exact minimization in each factor, keeping the best of `restarts` random
/// starts (ties go to the earlier restart).
pub fn product_lmo(g: &CMatrix, restarts: usize, seed: u64) -> Result<(ProductState, f64)> {
    if g.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "product oracle needs a 4x4 matrix, got {0}x{0}",
            g.dim()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut best: Option<(ProductState, f64)> = None;
    for _ in 0..restarts.max(1) {
        let init = random_pure_with(&mut rng, 2);
        let mut b = [init[0], init[1]];
        let mut a = [C64::new(0.0, 0.0); 2];
        let mut value = f64::INFINITY;
        for _ in 0..LMO_MAX_ALTERNATIONS {
            a = min_eigvec(&contract_second(g, &b)).1;
            let (v, nb) = min_eigvec(&contract_first(g, &a));
            b = nb;
            let decrease = value - v;
            value = v;
            if decrease < LMO_DECREASE_TOL {
                break;
            }
        }
        if best.as_ref().is_none_or(|(_, bv)| value < *bv) {
            best = Some((ProductState { a, b }, value));
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Objective `S(ρ‖σ)` for a fixed ρ.
struct Objective<'a> {
    rho: &'a CMatrix,
    neg_entropy: f64,
}

impl Objective<'_> {
    fn at_spectrum(&self, sigma: &Spectrum) -> f64 {
        match cross_log_trace(self.rho, sigma) {
            Some(cross) => self.neg_entropy - cross,
            None => f64::INFINITY,
        }
    }

    fn at(&self, sigma: &CMatrix) -> Result<f64> {
        Ok(self.at_spectrum(&hermitian_eig(sigma)?))
    }
}

fn blend(sigma: &CMatrix, omega: &CMatrix, step: f64) -> CMatrix {
    &sigma.scale(1.0 - step) + &omega.scale(step)
}

/// Golden-section search of the convex restriction on `[0, MAX_STEP]`.
/// Returns the step and its objective, falling back to a zero step if the
/// search lands above the current value.
fn line_search(obj: &Objective, sigma: &CMatrix, omega: &CMatrix, current: f64) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, MAX_STEP);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = obj.at(&blend(sigma, omega, x1))?;
    let mut f2 = obj.at(&blend(sigma, omega, x2))?;
    for _ in 0..LINE_SEARCH_ITERS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = obj.at(&blend(sigma, omega, x1))?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = obj.at(&blend(sigma, omega, x2))?;
        }
    }
    let (step, value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if value <= current {
        Ok((step, value))
    } else {
        Ok((0.0, current))
    }
}

/// Relative entropy of entanglement of a two-qubit state.
pub fn ree(rho: &DensityMatrix, opts: &ReeOptions) -> Result<ReeResult> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy of entanglement is two-qubit only, got dims {:?}",
            rho.dims()
        )));
    }
    let obj = Objective {
        rho: rho.matrix(),
        neg_entropy: rho
            .spectrum()?
            .eigenvalues
            .iter()
            .filter(|&&l| l >= SUPPORT_CUTOFF)
            .map(|&l| l * l.ln())
            .sum(),
    };
    let mut rng = rng_from_seed(opts.seed);

    let mut mixture: Vec<(f64, ProductState)> = (0..4)
        .map(|k| (0.25, ProductState::basis(k / 2, k % 2)))
        .collect();
    let mut sigma = CMatrix::identity(4).scale(0.25);
    let mut spectrum = hermitian_eig(&sigma)?;
    let mut value = obj.at_spectrum(&spectrum);
    let mut history = vec![value];
    let mut gap = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iters {
        let grad = gradient_from_spectrum(rho.matrix(), &spectrum)?;
        let (omega, omega_value) = product_lmo(&grad, opts.restarts, rng.gen())?;
        gap = sigma.trace_product(&grad).re - omega_value;
        if gap < opts.tol {
            converged = true;
            break;
        }
        let omega_proj = omega.projector();
        let (step, next) = line_search(&obj, &sigma, &omega_proj, value)?;
        if step == 0.0 {
            break;
        }
        sigma = blend(&sigma, &omega_proj, step).hermitian_part();
        for (w, _) in &mut mixture {
            *w *= 1.0 - step;
        }
        mixture.push((step, omega));
        spectrum = hermitian_eig(&sigma)?;
        value = next;
        history.push(value);
        iterations += 1;
    }

    Ok(ReeResult {
        value,
        sigma_star: DensityMatrix::from_parts(vec![2, 2], sigma),
        mixture,
        gap,
        iterations,
        converged,
        history,
    })
}

/// Rebuilds `Σ wᵢ |aᵢbᵢ⟩⟨aᵢbᵢ|` from a mixture.
pub fn mixture_matrix(mixture: &[(f64, ProductState)]) -> CMatrix {
    mixture
        .iter()
        .fold(CMatrix::zeros(4), |acc, (w, p)| &acc + &p.projector().scale(*w))
}
