//! Named states and seeded random states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

use super::{CMatrix, DensityMatrix, C64};

/// Reduced-state purity every internal cut of an entangled block must stay
/// below.
pub const BLOCK_PURITY_BOUND: f64 = 1.0 - 1e-6;
pub const MAX_RESAMPLE_ATTEMPTS: usize = 1000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_phi_plus() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    DensityMatrix::pure(vec![2, 2], &[C64::new(s, 0.0), z, z, C64::new(s, 0.0)])
        .expect("Bell state is valid")
}

/// `p·|Φ⁺⟩⟨Φ⁺| + (1 − p)·I/4`; a state for `−1/3 ≤ p ≤ 1`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    let bell = bell_phi_plus();
    let noise = CMatrix::identity(4).scale((1.0 - p) / 4.0);
    DensityMatrix::new(vec![2, 2], &bell.matrix().scale(p) + &noise)
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn ghz(n: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::Domain(format!("GHZ state needs n >= 2, got {n}")));
    }
    let d = 1usize
        .checked_shl(n as u32)
        .filter(|&d| d <= super::MAX_DIM)
        .ok_or_else(|| Error::Capacity(format!("{n} qubits")))?;
    let mut psi = vec![C64::new(0.0, 0.0); d];
    psi[0] = C64::new(1.0, 0.0);
    psi[d - 1] = C64::new(1.0, 0.0);
    DensityMatrix::pure(vec![2; n], &psi)
}

pub fn maximally_mixed(dims: &[usize]) -> DensityMatrix {
    let d: usize = dims.iter().product();
    DensityMatrix::from_parts(dims.to_vec(), CMatrix::identity(d).scale(1.0 / d as f64))
}

/// Computational basis projector `|index⟩⟨index|`.
pub fn basis_state(dims: &[usize], index: usize) -> DensityMatrix {
    let d: usize = dims.iter().product();
    let mut diag = vec![0.0; d];
    diag[index] = 1.0;
    DensityMatrix::from_parts(dims.to_vec(), CMatrix::from_real_diagonal(&diag))
}

/// Haar-random unit vector from normalized complex Gaussians.
pub fn random_pure_with<R: Rng>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = super::vec_norm(&v);
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_pure(dim: usize, seed: u64) -> Vec<C64> {
    random_pure_with(&mut rng_from_seed(seed), dim)
}

/// Purity of the reduced state on the qubits in `mask` (bit `k` set for
/// party `k`, party 0 most significant) of a pure `k`-qubit state.
pub fn reduced_purity(psi: &[C64], qubits: usize, mask: usize) -> f64 {
    let kept: Vec<usize> = (0..qubits).filter(|p| mask >> p & 1 == 1).collect();
    let traced: Vec<usize> = (0..qubits).filter(|p| mask >> p & 1 == 0).collect();
    let index = |a: usize, b: usize| {
        let mut i = 0;
        for (j, &p) in kept.iter().enumerate() {
            i |= (a >> (kept.len() - 1 - j) & 1) << (qubits - 1 - p);
        }
        for (j, &p) in traced.iter().enumerate() {
            i |= (b >> (traced.len() - 1 - j) & 1) << (qubits - 1 - p);
        }
        i
    };
    let (dk, dt) = (1 << kept.len(), 1 << traced.len());
    // ψ reshaped to a dk × dt matrix M; purity = Tr[(M M†)²].
    let reduced = CMatrix::from_fn(dk, |r, c| {
        (0..dt).map(|t| psi[index(r, t)] * psi[index(c, t)].conj()).sum()
    });
    reduced.trace_product(&reduced).re
}

/// Random pure state of `k ≥ 2` qubits, resampled until every bipartition
/// of the block is entangled.
pub fn random_entangled_block_with<R: Rng>(rng: &mut R, k: usize) -> Result<Vec<C64>> {
    if k < 2 {
        return Err(Error::Domain(format!("entangled block needs k >= 2, got {k}")));
    }
    if k > 8 {
        return Err(Error::Capacity(format!("{k}-qubit block")));
    }
    let full = (1usize << k) - 1;
    for _ in 0..MAX_RESAMPLE_ATTEMPTS {
        let psi = random_pure_with(rng, 1 << k);
        // Cuts containing party 0 cover every bipartition once.
        let entangled = (1..full)
            .filter(|m| m & 1 == 1)
            .all(|m| reduced_purity(&psi, k, m) < BLOCK_PURITY_BOUND);
        if entangled {
            return Ok(psi);
        }
    }
    Err(Error::Numerical(format!(
        "no entangled {k}-qubit block after {MAX_RESAMPLE_ATTEMPTS} attempts"
    )))
}

pub fn random_entangled_block(k: usize, seed: u64) -> Result<Vec<C64>> {
    random_entangled_block_with(&mut rng_from_seed(seed), k)
}

/// Random mixed state of one system: an equal-rank mixture of `rank` random
/// pure states with uniform weights.
pub fn random_mixed(dim: usize, rank: usize, seed: u64) -> DensityMatrix {
    let mut rng = rng_from_seed(seed);
    let weights: Vec<f64> = (0..rank).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = CMatrix::zeros(dim);
    for w in weights {
        let psi = random_pure_with(&mut rng, dim);
        acc = &acc + &CMatrix::outer(&psi).scale(w / total);
    }
    DensityMatrix::from_parts(vec![dim], acc)
}
