//! Dense density matrices over tensor products of small systems.
//!
//! Parties are ordered most-significant first: for dims `[2, 2]` the basis
//! index `i = 2·a + b` labels `|a⟩ ⊗ |b⟩`. Entropies are in nats.

mod eig;
mod matrix;
pub mod states;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use eig::{hermitian_eig, Spectrum, EIG_HERMITIAN_TOL, EIG_MAX_SWEEPS, EIG_REL_TOL};
pub use matrix::{kron_vec, vec_norm, CMatrix, C64};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue still considered positive semidefinite.
pub const PSD_TOL: f64 = 1e-9;
/// Eigenvalues below this are treated as outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Largest total dimension handled (eight qubits).
pub const MAX_DIM: usize = 256;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates `mat` against the tolerances of this module.
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<Self> {
        check_dims(&dims, mat.dim())?;
        let herr = mat.hermiticity_error();
        if !(herr <= HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max deviation {herr:e})"
            )));
        }
        let tr = mat.trace().re;
        if !((tr - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = hermitian_eig(&mat)?.eigenvalues[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { dims, mat })
    }

    /// Skips validation; for results whose validity follows from construction.
    pub(crate) fn from_parts(dims: Vec<usize>, mat: CMatrix) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), mat.dim());
        Self { dims, mat }
    }

    /// `|ψ⟩⟨ψ|` after normalizing `psi`.
    pub fn pure(dims: Vec<usize>, psi: &[C64]) -> Result<Self> {
        check_dims(&dims, psi.len())?;
        let norm = vec_norm(psi);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero or non-finite norm".into()));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_parts(dims, CMatrix::outer(&unit)))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        hermitian_eig(&self.mat)
    }

    /// Tensor product; dims concatenate.
    pub fn kron(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts(dims, self.mat.kron(&other.mat))
    }

    /// `Σ wᵢ ρᵢ` for weights summing to one and matching dims.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::Domain("empty mixture".into()))?;
        let mut acc = CMatrix::zeros(first.dim());
        for (w, rho) in parts {
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch(format!(
                    "{:?} vs {:?}",
                    rho.dims, first.dims
                )));
            }
            if !(*w >= 0.0) {
                return Err(Error::Domain(format!("negative mixture weight {w}")));
            }
            acc = &acc + &rho.mat.scale(*w);
        }
        Self::new(first.dims.clone(), acc)
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }
}

fn check_dims(dims: &[usize], d: usize) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&k| k < 2) {
        return Err(Error::DimensionMismatch(format!(
            "party dimensions must be >= 2, got {dims:?}"
        )));
    }
    let total = dims
        .iter()
        .try_fold(1usize, |acc, &k| acc.checked_mul(k))
        .filter(|&t| t <= MAX_DIM)
        .ok_or_else(|| Error::Capacity(format!("dims {dims:?} exceed dimension {MAX_DIM}")))?;
    if total != d {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} give {total}, matrix is {d}x{d}"
        )));
    }
    Ok(())
}

/// Checks a party set: indices in range, no repeats. Returns a membership
/// mask.
fn party_mask(parties: usize, set: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; parties];
    for &p in set {
        if p >= parties {
            return Err(Error::InvalidParties(format!(
                "party {p} outside 0..{parties}"
            )));
        }
        if mask[p] {
            return Err(Error::InvalidParties(format!("party {p} listed twice")));
        }
        mask[p] = true;
    }
    Ok(mask)
}

/// Per-party digits of a basis index, most significant party first.
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &k) in out.iter_mut().zip(dims).rev() {
        *slot = index % k;
        index /= k;
    }
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &k)| acc * k + x)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// Reduced state on the parties in `keep` (result party order ascending).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidParties("keep set is empty".into()));
    }
    let mask = party_mask(rho.parties(), keep)?;
    let dims = rho.dims();
    let kept: Vec<usize> = (0..dims.len()).filter(|&p| mask[p]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|&p| !mask[p]).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&p| dims[p]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&p| dims[p]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    let mut kd_r = vec![0; kept.len()];
    let mut kd_c = vec![0; kept.len()];
    let mut td = vec![0; traced.len()];
    let mut full = vec![0; dims.len()];
    let mut full_index = |kd: &[usize], td: &[usize]| {
        for (&p, &x) in kept.iter().zip(kd) {
            full[p] = x;
        }
        for (&p, &x) in traced.iter().zip(td) {
            full[p] = x;
        }
        compose(&full, dims)
    };

    let mut out = CMatrix::zeros(dk);
    for r in 0..dk {
        digits(r, &kept_dims, &mut kd_r);
        for c in 0..dk {
            digits(c, &kept_dims, &mut kd_c);
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..dt {
                digits(t, &traced_dims, &mut td);
                let fr = full_index(&kd_r, &td);
                let fc = full_index(&kd_c, &td);
                acc += rho.matrix()[(fr, fc)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix::from_parts(kept_dims, out))
}

/// Transposes the indices of the parties in `subset`, leaving the rest.
pub fn partial_transpose(rho: &DensityMatrix, subset: &[usize]) -> Result<CMatrix> {
    let mask = party_mask(rho.parties(), subset)?;
    let dims = rho.dims();
    let d = rho.dim();
    let mut dr = vec![0; dims.len()];
    let mut dc = vec![0; dims.len()];
    let mut out = CMatrix::zeros(d);
    for r in 0..d {
        digits(r, dims, &mut dr);
        for c in 0..d {
            digits(c, dims, &mut dc);
            let mut sr = dr.clone();
            let mut sc = dc.clone();
            for p in 0..dims.len() {
                if mask[p] {
                    sr[p] = dc[p];
                    sc[p] = dr[p];
                }
            }
            out[(r, c)] = rho.matrix()[(compose(&sr, dims), compose(&sc, dims))];
        }
    }
    Ok(out)
}

/// `−Σ λ ln λ`, eigenvalues below [`SUPPORT_CUTOFF`] taken as zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(-entropy_sum(&rho.spectrum()?.eigenvalues))
}

/// `Σ λ ln λ` over the support.
fn entropy_sum(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l >= SUPPORT_CUTOFF)
        .map(|&l| l * l.ln())
        .sum()
}

/// `Tr ρ ln σ` given σ's spectrum; `None` when ρ has weight outside the
/// support of σ.
pub(crate) fn cross_log_trace(rho: &CMatrix, sigma: &Spectrum) -> Option<f64> {
    let mut acc = 0.0;
    for (k, &mu) in sigma.eigenvalues.iter().enumerate() {
        let w = rho.expectation(&sigma.eigenvector(k)).re;
        if mu < SUPPORT_CUTOFF {
            if w > 1e-10 {
                return None;
            }
        } else {
            acc += w * mu.ln();
        }
    }
    Some(acc)
}

/// Quantum relative entropy `S(ρ‖σ) = Tr ρ ln ρ − Tr ρ ln σ`, in nats;
/// `+∞` when the support of ρ is not contained in that of σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let neg_entropy = entropy_sum(&rho.spectrum()?.eigenvalues);
    Ok(match cross_log_trace(rho.matrix(), &sigma.spectrum()?) {
        Some(cross) => neg_entropy - cross,
        None => f64::INFINITY,
    })
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let part = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..d).map(|i| self.mat.row(i).iter().map(f).collect()).collect()
        };
        DensityJson {
            dims: self.dims.clone(),
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = DensityJson::deserialize(deserializer)?;
        density_from_json(raw).map_err(D::Error::custom)
    }
}

fn density_from_json(raw: DensityJson) -> Result<DensityMatrix> {
    let d = raw.re.len();
    if raw.im.len() != d {
        return Err(Error::Format(format!(
            "field \"im\" has {} rows, \"re\" has {d}",
            raw.im.len()
        )));
    }
    let mut data = Vec::with_capacity(d * d);
    for (i, (re, im)) in raw.re.iter().zip(&raw.im).enumerate() {
        if re.len() != d {
            return Err(Error::Format(format!("field \"re\" row {i} has {} entries, expected {d}", re.len())));
        }
        if im.len() != d {
            return Err(Error::Format(format!("field \"im\" row {i} has {} entries, expected {d}", im.len())));
        }
        data.extend(re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)));
    }
    DensityMatrix::new(raw.dims, CMatrix::from_row_major(d, data))
}

impl DensityMatrix {
    /// Parses the JSON state-file format, validating on load.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DensityJson = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("state file: {e}")))?;
        density_from_json(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("density matrix serializes")
    }
}
