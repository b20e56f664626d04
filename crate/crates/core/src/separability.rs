//! Separability witnesses and term-state sampling.
//!
//! Negative partial transpose across a cut certifies entanglement across that
//! cut. For two qubits the criterion is also sufficient, so membership in the
//! product-mixture form is decided exactly there. For three qubits only the
//! per-cut screen is offered.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::PartitionTerm;
use crate::qstate::states::{random_entangled_block_with, random_pure_with, rng_from_seed};
use crate::qstate::{hermitian_eig, partial_transpose, CMatrix, DensityMatrix, C64, PSD_TOL, SUPPORT_CUTOFF};

/// Partial-transpose eigenvalues below this make a cut NPT.
pub const NPT_THRESHOLD: f64 = -PSD_TOL;
/// Largest party count the sampler builds dense states for.
pub const MAX_SAMPLE_PARTIES: usize = 8;
/// Mixture weights must sum to one within this tolerance.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PPT")]
    Ppt,
    #[serde(rename = "NPT")]
    Npt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptVerdict {
    pub cut: Vec<usize>,
    pub min_pt_eigenvalue: f64,
    pub verdict: Verdict,
}

impl PptVerdict {
    pub fn is_npt(&self) -> bool {
        self.verdict == Verdict::Npt
    }
}

fn check_cut(parties: usize, cut: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = cut.to_vec();
    sorted.sort_unstable();
    if sorted.is_empty() {
        return Err(Error::InvalidParties("cut is empty".into()));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParties(format!("cut {cut:?} repeats a party")));
    }
    if let Some(&p) = sorted.last().filter(|&&p| p >= parties) {
        return Err(Error::InvalidParties(format!("party {p} outside 0..{parties}")));
    }
    if sorted.len() == parties {
        return Err(Error::InvalidParties("cut contains every party".into()));
    }
    Ok(sorted)
}

/// Every nonempty proper subset of `0..n`, as sorted party lists.
pub fn all_cuts(n: usize) -> Vec<Vec<usize>> {
    (1..(1usize << n) - 1)
        .map(|m| (0..n).filter(|p| m >> p & 1 == 1).collect())
        .collect()
}

/// Minimum partial-transpose eigenvalue across `cut` and the resulting
/// verdict.
pub fn ppt(rho: &DensityMatrix, cut: &[usize]) -> Result<PptVerdict> {
    let cut = check_cut(rho.parties(), cut)?;
    let pt = partial_transpose(rho, &cut)?;
    let min = hermitian_eig(&pt)?.eigenvalues[0];
    let verdict = if min < NPT_THRESHOLD {
        Verdict::Npt
    } else {
        Verdict::Ppt
    };
    Ok(PptVerdict {
        cut,
        min_pt_eigenvalue: min,
        verdict,
    })
}

fn require_dims(rho: &DensityMatrix, dims: &[usize]) -> Result<()> {
    if rho.dims() != dims {
        return Err(Error::DimensionMismatch(format!(
            "expected dims {dims:?}, got {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Exact two-qubit decision: entangled iff NPT.
pub fn two_qubit_entangled(rho: &DensityMatrix) -> Result<bool> {
    require_dims(rho, &[2, 2])?;
    Ok(ppt(rho, &[1])?.is_npt())
}

/// `Y ⊗ Y` in the computational basis.
fn sigma_y_y() -> CMatrix {
    let mut m = CMatrix::zeros(4);
    let one = C64::new(1.0, 0.0);
    m[(0, 3)] = -one;
    m[(1, 2)] = one;
    m[(2, 1)] = one;
    m[(3, 0)] = -one;
    m
}

/// Two-qubit concurrence `max(0, s₁ − s₂ − s₃ − s₄)`, where `sᵢ²` are the
/// eigenvalues of `ρ (Y⊗Y) ρ* (Y⊗Y)` in descending order.
///
/// The `sᵢ` are the singular values of `X = √ρ (Y⊗Y) √ρ*`. They are read off
/// the Hermitian dilation `[[0, X], [X†, 0]]`, whose spectrum is `±sᵢ`, which
/// avoids square roots of near-zero eigenvalues.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_dims(rho, &[2, 2])?;
    let sqrt_rho = rho
        .spectrum()?
        .map(|l| if l < SUPPORT_CUTOFF { 0.0 } else { l.sqrt() });
    let x = &(&sqrt_rho * &sigma_y_y()) * &sqrt_rho.conj();
    let dilation = CMatrix::from_fn(8, |i, j| match (i < 4, j < 4) {
        (true, false) => x[(i, j - 4)],
        (false, true) => x[(j, i - 4)].conj(),
        _ => C64::new(0.0, 0.0),
    });
    let ev = hermitian_eig(&dilation)?.eigenvalues;
    let s: Vec<f64> = ev[4..].iter().rev().copied().collect();
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// PPT verdicts across the single-party cuts `{0}`, `{1}`, `{2}` of a
/// three-qubit state. A necessary-condition screen only.
pub fn classify_tripartite(rho: &DensityMatrix) -> Result<[PptVerdict; 3]> {
    require_dims(rho, &[2, 2, 2])?;
    Ok([ppt(rho, &[0])?, ppt(rho, &[1])?, ppt(rho, &[2])?])
}

/// A pure state vector in the export format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StateVector {
    fn from_complex(v: &[C64]) -> Self {
        Self {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_complex(&self) -> Vec<C64> {
        self.re.iter().zip(&self.im).map(|(&a, &b)| C64::new(a, b)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleComponent {
    pub weight: f64,
    /// One pure state per block of the term, in canonical block order.
    pub block_states: Vec<StateVector>,
}

/// A weighted mixture of product states realizing one partition term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEnsemble {
    pub n: usize,
    pub term: PartitionTerm,
    pub components: Vec<EnsembleComponent>,
}

impl TermEnsemble {
    pub fn weight_sum(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    /// `Σ wᵢ ⊗_b |ψ_{i,b}⟩⟨ψ_{i,b}|` with blocks placed at their parties.
    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        if self.term.n() != self.n {
            return Err(Error::Format(format!(
                "term has {} parties, ensemble says {}",
                self.term.n(),
                self.n
            )));
        }
        if !((self.weight_sum() - 1.0).abs() <= WEIGHT_SUM_TOL) {
            return Err(Error::Format(format!("weights sum to {}", self.weight_sum())));
        }
        let blocks = self.term.blocks();
        let d = 1usize << self.n;
        let mut acc = CMatrix::zeros(d);
        for c in &self.components {
            if c.block_states.len() != blocks.len() {
                return Err(Error::Format("one block state per block required".into()));
            }
            let states: Vec<Vec<C64>> = c.block_states.iter().map(StateVector::to_complex).collect();
            for (b, s) in blocks.iter().zip(&states) {
                if s.len() != 1 << b.len() {
                    return Err(Error::Format(format!("block {b:?} needs a {}-dim state", 1 << b.len())));
                }
            }
            let psi = place_blocks(self.n, &blocks, &states);
            acc = &acc + &CMatrix::outer(&psi).scale(c.weight);
        }
        DensityMatrix::new(vec![2; self.n], acc)
    }
}

/// Full `n`-qubit vector of a product of block states.
fn place_blocks(n: usize, blocks: &[Vec<usize>], states: &[Vec<C64>]) -> Vec<C64> {
    (0..1usize << n)
        .map(|x| {
            blocks
                .iter()
                .zip(states)
                .map(|(block, psi)| {
                    let local = block
                        .iter()
                        .fold(0, |acc, &p| (acc << 1) | (x >> (n - 1 - p) & 1));
                    psi[local]
                })
                .product()
        })
        .collect()
}

/// Samples a state of the summation family `term`: `components` product
/// states with normalized uniform weights, each block of size ≥ 2 holding a
/// pure state entangled across every internal cut.
pub fn sample_term_state(
    term: &PartitionTerm,
    components: usize,
    seed: u64,
) -> Result<(DensityMatrix, TermEnsemble)> {
    let n = term.n();
    if n > MAX_SAMPLE_PARTIES {
        return Err(Error::Capacity(format!(
            "sampling supports n <= {MAX_SAMPLE_PARTIES}, got {n}"
        )));
    }
    if components == 0 {
        return Err(Error::Domain("at least one component required".into()));
    }
    let mut rng = rng_from_seed(seed);
    let blocks = term.blocks();
    let raw: Vec<f64> = (0..components).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let mut comps = Vec::with_capacity(components);
    for w in raw {
        let states = blocks
            .iter()
            .map(|b| match b.len() {
                1 => Ok(random_pure_with(&mut rng, 2)),
                k => random_entangled_block_with(&mut rng, k),
            })
            .collect::<Result<Vec<_>>>()?;
        comps.push(EnsembleComponent {
            weight: w / total,
            block_states: states.iter().map(|s| StateVector::from_complex(s)).collect(),
        });
    }
    let ensemble = TermEnsemble {
        n,
        term: term.clone(),
        components: comps,
    };
    Ok((ensemble.density_matrix()?, ensemble))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::states::{bell_phi_plus, ghz, maximally_mixed, random_mixed, werner};

    #[test]
    fn bell_is_npt() {
        let v = ppt(&bell_phi_plus(), &[1]).unwrap();
        assert!((v.min_pt_eigenvalue + 0.5).abs() < 1e-12);
        assert_eq!(v.verdict, Verdict::Npt);
        assert!(two_qubit_entangled(&bell_phi_plus()).unwrap());
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        assert_eq!(ppt(&maximally_mixed(&[2, 2]), &[0]).unwrap().verdict, Verdict::Ppt);
    }

    #[test]
    fn werner_half() {
        let v = ppt(&werner(0.5).unwrap(), &[1]).unwrap();
        assert!((v.min_pt_eigenvalue + 0.125).abs() < 1e-12);
        assert!(v.is_npt());
        assert!(!two_qubit_entangled(&werner(1.0 / 3.0).unwrap()).unwrap());
    }

    #[test]
    fn product_is_not_entangled() {
        let rho = random_mixed(2, 2, 1).kron(&random_mixed(2, 1, 2));
        assert!(!two_qubit_entangled(&rho).unwrap());
        assert!(concurrence(&rho).unwrap().abs() < 1e-9);
    }

    #[test]
    fn concurrence_closed_forms() {
        assert!((concurrence(&bell_phi_plus()).unwrap() - 1.0).abs() < 1e-9);
        for p in [0.2, 0.5, 0.9] {
            let expected = f64::max(0.0, (3.0 * p - 1.0) / 2.0);
            assert!((concurrence(&werner(p).unwrap()).unwrap() - expected).abs() < 1e-9, "p={p}");
        }
    }

    #[test]
    fn bad_cuts_and_dims() {
        let rho = bell_phi_plus();
        assert!(matches!(ppt(&rho, &[]), Err(Error::InvalidParties(_))));
        assert!(matches!(ppt(&rho, &[0, 1]), Err(Error::InvalidParties(_))));
        assert!(matches!(ppt(&rho, &[2]), Err(Error::InvalidParties(_))));
        assert!(matches!(ppt(&rho, &[1, 1]), Err(Error::InvalidParties(_))));
        let three = ghz(3).unwrap();
        assert!(matches!(two_qubit_entangled(&three), Err(Error::DimensionMismatch(_))));
        assert!(matches!(concurrence(&three), Err(Error::DimensionMismatch(_))));
        assert!(matches!(classify_tripartite(&rho), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn tripartite_screens() {
        let product = random_mixed(2, 2, 3).kron(&random_mixed(2, 2, 4)).kron(&random_mixed(2, 2, 5));
        assert!(classify_tripartite(&product).unwrap().iter().all(|v| !v.is_npt()));
        assert!(classify_tripartite(&ghz(3).unwrap()).unwrap().iter().all(|v| v.is_npt()));
        let a_bell = random_mixed(2, 1, 6).kron(&bell_phi_plus());
        let v = classify_tripartite(&a_bell).unwrap();
        assert_eq!(
            v.iter().map(|v| v.verdict).collect::<Vec<_>>(),
            [Verdict::Ppt, Verdict::Npt, Verdict::Npt]
        );
    }

    #[test]
    fn all_cuts_of_three() {
        assert_eq!(
            all_cuts(3),
            vec![vec![0], vec![1], vec![0, 1], vec![2], vec![0, 2], vec![1, 2]]
        );
    }

    #[test]
    fn sampler_basics() {
        let singletons = PartitionTerm::from_rgs(vec![0, 1]).unwrap();
        let (rho, ens) = sample_term_state(&singletons, 3, 42).unwrap();
        assert!(!two_qubit_entangled(&rho).unwrap());
        assert!((ens.weight_sum() - 1.0).abs() < 1e-12);
        assert_eq!(ens.components.len(), 3);

        let pair = PartitionTerm::from_rgs(vec![0, 0, 1]).unwrap();
        let (rho, _) = sample_term_state(&pair, 2, 7).unwrap();
        assert!(!ppt(&rho, &[2]).unwrap().is_npt());
        // A single product component with an entangled pair is NPT across {0}.
        let (single, _) = sample_term_state(&pair, 1, 7).unwrap();
        assert!(ppt(&single, &[0]).unwrap().is_npt());

        assert!(matches!(sample_term_state(&pair, 0, 1), Err(Error::Domain(_))));
        let nine = PartitionTerm::from_rgs(vec![0, 1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(sample_term_state(&nine, 1, 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn sampler_is_deterministic_and_exportable() {
        let term = PartitionTerm::from_rgs(vec![0, 1, 0, 2]).unwrap();
        let (rho, ens) = sample_term_state(&term, 4, 99).unwrap();
        let (rho2, ens2) = sample_term_state(&term, 4, 99).unwrap();
        assert_eq!(rho, rho2);
        assert_eq!(ens, ens2);
        let json = serde_json::to_string(&ens).unwrap();
        let back: TermEnsemble = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ens);
        assert!(back.density_matrix().unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn verdict_json_shape() {
        let v = PptVerdict {
            cut: vec![0],
            min_pt_eigenvalue: -0.5,
            verdict: Verdict::Npt,
        };
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"cut":[0],"min_pt_eigenvalue":-0.5,"verdict":"NPT"}"#
        );
    }
}
