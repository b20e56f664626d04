mod common;

use common::random_state;
use disentangle::qstate::states::*;
use disentangle::qstate::*;

#[test]
fn kron_trace_is_multiplicative() {
    for seed in 0..100 {
        let a = random_mixed(2, 2, seed).matrix().scale(1.0 + seed as f64);
        let b = random_mixed(4, 3, seed + 1000).matrix().scale(0.5);
        let lhs = kron(&a, &b).trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn partial_trace_preserves_trace_and_positivity() {
    let keeps: [&[usize]; 5] = [&[0], &[1], &[2], &[0, 2], &[1, 2]];
    for seed in 0..1000 {
        let rho = random_state(3, seed);
        let keep = keeps[seed as usize % keeps.len()];
        let r = partial_trace(&rho, keep).unwrap();
        assert!((r.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(r.spectrum().unwrap().eigenvalues[0] >= -PSD_TOL);
        assert!(DensityMatrix::new(r.dims().to_vec(), r.matrix().clone()).is_ok());
    }
}

/// Independent partial transpose on qubits: swap the row and column bits of
/// every party in `subset` (party 0 is the most significant bit).
fn pt_oracle(m: &CMatrix, qubits: usize, subset: &[usize]) -> CMatrix {
    let mask: usize = subset.iter().map(|&p| 1 << (qubits - 1 - p)).sum();
    CMatrix::from_fn(m.dim(), |i, j| {
        let (ii, jj) = ((i & !mask) | (j & mask), (j & !mask) | (i & mask));
        m[(ii, jj)]
    })
}

#[test]
fn partial_transpose_is_a_norm_preserving_involution() {
    let subsets: [&[usize]; 4] = [&[0], &[1], &[0, 2], &[2]];
    for seed in 0..200 {
        let rho = random_state(3, seed);
        let s = subsets[seed as usize % subsets.len()];
        let pt = partial_transpose(&rho, s).unwrap();
        assert!(pt.max_abs_diff(&pt_oracle(rho.matrix(), 3, s)) == 0.0);
        assert!(pt_oracle(&pt, 3, s).max_abs_diff(rho.matrix()) == 0.0);
        assert!((pt.trace() - rho.matrix().trace()).norm() < 1e-12);
        assert!(pt.hermiticity_error() < 1e-14);
        assert!((pt.frobenius_norm() - rho.matrix().frobenius_norm()).abs() < 1e-12);
    }
}

#[test]
fn eigenvalue_sum_equals_trace() {
    for seed in 0..200 {
        let rho = random_state(1 + seed as usize % 4, seed);
        let sum: f64 = rho.spectrum().unwrap().eigenvalues.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }
}

#[test]
fn relative_entropy_is_nonnegative_and_faithful() {
    for seed in 0..200 {
        let qubits = 2 + seed as usize % 2;
        let rho = random_state(qubits, seed);
        let sigma = random_state(qubits, seed + 5000);
        let s = relative_entropy(&rho, &sigma).unwrap();
        assert!(s >= -1e-10, "S = {s}");
        if s <= 1e-10 {
            assert!((rho.matrix() - sigma.matrix()).frobenius_norm() <= 1e-4);
        }
        assert!(relative_entropy(&rho, &rho).unwrap().abs() <= 1e-10);
    }
}

#[test]
fn maximally_mixed_entropy() {
    for q in 1..=4 {
        let s = von_neumann_entropy(&maximally_mixed(&vec![2; q])).unwrap();
        assert!((s - (q as f64) * 2f64.ln()).abs() < 1e-12);
    }
}

#[test]
fn state_file_round_trip() {
    for seed in 0..20 {
        let rho = random_state(2, seed);
        assert_eq!(DensityMatrix::from_json(&rho.to_json()).unwrap(), rho);
    }
}
