#![allow(dead_code)]

use disentangle::qstate::states::random_mixed;
use disentangle::qstate::DensityMatrix;

/// Random `qubits`-qubit state of rank `1 + seed % 2^qubits`.
pub fn random_state(qubits: usize, seed: u64) -> DensityMatrix {
    let d = 1 << qubits;
    let rank = 1 + (seed as usize % d);
    let m = random_mixed(d, rank, seed);
    DensityMatrix::new(vec![2; qubits], m.matrix().clone()).unwrap()
}
