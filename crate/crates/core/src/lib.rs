//! Construction, counting, serialization and numerical probing of the general
//! n-party disentangled state.
//!
//! A state of `n` parties is *disentangled* when it can be written as a convex
//! mixture whose every summand splits the parties into at least two groups,
//! each group carrying its own (possibly entangled) state. The families of
//! summands are exactly the set partitions of `{0, …, n−1}` with two or more
//! blocks, so there are `Bell(n) − 1` of them.
//!
//! The crate is organised as:
//!
//! - [`partitions`]: exact enumeration and counting of those families.
//! - [`sentences`]: a canonical textual form of the full mixture, its parser,
//!   and an LZ78 description-length probe.
//! - [`qstate`]: dense complex density matrices, tensor operations, a Jacobi
//!   Hermitian eigensolver and entropies.
//! - [`separability`]: PPT witnesses, two-qubit decisions, concurrence and a
//!   sampler of states realising a given family.
//! - [`ree`]: relative entropy of entanglement of two-qubit states by
//!   Frank-Wolfe over the separable set.

#![forbid(unsafe_code)]
// `!(x <= tol)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod partitions;
pub mod qstate;
pub mod ree;
pub mod sentences;
pub mod separability;

pub use error::{Error, Result};
