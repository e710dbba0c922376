//! Executable workbench for the categorical semantics of finite-dimensional
//! quantum computation.
//!
//! The crate is organised in layers:
//!
//! * [`linalg`] — dense complex matrices, Kronecker products, partial traces,
//!   permutation unitaries and a Hermitian PSD test with explicit tolerances.
//! * [`cpm`] — completely positive maps in Choi form, Kraus conversions and
//!   the trace-preserving / trace-non-increasing predicates.
//! * [`qcat`] — the biproduct completion: finite families of Hilbert spaces
//!   with matrices of CP maps, tensor, coproducts and distributivity.
//! * [`freecat`] — the free affine symmetric monoidal category on a discrete
//!   set of labelled spaces, the free finite coproduct completion, and the
//!   universal extension helpers for both.
//! * [`functors`] — the concrete functors used by the model: the affine
//!   extension into superoperators, the coproduct extension into families,
//!   the embedding of finite sets, and the multiplicative kernel condition.
//! * [`presheaflab`] — exact computations over presheaves on finite
//!   categories: Yoneda, left Kan extensions, the precomposition adjunction
//!   and Day convolution.
//! * [`modelcheck`] — the hypothesis verifier: runs every structural check
//!   over a configurable finite universe and emits a machine-readable report.
//! * [`qlc`] — a small first-order linear quantum language with a
//!   typechecker and a denotational semantics into [`qcat`].

pub mod linalg;
pub mod cpm;
pub mod qcat;
pub mod freecat;
pub mod functors;
pub mod presheaflab;
pub mod modelcheck;
pub mod qlc;
