//! Leavitt path algebras of finite graphs.
//!
//! The crate models a finite directed multigraph `E` (with optional ω-bundles
//! standing for infinite emitters), decides ring-theoretic properties of the
//! Leavitt path algebra `L_K(E)` from graph criteria — von Neumann
//! regularity, direct finiteness, bounded index of nilpotence, the Σ-V
//! property — and verifies those decisions against exact symbolic arithmetic
//! in `L_ℚ(E)` and its explicit matrix-ring decomposition.
//!
//! Module map:
//! - [`graph`]: the multigraph, paths, cycles, path statistics, Condition (K).
//! - [`ideal`]: hereditary saturated sets, admissible pairs, quotient graphs,
//!   maximal tails, graded prime ideals and their quotient classification.
//! - [`algebra`]: exact arithmetic in `L_ℚ(E)` via confluent rewriting to a
//!   designated-edge normal form.
//! - [`rep`]: the decomposition into matrix blocks over `ℚ` and `ℚ[x,x⁻¹]`
//!   and the faithful block-matrix representation used as an oracle.
//! - [`decide`]: the decision procedures with structured evidence, plus the
//!   ideal-theoretic cross-check.
//! - [`fixtures`]: the named example graphs used throughout the test suites.

pub mod algebra;
pub mod decide;
pub mod fixtures;
pub mod graph;
pub mod ideal;
pub mod laurent;
pub mod rep;

pub use graph::{EdgeId, Graph, GraphError, Path, VertexId};
