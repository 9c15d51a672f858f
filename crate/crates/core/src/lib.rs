//! Frustration-graph analysis of many-body Hamiltonians.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod blockdiag;
pub mod collapse;
pub mod graph;
pub mod models;
pub mod modular;
pub mod scf;
pub mod svn;

pub use algebra::{AlgebraContext, AlgebraKind, Hamiltonian, PhasedString};
pub use collapse::{collapse, collapse_full, collapse_twins, collapse_twins_literal, CollapseMode, CollapseResult, CollapseTrace};
pub use graph::{build_frustration_graph, FrustrationGraph, Graph};
pub use modular::{decompose, MdTree, NodeKind};
pub use models::{ExperimentRecord, ModelSpec};
pub use scf::{scf_verdict, ScfVerdict};
