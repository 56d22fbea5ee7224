//! Symmetry breaking for finite-domain constraint problems.
//!
//! Leader constraints `a ⪯ σ(a)` can be posted for any simple ordering
//! (lex, reverse lex, Gray code, snake lex), checked against exact orbit
//! computations, and carried between orderings by conjugation. The crate
//! also ships a domain-consistent propagator for the Gray-code ordering
//! constraint and small reductions from 1-in-3-SAT and SAT.
//!
//! ```
//! use symbreak_core::breaker::{filter_solutions, leader_constraints, LeaderMode};
//! use symbreak_core::{enumerate_solutions, orbits, OrderingKind, Problem, Shape, SimpleOrdering, SymmetryGroup};
//!
//! # fn main() -> symbreak_core::Result<()> {
//! let shape = Shape::new(3, 3);
//! let problem = Problem::binary_matrix(shape);
//! let group = SymmetryGroup::row_col(shape, problem.domains().to_vec())?;
//! let gray = SimpleOrdering::binary(OrderingKind::Gray, 9, None)?;
//!
//! let solutions = enumerate_solutions(&problem, None)?;
//! let leaders = leader_constraints(&group, &gray, LeaderMode::Full)?;
//! let survivors = filter_solutions(&solutions, &leaders)?;
//! assert_eq!(survivors.len(), orbits(&solutions, &group)?.len());
//! assert_eq!(survivors.len(), 36);
//! # Ok(())
//! # }
//! ```

pub mod breaker;
pub mod cli;
pub mod error;
pub mod files;
pub mod gray;
pub mod model;
pub mod ordering;
pub mod propagate;
pub mod reductions;
pub mod symmetry;

pub use breaker::{
    breaking_set, doublelex_constraints, filter_solutions, leader_constraints, min_in_class, survivor_report,
    LeaderMode, Method, SurvivorReport, SymmetryBreakingSet,
};
pub use error::{Error, Result};
pub use gray::{gac_oracle, Granularity, GrayDecomposition};
pub use model::{enumerate_solutions, Assignment, Constraint, DomainStore, Literal, Problem, Shape, Value};
pub use ordering::{build_pi, AssignmentPermutation, OrderingKind, SimpleOrdering};
pub use propagate::{Fixpoint, PropagationTrace, TableNetwork};
pub use symmetry::{orbits, AssignmentSymmetry, LiteralSymmetry, OrbitPartition, Symmetry, SymmetryGroup};
