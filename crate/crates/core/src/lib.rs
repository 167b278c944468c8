//! Exact learning of disjunctions and conjunctions over a known finite family of
//! predicates using membership queries only.
//!
//! The learner walks the Hasse diagram of representative functions from the top,
//! asking one query per unpruned immediate descendant of the current candidate.
//! Three families are built in:
//!
//! * [`table::TableFamily`]: predicates given by truth tables over a finite domain.
//! * [`halfspace::HalfspaceFamily`]: rational halfspaces in a fixed low dimension,
//!   with critical points computed by exact linear programming.
//! * [`ineq::IneqFamily`]: variable inequalities `[x_i > x_j]` (or `>=`), whose
//!   lattice is handled through reachability matrices.
//!
//! [`pattern`] applies the inequality learner to synthesize time-series pattern
//! detectors from a seed chart.

pub mod error;
pub mod family;
pub mod halfspace;
pub mod ineq;
pub mod lattice;
pub mod learner;
pub mod lp;
pub mod pattern;
pub mod predicate;
pub mod rational;
pub mod table;

mod bits;

pub use error::{Error, Result};
pub use family::Family;
pub use lattice::{HasseDiagram, LatticeStructure, Representative};
pub use learner::{learn, LearnSession, Step, Teacher};
pub use predicate::{Assignment, FamilyKind, Mode, PredicateFamily, PredicateSet};
