//! Closed rational halfspaces `[a·x >= b]` in a fixed low dimension.
//!
//! Cells of the arrangement are found with exact linear programming: a sign
//! condition is realizable iff the slack LP
//!
//! ```text
//! maximize s  subject to  a·x >= b (positives),  a·x + s <= b (negatives),  0 <= s <= 1
//! ```
//!
//! has optimum `s > 0`. No tolerances are involved anywhere.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{build_critical_points, CriticalPointSet, FeasibilityTester, PointStructure};
use crate::learner::{learn, LearnOutcome, Teacher};
use crate::lp::{maximize, LinearProgram, LpOutcome};
use crate::predicate::{Assignment, FamilyDescriptor, FamilyKind, Mode, PredicateFamily, PredicateSet};
use crate::rational::{self, one, zero, Rational};

pub const DEFAULT_DIM_CAP: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub coeffs: Vec<Rational>,
    pub threshold: Rational,
}

impl Halfspace {
    pub fn new(coeffs: Vec<Rational>, threshold: Rational) -> Self {
        Halfspace { coeffs, threshold }
    }

    pub fn from_ints(coeffs: &[i64], threshold: i64) -> Self {
        Halfspace::new(coeffs.iter().map(|&c| rational::int(c)).collect(), rational::int(threshold))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn contains(&self, x: &Assignment) -> bool {
        self.lhs(x.values()) >= self.threshold
    }
}

impl std::fmt::Display for Halfspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*x{}", rational::format(c), i + 1))
            .collect();
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "[{lhs} >= {}]", rational::format(&self.threshold))
    }
}

#[derive(Clone, Debug)]
pub struct HalfspaceFamily {
    dim: usize,
    predicates: Vec<Halfspace>,
}

impl HalfspaceFamily {
    pub fn new(dim: usize, predicates: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFamily("halfspace dimension must be >= 1".into()));
        }
        if predicates.is_empty() {
            return Err(Error::InvalidFamily("halfspace family has no predicates".into()));
        }
        for (i, h) in predicates.iter().enumerate() {
            if h.coeffs.len() != dim {
                return Err(Error::InvalidFamily(format!(
                    "halfspace {i} has {} coefficients, expected {dim}",
                    h.coeffs.len()
                )));
            }
        }
        Ok(HalfspaceFamily { dim, predicates })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn predicates(&self) -> &[Halfspace] {
        &self.predicates
    }

    /// Axis-aligned box sides `[x_i >= lo_i]` and `[-x_i >= -hi_i]` for each axis.
    pub fn axis_box(bounds: &[(i64, i64)]) -> Self {
        let d = bounds.len();
        let mut preds = Vec::new();
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            let mut up = vec![0; d];
            up[i] = 1;
            preds.push(Halfspace::from_ints(&up, lo));
            let mut down = vec![0; d];
            down[i] = -1;
            preds.push(Halfspace::from_ints(&down, -hi));
        }
        HalfspaceFamily::new(d, preds).expect("box family is well formed")
    }
}

impl PredicateFamily for HalfspaceFamily {
    fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor { kind: FamilyKind::Halfspace, size: self.predicates.len(), domain_dim: self.dim, strict: None }
    }

    fn size(&self) -> usize {
        self.predicates.len()
    }

    fn domain_dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, idx: usize, a: &Assignment) -> bool {
        self.predicates[idx].contains(a)
    }

    fn predicate_label(&self, idx: usize) -> String {
        self.predicates[idx].to_string()
    }
}

/// Predicates required to be 1 (`positives`) and 0 (`negatives`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCondition {
    pub positives: PredicateSet,
    pub negatives: PredicateSet,
}

/// A rational point realizing `sc`, or `None` when the cell is empty.
pub fn feasible(family: &HalfspaceFamily, sc: &SignCondition) -> Result<Option<Assignment>> {
    if let Some(m) = sc.positives.union(&sc.negatives).max_index() {
        crate::predicate::check_index(family, m)?;
    }
    if !sc.positives.intersection(&sc.negatives).is_empty() {
        return Ok(None);
    }
    let d = family.dim;
    // variables: x+ (d), x- (d), s
    let n = 2 * d + 1;
    let mut lp = LinearProgram { objective: vec![zero(); n], rows: Vec::new() };
    lp.objective[2 * d] = one();
    for f in sc.positives.iter() {
        let h = &family.predicates[f];
        let mut row = vec![zero(); n];
        for (i, a) in h.coeffs.iter().enumerate() {
            row[i] = -a.clone();
            row[d + i] = a.clone();
        }
        lp.rows.push((row, -h.threshold.clone()));
    }
    for f in sc.negatives.iter() {
        let h = &family.predicates[f];
        let mut row = vec![zero(); n];
        for (i, a) in h.coeffs.iter().enumerate() {
            row[i] = a.clone();
            row[d + i] = -a.clone();
        }
        row[2 * d] = one();
        lp.rows.push((row, h.threshold.clone()));
    }
    let mut cap = vec![zero(); n];
    cap[2 * d] = one();
    lp.rows.push((cap, one()));
    match maximize(&lp) {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let x = (0..d).map(|i| &point[i] - &point[d + i]).collect();
            Ok(Some(Assignment::new(x)))
        }
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("slack is capped at 1"),
    }
}

impl FeasibilityTester for HalfspaceFamily {
    fn find_point(&self, positives: &PredicateSet, negatives: &PredicateSet) -> Result<Option<Assignment>> {
        feasible(self, &SignCondition { positives: positives.clone(), negatives: negatives.clone() })
    }
}

/// Upper bound on the number of cells: `|F|^(d+1)`, except that a single
/// non-constant halfspace always splits space in two.
pub fn cell_bound(size: usize, dim: usize) -> u128 {
    (size as u128).saturating_pow(dim as u32 + 1).max(2)
}

/// Critical points of a halfspace family; at most [`cell_bound`] of them.
pub fn build_halfspace_critical_points(family: &HalfspaceFamily, dim_cap: usize) -> Result<CriticalPointSet> {
    if family.dim > dim_cap {
        return Err(Error::GuardExceeded { what: "halfspace dimension", actual: family.dim, limit: dim_cap });
    }
    let c = build_critical_points(family, family)?;
    let bound = cell_bound(family.size(), family.dim);
    assert!(c.len() as u128 <= bound, "critical point count {} exceeds the cell bound {bound}", c.len());
    Ok(c)
}

pub fn halfspace_structure(family: Arc<HalfspaceFamily>, mode: Mode, dim_cap: usize) -> Result<PointStructure> {
    let c = build_halfspace_critical_points(&family, dim_cap)?;
    Ok(PointStructure::new(family, c, mode))
}

/// Learns a union (or-mode) or an intersection (and-mode) of halfspaces from the family.
pub fn learn_halfspace_union(family: Arc<HalfspaceFamily>, teacher: &mut dyn Teacher, mode: Mode) -> Result<LearnOutcome> {
    let st = halfspace_structure(family, mode, DEFAULT_DIM_CAP)?;
    learn(&st, teacher)
}
