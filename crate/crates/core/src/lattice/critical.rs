use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predicate::{Assignment, PredicateFamily, PredicateSet};
use crate::table::TableFamily;

/// One point per realizable full sign condition of a family, with its signature
/// (the set of predicates that are 1 there).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPointSet {
    pub points: Vec<Assignment>,
    pub signatures: Vec<PredicateSet>,
}

impl CriticalPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Re-evaluates every point and checks the stored signatures, and that no two agree.
    pub fn verify(&self, family: &dyn PredicateFamily) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (p, sig) in self.points.iter().zip(&self.signatures) {
            let actual: PredicateSet = (0..family.size()).filter(|&f| family.eval(f, p)).collect();
            if actual != *sig {
                return Err(Error::Invalid(format!("signature of {p} is {actual}, stored {sig}")));
            }
            if !seen.insert(sig.clone()) {
                return Err(Error::Invalid(format!("duplicate signature {sig}")));
            }
        }
        Ok(())
    }
}

/// Decides whether a partial sign condition is realizable and produces a point for it.
pub trait FeasibilityTester {
    /// A point where every predicate in `positives` is 1 and every one in `negatives`
    /// is 0, or `None` when no such point exists.
    fn find_point(&self, positives: &PredicateSet, negatives: &PredicateSet) -> Result<Option<Assignment>>;
}

/// Feasibility by scanning a finite domain in order.
pub struct TableScan<'a>(pub &'a TableFamily);

impl FeasibilityTester for TableScan<'_> {
    fn find_point(&self, positives: &PredicateSet, negatives: &PredicateSet) -> Result<Option<Assignment>> {
        let fam = self.0;
        Ok(fam
            .domain()
            .iter()
            .enumerate()
            .find(|(i, _)| positives.iter().all(|f| fam.eval_at(f, *i)) && negatives.iter().all(|f| !fam.eval_at(f, *i)))
            .map(|(_, p)| p.clone()))
    }
}

/// Builds critical points by splitting realizable cells one predicate at a time.
///
/// Cells over the first `i` predicates carry a point; when predicate `i` is added,
/// the branch containing that point is kept for free and only the opposite branch
/// needs a feasibility call.
pub fn build_critical_points(family: &dyn PredicateFamily, tester: &dyn FeasibilityTester) -> Result<CriticalPointSet> {
    let size = family.size();
    let root = tester
        .find_point(&PredicateSet::empty(), &PredicateSet::empty())?
        .ok_or_else(|| Error::InvalidFamily("domain is empty".into()))?;
    // (positives among the predicates seen so far, point)
    let mut cells: Vec<(PredicateSet, Assignment)> = vec![(PredicateSet::empty(), root)];
    let mut seen = PredicateSet::empty();
    for f in 0..size {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for (pos, point) in cells {
            let here = family.eval(f, &point);
            let (mut flip_pos, mut flip_neg) = (pos.clone(), seen.difference(&pos));
            if here {
                flip_neg.insert(f);
            } else {
                flip_pos.insert(f);
            }
            let flipped = tester.find_point(&flip_pos, &flip_neg)?;
            let kept_pos = if here { pos.with(f) } else { pos };
            next.push((kept_pos, point));
            if let Some(q) = flipped {
                next.push((flip_pos, q));
            }
        }
        cells = next;
        seen.insert(f);
    }
    let (signatures, points) = cells.into_iter().unzip();
    Ok(CriticalPointSet { points, signatures })
}
