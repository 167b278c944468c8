use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::lattice::critical::{build_critical_points, CriticalPointSet, TableScan};
use crate::lattice::{get_imm_de, LatticeStructure};
use crate::predicate::{eval_set_unchecked, Assignment, Mode, PredicateFamily, PredicateSet};
use crate::table::TableFamily;

/// Lattice machinery driven by a critical point set: every realizable cell of the
/// family has a probe point, so two predicate sets denote the same function iff they
/// agree on all probes, and counterexamples and witnesses can be found by scanning.
pub struct PointStructure {
    family: Arc<dyn PredicateFamily + Send + Sync>,
    mode: Mode,
    critical: CriticalPointSet,
    /// Per probe point, the predicates that are 1 there in the disjunctive view.
    sigs: Vec<Bits>,
    /// Per predicate, the probe points where it is 1 in the disjunctive view.
    cols: Vec<Bits>,
}

impl PointStructure {
    pub fn new(family: Arc<dyn PredicateFamily + Send + Sync>, critical: CriticalPointSet, mode: Mode) -> Self {
        let size = family.size();
        let full = Bits::full(size);
        let sigs: Vec<Bits> = critical
            .signatures
            .iter()
            .map(|s| match mode {
                Mode::Or => s.bits().clone(),
                Mode::And => full.difference(s.bits()),
            })
            .collect();
        let mut cols = vec![Bits::new(); size];
        for (p, sig) in sigs.iter().enumerate() {
            for f in sig.iter() {
                cols[f].insert(p);
            }
        }
        PointStructure { family, mode, critical, sigs, cols }
    }

    pub fn for_table(family: Arc<TableFamily>, mode: Mode) -> Self {
        let critical = build_critical_points(family.as_ref(), &TableScan(family.as_ref()))
            .expect("table feasibility by scan cannot fail on a validated table");
        PointStructure::new(family, critical, mode)
    }

    pub fn critical_points(&self) -> &CriticalPointSet {
        &self.critical
    }

    pub fn family(&self) -> &(dyn PredicateFamily + Send + Sync) {
        self.family.as_ref()
    }

    /// Probe points where the join of `s` is 1 in the disjunctive view.
    fn support(&self, s: &PredicateSet) -> Bits {
        let mut out = Bits::new();
        for f in s.iter() {
            out.union_with(&self.cols[f]);
        }
        out
    }

    /// A probe point where `g` is 1 and `⋁_i ⋀(g \ found_i)` is 0, if any.
    pub fn eq2_counterexample(&self, g: &PredicateSet, found: &[PredicateSet]) -> Option<usize> {
        let gb = g.bits();
        let gaps: Vec<Bits> = found.iter().map(|d| gb.difference(d.bits())).collect();
        (0..self.sigs.len()).find(|&p| {
            let sig = &self.sigs[p];
            gb.intersects(sig) && gaps.iter().all(|gap| !gap.is_subset(sig))
        })
    }

    pub fn probe(&self, p: usize) -> &Assignment {
        &self.critical.points[p]
    }
}

impl LatticeStructure for PointStructure {
    fn mode(&self) -> Mode {
        self.mode
    }

    fn size(&self) -> usize {
        self.cols.len()
    }

    fn equal(&self, a: &PredicateSet, b: &PredicateSet) -> bool {
        a == b || self.support(a) == self.support(b)
    }

    fn closure(&self, s: &PredicateSet) -> PredicateSet {
        let sup = self.support(s);
        let mut out = s.clone();
        for (f, col) in self.cols.iter().enumerate() {
            if col.is_subset(&sup) {
                out.insert(f);
            }
        }
        out
    }

    fn imm_descendants(&self, g: &PredicateSet) -> Result<Vec<PredicateSet>> {
        let empty = PredicateSet::empty();
        if self.equal(g, &empty) {
            return Ok(Vec::new());
        }
        let mut found = vec![get_imm_de(self, g, &empty)?.set];
        while let Some(p) = self.eq2_counterexample(g, &found) {
            let z = PredicateSet::from_bits(g.bits().difference(&self.sigs[p]));
            let next = get_imm_de(self, g, &z)?.set;
            if found.iter().any(|d| next.is_subset(d)) {
                return Err(Error::Precondition(format!("{g} is not a representative: climb from {z} repeated a descendant")));
            }
            found.push(next);
        }
        Ok(found)
    }

    fn witness(&self, g: &PredicateSet, child: &PredicateSet) -> Result<Assignment> {
        let gap = g.bits().difference(child.bits());
        // Every witness of an immediate-descendant pair has all of g \ child at 1
        // and all of child at 0; the scan insists on both.
        (0..self.sigs.len())
            .find(|&p| {
                let sig = &self.sigs[p];
                !gap.is_empty() && gap.is_subset(sig) && !child.bits().intersects(sig)
            })
            .map(|p| self.critical.points[p].clone())
            .ok_or(Error::NoWitness)
    }

    fn value(&self, s: &PredicateSet, a: &Assignment) -> bool {
        eval_set_unchecked(self.family.as_ref(), s, a, self.mode)
    }
}
