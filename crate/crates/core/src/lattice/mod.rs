//! Representatives, the implication order between them, immediate descendants,
//! witnesses and critical points.
//!
//! Everything here works in the *disjunctive view*: a conjunction over `F` is
//! treated as the complement of a disjunction over the complemented predicates
//! (see [`Mode::view`]). Sets therefore shrink when moving down the diagram in
//! both modes, and a witness for `(G, G')` is a point where `G` is 1 and `G'`
//! is 0 in the view.

mod critical;
mod points;

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use critical::{build_critical_points, CriticalPointSet, FeasibilityTester, TableScan};
pub use points::PointStructure;

use crate::error::{Error, Result};
use crate::predicate::{check_assignment, check_set, Assignment, Mode, PredicateFamily, PredicateSet};

/// The maximal predicate set realizing a function; canonical element of its class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Representative {
    pub set: PredicateSet,
    pub mode: Mode,
}

impl Representative {
    pub fn new(set: PredicateSet, mode: Mode) -> Self {
        Representative { set, mode }
    }
}

/// Family-specific lattice machinery. Implementations decide functional equality,
/// enumerate immediate descendants and produce witnesses.
pub trait LatticeStructure: Send + Sync {
    fn mode(&self) -> Mode;

    /// Number of predicates in the underlying family.
    fn size(&self) -> usize;

    /// Whether `a` and `b` denote the same function.
    fn equal(&self, a: &PredicateSet, b: &PredicateSet) -> bool;

    /// Largest superset of `s` denoting the same function.
    fn closure(&self, s: &PredicateSet) -> PredicateSet {
        let mut out = s.clone();
        for f in 0..self.size() {
            if !s.contains(f) && self.equal(&s.with(f), s) {
                out.insert(f);
            }
        }
        out
    }

    /// All immediate descendants of the representative `g`, in discovery order.
    fn imm_descendants(&self, g: &PredicateSet) -> Result<Vec<PredicateSet>>;

    /// A point where `g` is 1 and its immediate descendant `child` is 0 (disjunctive view).
    fn witness(&self, g: &PredicateSet, child: &PredicateSet) -> Result<Assignment>;

    /// Value of the hypothesis `s` at `a` under the structure's mode.
    fn value(&self, s: &PredicateSet, a: &Assignment) -> bool;

    /// Theorem-backed upper bound on the number of queries a run needs, when one is known.
    fn query_bound(&self) -> Option<usize> {
        None
    }

    fn top(&self) -> PredicateSet {
        self.closure(&PredicateSet::full(self.size()))
    }

    fn bottom(&self) -> PredicateSet {
        self.closure(&PredicateSet::empty())
    }
}

pub fn closure(st: &dyn LatticeStructure, s: &PredicateSet) -> Representative {
    Representative::new(st.closure(s), st.mode())
}

pub fn is_representative(st: &dyn LatticeStructure, s: &PredicateSet) -> bool {
    st.closure(s) == *s
}

/// Least common ascendant: the closure of the union.
pub fn lca(st: &dyn LatticeStructure, g1: &Representative, g2: &Representative) -> Representative {
    closure(st, &g1.set.union(&g2.set))
}

/// Greatest common descendant: the intersection of two representatives is itself one.
pub fn gcd_rep(st: &dyn LatticeStructure, g1: &Representative, g2: &Representative) -> Representative {
    let set = g1.set.intersection(&g2.set);
    debug_assert!(is_representative(st, &set));
    Representative::new(set, st.mode())
}

/// Grows `seed` inside `g` while the join stays different from `g`. The result is an
/// immediate descendant of `g` containing `seed`. Candidates are tried in ascending
/// index order.
pub fn get_imm_de(st: &dyn LatticeStructure, g: &PredicateSet, seed: &PredicateSet) -> Result<Representative> {
    if !seed.is_subset(g) {
        return Err(Error::Precondition(format!("seed {seed} is not a subset of {g}")));
    }
    if st.equal(seed, g) {
        return Err(Error::Precondition(format!("seed {seed} already denotes the same function as {g}")));
    }
    let mut s = seed.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for f in g.difference(&s).members() {
            if !st.equal(&s.with(f), g) {
                s.insert(f);
                changed = true;
            }
        }
    }
    Ok(Representative::new(s, st.mode()))
}

/// Members of `g` that are 0 (in the disjunctive view) at every point of `pts`.
pub fn z_set(family: &dyn PredicateFamily, g: &PredicateSet, pts: &[Assignment], mode: Mode) -> Result<PredicateSet> {
    if pts.is_empty() {
        return Err(Error::Precondition("z_set needs at least one point".into()));
    }
    check_set(family, g)?;
    for p in pts {
        check_assignment(family, p)?;
        if !g.iter().any(|f| mode.view(family.eval(f, p))) {
            return Err(Error::Precondition(format!("{g} is 0 at {p} in the {mode}-view")));
        }
    }
    Ok(g.iter().filter(|&f| pts.iter().all(|p| !mode.view(family.eval(f, p)))).collect())
}

pub fn all_imm_de(st: &dyn LatticeStructure, g: &Representative) -> Result<Vec<Representative>> {
    Ok(st.imm_descendants(&g.set)?.into_iter().map(|s| Representative::new(s, st.mode())).collect())
}

pub fn find_witness(st: &dyn LatticeStructure, g: &Representative, child: &Representative) -> Result<Assignment> {
    st.witness(&g.set, &child.set)
}

/// Explicit cover graph of all representatives, top first.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HasseDiagram {
    pub mode: Mode,
    pub nodes: Vec<Representative>,
    /// `(parent, child)` index pairs.
    pub edges: Vec<(usize, usize)>,
}

pub const DEFAULT_HASSE_CAP: usize = 10_000;

pub fn build_hasse(st: &dyn LatticeStructure, cap: usize) -> Result<HasseDiagram> {
    let top = st.top();
    let mut index: HashMap<PredicateSet, usize> = HashMap::new();
    let mut nodes = vec![Representative::new(top.clone(), st.mode())];
    index.insert(top, 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let g = nodes[n].set.clone();
        for child in st.imm_descendants(&g)? {
            let c = match index.get(&child) {
                Some(&c) => c,
                None => {
                    let c = nodes.len();
                    if c >= cap {
                        return Err(Error::GuardExceeded { what: "representative count", actual: c + 1, limit: cap });
                    }
                    index.insert(child.clone(), c);
                    nodes.push(Representative::new(child, st.mode()));
                    queue.push_back(c);
                    c
                }
            };
            edges.push((n, c));
        }
    }
    Ok(HasseDiagram { mode: st.mode(), nodes, edges })
}

impl HasseDiagram {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn children(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |(p, _)| *p == node).map(|&(_, c)| c)
    }

    pub fn max_descendants(&self) -> usize {
        (0..self.nodes.len()).map(|n| self.children(n).count()).max().unwrap_or(0)
    }

    pub fn position(&self, set: &PredicateSet) -> Option<usize> {
        self.nodes.iter().position(|r| r.set == *set)
    }

    /// Information-theoretic and antichain lower bounds on the optimal query count.
    pub fn lower_bound(&self) -> usize {
        ceil_log2(self.nodes.len()).max(self.max_descendants())
    }

    /// Graphviz rendering; node labels are the sorted member indices.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=TB;\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", n.set);
        }
        for (p, c) in &self.edges {
            let _ = writeln!(out, "  n{p} -> n{c};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::table::TableFamily;

    fn ray22() -> (Arc<TableFamily>, PointStructure) {
        let fam = Arc::new(TableFamily::rays(2, 2));
        let st = PointStructure::for_table(fam.clone(), Mode::Or);
        (fam, st)
    }

    fn set(xs: &[usize]) -> PredicateSet {
        PredicateSet::from_indices(xs.iter().copied())
    }

    // Ray22 indices: f11=0, f12=1, f21=2, f22=3.

    #[test]
    fn closure_examples() {
        let (_, st) = ray22();
        assert_eq!(closure(&st, &set(&[0])).set, set(&[0, 1, 2, 3]));
        assert_eq!(closure(&st, &set(&[1])).set, set(&[1]));
        let top = st.top();
        assert_eq!(closure(&st, &top).set, top);
    }

    #[test]
    fn representative_examples() {
        let (_, st) = ray22();
        assert!(!is_representative(&st, &set(&[0])));
        assert!(is_representative(&st, &set(&[1, 3])));
        assert!(is_representative(&st, &set(&[])));
    }

    #[test]
    fn lca_and_gcd_examples() {
        let (_, st) = ray22();
        let r = |xs: &[usize]| Representative::new(set(xs), Mode::Or);
        assert_eq!(lca(&st, &r(&[1]), &r(&[3])).set, set(&[1, 3]));
        assert_eq!(lca(&st, &r(&[1]), &r(&[1])).set, set(&[1]));
        assert_eq!(lca(&st, &r(&[]), &r(&[1, 3])).set, set(&[1, 3]));
        assert_eq!(gcd_rep(&st, &r(&[1, 3]), &r(&[1])).set, set(&[1]));
        assert_eq!(gcd_rep(&st, &r(&[1, 3]), &r(&[0, 1, 2, 3])).set, set(&[1, 3]));
        assert_eq!(gcd_rep(&st, &r(&[1]), &r(&[3])).set, set(&[]));
    }

    #[test]
    fn get_imm_de_examples() {
        let (_, st) = ray22();
        let top = st.top();
        assert_eq!(get_imm_de(&st, &top, &set(&[])).unwrap().set, set(&[1, 3]));
        assert_eq!(get_imm_de(&st, &set(&[1, 3]), &set(&[1])).unwrap().set, set(&[1]));
        assert!(matches!(get_imm_de(&st, &top, &set(&[0])), Err(Error::Precondition(_))));
    }

    #[test]
    fn z_set_examples() {
        let (fam, st) = ray22();
        let top = st.top();
        let z = z_set(fam.as_ref(), &top, &[Assignment::from_ints([1, 1])], Mode::Or).unwrap();
        assert_eq!(z, set(&[1, 3]));
        let pts = [Assignment::from_ints([1, 2]), Assignment::from_ints([2, 1])];
        let both = z_set(fam.as_ref(), &top, &pts, Mode::Or).unwrap();
        let each = z_set(fam.as_ref(), &top, &pts[..1], Mode::Or)
            .unwrap()
            .intersection(&z_set(fam.as_ref(), &top, &pts[1..], Mode::Or).unwrap());
        assert_eq!(both, each);
        assert!(z_set(fam.as_ref(), &top, &[], Mode::Or).is_err());
        // {f12} is 0 at (1,1), so the point is outside g^-1(1)
        assert!(z_set(fam.as_ref(), &set(&[1]), &[Assignment::from_ints([1, 1])], Mode::Or).is_err());
    }

    #[test]
    fn all_imm_de_examples() {
        let (_, st) = ray22();
        let r = |xs: &[usize]| Representative::new(set(xs), Mode::Or);
        let sets = |v: Vec<Representative>| v.into_iter().map(|r| r.set).collect::<Vec<_>>();
        assert_eq!(sets(all_imm_de(&st, &r(&[0, 1, 2, 3])).unwrap()), vec![set(&[1, 3])]);
        let mut two = sets(all_imm_de(&st, &r(&[1, 3])).unwrap());
        two.sort();
        assert_eq!(two, vec![set(&[1]), set(&[3])]);
        assert_eq!(sets(all_imm_de(&st, &r(&[1])).unwrap()), vec![set(&[])]);
        assert!(all_imm_de(&st, &r(&[])).unwrap().is_empty());
    }

    #[test]
    fn witness_examples() {
        let (_, st) = ray22();
        let r = |xs: &[usize]| Representative::new(set(xs), Mode::Or);
        assert_eq!(find_witness(&st, &r(&[0, 1, 2, 3]), &r(&[1, 3])).unwrap(), Assignment::from_ints([1, 1]));
        let w = find_witness(&st, &r(&[1]), &r(&[])).unwrap();
        assert_eq!(w.values()[0], crate::rational::int(2));
        // a representative is never separated from itself
        assert!(matches!(find_witness(&st, &r(&[0, 1, 2, 3]), &r(&[0, 1, 2, 3])), Err(Error::NoWitness)));
    }

    #[test]
    fn ray22_hasse_has_five_nodes() {
        let (_, st) = ray22();
        let h = build_hasse(&st, DEFAULT_HASSE_CAP).unwrap();
        let mut sets: Vec<_> = h.nodes.iter().map(|n| n.set.clone()).collect();
        sets.sort();
        let mut expected = vec![set(&[0, 1, 2, 3]), set(&[1, 3]), set(&[1]), set(&[3]), set(&[])];
        expected.sort();
        assert_eq!(sets, expected);
        assert_eq!(h.edges.len(), 5);
        assert_eq!(h.max_descendants(), 2);
        assert!(h.to_dot().contains("n0 [label=\"{0,1,2,3}\"]"));
        assert!(matches!(build_hasse(&st, 3), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn single_predicate_family_has_two_nodes() {
        let fam = Arc::new(
            TableFamily::new(vec![Assignment::from_ints([0]), Assignment::from_ints([1])], vec![vec![false, true]], None)
                .unwrap(),
        );
        let st = PointStructure::for_table(fam, Mode::Or);
        assert_eq!(build_hasse(&st, 10).unwrap().len(), 2);
    }

    #[test]
    fn log2_ceiling() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }
}
