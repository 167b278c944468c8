//! Variable-inequality predicates `[x_i > x_j]` (strict) or `[x_i >= x_j]` over
//! pairs `I ⊆ [n]^2`, viewed as a directed graph on `n` vertices.
//!
//! For an acyclic pair set, two conjunctions denote the same function iff their
//! edge sets have the same transitive closure, so every lattice operation reduces
//! to reachability. Vertices are 1-based in the public API and 0-based inside.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::lattice::{build_critical_points, FeasibilityTester, LatticeStructure, PointStructure};
use crate::learner::{learn, LearnOutcome, Teacher};
use crate::predicate::{
    eval_set_unchecked, Assignment, FamilyDescriptor, FamilyKind, Mode, PredicateFamily, PredicateSet,
};
use crate::rational;

pub const DEFAULT_ENUM_GUARD: usize = 20;

#[derive(Clone, Debug)]
pub struct IneqFamily {
    n: usize,
    pairs: Vec<(usize, usize)>,
    strict: bool,
    index: HashMap<(usize, usize), usize>,
}

impl IneqFamily {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>, strict: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFamily("variable count must be >= 1".into()));
        }
        if pairs.is_empty() {
            return Err(Error::InvalidFamily("inequality family has no pairs".into()));
        }
        let mut index = HashMap::with_capacity(pairs.len());
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                return Err(Error::InvalidFamily(format!("pair ({i},{j}) outside 1..={n}")));
            }
            if i == j {
                return Err(Error::InvalidFamily(format!("diagonal pair ({i},{i})")));
            }
            if index.insert((i, j), k).is_some() {
                return Err(Error::InvalidFamily(format!("duplicate pair ({i},{j})")));
            }
        }
        Ok(IneqFamily { n, pairs, strict, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.pairs[k]
    }

    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    /// Predicate set for the given 1-based pairs; every pair must belong to the family.
    pub fn set_of(&self, pairs: &[(usize, usize)]) -> Result<PredicateSet> {
        pairs
            .iter()
            .map(|&(i, j)| self.index_of(i, j).ok_or_else(|| Error::Invalid(format!("pair ({i},{j}) is not in the family"))))
            .collect()
    }

    pub fn pairs_of(&self, s: &PredicateSet) -> Vec<(usize, usize)> {
        s.iter().map(|k| self.pairs[k]).collect()
    }

    fn edges(&self, s: &PredicateSet) -> Vec<(usize, usize)> {
        s.iter().map(|k| (self.pairs[k].0 - 1, self.pairs[k].1 - 1)).collect()
    }

    pub fn full(&self) -> PredicateSet {
        PredicateSet::full(self.pairs.len())
    }

    pub fn is_acyclic(&self) -> bool {
        is_acyclic(self, &self.full())
    }
}

impl PredicateFamily for IneqFamily {
    fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor { kind: FamilyKind::VarIneq, size: self.pairs.len(), domain_dim: self.n, strict: Some(self.strict) }
    }

    fn size(&self) -> usize {
        self.pairs.len()
    }

    fn domain_dim(&self) -> usize {
        self.n
    }

    fn eval(&self, idx: usize, a: &Assignment) -> bool {
        let (i, j) = self.pairs[idx];
        let (x, y) = (&a.values()[i - 1], &a.values()[j - 1]);
        if self.strict {
            x > y
        } else {
            x >= y
        }
    }

    fn predicate_label(&self, idx: usize) -> String {
        let (i, j) = self.pairs[idx];
        format!("[x{i} {} x{j}]", if self.strict { ">" } else { ">=" })
    }
}

/// `rows[u]` holds every vertex reachable from `u` by a path of length >= 1.
fn transitive(n: usize, edges: &[(usize, usize)]) -> Vec<Bits> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    (0..n)
        .map(|s| {
            let mut seen = Bits::new();
            let mut stack = adj[s].clone();
            while let Some(v) = stack.pop() {
                if seen.insert(v) {
                    stack.extend(&adj[v]);
                }
            }
            seen
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachabilityMatrix {
    n: usize,
    #[serde(skip)]
    rows: Vec<Bits>,
}

impl ReachabilityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether a directed path of length >= 1 leads from `i` to `j` (1-based).
    pub fn reaches(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1].contains(j - 1)
    }

    pub fn is_acyclic(&self) -> bool {
        (0..self.n).all(|u| !self.rows[u].contains(u))
    }

    /// 1-based `(i, j)` entries equal to 1, row-major.
    pub fn ones(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|u| self.rows[u].iter().map(move |v| (u + 1, v + 1))).collect()
    }

    pub fn off_diagonal_eq(&self, other: &ReachabilityMatrix) -> bool {
        self.n == other.n
            && (0..self.n).all(|u| {
                let mut a = self.rows[u].clone();
                let mut b = other.rows[u].clone();
                a.remove(u);
                b.remove(u);
                a == b
            })
    }
}

pub fn reach(fam: &IneqFamily, s: &PredicateSet) -> ReachabilityMatrix {
    ReachabilityMatrix { n: fam.n, rows: transitive(fam.n, &fam.edges(s)) }
}

pub fn is_acyclic(fam: &IneqFamily, s: &PredicateSet) -> bool {
    reach(fam, s).is_acyclic()
}

/// Functional equality of two pair sets under `mode`.
///
/// For conjunctions of `>` a cyclic set is unsatisfiable, so two cyclic sets agree
/// and a cyclic set never equals an acyclic one; acyclic sets agree iff their
/// closures coincide. Conjunctions of `>=` agree iff their closures coincide off
/// the diagonal. Disjunctions are complements of conjunctions of the reversed,
/// strictness-swapped pairs, and reversing transposes both closures.
pub fn ineq_equal(fam: &IneqFamily, s1: &PredicateSet, s2: &PredicateSet, mode: Mode) -> bool {
    let strict_rule = fam.strict == (mode == Mode::And);
    let (r1, r2) = (reach(fam, s1), reach(fam, s2));
    if strict_rule {
        match (r1.is_acyclic(), r2.is_acyclic()) {
            (false, false) => true,
            (true, true) => r1 == r2,
            _ => false,
        }
    } else {
        r1.off_diagonal_eq(&r2)
    }
}

/// Largest pair set denoting the same conjunction as `s`.
pub fn ineq_representative(fam: &IneqFamily, s: &PredicateSet) -> PredicateSet {
    let r = reach(fam, s);
    if fam.strict && !r.is_acyclic() {
        return fam.full();
    }
    let mut out = s.clone();
    for (k, &(i, j)) in fam.pairs.iter().enumerate() {
        if r.reaches(i, j) {
            out.insert(k);
        }
    }
    out
}

fn reaches_without(fam: &IneqFamily, s: &PredicateSet, from: usize, to: usize) -> bool {
    transitive(fam.n, &fam.edges(s))[from - 1].contains(to - 1)
}

/// Immediate descendants of the conjunction `g`, which must be a representative.
///
/// For acyclic `g`, dropping the pair `(r, s)` yields a descendant exactly when no
/// other path from `r` to `s` remains. For a cyclic strict family the top is the
/// constant 0, whose descendants are the maximal acyclic subgraphs.
pub fn ineq_imm_descendants(fam: &IneqFamily, g: &PredicateSet) -> Result<Vec<PredicateSet>> {
    if !is_acyclic(fam, g) {
        if !fam.strict {
            return Err(Error::Precondition(format!(
                "{g} is cyclic; descendants of cyclic >= sets need the generic structure"
            )));
        }
        if *g != fam.full() {
            return Err(Error::Precondition(format!("{g} is cyclic but not the closed top")));
        }
        return enumerate_max_acyclic(fam, DEFAULT_ENUM_GUARD);
    }
    let mut out = Vec::new();
    for k in g.iter() {
        let (r, s) = fam.pairs[k];
        let reduced = g.without(k);
        if !reaches_without(fam, &reduced, r, s) {
            out.push(reduced);
        }
    }
    Ok(out)
}

/// Longest-path layering of a graph whose vertices are grouped: every edge must
/// strictly decrease the level, vertices of one group share a level, sinks sit at 1.
/// `None` when the grouped graph has a cycle.
fn layer(n: usize, group: &[usize], edges: &[(usize, usize)]) -> Option<Vec<i64>> {
    let groups = group.iter().max().map_or(0, |m| m + 1);
    let mut adj = vec![Vec::new(); groups];
    for &(u, v) in edges {
        adj[group[u]].push(group[v]);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; groups];
    let mut level = vec![0i64; groups];
    fn visit(g: usize, adj: &[Vec<usize>], state: &mut [u8], level: &mut [i64]) -> bool {
        match state[g] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        state[g] = 1;
        let mut best = 0;
        for &h in &adj[g] {
            if !visit(h, adj, state, level) {
                return false;
            }
            best = best.max(level[h]);
        }
        level[g] = best + 1;
        state[g] = 2;
        true
    }
    for g in 0..groups {
        if !visit(g, &adj, &mut state, &mut level) {
            return None;
        }
    }
    Some((0..n).map(|v| level[group[v]]).collect())
}

fn to_assignment(levels: Vec<i64>) -> Assignment {
    Assignment::new(levels.into_iter().map(rational::int).collect())
}

/// An assignment in `[1..n]^n` with `a_i > a_j` for every pair of `s`.
pub fn toposort_assignment(fam: &IneqFamily, s: &PredicateSet) -> Result<Assignment> {
    let ident: Vec<usize> = (0..fam.n).collect();
    layer(fam.n, &ident, &fam.edges(s))
        .map(to_assignment)
        .ok_or_else(|| Error::Cyclic(format!("pair set {:?} has a cycle", fam.pairs_of(s))))
}

/// A point where the conjunction `child` holds and `g` does not.
pub fn ineq_witness(fam: &IneqFamily, g: &PredicateSet, child: &PredicateSet) -> Result<Assignment> {
    if !child.is_proper_subset(g) {
        return Err(Error::Precondition(format!("{child} is not a proper subset of {g}")));
    }
    let a = if fam.strict && !is_acyclic(fam, g) {
        toposort_assignment(fam, child)?
    } else {
        let gap = g.difference(child);
        if gap.len() != 1 {
            return Err(Error::Precondition(format!("{child} differs from {g} in more than one pair")));
        }
        let (r, s) = fam.pairs[gap.iter().next().expect("one member")];
        let (r, s) = (r - 1, s - 1);
        let mut edges = fam.edges(child);
        let group: Vec<usize> = if fam.strict {
            // a_r = a_s falsifies [x_r > x_s]
            (0..fam.n).map(|v| if v == s { r } else { v }).collect()
        } else {
            // a_s > a_r falsifies [x_r >= x_s]
            edges.push((s, r));
            (0..fam.n).collect()
        };
        let group = compact(&group);
        let levels = layer(fam.n, &group, &edges)
            .ok_or_else(|| Error::Precondition(format!("{child} is not an immediate descendant of {g}")))?;
        to_assignment(levels)
    };
    debug_assert!(eval_set_unchecked(fam, child, &a, Mode::And));
    if eval_set_unchecked(fam, g, &a, Mode::And) {
        return Err(Error::NoWitness);
    }
    Ok(a)
}

fn compact(group: &[usize]) -> Vec<usize> {
    let mut ids = HashMap::new();
    group
        .iter()
        .map(|g| {
            let next = ids.len();
            *ids.entry(*g).or_insert(next)
        })
        .collect()
}

/// All maximal acyclic subsets of the family's pairs, sorted. An acyclic family
/// yields just the full set.
///
/// Branch and bound over the pairs in index order: each pair is included when that
/// keeps the graph acyclic, and excluded only while some completion could still make
/// it close a cycle (otherwise the leaf would not be maximal). Exponential in the
/// worst case; guarded by `guard` on the pair count.
pub fn enumerate_max_acyclic(fam: &IneqFamily, guard: usize) -> Result<Vec<PredicateSet>> {
    let m = fam.pairs.len();
    if m > guard {
        return Err(Error::GuardExceeded { what: "pair count for enumeration", actual: m, limit: guard });
    }
    if fam.is_acyclic() {
        return Ok(vec![fam.full()]);
    }
    let edges = fam.edges(&fam.full());
    let mut search = Search { n: fam.n, edges: &edges, out: Vec::new() };
    let reach = vec![Bits::new(); fam.n];
    search.rec(0, &mut PredicateSet::empty(), &reach, &mut Vec::new());
    let mut out = search.out;
    out.sort();
    Ok(out)
}

struct Search<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    out: Vec<PredicateSet>,
}

impl Search<'_> {
    /// Whether `from` can reach `to` using the chosen edges plus edges `k..`.
    fn could_reach(&self, from: usize, to: usize, chosen: &PredicateSet, k: usize) -> bool {
        let usable: Vec<(usize, usize)> =
            self.edges.iter().enumerate().filter(|(e, _)| *e >= k || chosen.contains(*e)).map(|(_, &e)| e).collect();
        transitive(self.n, &usable)[from].contains(to)
    }

    fn rec(&mut self, k: usize, chosen: &mut PredicateSet, reach: &[Bits], excluded: &mut Vec<usize>) {
        for &e in excluded.iter() {
            let (u, v) = self.edges[e];
            if !reach[v].contains(u) && !self.could_reach(v, u, chosen, k) {
                return;
            }
        }
        if k == self.edges.len() {
            if excluded.iter().all(|&e| reach[self.edges[e].1].contains(self.edges[e].0)) {
                self.out.push(chosen.clone());
            }
            return;
        }
        let (u, v) = self.edges[k];
        if reach[v].contains(u) {
            excluded.push(k);
            self.rec(k + 1, chosen, reach, excluded);
            excluded.pop();
            return;
        }
        let mut grown = reach.to_vec();
        let mut tail = reach[v].clone();
        tail.insert(v);
        for a in 0..self.n {
            if a == u || reach[a].contains(u) {
                grown[a].union_with(&tail);
            }
        }
        chosen.insert(k);
        self.rec(k + 1, chosen, &grown, excluded);
        chosen.remove(k);
        excluded.push(k);
        self.rec(k + 1, chosen, reach, excluded);
        excluded.pop();
    }
}

/// Sign conditions over inequality predicates are difference constraints with
/// weights 0 and 1; they are feasible iff no cycle contains a strict edge, and
/// longest-path levels give an integer solution.
impl FeasibilityTester for IneqFamily {
    fn find_point(&self, positives: &PredicateSet, negatives: &PredicateSet) -> Result<Option<Assignment>> {
        // (u, v, strict): x_u >= x_v, or x_u > x_v when strict
        let mut cons = Vec::new();
        for k in positives.iter() {
            let (i, j) = self.pairs[k];
            cons.push((i - 1, j - 1, self.strict));
        }
        for k in negatives.iter() {
            let (i, j) = self.pairs[k];
            cons.push((j - 1, i - 1, !self.strict));
        }
        let plain: Vec<(usize, usize)> = cons.iter().map(|&(u, v, _)| (u, v)).collect();
        let r = transitive(self.n, &plain);
        if cons.iter().any(|&(u, v, strict)| strict && r[v].contains(u)) {
            return Ok(None);
        }
        // strongly connected components share a value
        let scc: Vec<usize> =
            (0..self.n).map(|u| (0..self.n).find(|&w| w == u || (r[u].contains(w) && r[w].contains(u))).unwrap()).collect();
        let group = compact(&scc);
        let groups = group.iter().max().map_or(0, |m| m + 1);
        let mut level = vec![1i64; groups];
        // Bellman-Ford style longest paths on the condensation
        for _ in 0..groups {
            let mut changed = false;
            for &(u, v, strict) in &cons {
                let (gu, gv) = (group[u], group[v]);
                if gu == gv {
                    continue;
                }
                let need = level[gv] + i64::from(strict);
                if level[gu] < need {
                    level[gu] = need;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(Some(to_assignment((0..self.n).map(|v| level[group[v]]).collect())))
    }
}

/// Conjunction lattice of an inequality family, computed from reachability.
pub struct IneqStructure {
    fam: Arc<IneqFamily>,
    bound: OnceLock<Option<usize>>,
}

impl IneqStructure {
    /// Fails for `>=` families with cyclic pairs, which need [`ineq_structure`]'s fallback.
    pub fn new(fam: Arc<IneqFamily>) -> Result<Self> {
        if !fam.strict && !fam.is_acyclic() {
            return Err(Error::Precondition("cyclic >= families are handled by the generic structure".into()));
        }
        Ok(IneqStructure { fam, bound: OnceLock::new() })
    }

    pub fn family(&self) -> &IneqFamily {
        &self.fam
    }
}

impl LatticeStructure for IneqStructure {
    fn mode(&self) -> Mode {
        Mode::And
    }

    fn size(&self) -> usize {
        self.fam.pairs.len()
    }

    fn equal(&self, a: &PredicateSet, b: &PredicateSet) -> bool {
        ineq_equal(&self.fam, a, b, Mode::And)
    }

    fn closure(&self, s: &PredicateSet) -> PredicateSet {
        ineq_representative(&self.fam, s)
    }

    fn imm_descendants(&self, g: &PredicateSet) -> Result<Vec<PredicateSet>> {
        ineq_imm_descendants(&self.fam, g)
    }

    fn witness(&self, g: &PredicateSet, child: &PredicateSet) -> Result<Assignment> {
        ineq_witness(&self.fam, g, child)
    }

    fn value(&self, s: &PredicateSet, a: &Assignment) -> bool {
        eval_set_unchecked(self.fam.as_ref(), s, a, Mode::And)
    }

    /// `|I|` for acyclic families, `N + |I|` with `N` maximal acyclic subgraphs otherwise.
    fn query_bound(&self) -> Option<usize> {
        *self.bound.get_or_init(|| {
            let m = self.fam.pairs.len();
            if self.fam.is_acyclic() {
                Some(m)
            } else {
                enumerate_max_acyclic(&self.fam, DEFAULT_ENUM_GUARD).ok().map(|e| e.len() + m)
            }
        })
    }
}

/// The conjunction structure for any inequality family: reachability-based when the
/// theory applies, critical points otherwise (`>=` with cyclic pairs).
pub fn ineq_structure(fam: Arc<IneqFamily>) -> Result<Box<dyn LatticeStructure>> {
    if fam.strict || fam.is_acyclic() {
        return Ok(Box::new(IneqStructure::new(fam)?));
    }
    let critical = build_critical_points(fam.as_ref(), fam.as_ref())?;
    Ok(Box::new(PointStructure::new(fam, critical, Mode::And)))
}

pub fn learn_ineq(fam: Arc<IneqFamily>, teacher: &mut dyn Teacher) -> Result<LearnOutcome> {
    let st = ineq_structure(fam)?;
    learn(st.as_ref(), teacher)
}
