//! Families given extensionally: a finite domain and one truth row per predicate.

use std::collections::HashMap;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::predicate::{Assignment, FamilyDescriptor, FamilyKind, PredicateFamily};
use crate::rational;

#[derive(Clone, Debug)]
pub struct TableFamily {
    domain: Vec<Assignment>,
    /// `truth[f]` holds the domain indices where predicate `f` is 1.
    truth: Vec<Bits>,
    names: Vec<String>,
    index: HashMap<Assignment, usize>,
}

impl TableFamily {
    pub fn new(domain: Vec<Assignment>, rows: Vec<Vec<bool>>, names: Option<Vec<String>>) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::InvalidFamily("table domain is empty".into()));
        }
        if rows.is_empty() {
            return Err(Error::InvalidFamily("table has no predicates".into()));
        }
        let dim = domain[0].dim();
        if dim == 0 {
            return Err(Error::InvalidFamily("domain points must have dimension >= 1".into()));
        }
        let mut index = HashMap::with_capacity(domain.len());
        for (i, p) in domain.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::InvalidFamily(format!("domain point {p} has dimension {}, expected {dim}", p.dim())));
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::InvalidFamily(format!("duplicate domain point {p}")));
            }
        }
        let mut truth = Vec::with_capacity(rows.len());
        for (f, row) in rows.iter().enumerate() {
            if row.len() != domain.len() {
                return Err(Error::InvalidFamily(format!(
                    "truth row {f} has {} entries, domain has {}",
                    row.len(),
                    domain.len()
                )));
            }
            truth.push(row.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect());
        }
        let names = match names {
            Some(n) if n.len() == rows.len() => n,
            Some(n) => {
                return Err(Error::InvalidFamily(format!("{} names for {} predicates", n.len(), rows.len())));
            }
            None => (0..rows.len()).map(|i| format!("f{i}")).collect(),
        };
        Ok(TableFamily { domain, truth, names, index })
    }

    /// Tabulates any family over an explicit finite domain.
    pub fn render(family: &dyn PredicateFamily, domain: Vec<Assignment>) -> Result<Self> {
        let rows = (0..family.size()).map(|f| domain.iter().map(|a| family.eval(f, a)).collect()).collect();
        let names = (0..family.size()).map(|f| family.predicate_label(f)).collect();
        TableFamily::new(domain, rows, Some(names))
    }

    /// The ray family over `{1..max}^dim` with predicates `[x_i >= j]`, ordered by
    /// `(i, j)` lexicographically. `rays(2, 2)` is the four-predicate example with
    /// five representatives.
    pub fn rays(dim: usize, max: i64) -> Self {
        let domain = grid(dim, max);
        let mut rows = Vec::new();
        let mut names = Vec::new();
        for i in 0..dim {
            for j in 1..=max {
                let threshold = rational::int(j);
                rows.push(domain.iter().map(|a| a.values()[i] >= threshold).collect());
                names.push(format!("f{}{}", i + 1, j));
            }
        }
        TableFamily::new(domain, rows, Some(names)).expect("ray family is well formed")
    }

    pub fn domain(&self) -> &[Assignment] {
        &self.domain
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn point_index(&self, a: &Assignment) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn truth_row(&self, f: usize) -> Vec<bool> {
        (0..self.domain.len()).map(|i| self.truth[f].contains(i)).collect()
    }

    pub(crate) fn eval_at(&self, f: usize, point: usize) -> bool {
        self.truth[f].contains(point)
    }
}

impl PredicateFamily for TableFamily {
    fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor {
            kind: FamilyKind::Table,
            size: self.truth.len(),
            domain_dim: self.domain[0].dim(),
            strict: None,
        }
    }

    fn size(&self) -> usize {
        self.truth.len()
    }

    fn domain_dim(&self) -> usize {
        self.domain[0].dim()
    }

    fn eval(&self, idx: usize, a: &Assignment) -> bool {
        self.point_index(a).is_some_and(|p| self.truth[idx].contains(p))
    }

    fn check_domain(&self, a: &Assignment) -> Result<()> {
        if self.point_index(a).is_none() {
            return Err(Error::Invalid(format!("{a} is not a point of the table domain")));
        }
        Ok(())
    }

    fn predicate_label(&self, idx: usize) -> String {
        self.names[idx].clone()
    }
}

/// All integer points of `{1..max}^dim` in lexicographic order.
pub fn grid(dim: usize, max: i64) -> Vec<Assignment> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (1..=max).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Assignment::from_ints).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::{evaluate, evaluate_set, Mode, PredicateSet};

    #[test]
    fn ray22_layout() {
        let fam = TableFamily::rays(2, 2);
        assert_eq!(fam.size(), 4);
        assert_eq!(fam.names(), &["f11", "f12", "f21", "f22"]);
        assert_eq!(fam.domain().len(), 4);
        assert_eq!(fam.domain()[0], Assignment::from_ints([1, 1]));
    }

    #[test]
    fn evaluates_ray_predicates() {
        let fam = TableFamily::rays(2, 2);
        // f12 = [x1 >= 2] at (1,2)
        assert!(!evaluate(&fam, 1, &Assignment::from_ints([1, 2])).unwrap());
        // f11 is constant 1 on {1,2}^2
        for a in fam.domain().to_vec() {
            assert!(evaluate(&fam, 0, &a).unwrap());
        }
        let s = PredicateSet::from_indices([1, 3]);
        assert!(!evaluate_set(&fam, &s, &Assignment::from_ints([1, 1]), Mode::Or).unwrap());
        assert!(evaluate_set(&fam, &s, &Assignment::from_ints([2, 1]), Mode::Or).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let fam = TableFamily::rays(2, 2);
        assert!(matches!(evaluate(&fam, 4, &Assignment::from_ints([1, 1])), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(evaluate(&fam, 0, &Assignment::from_ints([1])), Err(Error::DimensionMismatch { .. })));
        assert!(evaluate(&fam, 0, &Assignment::from_ints([3, 1])).is_err());
        let dup = vec![Assignment::from_ints([1]), Assignment::from_ints([1])];
        assert!(TableFamily::new(dup, vec![vec![true, false]], None).is_err());
        assert!(TableFamily::new(vec![Assignment::from_ints([1])], vec![vec![true, false]], None).is_err());
    }
}
