//! Family files: JSON descriptions of the three built-in kinds, and dispatch from a
//! parsed family to its lattice structure.
//!
//! ```json
//! {"kind": "table", "domain": [[1,1],[1,2]], "predicates": [{"name": "f", "truth": [0,1]}]}
//! {"kind": "halfspace", "d": 2, "predicates": [["1","0","3/2"], ["0","1","2"]]}
//! {"kind": "var_ineq", "n": 3, "pairs": [[1,2],[2,3]], "strict": true}
//! ```
//!
//! Target files name a predicate set, by index or (for inequality families) by pair:
//! `{"members": [0, 2]}` or `{"pairs": [[1,2]]}`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfspace::{build_halfspace_critical_points, halfspace_structure, Halfspace, HalfspaceFamily, DEFAULT_DIM_CAP};
use crate::ineq::{ineq_structure, IneqFamily};
use crate::lattice::{build_critical_points, CriticalPointSet, LatticeStructure, PointStructure, TableScan};
use crate::learner::{learn, LearnOutcome, Teacher};
use crate::predicate::{check_set, Assignment, FamilyDescriptor, Mode, NumberText, PredicateFamily, PredicateSet};
use crate::rational;
use crate::table::TableFamily;

#[derive(Clone, Debug)]
pub enum Family {
    Table(Arc<TableFamily>),
    Halfspace(Arc<HalfspaceFamily>),
    VarIneq(Arc<IneqFamily>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Bit {
    Int(u8),
    Bool(bool),
}

#[derive(Serialize, Deserialize)]
struct TableRow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    truth: Vec<Bit>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FamilyFile {
    Table {
        domain: Vec<Vec<NumberText>>,
        predicates: Vec<TableRow>,
    },
    Halfspace {
        d: usize,
        predicates: Vec<Vec<NumberText>>,
    },
    VarIneq {
        n: usize,
        pairs: Vec<(usize, usize)>,
        #[serde(default = "default_strict")]
        strict: bool,
    },
}

fn default_strict() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetFile {
    #[serde(default)]
    members: Option<Vec<usize>>,
    #[serde(default)]
    pairs: Option<Vec<(usize, usize)>>,
}

impl Family {
    pub fn from_json(text: &str) -> Result<Family> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| Error::InvalidFamily(e.to_string()))?;
        Ok(match file {
            FamilyFile::Table { domain, predicates } => {
                let domain = domain
                    .into_iter()
                    .map(|p| p.into_iter().map(NumberText::into_rational).collect::<Result<Vec<_>>>().map(Assignment::new))
                    .collect::<Result<Vec<_>>>()?;
                let mut names = Vec::with_capacity(predicates.len());
                let mut rows = Vec::with_capacity(predicates.len());
                for (i, row) in predicates.into_iter().enumerate() {
                    names.push(row.name.unwrap_or_else(|| format!("f{i}")));
                    rows.push(
                        row.truth
                            .into_iter()
                            .map(|b| match b {
                                Bit::Bool(b) => Ok(b),
                                Bit::Int(0) => Ok(false),
                                Bit::Int(1) => Ok(true),
                                Bit::Int(v) => Err(Error::InvalidFamily(format!("truth value {v} is not 0 or 1"))),
                            })
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                Family::Table(Arc::new(TableFamily::new(domain, rows, Some(names))?))
            }
            FamilyFile::Halfspace { d, predicates } => {
                let mut hs = Vec::with_capacity(predicates.len());
                for (i, row) in predicates.into_iter().enumerate() {
                    if row.len() != d + 1 {
                        return Err(Error::InvalidFamily(format!(
                            "halfspace row {i} has {} entries, expected d+1 = {}",
                            row.len(),
                            d + 1
                        )));
                    }
                    let mut vals = row.into_iter().map(NumberText::into_rational).collect::<Result<Vec<_>>>()?;
                    let b = vals.pop().expect("row is nonempty");
                    hs.push(Halfspace::new(vals, b));
                }
                Family::Halfspace(Arc::new(HalfspaceFamily::new(d, hs)?))
            }
            FamilyFile::VarIneq { n, pairs, strict } => Family::VarIneq(Arc::new(IneqFamily::new(n, pairs, strict)?)),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Family> {
        Family::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let file = match self {
            Family::Table(t) => FamilyFile::Table {
                domain: t.domain().iter().map(|a| a.to_strings().into_iter().map(NumberText::Text).collect()).collect(),
                predicates: (0..t.size())
                    .map(|f| TableRow {
                        name: Some(t.names()[f].clone()),
                        truth: t.truth_row(f).into_iter().map(|b| Bit::Int(b as u8)).collect(),
                    })
                    .collect(),
            },
            Family::Halfspace(h) => FamilyFile::Halfspace {
                d: h.dim(),
                predicates: h
                    .predicates()
                    .iter()
                    .map(|p| {
                        p.coeffs.iter().chain([&p.threshold]).map(|v| NumberText::Text(rational::format(v))).collect()
                    })
                    .collect(),
            },
            Family::VarIneq(f) => FamilyFile::VarIneq { n: f.n(), pairs: f.pairs().to_vec(), strict: f.strict() },
        };
        serde_json::to_value(file).expect("family files always serialize")
    }

    pub fn as_dyn(&self) -> Arc<dyn PredicateFamily + Send + Sync> {
        match self {
            Family::Table(t) => t.clone(),
            Family::Halfspace(h) => h.clone(),
            Family::VarIneq(f) => f.clone(),
        }
    }

    fn inner(&self) -> &dyn PredicateFamily {
        match self {
            Family::Table(t) => t.as_ref(),
            Family::Halfspace(h) => h.as_ref(),
            Family::VarIneq(f) => f.as_ref(),
        }
    }

    /// The lattice structure used to learn `mode`-combinations of this family.
    pub fn structure(&self, mode: Mode) -> Result<Box<dyn LatticeStructure>> {
        Ok(match (self, mode) {
            (Family::Table(t), _) => Box::new(PointStructure::for_table(t.clone(), mode)),
            (Family::Halfspace(h), _) => Box::new(halfspace_structure(h.clone(), mode, DEFAULT_DIM_CAP)?),
            (Family::VarIneq(f), Mode::And) => ineq_structure(f.clone())?,
            (Family::VarIneq(f), Mode::Or) => {
                let critical = build_critical_points(f.as_ref(), f.as_ref())?;
                Box::new(PointStructure::new(f.clone(), critical, Mode::Or))
            }
        })
    }

    /// One point per realizable cell; the query pool for exhaustive checks.
    pub fn critical_points(&self) -> Result<CriticalPointSet> {
        match self {
            Family::Table(t) => build_critical_points(t.as_ref(), &TableScan(t.as_ref())),
            Family::Halfspace(h) => build_halfspace_critical_points(h, DEFAULT_DIM_CAP),
            Family::VarIneq(f) => build_critical_points(f.as_ref(), f.as_ref()),
        }
    }

    pub fn set_equal(&self, a: &PredicateSet, b: &PredicateSet, mode: Mode) -> Result<bool> {
        check_set(self, a)?;
        check_set(self, b)?;
        Ok(self.structure(mode)?.equal(a, b))
    }

    pub fn parse_target(&self, text: &str) -> Result<PredicateSet> {
        let t: TargetFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("target file: {e}")))?;
        let set = match (t.members, t.pairs, self) {
            (Some(m), None, _) => m.into_iter().collect(),
            (None, Some(p), Family::VarIneq(f)) => f.set_of(&p)?,
            (None, Some(_), _) => return Err(Error::Invalid("`pairs` targets need a var_ineq family".into())),
            _ => return Err(Error::Invalid("target file needs exactly one of `members` or `pairs`".into())),
        };
        check_set(self, &set)?;
        Ok(set)
    }

    pub fn learn(&self, mode: Mode, teacher: &mut dyn Teacher) -> Result<LearnOutcome> {
        learn(self.structure(mode)?.as_ref(), teacher)
    }
}

impl PredicateFamily for Family {
    fn descriptor(&self) -> FamilyDescriptor {
        self.inner().descriptor()
    }

    fn size(&self) -> usize {
        self.inner().size()
    }

    fn domain_dim(&self) -> usize {
        self.inner().domain_dim()
    }

    fn eval(&self, idx: usize, a: &Assignment) -> bool {
        self.inner().eval(idx, a)
    }

    fn check_domain(&self, a: &Assignment) -> Result<()> {
        self.inner().check_domain(a)
    }

    fn predicate_label(&self, idx: usize) -> String {
        self.inner().predicate_label(idx)
    }
}
