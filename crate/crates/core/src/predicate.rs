//! Shared value types and the contract every predicate family implements.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A point of a family's domain.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<Rational>);

impl Assignment {
    pub fn new(values: Vec<Rational>) -> Self {
        Assignment(values)
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(values: I) -> Self {
        Assignment(values.into_iter().map(rational::int).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational::format).collect()
    }

    pub fn parse<S: AsRef<str>>(values: &[S]) -> Result<Self> {
        values.iter().map(|v| rational::parse(v.as_ref())).collect::<Result<Vec<_>>>().map(Assignment)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<NumberText> = Vec::deserialize(deserializer)?;
        raw.into_iter()
            .map(|n| n.into_rational())
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
            .map_err(serde::de::Error::custom)
    }
}

/// A number in a structured-text file: either a JSON integer or a string holding
/// `p/q`, an integer, or a decimal.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum NumberText {
    Int(i64),
    Text(String),
}

impl NumberText {
    pub fn into_rational(self) -> Result<Rational> {
        match self {
            NumberText::Int(v) => Ok(rational::int(v)),
            NumberText::Text(s) => rational::parse(&s),
        }
    }
}

/// A set of predicate indices. Always canonical: iteration is strictly ascending
/// and equality is set equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateSet(Bits);

impl PredicateSet {
    pub fn empty() -> Self {
        PredicateSet(Bits::new())
    }

    pub fn full(size: usize) -> Self {
        PredicateSet(Bits::full(size))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        PredicateSet(indices.into_iter().collect())
    }

    pub(crate) fn from_bits(bits: Bits) -> Self {
        PredicateSet(bits)
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.0.contains(idx)
    }

    pub fn insert(&mut self, idx: usize) -> bool {
        self.0.insert(idx)
    }

    pub fn remove(&mut self, idx: usize) -> bool {
        self.0.remove(idx)
    }

    pub fn with(&self, idx: usize) -> Self {
        let mut s = self.clone();
        s.insert(idx);
        s
    }

    pub fn without(&self, idx: usize) -> Self {
        let mut s = self.clone();
        s.remove(idx);
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter()
    }

    pub fn members(&self) -> Vec<usize> {
        self.0.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        PredicateSet(self.0.union(&other.0))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        PredicateSet(self.0.intersection(&other.0))
    }

    pub fn difference(&self, other: &Self) -> Self {
        PredicateSet(self.0.difference(&other.0))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0) && self.0 != other.0
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last()
    }
}

impl FromIterator<usize> for PredicateSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        PredicateSet::from_indices(iter)
    }
}

impl fmt::Display for PredicateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for PredicateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for PredicateSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PredicateSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Vec::<usize>::deserialize(deserializer)?.into_iter().collect())
    }
}

/// Whether a predicate set denotes the disjunction or the conjunction of its members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Or,
    And,
}

impl Mode {
    /// Maps a truth value into the disjunctive view used by the lattice engine.
    /// Conjunctions over `F` are handled as negated disjunctions over the
    /// complemented predicates, so in and-mode every bit is flipped.
    pub fn view(self, bit: bool) -> bool {
        match self {
            Mode::Or => bit,
            Mode::And => !bit,
        }
    }

    pub fn dual(self) -> Mode {
        match self {
            Mode::Or => Mode::And,
            Mode::And => Mode::Or,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "or" => Ok(Mode::Or),
            "and" => Ok(Mode::And),
            other => Err(Error::Invalid(format!("unknown mode {other:?} (expected or|and)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Or => "or",
            Mode::And => "and",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Table,
    Halfspace,
    VarIneq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    pub size: usize,
    pub domain_dim: usize,
    /// Strictness of an inequality family (`>` vs `>=`); absent for other kinds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
}

/// A finite indexed family of boolean predicates over a domain of rational vectors.
///
/// Implementations must be pure: `eval` always returns the same bit for the same input.
pub trait PredicateFamily {
    fn descriptor(&self) -> FamilyDescriptor;

    fn size(&self) -> usize {
        self.descriptor().size
    }

    fn domain_dim(&self) -> usize {
        self.descriptor().domain_dim
    }

    /// Unchecked evaluation; callers have validated `idx` and the dimension of `a`.
    fn eval(&self, idx: usize, a: &Assignment) -> bool;

    /// Rejects points outside a finite domain. Families over all of `Q^d` accept everything.
    fn check_domain(&self, _a: &Assignment) -> Result<()> {
        Ok(())
    }

    /// Human-readable name of a predicate, used in exports.
    fn predicate_label(&self, idx: usize) -> String {
        format!("f{idx}")
    }
}

pub fn check_index(family: &dyn PredicateFamily, idx: usize) -> Result<()> {
    let size = family.size();
    if idx >= size {
        return Err(Error::IndexOutOfRange { index: idx, size });
    }
    Ok(())
}

pub fn check_set(family: &dyn PredicateFamily, s: &PredicateSet) -> Result<()> {
    match s.max_index() {
        Some(m) => check_index(family, m),
        None => Ok(()),
    }
}

pub fn check_assignment(family: &dyn PredicateFamily, a: &Assignment) -> Result<()> {
    let expected = family.domain_dim();
    if a.dim() != expected {
        return Err(Error::DimensionMismatch { expected, got: a.dim() });
    }
    family.check_domain(a)
}

pub fn evaluate(family: &dyn PredicateFamily, idx: usize, a: &Assignment) -> Result<bool> {
    check_index(family, idx)?;
    check_assignment(family, a)?;
    Ok(family.eval(idx, a))
}

/// Value of the disjunction (`Mode::Or`) or conjunction (`Mode::And`) of `s` at `a`.
/// The empty disjunction is 0 and the empty conjunction is 1.
pub fn evaluate_set(family: &dyn PredicateFamily, s: &PredicateSet, a: &Assignment, mode: Mode) -> Result<bool> {
    check_set(family, s)?;
    check_assignment(family, a)?;
    Ok(eval_set_unchecked(family, s, a, mode))
}

pub(crate) fn eval_set_unchecked(family: &dyn PredicateFamily, s: &PredicateSet, a: &Assignment, mode: Mode) -> bool {
    match mode {
        Mode::Or => s.iter().any(|i| family.eval(i, a)),
        Mode::And => s.iter().all(|i| family.eval(i, a)),
    }
}
