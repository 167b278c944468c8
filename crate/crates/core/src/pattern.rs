//! Time-series pattern synthesis from a seed chart.
//!
//! A pattern over `k` extreme points is a conjunction of comparisons
//! `[v_i >= v_j]`. The seed chart fixes `k` and the candidate comparisons (every
//! pair it satisfies); the inequality learner then asks the user about charts
//! built from its witnesses and the result is emitted as a small detection program:
//!
//! ```text
//! EXTREME 1 AS v1;
//! EXTREME 2 AS v2;
//! EXTREME 3 AS v3;
//! ALERT WHEN v1 >= v2 AND v1 >= v3 AND v3 >= v2;
//! ```
//!
//! `EXTREME i AS name;` binds the `i`-th of the last `k` points of a series, in
//! order, and the single `ALERT WHEN` line is a conjunction of `name >= name`
//! comparisons, or `TRUE`. Blank lines and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::{ineq_structure, IneqFamily};
use crate::learner::{learn, LearnOutcome, Teacher};
use crate::predicate::{Assignment, PredicateSet};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    values: Vec<Rational>,
}

#[derive(Deserialize)]
struct CsvRow {
    index: usize,
    value: String,
}

impl Chart {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Invalid(format!("a chart needs at least 2 points, got {}", values.len())));
        }
        Ok(Chart { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Chart::new(values.iter().map(|&v| rational::int(v)).collect())
    }

    /// Reads `index,value` CSV with indices `1..=k` in order.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["index", "value"] {
            return Err(Error::Parse(format!("chart CSV header must be `index,value`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut values = Vec::new();
        for row in rdr.deserialize() {
            let row: CsvRow = row?;
            if row.index != values.len() + 1 {
                return Err(Error::Parse(format!("chart index {} out of order, expected {}", row.index, values.len() + 1)));
            }
            values.push(rational::parse(&row.value)?);
        }
        Chart::new(values)
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        Chart::from_csv(text.as_bytes())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, rational::to_decimal(v, 6)));
        }
        out
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment::new(self.values.clone())
    }

    /// One-line block rendering for terminals, lowest value at the bottom.
    pub fn sparkline(&self) -> String {
        const BARS: [char; 8] = ['▁', '▂', '▃', '▄', '▅', '▆', '▇', '█'];
        let lo = self.values.iter().min().expect("charts are nonempty");
        let hi = self.values.iter().max().expect("charts are nonempty");
        let span = hi - lo;
        self.values
            .iter()
            .map(|v| {
                if span == rational::int(0) {
                    BARS[3]
                } else {
                    let t = (v - lo) * rational::int(7) / &span;
                    BARS[rational::to_f64(&t).round() as usize]
                }
            })
            .collect()
    }
}

/// A witness assignment shown to the user as a chart.
pub fn witness_to_chart(a: &Assignment) -> Result<Chart> {
    Chart::new(a.values().to_vec())
}

/// Every ordered pair `(i, j)`, `i != j`, with `c(i) >= c(j)`, as `>=` predicates in
/// lexicographic pair order.
pub fn seed_family(chart: &Chart) -> Result<IneqFamily> {
    let k = chart.k();
    let c = chart.values();
    let pairs = (1..=k).flat_map(|i| (1..=k).map(move |j| (i, j))).filter(|&(i, j)| i != j && c[i - 1] >= c[j - 1]).collect();
    IneqFamily::new(k, pairs, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternProgram {
    pub k: usize,
    /// Learned comparisons `(i, j)` meaning `v_i >= v_j`, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub source_text: String,
}

impl PatternProgram {
    pub fn from_formula(fam: &IneqFamily, formula: &PredicateSet) -> Self {
        let mut pairs = fam.pairs_of(formula);
        pairs.sort();
        let source_text = emit_dsl(fam.n(), &pairs);
        PatternProgram { k: fam.n(), pairs, source_text }
    }

    /// Whether the last `k` points of `series` match.
    pub fn matches(&self, series: &[Rational]) -> Result<bool> {
        interpret(&parse_dsl(&self.source_text)?, series)
    }
}

pub fn emit_dsl(k: usize, pairs: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for i in 1..=k {
        out.push_str(&format!("EXTREME {i} AS v{i};\n"));
    }
    let mut sorted = pairs.to_vec();
    sorted.sort();
    let cond = if sorted.is_empty() {
        "TRUE".to_string()
    } else {
        sorted.iter().map(|(i, j)| format!("v{i} >= v{j}")).collect::<Vec<_>>().join(" AND ")
    };
    out.push_str(&format!("ALERT WHEN {cond};\n"));
    out
}

/// A parsed detection program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslProgram {
    pub k: usize,
    pub comparisons: Vec<(usize, usize)>,
}

pub fn parse_dsl(text: &str) -> Result<DslProgram> {
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut alert: Option<Vec<(usize, usize)>> = None;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("line {}: {msg}: `{line}`", no + 1));
        let body = line.strip_suffix(';').ok_or_else(|| err("missing `;`"))?.trim();
        if alert.is_some() {
            return Err(err("statement after ALERT"));
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        match words.as_slice() {
            ["EXTREME", idx, "AS", name] => {
                let idx: usize = idx.parse().map_err(|_| err("bad extreme index"))?;
                if idx != names.len() + 1 {
                    return Err(err("extreme indices must be 1, 2, ... in order"));
                }
                if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || names.contains_key(*name) {
                    return Err(err("bad or repeated name"));
                }
                names.insert(name.to_string(), idx);
            }
            ["ALERT", "WHEN", "TRUE"] => alert = Some(Vec::new()),
            ["ALERT", "WHEN", rest @ ..] => {
                let mut cmps = Vec::new();
                for (n, chunk) in rest.split(|w| *w == "AND").enumerate() {
                    let [a, ">=", b] = chunk else {
                        return Err(err(&format!("comparison {} is not `name >= name`", n + 1)));
                    };
                    let lookup = |v: &str| names.get(v).copied().ok_or_else(|| err(&format!("unknown name {v}")));
                    cmps.push((lookup(a)?, lookup(b)?));
                }
                alert = Some(cmps);
            }
            _ => return Err(err("unrecognized statement")),
        }
    }
    let comparisons = alert.ok_or_else(|| Error::Parse("program has no ALERT statement".into()))?;
    if names.len() < 2 {
        return Err(Error::Parse("program binds fewer than 2 extremes".into()));
    }
    Ok(DslProgram { k: names.len(), comparisons })
}

/// Evaluates the program on the last `k` points of `series`.
pub fn interpret(p: &DslProgram, series: &[Rational]) -> Result<bool> {
    if series.len() < p.k {
        return Err(Error::Invalid(format!("series has {} points, program needs {}", series.len(), p.k)));
    }
    let window = &series[series.len() - p.k..];
    Ok(p.comparisons.iter().all(|&(i, j)| window[i - 1] >= window[j - 1]))
}

/// Machine-readable companion of a saved program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub k: usize,
    pub pairs: Vec<(usize, usize)>,
    pub seed: Vec<String>,
    pub queries: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub family: Arc<IneqFamily>,
    pub program: PatternProgram,
    pub outcome: LearnOutcome,
}

impl Synthesis {
    pub fn sidecar(&self, seed: &Chart, transcript: Option<String>) -> Sidecar {
        Sidecar {
            k: self.program.k,
            pairs: self.program.pairs.clone(),
            seed: seed.values().iter().map(rational::format).collect(),
            queries: self.outcome.queries(),
            transcript,
        }
    }
}

/// Learns the user's pattern from `chart`; the teacher sees witness charts as assignments.
pub fn synthesize(chart: &Chart, teacher: &mut dyn Teacher) -> Result<Synthesis> {
    let family = Arc::new(seed_family(chart)?);
    let st = ineq_structure(family.clone())?;
    let outcome = learn(st.as_ref(), teacher)?;
    let program = PatternProgram::from_formula(&family, &outcome.representative.set);
    Ok(Synthesis { family, program, outcome })
}
