use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use spex_core::ineq::IneqFamily;
use spex_core::lattice::LatticeStructure;
use spex_core::learner::{Status, TranscriptRecord};
use spex_core::pattern::{seed_family, witness_to_chart, Chart, PatternProgram};
use spex_core::predicate::NumberText;
use spex_core::rational;
use spex_core::{Family, LearnSession, Mode, PredicateFamily};

use crate::error::ApiError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SessionKind {
    Pattern,
    FamilyOr,
    FamilyAnd,
}

/// Seed chart as sent by a client: CSV text or a list of numbers.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ChartInput {
    Csv(String),
    Values(Vec<NumberText>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub kind: SessionKind,
    #[serde(default)]
    pub chart: Option<ChartInput>,
    #[serde(default)]
    pub family: Option<Value>,
}

/// Everything needed to rebuild a session's engine; stored in the index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionSpec {
    pub kind: SessionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Value>,
}

impl CreateRequest {
    pub fn into_spec(self) -> Result<SessionSpec, ApiError> {
        match (self.kind, self.chart, self.family) {
            (SessionKind::Pattern, Some(chart), None) => {
                let chart = match chart {
                    ChartInput::Csv(text) => Chart::parse_csv(&text)?,
                    ChartInput::Values(values) => {
                        Chart::new(values.into_iter().map(NumberText::into_rational).collect::<Result<_, _>>()?)?
                    }
                };
                let csv = (1..=chart.k())
                    .map(|i| format!("{i},{}", rational::format(&chart.values()[i - 1])))
                    .fold(String::from("index,value\n"), |acc, row| acc + &row + "\n");
                Ok(SessionSpec { kind: SessionKind::Pattern, chart: Some(csv), family: None })
            }
            (SessionKind::Pattern, _, _) => Err(ApiError::BadRequest("pattern sessions take a `chart` and no `family`".into())),
            (kind, None, Some(family)) => Ok(SessionSpec { kind, chart: None, family: Some(family) }),
            (_, _, _) => Err(ApiError::BadRequest("family sessions take a `family` and no `chart`".into())),
        }
    }
}

/// One persisted answer: the transcript record plus the client's idempotency key.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnswerLine {
    pub key: String,
    /// Unix seconds when the answer was accepted.
    #[serde(default)]
    pub at: u64,
    #[serde(flatten)]
    pub record: TranscriptRecord,
}

#[derive(Debug, Serialize)]
pub struct ChartPoint {
    pub index: usize,
    pub value: String,
    pub exact: String,
}

#[derive(Debug, Serialize)]
pub struct QueryView {
    pub seq: usize,
    pub assignment: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chart: Option<Vec<ChartPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparkline: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Progress {
    pub queries: usize,
    pub bound: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ResultView {
    pub members: Vec<usize>,
    pub labels: Vec<String>,
    pub queries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub program: Option<PatternProgram>,
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub id: String,
    pub kind: SessionKind,
    pub status: Status,
    pub created: u64,
    pub updated: u64,
    pub progress: Progress,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<QueryView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultView>,
}

/// Body of `POST /sessions/{id}/answer`.
#[derive(Debug)]
pub struct AnswerRequest {
    pub answer: bool,
    pub key: String,
    pub seq: Option<usize>,
}

impl AnswerRequest {
    pub fn parse(body: &[u8]) -> Result<Self, ApiError> {
        let v: Value = serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(format!("body is not JSON: {e}")))?;
        let answer = match v.get("answer").and_then(Value::as_u64) {
            Some(0) => false,
            Some(1) => true,
            _ => return Err(ApiError::BadRequest("`answer` must be 0 or 1".into())),
        };
        let key = match v.get("key").and_then(Value::as_str) {
            Some(k) if !k.is_empty() => k.to_string(),
            _ => return Err(ApiError::BadRequest("`key` (idempotency key) is required".into())),
        };
        let seq = match v.get("seq") {
            None | Some(Value::Null) => None,
            Some(s) => Some(s.as_u64().ok_or_else(|| ApiError::BadRequest("`seq` must be a positive integer".into()))? as usize),
        };
        Ok(AnswerRequest { answer, key, seq })
    }
}

/// In-memory state of one session.
pub struct Live {
    pub id: String,
    pub spec: SessionSpec,
    pub created: u64,
    pub updated: u64,
    structure: Box<dyn LatticeStructure>,
    pattern: Option<Arc<IneqFamily>>,
    labels: Vec<String>,
    bound: Option<usize>,
    session: LearnSession,
    keys: HashMap<String, bool>,
}

impl Live {
    pub fn build(id: String, spec: SessionSpec, created: u64) -> Result<Live, ApiError> {
        let (structure, pattern, labels, bound): (Box<dyn LatticeStructure>, _, Vec<String>, _) = match spec.kind {
            SessionKind::Pattern => {
                let chart = Chart::parse_csv(spec.chart.as_deref().unwrap_or_default())?;
                let fam = Arc::new(seed_family(&chart)?);
                let st = spex_core::ineq::ineq_structure(fam.clone())?;
                let labels = (0..fam.size()).map(|k| fam.predicate_label(k)).collect();
                (st, Some(fam), labels, Some(chart.k() * chart.k()))
            }
            SessionKind::FamilyOr | SessionKind::FamilyAnd => {
                let text = spec.family.as_ref().map(Value::to_string).unwrap_or_default();
                let fam = Family::from_json(&text)?;
                let mode = if spec.kind == SessionKind::FamilyOr { Mode::Or } else { Mode::And };
                let st = fam.structure(mode)?;
                let bound = st.query_bound();
                let labels = (0..fam.size()).map(|k| fam.predicate_label(k)).collect();
                (st, None, labels, bound)
            }
        };
        let session = LearnSession::new(structure.as_ref());
        let mut live = Live { id, spec, created, updated: created, structure, pattern, labels, bound, session, keys: HashMap::new() };
        live.session.step(live.structure.as_ref())?;
        Ok(live)
    }

    /// Rebuilds a session from its spec and persisted answers.
    pub fn restore(id: String, spec: SessionSpec, created: u64, lines: &[AnswerLine]) -> Result<Live, ApiError> {
        let mut live = Live::build(id, spec, created)?;
        for line in lines {
            let expected = live.session.pending().cloned();
            if expected.as_ref() != Some(&line.record.assignment) {
                return Err(ApiError::Internal(format!(
                    "session {}: stored answer {} does not match the replayed query",
                    live.id, line.record.seq
                )));
            }
            live.session.submit_answer(line.record.answer)?;
            live.session.step(live.structure.as_ref())?;
            live.keys.insert(line.key.clone(), line.record.answer);
            live.updated = line.at.max(live.updated);
        }
        Ok(live)
    }

    pub fn status(&self) -> Status {
        self.session.status()
    }

    pub fn transcript(&self) -> &[TranscriptRecord] {
        self.session.transcript()
    }

    pub fn query(&self) -> Result<QueryView, ApiError> {
        let a = self.session.pending().ok_or_else(|| ApiError::Conflict(format!("session {} is done", self.id)))?;
        let (chart, sparkline) = match &self.pattern {
            Some(_) => {
                let chart = witness_to_chart(a)?;
                let points = chart
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| ChartPoint { index: i + 1, value: rational::to_decimal(v, 6), exact: rational::format(v) })
                    .collect();
                (Some(points), Some(chart.sparkline()))
            }
            None => (None, None),
        };
        Ok(QueryView { seq: self.session.query_count() + 1, assignment: a.to_strings(), chart, sparkline })
    }

    pub fn result(&self) -> Result<ResultView, ApiError> {
        let rep = self.session.result().ok_or_else(|| ApiError::Conflict(format!("session {} is still running", self.id)))?;
        let members = rep.set.members();
        Ok(ResultView {
            labels: members.iter().map(|&k| self.labels[k].clone()).collect(),
            members,
            queries: self.session.query_count(),
            program: self.pattern.as_ref().map(|fam| PatternProgram::from_formula(fam, &rep.set)),
        })
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id.clone(),
            kind: self.spec.kind,
            status: self.status(),
            created: self.created,
            updated: self.updated,
            progress: Progress { queries: self.session.query_count(), bound: self.bound },
            query: self.query().ok(),
            result: self.result().ok(),
        }
    }

    /// Whether `req` repeats an already-applied answer. A reused key with a
    /// different answer is a conflict.
    pub fn is_repeat(&self, req: &AnswerRequest) -> Result<bool, ApiError> {
        match self.keys.get(&req.key) {
            Some(&bit) if bit == req.answer => Ok(true),
            Some(_) => Err(ApiError::Conflict(format!("key {:?} was already used with a different answer", req.key))),
            None => Ok(false),
        }
    }

    /// Computes the next state without committing it, so it can be persisted first.
    pub fn prepare(&self, req: &AnswerRequest, now: u64) -> Result<(LearnSession, AnswerLine), ApiError> {
        if self.status() == Status::Done {
            return Err(ApiError::Conflict(format!("session {} is done", self.id)));
        }
        let expected = self.session.query_count() + 1;
        if let Some(seq) = req.seq {
            if seq != expected {
                return Err(ApiError::Conflict(format!("answer is for query {seq}, pending query is {expected}")));
            }
        }
        let mut next = self.session.clone();
        next.submit_answer(req.answer)?;
        let record = next.transcript().last().expect("an answer was just recorded").clone();
        next.step(self.structure.as_ref())?;
        Ok((next, AnswerLine { key: req.key.clone(), at: now, record }))
    }

    pub fn commit(&mut self, next: LearnSession, line: &AnswerLine) {
        self.session = next;
        self.keys.insert(line.key.clone(), line.record.answer);
        self.updated = line.at;
    }
}
