//! The learner: a resumable state machine walking the Hasse diagram from the top.
//!
//! Each round takes the current candidate `G`, enumerates its immediate
//! descendants and asks for the witness of every descendant not already ruled
//! out by an eliminated set. A 0 (disjunctive view) means the target lies below
//! that descendant, so the working set shrinks to the intersection; a 1 rules
//! out everything below it. A round with no shrink ends the run.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{build_hasse, HasseDiagram, LatticeStructure, Representative};
use crate::predicate::{eval_set_unchecked, Assignment, Mode, PredicateFamily, PredicateSet};

/// Answers membership queries for a hidden target.
pub trait Teacher {
    fn answer(&mut self, a: &Assignment) -> Result<bool>;
}

impl<F: FnMut(&Assignment) -> Result<bool>> Teacher for F {
    fn answer(&mut self, a: &Assignment) -> Result<bool> {
        self(a)
    }
}

/// Evaluates a known target; used for tests, benchmarks and `--teacher simulated`.
pub struct SimulatedTeacher<'a> {
    family: &'a dyn PredicateFamily,
    target: PredicateSet,
    mode: Mode,
    asked: usize,
}

impl<'a> SimulatedTeacher<'a> {
    pub fn new(family: &'a dyn PredicateFamily, target: PredicateSet, mode: Mode) -> Result<Self> {
        crate::predicate::check_set(family, &target)?;
        Ok(SimulatedTeacher { family, target, mode, asked: 0 })
    }

    pub fn target(&self) -> &PredicateSet {
        &self.target
    }

    /// How many times the teacher itself was consulted.
    pub fn asked(&self) -> usize {
        self.asked
    }
}

impl Teacher for SimulatedTeacher<'_> {
    fn answer(&mut self, a: &Assignment) -> Result<bool> {
        crate::predicate::check_assignment(self.family, a)?;
        self.asked += 1;
        Ok(eval_set_unchecked(self.family, &self.target, a, self.mode))
    }
}

/// Replays a fixed answer list, optionally checking each expected assignment.
#[derive(Clone, Debug, Default)]
pub struct ScriptedTeacher {
    entries: Vec<(Option<Assignment>, bool)>,
    pos: usize,
    given: HashMap<Assignment, bool>,
}

impl ScriptedTeacher {
    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        ScriptedTeacher { entries: bits.into_iter().map(|b| (None, b)).collect(), ..Default::default() }
    }

    pub fn from_transcript(records: &[TranscriptRecord]) -> Self {
        ScriptedTeacher {
            entries: records.iter().map(|r| (Some(r.assignment.clone()), r.answer)).collect(),
            ..Default::default()
        }
    }

    pub fn remaining(&self) -> usize {
        self.entries.len() - self.pos
    }

    /// Errors if the script was not fully consumed.
    pub fn finish(&self) -> Result<()> {
        if self.remaining() > 0 {
            return Err(Error::ScriptDivergence {
                seq: self.pos + 1,
                reason: format!("learner finished with {} scripted answers unused", self.remaining()),
            });
        }
        Ok(())
    }
}

impl Teacher for ScriptedTeacher {
    fn answer(&mut self, a: &Assignment) -> Result<bool> {
        let seq = self.pos + 1;
        let Some((expected, bit)) = self.entries.get(self.pos).cloned() else {
            return Err(Error::ScriptDivergence { seq, reason: format!("script exhausted, learner asked {a}") });
        };
        if let Some(e) = expected {
            if e != *a {
                return Err(Error::ScriptDivergence { seq, reason: format!("expected query {e}, learner asked {a}") });
            }
        }
        if let Some(&first) = self.given.get(a) {
            if first != bit {
                return Err(Error::InconsistentTeacher { assignment: a.clone(), first, second: bit });
            }
        }
        self.given.insert(a.clone(), bit);
        self.pos += 1;
        Ok(bit)
    }
}

mod bit {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*v as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(D::Error::custom(format!("answer must be 0 or 1, got {other}"))),
        }
    }
}

/// One answered query. `answer` is the teacher's bit for the target itself, not the view.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub seq: usize,
    pub assignment: Assignment,
    #[serde(with = "bit")]
    pub answer: bool,
    pub candidate_before: usize,
    pub candidate_after: usize,
}

pub fn write_transcript(mut w: impl Write, records: &[TranscriptRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_transcript(r: impl BufRead) -> Result<Vec<TranscriptRecord>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TranscriptRecord = serde_json::from_str(&line)?;
        if rec.seq != out.len() + 1 {
            return Err(Error::Parse(format!("transcript record {} has seq {}", out.len() + 1, rec.seq)));
        }
        out.push(rec);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    NextQuery(Assignment),
    Done(Representative),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Running,
    Done,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Round {
    candidate: PredicateSet,
    descendants: Vec<PredicateSet>,
    cursor: usize,
}

/// Resumable learner state. Drive it with [`LearnSession::step`] and
/// [`LearnSession::submit_answer`], or all at once with [`learn`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LearnSession {
    mode: Mode,
    size: usize,
    /// Working set `S`: starts each round at the candidate and shrinks on 0-answers.
    current: PredicateSet,
    flag: bool,
    eliminated: Vec<PredicateSet>,
    round: Option<Round>,
    pending: Option<Assignment>,
    transcript: Vec<TranscriptRecord>,
    /// Descendant tested by each transcript entry.
    tested: Vec<PredicateSet>,
    candidates: Vec<PredicateSet>,
    max_descendants: usize,
    cache_hits: usize,
    status: Status,
    result: Option<PredicateSet>,
}

impl LearnSession {
    pub fn new(st: &dyn LatticeStructure) -> Self {
        LearnSession {
            mode: st.mode(),
            size: st.size(),
            current: st.top(),
            flag: true,
            eliminated: Vec::new(),
            round: None,
            pending: None,
            transcript: Vec::new(),
            tested: Vec::new(),
            candidates: Vec::new(),
            max_descendants: 0,
            cache_hits: 0,
            status: Status::Running,
            result: None,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn current(&self) -> &PredicateSet {
        &self.current
    }

    pub fn eliminated(&self) -> &[PredicateSet] {
        &self.eliminated
    }

    pub fn transcript(&self) -> &[TranscriptRecord] {
        &self.transcript
    }

    /// The descendant whose witness produced each transcript entry.
    pub fn tested(&self) -> &[PredicateSet] {
        &self.tested
    }

    /// Candidate of every round started so far, in order.
    pub fn candidates(&self) -> &[PredicateSet] {
        &self.candidates
    }

    pub fn query_count(&self) -> usize {
        self.transcript.len()
    }

    pub fn cache_hits(&self) -> usize {
        self.cache_hits
    }

    pub fn max_descendants_seen(&self) -> usize {
        self.max_descendants
    }

    pub fn pending(&self) -> Option<&Assignment> {
        self.pending.as_ref()
    }

    pub fn result(&self) -> Option<Representative> {
        self.result.clone().map(|s| Representative::new(s, self.mode))
    }

    fn check_structure(&self, st: &dyn LatticeStructure) -> Result<()> {
        if st.mode() != self.mode || st.size() != self.size {
            return Err(Error::Session(format!(
                "session is {}-mode over {} predicates, structure is {}-mode over {}",
                self.mode,
                self.size,
                st.mode(),
                st.size()
            )));
        }
        Ok(())
    }

    fn cached(&self, a: &Assignment) -> Option<bool> {
        self.transcript.iter().find(|r| r.assignment == *a).map(|r| r.answer)
    }

    /// Advances until a new query is needed or the run ends. Idempotent while a
    /// query is pending.
    pub fn step(&mut self, st: &dyn LatticeStructure) -> Result<Step> {
        self.check_structure(st)?;
        loop {
            if self.status == Status::Done {
                return Ok(Step::Done(self.result().expect("done sessions carry a result")));
            }
            if let Some(a) = &self.pending {
                return Ok(Step::NextQuery(a.clone()));
            }
            let Some(round) = &mut self.round else {
                let candidate = self.current.clone();
                let descendants = st.imm_descendants(&candidate)?;
                self.max_descendants = self.max_descendants.max(descendants.len());
                self.candidates.push(candidate.clone());
                assert!(self.candidates.len() <= self.size + 1, "round count exceeds the diagram height");
                self.flag = true;
                self.round = Some(Round { candidate, descendants, cursor: 0 });
                continue;
            };
            if round.cursor == round.descendants.len() {
                if self.flag {
                    return self.finish(st);
                }
                self.current = st.closure(&self.current);
                self.round = None;
                continue;
            }
            let child = &round.descendants[round.cursor];
            if self.eliminated.iter().any(|r| child.is_subset(r)) {
                round.cursor += 1;
                continue;
            }
            let a = st.witness(&round.candidate, child)?;
            match self.cached(&a) {
                Some(bit) => {
                    self.cache_hits += 1;
                    self.apply(bit);
                }
                None => self.pending = Some(a),
            }
        }
    }

    fn apply(&mut self, bit: bool) {
        let round = self.round.as_mut().expect("apply needs an active round");
        let child = round.descendants[round.cursor].clone();
        round.cursor += 1;
        if self.mode.view(bit) {
            self.eliminated.push(child);
        } else {
            self.current = self.current.intersection(&child);
            self.flag = false;
        }
    }

    /// Feeds the teacher's bit for the pending query.
    pub fn submit_answer(&mut self, bit: bool) -> Result<()> {
        if self.status == Status::Done {
            return Err(Error::Session("answer submitted after the session finished".into()));
        }
        let Some(a) = self.pending.take() else {
            return Err(Error::Session("no pending query to answer".into()));
        };
        let before = self.current.len();
        let child = {
            let round = self.round.as_ref().expect("pending query implies an active round");
            round.descendants[round.cursor].clone()
        };
        self.apply(bit);
        self.transcript.push(TranscriptRecord {
            seq: self.transcript.len() + 1,
            assignment: a,
            answer: bit,
            candidate_before: before,
            candidate_after: self.current.len(),
        });
        self.tested.push(child);
        Ok(())
    }

    fn finish(&mut self, st: &dyn LatticeStructure) -> Result<Step> {
        let result = self.current.clone();
        check_transcript(st, &result, &self.transcript)?;
        self.status = Status::Done;
        self.round = None;
        self.result = Some(result);
        Ok(Step::Done(self.result().expect("just set")))
    }

    /// Rebuilds a session by feeding a stored transcript through a fresh learner.
    pub fn replay(st: &dyn LatticeStructure, records: &[TranscriptRecord]) -> Result<LearnSession> {
        let mut session = LearnSession::new(st);
        let mut script = ScriptedTeacher::from_transcript(records);
        while script.remaining() > 0 {
            match session.step(st)? {
                Step::NextQuery(a) => {
                    let bit = script.answer(&a)?;
                    session.submit_answer(bit)?;
                }
                Step::Done(_) => script.finish()?,
            }
        }
        Ok(session)
    }
}

/// Fails with [`Error::TargetNotInClass`] on the first record the hypothesis contradicts.
///
/// With witnesses that set every member of `G \ G'` to 1 and every member of `G'`
/// to 0, a completed run never contradicts its own transcript, so an error here
/// points at a broken structure rather than at the teacher. Targets outside the
/// class are generally not detectable from the queries the learner asks.
pub fn check_transcript(st: &dyn LatticeStructure, hypothesis: &PredicateSet, records: &[TranscriptRecord]) -> Result<()> {
    for r in records {
        let value = st.value(hypothesis, &r.assignment);
        if value != r.answer {
            return Err(Error::TargetNotInClass {
                seq: r.seq,
                assignment: r.assignment.clone(),
                answer: r.answer,
                hypothesis: value,
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct LearnOutcome {
    pub representative: Representative,
    pub session: LearnSession,
}

impl LearnOutcome {
    pub fn queries(&self) -> usize {
        self.session.query_count()
    }
}

/// Runs a full session against a blocking teacher.
pub fn learn(st: &dyn LatticeStructure, teacher: &mut dyn Teacher) -> Result<LearnOutcome> {
    let mut session = LearnSession::new(st);
    loop {
        match session.step(st)? {
            Step::NextQuery(a) => {
                let bit = teacher.answer(&a)?;
                session.submit_answer(bit)?;
            }
            Step::Done(representative) => return Ok(LearnOutcome { representative, session }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub queries_used: usize,
    /// `|F|` times the largest descendant count met during the run.
    pub bound_upper: usize,
    /// `max(ceil(log2 |G|), max |De(G)|)` when the diagram was materialized.
    pub bound_lower_info: Option<usize>,
    pub opt_exact: Option<usize>,
    /// Family-specific bound (`|I|`, `N + |I|`, `k^2`) when one is known.
    pub family_bound: Option<usize>,
    pub representatives: Option<usize>,
}

impl BoundReport {
    pub fn new(st: &dyn LatticeStructure, session: &LearnSession, hasse: Option<&HasseDiagram>, opt: Option<usize>) -> Self {
        BoundReport {
            queries_used: session.query_count(),
            bound_upper: st.size() * session.max_descendants_seen(),
            bound_lower_info: hasse.map(HasseDiagram::lower_bound),
            opt_exact: opt,
            family_bound: st.query_bound(),
            representatives: hasse.map(HasseDiagram::len),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OptCaps {
    pub max_representatives: usize,
    pub max_pool: usize,
}

impl Default for OptCaps {
    fn default() -> Self {
        OptCaps { max_representatives: 8, max_pool: 8 }
    }
}

/// Exact worst-case optimum of any adaptive learner, by minimax over which
/// representatives remain consistent. `pool` must contain a point of every cell,
/// so restricting queries to it loses nothing. Test oracle for tiny families.
pub fn opt_bruteforce(st: &dyn LatticeStructure, pool: &[Assignment], caps: OptCaps) -> Result<usize> {
    if pool.len() > caps.max_pool {
        return Err(Error::GuardExceeded { what: "query pool size", actual: pool.len(), limit: caps.max_pool });
    }
    let hasse = build_hasse(st, caps.max_representatives.max(1))?;
    let reps = hasse.len();
    if reps > caps.max_representatives || reps > 64 {
        return Err(Error::GuardExceeded { what: "representative count", actual: reps, limit: caps.max_representatives.min(64) });
    }
    // answers[q]: bitmask of representatives that are 1 at pool[q]
    let answers: Vec<u64> = pool
        .iter()
        .map(|q| {
            hasse.nodes.iter().enumerate().filter(|(_, r)| st.value(&r.set, q)).fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let all = if reps == 64 { u64::MAX } else { (1u64 << reps) - 1 };
    let mut memo = HashMap::new();
    minimax(all, &answers, &mut memo)
}

fn minimax(state: u64, answers: &[u64], memo: &mut HashMap<u64, usize>) -> Result<usize> {
    if state.count_ones() <= 1 {
        return Ok(0);
    }
    if let Some(&v) = memo.get(&state) {
        return Ok(v);
    }
    let mut best: Option<usize> = None;
    for &ans in answers {
        let (yes, no) = (state & ans, state & !ans);
        // A query that does not split the state can be dropped from any optimal strategy.
        if yes == 0 || no == 0 {
            continue;
        }
        let worst = minimax(yes, answers, memo)?.max(minimax(no, answers, memo)?);
        if best.is_none_or(|b| worst + 1 < b) {
            best = Some(worst + 1);
        }
    }
    let v = best.ok_or_else(|| Error::Precondition("query pool cannot separate two representatives".into()))?;
    memo.insert(state, v);
    Ok(v)
}
