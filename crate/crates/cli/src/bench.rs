use std::sync::Arc;

use clap::ValueEnum;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use spex_core::ineq::{ineq_structure, IneqFamily};
use spex_core::lattice::{LatticeStructure, PointStructure};
use spex_core::learner::{learn, SimulatedTeacher};
use spex_core::pattern::{seed_family, synthesize, Chart};
use spex_core::table::TableFamily;
use spex_core::{Assignment, Mode, PredicateFamily, PredicateSet};

use crate::{print_json, CmdResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Random acyclic strict inequality families; bound |I|.
    Acyclic,
    /// Random truth tables in or-mode; bound |F| * maxDe.
    Table,
    /// Random seed charts; bound k^2.
    Pattern,
}

#[derive(Debug, Serialize)]
struct Run {
    size: usize,
    queries: usize,
    bound: usize,
}

fn random_target(rng: &mut ChaCha8Rng, st: &dyn LatticeStructure) -> PredicateSet {
    let pick: PredicateSet = (0..st.size()).filter(|_| rng.gen_bool(0.5)).collect();
    st.closure(&pick)
}

fn acyclic_family(rng: &mut ChaCha8Rng, max_n: usize) -> IneqFamily {
    let n = rng.gen_range(2..=max_n.max(2));
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.5)).map(|(a, b)| (order[a], order[b])).collect();
    if pairs.is_empty() {
        pairs.push((order[0], order[1]));
    }
    pairs.shuffle(rng);
    IneqFamily::new(n, pairs, true).expect("pairs are distinct and loop-free")
}

fn one_run(kind: Kind, rng: &mut ChaCha8Rng, max_size: usize) -> spex_core::Result<Run> {
    match kind {
        Kind::Acyclic => {
            let fam = Arc::new(acyclic_family(rng, max_size));
            let st = ineq_structure(fam.clone())?;
            let target = random_target(rng, st.as_ref());
            let mut t = SimulatedTeacher::new(fam.as_ref(), target, Mode::And)?;
            let out = learn(st.as_ref(), &mut t)?;
            Ok(Run { size: fam.size(), queries: out.queries(), bound: fam.size() })
        }
        Kind::Table => {
            let x = rng.gen_range(1..=8);
            let f = rng.gen_range(1..=max_size.max(1));
            let domain = (0..x as i64).map(|v| Assignment::from_ints([v])).collect();
            let rows = (0..f).map(|_| (0..x).map(|_| rng.gen_bool(0.5)).collect()).collect();
            let fam = Arc::new(TableFamily::new(domain, rows, None)?);
            let st = PointStructure::for_table(fam.clone(), Mode::Or);
            let target = random_target(rng, &st);
            let mut t = SimulatedTeacher::new(fam.as_ref(), target, Mode::Or)?;
            let out = learn(&st, &mut t)?;
            Ok(Run { size: f, queries: out.queries(), bound: f * out.session.max_descendants_seen() })
        }
        Kind::Pattern => {
            let k = rng.gen_range(2..=max_size.max(2));
            let chart = Chart::from_ints(&(0..k).map(|_| rng.gen_range(1..=100)).collect::<Vec<_>>())?;
            let fam = Arc::new(seed_family(&chart)?);
            let st = ineq_structure(fam.clone())?;
            let target = random_target(rng, st.as_ref());
            let mut t = SimulatedTeacher::new(fam.as_ref(), target, Mode::And)?;
            let syn = synthesize(&chart, &mut t)?;
            Ok(Run { size: k, queries: syn.outcome.queries(), bound: k * k })
        }
    }
}

pub fn run(json: bool, kind: Kind, count: usize, seed: u64, max_size: usize) -> CmdResult {
    let mut runs = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        runs.push(one_run(kind, &mut rng, max_size)?);
    }
    let over = runs.iter().filter(|r| r.queries > r.bound).count();
    let max_queries = runs.iter().map(|r| r.queries).max().unwrap_or(0);
    let worst = runs.iter().filter(|r| r.bound > 0).map(|r| r.queries as f64 / r.bound as f64).fold(0.0, f64::max);
    if json {
        print_json(&json!({
            "kind": kind, "seed": seed, "runs": runs.len(), "max_queries": max_queries,
            "max_ratio": worst, "over_bound": over, "results": runs,
        }));
    } else {
        println!("kind: {kind:?}, seed {seed}, {} runs", runs.len());
        println!("max queries: {max_queries}");
        println!("max queries/bound: {worst:.3}");
        println!("runs over bound: {over}");
    }
    Ok(())
}
