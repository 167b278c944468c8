mod bench;
mod teacher;

use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use spex_core::ineq::{enumerate_max_acyclic, DEFAULT_ENUM_GUARD};
use spex_core::lattice::{build_hasse, HasseDiagram, DEFAULT_HASSE_CAP};
use spex_core::learner::{learn, opt_bruteforce, write_transcript, BoundReport, LearnOutcome, OptCaps, ScriptedTeacher, SimulatedTeacher};
use spex_core::pattern::{seed_family, synthesize, Chart, Synthesis};
use spex_core::{Error, Family, Mode, PredicateFamily, PredicateSet, Teacher};

use teacher::{load_script, PromptTeacher, TeacherArg};

#[derive(Parser)]
#[command(name = "spex", version, about = "Learn disjunctions and conjunctions of predicates from membership queries")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a target over a family file.
    Learn {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        /// simulated:<target-file> | scripted:<answers-file> | prompt
        #[arg(long)]
        teacher: TeacherArg,
        /// Write the transcript (NDJSON) here.
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Materialize the lattice (up to this many representatives) for the bound report; 0 disables.
        #[arg(long, default_value_t = 2000)]
        hasse_cap: usize,
        /// Also compute the exact optimum by brute force (tiny families only).
        #[arg(long)]
        opt: bool,
    },
    /// Write the Hasse diagram as Graphviz DOT.
    Lattice {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_HASSE_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the maximal acyclic subgraphs of an inequality family.
    Enum {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUM_GUARD)]
        guard: usize,
    },
    /// Synthesize a pattern detector from a seed chart.
    Synth {
        /// CSV with header `index,value`.
        #[arg(long)]
        chart: PathBuf,
        /// simulated:<target-file> | scripted:<answers-file> | prompt
        #[arg(long)]
        teacher: TeacherArg,
        /// Write the program here, plus a `.json` sidecar next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, env = "SPEX_ADDR", default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        #[arg(long, env = "SPEX_DATA_DIR")]
        data_dir: Option<PathBuf>,
        #[arg(long, env = "SPEX_MAX_SESSIONS", default_value_t = 1000)]
        max_sessions: usize,
        /// Directory with the web UI bundle, served at `/`.
        #[arg(long, env = "SPEX_STATIC_DIR")]
        static_dir: Option<PathBuf>,
    },
    /// Learn every sampled target of random families and compare query counts with the bounds.
    Bench {
        #[arg(long, value_enum, default_value_t = bench::Kind::Acyclic)]
        kind: bench::Kind,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest variable count / predicate count / chart size.
        #[arg(long, default_value_t = 6)]
        max_size: usize,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::GuardExceeded { .. } => 4,
            e if e.is_teacher() => 3,
            e if e.is_validation() => 2,
            Error::Io(_) | Error::Precondition(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::from(Error::Io(e))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Learn { family, mode, teacher, transcript, hasse_cap, opt } => {
            cmd_learn(cli.json, &family, mode, &teacher, transcript.as_ref(), hasse_cap, opt)
        }
        Command::Lattice { family, mode, cap, out } => cmd_lattice(cli.json, &family, mode, cap, out.as_ref()),
        Command::Enum { family, guard } => cmd_enum(cli.json, &family, guard),
        Command::Synth { chart, teacher, out, transcript } => cmd_synth(cli.json, &chart, &teacher, out.as_ref(), transcript.as_ref()),
        Command::Serve { addr, data_dir, max_sessions, static_dir } => cmd_serve(addr, data_dir, max_sessions, static_dir),
        Command::Bench { kind, count, seed, max_size } => bench::run(cli.json, kind, count, seed, max_size),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn save_transcript(path: Option<&PathBuf>, outcome: &LearnOutcome) -> CmdResult {
    if let Some(path) = path {
        write_transcript(fs::File::create(path)?, outcome.session.transcript())?;
    }
    Ok(())
}

/// Runs `f` with the teacher described by `arg`. Scripted teachers must use up their script.
fn with_teacher<T>(
    arg: &TeacherArg,
    family: &dyn PredicateFamily,
    target: impl FnOnce(&str) -> spex_core::Result<PredicateSet>,
    mode: Mode,
    pattern: bool,
    f: impl FnOnce(&mut dyn Teacher) -> spex_core::Result<T>,
) -> Result<T, Failure> {
    match arg {
        TeacherArg::Simulated(path) => {
            let target = target(&fs::read_to_string(path)?)?;
            let mut t = SimulatedTeacher::new(family, target, mode)?;
            Ok(f(&mut t)?)
        }
        TeacherArg::Scripted(path) => {
            let mut t: ScriptedTeacher = load_script(path)?;
            let out = f(&mut t)?;
            t.finish()?;
            Ok(out)
        }
        TeacherArg::Prompt => {
            let stdin = io::stdin();
            let mut t = PromptTeacher::new(stdin.lock(), io::stderr(), pattern);
            Ok(f(&mut t)?)
        }
    }
}

fn describe(family: &dyn PredicateFamily, set: &PredicateSet, mode: Mode) -> String {
    if set.is_empty() {
        return match mode {
            Mode::Or => "false".into(),
            Mode::And => "true".into(),
        };
    }
    let joiner = if mode == Mode::Or { " or " } else { " and " };
    set.iter().map(|f| family.predicate_label(f)).collect::<Vec<_>>().join(joiner)
}

#[allow(clippy::too_many_arguments)]
fn cmd_learn(json: bool, path: &PathBuf, mode: Mode, teacher: &TeacherArg, transcript: Option<&PathBuf>, hasse_cap: usize, opt: bool) -> CmdResult {
    let family = Family::load(path)?;
    let st = family.structure(mode)?;
    let opt_value = if opt {
        let pool = family.critical_points()?.points;
        Some(opt_bruteforce(st.as_ref(), &pool, OptCaps { max_representatives: 16, max_pool: 32 })?)
    } else {
        None
    };
    let outcome = with_teacher(teacher, &family, |text| family.parse_target(text), mode, false, |t| learn(st.as_ref(), t))?;
    save_transcript(transcript, &outcome)?;

    let hasse: Option<HasseDiagram> = if hasse_cap > 0 { build_hasse(st.as_ref(), hasse_cap).ok() } else { None };
    let report = BoundReport::new(st.as_ref(), &outcome.session, hasse.as_ref(), opt_value);
    let rep = &outcome.representative.set;
    let labels: Vec<String> = rep.iter().map(|f| family.predicate_label(f)).collect();

    if json {
        print_json(&json!({
            "mode": mode,
            "representative": { "members": rep.members(), "labels": labels, "formula": describe(&family, rep, mode) },
            "queries": outcome.queries(),
            "cache_hits": outcome.session.cache_hits(),
            "bounds": report,
        }));
    } else {
        println!("representative: {rep}");
        println!("formula: {}", describe(&family, rep, mode));
        println!("queries: {}", outcome.queries());
        println!("bound |F|*maxDe: {}", report.bound_upper);
        if let Some(b) = report.family_bound {
            println!("family bound: {b}");
        }
        if let (Some(n), Some(lb)) = (report.representatives, report.bound_lower_info) {
            println!("representatives: {n}");
            println!("lower bound: {lb}");
        }
        if let Some(v) = report.opt_exact {
            println!("OPT: {v}");
        }
    }
    Ok(())
}

fn cmd_lattice(json: bool, path: &PathBuf, mode: Mode, cap: usize, out: Option<&PathBuf>) -> CmdResult {
    let family = Family::load(path)?;
    let st = family.structure(mode)?;
    let hasse = build_hasse(st.as_ref(), cap)?;
    let text = if json { serde_json::to_string_pretty(&hasse).expect("diagram serializes") + "\n" } else { hasse.to_dot() };
    match out {
        Some(p) => {
            fs::write(p, text)?;
            eprintln!("{} representatives, {} edges", hasse.len(), hasse.edges.len());
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_enum(json: bool, path: &PathBuf, guard: usize) -> CmdResult {
    let Family::VarIneq(fam) = Family::load(path)? else {
        return Err(Error::Invalid("enum needs a var_ineq family".into()).into());
    };
    let subgraphs = enumerate_max_acyclic(&fam, guard)?;
    let lists: Vec<Vec<(usize, usize)>> = subgraphs.iter().map(|s| fam.pairs_of(s)).collect();
    if json {
        print_json(&json!({ "count": lists.len(), "subgraphs": lists }));
    } else {
        for edges in &lists {
            println!("{}", edges.iter().map(|(i, j)| format!("{i}->{j}")).collect::<Vec<_>>().join(" "));
        }
    }
    Ok(())
}

fn cmd_synth(json: bool, chart_path: &PathBuf, teacher: &TeacherArg, out: Option<&PathBuf>, transcript: Option<&PathBuf>) -> CmdResult {
    let chart = Chart::from_csv(fs::File::open(chart_path)?)?;
    let family = Family::VarIneq(Arc::new(seed_family(&chart)?));
    let syn: Synthesis = with_teacher(teacher, &family, |text| family.parse_target(text), Mode::And, true, |t| synthesize(&chart, t))?;
    save_transcript(transcript, &syn.outcome)?;
    let sidecar = syn.sidecar(&chart, transcript.map(|p| p.display().to_string()));
    if let Some(path) = out {
        fs::write(path, &syn.program.source_text)?;
        let mut side = path.clone().into_os_string();
        side.push(".json");
        fs::write(&side, serde_json::to_string_pretty(&sidecar).expect("sidecar serializes"))?;
    }
    if json {
        print_json(&json!({ "program": syn.program, "queries": syn.outcome.queries(), "bound": chart.k() * chart.k() }));
    } else {
        if out.is_none() {
            print!("{}", syn.program.source_text);
        }
        eprintln!("queries: {} (k^2 = {})", syn.outcome.queries(), chart.k() * chart.k());
    }
    Ok(())
}

fn cmd_serve(addr: SocketAddr, data_dir: Option<PathBuf>, max_sessions: usize, static_dir: Option<PathBuf>) -> CmdResult {
    let config = spex_service::Config { addr, data_dir, max_sessions, static_dir };
    let runtime = tokio::runtime::Runtime::new()?;
    eprintln!("listening on {addr}");
    runtime.block_on(spex_service::serve(config)).map_err(|e| Failure { code: 1, message: e.to_string() })
}
