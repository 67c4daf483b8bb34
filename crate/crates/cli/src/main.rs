//! `epicore`: cores, acceptability verdicts and proofs, knowledge-profile
//! sweeps, balanced families and replica economies from the command line.
//!
//! Exit status: 0 success, 1 input error, 2 verification failure,
//! 3 unsupported size.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use epicore::accept::{decide, GameLogic, Verdict};
use epicore::balanced::{
    bondareva_shapley_violation, core_point, minimal_balanced_families, prop51_report, weight_map, Assignment,
};
use epicore::coalition::{format_family, parse_family};
use epicore::game::enumerate_integer_core;
use epicore::knowledge::{all_profiles, characterizes_core, covering_profiles, KnowledgeProfile, ProfileReport};
use epicore::logic::{ComparisonOracle, GridOracle, ProofChecker, ProofDocument};
use epicore::rational;
use epicore::replica::{
    effective_groups, grid_core, knowledge_growth, Allocation, EconomyConfig, ReplicaEconomy, Utility, UtilityOracle,
};
use epicore::{Error, PayoffVector, TUGame};

/// Oracle label written into proof documents for TU games.
const GRID_ORACLE: &str = "grid";
/// Oracle label for proofs over allocations under CES 1/2 utility.
const CES_ORACLE: &str = "ces-1/2";

#[derive(Parser, Debug)]
#[command(name = "epicore", version, about = "Epistemic analysis of the core of cooperative games")]
struct Cli {
    /// Worker threads for the data-parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integer core of a game.
    Core { game: PathBuf },
    /// Verdict of player `i` on `x` knowing the coalitions `K`.
    Accept(Query),
    /// Writes the proof of the verdict and re-checks the written file.
    Prove {
        #[command(flatten)]
        query: Query,
        /// Proof file to write.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Checks a proof file.
    Check { proof: PathBuf },
    /// Compares unanimous acceptance with the core for knowledge profiles.
    Verify {
        game: PathBuf,
        /// `covering`, `all`, or a JSON file with a list of profiles.
        #[arg(long, default_value = "covering")]
        profiles: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimal balanced families on `n` players with their weights.
    Balanced { n: usize },
    /// Bondareva–Shapley test and the balanced-knowledge hypothesis.
    Bs {
        game: PathBuf,
        /// Try every assignment of a family's coalitions to its members.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Effective coalitions, knowledge growth and grid core of a replica.
    Replica {
        economy: PathBuf,
        /// Replica count (overrides the file).
        #[arg(short)]
        k: Option<usize>,
        /// Grid denominator (overrides the file).
        #[arg(short = 'D', long)]
        denominator: Option<i64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the grid core as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct Query {
    game: PathBuf,
    #[arg(short = 'i', long = "player")]
    player: usize,
    /// Known coalitions, e.g. "1;1,2" (empty for none).
    #[arg(short = 'K', long = "known", default_value = "", allow_hyphen_values = true)]
    known: String,
    /// Payoff vector, e.g. "9,21" or "1/2,3".
    #[arg(short = 'x', long = "payoff")]
    payoff: String,
}

enum Status {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            let unsupported = err
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Unsupported(_))));
            ExitCode::from(if unsupported { 3 } else { 1 })
        }
    }
}

fn run(command: Command) -> anyhow::Result<Status> {
    match command {
        Command::Core { game } => core(&game),
        Command::Accept(q) => accept(&q),
        Command::Prove { query, output } => prove(&query, &output),
        Command::Check { proof } => check(&proof),
        Command::Verify { game, profiles, output } => verify(&game, &profiles, output.as_deref()),
        Command::Balanced { n } => balanced(n),
        Command::Bs { game, exhaustive } => bs(&game, exhaustive),
        Command::Replica { economy, k, denominator, output, csv } => {
            replica(&economy, k, denominator, output.as_deref(), csv.as_deref())
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_game(path: &Path) -> anyhow::Result<TUGame> {
    TUGame::from_json(&read(path)?).with_context(|| format!("in game file {}", path.display()))
}

/// Pretty JSON with sorted keys plus a trailing newline, to `path` or stdout.
fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(&serde_json::to_value(value)?)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn core(path: &Path) -> anyhow::Result<Status> {
    let game = load_game(path)?;
    let core = enumerate_integer_core(&game);
    emit(&json!({ "count": core.len(), "core": core }), None)?;
    Ok(Status::Ok)
}

struct Parsed {
    game: TUGame,
    family: Vec<epicore::Coalition>,
    x: PayoffVector,
}

fn parse_query(q: &Query) -> anyhow::Result<Parsed> {
    let game = load_game(&q.game)?;
    let family = parse_family(&q.known).with_context(|| format!("in known coalitions {:?}", q.known))?;
    let x = PayoffVector::parse(&game, &q.payoff).with_context(|| format!("in payoff vector {:?}", q.payoff))?;
    Ok(Parsed { game, family, x })
}

fn verdict_json(q: &Query, p: &Parsed, verdict: &Verdict) -> Value {
    let mut v = json!({
        "player": q.player,
        "known": format_family(&p.family),
        "payoff": p.x,
    });
    if let (Value::Object(out), Ok(Value::Object(extra))) = (&mut v, serde_json::to_value(verdict)) {
        out.extend(extra);
    }
    v
}

fn accept(q: &Query) -> anyhow::Result<Status> {
    let p = parse_query(q)?;
    let verdict = decide(&p.game, q.player, &p.family, &p.x)?;
    emit(&verdict_json(q, &p, &verdict), None)?;
    Ok(Status::Ok)
}

fn prove(q: &Query, output: &Path) -> anyhow::Result<Status> {
    let p = parse_query(q)?;
    let logic = GameLogic::new(&p.game)?;
    let gamma = logic.gamma(&p.family)?;
    let (verdict, proof) = logic.prove(q.player, &p.family, &gamma, &p.x)?;
    let file = fs::File::create(output).with_context(|| format!("cannot write {}", output.display()))?;
    ProofDocument::new(GRID_ORACLE, proof).write_to(io::BufWriter::new(file))?;

    let reread = ProofDocument::read_from(io::BufReader::new(fs::File::open(output)?))
        .with_context(|| format!("re-reading {}", output.display()))?;
    let result = ProofChecker::new(&GridOracle).check(&reread.proof);
    let mut report = verdict_json(q, &p, &verdict);
    report["proof"] = json!(output.display().to_string());
    report["nodes"] = json!(reread.proof.node_count());
    report["checked"] = json!(result.is_ok());
    emit(&report, None)?;
    match result {
        Ok(()) => Ok(Status::Ok),
        Err(f) => {
            eprintln!("written proof does not check: {f}");
            Ok(Status::VerificationFailed)
        }
    }
}

fn check(path: &Path) -> anyhow::Result<Status> {
    let doc = ProofDocument::from_json(&read(path)?).with_context(|| format!("in proof file {}", path.display()))?;
    let ces = UtilityOracle(Utility::CesHalf);
    let oracle: &dyn ComparisonOracle = match doc.oracle.as_str() {
        GRID_ORACLE => &GridOracle,
        CES_ORACLE => &ces,
        other => bail!("unknown oracle {other:?} (expected {GRID_ORACLE:?} or {CES_ORACLE:?})"),
    };
    let result = ProofChecker::new(oracle).check(&doc.proof);
    let mut report = json!({
        "proof": path.display().to_string(),
        "oracle": doc.oracle,
        "nodes": doc.proof.node_count(),
        "depth": doc.proof.depth(),
        "valid": result.is_ok(),
    });
    if let Err(f) = &result {
        report["failure"] = json!({ "path": f.path, "rule": f.rule.name(), "reason": f.reason });
    }
    emit(&report, None)?;
    Ok(if result.is_ok() { Status::Ok } else { Status::VerificationFailed })
}

fn verify(path: &Path, which: &str, output: Option<&Path>) -> anyhow::Result<Status> {
    let game = load_game(path)?;
    let n = game.players();
    let profiles = match which {
        "covering" => covering_profiles(n)?,
        "all" => all_profiles(n)?,
        file => serde_json::from_str::<Vec<KnowledgeProfile>>(&read(Path::new(file))?)
            .with_context(|| format!("in profile file {file}"))?,
    };
    let reports: Vec<ProfileReport> = profiles
        .par_iter()
        .map(|p| characterizes_core(&game, p))
        .collect::<epicore::Result<_>>()?;
    emit(&reports, output)?;
    // a covering profile within the hypothesis that misses the core refutes the theorem
    let refuted = reports
        .iter()
        .any(|r| r.profile.is_covering() && r.warnings.is_empty() && !r.characterizes_core);
    Ok(if refuted { Status::VerificationFailed } else { Status::Ok })
}

fn balanced(n: usize) -> anyhow::Result<Status> {
    let families = minimal_balanced_families(n)?;
    let out: Vec<Value> = families
        .iter()
        .map(|b| json!({ "family": format_family(&b.family), "weights": weight_map(b) }))
        .collect();
    emit(&json!({ "players": n, "count": out.len(), "families": out }), None)?;
    Ok(Status::Ok)
}

fn bs(path: &Path, exhaustive: bool) -> anyhow::Result<Status> {
    let game = load_game(path)?;
    let violation = bondareva_shapley_violation(&game)?;
    let point = core_point(&game);
    let mode = if exhaustive { Assignment::Exhaustive } else { Assignment::Canonical };
    let hypothesis = prop51_report(&game, mode)?;
    let report = json!({
        "nonempty": violation.is_none(),
        "violation": violation.as_ref().map(|b| json!({
            "family": format_family(&b.family),
            "weights": weight_map(b),
            "weighted_value": rational::format(&b.weighted_value(&game)),
        })),
        "core_point": point.as_ref().map(|p| p.iter().map(rational::format).collect::<Vec<_>>()),
        "balanced_knowledge": {
            "assignment": mode,
            "hypothesis_holds": hypothesis.hypothesis_holds,
            "failing_family": hypothesis.failing_family.as_deref().map(format_family),
            "implication_holds": hypothesis.implication_holds(),
        },
    });
    emit(&report, None)?;
    let consistent = violation.is_none() == point.is_some() && hypothesis.implication_holds();
    Ok(if consistent { Status::Ok } else { Status::VerificationFailed })
}

fn replica(
    path: &Path,
    k: Option<usize>,
    denominator: Option<i64>,
    output: Option<&Path>,
    csv: Option<&Path>,
) -> anyhow::Result<Status> {
    let mut config = EconomyConfig::from_json(&read(path)?).with_context(|| format!("in economy file {}", path.display()))?;
    if let Some(d) = denominator {
        config.grid_denominator = d;
    }
    let econ = config.economy(k)?;
    let k = econ.k;
    let (count, average) = knowledge_growth(k);
    let groups: Vec<Value> = effective_groups(k)
        .iter()
        .enumerate()
        .map(|(g, list)| {
            json!({
                "group": g + 1,
                "coalitions": list.iter().map(|&s| econ.describe(s)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let (core, note) = match grid_core(&econ) {
        Ok(core) => (Some(core), None),
        Err(Error::Unsupported(msg)) => (None, Some(format!("grid core skipped: {msg}"))),
        Err(e) => return Err(e.into()),
    };
    let mut report = json!({
        "replicas": k,
        "grid_denominator": econ.denominator(),
        "utility": config.utility,
        "rho": rational::format(&config.rho),
        "effective_coalitions": { "count": count, "average": rational::format(&average), "groups": groups },
        "grid_core": core,
    });
    if let Some(note) = &note {
        report["note"] = json!(note);
        eprintln!("{note}");
    }
    if let (Some(core), Some(p)) = (&core, csv) {
        fs::write(p, core_csv(&econ, core)).with_context(|| format!("cannot write {}", p.display()))?;
    }
    emit(&report, output)?;
    Ok(Status::Ok)
}

fn core_csv(econ: &ReplicaEconomy, core: &[Allocation]) -> String {
    let mut out = String::from("allocation,participant,good1,good2\n");
    for (a, x) in core.iter().enumerate() {
        for (p, [g1, g2]) in x.to_strings().into_iter().enumerate() {
            out.push_str(&format!("{a},\"{}\",{g1},{g2}\n", econ.participant(p + 1)));
        }
    }
    out
}
