use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use routegames::dynamics::{random_start, run_dynamics, MovePolicy, Outcome};
use routegames::equilibria::{analyze as enumerate, bound_verdicts, is_nash, BoundVerdict, EquilibriumReport};
use routegames::instances::{canonical_json, GridSpec};
use routegames::suite::run_checks;
use routegames::{parse_instance, serialize_instance, Error, Fraction, GeneratorSpec, Instance, Routing};
use serde_json::json;

use super::{AnalyzeArgs, DynamicsArgs, GenerateArgs, Kind, SuiteArgs, VerifyArgs};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CYCLE: u8 = 3;
pub const EXIT_LIMIT: u8 = 4;
pub const EXIT_CAP: u8 = 5;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ProfileCapExceeded { .. } => EXIT_CAP,
            Error::Parse { .. } | Error::InvalidInstance(_) | Error::Generator(_) | Error::InvalidRouting(_) => {
                EXIT_USAGE
            }
            _ => EXIT_FAILURE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<ExitCode, CliError>;

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_FAILURE,
        message: format!("{}: {e}", path.display()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn load(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_instance(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_routing(inst: &Instance, text: &str) -> Result<Routing, CliError> {
    let choices = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("bad routing `{text}`: {e}")))?;
    let routing = Routing::new(choices);
    inst.check_routing(&routing)?;
    Ok(routing)
}

fn fraction_text(f: Option<Fraction>) -> String {
    f.map_or_else(|| "undefined".to_string(), |f| f.to_string())
}

pub fn generate(args: GenerateArgs) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("--{flag} is required for this kind")));
    let spec = match args.kind {
        Kind::Ring => GeneratorSpec::Ring { n: need(args.n, "n")? },
        Kind::NoNashSum => GeneratorSpec::NoNashSum,
        Kind::BucketTight => GeneratorSpec::BucketTight { a: need(args.a, "a")? },
        Kind::RandomGrid => GeneratorSpec::RandomGrid(GridSpec {
            rows: need(args.rows, "rows")?,
            cols: need(args.cols, "cols")?,
            players: need(args.players, "players")?,
            strategies_per_player: need(args.strategies, "strategies")?,
            seed: args.seed,
        }),
    };
    let inst = spec.generate()?;
    let text = serialize_instance(&inst);
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    let s = inst.stats();
    let line = format!(
        "profiles={} players={} nodes={} edges={} max_path_len={} buckets={}",
        inst.profile_count(),
        s.players,
        s.nodes,
        s.edges,
        s.max_path_len,
        s.bucket_count
    );
    if args.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(ExitCode::SUCCESS)
}

pub fn dynamics(args: DynamicsArgs) -> CmdResult {
    let inst = load(&args.common.instance)?;
    let model = args.common.model;
    let start = match args.start.as_str() {
        "zero" => Routing::uniform(inst.player_count(), 0),
        "random" => random_start(&inst, args.seed),
        list => parse_routing(&inst, list)?,
    };
    let policy = MovePolicy::new(args.order, args.choice);
    let trace = run_dynamics(model, &inst, &start, &policy, args.seed, args.max_steps)?;
    if let Some(path) = &args.trace {
        let mut buf = Vec::new();
        trace.write_csv(&mut buf)?;
        fs::write(path, buf).map_err(|e| io_error(path, e))?;
    }
    println!(
        "outcome={} steps={} sc={}",
        trace.outcome.label(),
        trace.steps.len(),
        trace.final_social_cost(&inst)
    );
    println!("final={}", trace.outcome.routing());
    Ok(match trace.outcome {
        Outcome::Converged { .. } => ExitCode::SUCCESS,
        Outcome::CycleDetected { .. } => ExitCode::from(EXIT_CYCLE),
        Outcome::StepLimitReached { .. } => ExitCode::from(EXIT_LIMIT),
    })
}

fn jobs(flag: usize) -> Result<usize, CliError> {
    match std::env::var("ROUTEGAMES_JOBS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&j| j > 0)
            .ok_or_else(|| usage(format!("ROUTEGAMES_JOBS must be a positive integer, got `{v}`"))),
        Err(_) => Ok(flag.max(1)),
    }
}

fn stamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn print_summary(report: &EquilibriumReport) {
    println!("pos={} poa={}", fraction_text(report.pos), fraction_text(report.poa));
    println!(
        "nash_count={} profiles={} optimal_sc={}",
        report.nash_count, report.profiles, report.optimal_sc
    );
}

fn print_verdicts(verdicts: &[BoundVerdict]) {
    for v in verdicts {
        let status = match (v.applicable, v.holds) {
            (false, _) => "n/a",
            (true, true) => "holds",
            (true, false) => "FAILS",
        };
        println!("bound {} {status} lhs={} rhs={}", v.name, v.lhs, v.rhs);
    }
}

pub fn analyze(args: AnalyzeArgs) -> CmdResult {
    let inst = load(&args.common.instance)?;
    let model = args.common.model;
    let analysis = enumerate(model, &inst, args.cap, jobs(args.jobs)?)?;
    let report = analysis.report;
    let verdicts = bound_verdicts(&inst, &report, report.worst_nash_routing.as_ref())?;
    print_summary(&report);
    print_verdicts(&verdicts);
    if let Some(path) = &args.out {
        let mut doc = json!({ "report": report, "bounds": verdicts });
        if args.stamp {
            doc["stamp"] = json!(stamp());
        }
        write_file(path, &canonical_json(&doc)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs) -> CmdResult {
    let inst = load(&args.common.instance)?;
    let model = args.common.model;
    let routing = parse_routing(&inst, &args.routing)?;
    let check = is_nash(model, &inst, &routing)?;
    println!("nash={}", check.is_nash);
    if let Some(d) = &check.witness {
        println!(
            "witness player={} strategy={} old_cost={} new_cost={}",
            d.player, d.strategy, d.old_cost, d.new_cost
        );
    }
    let mut verdicts = Vec::new();
    if check.is_nash {
        match enumerate(model, &inst, args.cap, 1) {
            Ok(a) => verdicts = bound_verdicts(&inst, &a.report, Some(&routing))?,
            Err(Error::ProfileCapExceeded { count, .. }) => {
                eprintln!("bounds skipped: {count} profiles exceed the enumeration cap");
            }
            Err(e) => return Err(e.into()),
        }
    }
    print_verdicts(&verdicts);
    if let Some(path) = &args.out {
        let doc = json!({ "routing": routing, "nash": check, "bounds": verdicts });
        write_file(path, &canonical_json(&doc)?)?;
    }
    let ok = check.is_nash && verdicts.iter().all(BoundVerdict::ok);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILURE) })
}

pub fn suite(args: SuiteArgs) -> CmdResult {
    let results = run_checks(args.filter.as_deref());
    if results.is_empty() {
        return Err(usage(format!(
            "no check matches `{}`",
            args.filter.unwrap_or_default()
        )));
    }
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        println!(
            "{:width$}  {}  {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} checks, {} failed", results.len(), failed);
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    })
}
