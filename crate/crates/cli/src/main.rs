use std::fmt::Display;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use npart::exec::with_workers;
use npart::experiments::{
    anytime_trace, bldm_scaling, fit_power_law, gen_instance, phase_sweep, write_csv, SolverMode,
    SweepConfig, TargetRule,
};
use npart::theory::{bldm_prediction, critical_n, expected_optimum, moments_uniform_bits};
use npart::{
    cbldm_solve, ckk_solve, CardinalityConstraint, Error, Exec, HeuristicKind, ImprovementEvent,
    Instance, SearchLimits, SolveReport,
};
use serde::Serialize;
use serde_json::json;

const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_NO_SOLUTION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "npart",
    version,
    about = "Two-way number partitioning: heuristics, exact anytime search, experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance of uniform b-bit weights.
    Gen(GenArgs),
    /// Run a differencing heuristic on an instance file.
    Heuristic(HeuristicArgs),
    /// Solve an instance with complete anytime search.
    Solve(SolveArgs),
    /// Run a phase-transition or BLDM-scaling experiment.
    Sweep(SweepArgs),
    /// Anytime progress of complete BLDM as (nodes, ratio) points.
    Trace(TraceArgs),
    /// Closed-form predictions for random instances.
    Theory(TheoryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    JsonLines,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ckk,
    Cbldm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Pdm,
    Ldm,
    Bldm,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Phase,
    BldmScaling,
}

/// `balanced` or an explicit `|m|`.
#[derive(Clone, Copy, Debug)]
struct Target(TargetRule);

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "balanced" {
            return Ok(Target(TargetRule::Balanced));
        }
        s.parse::<u64>()
            .map(|t| Target(TargetRule::Fixed(t)))
            .map_err(|_| format!("expected `balanced` or a non-negative integer, got {s:?}"))
    }
}

/// Comma-separated sizes and inclusive ranges, e.g. `12-28,40,60`.
#[derive(Clone, Debug)]
struct SizeList(Vec<usize>);

impl FromStr for SizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || format!("bad size or range {part:?}");
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b): (usize, usize) =
                        (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                    if a > b {
                        return Err(bad());
                    }
                    out.extend(a..=b);
                }
                None => out.push(part.parse().map_err(|_| bad())?),
            }
        }
        if out.is_empty() {
            return Err("empty size list".into());
        }
        Ok(SizeList(out))
    }
}

#[derive(Args)]
struct Budget {
    /// Stop after generating this many nodes.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Stop after this many seconds of wall-clock time.
    #[arg(long)]
    max_seconds: Option<f64>,
}

impl Budget {
    fn limits(&self) -> Result<SearchLimits, Failure> {
        let max_time = match self.max_seconds {
            Some(s) if !(s.is_finite() && s >= 0.0) => {
                return Err(Failure::usage(format!(
                    "--max-seconds must be a non-negative number, got {s}"
                )))
            }
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(SearchLimits {
            max_nodes: self.max_nodes,
            max_time,
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    bits: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeuristicArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    instance: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "ckk")]
    mode: Mode,
    /// Required `|m|` for cbldm: `balanced` or an integer.
    #[arg(long)]
    target: Option<Target>,
    #[command(flatten)]
    budget: Budget,
    instance: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "phase")]
    kind: SweepKind,
    #[arg(long, default_value_t = 15)]
    bits: u32,
    /// Instance sizes, e.g. `12-28` or `64,128,256`.
    #[arg(long)]
    n_values: SizeList,
    /// Instances (or trials) per size.
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, value_enum, default_value = "cbldm")]
    mode: Mode,
    #[arg(long, default_value = "balanced")]
    target: Target,
    #[command(flatten)]
    budget: Budget,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct TraceArgs {
    /// Instance file; otherwise one is generated from --bits, --n, --seed.
    instance: Option<PathBuf>,
    #[arg(long, conflicts_with = "instance", requires = "n")]
    bits: Option<u32>,
    #[arg(long, conflicts_with = "instance", requires = "bits")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "balanced")]
    target: Target,
    #[command(flatten)]
    budget: Budget,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    bits: u32,
    /// Balanced partitions instead of unconstrained ones.
    #[arg(long)]
    balanced: bool,
    /// Also report the expected optimum and the BLDM prediction at this size.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn input(message: impl Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn other(message: impl Display) -> Self {
        Failure {
            code: EXIT_OTHER,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::usage(e),
            _ => Failure::input(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::other(e)
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Heuristic(args) => heuristic(args),
        Command::Solve(args) => solve(args),
        Command::Sweep(args) => sweep(args),
        Command::Trace(args) => trace(args),
        Command::Theory(args) => theory(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("npart: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Instance::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).map_err(|e| Failure::other(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_rows<T: Serialize>(out: &mut dyn Write, rows: &[T], format: Format) -> CliResult {
    match format {
        Format::Csv => write_csv(&mut *out, rows)?,
        Format::JsonLines => {
            for row in rows {
                let line = serde_json::to_string(row).map_err(Failure::other)?;
                writeln!(out, "{line}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn gen(args: GenArgs) -> CliResult {
    if args.n == 0 || args.bits == 0 {
        return Err(Failure::usage("--n and --bits must be at least 1"));
    }
    let inst = gen_instance(args.bits, args.n, args.seed)?;
    let mut out = output(args.out.as_deref())?;
    out.write_all(inst.to_text().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn heuristic(args: HeuristicArgs) -> CliResult {
    let inst = read_instance(&args.instance)?;
    let kind = match args.alg {
        Alg::Pdm => HeuristicKind::Pdm,
        Alg::Ldm => HeuristicKind::Ldm,
        Alg::Bldm => HeuristicKind::Bldm,
    };
    let a = kind.run(&inst);
    let mut out = io::stdout().lock();
    writeln!(out, "alg,{kind}")?;
    writeln!(out, "delta,{}", a.delta())?;
    writeln!(out, "card_diff,{}", a.card_diff())?;
    writeln!(out, "signs,{}", a.sign_string())?;
    Ok(())
}

fn solve(args: SolveArgs) -> CliResult {
    let limits = args.budget.limits()?;
    if matches!(args.mode, Mode::Ckk) && args.target.is_some() {
        return Err(Failure::usage("--target applies only to --mode cbldm"));
    }
    let inst = read_instance(&args.instance)?;
    let n = inst.len();

    let stdout = io::stdout();
    let mut write_error = None;
    let sink = |e: &ImprovementEvent| {
        let mut out = stdout.lock();
        let r = writeln!(out, "event,{},{}", e.nodes_at_event, e.delta).and_then(|_| out.flush());
        if let Err(err) = r {
            write_error.get_or_insert(err);
        }
    };
    let report: SolveReport = match args.mode {
        Mode::Ckk => ckk_solve(&inst, limits, sink),
        Mode::Cbldm => {
            let rule = args.target.map_or(TargetRule::Balanced, |t| t.0);
            cbldm_solve(&inst, rule.constraint(n)?, limits, sink)?
        }
    };
    if let Some(err) = write_error {
        return Err(err.into());
    }

    let mut out = stdout.lock();
    writeln!(out, "summary")?;
    writeln!(out, "status,{}", report.status.as_str())?;
    writeln!(out, "proven_optimal,{}", report.is_proven_optimal())?;
    writeln!(out, "nodes,{}", report.nodes_generated)?;
    writeln!(out, "elapsed_seconds,{:.6}", report.elapsed.as_secs_f64())?;
    match &report.best {
        Some(best) => {
            writeln!(out, "delta,{}", best.delta())?;
            writeln!(out, "card_diff,{}", best.card_diff())?;
            writeln!(out, "signs,{}", best.sign_string())?;
            out.flush()?;
            Ok(())
        }
        None => {
            out.flush()?;
            Err(Failure {
                code: EXIT_NO_SOLUTION,
                message: format!(
                    "budget exhausted after {} nodes without a solution",
                    report.nodes_generated
                ),
            })
        }
    }
}

fn sweep(args: SweepArgs) -> CliResult {
    let limits = args.budget.limits()?;
    if args.workers == 0 {
        return Err(Failure::usage("--workers must be at least 1"));
    }
    if args.instances == 0 {
        return Err(Failure::usage("--instances must be at least 1"));
    }
    let exec = if args.workers > 1 {
        Exec::Parallel
    } else {
        Exec::Sequential
    };
    let mut out = output(args.out.as_deref())?;
    match args.kind {
        SweepKind::Phase => {
            let config = SweepConfig {
                bits: args.bits,
                n_values: args.n_values.0,
                instances_per_n: args.instances,
                mode: match args.mode {
                    Mode::Ckk => SolverMode::Ckk,
                    Mode::Cbldm => SolverMode::Cbldm,
                },
                target: args.target.0,
                limits,
                base_seed: args.seed,
                exec,
            };
            config.validate()?;
            let rows = with_workers(args.workers, || phase_sweep(&config))?;
            write_rows(&mut *out, &rows, args.format)
        }
        SweepKind::BldmScaling => {
            let rows = with_workers(args.workers, || {
                bldm_scaling(&args.n_values.0, args.instances, args.seed, exec)
            })?;
            write_rows(&mut *out, &rows, args.format)
        }
    }
}

fn trace(args: TraceArgs) -> CliResult {
    let limits = args.budget.limits()?;
    let inst = match (&args.instance, args.bits, args.n) {
        (Some(path), _, _) => read_instance(path)?,
        (None, Some(bits), Some(n)) => {
            if n == 0 || bits == 0 {
                return Err(Failure::usage("--n and --bits must be at least 1"));
            }
            gen_instance(bits, n, args.seed)?
        }
        _ => {
            return Err(Failure::usage(
                "give an instance file or both --bits and --n",
            ))
        }
    };
    let limits = if limits.is_unbounded() {
        SearchLimits::nodes(1_000_000)
    } else {
        limits
    };
    let constraint: CardinalityConstraint = args.target.0.constraint(inst.len())?;
    let (points, _) = anytime_trace(&inst, constraint, limits)?;
    let mut out = output(args.out.as_deref())?;
    write_rows(&mut *out, &points, args.format)?;
    let finite: Vec<_> = points
        .iter()
        .copied()
        .filter(|p| p.ratio.is_finite())
        .collect();
    if let Ok(fit) = fit_power_law(&finite) {
        eprintln!(
            "fit: ratio = {:.6e} * nodes^{:.6}",
            fit.coefficient, fit.exponent
        );
    }
    Ok(())
}

fn theory(args: TheoryArgs) -> CliResult {
    if args.bits == 0 {
        return Err(Failure::usage("--bits must be at least 1"));
    }
    let moments = moments_uniform_bits(args.bits);
    let nc = critical_n(&moments, args.balanced)?;
    let mut fields: Vec<(&str, String)> = vec![
        ("bits", args.bits.to_string()),
        ("balanced", args.balanced.to_string()),
        ("critical_n", format!("{nc:.6}")),
    ];
    if let Some(n) = args.n {
        if n == 0 {
            return Err(Failure::usage("--n must be at least 1"));
        }
        fields.push(("n", n.to_string()));
        fields.push((
            "expected_optimum",
            format!("{:.6e}", expected_optimum(&moments, n, args.balanced)),
        ));
        fields.push((
            "bldm_prediction_unit",
            format!("{:.6e}", bldm_prediction(n as f64)),
        ));
    }
    let mut out = io::stdout().lock();
    match args.format {
        Format::Csv => {
            for (k, v) in &fields {
                writeln!(out, "{k},{v}")?;
            }
        }
        Format::JsonLines => {
            let object: serde_json::Map<String, serde_json::Value> = fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            writeln!(out, "{}", serde_json::Value::Object(object))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!("12-14,20".parse::<SizeList>().unwrap().0, vec![12, 13, 14, 20]);
        assert_eq!(" 5 ".parse::<SizeList>().unwrap().0, vec![5]);
        assert!("".parse::<SizeList>().is_err());
        assert!("9-5".parse::<SizeList>().is_err());
        assert!("a".parse::<SizeList>().is_err());
    }

    #[test]
    fn targets() {
        assert!(matches!("balanced".parse::<Target>().unwrap().0, TargetRule::Balanced));
        assert!(matches!("3".parse::<Target>().unwrap().0, TargetRule::Fixed(3)));
        assert!("-1".parse::<Target>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
