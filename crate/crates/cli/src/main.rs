use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fiet::keane::{
    build_variant_path, example_datum, BlockComposition, KeaneError, ParameterTriple, PathVariant, ScheduleMode,
};
use fiet::rational::{format_rational, parse_rational, to_decimal, Rational};
use fiet::rauzy::{apply_path, path_matrix_for_power, rauzy_step, symbolic_step, RauzyPath, StepLabel};
use fiet::verify::{birkhoff_frequencies, midpoints, oracle_crosscheck, verify_construction, OrbitStatus};
use fiet::wire::{matrix_rows, CombJson, FietJson, LimitReportJson, ScheduleConfig, StepJson};
use fiet::{Fiet, FietCombinatorics};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const DEFAULT_DEPTH: usize = 3;

#[derive(Parser)]
#[command(name = "fiet", version, about = "Interval exchanges with flips: induction, construction, verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One induction step on a FIET read as JSON.
    Step(StepArgs),
    /// Apply a path over {a, b} to combinatorics.
    Path(PathArgs),
    /// Compute the limit vectors of the example.
    Construct(ConstructArgs),
    /// Check every tower estimate and separation inequality.
    Verify(VerifyArgs),
    /// Visit frequencies of orbits of the constructed FIET.
    Simulate(SimulateArgs),
    /// Randomized comparison of induction steps with first-return maps.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct StepArgs {
    /// FIET JSON file; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Force the step letter instead of comparing lengths.
    #[arg(long)]
    letter: Option<char>,
    /// Apply a whole path instead of one step; an empty path echoes the input.
    #[arg(long)]
    path: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Listed,
    ThreeLoop,
}

impl From<VariantArg> for PathVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Listed => PathVariant::Listed,
            VariantArg::ThreeLoop => PathVariant::ThreeLoop,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CompositionArg {
    Uniform,
    Threaded,
}

impl From<CompositionArg> for BlockComposition {
    fn from(v: CompositionArg) -> Self {
        match v {
            CompositionArg::Uniform => BlockComposition::Uniform,
            CompositionArg::Threaded => BlockComposition::Threaded,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Relaxed,
}

impl From<ModeArg> for ScheduleMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => ScheduleMode::Strict,
            ModeArg::Relaxed => ScheduleMode::Relaxed,
        }
    }
}

#[derive(Args)]
struct PathArgs {
    /// FIET or combinatorics JSON; the eight-interval datum when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Explicit word, e.g. "aaab^3 a".
    #[arg(long, conflicts_with = "gamma")]
    word: Option<String>,
    /// Loop parameters p1,p2,p3[,p4,p5] for the example's loop path.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "three-loop")]
    variant: VariantArg,
    /// Number of consecutive copies of the path.
    #[arg(long, default_value_t = 1)]
    copies: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Schedule configuration JSON.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long, value_enum)]
    composition: Option<CompositionArg>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Fractional digits of the decimal renderings.
    #[arg(long, default_value_t = 30)]
    digits: usize,
    /// Stop once product entries exceed this many bits.
    #[arg(long)]
    bit_budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Schedule configuration; the FIET is built from its alpha vector.
    #[arg(long, required_unless_present = "input")]
    config: Option<PathBuf>,
    /// Simulate this FIET JSON instead of the constructed one.
    #[arg(long, conflicts_with = "config")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long, value_enum)]
    composition: Option<CompositionArg>,
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    horizons: Vec<u64>,
    /// Extra exact start points, comma separated.
    #[arg(long, value_delimiter = ',')]
    starts: Vec<String>,
    /// Extra uniformly drawn rational start points.
    #[arg(long, default_value_t = 0)]
    random_starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    digits: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn failed(message: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Step(a) => cmd_step(a),
        Command::Path(a) => cmd_path(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| failed(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| failed(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn cmd_step(a: StepArgs) -> Result<u8, Failure> {
    let text = read_input(a.input.as_deref())?;
    let f = FietJson::parse(&text).map_err(usage)?;
    if let Some(word) = a.path {
        let path: RauzyPath = word.parse().map_err(usage)?;
        if path.is_empty() {
            emit(a.out.as_deref(), &to_json(&FietJson::from_fiet(&f))?)?;
            return Ok(0);
        }
        let mut current = f;
        for (s, count) in path.runs() {
            let count: u64 = count.try_into().map_err(|_| usage("path too long for length-driven steps"))?;
            for _ in 0..count {
                let (next, outcome) = rauzy_step(&current).map_err(failed)?;
                if outcome.case_tag.letter() != *s {
                    return Err(failed(format!(
                        "lengths select letter {} where the path has {}",
                        outcome.case_tag.letter(),
                        s
                    )));
                }
                current = next;
            }
        }
        emit(a.out.as_deref(), &to_json(&FietJson::from_fiet(&current))?)?;
        return Ok(0);
    }
    let json = match a.letter {
        Some(ch) => {
            let s = StepLabel::from_char(ch).ok_or_else(|| usage(format!("letter must be a or b, got {ch:?}")))?;
            let outcome = symbolic_step(f.comb(), s).map_err(failed)?;
            StepJson::new(&outcome, None)
        }
        None => {
            let (next, outcome) = rauzy_step(&f).map_err(failed)?;
            StepJson::new(&outcome, Some(&next))
        }
    };
    emit(a.out.as_deref(), &to_json(&json)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct PathReport {
    path: String,
    copies: usize,
    start: CombJson,
    end: CombJson,
    matrix: Vec<Vec<String>>,
    column_sums: Vec<String>,
    determinant: String,
}

fn parse_big(s: &str) -> Result<BigUint, Failure> {
    s.trim().parse().map_err(|_| usage(format!("invalid integer {s:?}")))
}

fn read_comb(path: Option<&Path>) -> Result<FietCombinatorics, Failure> {
    let Some(p) = path else { return Ok(example_datum()) };
    let text = read_input(Some(p))?;
    if let Ok(f) = FietJson::parse(&text) {
        return Ok(f.comb().clone());
    }
    let c: CombJson = serde_json::from_str(&text).map_err(usage)?;
    FietCombinatorics::from_rows(c.pi0, c.pi1, c.flips).map_err(usage)
}

fn cmd_path(a: PathArgs) -> Result<u8, Failure> {
    if a.copies == 0 {
        return Err(usage("copies must be at least 1"));
    }
    let start = read_comb(a.input.as_deref())?;
    let path = match (&a.word, &a.gamma) {
        (Some(w), _) => w.parse::<RauzyPath>().map_err(usage)?,
        (None, Some(ps)) => {
            let ps: Vec<BigUint> = ps.iter().map(|s| parse_big(s)).collect::<Result<_, _>>()?;
            let t = match ps.as_slice() {
                [p1, p2, p3] => ParameterTriple::from_three(p1.clone(), p2.clone(), p3.clone()),
                [p1, p2, p3, p4, p5] => {
                    ParameterTriple::new(p1.clone(), p2.clone(), p3.clone(), p4.clone(), p5.clone())
                }
                _ => return Err(usage("gamma takes 3 or 5 parameters")),
            }
            .map_err(usage)?;
            build_variant_path(&t, a.variant.into())
        }
        (None, None) => return Err(usage("give --word or --gamma")),
    };
    let (end, matrix) = if a.copies == 1 {
        apply_path(&start, &path).map_err(failed)?
    } else {
        path_matrix_for_power(&start, &path, a.copies).map_err(failed)?
    };
    let report = PathReport {
        path: path.to_string(),
        copies: a.copies,
        start: CombJson::from(&start),
        end: CombJson::from(&end),
        matrix: matrix_rows(&matrix),
        column_sums: matrix.column_sums().iter().map(|v| v.to_string()).collect(),
        determinant: matrix.determinant().to_string(),
    };
    emit(a.out.as_deref(), &to_json(&report)?)?;
    Ok(0)
}

fn load_config(s: &ScheduleArgs) -> Result<(ScheduleConfig, usize), Failure> {
    let text = read_input(Some(&s.config))?;
    load_config_text(&text, s.mode, s.depth, s.variant, s.composition)
}

fn load_config_text(
    text: &str,
    mode: Option<ModeArg>,
    depth: Option<usize>,
    variant: Option<VariantArg>,
    composition: Option<CompositionArg>,
) -> Result<(ScheduleConfig, usize), Failure> {
    let mut cfg = ScheduleConfig::parse(text).map_err(|e| usage(format!("invalid schedule: {e}")))?;
    if let Some(m) = mode {
        cfg.schedule.mode = m.into();
    }
    if let Some(v) = variant {
        cfg.variant = v.into();
    }
    if let Some(c) = composition {
        cfg.composition = c.into();
    }
    let depth = depth.or(cfg.depth).unwrap_or(DEFAULT_DEPTH);
    if depth == 0 {
        return Err(usage("depth must be at least 1"));
    }
    Ok((cfg, depth))
}

fn cmd_construct(a: ConstructArgs) -> Result<u8, Failure> {
    let (cfg, depth) = load_config(&a.schedule)?;
    let c = cfg.construction();
    match c.limit_series(depth, a.bit_budget) {
        Ok(series) => {
            emit(a.out.as_deref(), &to_json(&LimitReportJson::new(&c, &series, a.digits, true))?)?;
            Ok(0)
        }
        Err(KeaneError::ResourceLimit { depth: at, bits, budget, partial }) => {
            if !partial.is_empty() {
                emit(a.out.as_deref(), &to_json(&LimitReportJson::new(&c, &partial, a.digits, false))?)?;
            }
            Err(failed(format!("stopped at depth {at}: {bits} bits exceeds budget {budget}")))
        }
        Err(e) => Err(failed(e)),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, Failure> {
    let (cfg, depth) = load_config(&a.schedule)?;
    let c = cfg.construction();
    let report = verify_construction(&c, depth).map_err(failed)?;
    emit(a.out.as_deref(), &to_json(&report)?)?;
    for u in &report.unsupported {
        eprintln!("unsupported proof margin: {} (used by {})", u.name, u.used_by);
    }
    let failures: Vec<_> = report.failures().collect();
    for r in &failures {
        eprintln!("{r}");
    }
    eprintln!(
        "{} of {} records hold at depth {}",
        report.records.len() - failures.len(),
        report.records.len(),
        depth
    );
    Ok(if report.all_hold { 0 } else { 1 })
}

/// `count` points `total * k / 2^32` with `k` uniform, reproducible from
/// `seed`.
fn random_starts(total: &Rational, count: usize, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = BigInt::from(1u64 << 32);
    (0..count)
        .map(|_| total * Rational::new(BigInt::from(rng.gen_range(0u64..1 << 32)), den.clone()))
        .collect()
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8, Failure> {
    if a.horizons.is_empty() || a.horizons.contains(&0) {
        return Err(usage("horizons must be positive"));
    }
    let f: Fiet = match (&a.input, &a.config) {
        (Some(p), _) => FietJson::parse(&read_input(Some(p))?).map_err(usage)?,
        (None, Some(p)) => {
            let text = read_input(Some(p))?;
            let (cfg, depth) = load_config_text(&text, a.mode, a.depth, a.variant, a.composition)?;
            let alpha = cfg.construction().limit_vectors(depth).map_err(failed)?.alpha;
            Fiet::from_parts(example_datum(), alpha.coords().to_vec()).map_err(failed)?
        }
        (None, None) => return Err(usage("give --config or --input")),
    };
    let mut starts = midpoints(&f);
    for s in &a.starts {
        starts.push(parse_rational(s).map_err(usage)?);
    }
    starts.extend(random_starts(f.total(), a.random_starts, a.seed));
    let report = birkhoff_frequencies(&f, &starts, &a.horizons).map_err(usage)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let n = f.n();
    let mut header = vec!["start".to_string(), "horizon".to_string()];
    header.extend((1..=n).map(|i| format!("f{i}")));
    header.extend((1..=n).map(|i| format!("f{i}_decimal")));
    header.push("max_gap".into());
    header.push("status".into());
    w.write_record(&header).map_err(failed)?;
    for row in &report.rows {
        let mut rec = vec![format_rational(&row.start), row.horizon.to_string()];
        let freqs = row.frequencies();
        rec.extend(freqs.iter().map(format_rational));
        rec.extend(freqs.iter().map(|v| to_decimal(v, a.digits)));
        rec.push(to_decimal(&row.max_gap, a.digits));
        rec.push(match row.status {
            OrbitStatus::Ok => "ok".into(),
            OrbitStatus::Terminated { step } => format!("terminated at step {step}"),
        });
        w.write_record(&rec).map_err(failed)?;
    }
    let bytes = w.into_inner().map_err(|e| failed(e.to_string()))?;
    emit(a.out.as_deref(), &String::from_utf8(bytes).map_err(failed)?)?;
    Ok(0)
}

fn cmd_oracle(a: OracleArgs) -> Result<u8, Failure> {
    let summary = oracle_crosscheck(a.trials, a.seed);
    emit(a.out.as_deref(), &to_json(&summary)?)?;
    for f in summary.failures.iter().chain(&summary.euclid_failures) {
        eprintln!("mismatch in trial {} (seed {}): {}", f.trial, f.seed, f.description);
    }
    Ok(if summary.all_pass() { 0 } else { 1 })
}
