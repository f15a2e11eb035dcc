//! Command-line front end.
//!
//! Every command produces an [`Envelope`]: metadata, optional summary
//! values and a table of rows, rendered as CSV or JSON. Rendering is a pure
//! function of the parsed arguments, so seeded commands are byte-for-byte
//! reproducible unless a wall-clock timestamp is requested.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::dice::{self, DieSpec, Face};
use crate::exactmath::ExactNat;
use crate::montecarlo::{self, ChainConfig, InitialState, MicrostateComposition};
use crate::process::{self, OutcomeDistribution, WagerStructure};
use crate::solids::{self, CoupledSolids, Mode, Multiplicity, EXACT_MODE_CAP};

pub const TOOL_NAME: &str = "emergent";

/// Exit status for successful runs.
pub const EXIT_OK: i32 = 0;
/// Exit status for I/O and serialization failures.
pub const EXIT_IO: i32 = 1;
/// Exit status for invalid input.
pub const EXIT_DOMAIN: i32 = 3;
/// Exit status for requests that exceed a size cap.
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if e.is_resource() => EXIT_RESOURCE,
            CliError::Lib(_) => EXIT_DOMAIN,
            _ => EXIT_IO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = TOOL_NAME, version, about = "Multiplicities, macrostate tables and equilibrium sampling for dice and Einstein solids")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write the payload here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Record the wall-clock time in the metadata (breaks byte reproducibility).
    #[arg(long, global = true)]
    pub timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Macrostate table for a set of distinguishable dice.
    Dice(DiceArgs),
    /// Macrostate distribution of two coupled Einstein solids.
    Solids(SolidsArgs),
    /// Energy-exchange Monte Carlo compared with the exact distribution.
    Mc(McArgs),
    /// Peak width of scaled copies of a coupled system.
    Sweep(SweepArgs),
    /// Expected and simulated house profit for a two-outcome game.
    Casino(CasinoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MappingKind {
    /// Sum of numbered faces.
    Sum,
    /// The face labels themselves.
    Labels,
}

#[derive(Debug, Args)]
pub struct DiceArgs {
    /// Comma-separated dice: a face count (`6`) or slash-separated labels (`ant/bee/cat`).
    #[arg(long, value_delimiter = ',', required = true)]
    pub dice: Vec<String>,
    #[arg(long, value_enum, default_value = "sum")]
    pub mapping: MappingKind,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Oscillators in solid A.
    #[arg(long = "Na", default_value_t = 3)]
    pub n_a: u64,
    /// Oscillators in solid B.
    #[arg(long = "Nb", default_value_t = 3)]
    pub n_b: u64,
    /// Total energy units.
    #[arg(short = 'q', long = "q", default_value_t = 6)]
    pub q: u64,
}

impl SystemArgs {
    fn system(&self) -> crate::Result<CoupledSolids> {
        CoupledSolids::new(self.n_a, self.n_b, self.q)
    }
}

#[derive(Debug, Args)]
pub struct SolidsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Work with natural logs instead of exact integers.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Total steps per chain, burn-in included.
    #[arg(long, default_value_t = 1_000_000)]
    pub steps: u64,
    #[arg(long, default_value_t = montecarlo::DEFAULT_BURN_IN)]
    pub burn_in: u64,
    #[arg(long, default_value_t = montecarlo::DEFAULT_STRIDE)]
    pub stride: u64,
    /// `all-in-a`, `all-in-b`, `spread`, or comma-separated per-oscillator energies.
    #[arg(long, default_value = "all-in-b")]
    pub init: String,
    /// Independent chains, seeded `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    pub chains: u64,
    /// File for the sampled q_A trace. Defaults to `<output>.trace` when `--output` is set.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_delimiter = ',', default_value = "1,100,1000")]
    pub factors: Vec<u64>,
    /// Also report whether the relative width is below this threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CasinoArgs {
    /// Probability of outcome A (house keeps the fee).
    #[arg(long, default_value = "0.505")]
    pub p_a: String,
    /// House net gain when A occurs.
    #[arg(long, default_value = "100", allow_hyphen_values = true)]
    pub fee_net: String,
    /// House net loss when B occurs.
    #[arg(long, default_value = "102", allow_hyphen_values = true)]
    pub payout_net: String,
    /// Plays per budgeting period.
    #[arg(long, default_value_t = 10_000)]
    pub plays: u64,
    /// Simulate this many periods.
    #[arg(long)]
    pub simulate: Option<u64>,
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Float(f64),
    /// A float rounded to 12 significant digits.
    Sig12(f64),
    Ratio(BigRational),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<&ExactNat> for Cell {
    fn from(v: &ExactNat) -> Self {
        Cell::Int(BigInt::from(v.as_biguint().clone()))
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Largest integer JSON readers can hold exactly in a double.
const JSON_SAFE_INT: u64 = 1 << 53;

/// `x` rounded to 12 significant digits, in plain decimal notation.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn format_float(x: f64) -> String {
    format!("{x:?}")
}

impl Cell {
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Sig12(v) => format_sig12(*v),
            Cell::Ratio(r) => r.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => {
                if v.abs() <= BigInt::from(JSON_SAFE_INT) {
                    Value::from(v.to_i64().expect("within 2^53"))
                } else {
                    Value::String(v.to_string())
                }
            }
            Cell::Float(v) => float_json(*v),
            Cell::Sig12(v) => float_json(format_sig12(*v).parse().unwrap_or(*v)),
            Cell::Ratio(r) => Value::String(r.to_string()),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

fn float_json(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub timestamp: Option<String>,
    pub rng: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub metadata: Metadata,
    pub summary: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Envelope {
    fn new(metadata: Metadata, columns: &[&str]) -> Self {
        Envelope {
            metadata,
            summary: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push_summary(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// A `#` metadata line, `#` summary lines, then a header row and the rows.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let m = &self.metadata;
        let mut out = String::new();
        write!(
            out,
            "# tool={} version={} command=\"{}\" seed={}",
            m.tool, m.version, m.command, m.seed
        )
        .expect("write to String");
        if let Some(rng) = &m.rng {
            write!(out, " rng=\"{rng}\"").expect("write to String");
        }
        if let Some(ts) = &m.timestamp {
            write!(out, " timestamp={ts}").expect("write to String");
        }
        out.push('\n');
        for (k, v) in &self.summary {
            writeln!(out, "# {k}={}", v.to_csv()).expect("write to String");
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::to_csv))?;
        }
        let body = writer.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(out)
    }

    /// `{"metadata": {..., "summary": {...}}, "rows": [{...}, ...]}`.
    pub fn to_json(&self) -> Result<String, CliError> {
        let m = &self.metadata;
        let mut meta = Map::new();
        meta.insert("tool".into(), Value::from(m.tool.clone()));
        meta.insert("version".into(), Value::from(m.version.clone()));
        meta.insert("command".into(), Value::from(m.command.clone()));
        meta.insert("seed".into(), Value::from(m.seed));
        meta.insert("timestamp".into(), m.timestamp.clone().map(Value::from).unwrap_or(Value::Null));
        if let Some(rng) = &m.rng {
            meta.insert("rng".into(), Value::from(rng.clone()));
        }
        let summary: Map<String, Value> =
            self.summary.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        meta.insert("summary".into(), Value::Object(summary));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect())
            })
            .collect();
        let mut root = Map::new();
        root.insert("metadata".into(), Value::Object(meta));
        root.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(root))?;
        s.push('\n');
        Ok(s)
    }
}

/// A trace file to be written next to the main payload.
#[derive(Debug, Clone, PartialEq)]
pub struct SideFile {
    pub path: PathBuf,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub envelope: Envelope,
    pub side_files: Vec<SideFile>,
}

/// Rewrites the single-dash long flags `-Na`/`-Nb` to their `--` form.
pub fn normalize_args<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    args.into_iter()
        .map(|a| {
            for flag in ["-Na", "-Nb"] {
                if a == flag || a.starts_with(&format!("{flag}=")) {
                    return format!("-{a}");
                }
            }
            a
        })
        .collect()
}

/// Command line recorded in the metadata: every argument except the
/// output path.
fn command_line(args: &[String]) -> String {
    let mut kept = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--output" {
            skip = true;
            continue;
        }
        if a.starts_with("--output=") {
            continue;
        }
        kept.push(a.as_str());
    }
    kept.join(" ")
}

fn timestamp(requested: bool) -> Option<String> {
    if requested {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        return Some(now.to_string());
    }
    std::env::var("SOURCE_DATE_EPOCH").ok()
}

/// Runs a parsed command line. `args` is the normalized argument vector it
/// was parsed from, used for the metadata.
pub fn run(cli: &Cli, args: &[String]) -> Result<RunOutput, CliError> {
    let metadata = Metadata {
        tool: TOOL_NAME.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command_line(args),
        seed: cli.seed,
        timestamp: timestamp(cli.timestamp),
        rng: None,
    };
    execute(cli, metadata)
}

/// Writes the payload to `--output` (or stdout) and any trace files.
pub fn emit(cli: &Cli, out: &RunOutput) -> Result<(), CliError> {
    let text = out.envelope.render(cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    for f in &out.side_files {
        std::fs::write(&f.path, &f.contents)?;
    }
    Ok(())
}

pub fn execute(cli: &Cli, metadata: Metadata) -> Result<RunOutput, CliError> {
    let plain = |envelope| RunOutput { envelope, side_files: Vec::new() };
    match &cli.command {
        Command::Dice(a) => cmd_dice(a, metadata).map(plain),
        Command::Solids(a) => cmd_solids(a, metadata).map(plain),
        Command::Mc(a) => cmd_mc(a, cli.seed, cli.output.as_ref(), metadata),
        Command::Sweep(a) => cmd_sweep(a, metadata).map(plain),
        Command::Casino(a) => cmd_casino(a, cli.seed, metadata).map(plain),
    }
}

fn parse_die(token: &str) -> crate::Result<DieSpec> {
    let token = token.trim();
    match token.parse::<u32>() {
        Ok(faces) if !token.contains('/') => DieSpec::numbered(faces),
        _ => DieSpec::labelled(token.split('/').map(Face::parse).collect()),
    }
}

pub fn cmd_dice(args: &DiceArgs, metadata: Metadata) -> Result<Envelope, CliError> {
    let dice: Vec<DieSpec> = args.dice.iter().map(|t| parse_die(t)).collect::<crate::Result<_>>()?;
    let mut env = Envelope::new(metadata, &["macrostate", "omega", "probability", "probability_decimal"]);
    let (rows, total, dist) = match args.mapping {
        MappingKind::Sum => {
            let table = dice::macrostate_table(&dice, dice::sum_mapping)?;
            let dist = OutcomeDistribution::new(
                table.rows.iter().map(|r| (r.macrostate.to_string(), r.probability.clone())).collect(),
            )?;
            let rows = table
                .rows
                .iter()
                .map(|r| (Cell::from(r.macrostate), &r.multiplicity, &r.probability))
                .map(|(m, o, p)| vec![m, o.into(), Cell::Ratio(p.clone()), Cell::Float(p.to_f64().unwrap_or(0.0))])
                .collect::<Vec<_>>();
            (rows, table.total.clone(), dist)
        }
        MappingKind::Labels => {
            let table = dice::macrostate_table(&dice, dice::identity_mapping)?;
            let dist = OutcomeDistribution::new(
                table.rows.iter().map(|r| (r.macrostate.clone(), r.probability.clone())).collect(),
            )?;
            let rows = table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Text(r.macrostate.clone()),
                        (&r.multiplicity).into(),
                        Cell::Ratio(r.probability.clone()),
                        Cell::Float(r.probability.to_f64().unwrap_or(0.0)),
                    ]
                })
                .collect::<Vec<_>>();
            (rows, table.total.clone(), dist)
        }
    };
    env.rows = rows;
    env.push_summary("total_omega", &total);
    env.push_summary("macrostates", env.rows.len() as u64);
    let (label, p) = process::max_outcome_probability(&dist);
    env.push_summary("most_likely", label.clone());
    env.push_summary("most_likely_probability", Cell::Ratio(p.clone()));
    let eps = process::DEFAULT_EPS.min(0.25 / dist.len() as f64);
    env.push_summary("class", process::classify(&dist, eps)?.to_string());
    Ok(env)
}

fn multiplicity_cell(m: &Multiplicity) -> Cell {
    match m {
        Multiplicity::Exact(v) => v.into(),
        Multiplicity::Log(v) => Cell::Sig12(v.get()),
    }
}

pub fn cmd_solids(args: &SolidsArgs, metadata: Metadata) -> Result<Envelope, CliError> {
    let sys = args.system.system()?;
    let mode = if args.log { Mode::Log } else { Mode::Exact };
    let dist = solids::macrostate_distribution(sys, mode)?;
    let columns: &[&str] = match mode {
        Mode::Exact => &["q_a", "omega_a", "q_b", "omega_b", "omega_tot", "probability"],
        Mode::Log => &["q_a", "ln_omega_a", "q_b", "ln_omega_b", "ln_omega_tot", "probability"],
    };
    let mut env = Envelope::new(metadata, columns);
    env.rows = dist
        .rows
        .iter()
        .map(|r| {
            vec![
                r.q_a.into(),
                multiplicity_cell(&r.omega_a),
                r.q_b.into(),
                multiplicity_cell(&r.omega_b),
                multiplicity_cell(&r.omega_tot),
                Cell::Float(r.probability),
            ]
        })
        .collect();
    let stats = solids::peak_stats(&dist);
    env.push_summary("mode", if args.log { "log" } else { "exact" });
    env.push_summary(if args.log { "ln_total_omega" } else { "total_omega" }, multiplicity_cell(&dist.total));
    env.push_summary("mean", stats.mean);
    env.push_summary("std", stats.std);
    env.push_summary("relative_width", stats.relative_width);
    env.push_summary("fwhm", stats.fwhm);
    Ok(env)
}

fn parse_init(spec: &str, sys: &CoupledSolids) -> crate::Result<InitialState> {
    match spec.trim().to_ascii_lowercase().as_str() {
        "all-in-a" => Ok(InitialState::AllInA),
        "all-in-b" => Ok(InitialState::AllInB),
        "spread" => Ok(InitialState::Spread),
        other => {
            let energies = other
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| {
                    crate::Error::InconsistentState(format!(
                        "`{spec}` is neither a preset nor a list of energies"
                    ))
                })?;
            let comp = MicrostateComposition::new(energies, sys.n_a() as usize)?;
            Ok(InitialState::Composition(comp))
        }
    }
}

pub fn cmd_mc(
    args: &McArgs,
    seed: u64,
    output: Option<&PathBuf>,
    mut metadata: Metadata,
) -> Result<RunOutput, CliError> {
    let sys = args.system.system()?;
    let init = parse_init(&args.init, &sys)?;
    init.build(&sys)?;
    if args.chains == 0 {
        return Err(crate::Error::InvalidArgument("at least one chain is required".into()).into());
    }
    let config = ChainConfig::new(args.steps, args.burn_in, seed, args.stride)?;
    let seeds: Vec<u64> = (0..args.chains).map(|i| seed.wrapping_add(i)).collect();
    let exact_mode = if sys.q_total() + sys.n_a().max(sys.n_b()) <= EXACT_MODE_CAP { Mode::Exact } else { Mode::Log };
    let exact = solids::macrostate_distribution(sys, exact_mode)?;
    let results = montecarlo::run_chains(&sys, &init, &config, &seeds)?;

    let mut pooled = vec![0u64; exact.rows.len()];
    let mut chain_tv = Vec::with_capacity(results.len());
    for r in &results {
        for (p, c) in pooled.iter_mut().zip(&r.histogram) {
            *p += c;
        }
        chain_tv.push(montecarlo::tv_distance(&r.histogram, &exact)?);
    }
    let tv = montecarlo::tv_distance(&pooled, &exact)?;
    let empirical = montecarlo::empirical_distribution(&pooled)?;

    metadata.rng = Some(montecarlo::RNG_ALGORITHM.to_string());
    let mut env = Envelope::new(metadata, &["q_a", "count", "empirical", "exact"]);
    env.rows = exact
        .rows
        .iter()
        .zip(&pooled)
        .zip(&empirical)
        .map(|((row, &count), &emp)| vec![row.q_a.into(), count.into(), Cell::Float(emp), Cell::Float(row.probability)])
        .collect();
    env.push_summary("chains", args.chains);
    env.push_summary("steps_per_chain", args.steps);
    env.push_summary("burn_in", args.burn_in);
    env.push_summary("stride", args.stride);
    env.push_summary("samples", pooled.iter().sum::<u64>());
    env.push_summary("tv_distance", tv);
    env.push_summary("mean_chain_tv_distance", chain_tv.iter().sum::<f64>() / chain_tv.len() as f64);

    let trace_path = args.trace.clone().or_else(|| {
        output.map(|o| {
            let mut p = o.clone().into_os_string();
            p.push(".trace");
            PathBuf::from(p)
        })
    });
    let side_files = match trace_path {
        None => Vec::new(),
        Some(path) => results
            .iter()
            .zip(&seeds)
            .map(|(r, s)| {
                let path = if results.len() == 1 {
                    path.clone()
                } else {
                    let mut p = path.clone().into_os_string();
                    p.push(format!(".{s}"));
                    PathBuf::from(p)
                };
                let mut contents = String::with_capacity(r.trace.len() * 4);
                for q in &r.trace {
                    writeln!(contents, "{q}").expect("write to String");
                }
                SideFile { path, contents }
            })
            .collect(),
    };
    Ok(RunOutput { envelope: env, side_files })
}

pub fn cmd_sweep(args: &SweepArgs, metadata: Metadata) -> Result<Envelope, CliError> {
    let base = args.system.system()?;
    let mut factors = args.factors.clone();
    factors.sort_unstable();
    factors.dedup();
    let sweep = solids::scaling_sweep(base, &factors)?;
    let mut columns = vec!["factor", "n_a", "n_b", "q", "mean", "std", "relative_width", "fwhm"];
    if args.threshold.is_some() {
        columns.push("thermodynamic_limit");
    }
    let mut env = Envelope::new(metadata, &columns);
    for (f, stats) in sweep {
        let sys = base.scaled(f)?;
        let mut row = vec![
            f.into(),
            sys.n_a().into(),
            sys.n_b().into(),
            sys.q_total().into(),
            Cell::Float(stats.mean),
            Cell::Float(stats.std),
            Cell::Float(stats.relative_width),
            Cell::Float(stats.fwhm),
        ];
        if let Some(t) = args.threshold {
            row.push(Cell::Bool(solids::thermodynamic_limit_reached(&stats, t)?));
        }
        env.rows.push(row);
    }
    Ok(env)
}

pub fn cmd_casino(args: &CasinoArgs, seed: u64, mut metadata: Metadata) -> Result<Envelope, CliError> {
    let p_a = process::parse_rational(&args.p_a)?;
    if p_a.is_negative() || p_a > BigRational::from_integer(1.into()) {
        return Err(crate::Error::InvalidArgument(format!("p_A must lie in [0, 1], got {}", args.p_a)).into());
    }
    let p_b = BigRational::from_integer(1.into()) - &p_a;
    let dist = OutcomeDistribution::new(vec![("A".to_string(), p_a), ("B".to_string(), p_b)])?;
    let fee = process::parse_rational(&args.fee_net)?;
    let payout = process::parse_rational(&args.payout_net)?;
    let wager = WagerStructure::new(vec![("A".to_string(), fee), ("B".to_string(), -payout)], args.plays)?;

    let flows = process::house_flows(&dist, &wager)?;
    let profit = process::expected_house_profit(&dist, &wager)?;
    let variance = process::profit_variance(&dist, &wager)?;
    let to_f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);

    let mut env = Envelope::new(metadata.clone(), &["quantity", "exact", "value"]);
    let mut exact_row = |name: &str, r: &BigRational| {
        env.rows.push(vec![name.into(), Cell::Ratio(r.clone()), Cell::Float(to_f(r))]);
    };
    exact_row("expected_fees", &flows.income);
    exact_row("expected_payout", &flows.payout);
    exact_row("expected_profit", &profit);
    exact_row("profit_variance", &variance);
    let sd = to_f(&variance).sqrt();
    env.rows.push(vec!["profit_std".into(), Cell::Empty, Cell::Float(sd)]);

    if let Some(periods) = args.simulate {
        let mut rng = montecarlo::seeded_rng(seed);
        let sim = process::simulate_periods(&dist, &wager, periods, &mut rng)?;
        env.rows.push(vec!["simulated_periods".into(), Cell::from(periods), Cell::Float(periods as f64)]);
        env.rows.push(vec!["simulated_mean".into(), Cell::Empty, Cell::Float(sim.mean)]);
        env.rows.push(vec!["simulated_std_error".into(), Cell::Empty, Cell::Float(sim.std_error)]);
        metadata.rng = Some(montecarlo::RNG_ALGORITHM.to_string());
        env.metadata = metadata;
    }
    let eps = process::DEFAULT_EPS;
    env.push_summary("class", process::classify(&dist, eps)?.to_string());
    Ok(env)
}
