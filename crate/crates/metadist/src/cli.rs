//! Argument parsing and command dispatch for the `metadist` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use metadist_core::canonical::{InterfererMode, QosSpec};
use metadist_core::mdcore::reduce_order;
use metadist_core::thz::{db_to_linear, ThresholdPath, ThzParams};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::record::{Column, Format, RunRecord};
use crate::sweep::{
    parse_grid, parse_trials, Axis, BandwidthFixed, CanonicalFixed, Fixed, Method, SweepSpec, ThzFixed,
};
use crate::table::load_table;
use crate::validate::{self, Status, ValidationConfig};

/// Exit code of `validate` when a criterion fails.
pub const EXIT_CRITERIA_FAILED: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "metadist", version, about = "Hierarchical meta-distribution reliability of wireless networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Second-order reliability of the canonical cellular model (closed forms and/or Monte Carlo).
    Canonical(CanonicalArgs),
    /// Bandwidth required to reach target reliabilities of orders 0, 1 and 2.
    Bandwidth(BandwidthArgs),
    /// Second-order reliability of the frequency-hopping THz link.
    Thz(ThzArgs),
    /// Runs the acceptance suite and writes a JSON report.
    Validate(ValidateArgs),
    /// Integrates a second-order curve R(p) over p in [0, 1].
    ReduceOrder(ReduceArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed (required for every Monte Carlo run).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Swept quantity.
    #[arg(long)]
    pub axis: Option<String>,
    /// `start:step:stop` or a comma list, strictly ascending.
    #[arg(long)]
    pub grid: Option<String>,
    /// closed_form, monte_carlo or both.
    #[arg(long)]
    pub method: Option<String>,
    /// Nested Monte Carlo trials `N0,N1,N2`.
    #[arg(long)]
    pub trials: Option<String>,
    /// Run Monte Carlo even at p1 >= 0.999.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct CanonicalModelArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Base-station intensity (m^-2).
    #[arg(long)]
    pub intensity: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    /// SIR threshold; excludes --l/--bw/--tth.
    #[arg(long, conflicts_with_all = ["l", "bw", "tth"])]
    pub q: Option<f64>,
    /// Packet size (bits).
    #[arg(long)]
    pub l: Option<f64>,
    /// Bandwidth W (Hz).
    #[arg(long)]
    pub bw: Option<f64>,
    /// Deadline (s).
    #[arg(long)]
    pub tth: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CanonicalArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[command(flatten)]
    pub model: CanonicalModelArgs,
    /// Interferer mode of the Monte Carlo column: single or multi.
    #[arg(long)]
    pub mode: Option<String>,
    /// Nearest base stations generated per realization.
    #[arg(long)]
    pub n_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BandwidthArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: CanonicalModelArgs,
    /// Target reliabilities (`start:step:stop` or a list).
    #[arg(long)]
    pub targets: Option<String>,
    /// closed_form (order 2), monte_carlo (orders 0, 1) or both.
    #[arg(long)]
    pub method: Option<String>,
    /// Lower end of the search range (Hz).
    #[arg(long)]
    pub w_min: Option<f64>,
    /// Upper end of the search range (Hz).
    #[arg(long)]
    pub w_max: Option<f64>,
    /// Joint draws behind the order-0 and order-1 curves.
    #[arg(long)]
    pub mc_samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ThzArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// 1 (monotone k(f), closed form) or 2 (valley, numeric).
    #[arg(long)]
    pub scenario: Option<u8>,
    /// CSV with header frequency_hz,k_per_m, or builtin:valley / builtin:monotone.
    #[arg(long)]
    pub absorption_table: Option<String>,
    /// Carrier-law shape m.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    /// approx (exponential Marcum approximation) or exact.
    #[arg(long)]
    pub threshold: Option<String>,
    /// Fixes the SNR threshold instead of deriving it from --l/--bw/--tth.
    #[arg(long, conflicts_with_all = ["l", "tth"])]
    pub q: Option<f64>,
    /// Fixes c1 (Hz^-2 m^-2) instead of deriving it from the link budget.
    #[arg(long)]
    pub c1: Option<f64>,
    /// Packet size (bits).
    #[arg(long)]
    pub l: Option<f64>,
    /// Signal bandwidth W (Hz); the `bw` axis sweeps the hopping band instead.
    #[arg(long)]
    pub bw: Option<f64>,
    /// Deadline (s).
    #[arg(long)]
    pub tth: Option<f64>,
    #[arg(long)]
    pub rician_k: Option<f64>,
    /// Base-station intensity (m^-2).
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Lower band edge (Hz).
    #[arg(long)]
    pub f_low: Option<f64>,
    /// Upper band edge (Hz).
    #[arg(long)]
    pub f_high: Option<f64>,
    /// Transmit power (W).
    #[arg(long)]
    pub tx_power: Option<f64>,
    /// Gain of each antenna (dB).
    #[arg(long)]
    pub gain_db: Option<f64>,
    /// Noise power spectral density (W/Hz).
    #[arg(long)]
    pub noise_density: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Monotone-absorption table for the scenario 1 checks (default: built in).
    #[arg(long)]
    pub absorption_table: Option<String>,
    /// Valley-shaped table for the scenario 2 checks (default: built in).
    #[arg(long)]
    pub valley_table: Option<String>,
    /// Do not fall back to the built-in tables; THz checks without a table are skipped.
    #[arg(long)]
    pub no_builtin_tables: bool,
    /// Nested Monte Carlo trials `N0,N1,N2` of criteria 1, 4, 5 and 8.
    #[arg(long)]
    pub trials: Option<String>,
    /// Comma list of criteria to run.
    #[arg(long)]
    pub only: Option<String>,
    /// Mutation hook: use the reciprocal multi-interferer factor.
    #[arg(long)]
    pub perturb_multi_factor: bool,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub common: Common,
    /// CSV holding the curve (`#` comment lines are ignored).
    #[arg(long)]
    pub input: PathBuf,
    /// Column with the inner target p.
    #[arg(long, default_value = "p2")]
    pub p_column: String,
    /// Column with R(p); defaults to the only other column.
    #[arg(long)]
    pub r_column: Option<String>,
}

const SHARED_KEYS: [&str; 4] = ["seed", "out", "format", "config"];
const SWEEP_KEYS: [&str; 5] = ["axis", "grid", "method", "trials", "force"];
const CANONICAL_MODEL_KEYS: [&str; 9] = ["alpha", "zeta", "intensity", "p1", "p2", "q", "l", "bw", "tth"];
const THZ_KEYS: [&str; 18] = [
    "scenario",
    "absorption-table",
    "m",
    "p1",
    "p2",
    "threshold",
    "q",
    "c1",
    "l",
    "bw",
    "tth",
    "rician-k",
    "intensity",
    "f-low",
    "f-high",
    "tx-power",
    "gain-db",
    "noise-density",
];

/// Everything a command produced, before it is written anywhere.
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub notices: Vec<String>,
    pub code: i32,
}

fn load_config(common: &Common, sections: &[&[&str]]) -> CliResult<Config> {
    let cfg = match &common.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let known: Vec<&str> = sections.iter().flat_map(|s| s.iter().copied()).collect();
    cfg.check_keys(&known)?;
    if cfg.raw("config").is_some() {
        return Err(CliError::Usage("a config file cannot name another config file".into()));
    }
    Ok(cfg)
}

fn required<T>(v: Option<T>, what: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{what} (flag or config key)")))
}

fn format_of(common: &Common, cfg: &Config) -> CliResult<Format> {
    match cfg.resolve(common.format.clone(), "format")? {
        Some(s) => s.parse(),
        None => Ok(Format::Csv),
    }
}

fn out_of(common: &Common, cfg: &Config) -> CliResult<Option<PathBuf>> {
    cfg.resolve(common.out.clone(), "out")
}

fn flag_or_config(flag: bool, cfg: &Config, key: &str) -> CliResult<bool> {
    Ok(flag || cfg.get::<bool>(key)?.unwrap_or(false))
}

fn canonical_fixed(m: &CanonicalModelArgs, cfg: &Config, mode: InterfererMode, n_points: usize) -> CliResult<CanonicalFixed> {
    let q = cfg.resolve(m.q, "q")?;
    let l = cfg.resolve(m.l, "l")?;
    let bw = cfg.resolve(m.bw, "bw")?;
    let tth = cfg.resolve(m.tth, "tth")?;
    let qos = match (q, l.is_some() || bw.is_some() || tth.is_some()) {
        (Some(_), true) => return Err(CliError::Usage("give either --q or --l/--bw/--tth, not both".into())),
        (Some(q), false) => QosSpec::Direct(q),
        // defaults: 256-bit packets, 10 MHz, 1 ms
        (None, _) => QosSpec::Link {
            bits: l.unwrap_or(256.0),
            bandwidth_hz: bw.unwrap_or(1e7),
            deadline_s: tth.unwrap_or(1e-3),
        },
    };
    Ok(CanonicalFixed {
        intensity: cfg.resolve_or(m.intensity, "intensity", 1e-4)?,
        alpha: cfg.resolve_or(m.alpha, "alpha", 3.5)?,
        zeta: cfg.resolve_or(m.zeta, "zeta", 0.2)?,
        qos,
        p1: cfg.resolve_or(m.p1, "p1", 0.999)?,
        p2: cfg.resolve_or(m.p2, "p2", 0.5)?,
        mode,
        n_points,
    })
}

fn sweep_basics(s: &SweepArgs, cfg: &Config, default_axis: Axis) -> CliResult<(Method, Axis, Vec<f64>, Vec<u64>, bool)> {
    let method = cfg.resolve(s.method.clone(), "method")?.map_or(Ok(Method::Both), |m| m.parse())?;
    let axis = cfg.resolve(s.axis.clone(), "axis")?.map_or(Ok(default_axis), |a| a.parse())?;
    let grid = parse_grid(&required(cfg.resolve(s.grid.clone(), "grid")?, "grid")?)?;
    let trials = parse_trials(&cfg.resolve_or(s.trials.clone(), "trials", "2000,200,2000".to_string())?)?;
    let force = flag_or_config(s.force, cfg, "force")?;
    Ok((method, axis, grid, trials, force))
}

fn seed_for(common: &Common, cfg: &Config, needed: bool) -> CliResult<u64> {
    match cfg.resolve(common.seed, "seed")? {
        Some(s) => Ok(s),
        None if needed => Err(CliError::Usage("--seed is required for Monte Carlo runs".into())),
        None => Ok(0),
    }
}

fn canonical_spec(a: &CanonicalArgs) -> CliResult<SweepSpec> {
    let cfg = load_config(&a.common, &[&SHARED_KEYS, &SWEEP_KEYS, &CANONICAL_MODEL_KEYS, &["mode", "n-points"]])?;
    let (method, axis, grid, trials, force) = sweep_basics(&a.sweep, &cfg, Axis::P2)?;
    let mode = match cfg.resolve(a.mode.clone(), "mode")?.as_deref() {
        None | Some("single") => InterfererMode::Single,
        Some("multi") => InterfererMode::Multi,
        Some(other) => return Err(CliError::Usage(format!("unknown mode `{other}` (single or multi)"))),
    };
    let n_points = cfg.resolve_or(a.n_points, "n-points", metadist_core::canonical::DEFAULT_N_POINTS)?;
    Ok(SweepSpec {
        method,
        axis,
        grid,
        fixed: Fixed::Canonical(canonical_fixed(&a.model, &cfg, mode, n_points)?),
        seed: seed_for(&a.common, &cfg, method != Method::ClosedForm)?,
        trials,
        force,
        out: out_of(&a.common, &cfg)?,
        format: format_of(&a.common, &cfg)?,
    })
}

fn bandwidth_spec(a: &BandwidthArgs) -> CliResult<SweepSpec> {
    let cfg = load_config(
        &a.common,
        &[&SHARED_KEYS, &CANONICAL_MODEL_KEYS, &["targets", "method", "w-min", "w-max", "mc-samples"]],
    )?;
    let method = cfg.resolve(a.method.clone(), "method")?.map_or(Ok(Method::Both), |m| m.parse())?;
    let grid = parse_grid(&required(cfg.resolve(a.targets.clone(), "targets")?, "targets")?)?;
    Ok(SweepSpec {
        method,
        axis: Axis::Target,
        grid,
        fixed: Fixed::Bandwidth(BandwidthFixed {
            canonical: canonical_fixed(&a.model, &cfg, InterfererMode::Single, metadist_core::canonical::DEFAULT_N_POINTS)?,
            w_lo: cfg.resolve_or(a.w_min, "w-min", 1e3)?,
            w_hi: cfg.resolve_or(a.w_max, "w-max", 1e11)?,
            mc_samples: cfg.resolve_or(a.mc_samples, "mc-samples", 20_000)?,
        }),
        seed: seed_for(&a.common, &cfg, method != Method::ClosedForm)?,
        trials: Vec::new(),
        force: false,
        out: out_of(&a.common, &cfg)?,
        format: format_of(&a.common, &cfg)?,
    })
}

fn thz_spec(a: &ThzArgs, notices: &mut Vec<String>) -> CliResult<SweepSpec> {
    let cfg = load_config(&a.common, &[&SHARED_KEYS, &SWEEP_KEYS, &THZ_KEYS])?;
    let (method, axis, grid, trials, force) = sweep_basics(&a.sweep, &cfg, Axis::P2)?;
    let scenario = cfg.resolve_or(a.scenario, "scenario", 1u8)?;
    let mut p = if scenario == 2 {
        ThzParams::default_scenario2()
    } else {
        ThzParams::default_scenario1()
    };
    let table_spec = match cfg.resolve(a.absorption_table.clone(), "absorption-table")? {
        Some(t) => t,
        None => {
            let builtin = if scenario == 2 { "builtin:valley" } else { "builtin:monotone" };
            notices.push(format!("no --absorption-table given; using {builtin}"));
            builtin.to_string()
        }
    };
    p.m = cfg.resolve_or(a.m, "m", p.m)?;
    p.q_override = cfg.resolve(a.q, "q")?;
    p.c1_override = cfg.resolve(a.c1, "c1")?;
    p.bits = cfg.resolve_or(a.l, "l", p.bits)?;
    p.bandwidth = cfg.resolve_or(a.bw, "bw", p.bandwidth)?;
    p.deadline = cfg.resolve_or(a.tth, "tth", p.deadline)?;
    p.rician_k = cfg.resolve_or(a.rician_k, "rician-k", p.rician_k)?;
    p.intensity = cfg.resolve_or(a.intensity, "intensity", p.intensity)?;
    p.f_low = cfg.resolve_or(a.f_low, "f-low", p.f_low)?;
    p.f_high = cfg.resolve_or(a.f_high, "f-high", p.f_high)?;
    p.tx_power = cfg.resolve_or(a.tx_power, "tx-power", p.tx_power)?;
    if let Some(g) = cfg.resolve(a.gain_db, "gain-db")? {
        p.gain_tx = db_to_linear(g);
        p.gain_rx = db_to_linear(g);
    }
    p.noise_density = cfg.resolve_or(a.noise_density, "noise-density", p.noise_density)?;
    let path = match cfg.resolve(a.threshold.clone(), "threshold")?.as_deref() {
        None | Some("approx") => ThresholdPath::default(),
        Some("exact") => ThresholdPath::Exact,
        Some(other) => return Err(CliError::Usage(format!("unknown threshold path `{other}` (approx or exact)"))),
    };
    Ok(SweepSpec {
        method,
        axis,
        grid,
        fixed: Fixed::Thz(ThzFixed {
            params: p,
            table: load_table(&table_spec)?,
            scenario,
            p1: cfg.resolve_or(a.p1, "p1", 0.9)?,
            p2: cfg.resolve_or(a.p2, "p2", 0.7)?,
            path,
        }),
        seed: seed_for(&a.common, &cfg, method != Method::ClosedForm)?,
        trials,
        force,
        out: out_of(&a.common, &cfg)?,
        format: format_of(&a.common, &cfg)?,
    })
}

fn render(record: &RunRecord, format: Format, out: &Option<PathBuf>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    record.write(format, &mut buf)?;
    match out {
        Some(path) => {
            write_file(path, &buf)?;
            Ok(Vec::new())
        }
        None => Ok(buf),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Ingest(format!("cannot write {}: {e}", path.display())))
}

fn run_sweep(spec: SweepSpec, mut notices: Vec<String>) -> CliResult<Outcome> {
    let result = spec.run()?;
    notices.extend(result.notices);
    Ok(Outcome {
        stdout: render(&result.record, spec.format, &spec.out)?,
        notices,
        code: 0,
    })
}

fn table_for(
    flag: &Option<String>,
    cfg: &Config,
    key: &str,
    builtin: &str,
    allow_builtin: bool,
    notices: &mut Vec<String>,
) -> CliResult<Option<metadist_core::thz::AbsorptionTable>> {
    let spec = match cfg.resolve(flag.clone(), key)? {
        Some(s) => s,
        None if allow_builtin => builtin.to_string(),
        None => {
            notices.push(format!("warning: no --{key}; the THz checks that need it are skipped"));
            return Ok(None);
        }
    };
    match load_table(&spec) {
        Ok(t) => Ok(Some(t)),
        Err(e) => {
            notices.push(format!("warning: {e}; the THz checks that need it are skipped"));
            Ok(None)
        }
    }
}

fn run_validate(a: &ValidateArgs, progress: &mut dyn FnMut(&str)) -> CliResult<Outcome> {
    let cfg = load_config(
        &a.common,
        &[
            &SHARED_KEYS,
            &["absorption-table", "valley-table", "no-builtin-tables", "trials", "only", "perturb-multi-factor"],
        ],
    )?;
    let mut notices = Vec::new();
    if let Some(f) = cfg.resolve(a.common.format.clone(), "format")? {
        if f != "json" {
            return Err(CliError::Usage("validate writes a JSON report only".into()));
        }
    }
    let allow_builtin = !flag_or_config(a.no_builtin_tables, &cfg, "no-builtin-tables")?;
    let mut vc = ValidationConfig {
        seed: seed_for(&a.common, &cfg, true)?,
        perturb_multi_factor: flag_or_config(a.perturb_multi_factor, &cfg, "perturb-multi-factor")?,
        monotone_table: table_for(
            &a.absorption_table,
            &cfg,
            "absorption-table",
            "builtin:monotone",
            allow_builtin,
            &mut notices,
        )?,
        valley_table: table_for(&a.valley_table, &cfg, "valley-table", "builtin:valley", allow_builtin, &mut notices)?,
        ..ValidationConfig::default()
    };
    if let Some(t) = cfg.resolve(a.trials.clone(), "trials")? {
        let t = parse_trials(&t)?;
        vc.trials = <[u64; 3]>::try_from(t.as_slice())
            .map_err(|_| CliError::Usage("--trials needs three counts N0,N1,N2".into()))?;
        if vc.trials.contains(&0) {
            return Err(CliError::Usage("trial counts must be positive".into()));
        }
    }
    if let Some(o) = cfg.resolve(a.only.clone(), "only")? {
        let ids = o
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|i| (1..=12).contains(i))
                    .ok_or_else(|| CliError::Usage(format!("--only: `{x}` is not a criterion number 1..12")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        vc.only = Some(ids);
    }
    for n in &notices {
        progress(n);
    }
    let report = validate::run_with(&vc, |c| {
        progress(&format!(
            "criterion {:>2} {:<7} {:>7.1}s  {}: {}",
            c.id,
            match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIPPED",
            },
            c.seconds,
            c.title,
            c.detail
        ))
    });
    let mut json = serde_json::to_vec_pretty(&report)?;
    json.push(b'\n');
    let stdout = match out_of(&a.common, &cfg)? {
        Some(path) => {
            write_file(&path, &json)?;
            Vec::new()
        }
        None => json,
    };
    let failed = report.criteria.iter().any(|c| c.status == Status::Fail);
    Ok(Outcome {
        stdout,
        notices: Vec::new(),
        code: if failed { EXIT_CRITERIA_FAILED } else { 0 },
    })
}

fn run_reduce(a: &ReduceArgs) -> CliResult<Outcome> {
    let cfg = load_config(&a.common, &[&SHARED_KEYS])?;
    let bytes = std::fs::read(&a.input)
        .map_err(|e| CliError::Ingest(format!("cannot read {}: {e}", a.input.display())))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Ingest(format!("no column `{name}` in {}", a.input.display())))
    };
    let pi = find(&a.p_column)?;
    let ri = match &a.r_column {
        Some(r) => find(r)?,
        None => {
            let others: Vec<usize> = (0..header.len()).filter(|&i| i != pi).collect();
            match others.as_slice() {
                [only] => *only,
                _ => return Err(CliError::Usage("several candidate columns; pick one with --r-column".into())),
            }
        }
    };
    let mut curve = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let cell = |j: usize| -> CliResult<f64> {
            row.get(j)
                .unwrap_or("")
                .parse::<f64>()
                .map_err(|e| CliError::Ingest(format!("row {}: column `{}`: {e}", i + 1, header[j])))
        };
        curve.push((cell(pi)?, cell(ri)?));
    }
    let value = reduce_order(&curve).map_err(|e| CliError::Ingest(e.to_string()))?;
    let mut h = Sha256::new();
    h.update(&bytes);
    h.update(format!("|{}|{}", header[pi], header[ri]).as_bytes());
    let record = RunRecord::new(
        format!("{:x}", h.finalize()),
        0,
        vec![
            Column::full("grid_points", "1", vec![curve.len() as f64]),
            Column::full("R_reduced", "1", vec![value]),
        ],
    )?;
    Ok(Outcome {
        stdout: render(&record, format_of(&a.common, &cfg)?, &out_of(&a.common, &cfg)?)?,
        notices: Vec::new(),
        code: 0,
    })
}

/// Runs a parsed command; `progress` receives validation progress lines.
pub fn execute(cli: &Cli, progress: &mut dyn FnMut(&str)) -> CliResult<Outcome> {
    match &cli.command {
        Command::Canonical(a) => run_sweep(canonical_spec(a)?, Vec::new()),
        Command::Bandwidth(a) => run_sweep(bandwidth_spec(a)?, Vec::new()),
        Command::Thz(a) => {
            let mut notices = Vec::new();
            let spec = thz_spec(a, &mut notices)?;
            run_sweep(spec, notices)
        }
        Command::Validate(a) => run_validate(a, progress),
        Command::ReduceOrder(a) => run_reduce(a),
    }
}

/// Entry point of the binary: parses `args`, runs, writes stdout and stderr,
/// and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = std::time::Instant::now();
    let mut stderr = std::io::stderr();
    let mut progress = |line: &str| {
        let _ = writeln!(stderr, "{line}");
    };
    match execute(&cli, &mut progress) {
        Ok(outcome) => {
            let mut err = std::io::stderr();
            for n in &outcome.notices {
                let _ = writeln!(err, "notice: {n}");
            }
            let _ = writeln!(err, "wall time: {:.2} s", start.elapsed().as_secs_f64());
            if std::io::stdout().write_all(&outcome.stdout).is_err() {
                return CliError::Ingest("cannot write to stdout".into()).exit_code();
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            e.exit_code()
        }
    }
}
