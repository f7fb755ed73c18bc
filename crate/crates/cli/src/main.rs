//! `critzeta`: scans for critical points of ζ, lemma verifications,
//! τ-searches, parameter reports and report conversion.

use std::collections::HashMap;
use std::fmt::{self, Display, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use critzeta_core::bounds::{
    build_records, emit_report, format_g12, parse_csv_report, parse_json_report, summarize, BoundRecord,
    BoundsError, EnvelopeParams, ReportFormat,
};
use critzeta_core::critical::{find_critical_points, CriticalError, CriticalPoint, SearchRectangle};
use critzeta_core::dirichlet::{DirichletError, Orientation};
use critzeta_core::kronecker::{
    build_peak_polynomial, choose_parameters, h_of_t, safe_epsilon, search_tau, verify_tau, Interval,
    KroneckerError, MAX_SEARCH_PRIMES,
};
use critzeta_core::number_theory::{sieve, LambdaTable, NumberTheoryError};
use critzeta_core::verify::{
    verify_eq7_2, verify_l1, verify_l10, verify_l11, verify_l12, verify_l2, verify_l3, verify_l5, verify_l6,
    LemmaId, PeakInstance, Verification, VerifyError,
};
use critzeta_core::zeta::{EvalConfig, ZetaError};

const WORKERS_ENV: &str = "CRITZETA_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "critzeta", version, about = "Critical points of zeta and the sums around them")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Worker threads (default: $CRITZETA_WORKERS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `csv` or `json`.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Locate zeros of ζ′ in a rectangle and write the bounds report.
    Scan {
        #[arg(long = "t-lo")]
        t_lo: Option<f64>,
        #[arg(long = "t-hi")]
        t_hi: Option<f64>,
        #[arg(long = "sigma-lo")]
        sigma_lo: Option<f64>,
        #[arg(long = "sigma-hi")]
        sigma_hi: Option<f64>,
        #[arg(long)]
        sigma1: Option<f64>,
        #[arg(long)]
        sigma2: Option<f64>,
    },
    /// Measure one lemma against its prediction.
    Verify {
        /// L1, L2, L3, L5, L6, L10, L11, L12 or EQ7_2.
        lemma: String,
        /// Comma-separated abscissae.
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<f64>>,
        #[arg(long)]
        sigma1: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long = "x-max")]
        x_max: Option<f64>,
        /// Comma-separated values of log x.
        #[arg(long, value_delimiter = ',')]
        logx: Option<Vec<f64>>,
        #[arg(long = "primes-limit")]
        primes_limit: Option<u32>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long = "T")]
        height: Option<f64>,
        #[arg(long)]
        orientation: Option<String>,
        /// Sample count for randomized lemmas.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Heights where every target phase is within δ, as `tau,h_value,verified`.
    TauSearch {
        #[arg(long = "primes-limit")]
        primes_limit: Option<u32>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long = "t-lo")]
        t_lo: Option<f64>,
        #[arg(long = "t-hi")]
        t_hi: Option<f64>,
        #[arg(long)]
        orientation: Option<String>,
    },
    /// The coupled x, K, δ, ε for a height T.
    Params {
        #[arg(long = "T")]
        height: Option<f64>,
        #[arg(long)]
        sigma1: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
    },
    /// Re-emit a scan report with fitted constants and summary.
    Report {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        sigma1: Option<f64>,
        #[arg(long)]
        sigma2: Option<f64>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

impl From<NumberTheoryError> for Failure {
    fn from(e: NumberTheoryError) -> Self {
        usage(e.to_string())
    }
}

impl From<ZetaError> for Failure {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::InvalidArgument(_) | ZetaError::Pole => usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<CriticalError> for Failure {
    fn from(e: CriticalError) -> Self {
        match e {
            CriticalError::InvalidArgument(_) => usage(e.to_string()),
            CriticalError::Zeta(z) => z.into(),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<DirichletError> for Failure {
    fn from(e: DirichletError) -> Self {
        match e {
            DirichletError::InvalidArgument(_) | DirichletError::PatternMismatch { .. } => usage(e.to_string()),
            DirichletError::Table(t) => t.into(),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<KroneckerError> for Failure {
    fn from(e: KroneckerError) -> Self {
        usage(e.to_string())
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Empty => Failure::Numeric(e.to_string()),
            _ => usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::InvalidArgument(m) => usage(m),
            VerifyError::Table(t) => t.into(),
            VerifyError::Dirichlet(d) => d.into(),
            VerifyError::Kronecker(k) => k.into(),
            VerifyError::Zeta(z) => z.into(),
        }
    }
}

/// Flat `key = value` settings; `#` starts a comment, `-` and `_` in keys
/// are interchangeable.
#[derive(Debug, Default)]
struct ConfigFile(HashMap<String, String>);

impl ConfigFile {
    fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn parse(text: &str) -> Result<Self, Failure> {
        let mut map = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key = value", i + 1)))?;
            map.insert(normalize_key(k), v.trim().to_string());
        }
        Ok(Self(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        match self.0.get(&normalize_key(key)) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("config key {key}: cannot parse {v:?}"))),
        }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, Failure> {
        match self.0.get(&normalize_key(key)) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| usage(format!("config key {key}: cannot parse {v:?}"))),
        }
    }
}

fn normalize_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('-', "_")
}

/// Flag, then config file, then default.
fn pick<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str, default: T) -> Result<T, Failure> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(cfg.get(key)?.unwrap_or(default)),
    }
}

fn pick_list(flag: Option<Vec<f64>>, cfg: &ConfigFile, key: &str, default: &[f64]) -> Result<Vec<f64>, Failure> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(cfg.list(key)?.unwrap_or_else(|| default.to_vec())),
    }
}

fn require_finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("{name} = {v} is not finite")))
    }
}

struct Ctx {
    cfg: ConfigFile,
    seed: u64,
    out: Option<PathBuf>,
    format: ReportFormat,
}

impl Ctx {
    fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure::Numeric(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("critzeta: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.common.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let env_workers = match std::env::var(WORKERS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("{WORKERS_ENV} = {v:?} is not a worker count")))?,
        ),
        Err(_) => None,
    };
    let workers = match cli.common.workers.or(cfg.get("workers")?).or(env_workers) {
        Some(0) => return Err(usage("worker count must be at least 1")),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let format_name: String = pick(cli.common.format.clone(), &cfg, "format", "csv".into())?;
    let ctx = Ctx {
        seed: pick(cli.common.seed, &cfg, "seed", 0)?,
        out: cli.common.out.clone().or(cfg.get("out")?),
        format: format_name.parse()?,
        cfg,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::Numeric(e.to_string()))?;
    pool.install(|| dispatch(cli.command, &ctx))
}

fn dispatch(command: Command, ctx: &Ctx) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    match command {
        Command::Scan {
            t_lo,
            t_hi,
            sigma_lo,
            sigma_hi,
            sigma1,
            sigma2,
        } => cmd_scan(
            ctx,
            pick(t_lo, cfg, "t_lo", 16.0)?,
            pick(t_hi, cfg, "t_hi", 100.0)?,
            pick(sigma_lo, cfg, "sigma_lo", 0.5)?,
            pick(sigma_hi, cfg, "sigma_hi", 1.0)?,
            pick(sigma1, cfg, "sigma1", 0.6)?,
            pick(sigma2, cfg, "sigma2", 0.9)?,
        ),
        Command::Verify {
            lemma,
            sigma,
            sigma1,
            a,
            x_max,
            logx,
            primes_limit,
            delta,
            k,
            height,
            orientation,
            points,
        } => {
            let lemma: LemmaId = lemma.parse()?;
            let orientation: String = pick(orientation, cfg, "orientation", "W".into())?;
            let inst = PeakInstance {
                primes_limit: pick(primes_limit, cfg, "primes_limit", 3)?,
                k: pick(k, cfg, "K", 8)?,
                delta: pick(delta, cfg, "delta", 0.1)?,
                height: pick(height, cfg, "T", lemma_default_height(lemma))?,
                orientation: orientation.parse()?,
            };
            let args = VerifyArgs {
                sigma: pick_list(sigma, cfg, "sigma", &[lemma_default_sigma(lemma)])?,
                sigma1: pick(sigma1, cfg, "sigma1", 0.75)?,
                a: pick(a, cfg, "a", 2.5)?,
                x_max: pick(x_max, cfg, "x_max", lemma_default_x_max(lemma))?,
                logx: pick_list(logx, cfg, "logx", &[6.0, 8.0, 10.0, 12.0])?,
                points: pick(points, cfg, "points", 20)?,
                inst,
            };
            cmd_verify(ctx, lemma, &args)
        }
        Command::TauSearch {
            primes_limit,
            delta,
            k,
            t_lo,
            t_hi,
            orientation,
        } => {
            let orientation: String = pick(orientation, cfg, "orientation", "W".into())?;
            cmd_tau_search(
                ctx,
                pick(primes_limit, cfg, "primes_limit", 3)?,
                pick(delta, cfg, "delta", 0.1)?,
                pick(k, cfg, "K", 8)?,
                pick(t_lo, cfg, "t_lo", 0.0)?,
                pick(t_hi, cfg, "t_hi", 1e4)?,
                orientation.parse()?,
            )
        }
        Command::Params { height, sigma1, a, b } => cmd_params(
            ctx,
            pick(height, cfg, "T", 1e6)?,
            pick(sigma1, cfg, "sigma1", 0.75)?,
            pick(a, cfg, "a", 2.1)?,
            pick(b, cfg, "b", 3.2)?,
        ),
        Command::Report { input, sigma1, sigma2 } => {
            let input = input
                .or(cfg.get("input")?)
                .ok_or_else(|| usage("report needs --input"))?;
            cmd_report(
                ctx,
                &input,
                pick(sigma1, cfg, "sigma1", 0.6)?,
                pick(sigma2, cfg, "sigma2", 0.9)?,
            )
        }
    }
}

fn cmd_scan(
    ctx: &Ctx,
    t_lo: f64,
    t_hi: f64,
    sigma_lo: f64,
    sigma_hi: f64,
    sigma1: f64,
    sigma2: f64,
) -> Result<(), Failure> {
    let rect = SearchRectangle::new(sigma_lo, sigma_hi, t_lo, t_hi)?;
    let params = EnvelopeParams::unit(sigma1, sigma2)?;
    let outcome = find_critical_points(&rect, &EvalConfig::default())?;
    let records = build_records(&outcome.points, &params)?;
    let preamble = format!(
        "critzeta scan t_lo={t_lo} t_hi={t_hi} sigma_lo={sigma_lo} sigma_hi={sigma_hi} \
         sigma1={sigma1} sigma2={sigma2} seed={}",
        ctx.seed
    );
    ctx.write(&emit_report(&records, ctx.format, &[preamble])?)?;
    if outcome.unresolved.is_empty() {
        return Ok(());
    }
    for cell in &outcome.unresolved {
        eprintln!(
            "warning: unresolved cell sigma {}..{} t {}..{}: {}",
            cell.rect.sigma_lo, cell.rect.sigma_hi, cell.rect.t_lo, cell.rect.t_hi, cell.reason
        );
    }
    Err(Failure::Numeric(format!(
        "{} unresolved cells; {} rows written",
        outcome.unresolved.len(),
        records.len()
    )))
}

struct VerifyArgs {
    sigma: Vec<f64>,
    sigma1: f64,
    a: f64,
    x_max: f64,
    logx: Vec<f64>,
    points: usize,
    inst: PeakInstance,
}

fn lemma_default_sigma(lemma: LemmaId) -> f64 {
    match lemma {
        LemmaId::L5 => 0.8,
        _ => 0.75,
    }
}

fn lemma_default_x_max(lemma: LemmaId) -> f64 {
    match lemma {
        LemmaId::L3 | LemmaId::L5 => 1e5,
        _ => 1e6,
    }
}

fn lemma_default_height(lemma: LemmaId) -> f64 {
    match lemma {
        LemmaId::L12 => 5000.0,
        _ => 1e4,
    }
}

const SWEEP_LO: f64 = 100.0;
const L3_HEIGHTS: usize = 8;
const L11_EXTRA_PRIMES: usize = 4;

fn table_for(x_max: f64) -> Result<LambdaTable, Failure> {
    let x = require_finite("x-max", x_max)?;
    if !(x >= SWEEP_LO) {
        return Err(usage(format!("x-max = {x} below {SWEEP_LO}")));
    }
    Ok(LambdaTable::new(x.floor() as usize)?)
}

fn single_sigma(args: &VerifyArgs) -> Result<f64, Failure> {
    match args.sigma.as_slice() {
        [s] => Ok(*s),
        _ => Err(usage("this lemma takes a single --sigma")),
    }
}

fn cmd_verify(ctx: &Ctx, lemma: LemmaId, args: &VerifyArgs) -> Result<(), Failure> {
    let v = match lemma {
        LemmaId::L1 => verify_l1(&table_for(args.x_max)?, &args.sigma, SWEEP_LO, args.x_max)?,
        LemmaId::L2 => verify_l2(&table_for(args.x_max)?, &args.sigma, SWEEP_LO, args.x_max)?,
        LemmaId::L3 => verify_l3(
            &table_for(args.x_max)?,
            single_sigma(args)?,
            SWEEP_LO,
            args.x_max,
            L3_HEIGHTS,
            ctx.seed,
        )?,
        LemmaId::L5 => {
            let xs: Vec<f64> = (2..)
                .map(|k| 10f64.powi(k))
                .take_while(|&x| x <= args.x_max * (1.0 + 1e-12))
                .collect();
            if xs.len() < 2 {
                return Err(usage("L5 needs x-max of at least 1e3"));
            }
            verify_l5(&table_for(args.x_max)?, single_sigma(args)?, args.sigma1, args.a, &xs)?
        }
        LemmaId::L6 => {
            let top = args.logx.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !(top.is_finite() && top <= 18.5) {
                return Err(usage(format!("log x values must be finite and at most 18.5, got {:?}", args.logx)));
            }
            verify_l6(&table_for(top.exp().max(SWEEP_LO))?, args.sigma1, args.a, &args.logx)?
        }
        LemmaId::L10 => verify_l10(&args.inst)?,
        LemmaId::L11 => verify_l11(&args.inst, args.sigma1, L11_EXTRA_PRIMES)?,
        LemmaId::L12 => {
            let h = require_finite("T", args.inst.height)?;
            verify_l12((h, 2.0 * h), args.sigma1 - 0.5, args.points, ctx.seed)?
        }
        LemmaId::Eq72 => verify_eq7_2(&table_for(args.x_max)?, args.sigma1, SWEEP_LO, args.x_max)?,
    };
    let text = match ctx.format {
        ReportFormat::Csv => render_verification(&v),
        ReportFormat::Json => {
            serde_json::to_string_pretty(&v).map_err(|e| Failure::Numeric(e.to_string()))? + "\n"
        }
    };
    ctx.write(&text)?;
    if v.pass {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "{}: fitted {} outside band {}",
            v.lemma,
            format_g12(v.fitted),
            format_g12(v.band)
        )))
    }
}

fn render_verification(v: &Verification) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lemma {}", v.lemma);
    let _ = writeln!(s, "{:<40} {:>20} {:>20}", "case", "measured", "predicted");
    for r in &v.rows {
        let _ = writeln!(s, "{:<40} {:>20} {:>20}", r.label, format_g12(r.measured), format_g12(r.predicted));
    }
    for n in &v.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(
        s,
        "fitted {} band {} {}",
        format_g12(v.fitted),
        format_g12(v.band),
        if v.pass { "PASS" } else { "FAIL" }
    );
    s
}

fn cmd_tau_search(
    ctx: &Ctx,
    primes_limit: u32,
    delta: f64,
    k: usize,
    t_lo: f64,
    t_hi: f64,
    orientation: Orientation,
) -> Result<(), Failure> {
    // π(41) = 13 already exceeds the cap
    let probe = primes_limit.min(1000);
    let count = sieve(probe as usize)?.count_up_to(probe as f64);
    if count > MAX_SEARCH_PRIMES {
        return Err(usage(format!(
            "pi({primes_limit}) = {count} exceeds {MAX_SEARCH_PRIMES} primes"
        )));
    }
    require_finite("t-lo", t_lo)?;
    require_finite("t-hi", t_hi)?;
    if t_lo > t_hi || t_lo < 0.0 {
        return Err(usage(format!("need 0 <= t-lo <= t-hi, got {t_lo}..{t_hi}")));
    }
    let inst = PeakInstance {
        primes_limit,
        k,
        delta,
        height: t_hi,
        orientation,
    };
    let targets = inst.targets()?;
    let f = build_peak_polynomial(k, delta)?;
    let eps = safe_epsilon(&f);
    let hits = if t_hi > t_lo {
        search_tau(&[Interval::new(t_lo, t_hi)?], &f, &targets, eps)?
    } else {
        Vec::new()
    };
    let mut out = String::from("tau,h_value,verified\n");
    for tau in hits {
        let h = h_of_t(tau, &f, &targets, eps)?;
        let _ = writeln!(out, "{},{},{}", format_g12(tau), format_g12(h), verify_tau(tau, &targets));
    }
    ctx.write(&out)
}

fn cmd_params(ctx: &Ctx, height: f64, sigma1: f64, a: f64, b: f64) -> Result<(), Failure> {
    let p = choose_parameters(require_finite("T", height)?, sigma1, a, b)?;
    let text = match ctx.format {
        ReportFormat::Json => serde_json::to_string_pretty(&p).map_err(|e| Failure::Numeric(e.to_string()))? + "\n",
        ReportFormat::Csv => {
            let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), format_g12);
            let mut s = String::new();
            let _ = writeln!(s, "T = {}", format_g12(p.height));
            let _ = writeln!(s, "sigma1 = {}", format_g12(p.sigma1));
            let _ = writeln!(s, "d1 = {}", format_g12(p.d1));
            let _ = writeln!(s, "a = {}", format_g12(p.a));
            let _ = writeln!(s, "b = {}", format_g12(p.b));
            let _ = writeln!(s, "x = {}", format_g12(p.x));
            let _ = writeln!(s, "K = {}", p.k.map_or_else(|| "none".to_string(), |k| k.to_string()));
            let _ = writeln!(s, "delta = {}", opt(p.delta));
            let _ = writeln!(s, "epsilon = {}", opt(p.epsilon));
            let _ = writeln!(s, "mu = {}", opt(p.mu));
            let _ = writeln!(s, "exp_condition = {}", p.exp_condition);
            let _ = writeln!(s, "feasible = {}", p.feasible);
            s
        }
    };
    ctx.write(&text)
}

fn cmd_report(ctx: &Ctx, input: &Path, sigma1: f64, sigma2: f64) -> Result<(), Failure> {
    let text = std::fs::read_to_string(input).map_err(|e| usage(format!("{}: {e}", input.display())))?;
    let rows = if text.trim_start().starts_with('[') {
        parse_json_report(&text)?
    } else {
        parse_csv_report(&text)?
    };
    let params = EnvelopeParams::unit(sigma1, sigma2)?;
    let points: Vec<CriticalPoint> = rows
        .iter()
        .map(|r| CriticalPoint {
            beta: r.beta,
            gamma: r.gamma,
            zeta_value: Complex64::new(r.re_zeta, r.im_zeta),
            log_abs_zeta: r.log_abs_zeta,
            residual: r.residual,
        })
        .collect();
    let records: Vec<BoundRecord> = build_records(&points, &params)?;
    let mut preamble = vec![format!("critzeta report sigma1={sigma1} sigma2={sigma2}")];
    if !records.is_empty() {
        let s = summarize(&records)?;
        preamble.push(format!(
            "count={} a_fit={} c_fit={} max_log_abs_zeta={} min_log_abs_zeta={}",
            s.count,
            format_g12(s.a_fit),
            format_g12(s.c_fit),
            format_g12(s.max_log_abs_zeta),
            format_g12(s.min_log_abs_zeta)
        ));
        preamble.push(format!(
            "max_over_thm2={} min_over_thm4={} max_over_thm2_proof={} min_over_thm4_proof={}",
            format_g12(s.max_over_thm2),
            format_g12(s.min_over_thm4),
            format_g12(s.max_over_thm2_proof),
            format_g12(s.min_over_thm4_proof)
        ));
    }
    for line in &preamble[1..] {
        eprintln!("{line}");
    }
    ctx.write(&emit_report(&records, ctx.format, &preamble)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing_and_precedence() {
        let cfg = ConfigFile::parse("# run\nt-lo = 20\nsigma_hi=5 # trailing\n\nK = 12\n").unwrap();
        assert_eq!(cfg.get::<f64>("t_lo").unwrap(), Some(20.0));
        assert_eq!(cfg.get::<f64>("sigma-hi").unwrap(), Some(5.0));
        assert_eq!(cfg.get::<usize>("k").unwrap(), Some(12));
        assert_eq!(pick(Some(30.0), &cfg, "t_lo", 1.0).unwrap(), 30.0);
        assert_eq!(pick(None, &cfg, "t_lo", 1.0).unwrap(), 20.0);
        assert_eq!(pick(None, &cfg, "t_hi", 1.0).unwrap(), 1.0);
        assert!(ConfigFile::parse("no equals sign").is_err());
        assert!(ConfigFile::parse("a = x").unwrap().get::<f64>("a").is_err());
    }

    #[test]
    fn failure_codes() {
        assert_eq!(Failure::from(ZetaError::Pole).code(), 2);
        assert_eq!(Failure::from(CriticalError::Unresolved(Complex64::new(0.5, 1.0))).code(), 3);
        assert_eq!(Failure::from(VerifyError::InvalidArgument("x".into())).code(), 2);
        assert_eq!(Failure::from(BoundsError::Empty).code(), 3);
    }
}
