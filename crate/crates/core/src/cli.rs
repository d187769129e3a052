//! The `ftrcap` command line: `dist`, `capacity`, `sweep` and `mc`.
//!
//! Every flag may also come from a `key = value` file given with
//! `--config`; keys are the long flag names and flags on the command line
//! win. Exit codes: 0 ok, 2 bad input, 3 numerical failure, 4 I/O failure.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::capacity::{asymptotic, ec_opra, evaluate, Policy};
use crate::error::{Error, Result};
use crate::ftr::{build_series, cdf, db_to_linear, pdf, FtrParams, LinkBudget, DEFAULT_TOL};
use crate::mc::{mc_capacity, McConfig};
use crate::sweep::{run_sweep, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) => EXIT_BAD_INPUT,
            Error::Specfun(_) | Error::Numerical(_) => EXIT_NUMERICAL,
            Error::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ftrcap", version, about = "Ergodic capacity of fluctuating two-ray fading channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PDF and CDF of the instantaneous SNR on a grid, as CSV `gamma,pdf,cdf`
    Dist {
        #[command(flatten)]
        common: Common,
        /// Comma-separated SNR values (linear); overrides --gamma-max/--points
        #[arg(long)]
        grid: Option<String>,
        /// Upper end of the linear grid [default: 5 × mean SNR]
        #[arg(long)]
        gamma_max: Option<f64>,
        /// Number of grid points [default: 200]
        #[arg(long)]
        points: Option<usize>,
    },
    /// Capacity of one or all policies at a single average SNR
    Capacity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
    },
    /// Sweep the average SNR and write `snr_db,policy,exact_nats,asymptotic_nats,cutoff,trunc_order`
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Monte-Carlo estimate next to the analytic value
    Mc {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Opra,
    Ora,
    Ci,
    Tci,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
}

impl FromStr for Units {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Units as ValueEnum>::from_str(s, true)
    }
}

impl FromStr for PolicyArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <PolicyArg as ValueEnum>::from_str(s, true)
    }
}

/// Flags shared by every command. Unset flags fall back to the config file,
/// then to the documented defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Specular-to-diffuse power ratio K [default: 10]
    #[arg(long)]
    pub k_ratio: Option<f64>,
    /// Gamma fluctuation shape m [default: 10.5]
    #[arg(long)]
    pub m: Option<f64>,
    /// Specular similarity Δ in [0, 1] [default: 0.5]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Average SNR in dB [default: 20]
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// TCI cutoff γ₀ [default: 0.1]
    #[arg(long)]
    pub tci_cutoff: Option<f64>,
    /// Series truncation tolerance [default: 1e-9]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Monte-Carlo seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte-Carlo sample count [default: 1000000]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output file (standard output when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Units for printed capacities; CSV columns stay in nats [default: nats]
    #[arg(long, value_enum)]
    pub units: Option<Units>,
    /// `key = value` file supplying any unset flag
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// First SNR point in dB [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub snr_start: Option<f64>,
    /// Last SNR point in dB [default: 40]
    #[arg(long, allow_hyphen_values = true)]
    pub snr_stop: Option<f64>,
    /// Number of SNR points [default: 41]
    #[arg(long)]
    pub points: Option<usize>,
    /// Comma-separated subset of opra,ora,ci,tci [default: all]
    #[arg(long)]
    pub policies: Option<String>,
    /// E_b/N_0 in dB [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub eb_n0_db: Option<f64>,
    /// Path-loss exponent η [default: 1]
    #[arg(long)]
    pub path_loss_exp: Option<f64>,
    /// Link distance r [default: 1]
    #[arg(long)]
    pub distance: Option<f64>,
    /// Average transmit power P̄_t in dB [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub avg_power_db: Option<f64>,
}

/// Parsed `key = value` config file. Keys accept dashes or underscores.
#[derive(Debug, Default)]
struct ConfigFile(HashMap<String, String>);

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)?;
        let mut map = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("{}:{}: expected `key = value`", path.display(), n + 1))
            })?;
            map.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Self(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidParameter(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }
}

/// Flag, else config file, else default.
fn pick<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str, default: T) -> Result<T> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(cfg.get(key)?.unwrap_or(default)),
    }
}

fn pick_opt<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

#[derive(Debug, Clone)]
struct Settings {
    k_ratio: f64,
    m: f64,
    delta: f64,
    snr_db: f64,
    tci_cutoff: f64,
    tol: f64,
    seed: u64,
    samples: usize,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    units: Units,
}

impl Settings {
    fn resolve(c: &Common, cfg: &ConfigFile) -> Result<Self> {
        Ok(Self {
            k_ratio: pick(c.k_ratio, cfg, "k-ratio", 10.0)?,
            m: pick(c.m, cfg, "m", 10.5)?,
            delta: pick(c.delta, cfg, "delta", 0.5)?,
            snr_db: pick(c.snr_db, cfg, "snr-db", 20.0)?,
            tci_cutoff: pick(c.tci_cutoff, cfg, "tci-cutoff", 0.1)?,
            tol: pick(c.tol, cfg, "tol", DEFAULT_TOL)?,
            seed: pick(c.seed, cfg, "seed", 1)?,
            samples: pick(c.samples, cfg, "samples", 1_000_000)?,
            out: pick_opt(c.out.clone(), cfg, "out")?,
            jobs: pick_opt(c.jobs, cfg, "jobs")?,
            units: pick(c.units, cfg, "units", Units::Nats)?,
        })
    }

    fn params(&self, link: &LinkBudget) -> Result<FtrParams> {
        if !self.snr_db.is_finite() {
            return Err(Error::InvalidParameter(format!("SNR must be finite, got {} dB", self.snr_db)));
        }
        FtrParams::from_avg_snr(self.k_ratio, self.m, self.delta, db_to_linear(self.snr_db), link)
    }

    fn scale(&self, nats: f64) -> f64 {
        match self.units {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    fn unit_name(&self) -> &'static str {
        match self.units {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }

    fn policies(&self, arg: PolicyArg) -> Vec<Policy> {
        let tci = Policy::Tci { cutoff: self.tci_cutoff };
        match arg {
            PolicyArg::Opra => vec![Policy::Opra],
            PolicyArg::Ora => vec![Policy::Ora],
            PolicyArg::Ci => vec![Policy::Ci],
            PolicyArg::Tci => vec![tci],
            PolicyArg::All => vec![Policy::Opra, Policy::Ora, Policy::Ci, tci],
        }
    }
}

fn open_out<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    match out {
        Some(path) => {
            let f = File::create(path).map_err(|e| {
                Error::Io(std::io::Error::new(e.kind(), format!("cannot write {}: {e}", path.display())))
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(stdout)),
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(e.into())
}

fn parse_list<T>(text: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(s).ok_or_else(|| Error::InvalidParameter(format!("bad {what} `{s}`"))))
        .collect()
}

fn cmd_dist(
    st: &Settings,
    cfg: &ConfigFile,
    grid: Option<String>,
    gamma_max: Option<f64>,
    points: Option<usize>,
    stdout: &mut dyn Write,
) -> Result<()> {
    let p = st.params(&LinkBudget::default())?;
    let s = build_series(&p, st.tol)?;
    let grid = match pick_opt(grid, cfg, "grid")? {
        Some(text) => parse_list(&text, "grid value", |v| v.parse::<f64>().ok())?,
        None => {
            let hi = pick(gamma_max, cfg, "gamma-max", 5.0 * p.mean_snr())?;
            let n = pick(points, cfg, "points", 200)?;
            if n < 2 || !(hi > 0.0) {
                return Err(Error::InvalidParameter(format!("grid needs points >= 2 and gamma-max > 0, got {n}, {hi}")));
            }
            (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
        }
    };
    let mut w = csv_writer(open_out(&st.out, stdout)?);
    w.write_record(["gamma", "pdf", "cdf"]).map_err(csv_io)?;
    for g in grid {
        w.write_record([g.to_string(), pdf(g, &s, &p)?.to_string(), cdf(g, &s, &p)?.to_string()]).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_capacity(st: &Settings, cfg: &ConfigFile, policy: Option<PolicyArg>, stdout: &mut dyn Write) -> Result<()> {
    let p = st.params(&LinkBudget::default())?;
    let s = build_series(&p, st.tol)?;
    let policy = pick(policy, cfg, "policy", PolicyArg::All)?;
    let mut records = Vec::new();
    for pol in st.policies(policy) {
        let r = evaluate(pol, &s, &p)?;
        let asym = asymptotic(&r, &s, &p)?;
        let mut line = format!(
            "{:<4} snr_db={} capacity={:.10} {}",
            pol.name(),
            st.snr_db,
            st.scale(r.capacity_nats),
            st.unit_name(),
        );
        if let Some(a) = asym {
            line += &format!(" asymptotic={:.10}", st.scale(a));
        }
        if let Some(g0) = r.cutoff {
            line += &format!(" cutoff={g0:.12}");
        }
        line += &format!(" trunc_order={}", r.truncation_order);
        if let Some(res) = r.solver_residual {
            line += &format!(" residual={res:.3e}");
        }
        if r.divergent {
            line += " divergent (E{1/γ} is infinite)";
        }
        writeln!(stdout, "{line}")?;
        records.push((pol, r, asym));
    }
    if let Some(path) = &st.out {
        let mut w = csv_writer(open_out(&Some(path.clone()), stdout)?);
        w.write_record(["snr_db", "policy", "capacity_nats", "asymptotic_nats", "cutoff", "trunc_order", "residual", "divergent"])
            .map_err(csv_io)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for (pol, r, asym) in records {
            w.write_record([
                st.snr_db.to_string(),
                pol.name().to_string(),
                r.capacity_nats.to_string(),
                opt(asym),
                opt(r.cutoff),
                r.truncation_order.to_string(),
                opt(r.solver_residual),
                r.divergent.to_string(),
            ])
            .map_err(csv_io)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn cmd_sweep(st: &Settings, cfg: &ConfigFile, a: SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let policies = match pick_opt(a.policies, cfg, "policies")? {
        Some(text) => {
            let args = parse_list(&text, "policy", |v| <PolicyArg as FromStr>::from_str(v).ok())?;
            let mut out: Vec<Policy> = args.into_iter().flat_map(|a| st.policies(a)).collect();
            out.dedup();
            out
        }
        None => st.policies(PolicyArg::All),
    };
    let eb_n0_db = pick(a.eb_n0_db, cfg, "eb-n0-db", 0.0)?;
    let avg_power_db = pick(a.avg_power_db, cfg, "avg-power-db", 0.0)?;
    let link = LinkBudget::new(
        db_to_linear(eb_n0_db),
        pick(a.path_loss_exp, cfg, "path-loss-exp", 1.0)?,
        pick(a.distance, cfg, "distance", 1.0)?,
        db_to_linear(avg_power_db),
    )?;
    let spec = SweepSpec {
        k_ratio: st.k_ratio,
        m: st.m,
        delta: st.delta,
        snr_db_start: pick(a.snr_start, cfg, "snr-start", 0.0)?,
        snr_db_stop: pick(a.snr_stop, cfg, "snr-stop", 40.0)?,
        points: pick(a.points, cfg, "points", 41)?,
        policies,
        link,
        tol: st.tol,
    };
    // validate the destination before the work
    let out = open_out(&st.out, stdout)?;
    run_sweep(&spec)?.write_csv(out)
}

fn cmd_mc(st: &Settings, cfg: &ConfigFile, policy: Option<PolicyArg>, stdout: &mut dyn Write) -> Result<()> {
    let p = st.params(&LinkBudget::default())?;
    let s = build_series(&p, st.tol)?;
    let mc_cfg = McConfig::new(st.samples, st.seed)?;
    let policy = pick(policy, cfg, "policy", PolicyArg::Ora)?;
    let mut out = open_out(&st.out, stdout)?;
    for pol in st.policies(policy) {
        let (analytic, g0) = match pol {
            Policy::Opra => {
                let r = ec_opra(&s, &p)?;
                (r.capacity_nats, r.cutoff)
            }
            other => (evaluate(other, &s, &p)?.capacity_nats, None),
        };
        let est = mc_capacity(pol, &p, g0, &mc_cfg)?;
        writeln!(
            out,
            "{:<4} snr_db={} samples={} seed={} mc={:.8} se={:.3e} analytic={:.8} z={} [{}] clamped={}",
            pol.name(),
            st.snr_db,
            est.samples,
            est.seed,
            st.scale(est.mean),
            st.scale(est.std_error),
            st.scale(analytic),
            // the CI estimate only drifts towards its zero limit; a z-score means nothing there
            if pol == Policy::Ci || est.std_error == 0.0 { "n/a".to_string() } else { format!("{:.3}", est.z_score(analytic)) },
            st.unit_name(),
            est.clamped,
        )?;
        if pol == Policy::Ci {
            writeln!(out, "  running mean of 1/γ (diverges, so the CI capacity is 0):")?;
            for (n, v) in &est.checkpoints {
                writeln!(out, "  {n:>12} {v:.6}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let common = match &cli.command {
        Command::Dist { common, .. }
        | Command::Capacity { common, .. }
        | Command::Sweep { common, .. }
        | Command::Mc { common, .. } => common.clone(),
    };
    let cfg = ConfigFile::load(common.config.as_deref())?;
    let st = Settings::resolve(&common, &cfg)?;
    let jobs = st.jobs;
    let body = move |stdout: &mut dyn Write| match cli.command {
        Command::Dist { grid, gamma_max, points, .. } => cmd_dist(&st, &cfg, grid, gamma_max, points, stdout),
        Command::Capacity { policy, .. } => cmd_capacity(&st, &cfg, policy, stdout),
        Command::Sweep { sweep, .. } => cmd_sweep(&st, &cfg, sweep, stdout),
        Command::Mc { policy, .. } => cmd_mc(&st, &cfg, policy, stdout),
    };
    match jobs {
        Some(0) => Err(Error::InvalidParameter("--jobs must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            // stdout need not be Send, so collect the pool's output first
            let mut buf = Vec::new();
            let result = pool.install(|| body(&mut buf));
            stdout.write_all(&buf)?;
            result
        }
        None => body(stdout),
    }
}

/// Runs the CLI on `args` (program name first), writing normal output to
/// `stdout` and diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
