use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phr::kpss::{kpss_test, Bandwidth, KpssConfig, SignificanceLevel};
use phr::montecarlo::{parse_scenarios, table_sweep};
use phr::phr::{phr_test, PhrConfig};
use phr::timeseries::{load_csv, ColumnSelector};
use phr::{TestResult, TimeSeries};

#[derive(Parser)]
#[command(name = "phr", version, about = "Strict-stationarity testing with the cumulant-spectrum test and KPSS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run PHR and/or KPSS on one column of a CSV file
    Test(TestArgs),
    /// Run a Monte Carlo scenario file and tabulate rejection rates
    Simulate(SimulateArgs),
    /// Descriptive statistics of one column
    Describe(DescribeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Zero-based index or header name
    #[arg(long, default_value = "0")]
    column: ColumnSelector,
    #[arg(long)]
    skip_header: bool,
    /// Replace prices by log returns first
    #[arg(long)]
    log_returns: bool,
}

impl InputArgs {
    fn load(&self) -> phr::Result<TimeSeries> {
        let s = load_csv(&self.input, &self.column, self.skip_header)?;
        if self.log_returns {
            s.log_returns()
        } else {
            Ok(s)
        }
    }
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "FRAC")]
    trim: Option<f64>,
    #[arg(long)]
    detrend: bool,
    #[arg(long)]
    demean: bool,
    /// AR prewhitening with order chosen by AIC up to MAX_ORDER
    #[arg(long, value_name = "MAX_ORDER", num_args = 0..=1, default_missing_value = "10")]
    prewhiten: Option<usize>,
    #[arg(long, value_name = "N")]
    roll_window: Option<usize>,
    #[arg(long)]
    phr: bool,
    #[arg(long)]
    kpss: bool,
    /// PHR frame length; defaults to the even integer nearest √T
    #[arg(long = "L", value_name = "N")]
    frame_length: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// KPSS lag truncation: a number, auto or sqrt
    #[arg(long, value_name = "N|auto|sqrt")]
    bandwidth: Option<Bandwidth>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Override the replication count of every scenario
    #[arg(long)]
    reps: Option<usize>,
    /// Override the base seed of every scenario
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Write the table here and a JSON sidecar next to it
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct DescribeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

enum Failure {
    Usage(String),
    Lib(phr::Error),
    Io(PathBuf, io::Error),
}

impl From<phr::Error> for Failure {
    fn from(e: phr::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_degenerate() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "cannot write {}: {e}", p.display()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Describe(a) => cmd_describe(a),
    };
    match run.and_then(|out| write_stdout(&out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn write_stdout(s: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    out.write_all(s.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))
}

fn cmd_test(a: TestArgs) -> CliResult<String> {
    let (run_phr, run_kpss) = match (a.phr, a.kpss) {
        (false, false) => (true, false),
        flags => flags,
    };
    if a.frame_length.is_some() && !run_phr {
        return Err(Failure::Usage("--L applies to PHR; add --phr".into()));
    }
    if a.bandwidth.is_some() && !run_kpss {
        return Err(Failure::Usage("--bandwidth applies to KPSS; add --kpss".into()));
    }
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Failure::Usage(format!("--alpha must lie in (0, 1), got {}", a.alpha)));
    }
    let kpss_alpha = if run_kpss {
        Some(SignificanceLevel::try_from(a.alpha)?)
    } else {
        None
    };
    if let Some(f) = a.trim {
        if !(0.0..=0.1).contains(&f) {
            return Err(Failure::Usage(format!("--trim must lie in [0, 0.1], got {f}")));
        }
    }
    if matches!(a.roll_window, Some(w) if w < 2) {
        return Err(Failure::Usage("--roll-window must be at least 2".into()));
    }

    let mut s = a.input.load()?;
    if let Some(f) = a.trim {
        s = s.trim(f)?;
    }
    if a.detrend {
        s = s.detrend()?;
    }
    if a.demean {
        s = s.demean()?;
    }
    if let Some(p) = a.prewhiten {
        s = s.prewhiten(p)?.0;
    }
    if let Some(w) = a.roll_window {
        s = s.rolling_variance_standardize(w)?;
    }

    let mut results: Vec<TestResult> = Vec::new();
    if run_phr {
        let config = PhrConfig {
            frame_length: a.frame_length,
            alpha: a.alpha,
            ..PhrConfig::default()
        };
        let out = phr_test(&s, &config)?;
        for w in &out.warnings {
            eprintln!("warning: {w}");
        }
        results.push(out.result.into());
    }
    if let Some(alpha) = kpss_alpha {
        let config = KpssConfig {
            bandwidth: a.bandwidth.unwrap_or_default(),
            alpha,
        };
        results.push(kpss_test(&s, &config)?.into());
    }

    match a.format {
        Format::Json => {
            let mut out = if results.len() == 1 {
                serde_json::to_string_pretty(&results[0])
            } else {
                serde_json::to_string_pretty(&results)
            }
            .map_err(phr::Error::from)?;
            out.push('\n');
            Ok(out)
        }
        Format::Csv => results_csv(&results),
        Format::Text => Ok(results.iter().map(result_text).collect()),
    }
}

fn csv_text(rows: Vec<Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).map_err(|e| Failure::Io(PathBuf::from("<csv>"), e.into()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Io(PathBuf::from("<csv>"), io::Error::other(e.to_string())))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

fn results_csv(results: &[TestResult]) -> CliResult<String> {
    let header = [
        "test", "statistic", "p_value", "p_low", "p_high", "alpha", "reject", "L", "P", "n_pairs", "bandwidth",
        "preprocessing",
    ];
    let mut rows = vec![header.iter().map(|h| h.to_string()).collect()];
    for r in results {
        let row = match r {
            TestResult::Phr(p) => vec![
                "PHR".into(),
                p.d_statistic.to_string(),
                p.p_value.to_string(),
                String::new(),
                String::new(),
                p.alpha.to_string(),
                p.reject.to_string(),
                p.frame_length.to_string(),
                p.frame_count.to_string(),
                p.n_pairs.to_string(),
                String::new(),
                p.preprocessing.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";"),
            ],
            TestResult::Kpss(k) => vec![
                "KPSS".into(),
                k.statistic.to_string(),
                String::new(),
                k.p_bracket[0].to_string(),
                k.p_bracket[1].to_string(),
                k.alpha.to_string(),
                k.reject.to_string(),
                String::new(),
                String::new(),
                String::new(),
                k.bandwidth.to_string(),
                String::new(),
            ],
        };
        rows.push(row);
    }
    csv_text(rows)
}

fn result_text(r: &TestResult) -> String {
    let decision = |reject: bool| if reject { "reject" } else { "do not reject" };
    match r {
        TestResult::Phr(p) => {
            let pre = if p.preprocessing.is_empty() {
                "none".to_string()
            } else {
                p.preprocessing.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
            };
            format!(
                "PHR   D = {:.6}  p = {:.4}  L = {}  P = {}  pairs = {}  preprocessing: {pre}\n      {} strict stationarity at alpha = {}\n",
                p.d_statistic,
                p.p_value,
                p.frame_length,
                p.frame_count,
                p.n_pairs,
                decision(p.reject),
                p.alpha
            )
        }
        TestResult::Kpss(k) => format!(
            "KPSS  stat = {:.6}  p in [{}, {}]  lag = {}\n      {} level stationarity at alpha = {}\n",
            k.statistic,
            k.p_bracket[0],
            k.p_bracket[1],
            k.bandwidth,
            decision(k.reject),
            k.alpha
        ),
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        let mut s = out.as_os_str().to_owned();
        s.push(".sidecar.json");
        PathBuf::from(s)
    } else {
        out.with_extension("json")
    }
}

fn cmd_simulate(a: SimulateArgs) -> CliResult<String> {
    if a.workers == Some(0) {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    let text = fs::read_to_string(&a.scenario).map_err(|source| phr::Error::Io {
        path: a.scenario.clone(),
        source,
    })?;
    let (grouping, mut scenarios) = parse_scenarios(&text)?;
    for s in &mut scenarios {
        if let Some(r) = a.reps {
            s.replications = r;
        }
        if let Some(seed) = a.seed {
            s.base_seed = seed;
        }
        s.validate()?;
    }
    let workers = a
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let table = table_sweep(&scenarios, &grouping.unwrap_or_default(), workers)?;
    let body = match a.format {
        Format::Csv => table.to_csv()?,
        Format::Text => table.to_text(),
        Format::Json => table.to_json()? + "\n",
    };
    match a.out {
        Some(path) => {
            fs::write(&path, &body).map_err(|e| Failure::Io(path.clone(), e))?;
            if a.format != Format::Json {
                let side = sidecar_path(&path);
                fs::write(&side, table.to_json()? + "\n").map_err(|e| Failure::Io(side, e))?;
            }
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn cmd_describe(a: DescribeArgs) -> CliResult<String> {
    let stats = a.input.load()?.describe()?;
    match a.format {
        Format::Json => Ok(serde_json::to_string_pretty(&stats).map_err(phr::Error::from)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(stats)
                .map_err(|e| Failure::Io(PathBuf::from("<csv>"), e.into()))?;
            let bytes = w
                .into_inner()
                .map_err(|e| Failure::Io(PathBuf::from("<csv>"), io::Error::other(e.to_string())))?;
            Ok(String::from_utf8_lossy(&bytes).into_owned())
        }
        Format::Text => Ok(format!(
            "n         {}\nmean      {:.6e}\nstd       {:.6e}\nmin       {:.6e}\nmax       {:.6e}\nskewness  {:.4}\nkurtosis  {:.4} (excess)\n",
            stats.n, stats.mean, stats.std_dev, stats.min, stats.max, stats.skewness, stats.excess_kurtosis
        )),
    }
}
