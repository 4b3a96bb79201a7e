//! Command-line front end: `simulate`, `detect`, `backtest` and `report`.
//!
//! Every flag can also be given in a flat JSON config file (`--config`),
//! whose keys are the flag names with dashes replaced by underscores. Flags
//! on the command line win over the file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::ReturnsPanel;
use crate::pipeline::{detect, stress_backtest, DetectionSettings};
use crate::risk::{BacktestConfig, BacktestResult, CovarianceSource, TrafficLightConfig};
use crate::simlab::{generate, ModelId, ScenarioSpec};

#[derive(Debug, Parser)]
#[command(name = "mvgarch-cpd", version, about = "Volatility change-point detection and stressed VaR backtesting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a benchmark scenario; writes returns.csv and truth.json.
    Simulate(Flags),
    /// Detect change-points in a returns CSV; writes a JSON result.
    Detect(Flags),
    /// Backtest stressed VaR on the detected periods.
    Backtest(Flags),
    /// Print a plain-text summary of a detect or backtest JSON file.
    Report(Flags),
}

/// Flags shared by all commands; each command reads the ones it needs.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat JSON file with default values for any of the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input CSV (returns or prices) or, for `report`, a result JSON.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file (`detect`, `report`) or directory (`simulate`, `backtest`).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Treat input columns as prices and convert to log-returns.
    #[arg(long)]
    pub log_diff: bool,
    /// Bootstrap test level.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of bootstrap replicates.
    #[arg(long)]
    pub boot_reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// ARCH order.
    #[arg(long)]
    pub p: Option<usize>,
    /// GARCH order.
    #[arg(long)]
    pub q: Option<usize>,
    /// Weight of the contemporaneous r^2 in the bounded variance filter.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Shortest segment examined by the binary segmentation.
    #[arg(long)]
    pub min_seg: Option<usize>,
    /// Divide every transformed row by its MAD within each segment (on by
    /// default; `--standardize false` scans the raw rows).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub standardize: Option<bool>,
    /// Rolling window length in days.
    #[arg(long)]
    pub window: Option<usize>,
    /// Comma-separated VaR levels.
    #[arg(long, value_delimiter = ',')]
    pub var_levels: Option<Vec<f64>>,
    /// Worker threads (defaults to all cores); results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Scenario id such as M1.6.
    #[arg(long)]
    pub model: Option<String>,
    /// Number of series.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of observations.
    #[arg(long)]
    pub t: Option<usize>,
    /// Fraction of series affected by each break.
    #[arg(long)]
    pub sparsity: Option<f64>,
    /// Detect JSON whose segments define the stress periods (`backtest`).
    #[arg(long)]
    pub detection: Option<PathBuf>,
    /// Evaluation-sample CSV: the initial window followed by the forecast days.
    #[arg(long)]
    pub eval: Option<PathBuf>,
    /// Allow the evaluation sample to overlap the detection sample.
    #[arg(long)]
    pub allow_overlap: bool,
}

/// Resolved settings of a run, as stored in config files and echoed in
/// result files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub log_diff: bool,
    pub alpha: f64,
    pub boot_reps: usize,
    pub seed: u64,
    pub p: usize,
    pub q: usize,
    pub epsilon: f64,
    pub min_seg: usize,
    pub standardize: bool,
    pub window: usize,
    pub var_levels: Vec<f64>,
    /// Not written to result files, which must not depend on it.
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
    pub model: Option<String>,
    pub n: usize,
    pub t: usize,
    pub sparsity: f64,
    pub detection: Option<PathBuf>,
    pub eval: Option<PathBuf>,
    pub allow_overlap: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let d = DetectionSettings::default();
        let b = BacktestConfig::default();
        Self {
            input: None,
            output: None,
            log_diff: false,
            alpha: d.alpha,
            boot_reps: d.boot_reps,
            seed: d.seed,
            p: d.p,
            q: d.q,
            epsilon: d.epsilon,
            min_seg: d.min_seg,
            standardize: d.standardize,
            window: b.window,
            var_levels: b.levels,
            threads: None,
            model: None,
            n: 20,
            t: 1000,
            sparsity: 1.0,
            detection: None,
            eval: None,
            allow_overlap: false,
        }
    }
}

impl RunConfig {
    /// Config file values (if any) overridden by command-line flags.
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let mut cfg = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &flags.$field { cfg.$field = v.clone().into(); })*
            };
        }
        take!(alpha, boot_reps, seed, p, q, epsilon, min_seg, window, var_levels, n, t, sparsity);
        if flags.input.is_some() {
            cfg.input = flags.input.clone();
        }
        if flags.output.is_some() {
            cfg.output = flags.output.clone();
        }
        if flags.threads.is_some() {
            cfg.threads = flags.threads;
        }
        if flags.model.is_some() {
            cfg.model = flags.model.clone();
        }
        if flags.detection.is_some() {
            cfg.detection = flags.detection.clone();
        }
        if flags.eval.is_some() {
            cfg.eval = flags.eval.clone();
        }
        cfg.log_diff |= flags.log_diff;
        if let Some(standardize) = flags.standardize {
            cfg.standardize = standardize;
        }
        cfg.allow_overlap |= flags.allow_overlap;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(0.0..1.0).contains(&self.alpha) {
            return bad(format!("alpha must lie in [0, 1), got {}", self.alpha));
        }
        if self.p == 0 && self.q == 0 {
            return bad("p and q cannot both be zero".into());
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.min_seg < 2 {
            return bad(format!("min-seg must be at least 2, got {}", self.min_seg));
        }
        if self.var_levels.is_empty() || self.var_levels.iter().any(|l| !(*l > 0.0 && *l < 1.0)) {
            return bad(format!("VaR levels must lie in (0, 1), got {:?}", self.var_levels));
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        Ok(())
    }

    pub fn detection_settings(&self) -> DetectionSettings {
        DetectionSettings {
            p: self.p,
            q: self.q,
            epsilon: self.epsilon,
            alpha: self.alpha,
            boot_reps: self.boot_reps,
            seed: self.seed,
            min_seg: self.min_seg,
            standardize: self.standardize,
        }
    }

    fn require<'a>(&self, value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
        value
            .as_deref()
            .ok_or_else(|| Error::Config(format!("--{flag} is required")))
    }
}

/// Reads a CSV with a header row and an optional leading ISO-8601 date
/// column. With `log_diff` the columns are prices and the result holds
/// `log P_t - log P_{t-1}`, one row shorter.
pub fn ingest_csv(path: &Path, log_diff: bool) -> Result<ReturnsPanel> {
    let text = fs::read_to_string(path)?;
    parse_csv(&text, log_diff)
}

/// [`ingest_csv`] on an in-memory string.
pub fn parse_csv(text: &str, log_diff: bool) -> Result<ReturnsPanel> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?
        .clone();
    let width = header.len();
    let mut has_dates = None;
    let mut dates = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != width {
            return Err(Error::Parse {
                line,
                msg: format!("expected {width} columns, found {}", record.len()),
            });
        }
        let dated = *has_dates.get_or_insert_with(|| parse_date(&record[0]).is_some());
        let mut values = Vec::with_capacity(width);
        for (col, cell) in record.iter().enumerate() {
            if dated && col == 0 {
                let date = parse_date(cell).ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("column 1: `{cell}` is not a YYYY-MM-DD date"),
                })?;
                dates.push(date);
                continue;
            }
            if cell.is_empty() {
                return Err(Error::Parse {
                    line,
                    msg: format!("column {} ({}): missing value", col + 1, &header[col]),
                });
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("column {} ({}): `{cell}` is not a number", col + 1, &header[col]),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("column {} ({}): non-finite value", col + 1, &header[col]),
                });
            }
            if log_diff && v <= 0.0 {
                return Err(Error::Parse {
                    line,
                    msg: format!("column {} ({}): price must be positive", col + 1, &header[col]),
                });
            }
            values.push(v);
        }
        if values.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "no numeric columns".into(),
            });
        }
        rows.push(values);
    }
    if rows.len() < 2 {
        return Err(Error::Parse {
            line: rows.len() + 1,
            msg: format!("need at least 2 data rows, found {}", rows.len()),
        });
    }
    if log_diff {
        rows = rows
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b.ln() - a.ln()).collect())
            .collect();
        if !dates.is_empty() {
            dates.remove(0);
        }
    }
    let panel = ReturnsPanel::from_rows(&rows)?;
    if dates.is_empty() {
        Ok(panel)
    } else {
        panel.with_dates(dates)
    }
}

fn parse_date(cell: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(cell, "%Y-%m-%d").ok()
}

/// Writes a panel as CSV with columns `r1..rN` (and `date` when present).
pub fn write_panel_csv<W: Write>(panel: &ReturnsPanel, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header: Vec<String> = Vec::new();
    if panel.dates().is_some() {
        header.push("date".into());
    }
    header.extend((1..=panel.n_series()).map(|i| format!("r{i}")));
    wtr.write_record(&header).map_err(csv_err)?;
    for t in 0..panel.len() {
        let mut row: Vec<String> = Vec::new();
        if let Some(d) = panel.dates() {
            row.push(d[t].to_string());
        }
        row.extend(panel.row(t).iter().map(|v| v.to_string()));
        wtr.write_record(&row).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// One detected change-point as written to the result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangePointOut {
    /// Observations before the break; also the 0-based index of the first
    /// observation of the new regime.
    pub index: usize,
    /// Date of the last observation before the break.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub date: Option<NaiveDate>,
    pub stat: f64,
    pub threshold: f64,
    pub n_hat: usize,
    pub level: usize,
}

/// A stationary segment `from..to` (0-based, end exclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentOut {
    pub from: usize,
    pub to: usize,
}

/// Contents of a `detect` result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectOutput {
    pub change_points: Vec<ChangePointOut>,
    pub segments: Vec<SegmentOut>,
    pub n_series: usize,
    pub n_obs: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_date: Option<NaiveDate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub last_date: Option<NaiveDate>,
    pub config: RunConfig,
    /// Seconds.
    pub wall_time: f64,
}

/// Contents of a `backtest` result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestOutput {
    pub window: usize,
    pub forecast_days: usize,
    pub segments: Vec<SegmentOut>,
    pub results: Vec<BacktestResult>,
    pub config: RunConfig,
    pub wall_time: f64,
}

/// Runs `f` on a pool with the requested number of threads.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(f),
        None => f(),
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// `simulate`: writes `returns.csv` and `truth.json` into the output
/// directory.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<()> {
    let model = ModelId::parse(
        cfg.model
            .as_deref()
            .ok_or_else(|| Error::Config("--model is required".into()))?,
    )?;
    let out = cfg.require(&cfg.output, "output")?;
    let spec = ScenarioSpec::new(model, cfg.n, cfg.t, cfg.seed).with_sparsity(cfg.sparsity);
    let labeled = with_threads(cfg.threads, || generate(&spec))?;
    fs::create_dir_all(out)?;
    let file = fs::File::create(out.join("returns.csv"))?;
    write_panel_csv(&labeled.returns, std::io::BufWriter::new(file))?;
    let truth = serde_json::json!({
        "model": model.name(),
        "n": cfg.n,
        "t": cfg.t,
        "sparsity": cfg.sparsity,
        "seed": cfg.seed,
        "truth": labeled.truth,
        "s1": labeled.s1,
        "s2": labeled.s2,
        "detector_orders": model.detector_orders(),
    });
    fs::write(out.join("truth.json"), serde_json::to_string_pretty(&truth)? + "\n")?;
    Ok(())
}

/// Detection on an already loaded panel.
pub fn detect_output(returns: &ReturnsPanel, cfg: &RunConfig) -> Result<DetectOutput> {
    let started = Instant::now();
    let detection = with_threads(cfg.threads, || detect(returns, &cfg.detection_settings()))?;
    let dates = returns.dates();
    let change_points = detection
        .change_points
        .points
        .iter()
        .map(|cp| ChangePointOut {
            index: cp.location,
            date: dates.map(|d| d[cp.location - 1]),
            stat: cp.stat,
            threshold: cp.threshold,
            n_hat: cp.n_hat,
            level: cp.level,
        })
        .collect();
    let segments = detection
        .segments()
        .into_iter()
        .map(|(from, to)| SegmentOut { from, to })
        .collect();
    Ok(DetectOutput {
        change_points,
        segments,
        n_series: returns.n_series(),
        n_obs: returns.len(),
        first_date: dates.map(|d| d[0]),
        last_date: dates.map(|d| d[d.len() - 1]),
        config: cfg.clone(),
        wall_time: started.elapsed().as_secs_f64(),
    })
}

/// `detect`: JSON result to `--output` or stdout.
pub fn cmd_detect(cfg: &RunConfig) -> Result<DetectOutput> {
    let input = cfg.require(&cfg.input, "input")?;
    let returns = ingest_csv(input, cfg.log_diff)?;
    let out = detect_output(&returns, cfg)?;
    write_text(cfg.output.as_deref(), &(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(out)
}

/// Checks that the evaluation sample starts after the detection sample.
fn check_disjoint(cfg: &RunConfig, detection: &ReturnsPanel, eval: &ReturnsPanel) -> Result<()> {
    if cfg.allow_overlap {
        return Ok(());
    }
    let overlap = match (detection.dates(), eval.dates()) {
        (Some(d), Some(e)) => e[0] <= d[d.len() - 1],
        _ => cfg.input.as_ref().zip(cfg.eval.as_ref()).is_some_and(|(a, b)| {
            fs::canonicalize(a).ok() == fs::canonicalize(b).ok()
        }),
    };
    if overlap {
        return Err(Error::Config(
            "evaluation sample overlaps the detection sample (pass --allow-overlap to permit)".into(),
        ));
    }
    Ok(())
}

/// `backtest`: writes `backtest.json` and `svar_daily.csv` into the output
/// directory. Segments come from `--detection`, or from a fresh detection
/// run on `--input`.
pub fn cmd_backtest(cfg: &RunConfig) -> Result<BacktestOutput> {
    let started = Instant::now();
    let input = cfg.require(&cfg.input, "input")?;
    let eval_path = cfg.require(&cfg.eval, "eval")?;
    let out_dir = cfg.require(&cfg.output, "output")?;
    let sample = ingest_csv(input, cfg.log_diff)?;
    let eval = ingest_csv(eval_path, cfg.log_diff)?;
    check_disjoint(cfg, &sample, &eval)?;
    if eval.n_series() != sample.n_series() {
        return Err(Error::Config(format!(
            "detection sample has {} series, evaluation sample {}",
            sample.n_series(),
            eval.n_series()
        )));
    }
    let segments: Vec<SegmentOut> = match &cfg.detection {
        Some(path) => {
            let det: DetectOutput = serde_json::from_str(&fs::read_to_string(path)?)?;
            if det.n_obs != sample.len() || det.n_series != sample.n_series() {
                return Err(Error::Config(format!(
                    "{} was produced on a {} x {} panel, --input is {} x {}",
                    path.display(),
                    det.n_obs,
                    det.n_series,
                    sample.len(),
                    sample.n_series()
                )));
            }
            det.segments
        }
        None => detect_output(&sample, cfg)?.segments,
    };
    let bt_config = BacktestConfig {
        window: cfg.window,
        levels: cfg.var_levels.clone(),
        traffic_light: TrafficLightConfig::default(),
    };
    let pairs: Vec<(usize, usize)> = segments.iter().map(|s| (s.from, s.to)).collect();
    let report = with_threads(cfg.threads, || {
        stress_backtest(&sample, &pairs, &eval, CovarianceSource::default(), &bt_config)
    })?;
    fs::create_dir_all(out_dir)?;
    let file = fs::File::create(out_dir.join("svar_daily.csv"))?;
    report.write_csv(std::io::BufWriter::new(file))?;
    let out = BacktestOutput {
        window: report.window,
        forecast_days: report.realized.len(),
        segments,
        results: report.results.clone(),
        config: cfg.clone(),
        wall_time: started.elapsed().as_secs_f64(),
    };
    fs::write(out_dir.join("backtest.json"), serde_json::to_string_pretty(&out)? + "\n")?;
    Ok(out)
}

/// `report`: plain-text summary of a result file.
pub fn cmd_report(cfg: &RunConfig) -> Result<String> {
    let input = cfg.require(&cfg.input, "input")?;
    let text = fs::read_to_string(input)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let summary = if value.get("change_points").is_some() {
        summarize_detection(&serde_json::from_value(value)?)
    } else if value.get("results").is_some() {
        summarize_backtest(&serde_json::from_value(value)?)
    } else {
        return Err(Error::Config(format!(
            "{} is neither a detect nor a backtest result",
            input.display()
        )));
    };
    write_text(cfg.output.as_deref(), &summary)?;
    Ok(summary)
}

fn summarize_detection(d: &DetectOutput) -> String {
    let mut s = format!(
        "{} series, {} observations, {} change-point(s)\n",
        d.n_series,
        d.n_obs,
        d.change_points.len()
    );
    for cp in &d.change_points {
        let date = cp.date.map(|d| format!(" ({d})")).unwrap_or_default();
        s += &format!(
            "  index {}{date}: stat {:.4} > threshold {:.4}, n_hat {}, level {}\n",
            cp.index, cp.stat, cp.threshold, cp.n_hat, cp.level
        );
    }
    s += "segments:\n";
    for seg in &d.segments {
        s += &format!("  [{}, {})\n", seg.from, seg.to);
    }
    s
}

fn summarize_backtest(b: &BacktestOutput) -> String {
    let mut s = format!(
        "window {} days, {} forecast days\nperiod  segment        level   sVaR        viol  t_first  p_pof   p_tff   zone\n",
        b.window, b.forecast_days
    );
    for r in &b.results {
        s += &format!(
            "{:<7} [{}, {}){:pad$} {:<7} {:<11.5} {:<5} {:<8} {:<7.4} {:<7} {}\n",
            r.period,
            r.from,
            r.to,
            "",
            r.level,
            r.svar,
            r.violations,
            r.t_first.map_or("-".into(), |t| t.to_string()),
            r.p_pof,
            r.p_tff.map_or("-".into(), |p| format!("{p:.4}")),
            r.zone.map_or("-".into(), |z| format!("{z:?}").to_lowercase()),
            pad = 12usize.saturating_sub(format!("[{}, {})", r.from, r.to).len()),
        );
    }
    s
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Simulate(f) => RunConfig::resolve(f).and_then(|c| cmd_simulate(&c)),
        Command::Detect(f) => RunConfig::resolve(f).and_then(|c| cmd_detect(&c).map(drop)),
        Command::Backtest(f) => RunConfig::resolve(f).and_then(|c| cmd_backtest(&c).map(drop)),
        Command::Report(f) => RunConfig::resolve(f).and_then(|c| {
            let summary = cmd_report(&c)?;
            if c.output.is_some() {
                print!("{summary}");
            }
            Ok(())
        }),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn log_diff_of_two_prices() {
        let p = parse_csv("a\n100\n110\n", true).unwrap();
        assert_eq!(p.len(), 1);
        assert_abs_diff_eq!(p.series(0)[0], 1.1f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.series(0)[0], 0.09531, epsilon = 1e-5);
    }

    #[test]
    fn dates_are_parsed_and_aligned() {
        let text = "date,a,b\n2020-01-01,1,2\n2020-01-02,3,4\n2020-01-03,5,6\n";
        let p = parse_csv(text, false).unwrap();
        assert_eq!(p.n_series(), 2);
        assert_eq!(p.dates().unwrap()[2], NaiveDate::from_ymd_opt(2020, 1, 3).unwrap());
        let d = parse_csv(text, true).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.dates().unwrap()[0], NaiveDate::from_ymd_opt(2020, 1, 2).unwrap());
    }

    #[test]
    fn parse_errors_name_line_and_column() {
        let err = parse_csv("a,b\n1,2\n3,\n", false).unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("column 2"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_csv("a,b\n1,2\n3\n", false), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_csv("a,b\n1,x\n3,4\n", false), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_csv("a\n1\n", false), Err(Error::Parse { .. })));
        assert_eq!(parse_csv("a\n1\n", false).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn config_round_trip_and_override() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        assert_eq!(cfg.var_levels, vec![0.95, 0.99]);
        assert_eq!((cfg.alpha, cfg.boot_reps, cfg.p, cfg.q, cfg.min_seg, cfg.window), (0.05, 200, 1, 1, 30, 250));
        assert_abs_diff_eq!(cfg.epsilon, 0.001);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"alpha": 0.1, "boot_reps": 50, "seed": 3}"#).unwrap();
        let flags = Flags {
            config: Some(path.clone()),
            boot_reps: Some(80),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!((cfg.alpha, cfg.boot_reps, cfg.seed), (0.1, 80, 3));

        fs::write(&path, r#"{"alpah": 0.1}"#).unwrap();
        let err = RunConfig::resolve(&Flags {
            config: Some(path),
            ..Default::default()
        })
        .unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn invalid_flag_values_are_config_errors() {
        let flags = Flags {
            alpha: Some(1.5),
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve(&flags).unwrap_err().exit_code(), 4);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["mvgarch-cpd", "frobnicate"]), 2);
        assert_eq!(run(["mvgarch-cpd", "detect", "--alpha", "zero"]), 2);
        assert_eq!(run(["mvgarch-cpd", "detect"]), 4);
        assert_eq!(run(["mvgarch-cpd", "simulate", "--model", "M9.9", "--output", "/nonexistent"]), 4);
    }
}
