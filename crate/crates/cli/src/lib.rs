//! The `mco` command line: experiment runs, statistical comparison and
//! plot-data export over persisted result directories.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mco_harness::{
    load, load_matrix, mean_traces, run_batch, save, CellSummary, ExperimentConfig, ResultSet,
};
use mco_problems::list_problems;
use mco_stats::report::{friedman_csv, friedman_text, kruskal_csv, kruskal_text, wtl_csv, wtl_text};
use mco_stats::{friedman, kruskal_wallis_matrix, versus, wtl_table, Summarizer, DEFAULT_ALPHA};

/// Exit code for a run or I/O failure.
pub const EXIT_RUNTIME: i32 = 1;
/// Exit code for invalid flags, configs or inputs.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mco", version, about = "Educational competition optimizer experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every algorithm on every problem and persist the results.
    Run(RunArgs),
    /// Run an experiment, then rank the algorithms and count +/=/- against a baseline.
    Compare(CompareArgs),
    /// Nonparametric test report over a results directory or results.csv.
    Stats(StatsArgs),
    /// Mean best-so-far curves of one problem on a shared evaluation grid.
    ExportTrace(ExportArgs),
    /// Print the problem registry.
    ListProblems,
}

/// Experiment flags; each one overrides the matching config key.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// TOML experiment config.
    #[arg(long, env = "MCO_CONFIG")]
    pub config: Option<PathBuf>,
    /// Base seed of the run streams.
    #[arg(long, env = "MCO_SEED")]
    pub seed: Option<u64>,
    /// Comma-separated variants (ECO, GECO, SECO, DECO, IECO-MCO).
    #[arg(long, env = "MCO_ALGORITHMS", value_delimiter = ',')]
    pub algorithms: Option<Vec<String>>,
    /// Comma-separated problem names; `desk` and `engineering` expand to groups.
    #[arg(long, env = "MCO_PROBLEMS", value_delimiter = ',')]
    pub problems: Option<Vec<String>>,
    #[arg(long, env = "MCO_RUNS")]
    pub runs: Option<usize>,
    /// Dimension of scalable problems.
    #[arg(long, env = "MCO_DIM")]
    pub dim: Option<usize>,
    /// Budget multiplier, fes_max = fes_mult * D [default: 3000].
    #[arg(long, env = "MCO_FES_MULT")]
    pub fes_mult: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "MCO_JOBS")]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, env = "MCO_OUT", default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Algorithm the others are tested against.
    #[arg(long, default_value = "ECO")]
    pub baseline: String,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Friedman,
    Wilcoxon,
    Kw,
}

impl TestKind {
    fn name(self) -> &'static str {
        match self {
            TestKind::Friedman => "friedman",
            TestKind::Wilcoxon => "wilcoxon",
            TestKind::Kw => "kw",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    /// Results directory or a results.csv file.
    pub results: PathBuf,
    #[arg(long, value_enum)]
    pub test: TestKind,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Report directory [default: <results dir>/stats].
    #[arg(long, env = "MCO_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    /// Results directory.
    pub results: PathBuf,
    #[arg(long)]
    pub problem: String,
    /// Comma-separated algorithms; all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Vec<String>,
    /// Export directory [default: <results dir>/export].
    #[arg(long, env = "MCO_OUT")]
    pub out: Option<PathBuf>,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

impl From<mco_harness::Error> for CliError {
    fn from(e: mco_harness::Error) -> Self {
        if e.is_usage() {
            Self::usage(e.to_string())
        } else {
            Self::runtime(e.to_string())
        }
    }
}

impl From<mco_stats::Error> for CliError {
    fn from(e: mco_stats::Error) -> Self {
        Self::usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Runs one command and returns what it prints on stdout.
pub fn execute(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Stats(args) => cmd_stats(args),
        Command::ExportTrace(args) => cmd_export_trace(args),
        Command::ListProblems => Ok(cmd_list_problems()),
    }
}

/// Loads the config (or the all-variants desk default) and applies flag overrides.
pub fn resolve_config(args: &RunArgs) -> CliResult<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(
            mco_core::Variant::ALL.iter().map(|v| v.name().to_string()).collect(),
            vec!["desk".into()],
        ),
    };
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = &args.algorithms {
        cfg.algorithms = v.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    if let Some(v) = &args.problems {
        cfg.problems = v.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    if let Some(v) = args.runs {
        cfg.runs = v;
    }
    if let Some(v) = args.dim {
        cfg.dim = v;
    }
    if let Some(v) = args.fes_mult {
        cfg.fes_mult = v;
        cfg.fes_max = None;
    }
    if let Some(v) = args.jobs {
        cfg.jobs = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::runtime(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}

fn execute_config(cfg: &ExperimentConfig, out: &Path) -> CliResult<ResultSet> {
    let set = run_batch(&cfg.to_batch()?)?;
    save(&set, out)?;
    write_file(&out.join("config.toml"), &cfg.to_toml())?;
    Ok(set)
}

/// Best/Mean/Std per cell, plus the gap to the known target where there is one.
pub fn summary_table(rows: &[CellSummary]) -> String {
    let aw = rows.iter().map(|r| r.algorithm.len()).max().unwrap_or(9).max(9);
    let pw = rows.iter().map(|r| r.problem.len()).max().unwrap_or(7).max(7);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<aw$}  {:<pw$}  {:>12}  {:>12}  {:>12}  {:>12}  {:>8}",
        "algorithm", "problem", "best", "mean", "std", "gap(best)", "feasible"
    );
    for r in rows {
        let gap = r.gap_best.map_or_else(|| "-".to_string(), |g| format!("{g:.4e}"));
        let _ = writeln!(
            out,
            "{:<aw$}  {:<pw$}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>12}  {:>8}",
            r.algorithm,
            r.problem,
            r.best,
            r.mean,
            r.std,
            gap,
            format!("{}/{}", r.feasible_runs, r.runs)
        );
    }
    out
}

pub fn cmd_run(args: &RunArgs) -> CliResult<String> {
    let cfg = resolve_config(args)?;
    let set = execute_config(&cfg, &args.out)?;
    let mut out = summary_table(&set.summaries());
    let _ = writeln!(out, "{} runs written to {}", set.len(), args.out.display());
    Ok(out)
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<String> {
    let cfg = resolve_config(&args.run)?;
    if !cfg.variants()?.iter().any(|v| v.name().eq_ignore_ascii_case(&args.baseline)) {
        return Err(CliError::usage(format!(
            "baseline {:?} is not among the algorithms {:?}",
            args.baseline, cfg.algorithms
        )));
    }
    if cfg.runs < 2 {
        return Err(CliError::usage("compare needs at least 2 runs per cell"));
    }
    let set = execute_config(&cfg, &args.run.out)?;
    let matrix = set.to_matrix()?;
    let baseline = &set.algorithms[set.algorithm_index(&args.baseline).expect("checked above")];
    let ranks = friedman(&matrix, Summarizer::Mean)?;
    let pairs = versus(&matrix, baseline, args.alpha)?;
    let dir = args.run.out.join("stats");
    write_file(&dir.join("friedman.csv"), &friedman_csv(&ranks))?;
    write_file(&dir.join("versus.csv"), &wtl_csv(&pairs))?;
    let mut out = friedman_text("Friedman ranking (mean over runs)", &ranks);
    out.push('\n');
    out += &wtl_text(&format!("Wilcoxon rank-sum vs. {baseline} (alpha = {})", args.alpha), &pairs);
    write_file(&dir.join("compare.txt"), &out)?;
    let _ = writeln!(out, "\n{} runs written to {}", set.len(), args.run.out.display());
    Ok(out)
}

/// Writes `<test>.txt` and `<test>.csv`; the same input always gives the same bytes.
pub fn cmd_stats(args: &StatsArgs) -> CliResult<String> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::usage(format!("alpha must lie in (0, 1), got {}", args.alpha)));
    }
    if !args.results.exists() {
        return Err(CliError::usage(format!("{} does not exist", args.results.display())));
    }
    let matrix = load_matrix(&args.results)?;
    let (text, csv) = match args.test {
        TestKind::Friedman => {
            let r = friedman(&matrix, Summarizer::Mean)?;
            (friedman_text("Friedman ranking (mean over runs)", &r), friedman_csv(&r))
        }
        TestKind::Wilcoxon => {
            let t = wtl_table(&matrix, args.alpha)?;
            let title = format!("Wilcoxon rank-sum +/=/- (alpha = {})", args.alpha);
            (wtl_text(&title, &t.pairs), wtl_csv(&t.pairs))
        }
        TestKind::Kw => {
            let s = kruskal_wallis_matrix(&matrix)?;
            (kruskal_text("Kruskal-Wallis mean ranks", &s), kruskal_csv(&matrix.problems, &s))
        }
    };
    let dir = match &args.out {
        Some(d) => d.clone(),
        None => {
            let base = if args.results.is_dir() {
                args.results.clone()
            } else {
                args.results.parent().map(Path::to_path_buf).unwrap_or_default()
            };
            base.join("stats")
        }
    };
    write_file(&dir.join(format!("{}.txt", args.test.name())), &text)?;
    write_file(&dir.join(format!("{}.csv", args.test.name())), &csv)?;
    Ok(text)
}

pub fn cmd_export_trace(args: &ExportArgs) -> CliResult<String> {
    let set = load(&args.results)?;
    let export = mean_traces(&set, &args.problem, &args.algorithms)?;
    let dir = args.out.clone().unwrap_or_else(|| args.results.join("export"));
    let path = dir.join(format!("trace_{}.txt", export.problem));
    write_file(&path, &export.to_text())?;
    Ok(format!(
        "{} points x {} series written to {}\n",
        export.fes.len(),
        export.series.len(),
        path.display()
    ))
}

pub fn cmd_list_problems() -> String {
    let problems = list_problems();
    let w = problems.iter().map(|p| p.name.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    let _ = writeln!(out, "{:<w$}  {:<11}  {:>3}  description", "name", "category", "D");
    for p in problems {
        let dim = p.dim.map_or_else(|| "any".to_string(), |d| d.to_string());
        let _ = writeln!(out, "{:<w$}  {:<11}  {dim:>3}  {}", p.name, p.category.name(), p.description);
    }
    out
}
