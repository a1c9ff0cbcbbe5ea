//! The `slopscope` command line: `scan`, `history`, `panel` and `rules`.
//!
//! Exit codes: 0 success, 1 usage error or unknown rule id, 2 unreadable
//! input (root, repository, or every panel entry), 3 invalid rule file.
//! Reports go to stdout or `--out`; diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::Analyzer;
use crate::erosion::ErosionParams;
use crate::error::Error;
use crate::report::{history_csv, scan_csv, to_canonical_json, to_json_lines, Payload, ReportEnvelope, ScanReport};
use crate::source::{analyze_sources, ScanConfig, SourceFile};
use crate::trajectory::history::TEST_GLOBS;
use crate::trajectory::{
    default_cutoff, load_panel_config, run_checkpoints, run_history, run_panel, HistoryOptions, ReferenceMeans,
};
use crate::verbosity::{match_rules, QualityRule, RuleSet};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_RULES: u8 = 3;

/// Environment variable naming the default rule file.
pub const RULES_ENV: &str = "SLOPSCOPE_RULES";

#[derive(Debug, Parser)]
#[command(name = "slopscope", version, about = "Structural erosion and verbosity metrics for Python code")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure one source tree.
    Scan(ScanArgs),
    /// Measure sampled commits of a git repository, or explicit checkpoint directories.
    History(HistoryArgs),
    /// Measure and aggregate a panel of repositories.
    Panel(PanelArgs),
    /// List rules or run one rule on one file.
    Rules {
        #[command(subcommand)]
        action: RulesAction,
        #[arg(long, env = RULES_ENV, global = true)]
        rules: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RulesAction {
    /// Print id, category and languages of every rule.
    List,
    /// Print the matches of one rule on one file as JSON Lines.
    Test { rule_id: String, file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Rule file (YAML); defaults to the starter rules.
    #[arg(long, env = RULES_ENV)]
    pub rules: Option<PathBuf>,
    /// Scan config file (YAML or JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Languages to scan; overrides the config file.
    #[arg(long = "language", value_name = "LANG")]
    pub languages: Vec<String>,
    /// Exclude globs; added to the config file's.
    #[arg(long = "exclude", value_name = "GLOB")]
    pub exclude: Vec<String>,
    /// Omit timestamps and absolute paths.
    #[arg(long)]
    pub deterministic: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub root: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Include every rule match and clone region in the JSON report.
    #[arg(long)]
    pub emit_matches: bool,
    /// Include the erosion sensitivity table.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Args)]
pub struct HistoryArgs {
    /// Git repository.
    #[arg(required_unless_present = "checkpoint_dir")]
    pub repo: Option<PathBuf>,
    /// Measure these directories, in order, instead of a repository.
    #[arg(long = "checkpoint-dir", value_name = "DIR", conflicts_with = "repo")]
    pub checkpoint_dir: Vec<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = crate::trajectory::git::DEFAULT_MAX_COMMITS)]
    pub max_commits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = default_cutoff())]
    pub cutoff_date: NaiveDate,
    /// Ignore test files when choosing and measuring commits.
    #[arg(long)]
    pub exclude_tests: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PanelArgs {
    /// Panel config: a list of {repo_path, repo_id, stars, max_commits, seed}.
    pub panel_config: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub reference_mean_verbosity: Option<f64>,
    #[arg(long)]
    pub reference_mean_erosion: Option<f64>,
    #[arg(long, default_value_t = crate::trajectory::git::DEFAULT_MAX_COMMITS)]
    pub max_commits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = default_cutoff())]
    pub cutoff_date: NaiveDate,
    #[arg(long)]
    pub exclude_tests: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::RootUnreadable { .. } | Error::NotARepository { .. } | Error::Git(_) => EXIT_INPUT,
            Error::InvalidRules(_) => EXIT_RULES,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> CliError {
    CliError {
        code,
        message: message.into(),
    }
}

/// Everything that shapes a report's numbers; digested into the envelope.
#[derive(Debug, Serialize)]
struct EffectiveConfig<'a> {
    command: &'static str,
    scan: &'a ScanConfig,
    rules: Vec<&'a QualityRule>,
    erosion: ErosionParams,
    min_window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    options: Option<serde_json::Value>,
}

fn load_rules(path: Option<&Path>) -> Result<RuleSet, CliError> {
    match path {
        None => Ok(RuleSet::starter()),
        Some(p) => RuleSet::load(p).map_err(|e| match e {
            Error::Io { .. } => fail(EXIT_RULES, e.to_string()),
            other => other.into(),
        }),
    }
}

fn scan_config(common: &CommonArgs, exclude_tests: bool) -> Result<ScanConfig, CliError> {
    let mut config = match &common.config {
        Some(p) => ScanConfig::from_path(p)?,
        None => ScanConfig::default(),
    };
    if !common.languages.is_empty() {
        config.languages = common.languages.clone();
    }
    config.exclude.extend(common.exclude.iter().cloned());
    if exclude_tests {
        config.exclude.extend(TEST_GLOBS.iter().map(|s| s.to_string()));
    }
    config.compile()?;
    Ok(config)
}

fn analyzer(config: &ScanConfig, rules: RuleSet) -> Result<Analyzer, CliError> {
    Ok(Analyzer::new(config, rules)?)
}

fn digest_input<'a>(
    command: &'static str,
    config: &'a ScanConfig,
    analyzer: &'a Analyzer,
    options: Option<serde_json::Value>,
) -> EffectiveConfig<'a> {
    EffectiveConfig {
        command,
        scan: config,
        rules: analyzer.rules.rules().collect(),
        erosion: analyzer.erosion,
        min_window: analyzer.min_window,
        options,
    }
}

fn display_path(path: &Path, deterministic: bool) -> String {
    if deterministic && path.is_absolute() {
        path.file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| ".".into())
    } else {
        path.display().to_string()
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| fail(EXIT_USAGE, format!("cannot write output: {e}"))),
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(fail(EXIT_USAGE, "--threads must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn cmd_scan(args: ScanArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let rules = load_rules(args.common.rules.as_deref())?;
    let config = scan_config(&args.common, false)?;
    let analyzer = analyzer(&config, rules)?;
    let analysis = with_threads(args.common.threads, || analyzer.analyze_dir(&args.root))??;
    let root = if args.common.deterministic {
        ".".to_string()
    } else {
        args.root.display().to_string()
    };
    let report = ScanReport::from_analysis(root, &analysis, analyzer.erosion, args.sweep, args.emit_matches);
    let text = match args.format {
        Format::Csv => scan_csv(&report),
        Format::Json => {
            let options = serde_json::json!({"sweep": args.sweep, "emit_matches": args.emit_matches});
            let cfg = digest_input("scan", &config, &analyzer, Some(options));
            to_canonical_json(&ReportEnvelope::new(&cfg, Payload::Scan(report), args.common.deterministic)?)?
        }
    };
    emit(out, args.common.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_history(args: HistoryArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    let rules = load_rules(args.common.rules.as_deref())?;
    let config = scan_config(&args.common, args.exclude_tests)?;
    let analyzer = analyzer(&config, rules)?;
    let options = HistoryOptions {
        max_commits: args.max_commits,
        seed: args.seed,
        cutoff_date: args.cutoff_date,
    };
    let deterministic = args.common.deterministic;
    let mut report = with_threads(args.common.threads, || match &args.repo {
        Some(repo) => run_history(repo, &analyzer, &options),
        None => run_checkpoints("checkpoints", &args.checkpoint_dir, &analyzer),
    })??;
    if let Some(repo) = &args.repo {
        report.source = display_path(repo, deterministic);
    }
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let text = match args.format {
        Format::Csv => history_csv(&report),
        Format::Json => {
            let opts = serde_json::to_value(&options)?;
            let cfg = digest_input("history", &config, &analyzer, Some(opts));
            to_canonical_json(&ReportEnvelope::new(&cfg, Payload::History(report), deterministic)?)?
        }
    };
    emit(out, args.common.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_panel(args: PanelArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    let rules = load_rules(args.common.rules.as_deref())?;
    let config = scan_config(&args.common, args.exclude_tests)?;
    let analyzer = analyzer(&config, rules)?;
    let repos = load_panel_config(&args.panel_config)?;
    if repos.is_empty() {
        return Err(fail(EXIT_USAGE, "panel config lists no repositories"));
    }
    let defaults = HistoryOptions {
        max_commits: args.max_commits,
        seed: args.seed,
        cutoff_date: args.cutoff_date,
    };
    let reference = ReferenceMeans {
        verbosity: args.reference_mean_verbosity,
        erosion: args.reference_mean_erosion,
    };
    let report = with_threads(args.common.threads, || run_panel(&repos, &analyzer, &defaults, reference))?;
    for f in &report.failed {
        let _ = writeln!(err, "warning: {} failed: {}", f.repo_id, f.reason);
    }
    let all_failed = report.failed_count == repos.len();
    let opts = serde_json::json!({"defaults": defaults, "reference": reference, "repos": repos.iter().map(|r| serde_json::json!({"repo_id": r.repo_id, "stars": r.stars, "max_commits": r.max_commits, "seed": r.seed})).collect::<Vec<_>>()});
    let cfg = digest_input("panel", &config, &analyzer, Some(opts));
    let text = to_canonical_json(&ReportEnvelope::new(&cfg, Payload::Panel(report), args.common.deterministic)?)?;
    emit(out, args.common.out.as_deref(), &text)?;
    if all_failed {
        return Err(fail(EXIT_INPUT, "every panel repository failed"));
    }
    Ok(EXIT_OK)
}

fn cmd_rules(action: RulesAction, rules: Option<PathBuf>, out: &mut dyn Write) -> Result<u8, CliError> {
    let rules = load_rules(rules.as_deref())?;
    let text = match action {
        RulesAction::List => {
            let mut s = String::new();
            for r in rules.rules() {
                s.push_str(&format!("{}\t{}\t{}\n", r.id, r.category, r.languages.join(",")));
            }
            s
        }
        RulesAction::Test { rule_id, file } => {
            let one = rules.only(&rule_id)?;
            let scan = ScanConfig::default().compile()?;
            let path = file.to_string_lossy().replace('\\', "/");
            if scan.registry.for_path(&path).is_none() {
                return Err(fail(EXIT_USAGE, format!("no language handles {}", file.display())));
            }
            let bytes = std::fs::read(&file).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", file.display())))?;
            let workspace = analyze_sources(vec![SourceFile { path, bytes }], &scan);
            if let Some(skip) = workspace.inventory.skipped.first() {
                return Err(fail(EXIT_INPUT, format!("{} skipped: {}", skip.path, skip.reason)));
            }
            let matches: Vec<_> = workspace.parsed.iter().flat_map(|p| match_rules(p, &one)).collect();
            to_json_lines(&matches)?
        }
    };
    emit(out, None, &text)?;
    Ok(EXIT_OK)
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

/// Parses `args` (including the program name) and runs the command.
///
/// Returns the exit code; reports are written to `out` and diagnostics to
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Scan(a) => cmd_scan(a, out),
        Command::History(a) => cmd_history(a, out, err),
        Command::Panel(a) => cmd_panel(a, out, err),
        Command::Rules { action, rules } => cmd_rules(action, rules, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}
