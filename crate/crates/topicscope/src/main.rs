use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use topicscope::commands::{cmd_fit, cmd_ingest, cmd_report, cmd_sweep, ReportArgs};
use topicscope::config::{CorrelationSource, RunConfig};
use topicscope::ingest::InputFormat;
use topicscope::{AppError, AppResult};
use topicscope_core::analysis::PairConvention;
use topicscope_core::corpus::YearScaling;
use topicscope_core::inference::InitStrategy;

/// Structural topic modelling of abstract corpora.
#[derive(Parser, Debug)]
#[command(name = "topicscope", version)]
struct Cli {
    /// JSON run configuration; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: one per processor).
    #[arg(long, global = true, env = "TOPICSCOPE_THREADS")]
    threads: Option<usize>,
    /// Repeat for more log output on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Clean records into a document-term matrix, vocabulary and design.
    Ingest(IngestArgs),
    /// Fit at one K and write the model and report.
    Fit(FitArgs),
    /// Fit a range of K and propose candidates.
    Sweep(SweepArgs),
    /// Rebuild the report from a stored fit.
    Report(ReportCli),
}

fn serde_enum<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_"))).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct IngestArgs {
    /// JSONL or CSV records (id, abstract, journal, year).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Defaults to the input file extension.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// Replaces the bundled stopword list.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Extra boilerplate phrases, one per line.
    #[arg(long)]
    boilerplate: Option<PathBuf>,
    #[arg(long)]
    min_df: Option<usize>,
    /// center-scale or raw.
    #[arg(long, value_parser = serde_enum::<YearScaling>)]
    year_scaling: Option<YearScaling>,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Directory written by `ingest`.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Relative ELBO change that ends EM.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    ridge: Option<f64>,
    /// seeded-random or anchor-spectral.
    #[arg(long, value_parser = serde_enum::<InitStrategy>)]
    init: Option<InitStrategy>,
}

#[derive(Args, Debug)]
struct AnalysisArgs {
    #[arg(long)]
    top_pairs: Option<usize>,
    /// unique or ordered.
    #[arg(long, value_parser = serde_enum::<PairConvention>)]
    pair_convention: Option<PairConvention>,
    #[arg(long, value_enum)]
    correlation_source: Option<CorrelationSource>,
    #[arg(long)]
    corr_bin_width: Option<f64>,
    #[arg(long)]
    prevalence_bin_width: Option<f64>,
    /// Also write SVG density plots.
    #[arg(long)]
    svg: bool,
    /// A `sweep.csv` to include in the report.
    #[arg(long)]
    sweep_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// LO:HI[:STEP], inclusive of HI.
    #[arg(long)]
    sweep: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct ReportCli {
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Directory holding model.json and theta.csv.
    #[arg(long)]
    model: PathBuf,
    /// Further fit directories for the correlation comparison.
    #[arg(long, num_args = 1..)]
    compare: Vec<PathBuf>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn apply_model(cfg: &mut RunConfig, m: ModelArgs) {
    if m.corpus.is_some() {
        cfg.corpus = m.corpus;
    }
    set(&mut cfg.model.max_em_iters, m.max_iters);
    set(&mut cfg.model.rel_tol, m.tol);
    set(&mut cfg.model.ridge, m.ridge);
    set(&mut cfg.model.init, m.init);
}

fn apply_analysis(cfg: &mut RunConfig, a: &AnalysisArgs) {
    let o = &mut cfg.analysis;
    set(&mut o.top_pairs, a.top_pairs);
    set(&mut o.pair_convention, a.pair_convention);
    set(&mut o.correlation_source, a.correlation_source);
    set(&mut o.correlation_bin_width, a.corr_bin_width);
    set(&mut o.prevalence_bin_width, a.prevalence_bin_width);
    o.svg |= a.svg;
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(v).expect("summary serializes"));
}

fn run(cli: Cli) -> AppResult<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    set(&mut cfg.model.seed, cli.seed.map(Some));
    match cli.command {
        Command::Ingest(a) => {
            if a.input.is_some() {
                cfg.input = a.input;
            }
            if a.format.is_some() {
                cfg.format = a.format;
            }
            if a.stopwords.is_some() {
                cfg.preprocess.stopwords = a.stopwords;
            }
            if a.boilerplate.is_some() {
                cfg.preprocess.boilerplate = a.boilerplate;
            }
            set(&mut cfg.preprocess.min_df, a.min_df);
            set(&mut cfg.preprocess.year_scaling, a.year_scaling);
            cfg.validate()?;
            print_json(&cmd_ingest(&cfg)?);
        }
        Command::Fit(a) => {
            set(&mut cfg.model.k, a.k.map(Some));
            apply_model(&mut cfg, a.model);
            apply_analysis(&mut cfg, &a.analysis);
            cfg.validate()?;
            let sweep_csv = a.analysis.sweep_csv.clone();
            let report = cmd_fit(&cfg, sweep_csv.as_deref())?;
            print_json(&report.manifest);
        }
        Command::Sweep(a) => {
            set(&mut cfg.model.sweep, a.sweep.map(Some));
            apply_model(&mut cfg, a.model);
            cfg.validate()?;
            let outcome = cmd_sweep(&cfg)?;
            print_json(&serde_json::json!({
                "ks": outcome.result.entries.iter().map(|e| e.k).collect::<Vec<_>>(),
                "candidates": outcome.result.candidates,
                "resumed": outcome.resumed,
                "failures": outcome.failures.iter().map(|(k, e)| serde_json::json!({"k": k, "error": e})).collect::<Vec<_>>(),
            }));
        }
        Command::Report(a) => {
            if a.corpus.is_some() {
                cfg.corpus = a.corpus;
            }
            apply_analysis(&mut cfg, &a.analysis);
            cfg.validate()?;
            let args = ReportArgs { model_dir: a.model, compare: a.compare, sweep_csv: a.analysis.sweep_csv };
            print_json(&cmd_report(&cfg, &args)?.manifest);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", AppError::input(e.to_string().trim_end().replace('\n', " ")).to_line());
            return ExitCode::from(2);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("{}", AppError::input("--threads must be at least 1").to_line());
            return ExitCode::from(2);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", AppError::input(format!("thread pool: {e}")).to_line());
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
