use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wellbeing::pipeline::{config_from_manifest, run_synth, Manifest, Pipeline, PipelineConfig, Stage};
use wellbeing::synth::SyntheticSpec;
use wellbeing::Error;

#[derive(Parser)]
#[command(name = "wellbeing", version, about = "Well-being grounded polarity analysis of scored micro-blog posts")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bin scored posts into polarity classes and split them.
    Ingest(StageArgs),
    /// Sentence-split and tag each split.
    Preprocess(StageArgs),
    /// Count extraction patterns over the training sentences.
    LearnPatterns(StageArgs),
    /// Grid-search the pattern thresholds.
    Sweep(StageArgs),
    /// Extract feature vectors for every scheme.
    Features(StageArgs),
    /// Rank features by information gain.
    Rank(StageArgs),
    /// Train one linear model per scheme.
    Train(StageArgs),
    /// Score every model on the test split.
    Eval(StageArgs),
    /// Summarize pattern families for the configured queries.
    Report(StageArgs),
    /// Run every stage in order.
    RunAll(StageArgs),
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
}

#[derive(Args, Debug, Default)]
struct StageArgs {
    /// TOML file of configuration keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Take the configuration recorded in an earlier manifest.
    #[arg(long, conflicts_with = "config")]
    from_manifest: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Pre-tagged sentences replacing the built-in tagger.
    #[arg(long)]
    pretagged: Option<PathBuf>,
    #[arg(long)]
    frames: Option<PathBuf>,
    #[arg(long)]
    dict: Option<PathBuf>,
    #[arg(long)]
    gazetteer: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    train_n: Option<usize>,
    #[arg(long)]
    test_n: Option<usize>,
    #[arg(long)]
    dev_fraction: Option<f64>,
    /// Pick thresholds on the test split instead of dev.
    #[arg(long)]
    sweep_on_test: bool,
    #[arg(long, value_delimiter = ',')]
    theta_f: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    theta_p: Option<Vec<f64>>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Comma-separated scheme names, or `all`.
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<String>>,
    #[arg(long)]
    rank_k: Option<usize>,
    /// Pattern family query; repeat for several.
    #[arg(long = "query")]
    queries: Option<Vec<String>>,
    #[arg(long)]
    report_theta_f: Option<u64>,
    #[arg(long)]
    report_theta_p: Option<f64>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// TOML generator spec.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    positives: Option<usize>,
    #[arg(long)]
    negatives: Option<usize>,
    #[arg(long)]
    neutrals: Option<usize>,
}

impl StageArgs {
    fn into_config(self) -> Result<PipelineConfig, Error> {
        let mut cfg = match (&self.config, &self.from_manifest) {
            (Some(path), _) => PipelineConfig::load(path)?,
            (None, Some(path)) => config_from_manifest(&Manifest::load(path)?)?,
            (None, None) => PipelineConfig::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = self.$field { cfg.$target = v; })*
            };
        }
        macro_rules! set_some {
            ($($field:ident),* $(,)?) => {
                $(if self.$field.is_some() { cfg.$field = self.$field; })*
            };
        }
        set_some!(corpus, pretagged, frames, dict, gazetteer, train_n, test_n);
        set!(
            out => out_dir,
            seed => seed,
            dev_fraction => dev_fraction,
            theta_f => theta_f,
            theta_p => theta_p,
            lambda => lambda,
            epochs => epochs,
            rank_k => rank_k,
            queries => queries,
            report_theta_f => report_theta_f,
            report_theta_p => report_theta_p,
        );
        if let Some(s) = self.schemes {
            cfg.schemes = if s.len() == 1 && s[0].eq_ignore_ascii_case("all") {
                PipelineConfig::default().schemes
            } else {
                s
            };
        }
        cfg.sweep_on_test |= self.sweep_on_test;
        Ok(cfg)
    }
}

fn run_stages(args: StageArgs, stages: &[Stage]) -> Result<(), (Option<Stage>, Error)> {
    let cfg = args.into_config().map_err(|e| (None, e))?;
    let pipeline = Pipeline::new(cfg).map_err(|e| (None, e))?;
    for &stage in stages {
        let manifest = pipeline.run(stage).map_err(|e| (Some(stage), e.error))?;
        println!(
            "{stage}: {} outputs, manifest {}",
            manifest.outputs.len(),
            pipeline.manifest_path(stage.as_str()).display()
        );
    }
    if stages.contains(&Stage::Eval) {
        if let Ok(table) = std::fs::read_to_string(pipeline.out_dir().join("eval/report.txt")) {
            print!("{table}");
        }
    }
    Ok(())
}

fn run_synth_command(args: SynthArgs) -> Result<(), Error> {
    let mut spec = match &args.spec {
        Some(path) => SyntheticSpec::load(path)?,
        None => SyntheticSpec::default(),
    };
    if let Some(v) = args.seed {
        spec.seed = v;
    }
    if let Some(v) = args.positives {
        spec.positives = v;
    }
    if let Some(v) = args.negatives {
        spec.negatives = v;
    }
    if let Some(v) = args.neutrals {
        spec.neutrals = v;
    }
    let manifest = run_synth(&spec, &args.out)?;
    println!("synth: wrote {} ({})", args.out.display(), manifest.outputs[0].sha256);
    Ok(())
}

fn dispatch(command: Command) -> Result<(), (Option<Stage>, Error)> {
    let (args, stages): (StageArgs, Vec<Stage>) = match command {
        Command::Ingest(a) => (a, vec![Stage::Ingest]),
        Command::Preprocess(a) => (a, vec![Stage::Preprocess]),
        Command::LearnPatterns(a) => (a, vec![Stage::LearnPatterns]),
        Command::Sweep(a) => (a, vec![Stage::Sweep]),
        Command::Features(a) => (a, vec![Stage::Features]),
        Command::Rank(a) => (a, vec![Stage::Rank]),
        Command::Train(a) => (a, vec![Stage::Train]),
        Command::Eval(a) => (a, vec![Stage::Eval]),
        Command::Report(a) => (a, vec![Stage::Report]),
        Command::RunAll(a) => (a, Stage::ALL.to_vec()),
        Command::Synth(a) => return run_synth_command(a).map_err(|e| (None, e)),
    };
    run_stages(args, &stages)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match panic::catch_unwind(|| dispatch(cli.command)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err((stage, e))) => {
            match stage {
                Some(s) => eprintln!("wellbeing: error in stage {s}: {e}"),
                None => eprintln!("wellbeing: {e}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("wellbeing: internal error");
            ExitCode::from(3)
        }
    }
}
