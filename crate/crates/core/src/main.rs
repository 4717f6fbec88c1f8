use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use explainer_check::corpus::{gen_corpus, to_line_corpus, CorpusGenSpec};
use explainer_check::io::{read_json, write_json, write_jsonl, write_text};
use explainer_check::pipeline::{
    demo_config, evaluate_stage, explain_stage, report_stage, run_pipeline, verify_stage,
    MetricsRow, RunConfig, RunOptions,
};
use explainer_check::{Error, Result};

/// Ground-truth checks for post-hoc explainers on select-then-predict models.
#[derive(Parser)]
#[command(name = "explainer-check", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Run config (JSON). For gen-corpus, a corpus generation spec.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config's `out`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of ranks colored in heatmaps.
    #[arg(long, global = true)]
    top_k: Option<usize>,
    /// Leave `generated_at` out of every artifact.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus from a template spec.
    GenCorpus,
    /// Verify datasets and write verified sets, rejection logs and pruning stats.
    Verify,
    /// Run every configured explainer over the verified sets.
    Explain,
    /// Judge explanations and write verdicts and the metrics report.
    Evaluate,
    /// Render heatmaps and the markdown report.
    Report,
    /// verify, explain, evaluate and report in one go.
    Run,
    /// Run the bundled worked examples.
    Demo,
}

fn load_config(c: &Common) -> Result<RunConfig> {
    let path = c
        .config
        .as_deref()
        .ok_or_else(|| Error::InvalidRunConfig("--config is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(k) = c.top_k {
        cfg.top_k = k;
    }
    Ok(cfg)
}

fn out_dir(c: &Common, cfg: &RunConfig) -> PathBuf {
    c.out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn print_metrics(rows: &[MetricsRow]) {
    for r in rows {
        println!(
            "{:<20} {:<22} %_first {:>6.2}  %_misrnk {:>6.2}  avg_misrnk {:.2} ({:.2})  n={}",
            r.explainer, r.dataset, r.pct_first, r.pct_misrnk, r.avg_misrnk_mean, r.avg_misrnk_std, r.n_instances
        );
    }
}

fn gen_corpus_cmd(c: &Common) -> Result<()> {
    let path = c
        .config
        .as_deref()
        .ok_or_else(|| Error::InvalidCorpusSpec("--config is required".into()))?;
    let mut spec: CorpusGenSpec = read_json(path)?;
    if let Some(s) = c.seed {
        spec.seed = Some(s);
    }
    let corpus = gen_corpus(&spec, 0)?;
    let out = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
    write_jsonl(&out.join("corpus.jsonl"), &corpus)?;
    write_text(&out.join("corpus.txt"), &to_line_corpus(&corpus))?;
    println!("{} instances written to {}", corpus.len(), out.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let c = &cli.common;
    let opts = RunOptions {
        timestamp: !c.no_timestamp,
    };
    let (cfg, out) = match cli.command {
        Command::GenCorpus => return gen_corpus_cmd(c),
        Command::Demo => {
            let mut cfg = demo_config(c.seed.unwrap_or(0));
            if let Some(k) = c.top_k {
                cfg.top_k = k;
            }
            let out = c.out.clone().unwrap_or_else(|| PathBuf::from("demo-out"));
            write_json(&out.join("config.json"), &cfg)?;
            (cfg, out)
        }
        _ => {
            let cfg = load_config(c)?;
            let out = out_dir(c, &cfg);
            (cfg, out)
        }
    };
    let out: &Path = &out;
    match cli.command {
        Command::Verify => {
            for d in verify_stage(&cfg, out, &opts)? {
                println!("{}: {} of {} retained", d.dataset, d.stats.n_retained, d.stats.n_total);
            }
        }
        Command::Explain => explain_stage(&cfg, out)?,
        Command::Evaluate => print_metrics(&evaluate_stage(&cfg, out, &opts)?),
        Command::Report => report_stage(&cfg, out, cfg.top_k, &opts)?,
        Command::Run | Command::Demo => {
            let summary = run_pipeline(&cfg, out, &opts)?;
            for d in &summary.stats {
                println!("{}: {} of {} retained", d.dataset, d.stats.n_retained, d.stats.n_total);
            }
            print_metrics(&summary.metrics);
        }
        Command::GenCorpus => unreachable!(),
    }
    println!("artifacts in {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
