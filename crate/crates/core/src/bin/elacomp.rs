use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elacomp::error::Result;
use elacomp::pipeline::{self, PipelineConfig, RunManifest};
use elacomp::subspace::ProjectionMode;

/// Landscape-feature complementarity of BBOB problems and generated objectives.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the COCO problem metadata and the generated problem set
    Generate(Common),
    /// Evaluate every problem on the shared design
    Sample(Common),
    /// Compute landscape features for every sampled problem
    Features(Common),
    /// Fit subspace models and project both sets
    Project(Moded),
    /// Embed subspace coordinates in 2D with t-SNE
    Embed(Moded),
    /// Correlation matrix, graph and separation report
    Correlate(Moded),
    /// Run every stage in order
    Pipeline(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration; defaults apply to absent keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the configuration)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides the configuration)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct Moded {
    #[command(flatten)]
    common: Common,
    /// Restrict to one projection mode: coco-into-gen, gen-into-coco or joint
    #[arg(long)]
    mode: Option<String>,
}

impl Common {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(out) = &self.out {
            cfg.output_dir = Some(out.clone());
        }
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        cfg.validate()?;
        cfg.out_dir()?;
        Ok(cfg)
    }
}

impl Moded {
    fn modes(&self, cfg: &PipelineConfig) -> Result<Vec<ProjectionMode>> {
        match &self.mode {
            Some(m) => Ok(vec![m.parse()?]),
            None => Ok(cfg.projection_modes.clone()),
        }
    }
}

fn run(cmd: Command) -> Result<RunManifest> {
    let (common, stage): (&Common, Box<dyn Fn(&PipelineConfig) -> Result<RunManifest> + Send + Sync>) =
        match &cmd {
            Command::Generate(c) => (c, Box::new(pipeline::cmd_generate)),
            Command::Sample(c) => (c, Box::new(pipeline::cmd_sample)),
            Command::Features(c) => (c, Box::new(pipeline::cmd_features)),
            Command::Pipeline(c) => (c, Box::new(pipeline::cmd_pipeline)),
            Command::Project(m) | Command::Embed(m) | Command::Correlate(m) => {
                let cfg = m.common.config()?;
                let modes = m.modes(&cfg)?;
                let f = match &cmd {
                    Command::Project(_) => pipeline::cmd_project,
                    Command::Embed(_) => pipeline::cmd_embed,
                    _ => pipeline::cmd_correlate,
                };
                (&m.common, Box::new(move |c: &PipelineConfig| f(c, &modes)))
            }
        };
    let cfg = common.config()?;
    pipeline::with_threads(common.threads, || stage(&cfg))?
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(m) => {
            let files = m.all_files().len();
            println!("ok: {files} files recorded in the manifest");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
