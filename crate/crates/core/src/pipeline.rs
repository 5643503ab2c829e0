//! Stage orchestration over an output directory with a digest manifest.
//!
//! Every stage reads its inputs from disk, checks them against the digests
//! recorded by the stage that wrote them, and records digests of its own
//! outputs. Running the stages one by one therefore produces the same bytes
//! as [`cmd_pipeline`].
//!
//! Layout of an output directory:
//!
//! ```text
//! manifest.json
//! problems/coco.json, problems/generated.json
//! samples/<set>_<index>.csv
//! features/features.csv
//! <mode>/model.json, coordinates.csv
//! <mode>/embedding.csv, embedding.svg, embedding.json
//! <mode>/corr_matrix.csv, edges.csv, corr_graph.svg, separation.json
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, TsneParams};
use crate::bbob::{self, BbobMeta};
use crate::ela;
use crate::error::{Error, Result};
use crate::io;
use crate::problem::{Payload, Problem, ProblemId, SetLabel};
use crate::sampling::{self, SamplePlan, Strategy};
use crate::subspace::{self, FeatureMatrix, ProjectionMode, SvdModel};
use crate::treegen::{self, GeneratorConfig, ProblemRecord};

pub const MANIFEST: &str = "manifest.json";
pub const COCO_PROBLEMS: &str = "problems/coco.json";
pub const GENERATED_PROBLEMS: &str = "problems/generated.json";
pub const FEATURES: &str = "features/features.csv";

/// Problems evaluated or featurized at once; bounds peak memory.
const CHUNK: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dimension: usize,
    pub generated_count: usize,
    /// Sample size per problem is `sample_multiplier · dimension`.
    pub sample_multiplier: usize,
    pub sample_strategy: Strategy,
    pub master_seed: u64,
    pub coco_instance_seed: u64,
    pub energy_threshold: f64,
    pub projection_modes: Vec<ProjectionMode>,
    pub tsne: TsneParams,
    pub correlation_threshold: f64,
    /// Correlate min-max scaled features instead of subspace coordinates.
    pub correlate_raw_features: bool,
    pub generator: GeneratorConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            dimension: 10,
            generated_count: 500,
            sample_multiplier: 200,
            sample_strategy: Strategy::LatinHypercube,
            master_seed: 42,
            coco_instance_seed: 1,
            energy_threshold: 0.95,
            projection_modes: ProjectionMode::ALL.to_vec(),
            tsne: TsneParams::default(),
            correlation_threshold: 0.95,
            correlate_raw_features: false,
            generator: GeneratorConfig::default(),
            output_dir: None,
        }
    }
}

impl PipelineConfig {
    /// The reduced run: `D = 5`, 100 generated problems.
    pub fn desk() -> Self {
        PipelineConfig {
            dimension: 5,
            generated_count: 100,
            ..PipelineConfig::default()
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        io::read_json(path)
    }

    pub fn sample_size(&self) -> usize {
        self.sample_multiplier * self.dimension
    }

    pub fn out_dir(&self) -> Result<&Path> {
        self.output_dir
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("no output directory given".into()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.dimension < 2 {
            return bad(format!("dimension must be >= 2, got {}", self.dimension));
        }
        if self.generated_count < 1 || self.sample_multiplier < 1 {
            return bad("generated_count and sample_multiplier must be positive".into());
        }
        if !(self.energy_threshold > 0.0 && self.energy_threshold <= 1.0) {
            return bad(format!("energy_threshold {} outside (0, 1]", self.energy_threshold));
        }
        if !(0.0..=1.0).contains(&self.correlation_threshold) {
            return bad(format!(
                "correlation_threshold {} outside [0, 1]",
                self.correlation_threshold
            ));
        }
        if self.projection_modes.is_empty() {
            return bad("projection_modes is empty".into());
        }
        let t = &self.tsne;
        if !(t.perplexity > 0.0) || t.iterations < 1 || !(t.learning_rate > 0.0) {
            return bad("t-SNE perplexity, iterations and learning rate must be positive".into());
        }
        let n = 24 + self.generated_count;
        t.validate(n)?;
        SamplePlan::latin(self.sample_size(), self.master_seed).validate(self.dimension)?;
        self.generator.validate()
    }

    /// The configuration as recorded in the manifest: no output directory.
    fn snapshot(&self) -> PipelineConfig {
        PipelineConfig {
            output_dir: None,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Generate,
    Sample,
    Features,
    Project,
    Embed,
    Correlate,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Generate,
        Stage::Sample,
        Stage::Features,
        Stage::Project,
        Stage::Embed,
        Stage::Correlate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Generate => "generate",
            Stage::Sample => "sample",
            Stage::Features => "features",
            Stage::Project => "project",
            Stage::Embed => "embed",
            Stage::Correlate => "correlate",
        }
    }

    fn per_mode(self) -> bool {
        matches!(self, Stage::Project | Stage::Embed | Stage::Correlate)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub status: Status,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    /// Relative path → SHA-256 hex digest.
    pub files: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub status: Status,
    pub config: PipelineConfig,
    pub dropped_features: Vec<String>,
    pub stages: BTreeMap<Stage, StageRecord>,
}

impl RunManifest {
    fn new(config: &PipelineConfig) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            status: Status::Ok,
            config: config.snapshot(),
            dropped_features: Vec::new(),
            stages: BTreeMap::new(),
        }
    }

    pub fn load(out: &Path) -> Result<Self> {
        io::read_json(&out.join(MANIFEST))
    }

    pub fn digest_of(&self, rel: &str) -> Option<(&Stage, &String)> {
        self.stages
            .iter()
            .find_map(|(s, r)| r.files.get(rel).map(|d| (s, d)))
    }

    /// Every recorded file with its digest.
    pub fn all_files(&self) -> BTreeMap<&str, &str> {
        self.stages
            .values()
            .flat_map(|r| r.files.iter().map(|(p, d)| (p.as_str(), d.as_str())))
            .collect()
    }

    /// The manifest with every timing zeroed, for run-to-run comparison.
    pub fn without_timings(&self) -> RunManifest {
        let mut m = self.clone();
        for r in m.stages.values_mut() {
            r.seconds = 0.0;
        }
        m
    }
}

/// One stage execution against an output directory.
struct Ctx<'a> {
    out: PathBuf,
    config: &'a PipelineConfig,
    manifest: RunManifest,
    written: BTreeMap<String, String>,
}

impl Ctx<'_> {
    /// Path of a verified upstream file.
    fn input(&self, rel: &str) -> Result<PathBuf> {
        let path = self.out.join(rel);
        let Some((stage, expected)) = self.manifest.digest_of(rel) else {
            return Err(Error::Digest {
                path,
                expected: "<none recorded>".into(),
                found: "no manifest entry, run the producing stage first".into(),
            });
        };
        if !path.exists() {
            return Err(Error::Digest {
                path,
                expected: expected.clone(),
                found: format!("file missing (written by stage {stage})"),
            });
        }
        let found = io::file_digest(&path)?;
        if &found != expected {
            return Err(Error::Digest {
                path,
                expected: expected.clone(),
                found: format!("found {found}"),
            });
        }
        Ok(path)
    }

    fn emit(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        io::write_bytes(&self.out.join(rel), bytes)?;
        self.written.insert(rel.to_string(), io::sha256_hex(bytes));
        Ok(())
    }

    fn emit_json<T: Serialize>(&mut self, rel: &str, value: &T) -> Result<()> {
        self.emit(rel, &io::to_json_bytes(value)?)
    }
}

fn run_stage<T>(
    config: &PipelineConfig,
    stage: Stage,
    modes: &[ProjectionMode],
    body: impl FnOnce(&mut Ctx) -> Result<T>,
) -> Result<T> {
    config.validate()?;
    for m in modes {
        if !config.projection_modes.contains(m) {
            return Err(Error::InvalidConfig(format!(
                "mode {m} is not among the configured projection modes"
            )));
        }
    }
    let out = config.out_dir()?.to_path_buf();
    let manifest = if stage == Stage::Generate {
        RunManifest::new(config)
    } else {
        let m = RunManifest::load(&out).map_err(|e| Error::Stage {
            stage: stage.to_string(),
            source: Box::new(e),
        })?;
        if m.config != config.snapshot() {
            return Err(Error::InvalidConfig(format!(
                "configuration differs from the one recorded in {}, rerun from the generate stage",
                out.join(MANIFEST).display()
            )));
        }
        m
    };
    let mut ctx = Ctx {
        out,
        config,
        manifest,
        written: BTreeMap::new(),
    };
    let started = Instant::now();
    log::info!("stage {stage} started");
    let result = body(&mut ctx);
    let seconds = started.elapsed().as_secs_f64();

    let Ctx {
        out,
        mut manifest,
        written,
        ..
    } = ctx;
    // outputs downstream of this stage no longer describe current inputs
    let slugs: Vec<&str> = modes.iter().map(|m| m.slug()).collect();
    for (s, rec) in manifest.stages.iter_mut() {
        if *s > stage || *s == stage {
            rec.files.retain(|path, _| {
                stage.per_mode() && s.per_mode() && !slugs.iter().any(|slug| path.starts_with(&format!("{slug}/")))
            });
        }
    }
    manifest.stages.retain(|s, r| !(*s > stage && r.files.is_empty()));
    let rec = manifest.stages.entry(stage).or_insert(StageRecord {
        status: Status::Ok,
        seconds: 0.0,
        error: None,
        files: BTreeMap::new(),
    });
    rec.files.extend(written);
    rec.seconds = seconds;
    match &result {
        Ok(_) => {
            rec.status = Status::Ok;
            rec.error = None;
        }
        Err(e) => {
            rec.status = Status::Failed;
            rec.error = Some(e.to_string());
        }
    }
    manifest.status = if manifest.stages.values().any(|r| r.status == Status::Failed) {
        Status::Failed
    } else {
        Status::Ok
    };
    io::write_json(&out.join(MANIFEST), &manifest)?;
    log::info!("stage {stage} finished in {seconds:.2}s");
    result.map_err(|e| Error::Stage {
        stage: stage.to_string(),
        source: Box::new(e),
    })
}

fn sample_path(id: ProblemId) -> String {
    format!("samples/{}.csv", id.file_stem())
}

fn mode_path(mode: ProjectionMode, file: &str) -> String {
    format!("{}/{file}", mode.slug())
}

/// Writes the COCO metadata and the generated problem set.
pub fn cmd_generate(config: &PipelineConfig) -> Result<RunManifest> {
    run_stage(config, Stage::Generate, &[], |ctx| {
        let cfg = ctx.config;
        let coco: Vec<BbobMeta> = bbob::bbob_suite(cfg.dimension, cfg.coco_instance_seed)?
            .into_iter()
            .map(|p| match p.payload {
                Payload::Bbob(inst) => inst.meta(),
                Payload::Generated(_) => unreachable!("suite holds BBOB problems only"),
            })
            .collect();
        let set = treegen::generate_set(cfg.master_seed, cfg.generated_count, cfg.dimension, &cfg.generator)?;
        ctx.emit_json(COCO_PROBLEMS, &coco)?;
        ctx.emit_json(GENERATED_PROBLEMS, &treegen::to_records(&set))?;
        Ok(())
    })?;
    RunManifest::load(config.out_dir()?)
}

/// COCO problems then generated problems, read from verified problem files.
fn load_problems(ctx: &Ctx) -> Result<Vec<Problem>> {
    let coco: Vec<BbobMeta> = io::read_json(&ctx.input(COCO_PROBLEMS)?)?;
    let generated: Vec<ProblemRecord> = io::read_json(&ctx.input(GENERATED_PROBLEMS)?)?;
    let mut problems = coco.iter().map(BbobMeta::instantiate).collect::<Result<Vec<_>>>()?;
    for r in generated {
        if let Err(defect) = r.tree.validate(ctx.config.generator.max_depth) {
            return Err(Error::InvalidInput(format!("generated problem {}: {defect}", r.index)));
        }
        problems.push(Problem::from(treegen::GeneratedProblem::from(r)));
    }
    if problems.iter().any(|p| p.dimension() != ctx.config.dimension) {
        return Err(Error::InvalidInput("problem file dimension differs from the configuration".into()));
    }
    Ok(problems)
}

/// Evaluates every problem on one shared design and writes a CSV per problem.
pub fn cmd_sample(config: &PipelineConfig) -> Result<RunManifest> {
    run_stage(config, Stage::Sample, &[], |ctx| {
        let cfg = ctx.config;
        let problems = load_problems(ctx)?;
        let plan = SamplePlan {
            strategy: cfg.sample_strategy,
            n: cfg.sample_size(),
            seed: cfg.master_seed,
        };
        let design = sampling::build_design(&plan, &crate::problem::BoxBounds::domain(cfg.dimension));
        for chunk in problems.chunks(CHUNK) {
            let files: Vec<(ProblemId, Vec<u8>)> = chunk
                .par_iter()
                .map(|p| {
                    let s = sampling::evaluate_design(p, &design)?;
                    Ok((p.id, io::sample_csv(&s)?))
                })
                .collect::<Result<_>>()?;
            for (id, bytes) in files {
                ctx.emit(&sample_path(id), &bytes)?;
            }
        }
        Ok(())
    })?;
    RunManifest::load(config.out_dir()?)
}

fn problem_ids(ctx: &Ctx) -> Result<Vec<ProblemId>> {
    let coco: Vec<BbobMeta> = io::read_json(&ctx.input(COCO_PROBLEMS)?)?;
    let generated: Vec<ProblemRecord> = io::read_json(&ctx.input(GENERATED_PROBLEMS)?)?;
    Ok(coco
        .iter()
        .map(|m| ProblemId::coco(m.function_id))
        .chain(generated.iter().map(|r| ProblemId::generated(r.index)))
        .collect())
}

/// Computes the 37 features of every sampled problem.
pub fn cmd_features(config: &PipelineConfig) -> Result<RunManifest> {
    run_stage(config, Stage::Features, &[], |ctx| {
        let ids = problem_ids(ctx)?;
        if ids.is_empty() {
            return Err(Error::InvalidInput("no problems to compute features for".into()));
        }
        let mut vectors = Vec::with_capacity(ids.len());
        for chunk in ids.chunks(CHUNK) {
            let paths = chunk
                .iter()
                .map(|id| ctx.input(&sample_path(*id)))
                .collect::<Result<Vec<_>>>()?;
            let part: Vec<ela::FeatureVector> = chunk
                .par_iter()
                .zip(&paths)
                .map(|(id, path)| {
                    let s = io::read_sample_csv(path, *id)?;
                    Ok(ela::extract_all(&s, ctx.config.master_seed))
                })
                .collect::<Result<_>>()?;
            vectors.extend(part);
        }
        let m = FeatureMatrix::from_vectors(&vectors)?;
        ctx.emit(FEATURES, &io::features_csv(&m)?)?;
        Ok(())
    })?;
    RunManifest::load(config.out_dir()?)
}

/// Splits a feature table into its COCO and generated rows.
pub fn split_by_set(m: &FeatureMatrix) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let part = |label: SetLabel| -> Result<FeatureMatrix> {
        let rows: Vec<usize> = (0..m.n_rows()).filter(|&i| m.row_ids()[i].set_label == label).collect();
        if rows.is_empty() {
            return Err(Error::InvalidInput(format!("feature table has no {label} rows")));
        }
        FeatureMatrix::new(
            rows.iter().map(|&i| m.row_ids()[i]).collect(),
            m.columns().to_vec(),
            rows.iter().map(|&i| m.data()[i].clone()).collect(),
        )
    };
    Ok((part(SetLabel::Coco)?, part(SetLabel::Generated)?))
}

/// Cleans the feature table and fits the requested subspace models.
pub fn cmd_project(config: &PipelineConfig, modes: &[ProjectionMode]) -> Result<RunManifest> {
    run_stage(config, Stage::Project, modes, |ctx| {
        let features = io::read_features_csv(&ctx.input(FEATURES)?)?;
        let (coco, generated) = split_by_set(&features)?;
        let (coco, generated, dropped) = subspace::clean_columns(&coco, &generated)?;
        ctx.manifest.dropped_features = dropped;
        for &mode in modes {
            let p = subspace::run_projection(mode, &coco, &generated, ctx.config.energy_threshold)?;
            log::info!("mode {mode}: k = {}", p.k());
            ctx.emit_json(&mode_path(mode, "model.json"), &p.model)?;
            ctx.emit(
                &mode_path(mode, "coordinates.csv"),
                &io::coordinates_csv(&p.row_ids, &p.coordinates)?,
            )?;
        }
        Ok(())
    })?;
    RunManifest::load(config.out_dir()?)
}

/// Summary written next to each embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSummary {
    pub mode: ProjectionMode,
    pub params: TsneParams,
    pub initial_kl: f64,
    pub final_kl: f64,
    pub max_entropy_error: f64,
}

fn embedding_title(mode: ProjectionMode) -> &'static str {
    match mode {
        ProjectionMode::CocoIntoGenerated => "t-SNE: COCO projected into the generated-set subspace",
        ProjectionMode::GeneratedIntoCoco => "t-SNE: generated problems projected into the COCO subspace",
        ProjectionMode::Joint => "t-SNE: joint subspace of both sets",
    }
}

fn graph_title(mode: ProjectionMode) -> &'static str {
    match mode {
        ProjectionMode::CocoIntoGenerated => "Pearson correlation: COCO into generated-set subspace",
        ProjectionMode::GeneratedIntoCoco => "Pearson correlation: generated into COCO subspace",
        ProjectionMode::Joint => "Pearson correlation: joint subspace",
    }
}

pub fn cmd_embed(config: &PipelineConfig, modes: &[ProjectionMode]) -> Result<RunManifest> {
    run_stage(config, Stage::Embed, modes, |ctx| {
        for &mode in modes {
            let (ids, coords) = io::read_coordinates_csv(&ctx.input(&mode_path(mode, "coordinates.csv"))?)?;
            let e = analysis::tsne(&ids, &coords, &ctx.config.tsne)?;
            let summary = EmbeddingSummary {
                mode,
                params: e.params,
                initial_kl: e.initial_kl,
                final_kl: e.final_kl,
                max_entropy_error: e.calibration_error(),
            };
            ctx.emit(&mode_path(mode, "embedding.csv"), &io::embedding_csv(&e)?)?;
            ctx.emit(
                &mode_path(mode, "embedding.svg"),
                analysis::plot_embedding(&e, embedding_title(mode))?.as_bytes(),
            )?;
            ctx.emit_json(&mode_path(mode, "embedding.json"), &summary)?;
        }
        Ok(())
    })?;
    RunManifest::load(config.out_dir()?)
}

/// Min-max scaled features of `ids` under the model's scaling, for the raw comparison.
fn scaled_features(ctx: &Ctx, model: &SvdModel, ids: &[ProblemId]) -> Result<Vec<Vec<f64>>> {
    let features = io::read_features_csv(&ctx.input(FEATURES)?)?;
    let keep: Vec<usize> = model
        .columns()
        .iter()
        .map(|c| {
            features
                .columns()
                .iter()
                .position(|f| f == c)
                .ok_or_else(|| Error::ColumnMismatch(format!("model column {c} not in feature table")))
        })
        .collect::<Result<_>>()?;
    let mut data = Vec::with_capacity(ids.len());
    for id in ids {
        let row = features
            .row_ids()
            .iter()
            .position(|r| r == id)
            .ok_or_else(|| Error::InvalidInput(format!("{id} missing from feature table")))?;
        data.push(keep.iter().map(|&j| features.data()[row][j]).collect());
    }
    let m = FeatureMatrix::new(ids.to_vec(), model.columns().to_vec(), data)?;
    subspace::minmax_apply(&m, &model.scaling)
}

pub fn cmd_correlate(config: &PipelineConfig, modes: &[ProjectionMode]) -> Result<RunManifest> {
    run_stage(config, Stage::Correlate, modes, |ctx| {
        for &mode in modes {
            let (ids, coords) = io::read_coordinates_csv(&ctx.input(&mode_path(mode, "coordinates.csv"))?)?;
            let vectors = if ctx.config.correlate_raw_features {
                let model: SvdModel = io::read_json(&ctx.input(&mode_path(mode, "model.json"))?)?;
                scaled_features(ctx, &model, &ids)?
            } else {
                coords.clone()
            };
            let m = analysis::pearson_matrix(&vectors)?;
            let g = analysis::build_graph(&m, &ids, ctx.config.correlation_threshold)?;
            let report = analysis::silhouette(&coords, &ids, mode.label())?;
            ctx.emit(&mode_path(mode, "corr_matrix.csv"), &io::corr_matrix_csv(&ids, &m)?)?;
            ctx.emit(&mode_path(mode, "edges.csv"), &io::edges_csv(&g)?)?;
            ctx.emit(
                &mode_path(mode, "corr_graph.svg"),
                analysis::plot_graph(&g, graph_title(mode))?.as_bytes(),
            )?;
            ctx.emit_json(&mode_path(mode, "separation.json"), &report)?;
        }
        Ok(())
    })?;
    RunManifest::load(config.out_dir()?)
}

/// All stages in order for every configured projection mode.
pub fn cmd_pipeline(config: &PipelineConfig) -> Result<RunManifest> {
    let modes = config.projection_modes.clone();
    cmd_generate(config)?;
    cmd_sample(config)?;
    cmd_features(config)?;
    cmd_project(config, &modes)?;
    cmd_embed(config, &modes)?;
    cmd_correlate(config, &modes)
}

/// Runs `f` on a dedicated pool of `threads` workers, or the global pool for `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidConfig("--threads must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(out: &Path) -> PipelineConfig {
        PipelineConfig {
            dimension: 2,
            generated_count: 12,
            sample_multiplier: 30,
            tsne: TsneParams {
                perplexity: 5.0,
                iterations: 150,
                ..TsneParams::default()
            },
            output_dir: Some(out.to_path_buf()),
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn dimension_one_rejected() {
        let cfg = PipelineConfig {
            dimension: 1,
            ..PipelineConfig::default()
        };
        assert!(cfg.validate().unwrap_err().is_validation());
    }

    #[test]
    fn unknown_config_keys_rejected() {
        assert!(serde_json::from_str::<PipelineConfig>(r#"{"dimensions": 3}"#).is_err());
        let cfg: PipelineConfig = serde_json::from_str(r#"{"dimension": 3}"#).unwrap();
        assert_eq!(cfg.generated_count, 500);
    }

    #[test]
    fn stage_needs_upstream_record() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny(dir.path());
        assert!(cmd_sample(&cfg).is_err());
    }

    #[test]
    fn tampered_input_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny(dir.path());
        cmd_generate(&cfg).unwrap();
        io::write_bytes(&dir.path().join(GENERATED_PROBLEMS), b"[]\n").unwrap();
        let err = cmd_sample(&cfg).unwrap_err().to_string();
        assert!(err.contains("generated.json") && err.contains("expected digest"), "{err}");
        let m = RunManifest::load(dir.path()).unwrap();
        assert_eq!(m.status, Status::Failed);
        assert_eq!(m.stages[&Stage::Sample].status, Status::Failed);
    }

    #[test]
    fn tiny_pipeline_end_to_end() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny(dir.path());
        let m = cmd_pipeline(&cfg).unwrap();
        assert_eq!(m.status, Status::Ok);
        for mode in ProjectionMode::ALL {
            for f in ["embedding.csv", "embedding.svg", "corr_matrix.csv", "corr_graph.svg", "separation.json"] {
                let rel = mode_path(mode, f);
                assert!(m.digest_of(&rel).is_some(), "{rel} not recorded");
            }
        }
        for (rel, digest) in m.all_files() {
            assert_eq!(io::file_digest(&dir.path().join(rel)).unwrap(), digest);
        }
    }
}
