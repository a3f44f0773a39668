//! Experiment configuration files (TOML or JSON, chosen by extension).

use std::path::{Path, PathBuf};

use cd2_core::deform::OptConfig;
use cd2_core::losses::{LossConfig, LossVariant};
use serde::{Deserialize, Serialize};

use crate::fail::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub metrics: Option<MetricsBlock>,
    pub deform: Option<DeformBlock>,
    pub bench: Option<BenchBlock>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsBlock {
    pub mesh: Option<PathBuf>,
    pub points: Option<PathBuf>,
    pub rho: Vec<f64>,
    pub emd_points: Option<usize>,
}

impl Default for MetricsBlock {
    fn default() -> Self {
        Self { mesh: None, points: None, rho: vec![0.25, 0.5], emd_points: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    #[default]
    ToyChair,
    SphereFit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeformBlock {
    pub scenario: Scenario,
    /// Target mesh for `sphere_fit`: a mesh file, or `builtin:box` /
    /// `builtin:icosphere`.
    pub target: Option<String>,
    pub n_points: usize,
    pub subdivisions: u32,
    pub opt: OptConfig,
    pub loss: LossConfig,
    /// Paired runs sharing `opt` and the target; overrides `loss` when set.
    pub runs: Vec<RunSpec>,
}

impl Default for DeformBlock {
    fn default() -> Self {
        Self {
            scenario: Scenario::ToyChair,
            target: None,
            n_points: 2000,
            subdivisions: 2,
            opt: OptConfig::default(),
            loss: LossConfig::default(),
            runs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub name: String,
    #[serde(default)]
    pub loss: LossConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchBlock {
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub metrics: Vec<String>,
}

impl Default for BenchBlock {
    fn default() -> Self {
        Self {
            sizes: vec![1000, 2000, 4000, 8000],
            reps: 10,
            metrics: ["cd", "cd2_distance", "cd2_threshold", "cd2_percent"].map(String::from).to_vec(),
        }
    }
}

pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let parsed = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display())),
        Some("toml") => toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display())),
        _ => Err(format!("{}: config must be .toml or .json", path.display())),
    };
    let mut cfg: ExperimentConfig = parsed.map_err(CliError::Config)?;
    // relative paths inside a config resolve against the config's directory
    let base = path.parent().unwrap_or(Path::new("."));
    if let Some(m) = cfg.metrics.as_mut() {
        for p in [&mut m.mesh, &mut m.points].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
    if let Some(t) = cfg.deform.as_mut().and_then(|d| d.target.as_mut()) {
        if !t.starts_with("builtin:") && Path::new(t).is_relative() {
            *t = base.join(&*t).to_string_lossy().into_owned();
        }
    }
    Ok(cfg)
}

fn check_loss(errs: &mut Vec<String>, prefix: &str, loss: &LossConfig) {
    if let Err(es) = loss.validate() {
        errs.extend(es.into_iter().map(|e| format!("{prefix}: {e}")));
    }
}

/// Every violated field, one message each.
pub fn validate(cfg: &ExperimentConfig) -> Vec<String> {
    let mut errs = Vec::new();
    if let Some(m) = &cfg.metrics {
        for (name, p) in [("metrics.mesh", &m.mesh), ("metrics.points", &m.points)] {
            if let Some(p) = p {
                if !p.exists() {
                    errs.push(format!("{name}: file not found: {}", p.display()));
                }
            }
        }
        if m.rho.is_empty() {
            errs.push("metrics.rho: at least one value required".into());
        }
        for r in &m.rho {
            if !(*r > 0.0 && r.is_finite()) {
                errs.push(format!("metrics.rho: values must be finite and > 0, got {r}"));
            }
        }
        if m.emd_points == Some(0) {
            errs.push("metrics.emd_points: must be at least 1".into());
        }
    }
    if let Some(d) = &cfg.deform {
        if let Err(es) = d.opt.validate() {
            errs.extend(es.into_iter().map(|e| format!("deform.opt: {e}")));
        }
        if d.runs.is_empty() {
            check_loss(&mut errs, "deform.loss", &d.loss);
        }
        for (i, r) in d.runs.iter().enumerate() {
            check_loss(&mut errs, &format!("deform.runs[{i}].loss"), &r.loss);
            if r.name.is_empty() || r.name.contains(['/', '\\']) || r.name == "." || r.name == ".." {
                errs.push(format!("deform.runs[{i}].name: must be a plain non-empty directory name"));
            }
            if d.runs[..i].iter().any(|o| o.name == r.name) {
                errs.push(format!("deform.runs[{i}].name: duplicate run name '{}'", r.name));
            }
        }
        match (d.scenario, d.target.as_deref()) {
            (Scenario::SphereFit, None) => errs.push("deform.target: required for sphere_fit".into()),
            (Scenario::SphereFit, Some(t)) => {
                if let Some(b) = t.strip_prefix("builtin:") {
                    if b != "box" && b != "icosphere" {
                        errs.push(format!("deform.target: unknown builtin '{b}' (expected box or icosphere)"));
                    }
                } else if !Path::new(t).exists() {
                    errs.push(format!("deform.target: file not found: {t}"));
                }
            }
            (Scenario::ToyChair, Some(_)) => errs.push("deform.target: not used by toy_chair".into()),
            (Scenario::ToyChair, None) => {}
        }
        if d.scenario == Scenario::SphereFit {
            if d.n_points < 100 {
                errs.push(format!("deform.n_points: must be at least 100, got {}", d.n_points));
            }
            if d.subdivisions > cd2_core::geometry::MAX_ICOSPHERE_SUBDIVISIONS {
                errs.push(format!(
                    "deform.subdivisions: at most {}, got {}",
                    cd2_core::geometry::MAX_ICOSPHERE_SUBDIVISIONS,
                    d.subdivisions
                ));
            }
        }
    }
    if let Some(b) = &cfg.bench {
        if b.sizes.is_empty() {
            errs.push("bench.sizes: at least one size required".into());
        }
        if b.sizes.contains(&0) {
            errs.push("bench.sizes: sizes must be positive".into());
        }
        if b.sizes.windows(2).any(|w| w[0] >= w[1]) {
            errs.push("bench.sizes: must be strictly ascending".into());
        }
        if b.reps == 0 {
            errs.push("bench.reps: must be at least 1".into());
        }
        if b.metrics.is_empty() {
            errs.push("bench.metrics: at least one metric required".into());
        }
        for m in &b.metrics {
            if cd2_core::bench::BenchMetric::parse(m).is_err() {
                errs.push(format!("bench.metrics: unknown metric '{m}'"));
            }
        }
        if b.metrics.iter().any(|m| m == "emd") {
            if let Some(n) = b.sizes.iter().find(|&&n| n > cd2_core::metrics::DEFAULT_EMD_CAP) {
                errs.push(format!(
                    "bench.sizes: {n} exceeds the EMD cap of {}",
                    cd2_core::metrics::DEFAULT_EMD_CAP
                ));
            }
        }
    }
    errs
}

/// Loss config for a `--variant` override: the variant's defaults, keeping
/// the block's parameters.
pub fn with_variant(loss: &LossConfig, variant: LossVariant) -> LossConfig {
    LossConfig { variant, ..loss.clone() }
}
