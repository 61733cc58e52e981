//! Pipeline configuration from four layers, weakest first: built-in
//! defaults, a flat `key = value` config file, `SALDET_*` environment
//! variables, and command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use saldet::PipelineConfig;

/// Pipeline knobs shared by `detect` and `eval`. Every flag has a config
/// file key of the same name and a `SALDET_<NAME>` environment variable.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct PipelineArgs {
    /// Config file of `key = value` lines (# starts a comment).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Number of window hypotheses to accumulate.
    #[arg(long, value_name = "N")]
    pub proposal_count: Option<usize>,

    /// Objectness mass fraction that defines each margin.
    #[arg(long, value_name = "FRACTION")]
    pub margin_fraction: Option<f64>,

    /// Superpixel budget for the compactness cue.
    #[arg(long, value_name = "N")]
    pub superpixel_count: Option<usize>,

    /// Mean-color border size as a fraction of each dimension.
    #[arg(long, value_name = "FRACTION")]
    pub border_ratio: Option<f64>,

    /// Percentile of pixels that must land at or above 0.5 after rescaling.
    #[arg(long, value_name = "PERCENT")]
    pub rescale_percentile: Option<f64>,

    /// CSV of external proposal windows, replacing the generator.
    #[arg(long, value_name = "FILE")]
    pub proposals_file: Option<PathBuf>,
}

impl PipelineArgs {
    /// Resolves the effective configuration in precedence order.
    pub fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = &self.config {
            apply_file(&mut cfg, path)?;
        }
        apply_env(&mut cfg)?;
        self.apply_flags(&mut cfg);
        Ok(cfg)
    }

    fn apply_flags(&self, cfg: &mut PipelineConfig) {
        if let Some(v) = self.proposal_count {
            cfg.proposal_count = v;
        }
        if let Some(v) = self.margin_fraction {
            cfg.margin_fraction = v;
        }
        if let Some(v) = self.superpixel_count {
            cfg.superpixel_count = v;
        }
        if let Some(v) = self.border_ratio {
            cfg.border_ratio = v;
        }
        if let Some(v) = self.rescale_percentile {
            cfg.rescale_percentile = v;
        }
        if let Some(v) = &self.proposals_file {
            cfg.proposals_file = Some(v.clone());
        }
    }
}

fn set_key(cfg: &mut PipelineConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "proposal_count" => cfg.proposal_count = value.parse().context("proposal_count")?,
        "margin_fraction" => cfg.margin_fraction = value.parse().context("margin_fraction")?,
        "superpixel_count" => cfg.superpixel_count = value.parse().context("superpixel_count")?,
        "border_ratio" => cfg.border_ratio = value.parse().context("border_ratio")?,
        "rescale_percentile" => {
            cfg.rescale_percentile = value.parse().context("rescale_percentile")?
        }
        "proposals_file" => cfg.proposals_file = Some(PathBuf::from(value)),
        other => bail!("unknown config key {other:?}"),
    }
    Ok(())
}

fn apply_file(cfg: &mut PipelineConfig, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "{}:{}: expected key = value, got {raw:?}",
                path.display(),
                number + 1
            );
        };
        set_key(cfg, key.trim(), value.trim())
            .with_context(|| format!("{}:{}", path.display(), number + 1))?;
    }
    Ok(())
}

const ENV_KEYS: [&str; 6] = [
    "proposal_count",
    "margin_fraction",
    "superpixel_count",
    "border_ratio",
    "rescale_percentile",
    "proposals_file",
];

fn apply_env(cfg: &mut PipelineConfig) -> Result<()> {
    for key in ENV_KEYS {
        let var = format!("SALDET_{}", key.to_uppercase());
        if let Ok(value) = std::env::var(&var) {
            set_key(cfg, key, &value).with_context(|| var)?;
        }
    }
    Ok(())
}

/// Builds the rayon pool used for batch work; `None` means one worker per
/// logical core.
pub fn worker_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .context("building worker pool")
}
