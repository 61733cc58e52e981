//! `saldet eval`: score saliency maps against a ground-truth dataset.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use crate::config::{worker_pool, PipelineArgs};
use crate::manifest::{ManifestEntry, RunManifest};
use saldet::eval::{evaluate, DatasetLayout, DatasetPair, EvalItem, GroundTruthMask};

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Dataset root directory.
    #[arg(long)]
    pub dataset: PathBuf,

    /// How images and masks are arranged: msra1000, icoseg, or paired-dirs.
    #[arg(long, default_value = "paired-dirs")]
    pub layout: String,

    /// Directory of precomputed saliency PNGs named by image stem.
    #[arg(long, conflicts_with = "detect", value_name = "DIR")]
    pub maps: Option<PathBuf>,

    /// Run the detector on the dataset images instead of reading maps.
    #[arg(long)]
    pub detect: bool,

    /// Output directory for report.csv, curve.csv, and report.json.
    #[arg(short, long, default_value = "saldet-eval")]
    pub out: PathBuf,

    /// Worker threads (default: one per logical core).
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

fn score_pair(
    pair: &DatasetPair,
    maps: Option<&PathBuf>,
    cfg: &saldet::PipelineConfig,
) -> saldet::Result<EvalItem> {
    let mask = GroundTruthMask::load(&pair.mask)?;
    let saliency = match maps {
        Some(dir) => saldet::io::load_gray_map(dir.join(format!("{}.png", pair.name)))?,
        None => {
            let frame = saldet::io::load_rgb(&pair.image)?;
            saldet::detect(&frame, cfg)?.saliency
        }
    };
    Ok(EvalItem {
        name: pair.name.clone(),
        saliency,
        mask,
    })
}

pub fn run(args: &EvalArgs) -> Result<()> {
    if args.maps.is_none() && !args.detect {
        bail!("pass --maps DIR for precomputed maps or --detect to run the pipeline");
    }
    let layout: DatasetLayout = args.layout.parse()?;
    let cfg = args.pipeline.resolve()?;
    let pairs = saldet::eval::load_dataset(&args.dataset, layout)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;

    let started = Instant::now();
    let pool = worker_pool(args.jobs)?;
    let scored: Vec<(ManifestEntry, Option<EvalItem>)> = pool.install(|| {
        pairs
            .par_iter()
            .map(|pair| match score_pair(pair, args.maps.as_ref(), &cfg) {
                Ok(item) => (
                    ManifestEntry {
                        name: pair.name.clone(),
                        input: pair.image.display().to_string(),
                        outputs: Vec::new(),
                        status: "ok".into(),
                        total_ms: None,
                    },
                    Some(item),
                ),
                Err(err) => {
                    log::error!("{}: {err}", pair.name);
                    (
                        ManifestEntry {
                            name: pair.name.clone(),
                            input: pair.image.display().to_string(),
                            outputs: Vec::new(),
                            status: err.to_string(),
                            total_ms: None,
                        },
                        None,
                    )
                }
            })
            .collect()
    });

    let (mut entries, items): (Vec<_>, Vec<_>) = scored.into_iter().unzip();
    let items: Vec<EvalItem> = items.into_iter().flatten().collect();
    let report = evaluate(items)?;

    let echo = serde_json::json!({
        "pipeline": cfg,
        "layout": args.layout,
        "mode": if args.maps.is_some() { "maps" } else { "detect" },
    });
    let report_csv = args.out.join("report.csv");
    let curve_csv = args.out.join("curve.csv");
    let report_json = args.out.join("report.json");
    std::fs::write(&report_csv, report.per_image_csv())?;
    std::fs::write(&curve_csv, report.curve_csv())?;
    std::fs::write(&report_json, report.to_json(&echo))?;
    for entry in &mut entries {
        if entry.is_ok() {
            entry.outputs.push(report_csv.display().to_string());
        }
    }
    println!(
        "{} images: mean F_beta {:.4}, mean MAE {:.4}, mean precision {:.4}, mean recall {:.4}",
        report.image_count,
        report.mean_f_beta,
        report.mean_mae,
        report.mean_precision,
        report.mean_recall
    );

    let mut manifest = RunManifest::new(echo);
    manifest.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    manifest.entries = entries;
    manifest.write(&args.out.join("manifest.json"))?;

    let failed = manifest.entries.iter().filter(|e| !e.is_ok()).count();
    if failed > 0 {
        bail!("{failed} of {} pairs failed", manifest.entries.len());
    }
    Ok(())
}
