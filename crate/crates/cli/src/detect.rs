//! `saldet detect`: saliency maps for one image or a directory.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use crate::config::{worker_pool, PipelineArgs};
use crate::manifest::{ManifestEntry, RunManifest};
use saldet::pipeline::write_sidecar;
use saldet::PipelineConfig;

#[derive(Debug, clap::Args)]
pub struct DetectArgs {
    /// Image file or directory of images.
    pub input: PathBuf,

    /// Output directory.
    #[arg(short, long, default_value = "saldet-out")]
    pub out: PathBuf,

    /// Also write the cue maps (objectness, foreground, their product,
    /// compactness), the superpixel label image, and a per-region CSV.
    #[arg(long)]
    pub dump_intermediates: bool,

    /// Worker threads for batch runs (default: one per logical core).
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

const INPUT_EXTENSIONS: [&str; 4] = ["jpg", "jpeg", "png", "bmp"];

pub fn collect_inputs(input: &Path) -> Result<Vec<PathBuf>> {
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    if !input.is_dir() {
        bail!("{} is neither a file nor a directory", input.display());
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(input)
        .with_context(|| format!("reading {}", input.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|ext| INPUT_EXTENSIONS.iter().any(|k| ext.eq_ignore_ascii_case(k)))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no images found under {}", input.display());
    }
    Ok(files)
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("unnamed")
        .to_string()
}

fn process_one(
    input: &Path,
    out_dir: &Path,
    cfg: &PipelineConfig,
    dump: bool,
) -> Result<(Vec<String>, f64)> {
    let frame = saldet::io::load_rgb(input)?;
    let result = saldet::detect(&frame, cfg)?;
    let stem = stem_of(input);
    let mut outputs = Vec::new();

    let mut save = |suffix: &str, map: &saldet::ScalarMap| -> saldet::Result<()> {
        let path = out_dir.join(format!("{stem}{suffix}.png"));
        saldet::io::save_gray_png(&path, map)?;
        outputs.push(path.display().to_string());
        Ok(())
    };
    save("", &result.saliency)?;
    if dump {
        save("_ob", &result.objectness)?;
        save("_fg", &result.foreground)?;
        save("_of", &result.combined)?;
        save("_cn", &result.compactness)?;
    }

    let sidecar = out_dir.join(format!("{stem}.json"));
    write_sidecar(&sidecar, &result, cfg)?;
    outputs.push(sidecar.display().to_string());

    if dump {
        if let Some(seg) = &result.segmentation {
            let labels = out_dir.join(format!("{stem}_labels.png"));
            saldet::io::save_labels_png(&labels, seg.width(), seg.height(), seg.labels())?;
            outputs.push(labels.display().to_string());

            let mut csv = String::from("region,pixels,support,compactness\n");
            for (i, region) in seg.regions().iter().enumerate() {
                csv.push_str(&format!(
                    "{i},{},{:.6},{:.6}\n",
                    region.pixel_count, result.region_support[i], result.region_compactness[i]
                ));
            }
            let regions = out_dir.join(format!("{stem}_regions.csv"));
            std::fs::write(&regions, csv)
                .with_context(|| format!("writing {}", regions.display()))?;
            outputs.push(regions.display().to_string());
        }
    }
    Ok((outputs, result.total_ms))
}

pub fn run(args: &DetectArgs) -> Result<()> {
    let cfg = args.pipeline.resolve()?;
    let inputs = collect_inputs(&args.input)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;

    let started = Instant::now();
    let pool = worker_pool(args.jobs)?;
    let entries: Vec<ManifestEntry> = pool.install(|| {
        inputs
            .par_iter()
            .map(|input| {
                let (outputs, status, total_ms) =
                    match process_one(input, &args.out, &cfg, args.dump_intermediates) {
                        Ok((outputs, ms)) => (outputs, "ok".to_string(), Some(ms)),
                        Err(err) => {
                            log::error!("{}: {err:#}", input.display());
                            (Vec::new(), format!("{err:#}"), None)
                        }
                    };
                ManifestEntry {
                    name: stem_of(input),
                    input: input.display().to_string(),
                    outputs,
                    status,
                    total_ms,
                }
            })
            .collect()
    });

    let mut manifest = RunManifest::new(serde_json::to_value(&cfg)?);
    manifest.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    manifest.entries = entries;
    manifest.write(&args.out.join("manifest.json"))?;

    let failed = manifest.entries.iter().filter(|e| !e.is_ok()).count();
    if failed > 0 {
        bail!("{failed} of {} images failed", manifest.entries.len());
    }
    Ok(())
}
