//! `saldet synth`: write a synthetic benchmark dataset (paired-dirs layout)
//! with exact ground-truth masks.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};

use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct SynthArgs {
    /// Dataset root; img/ and gt/ are created inside.
    #[arg(short, long)]
    pub out: PathBuf,

    /// Number of frames to generate.
    #[arg(long, default_value_t = 50)]
    pub count: u32,

    /// Stream seed; the same seed reproduces the dataset byte for byte.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,

    /// Frame width in pixels.
    #[arg(long, default_value_t = 160)]
    pub width: u32,

    /// Frame height in pixels.
    #[arg(long, default_value_t = 120)]
    pub height: u32,
}

pub fn run(args: &SynthArgs) -> Result<()> {
    if args.count == 0 {
        bail!("count must be at least 1");
    }
    let started = Instant::now();
    saldet::synth::generate(&args.out, args.count, args.seed, args.width, args.height)
        .with_context(|| format!("generating into {}", args.out.display()))?;

    let mut manifest = RunManifest::new(serde_json::json!({
        "count": args.count,
        "seed": args.seed,
        "width": args.width,
        "height": args.height,
    }));
    manifest.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    manifest.write(&args.out.join("manifest.json"))?;
    println!(
        "{} frames ({}x{}) under {}",
        args.count,
        args.width,
        args.height,
        args.out.display()
    );
    Ok(())
}
