//! `saldet proposals`: dump the generator's scored windows as CSV, in the
//! same format `--proposals-file` reads back.

use std::path::PathBuf;

use anyhow::{Context, Result};

use saldet::objectness::{generate_proposals, proposals_to_csv};

#[derive(Debug, clap::Args)]
pub struct ProposalsArgs {
    /// Image to run the generator on.
    pub image: PathBuf,

    /// Number of windows to keep.
    #[arg(short = 'n', long, default_value_t = 1000)]
    pub count: usize,

    /// Output CSV path; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &ProposalsArgs) -> Result<()> {
    let frame = saldet::io::load_rgb(&args.image)?;
    let set = generate_proposals(&frame, args.count)?;
    let csv = proposals_to_csv(&set);
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    Ok(())
}
