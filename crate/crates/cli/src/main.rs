//! `saldet`: batch saliency detection, scoring, and dataset tooling.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod config;
mod detect;
mod eval;
mod manifest;
mod proposals;
mod synth;

#[derive(Parser)]
#[command(name = "saldet", version, about = "Salient-object detection and benchmarking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute saliency maps for an image or a directory of images.
    Detect(detect::DetectArgs),
    /// Score saliency maps against ground-truth masks.
    Eval(eval::EvalArgs),
    /// Dump the window proposals the generator produces for one image.
    Proposals(proposals::ProposalsArgs),
    /// Write a synthetic benchmark dataset with exact masks.
    Synth(synth::SynthArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Detect(args) => detect::run(args),
        Command::Eval(args) => eval::run(args),
        Command::Proposals(args) => proposals::run(args),
        Command::Synth(args) => synth::run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
