//! `hmcolor`: filtering, compositing, shading, light fitting and property
//! checks from the command line.
//!
//! Exit codes: 0 on success, 1 on usage, IO or domain errors, 2 when
//! `verify` finds a failing property.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hmcolor::imageio::{DisplayMode, FileFormat};
use hmcolor::Exponent;

#[derive(Parser, Debug)]
#[command(name = "hmcolor", version, about = "Hölder-Minkowski color operations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Power-mean filtering of an image, optionally as a pipeline of stages.
    Filter(FilterArgs),
    /// Combine a foreground and a background image.
    Composite(CompositeArgs),
    /// Render a unit sphere under a light preset.
    Shade(ShadeArgs),
    /// Fit linear or bilinear light models to integer colors.
    Solve(SolveArgs),
    /// Run the randomized property suites.
    Verify(VerifyArgs),
    /// Re-encode an image, optionally through a material matrix.
    Convert(ConvertArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct OutputArgs {
    /// Output encoding: png, png16 or pfm.
    #[arg(long, default_value = "png", value_parser = parse_format)]
    format: FileFormat,
    /// How amplitudes outside [0, 1] are shown in PNG output.
    #[arg(long, default_value = "clamp", value_parser = parse_display)]
    display: DisplayMode,
}

#[derive(Args, Debug)]
struct FilterArgs {
    /// Input stem: reads `<stem>.amp.png|pfm` and `<stem>.phase.*` if present.
    #[arg(long = "in")]
    input: PathBuf,
    /// Kernel for every `--p` stage: `box:N` or a kernel file.
    #[arg(long, default_value = "box:1")]
    kernel: String,
    /// Exponent of a stage; repeat for a pipeline. `inf`/`-inf` dilate/erode.
    #[arg(long = "p", allow_hyphen_values = true, value_parser = parse_exponent)]
    p: Vec<Exponent>,
    /// Extra stage `p=<exp>,kernel=<box:N|file>`, run after the `--p` stages.
    #[arg(long = "stage", allow_hyphen_values = true)]
    stages: Vec<String>,
    /// Output stem.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightMode {
    /// Each layer's alpha weights every channel.
    Alpha,
    /// Per-channel weights from a K-channel `.w.pfm`.
    Channels,
}

#[derive(Args, Debug)]
struct CompositeArgs {
    /// Foreground stem; an optional `<stem>.w.pfm` supplies alpha.
    #[arg(long)]
    fg: PathBuf,
    /// Background stem.
    #[arg(long)]
    bg: PathBuf,
    /// over, addphase, add, mul, max, min or hm:<p>.
    #[arg(long, default_value = "over", allow_hyphen_values = true)]
    mode: String,
    /// Scale applied to the sum in `addphase` mode.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    weight: f64,
    /// Weight source for the blend functions.
    #[arg(long, value_enum, default_value = "alpha")]
    weights: WeightMode,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ShadeArgs {
    /// tetrahedron, octahedron, grid3x3 or pair.
    #[arg(long)]
    preset: Option<String>,
    /// Exponent; finite nonzero, `inf` or `-inf`.
    #[arg(long = "p", allow_hyphen_values = true, value_parser = parse_exponent)]
    p: Option<Exponent>,
    /// Image width and height in pixels.
    #[arg(long)]
    size: Option<usize>,
    /// Scene file of `key = value` lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Raise zero diffuse terms to 1e-6 so negative exponents are defined.
    #[arg(long)]
    lift: bool,
    /// Also write the two-light terminator profile as CSV.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    Linear,
    Bilinear,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum)]
    mode: SolveMode,
    /// Colors as comma-separated components: two for linear, four for
    /// bilinear (c00 c01 c10 c11).
    #[arg(long, num_args = 1.., required = true, allow_hyphen_values = true)]
    colors: Vec<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random cases per suite (per exponent for the algebraic laws).
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    /// Run only the named suites.
    #[arg(long = "suite")]
    suites: Vec<String>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Material matrix file applied to every pixel.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse().map_err(|e: hmcolor::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<FileFormat, String> {
    s.parse().map_err(|e: hmcolor::Error| e.to_string())
}

fn parse_display(s: &str) -> Result<DisplayMode, String> {
    s.parse().map_err(|e: hmcolor::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Filter(a) => commands::filter(a),
        Command::Composite(a) => commands::composite(a),
        Command::Shade(a) => commands::shade(a),
        Command::Solve(a) => commands::solve(a),
        Command::Verify(a) => commands::verify(a),
        Command::Convert(a) => commands::convert(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
