use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "rpr",
    version,
    about = "Kinematics workbench for the planar 3-RPR manipulator"
)]
pub struct Cli {
    /// Read every angle argument in degrees.
    #[arg(long, global = true)]
    pub deg: bool,
    /// Tolerance of the degeneracy tests on actuator-angle differences.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub angle_tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inverse kinematics of a platform pose.
    Ik(IkArgs),
    /// Direct kinematics of actuator angles.
    Dk(DkArgs),
    /// Evaluate a quantity over a grid and write CSV (and SVG).
    Sweep(SweepArgs),
    /// Trace the Cardanic curve of the third platform anchor.
    Trace(TraceArgs),
    /// Run the brute-force oracle suites.
    Verify(VerifyArgs),
    /// Classify one configuration.
    Singularity(SingularityArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct PoseArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ThetaArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t2: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t3: f64,
}

#[derive(Debug, Args)]
pub struct IkArgs {
    #[command(flatten)]
    pub pose: PoseArgs,
    /// Working mode per leg, e.g. `0,1,0`; all eight when omitted.
    #[arg(long, value_delimiter = ',')]
    pub branch: Option<Vec<u8>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Geometric,
    Both,
}

#[derive(Debug, Args)]
pub struct DkArgs {
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Joint,
    Cartesian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    #[value(name = "detA")]
    DetA,
    #[value(name = "detB")]
    DetB,
    #[value(name = "solutions")]
    Solutions,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub space: Space,
    #[arg(long, value_enum, default_value = "detA")]
    pub quantity: Quantity,
    /// Swept axis as `AXIS=MIN:MAX:COUNT` (joint: theta1..3, cartesian: x, y, phi).
    #[arg(long = "range", required = true, allow_hyphen_values = true)]
    pub ranges: Vec<String>,
    /// Pinned axis as `AXIS=VALUE`; unlisted axes are pinned to 0.
    #[arg(long = "fix", allow_hyphen_values = true)]
    pub fixed: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
    /// Sign map with the zero contour; needs exactly two swept axes.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t2: f64,
    #[arg(long, default_value_t = rpr_core::coupler::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    All,
    Dkp,
    Jacobian,
    Curve,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub scope: Scope,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Re-check the residuals of a CSV written by `trace` instead.
    #[arg(long)]
    pub curve_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SingularityArgs {
    #[arg(long, allow_negative_numbers = true, requires_all = ["t2", "t3"])]
    pub t1: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["t1", "t3"])]
    pub t2: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["t1", "t2"])]
    pub t3: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["y", "phi"])]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["x", "phi"])]
    pub y: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["x", "y"])]
    pub phi: Option<f64>,
    /// Working mode used when only a pose is given.
    #[arg(long, value_delimiter = ',')]
    pub branch: Option<Vec<u8>>,
}
