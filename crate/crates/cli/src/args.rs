use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "phasespace",
    version,
    about = "Wigner functions, tomography, Weyl quantization and spin-½ quasi-probabilities"
)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Planck constant.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    /// Threshold override: VALUE for every upper-bound check, or NAME=VALUE for one check (repeatable).
    #[arg(long, global = true)]
    pub tol: Vec<String>,
    /// Directory for CSV and heatmap artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat key=value file with default flag values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Wigner function on a phase-space grid.
    Wigner(WignerArgs),
    /// Characteristic function ⟨ψ|e^{-i(αX+βP)}|ψ⟩.
    Charfn(CharfnArgs),
    /// Distribution of z = cos θ·x + sin θ·p.
    Marginal(MarginalArgs),
    /// Reconstruction from marginals along equispaced directions.
    Tomo(TomoArgs),
    /// Modify a Wigner function without changing its x and p marginals.
    Tamper(TamperArgs),
    /// Compare ⟨ψ|g(X,P)|ψ⟩ with the phase-space average of g.
    WeylCheck(WeylArgs),
    /// Spin-½ quasi-probabilities for Z and X.
    Spin(SpinArgs),
    /// Negative volume of a list of weights or of a Wigner function.
    Negativity(NegativityArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct StateArg {
    /// gaussian:x0,p0,sigma | hermite:n | file:PATH
    #[arg(long, default_value = "hermite:0")]
    pub state: String,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    /// Defaults to the x range when only that is given.
    #[arg(long, allow_hyphen_values = true)]
    pub pmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pmax: Option<f64>,
    /// Points per axis.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Direct,
    Charfn,
}

#[derive(Args, Debug)]
pub struct WignerArgs {
    #[command(flatten)]
    pub state: StateArg,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Route::Direct)]
    pub route: Route,
}

#[derive(Args, Debug)]
pub struct CharfnArgs {
    #[command(flatten)]
    pub state: StateArg,
    /// Comma-separated α values.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub alpha: String,
    /// Comma-separated β values.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub beta: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Quantum,
    Wigner,
}

#[derive(Args, Debug)]
pub struct MarginalArgs {
    #[command(flatten)]
    pub state: StateArg,
    /// Direction angle; z = cos θ·x + sin θ·p.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub theta: f64,
    #[arg(long, value_enum, default_value_t = Source::Quantum)]
    pub source: Source,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug)]
pub struct TomoArgs {
    #[command(flatten)]
    pub state: StateArg,
    #[arg(long, default_value_t = 64)]
    pub ndirs: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Zero-fill angular gaps instead of failing.
    #[arg(long)]
    pub allow_gaps: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TamperKind {
    Rect,
    Smooth,
}

#[derive(Args, Debug)]
pub struct TamperArgs {
    #[command(flatten)]
    pub state: StateArg,
    #[arg(long, value_enum)]
    pub kind: TamperKind,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    /// Rectangle half width / smooth x exponent.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Rectangle half height / smooth p exponent.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Number of equispaced test directions.
    #[arg(long, default_value_t = 8)]
    pub ndirs: usize,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    /// x | p | x2 | p2 | xp | x2p2 | gauss
    #[arg(long, default_value = "xp")]
    pub g: String,
    #[command(flatten)]
    pub state: StateArg,
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    /// Damping of polynomial symbols.
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Also write the operator matrix as CSV.
    #[arg(long)]
    pub matrix: bool,
}

#[derive(Args, Debug)]
pub struct SpinArgs {
    /// Amplitudes c0,c1 (complex allowed, e.g. 0.6,0.8i); rescaled to unit norm.
    #[arg(long, default_value = "1,0")]
    pub state: String,
    /// VALUE | feynman | neg-feynman
    #[arg(long, allow_hyphen_values = true, default_value = "feynman")]
    pub t: String,
}

#[derive(Args, Debug)]
pub struct NegativityArgs {
    /// Comma-separated weights.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "state")]
    pub values: Option<String>,
    /// State whose Wigner function is measured.
    #[arg(long)]
    pub state: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {}
