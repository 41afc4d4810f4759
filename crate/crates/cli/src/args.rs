use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "kakeya-lab", version, about = "Tube packings, Littlewood-Paley diagnostics and multiplier bounds")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Grid size for FFT based computations.
    #[arg(long, global = true, default_value_t = 2048)]
    pub grid: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tube families and compression curves.
    #[command(subcommand)]
    Tubes(TubesCmd),
    /// Littlewood-Paley analysis of sampled functions.
    #[command(subcommand)]
    Lp(LpCmd),
    /// Closed-form bound evaluators.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Multiplier certificates and checks.
    #[command(subcommand)]
    Multiplier(MultiplierCmd),
    /// Spherical distortion, Schur multipliers and circle LP data.
    #[command(subcommand)]
    Sphere(SphereCmd),
}

#[derive(Debug, Subcommand)]
pub enum TubesCmd {
    /// Perron-tree family of 2^k tubes with disjoint translates.
    Keich(KeichArgs),
    /// Anneal N tubes towards a smaller union.
    Optimize(OptimizeArgs),
    /// Compression ratio against width over a range of k.
    Fcurve(FcurveArgs),
    /// Compression ratio and relaxed score of a stored family.
    Ratio(RatioArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct KeichArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value = "2,3")]
    pub window: String,
}

#[derive(Debug, Args, Serialize)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveModeArg {
    Keich,
    Optimized,
    Separated,
}

#[derive(Debug, Args, Serialize)]
pub struct FcurveArgs {
    /// `4..9` (inclusive) or a comma list.
    #[arg(long)]
    pub ks: String,
    #[arg(long, value_enum, default_value = "keich")]
    pub mode: CurveModeArg,
    /// Raster cells per tube width.
    #[arg(long, default_value_t = 16.0)]
    pub resolution: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RatioArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value_t = 16.0)]
    pub resolution: f64,
    /// Skip the translate disjointness requirement.
    #[arg(long)]
    pub no_enforce: bool,
}

#[derive(Debug, Subcommand)]
pub enum LpCmd {
    /// Per-level Littlewood-Paley pieces as long CSV.
    Coeffs(CoeffsArgs),
    /// Level sup norms and their decay trend.
    Classify(ClassifyArgs),
    /// Second-difference modulus next to its level-sum majorant.
    Zygmund(ZygmundArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CoeffsArgs {
    /// CSV with columns x, re, im (im optional).
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub levels: u32,
    /// Treat the samples as one period.
    #[arg(long)]
    pub periodic: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub levels: u32,
    #[arg(long)]
    pub periodic: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ZygmundArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub h: f64,
    #[arg(long)]
    pub periodic: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Euclid,
    Sphere,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Level bounds for W_n * m over n.
    Wn(WnArgs),
    /// Modulus of continuity of the profile.
    Modulus(ModulusArgs),
    /// Whether the level bounds are summable.
    Integrable(IntegrableArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct WnArgs {
    /// `log:a`, `pow:e` or `file:curve.csv`; repeat for several models.
    #[arg(long, required = true)]
    pub fd: Vec<String>,
    #[arg(long)]
    pub p: f64,
    /// `1..20` (inclusive) or a comma list.
    #[arg(long)]
    pub n: String,
    #[arg(long, value_enum, default_value = "euclid")]
    pub domain: Domain,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub theta: f64,
    /// Operator norm input (`‖T‖` or the Schur norm).
    #[arg(long, default_value_t = 1.0)]
    pub norm: f64,
    #[arg(long, default_value_t = 1.0)]
    pub cd: f64,
    /// Also write the sweep as a long-format CSV.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModulusArgs {
    #[arg(long)]
    pub fd: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "euclid")]
    pub domain: Domain,
    #[arg(long, required_if_eq("domain", "euclid"))]
    pub gap: Option<f64>,
    #[arg(long, required_if_eq("domain", "sphere"))]
    pub s: Option<f64>,
    #[arg(long, required_if_eq("domain", "sphere"))]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub norm: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightArg {
    None,
    Loglog,
}

#[derive(Debug, Args, Serialize)]
pub struct IntegrableArgs {
    #[arg(long)]
    pub fd: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "none")]
    pub weight: WeightArg,
}

#[derive(Debug, Subcommand)]
pub enum MultiplierCmd {
    /// Certified lower bound for a radial multiplier from a tube family.
    Certify(CertifyArgs),
    /// Change-of-variable check between two scales.
    CovCheck(CovArgs),
    /// Square-function gain for almost disjoint families.
    Relaxed(RelaxedArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FamilySource {
    /// Family JSON file; repeat for a sweep.
    #[arg(long)]
    pub family: Vec<PathBuf>,
    /// Build Keich families for these `k` instead (`4,6,8` or `4..8`).
    #[arg(long, conflicts_with = "family")]
    pub keich: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub source: FamilySource,
    /// `ball`, `step[:t0]`, `const:c`, `linear` or `file:m.csv`.
    #[arg(long, default_value = "ball")]
    pub symbol: String,
    /// Values above 2 are replaced by the conjugate exponent.
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 4096.0)]
    pub r: f64,
    /// World raster spacing as a fraction of δ.
    #[arg(long, default_value_t = 1.0 / 16.0)]
    pub raster_fraction: f64,
    /// Also write `k, lower_bound, slack_min` rows.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CovArgs {
    #[arg(long)]
    pub r1: f64,
    #[arg(long)]
    pub r2: f64,
    #[arg(long, default_value = "ball")]
    pub m: String,
    /// Sample spacing of the default `F = ĥ` and `G = |ρ̂|²`.
    #[arg(long, default_value_t = 0.05)]
    pub spacing: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RelaxedArgs {
    #[command(flatten)]
    pub source: FamilySource,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    pub raster_fraction: f64,
}

#[derive(Debug, Subcommand)]
pub enum SphereCmd {
    /// Fitted distortion constants of the stereographic map.
    Distortion(DistortionArgs),
    /// Sampled Schur multiplier lower bound on S_p.
    Msp(MspArgs),
    /// Circle Littlewood-Paley pieces of m(cos θ) as long CSV.
    Lp(SphereLpArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DistortionArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub theta: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 10.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    Fibonacci,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct MspArgs {
    #[arg(long)]
    pub m: String,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
    /// Value used for `m(1)` on the diagonal.
    #[arg(long, default_value_t = 1.0)]
    pub diag: f64,
    #[arg(long, value_enum, default_value = "fibonacci")]
    pub sampling: Sampling,
    /// Sphere dimension for random sampling.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SphereLpArgs {
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub levels: u32,
    /// Samples on the circle; defaults to a power of two resolving level N.
    #[arg(long)]
    pub len: Option<usize>,
}
