mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CurveArg, SpaceSurfaceArg, SurfaceArg};

#[derive(Parser, Debug)]
#[command(name = "neutral-geom", version, about = "Checks on neutral (2,2) geometry: compactification, line spaces, intersection tori")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Overrides the tolerance of every check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomly drawn inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// CSV artifact path (legendrian, reeb, intersect).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Sample count or grid resolution; meaning depends on the subcommand.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Omit the timestamp so output is byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Conformal compactification of R^{2,2}: conformality, round trip, boundary linking.
    Compactify {
        /// Sample points are drawn with |x_i| ≤ radius.
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
    },
    /// Ricci tensor of the Einstein static metric at (p, q, θ₁, θ₂).
    Curvature {
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
    },
    /// Tangent hypersurface of a convex surface in the space of oriented lines of R³.
    Linespace(FlatPoint),
    /// Contact defects of ω⁺ and ω⁻ on the tangent hypersurface.
    Contact(FlatPoint),
    /// Legendrian classification of a knot of lines along a curve on the surface.
    Legendrian {
        #[arg(long, default_value = "ellipsoid:2,1.5,1")]
        surface: SurfaceArg,
        /// principal-x, principal-y, or circle:cx,cy,r.
        #[arg(long, default_value = "principal-x")]
        curve: CurveArg,
        /// tangent, normal, beta, or rotated:<angle>.
        #[arg(long, default_value = "tangent")]
        choice: String,
        /// Read the knot from a CSV file instead of building it.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Treat the input knot as closed.
        #[arg(long)]
        closed: bool,
    },
    /// Reeb flow of ω⁺ compared with the shifted geodesic flow.
    Reeb {
        #[command(flatten)]
        point: FlatPoint,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Tangent hypersurface of a surface in S³ or H³.
    Spaceform {
        /// sphere (ε = 1) or hyperbolic (ε = −1).
        #[arg(long, default_value = "sphere")]
        sign: String,
        /// latitude or clifford.
        #[arg(long, default_value = "latitude")]
        surface: SpaceSurfaceArg,
        /// Latitude radius ρ, or Clifford parameter r.
        #[arg(long, default_value_t = 0.9)]
        rho: f64,
        /// Patch coordinates s¹,s².
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Intersection of the tangent hypersurfaces of two round spheres.
    Intersect {
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        /// Distance between centres.
        #[arg(long)]
        l: f64,
    },
    /// Parity condition for a compact neutral 4-manifold with Euler number χ and signature τ.
    Parity {
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, allow_hyphen_values = true)]
        tau: i64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FlatPoint {
    /// ellipsoid:a,b,c or sphere:ρ[,cx,cy,cz].
    #[arg(long, default_value = "ellipsoid:2,1.5,1")]
    pub surface: SurfaceArg,
    /// Direction coordinate ν as re,im.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub nu: Option<Vec<f64>>,
    /// Line angle A.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.common) {
        Ok(report) => {
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            if let Err(e) = std::io::stdout().write_all(text.as_bytes()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
