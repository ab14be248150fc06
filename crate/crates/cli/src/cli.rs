use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use knotforge::Interval;

#[derive(Parser, Debug)]
#[command(
    name = "knotforge",
    version,
    about = "Parametrized knotted surfaces in R^4: spun and twist-spun 2-knots, Tube-map tori, knotted discs and planes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the built-in knots with their coordinate functions.
    Catalog,
    /// Crossings of the (x, y) projection: t_over, t_under, x, y.
    Crossings {
        #[command(flatten)]
        knot: KnotArgs,
    },
    /// Artin spin of a knotted arc: (f, g, h cos s, h sin s).
    Spin {
        #[command(flatten)]
        args: SpinArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// d-twist spin: the arc is rotated d times about the chord PQ per turn.
    TwistSpin {
        #[command(flatten)]
        args: TwistArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ribbon torus from a welded diagram through the Tube map.
    Tube {
        #[command(flatten)]
        args: TubeArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Half-spun knotted disc bounded by K # K*.
    Disc {
        #[command(flatten)]
        args: DiscArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Knotted plane, from the disc and two homotopy collars (1) or from an
    /// arc with one end at infinity (2).
    Plane {
        #[command(flatten)]
        args: PlaneArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Singular stages u of the homotopy h + u^2 t, one per crossing pair.
    Singular {
        #[command(flatten)]
        knot: KnotArgs,
    },
    /// Chebyshev interpolant of cos or sin in the monomial basis.
    Approx(ApproxArgs),
    /// Sampled injectivity and seam checks of a surface.
    Verify(VerifyArgs),
}

/// Where the knot comes from and how it is adjusted before use.
#[derive(Args, Debug, Clone)]
pub struct KnotArgs {
    /// Built-in knot name or a knot JSON file.
    #[arg(long)]
    pub knot: Option<String>,
    /// Knot JSON file (same as passing the file to --knot).
    #[arg(long, conflicts_with = "knot")]
    pub spec: Option<PathBuf>,
    /// Swap the y and z coordinates, e.g. to put the odd-degree polynomial
    /// of a long knot in the height slot.
    #[arg(long)]
    pub reorder: bool,
    /// Add a constant to the height coordinate z.
    #[arg(long, allow_negative_numbers = true)]
    pub lift: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Sample counts in t and s, as NxM.
    #[arg(long, default_value = "64x64", value_parser = parse_samples)]
    pub samples: (usize, usize),
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Kept axes for OBJ/STL output.
    #[arg(long, default_value = "xyz", value_parser = ["xyz", "xyw", "xzw", "yzw"])]
    pub project: String,
    /// Output mesh: .obj or .stl (projected) or .csv (all four coordinates).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SpinArgs {
    #[command(flatten)]
    pub knot: KnotArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Replace cos s and sin s by Chebyshev interpolants of this degree.
    #[arg(long, default_value = "off", value_parser = parse_degree)]
    pub polynomialize: Degree,
}

#[derive(Args, Debug, Clone)]
pub struct TwistArgs {
    #[command(flatten)]
    pub knot: KnotArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Number of twists per full spin.
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    /// Axis endpoint parameters P = K(t1), Q = K(t2), at equal height.
    #[arg(long, requires = "t2", allow_negative_numbers = true)]
    pub t1: Option<f64>,
    #[arg(long, requires = "t1", allow_negative_numbers = true)]
    pub t2: Option<f64>,
    /// Smooth bump B(t): 0 for t^2 >= d1, 1 for t^2 <= d2.
    #[arg(long, requires = "d2")]
    pub d1: Option<f64>,
    #[arg(long, requires = "d1")]
    pub d2: Option<f64>,
    /// Parameter interval holding the knotted part, as lo,hi; defaults to
    /// the padded crossing span.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub span: Option<Interval>,
    /// Evaluate the rotated coordinates with the printed closed form
    /// (g21 in the second coordinate) instead of the rotation matrix.
    #[arg(long)]
    pub eq_verbatim: bool,
    /// Also compare the d = 0 surface with the plain spin and report the
    /// largest coordinate difference on the sample grid.
    #[arg(long)]
    pub verify_reduction: bool,
    /// Replace every t-factor and the trigonometric s-factors by Chebyshev
    /// interpolants of this degree.
    #[arg(long, default_value = "off", value_parser = parse_degree)]
    pub polynomialize: Degree,
}

#[derive(Args, Debug, Clone)]
pub struct TubeArgs {
    /// Closed base knot (ignored with --spec).
    #[arg(long, default_value = "torus-2-7")]
    pub knot: String,
    /// Welded diagram JSON file.
    #[arg(long, conflicts_with_all = ["knot", "weld"])]
    pub spec: Option<PathBuf>,
    /// Crossings to make welded, 1-based in order of first parameter.
    #[arg(long, value_parser = parse_weld, value_delimiter = ',', default_value = "2,4")]
    pub weld: Vec<usize>,
    /// Centre offset amplitude of the tubes.
    #[arg(long, default_value_t = 0.7)]
    pub r: f64,
    /// Shrink depth at classical crossings.
    #[arg(long, default_value_t = 1.0)]
    pub dc: f64,
    /// Displacement at welded crossings.
    #[arg(long, default_value_t = 5.0)]
    pub dw: f64,
    /// Bump width L; defaults to the value derived from the diagram.
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Scale the circle term by r as well.
    #[arg(long)]
    pub true_radius: bool,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug, Clone)]
pub struct DiscArgs {
    #[command(flatten)]
    pub knot: KnotArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug, Clone)]
pub struct PlaneArgs {
    #[command(flatten)]
    pub knot: KnotArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub construction: u8,
    /// Collar length R (construction 1); defaults to the smallest valid one.
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// Sampling window for t as lo,hi (construction 2).
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub window: Option<Interval>,
    /// Tan sampling cut-off in (0, 1) (construction 2).
    #[arg(long, default_value_t = knotforge::spin::TAN_DELTA)]
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TrigFn {
    Cos,
    Sin,
}

#[derive(Args, Debug, Clone)]
pub struct ApproxArgs {
    #[arg(long = "fn", value_enum, default_value = "cos")]
    pub func: TrigFn,
    #[arg(long, default_value_t = 8)]
    pub degree: usize,
    /// Interval as lo,hi; defaults to [0, 2 pi].
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub domain: Option<Interval>,
    /// Uniform samples used for the reported error.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Pairs closer than this many grid steps are neighbours.
    #[arg(long, default_value_t = knotforge::verify::DEFAULT_PARAM_GAP)]
    pub param_gap: f64,
    /// Distance threshold; defaults to 1e-3 of the bounding-box diagonal.
    #[arg(long)]
    pub min_dist: Option<f64>,
    /// Use the all-pairs checker instead of the spatial hash.
    #[arg(long)]
    pub brute: bool,
    #[command(subcommand)]
    pub surface: SurfaceCmd,
}

#[derive(Subcommand, Debug)]
pub enum SurfaceCmd {
    Spin(SpinArgs),
    TwistSpin(TwistArgs),
    Tube(TubeArgs),
    Disc(DiscArgs),
    Plane(PlaneArgs),
}

/// A flag combination clap cannot express; reported with exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn parse_samples(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let n: usize = a.trim().parse().map_err(|e| format!("bad sample count `{a}`: {e}"))?;
    let m: usize = b.trim().parse().map_err(|e| format!("bad sample count `{b}`: {e}"))?;
    if n < 2 || m < 2 {
        return Err(format!("need at least 2x2 samples, got {n}x{m}"));
    }
    Ok((n, m))
}

/// A Chebyshev degree, or `off`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degree(pub Option<usize>);

fn parse_degree(s: &str) -> Result<Degree, String> {
    if s == "off" {
        return Ok(Degree(None));
    }
    let d: usize = s.parse().map_err(|_| format!("expected a degree or `off`, got `{s}`"))?;
    if d > knotforge::poly::MAX_CHEB_DEGREE {
        return Err(format!("degree {d} exceeds {}", knotforge::poly::MAX_CHEB_DEGREE));
    }
    Ok(Degree(Some(d)))
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got `{s}`"))?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("bad bound `{a}`: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("bad bound `{b}`: {e}"))?;
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

fn parse_weld(s: &str) -> Result<usize, String> {
    let k: usize = s.trim().parse().map_err(|_| format!("expected a crossing number, got `{s}`"))?;
    if k == 0 {
        return Err("crossings are numbered from 1".into());
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_samples("64x32"), Ok((64, 32)));
        assert!(parse_samples("1x5").is_err());
        assert_eq!(parse_degree("off"), Ok(Degree(None)));
        assert_eq!(parse_degree("8"), Ok(Degree(Some(8))));
        assert!(parse_degree("65").is_err());
        assert_eq!(parse_interval("-1.5,2").unwrap(), Interval::of(-1.5, 2.0));
        assert!(parse_interval("2,1").is_err());
        assert!(parse_weld("0").is_err());
    }

    #[test]
    fn definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
