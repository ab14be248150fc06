//! Reference values and brute-force oracles that the acceptance run checks
//! the library against. Nothing here calls the code paths it is used to
//! test, except to build inputs.

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::Command;

use knotforge::{catalog_get, ArcSpec, CoordFn, Interval, KnotCurve};

/// Degree-8 cosine reference polynomial, highest power first.
pub const PRINTED_COS: [f64; 9] =
    [-0.0000193235, 0.000485652, -0.00399024, 0.0081095, 0.0265068, 0.0163844, -0.509175, 0.00205416, 0.999921];

/// Degree-8 sine reference polynomial, highest power first.
pub const PRINTED_SIN: [f64; 9] = [
    8.73651067430188e-19,
    0.000144829,
    -0.00318496,
    0.0220637,
    -0.0322337,
    -0.125592,
    -0.0257364,
    1.00614,
    -0.000238495,
];

pub fn horner(high_first: &[f64], x: f64) -> f64 {
    high_first.iter().fold(0.0, |acc, c| acc * x + c)
}

/// Largest `|p - f|` on `n` uniform samples of `[0, 2 pi]`, ends included.
pub fn grid_error(p: impl Fn(f64) -> f64, f: impl Fn(f64) -> f64, n: usize) -> f64 {
    (0..n).map(|k| TAU * k as f64 / (n - 1) as f64).map(|x| (p(x) - f(x)).abs()).fold(0.0, f64::max)
}

/// Rotation of `p` by `phi` about the line through `o` with unit direction
/// `k`, in Rodrigues' vector form.
pub fn rodrigues(p: [f64; 3], o: [f64; 3], k: [f64; 3], phi: f64) -> [f64; 3] {
    let v = [p[0] - o[0], p[1] - o[1], p[2] - o[2]];
    let kxv = [k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]];
    let kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    let (c, s) = (phi.cos(), phi.sin());
    [0, 1, 2].map(|i| o[i] + v[i] * c + kxv[i] * s + k[i] * kv * (1.0 - c))
}

pub fn sup_diff<const D: usize>(a: &[[f64; D]], b: &[[f64; D]]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).flat_map(|(p, q)| (0..D).map(move |k| (p[k] - q[k]).abs())).fold(0.0, f64::max)
}

/// `(t^3 - 3t, t^4 - 4t^2, t^5 - 10t)`.
pub fn canonical_trefoil() -> KnotCurve {
    catalog_get("trefoil-long").expect("catalog").swap_yz()
}

/// The figure-eight arc with height `20 + 13t^2 - t^4`, whose roots are
/// `+-3.7934`.
pub fn figure_eight_plus() -> KnotCurve {
    let mut k = catalog_get("figure8-arc").expect("catalog");
    k.name = "figure8-plus13".into();
    k.z = CoordFn::poly(&[20.0, 0.0, 13.0, 0.0, -1.0]);
    k
}

/// Arc of `(t^2, t^4, t - t^3)` on `[-1, 1]`. Its spin satisfies
/// `F(t, s) = F(-t, s + pi)`, so it covers a sheet twice.
pub fn control_arc() -> ArcSpec {
    let curve = KnotCurve::new(
        "control",
        CoordFn::poly(&[0.0, 0.0, 1.0]),
        CoordFn::poly(&[0.0, 0.0, 0.0, 0.0, 1.0]),
        CoordFn::poly(&[0.0, 1.0, 0.0, -1.0]),
        Interval::of(-1.0, 1.0),
    );
    ArcSpec { curve, a: -1.0, b: 1.0 }
}

/// Path of the `knotforge` executable.
///
/// `KNOTFORGE_BIN` wins. Otherwise the binary next to the running test's
/// profile directory is used, which a workspace test run has just built.
/// Failing both, the CLI is built into a private target directory.
pub fn cli_binary() -> Result<PathBuf, String> {
    if let Some(p) = std::env::var_os("KNOTFORGE_BIN") {
        return Ok(PathBuf::from(p));
    }
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let profile_dir = exe.parent().and_then(|d| d.parent()).ok_or("test binary has no profile directory")?;
    let name = format!("knotforge{}", std::env::consts::EXE_SUFFIX);
    let sibling = profile_dir.join(&name);
    if sibling.is_file() {
        return Ok(sibling);
    }
    let target = profile_dir.join("validation-cli");
    let cargo = std::env::var_os("CARGO").unwrap_or_else(|| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "--quiet", "-p", "knotforge-cli", "--bin", "knotforge", "--target-dir"])
        .arg(&target)
        .status()
        .map_err(|e| format!("running cargo: {e}"))?;
    if !status.success() {
        return Err(format!("building knotforge-cli failed: {status}"));
    }
    Ok(target.join("debug").join(name))
}
