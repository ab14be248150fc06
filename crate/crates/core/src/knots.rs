//! Classical knot curves, knotted arcs, crossing detection and the catalog.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coordfn::{CoordFn, Trig};
use crate::error::{Error, Result};
use crate::par::{flat_map_indices, Exec};
use crate::poly::{real_roots, roots_of_fn, Interval};

/// Default tolerance for crossing agreement in coordinate space.
pub const CROSSING_TOL: f64 = 1e-8;

/// Names accepted by [`catalog_get`], in listing order.
pub const CATALOG: [&str; 5] = ["trefoil-long", "trefoil-arc", "figure8-arc", "torus-2-7", "trefoil-twist-arc"];

/// A parametrized curve `t -> (x, y, z)(t)`.
///
/// Unbounded domains are allowed for long knots but every numeric scan needs
/// a finite one, so the catalog ships finite working windows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotCurve {
    #[serde(default)]
    pub name: String,
    pub x: CoordFn,
    pub y: CoordFn,
    pub z: CoordFn,
    pub domain: Interval,
}

impl KnotCurve {
    pub fn new(name: impl Into<String>, x: CoordFn, y: CoordFn, z: CoordFn, domain: Interval) -> Self {
        Self { name: name.into(), x, y, z, domain }
    }

    pub fn eval(&self, t: f64) -> [f64; 3] {
        [self.x.eval(t), self.y.eval(t), self.z.eval(t)]
    }

    pub fn derivative(&self) -> KnotCurve {
        KnotCurve {
            name: format!("{}'", self.name),
            x: self.x.derivative(),
            y: self.y.derivative(),
            z: self.z.derivative(),
            domain: self.domain,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.x.is_polynomial() && self.y.is_polynomial() && self.z.is_polynomial()
    }

    /// True for a finite domain whose endpoints map to the same point.
    pub fn is_closed(&self) -> bool {
        if !self.domain.is_finite() {
            return false;
        }
        let (p, q) = (self.eval(self.domain.lo()), self.eval(self.domain.hi()));
        p.iter().zip(&q).all(|(a, b)| (a - b).abs() <= 1e-9)
    }

    pub fn with_domain(&self, domain: Interval) -> KnotCurve {
        KnotCurve { domain, ..self.clone() }
    }

    /// Reverses the parameter direction: `t -> -t`.
    pub fn reversed(&self) -> KnotCurve {
        KnotCurve {
            name: self.name.clone(),
            x: self.x.reflect(),
            y: self.y.reflect(),
            z: self.z.reflect(),
            domain: Interval::of(-self.domain.hi(), -self.domain.lo()),
        }
    }

    /// Swaps the second and third coordinates, `(x, y, z) -> (x, z, y)`.
    pub fn swap_yz(&self) -> KnotCurve {
        KnotCurve {
            name: self.name.clone(),
            x: self.x.clone(),
            y: self.z.clone(),
            z: self.y.clone(),
            domain: self.domain,
        }
    }

    pub fn from_json_str(s: &str) -> serde_json::Result<KnotCurve> {
        serde_json::from_str(s)
    }

    pub fn load(path: &Path) -> Result<KnotCurve> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        Self::from_json_str(&text).map_err(|source| Error::Json { path: path.into(), source })
    }
}

/// Looks up one of the built-in example knots.
pub fn catalog_get(name: &str) -> Result<KnotCurve> {
    let p = CoordFn::poly;
    let trefoil_x = p(&[0.0, -3.0, 0.0, 1.0]);
    let trefoil_y = p(&[0.0, -10.0, 0.0, 0.0, 0.0, 1.0]);
    let curve = match name {
        "trefoil-long" => {
            KnotCurve::new(name, trefoil_x, trefoil_y, p(&[0.0, 0.0, -4.0, 0.0, 1.0]), Interval::of(-3.0, 3.0))
        }
        "trefoil-arc" => {
            KnotCurve::new(name, trefoil_x, trefoil_y, p(&[3.0, 0.0, 4.0, 0.0, -1.0]), Interval::of(-3.0, 3.0))
        }
        "trefoil-twist-arc" => {
            KnotCurve::new(name, trefoil_x, trefoil_y, p(&[16.0, 0.0, 4.0, 0.0, -1.0]), Interval::of(-3.0, 3.0))
        }
        "figure8-arc" => {
            // (2/5) t (t^2-7)(t^2-10) and (1/10) t (t^2-4)(t^2-9)(t^2-12)
            let x = p(&[0.0, 70.0, 0.0, -17.0, 0.0, 1.0]).scale(0.4);
            let y = p(&[0.0, -432.0, 0.0, 192.0, 0.0, -25.0, 0.0, 1.0]).scale(0.1);
            KnotCurve::new(name, x, y, p(&[20.0, 0.0, -13.0, 0.0, -1.0]), Interval::of(-4.0, 4.0))
        }
        "torus-2-7" => {
            // cos2t (cos7t + 3) = (cos5t + cos9t)/2 + 3 cos2t, likewise for sin
            let x = CoordFn::trig(0.5, Trig::cos(5))
                .add(&CoordFn::trig(0.5, Trig::cos(9)))
                .add(&CoordFn::trig(3.0, Trig::cos(2)));
            let y = CoordFn::trig(-0.5, Trig::sin(5))
                .add(&CoordFn::trig(0.5, Trig::sin(9)))
                .add(&CoordFn::trig(3.0, Trig::sin(2)));
            KnotCurve::new(name, x, y, CoordFn::trig(1.0, Trig::sin(7)), Interval::of(0.0, 2.0 * PI))
        }
        _ => return Err(Error::UnknownKnot(name.to_string())),
    };
    Ok(curve)
}

/// Resolves a catalog name, or failing that a knot-spec JSON path.
pub fn resolve_knot(name_or_path: &str) -> Result<KnotCurve> {
    match catalog_get(name_or_path) {
        Ok(k) => Ok(k),
        Err(Error::UnknownKnot(_)) if Path::new(name_or_path).is_file() => KnotCurve::load(Path::new(name_or_path)),
        Err(e) => Err(e),
    }
}

/// A knotted arc: the piece of a curve between two simple zeros of `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcSpec {
    pub curve: KnotCurve,
    pub a: f64,
    pub b: f64,
}

impl ArcSpec {
    pub fn interval(&self) -> Interval {
        Interval::of(self.a, self.b)
    }

    /// The underlying curve restricted to `[a, b]`.
    pub fn restricted(&self) -> KnotCurve {
        self.curve.with_domain(self.interval())
    }
}

/// Samples for the positivity check of `z` between the arc endpoints.
const ARC_SAMPLES: usize = 4096;

/// Finds the knotted arc of `curve`: the two simple zeros of `z`.
pub fn arc_from_curve(curve: &KnotCurve) -> Result<ArcSpec> {
    let roots = z_roots(curve)?;
    if roots.len() != 2 {
        return Err(Error::BadBoundary(format!("z has {} real roots on {}, expected 2", roots.len(), curve.domain)));
    }
    let (a, b) = (roots[0], roots[1]);
    let dz = curve.z.derivative();
    for r in [a, b] {
        if dz.eval(r).abs() <= 1e-9 {
            return Err(Error::BadBoundary(format!("root {r} of z is not simple")));
        }
    }
    let span = Interval::of(a, b);
    let h = span.len() / ARC_SAMPLES as f64;
    for i in 1..ARC_SAMPLES {
        let t = a + i as f64 * h;
        if curve.z.eval(t) <= 0.0 {
            return Err(Error::BadBoundary(format!("z is not positive at t = {t} inside ({a}, {b})")));
        }
    }
    Ok(ArcSpec { curve: curve.clone(), a, b })
}

pub(crate) fn z_roots(curve: &KnotCurve) -> Result<Vec<f64>> {
    match curve.z.to_poly() {
        Some(p) if p.is_zero() => Err(Error::BadBoundary("z vanishes identically".into())),
        Some(p) => real_roots(&p, curve.domain, 1e-13),
        None => {
            let dz = curve.z.derivative();
            let scale = 1.0 + curve.z.terms().iter().map(|t| t.coeff.abs()).sum::<f64>();
            roots_of_fn(|t| curve.z.eval(t), |t| dz.eval(t), curve.domain, 4096, 1e-13, 1e-12 * scale)
        }
    }
}

/// One crossing of the `(x, y)` projection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingDatum {
    pub t_over: f64,
    pub t_under: f64,
    pub xy: [f64; 2],
}

impl CrossingDatum {
    pub fn first(&self) -> f64 {
        self.t_over.min(self.t_under)
    }

    pub fn second(&self) -> f64 {
        self.t_over.max(self.t_under)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CrossingOptions {
    /// Cells per side of the `(t1, t2)` scan grid.
    pub grid: usize,
    /// Width of the excluded diagonal band, in cells.
    pub band: usize,
    pub tol: f64,
    pub exec: Exec,
    /// Report double points of the curve itself (equal heights) as
    /// crossings, ordered by parameter, instead of failing.
    pub allow_touching: bool,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        Self { grid: 1024, band: 10, tol: CROSSING_TOL, exec: Exec::default(), allow_touching: false }
    }
}

/// All crossings of the `(x, y)` projection, sorted by first parameter.
pub fn crossings(curve: &KnotCurve, tol: f64) -> Result<Vec<CrossingDatum>> {
    crossings_with(curve, &CrossingOptions { tol, ..CrossingOptions::default() })
}

pub fn crossings_with(curve: &KnotCurve, opts: &CrossingOptions) -> Result<Vec<CrossingDatum>> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Invalid(format!("crossing tolerance must be positive, got {}", opts.tol)));
    }
    if !curve.domain.is_finite() {
        return Err(Error::DomainUnbounded);
    }
    let n = opts.grid.max(4);
    let band = opts.band.max(1);
    let dom = curve.domain;
    let step = dom.len() / n as f64;
    let ts = dom.linspace(n + 1);
    let xs: Vec<f64> = ts.iter().map(|&t| curve.x.eval(t)).collect();
    let ys: Vec<f64> = ts.iter().map(|&t| curve.y.eval(t)).collect();
    let closed = curve.is_closed();
    let d = curve.derivative();

    let straddles = |v: [f64; 4]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        lo <= 0.0 && hi >= 0.0
    };

    let candidates: Vec<(usize, usize)> = flat_map_indices(opts.exec, n, |i| {
        let mut out = Vec::new();
        for j in (i + band)..n {
            if closed && n - (j - i) < band {
                continue;
            }
            let dx = [xs[i] - xs[j], xs[i + 1] - xs[j], xs[i] - xs[j + 1], xs[i + 1] - xs[j + 1]];
            let dy = [ys[i] - ys[j], ys[i + 1] - ys[j], ys[i] - ys[j + 1], ys[i + 1] - ys[j + 1]];
            if straddles(dx) && straddles(dy) {
                out.push((i, j));
            }
        }
        out
    });

    let refined: Vec<Result<Option<(f64, f64)>>> = crate::par::map_indices(opts.exec, candidates.len(), |k| {
        let (i, j) = candidates[k];
        let start = (ts[i] + 0.5 * step, ts[j] + 0.5 * step);
        let window = (
            Interval::of(ts[i] - 2.0 * step, ts[i + 1] + 2.0 * step),
            Interval::of(ts[j] - 2.0 * step, ts[j + 1] + 2.0 * step),
        );
        newton_pair(curve, &d, start, window, opts.tol)
    });

    let period = dom.len();
    let wrap = |t: f64| {
        if closed && t >= dom.hi() - 1e-12 * period.max(1.0) {
            t - period
        } else {
            t
        }
    };
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for r in refined {
        if let Some((a, b)) = r? {
            if !(dom.contains(a) && dom.contains(b)) {
                continue;
            }
            let (a, b) = (wrap(a), wrap(b));
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            if (b - a).abs() <= opts.tol || (closed && (period - (b - a)).abs() <= opts.tol) {
                continue;
            }
            pairs.push((a, b));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    let mut unique: Vec<(f64, f64)> = Vec::new();
    for p in pairs {
        if !unique.iter().any(|q| (p.0 - q.0).abs() <= 1e-7 && (p.1 - q.1).abs() <= 1e-7) {
            unique.push(p);
        }
    }

    let mut out = Vec::with_capacity(unique.len());
    for (a, b) in unique {
        let (pa, pb) = (curve.eval(a), curve.eval(b));
        let (da, db) = (d.eval(a), d.eval(b));
        let det = da[0] * (-db[1]) - (-db[0]) * da[1];
        let scale = (da[0].hypot(da[1])) * (db[0].hypot(db[1]));
        if det.abs() <= 1e-9 * scale.max(1e-300) {
            return Err(Error::DegenerateCrossing(format!("strands at t = {a} and t = {b} are tangent in projection")));
        }
        if (pa[2] - pb[2]).abs() <= opts.tol && !opts.allow_touching {
            return Err(Error::DegenerateCrossing(format!("strands at t = {a} and t = {b} meet in space")));
        }
        let (t_over, t_under) = if pa[2] >= pb[2] { (a, b) } else { (b, a) };
        let xy = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
        out.push(CrossingDatum { t_over, t_under, xy });
    }
    Ok(out)
}

/// 2-D Newton on `(x(a) - x(b), y(a) - y(b)) = 0`.
fn newton_pair(
    curve: &KnotCurve,
    d: &KnotCurve,
    start: (f64, f64),
    window: (Interval, Interval),
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    let (mut a, mut b) = start;
    for _ in 0..60 {
        let fx = curve.x.eval(a) - curve.x.eval(b);
        let fy = curve.y.eval(a) - curve.y.eval(b);
        let (j11, j12, j21, j22) = (d.x.eval(a), -d.x.eval(b), d.y.eval(a), -d.y.eval(b));
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let da = (fx * j22 - fy * j12) / det;
        let db = (j11 * fy - j21 * fx) / det;
        a -= da;
        b -= db;
        if !window.0.contains(a) || !window.1.contains(b) {
            return Ok(None);
        }
        if da.abs().max(db.abs()) <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
    }
    let fx = curve.x.eval(a) - curve.x.eval(b);
    let fy = curve.y.eval(a) - curve.y.eval(b);
    if !(fx.is_finite() && fy.is_finite()) {
        return Err(Error::NonConvergence(format!("crossing refinement diverged near ({}, {})", start.0, start.1)));
    }
    if fx.abs() <= tol && fy.abs() <= tol {
        Ok(Some((a, b)))
    } else {
        // A straddling cell without a nearby root: the sign pattern came from
        // two zero curves passing through the cell without meeting.
        Ok(None)
    }
}

/// Smallest interval holding every crossing parameter, padded by 1% of its
/// width (half on each side).
pub fn crossing_span(curve: &KnotCurve) -> Result<Interval> {
    span_of(&crossings(curve, CROSSING_TOL)?)
}

pub fn span_of(list: &[CrossingDatum]) -> Result<Interval> {
    if list.is_empty() {
        return Err(Error::NoCrossings);
    }
    let lo = list.iter().map(CrossingDatum::first).fold(f64::INFINITY, f64::min);
    let hi = list.iter().map(CrossingDatum::second).fold(f64::NEG_INFINITY, f64::max);
    let pad = 0.005 * (hi - lo);
    Interval::new(lo - pad, hi + pad)
}
