//! Long 2-knots in R^4: the simple long 2-knot of a long knot, its
//! trivializing homotopy and singular stages, knotted discs, and the
//! three-piece knotted plane.

use std::f64::consts::PI;

use serde::Serialize;

use crate::coordfn::{CoordFn, Trig};
use crate::error::{Error, Result};
use crate::expr::Expr2;
use crate::knots::{
    crossings, crossings_with, span_of, ArcSpec, CrossingDatum, CrossingOptions, KnotCurve, CROSSING_TOL,
};
use crate::poly::{real_roots, Interval};
use crate::surface::{Piece, Surface4, TSampling};

/// A map `R^2 -> R^4` together with the finite window it is sampled on.
#[derive(Clone, Debug, PartialEq)]
pub struct LongSurface {
    pub coords: [Expr2; 4],
    pub t_window: Interval,
    pub s_window: Interval,
}

impl LongSurface {
    pub fn eval(&self, t: f64, s: f64) -> [f64; 4] {
        [self.coords[0].eval(t, s), self.coords[1].eval(t, s), self.coords[2].eval(t, s), self.coords[3].eval(t, s)]
    }

    /// The window as a single-piece surface for meshing.
    pub fn to_surface(&self, label: impl Into<String>) -> Surface4 {
        Surface4::single(label, self.t_window, self.s_window, self.coords.clone())
    }
}

/// Padding of the crossing span when choosing the default `t` window.
const WINDOW_PAD: f64 = 0.2;

/// `P_K(t, s) = (f(t) + s, g(t) + s, s, h(t))` for a long polynomial knot
/// `(f, g, h)` with `h` of odd degree and positive leading coefficient.
pub fn simple_long_2knot(k: &KnotCurve) -> Result<LongSurface> {
    if !(k.x.is_polynomial() && k.y.is_polynomial()) {
        return Err(Error::BadKnotForm("f and g must be polynomials".into()));
    }
    let h = k.z.to_poly().ok_or_else(|| Error::BadKnotForm("h must be a polynomial".into()))?;
    if h.degree() % 2 == 0 || h.leading() <= 0.0 {
        return Err(Error::BadKnotForm(format!(
            "h must have odd degree and positive leading coefficient, got degree {} with leading {}",
            h.degree(),
            h.leading()
        )));
    }
    let one = CoordFn::constant(1.0);
    let s = CoordFn::t();
    let coords = [
        Expr2::of_t(k.x.clone()).plus(one.clone(), s.clone()),
        Expr2::of_t(k.y.clone()).plus(one.clone(), s.clone()),
        Expr2::product(one, s),
        Expr2::of_t(k.z.clone()),
    ];
    let t_window = default_window(k)?;
    let half = t_window.lo().abs().max(t_window.hi().abs());
    Ok(LongSurface { coords, t_window, s_window: Interval::of(-half, half) })
}

fn default_window(k: &KnotCurve) -> Result<Interval> {
    let list = if k.domain.is_finite() { crossings(k, CROSSING_TOL)? } else { vec![] };
    match span_of(&list) {
        Ok(span) => {
            let pad = WINDOW_PAD * span.len();
            Interval::new(span.lo() - pad, span.hi() + pad)
        }
        Err(_) if k.domain.is_finite() => Ok(k.domain),
        Err(_) => Ok(Interval::of(-1.0, 1.0)),
    }
}

/// Replaces the fourth coordinate `p` by `p + u^2 (t + s)`.
pub fn trivializing_homotopy(f: &LongSurface, u: f64) -> LongSurface {
    let mut out = f.clone();
    if u != 0.0 {
        let u2 = u * u;
        out.coords[3] = out.coords[3]
            .clone()
            .plus(CoordFn::monomial(u2, 1), CoordFn::constant(1.0))
            .plus(CoordFn::constant(u2), CoordFn::t());
    }
    out
}

/// Grid side for the partial-derivative minimum search.
const MIN_GRID: usize = 257;

/// Smallest `M >= 0` with both partials of `p + M^2 (t + s)` nonnegative on
/// the window, where `p` is the fourth coordinate.
///
/// The minima are taken on a grid with local refinement. They must not drop
/// when the window is doubled about its centre, otherwise the partials are
/// treated as unbounded below.
pub fn monotonicity_threshold(f: &LongSurface, window: Option<(Interval, Interval)>) -> Result<f64> {
    let p = &f.coords[3];
    let pt = p.partial_t().ok_or_else(|| Error::Invalid("fourth coordinate is not analytic".into()))?;
    let ps = p.partial_s().ok_or_else(|| Error::Invalid("fourth coordinate is not analytic".into()))?;
    let (tw, sw) = window.unwrap_or((f.t_window, f.s_window));
    let grow = |w: Interval| Interval::of(w.mid() - w.len(), w.mid() + w.len());
    let mut need = 0.0f64;
    for d in [&pt, &ps] {
        let m1 = grid_min(d, tw, sw);
        let m2 = grid_min(d, grow(tw), grow(sw));
        if m2 < m1 - 1e-6 * (1.0 + m1.abs()) {
            return Err(Error::Unbounded(format!("minimum drops from {m1} to {m2} on the doubled window")));
        }
        need = need.max(-m1);
    }
    Ok(need.max(0.0).sqrt())
}

fn grid_min(e: &Expr2, tw: Interval, sw: Interval) -> f64 {
    let (ts, ss) = (tw.linspace(MIN_GRID), sw.linspace(MIN_GRID));
    let mut best = (f64::INFINITY, 0, 0);
    for (i, &t) in ts.iter().enumerate() {
        for (j, &s) in ss.iter().enumerate() {
            let v = e.eval(t, s);
            if v < best.0 {
                best = (v, i, j);
            }
        }
    }
    // Alternating golden-section refinement within one cell of the best node.
    let (ht, hs) = (tw.len() / (MIN_GRID - 1) as f64, sw.len() / (MIN_GRID - 1) as f64);
    let (mut t, mut s) = (ts[best.1], ss[best.2]);
    let tb = Interval::of((t - ht).max(tw.lo()), (t + ht).min(tw.hi()));
    let sb = Interval::of((s - hs).max(sw.lo()), (s + hs).min(sw.hi()));
    for _ in 0..8 {
        t = golden(|x| e.eval(x, s), tb);
        s = golden(|y| e.eval(t, y), sb);
    }
    best.0.min(e.eval(t, s))
}

fn golden(g: impl Fn(f64) -> f64, iv: Interval) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (iv.lo(), iv.hi());
    let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
    for _ in 0..80 {
        if g(c) < g(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    0.5 * (a + b)
}

/// A value of `u` at which two strands of `h + u^2 t` meet over a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularParameter {
    pub u: f64,
    pub crossing: CrossingDatum,
}

/// For each crossing `(t_a, t_b)` of the `(f, g)` projection, the `u > 0`
/// with `h(t_a) + u^2 t_a = h(t_b) + u^2 t_b`, sorted by `u`.
pub fn singular_parameters(k: &KnotCurve) -> Result<Vec<SingularParameter>> {
    let mut out = Vec::new();
    let opts = CrossingOptions { allow_touching: true, ..CrossingOptions::default() };
    for c in crossings_with(k, &opts)? {
        let (ta, tb) = (c.t_over, c.t_under);
        if (ta - tb).abs() <= CROSSING_TOL {
            return Err(Error::DegenerateCrossing(format!("parameters {ta} and {tb} coincide")));
        }
        let u2 = (k.z.eval(tb) - k.z.eval(ta)) / (ta - tb);
        if u2 > 0.0 {
            out.push(SingularParameter { u: u2.sqrt(), crossing: c });
        }
    }
    out.sort_by(|a, b| a.u.total_cmp(&b.u));
    Ok(out)
}

/// Number of singular stages of the homotopy for this representation.
pub fn singularity_index_upper_bound(k: &KnotCurve) -> Result<usize> {
    Ok(singular_parameters(k)?.len())
}

/// `(f, g, h sin s, h cos s)` on `[a, b] x [0, pi]`, bounded by `K # K*`.
pub fn knotted_disc(arc: &ArcSpec) -> Surface4 {
    let k = &arc.curve;
    let coords = [
        Expr2::of_t(k.x.clone()),
        Expr2::of_t(k.y.clone()),
        Expr2::product(k.z.clone(), CoordFn::trig(1.0, Trig::sin(1))),
        Expr2::product(k.z.clone(), CoordFn::trig(1.0, Trig::cos(1))),
    ];
    Surface4::single(format!("disc {}", k.name), arc.interval(), Interval::of(0.0, PI), coords)
}

/// Lower bounds on `R` for the two outer pieces: `sqrt(-min h')` keeps
/// `h + s^2 t` increasing in `t`, `sqrt(max h')` does so for `-h + s^2 t`.
pub fn plane_radius_threshold(arc: &ArcSpec) -> Result<f64> {
    let dh = arc.curve.z.derivative();
    let (lo, hi) = extremes(&dh, arc.interval())?;
    Ok((-lo).max(0.0).sqrt().max(hi.max(0.0).sqrt()))
}

fn extremes(g: &CoordFn, dom: Interval) -> Result<(f64, f64)> {
    let mut pts = vec![dom.lo(), dom.hi()];
    match g.derivative().to_poly() {
        Some(dg) if !dg.is_zero() => pts.extend(real_roots(&dg, dom, 1e-13)?),
        Some(_) => {}
        None => pts.extend(dom.linspace(8193)),
    }
    let vals = pts.iter().map(|&t| g.eval(t));
    Ok(vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v))))
}

/// The knotted plane assembled from `psi1` on `s <= 0`, the knotted disc
/// on `[0, pi]` and `psi2` on `s >= pi`; sampled on `s in [-R-1, pi+R+1]`.
pub fn knotted_plane_construction1(arc: &ArcSpec, r: f64) -> Result<Surface4> {
    let required = plane_radius_threshold(arc)?;
    if !(r >= required) {
        return Err(Error::RadiusTooSmall { given: r, required });
    }
    let k = &arc.curve;
    let one = CoordFn::constant(1.0);
    let s = CoordFn::t();
    let psi1 = [
        Expr2::of_t(k.x.clone()).plus(one.clone(), s.scale(-1.0)),
        Expr2::of_t(k.y.clone()).plus(one.clone(), s.scale(-1.0)),
        Expr2::of_s(s.clone()),
        Expr2::of_t(k.z.clone()).plus(CoordFn::t(), CoordFn::monomial(1.0, 2)),
    ];
    let shifted = s.add_constant(-PI);
    let psi2 = [
        Expr2::of_t(k.x.clone()).plus(one.clone(), shifted.clone()),
        Expr2::of_t(k.y.clone()).plus(one.clone(), shifted.clone()),
        Expr2::of_s(shifted.scale(-1.0)),
        Expr2::of_t(k.z.scale(-1.0)).plus(CoordFn::t(), shifted.mul(&shifted)),
    ];
    let disc = knotted_disc(arc);
    let mut plane = disc.clone();
    plane.label = format!("plane {}", k.name);
    plane.pieces = vec![
        Piece { s: Interval::of(f64::NEG_INFINITY, 0.0), coords: psi1 },
        disc.pieces[0].clone(),
        Piece { s: Interval::of(PI, f64::INFINITY), coords: psi2 },
    ];
    plane.t_sampling = TSampling::Open;
    // psi1(a, -x) = psi2(a, pi + x) and likewise at b, while the disc edge
    // collapses to a point: the strip closes up across both t edges.
    plane.t_edges_folded = true;
    plane.s_window = Some(Interval::of(-r - 1.0, PI + r + 1.0));
    plane.validate_seams()?;
    Ok(plane)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{arc_from_curve, catalog_get};

    fn canonical_trefoil() -> KnotCurve {
        catalog_get("trefoil-long").unwrap().swap_yz()
    }

    #[test]
    fn long_2knot_coordinates() {
        let p = simple_long_2knot(&canonical_trefoil()).unwrap();
        let (t, s): (f64, f64) = (0.7, -1.3);
        let want = [t * t * t - 3.0 * t + s, t.powi(4) - 4.0 * t * t + s, s, t.powi(5) - 10.0 * t];
        let got = p.eval(t, s);
        for i in 0..4 {
            assert!((got[i] - want[i]).abs() < 1e-13);
        }
        assert!(matches!(simple_long_2knot(&catalog_get("trefoil-long").unwrap()), Err(Error::BadKnotForm(_))));
    }

    #[test]
    fn threshold_examples() {
        let p = simple_long_2knot(&canonical_trefoil()).unwrap();
        assert!((monotonicity_threshold(&p, None).unwrap() - 10f64.sqrt()).abs() < 1e-9);
        let mut lin = p.clone();
        lin.coords[3] = Expr2::of_t(CoordFn::t()).plus(CoordFn::constant(1.0), CoordFn::t());
        assert_eq!(monotonicity_threshold(&lin, None).unwrap(), 0.0);
        let mut shifted = p.clone();
        shifted.coords[3] = shifted.coords[3].clone().plus(CoordFn::constant(7.0), CoordFn::constant(1.0));
        assert_eq!(monotonicity_threshold(&shifted, None).unwrap(), monotonicity_threshold(&p, None).unwrap());
    }

    #[test]
    fn threshold_rejects_unbounded_partials() {
        let mut p = simple_long_2knot(&canonical_trefoil()).unwrap();
        p.coords[3] = Expr2::of_t(CoordFn::poly(&[0.0, 0.0, 0.0, 0.0, -1.0]));
        assert!(matches!(monotonicity_threshold(&p, None), Err(Error::Unbounded(_))));
    }

    #[test]
    fn homotopy_adds_linear_term() {
        let p = simple_long_2knot(&canonical_trefoil()).unwrap();
        assert_eq!(trivializing_homotopy(&p, 0.0), p);
        let q = trivializing_homotopy(&p, 2.0);
        assert!((q.eval(0.5, 0.25)[3] - (p.eval(0.5, 0.25)[3] + 4.0 * 0.75)).abs() < 1e-13);
    }

    #[test]
    fn disc_boundaries() {
        let arc = arc_from_curve(&catalog_get("trefoil-arc").unwrap()).unwrap();
        let d = knotted_disc(&arc);
        let t = 0.4;
        let h = arc.curve.z.eval(t);
        let top = d.eval(t, PI);
        assert!(top[2].abs() < 1e-12 && (top[3] + h).abs() < 1e-12);
    }

    #[test]
    fn plane_radius_is_validated() {
        let arc = arc_from_curve(&catalog_get("trefoil-arc").unwrap()).unwrap();
        let need = plane_radius_threshold(&arc).unwrap();
        assert!(matches!(knotted_plane_construction1(&arc, 0.5 * need), Err(Error::RadiusTooSmall { .. })));
        assert!(knotted_plane_construction1(&arc, need).is_ok());
    }
}
