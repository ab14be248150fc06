//! Welded diagrams and the Tube map to ribbon tori in R^4.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coordfn::{CoordFn, Trig};
use crate::error::{Error, Result};
use crate::expr::{Expr2, Weight};
use crate::knots::{crossings, KnotCurve, CROSSING_TOL};
use crate::spin::full_turn;
use crate::surface::{Surface4, TSampling};

/// `exp(-w^2 / (w^2 - (x - c)^2))` inside `|x - c| < w`, else 0.
pub fn compact_bump(x: f64, c: f64, w: f64) -> f64 {
    let d = x - c;
    if d.abs() >= w {
        return 0.0;
    }
    (-w * w / (w * w - d * d)).exp()
}

/// A signed sum of equal-width compact bumps, optionally periodic.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpProfile {
    /// `(center, sign)` pairs.
    pub centers: Vec<(f64, f64)>,
    pub width: f64,
    pub period: Option<f64>,
}

impl BumpProfile {
    pub fn eval(&self, x: f64) -> f64 {
        self.centers
            .iter()
            .map(|&(c, sign)| {
                let x = match self.period {
                    // nearest representative of x to c
                    Some(p) => c + (x - c + 0.5 * p).rem_euclid(p) - 0.5 * p,
                    None => x,
                };
                sign * compact_bump(x, c, self.width)
            })
            .sum()
    }
}

/// A closed curve whose crossings are split into classical ones, given as
/// `(t_over, t_under)`, and welded ones, given as `(first, second)` visit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeldedDiagram {
    #[serde(flatten)]
    pub base: KnotCurve,
    #[serde(default)]
    pub classical: Vec<[f64; 2]>,
    #[serde(default)]
    pub welded: Vec<[f64; 2]>,
    #[serde(rename = "L")]
    pub l: f64,
}

impl WeldedDiagram {
    pub fn load(path: &Path) -> Result<WeldedDiagram> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let d: WeldedDiagram =
            serde_json::from_str(&text).map_err(|source| Error::Json { path: path.into(), source })?;
        d.validate()?;
        Ok(d)
    }

    pub fn period(&self) -> f64 {
        self.base.domain.len()
    }

    fn reduce(&self, t: f64) -> f64 {
        let dom = self.base.domain;
        dom.lo() + (t - dom.lo()).rem_euclid(dom.len())
    }

    /// Checks interval disjointness and that paired parameters cross.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(CROSSING_TOL)
    }

    pub fn validate_with(&self, tol: f64) -> Result<()> {
        if !self.base.domain.is_finite() || !self.base.is_closed() {
            return Err(Error::Invalid("the base of a welded diagram must be a closed curve".into()));
        }
        if !(self.l > 0.0 && self.l.is_finite()) {
            return Err(Error::IntervalOverlap(format!("L must be positive, got {}", self.l)));
        }
        for (kind, pairs) in [("classical", &self.classical), ("welded", &self.welded)] {
            for &[a, b] in pairs {
                let (p, q) = (self.base.eval(a), self.base.eval(b));
                if (p[0] - q[0]).abs() > tol || (p[1] - q[1]).abs() > tol {
                    return Err(Error::Invalid(format!("{kind} pair ({a}, {b}) does not cross in projection")));
                }
            }
        }
        for &[over, under] in &self.classical {
            if self.base.z.eval(over) <= self.base.z.eval(under) {
                return Err(Error::Invalid(format!("classical pair ({over}, {under}) is not over/under")));
            }
        }
        let mut all: Vec<f64> = self.classical.iter().chain(&self.welded).flatten().map(|&t| self.reduce(t)).collect();
        all.sort_by(f64::total_cmp);
        if let Some(g) = min_cyclic_gap(&all, self.period()) {
            if g < self.l - 1e-12 {
                return Err(Error::IntervalOverlap(format!(
                    "intervals of length L = {} overlap: closest centers are {g} apart",
                    self.l
                )));
            }
        }
        Ok(())
    }

    /// `S_c`: bumps of width `L/2` at every classical under-crossing.
    pub fn shrink_profile(&self) -> BumpProfile {
        BumpProfile {
            centers: self.classical.iter().map(|&[_, under]| (self.reduce(under), 1.0)).collect(),
            width: self.l / 2.0,
            period: Some(self.period()),
        }
    }

    /// `S_w`: `+` bumps at first visits, `-` bumps at second visits.
    pub fn displace_profile(&self) -> BumpProfile {
        BumpProfile {
            centers: self
                .welded
                .iter()
                .flat_map(|&[first, second]| [(self.reduce(first), 1.0), (self.reduce(second), -1.0)])
                .collect(),
            width: self.l / 2.0,
            period: Some(self.period()),
        }
    }
}

pub fn shrink_profile(diag: &WeldedDiagram) -> BumpProfile {
    diag.shrink_profile()
}

pub fn displace_profile(diag: &WeldedDiagram) -> BumpProfile {
    diag.displace_profile()
}

fn min_cyclic_gap(sorted: &[f64], period: f64) -> Option<f64> {
    if sorted.len() < 2 {
        return None;
    }
    let inner = sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Some(inner.min(period - (sorted[sorted.len() - 1] - sorted[0])))
}

/// Tube radius `r`, shrinking factor `d_c` and displacement factor `d_w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubeParams {
    pub r: f64,
    pub dc: f64,
    pub dw: f64,
}

impl TubeParams {
    pub fn new(r: f64, dc: f64, dw: f64) -> Result<Self> {
        if !(r > 0.0 && dc >= 0.0 && dw >= 0.0) || !(r.is_finite() && dc.is_finite() && dw.is_finite()) {
            return Err(Error::Invalid(format!("need r > 0, dc >= 0, dw >= 0; got r = {r}, dc = {dc}, dw = {dw}")));
        }
        Ok(Self { r, dc, dw })
    }
}

/// `(f, (r - dc S_c) g + cos s, (r - dc S_c) g + sin s + dw S_w, h)`.
///
/// With `true_radius` the circle is scaled by `r`.
pub fn tube_surface(diag: &WeldedDiagram, params: TubeParams, true_radius: bool) -> Result<Surface4> {
    diag.validate()?;
    let k = &diag.base;
    let one = CoordFn::constant(1.0);
    let amp = if true_radius { params.r } else { 1.0 };
    let center = Expr2::product(k.y.scale(params.r), one.clone()).plus_weighted(
        Weight::Profile(diag.shrink_profile()),
        k.y.scale(-params.dc),
        one.clone(),
    );
    let coords = [
        Expr2::of_t(k.x.clone()),
        center.add(&Expr2::of_s(CoordFn::trig(amp, Trig::cos(1)))),
        center.add(&Expr2::of_s(CoordFn::trig(amp, Trig::sin(1)))).plus_weighted(
            Weight::Profile(diag.displace_profile()),
            CoordFn::constant(params.dw),
            one,
        ),
        Expr2::of_t(k.z.clone()),
    ];
    let mut s = Surface4::single(format!("tube {}", k.name), k.domain, full_turn(), coords);
    s.t_sampling = TSampling::Periodic;
    s.s_periodic = true;
    Ok(s)
}

/// Largest `q` tried when snapping `L` to a rational multiple of pi.
const SNAP_DENOMINATOR: u32 = 64;

/// Welds the crossings at `pattern` (0-based, in parameter order) and keeps
/// the rest classical. `L` is the smallest cyclic gap between crossing
/// parameters, snapped down to `p pi / q` when within `1e-9` of one.
pub fn weldify(curve: &KnotCurve, pattern: &[usize]) -> Result<WeldedDiagram> {
    if !curve.is_closed() {
        return Err(Error::Invalid("welding needs a closed curve".into()));
    }
    let list = crossings(curve, CROSSING_TOL)?;
    for &i in pattern {
        if i >= list.len() {
            return Err(Error::Invalid(format!("crossing index {i} out of range (curve has {})", list.len())));
        }
    }
    let dom = curve.domain;
    let period = dom.len();
    let reduce = |t: f64| dom.lo() + (t - dom.lo()).rem_euclid(period);
    let mut all: Vec<f64> = list.iter().flat_map(|c| [reduce(c.t_over), reduce(c.t_under)]).collect();
    all.sort_by(f64::total_cmp);
    let gap = min_cyclic_gap(&all, period).unwrap_or(period);
    if gap <= 1e-9 {
        return Err(Error::IntervalOverlap(format!("crossing parameters only {gap} apart")));
    }
    let l = snap_to_pi(gap);
    let mut classical = Vec::new();
    let mut welded = Vec::new();
    for (i, c) in list.iter().enumerate() {
        if pattern.contains(&i) {
            let (a, b) = (reduce(c.t_over), reduce(c.t_under));
            welded.push([a.min(b), a.max(b)]);
        } else {
            classical.push([c.t_over, c.t_under]);
        }
    }
    let d = WeldedDiagram { base: curve.clone(), classical, welded, l };
    d.validate()?;
    Ok(d)
}

fn snap_to_pi(l: f64) -> f64 {
    for q in 1..=SNAP_DENOMINATOR {
        let p = (l * q as f64 / PI).round();
        if p >= 1.0 {
            let cand = p * PI / q as f64;
            if (cand - l).abs() <= 1e-9 * l.max(1.0) {
                return cand.min(l);
            }
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::catalog_get;

    #[test]
    fn bump_at_center_and_edge() {
        assert!((compact_bump(1.0, 1.0, 0.3) - (-1f64).exp()).abs() < 1e-16);
        assert_eq!(compact_bump(1.3, 1.0, 0.3), 0.0);
        let w = PI / 2.0;
        let want = (-(w * w) / (w * w - 0.25)).exp();
        assert!((compact_bump(0.5, 0.0, w) - want).abs() < 1e-16);
    }

    #[test]
    fn periodic_profile_wraps() {
        let p = BumpProfile { centers: vec![(0.1, 1.0)], width: 0.3, period: Some(2.0 * PI) };
        assert!((p.eval(2.0 * PI - 0.05) - compact_bump(-0.05, 0.1, 0.3)).abs() < 1e-13);
    }

    #[test]
    fn torus_knot_weld_two_four() {
        let d = weldify(&catalog_get("torus-2-7").unwrap(), &[1, 3]).unwrap();
        assert!((d.l - PI / 7.0).abs() < 1e-15);
        assert_eq!(d.classical.len(), 5);
        assert_eq!(d.welded.len(), 2);
        assert!((d.welded[0][0] - 3.0 * PI / 14.0).abs() < 1e-9);
        assert!((d.welded[1][1] - 21.0 * PI / 14.0).abs() < 1e-9);
    }

    #[test]
    fn overlapping_intervals_rejected() {
        let mut d = weldify(&catalog_get("torus-2-7").unwrap(), &[]).unwrap();
        assert_eq!(d.welded.len(), 0);
        d.l *= 1.5;
        assert!(matches!(d.validate(), Err(Error::IntervalOverlap(_))));
    }

    #[test]
    fn diagram_json_round_trip() {
        let d = weldify(&catalog_get("torus-2-7").unwrap(), &[1, 3]).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("\"L\":") && text.contains("\"classical\""));
        let back: WeldedDiagram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }
}
