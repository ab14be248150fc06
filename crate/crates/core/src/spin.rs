//! Spun 2-knots and knotted planes with one end at infinity.

use std::f64::consts::PI;

use crate::coordfn::{CoordFn, Trig};
use crate::error::{Error, Result};
use crate::expr::Expr2;
use crate::knots::{arc_from_curve, crossing_span, z_roots, ArcSpec, KnotCurve};
use crate::poly::{real_roots, Interval, Poly1};
use crate::surface::{Surface4, TSampling};

/// Default `delta` of the tan reparametrization for half-infinite `t`.
pub const TAN_DELTA: f64 = 0.05;

pub fn full_turn() -> Interval {
    Interval::of(0.0, 2.0 * PI)
}

/// `(t, s) -> (f(t), g(t), h(t) cos s, h(t) sin s)` on `[a, b] x [0, 2 pi]`.
pub fn spun_surface(arc: &ArcSpec) -> Surface4 {
    let k = &arc.curve;
    let coords = [
        Expr2::of_t(k.x.clone()),
        Expr2::of_t(k.y.clone()),
        Expr2::product(k.z.clone(), CoordFn::trig(1.0, Trig::cos(1))),
        Expr2::product(k.z.clone(), CoordFn::trig(1.0, Trig::sin(1))),
    ];
    let mut s = Surface4::single(format!("spun {}", k.name), arc.interval(), full_turn(), coords);
    s.s_periodic = true;
    s
}

/// Spins the knotted arc of `curve`.
pub fn spun_knot(curve: &KnotCurve) -> Result<Surface4> {
    Ok(spun_surface(&arc_from_curve(curve)?))
}

/// The height function actually spun by [`spun_plane_infinity`].
#[derive(Clone, Debug, PartialEq)]
pub struct OddHeight {
    pub z: CoordFn,
    /// Coefficient of the added odd power, if a fix-up was needed.
    pub epsilon: Option<f64>,
    pub added_degree: Option<u32>,
    /// The single root of `z`.
    pub a: f64,
}

/// Makes `z` odd-degree with positive leading coefficient and checks it
/// has one simple root `a` on the curve's domain and none on `(a, inf)`.
///
/// An even-degree `z` gains `eps t^(deg+1)` where
/// `eps = 1e-4 max|z on crossing span| / T^(deg+1)` and `T` is the right end
/// of the window `[a - 1, max(b, span.hi) + 2]`, `a`, `b` the outer roots.
pub fn odd_height(curve: &KnotCurve) -> Result<OddHeight> {
    let z = curve.z.to_poly().ok_or_else(|| Error::BadKnotForm("the height must be a polynomial".into()))?;
    if z.is_zero() {
        return Err(Error::BadBoundary("z vanishes identically".into()));
    }
    let (z, epsilon, added_degree) = if z.degree() % 2 == 0 {
        let roots = real_roots(&z, curve.domain, 1e-13)?;
        let right = roots.last().copied().unwrap_or(curve.domain.hi());
        let span = crossing_span(curve).ok();
        let t_right = span.map_or(right, |sp| right.max(sp.hi())) + 2.0;
        let z_scale = match span {
            Some(sp) => crate::poly::sup_abs(|t| z.eval(t), sp, 4097),
            None => z.max_abs_coeff(),
        };
        let deg = z.degree() + 1;
        let eps = 1e-4 * z_scale / t_right.abs().max(1.0).powi(deg as i32);
        let mut c = vec![0.0; deg + 1];
        c[deg] = eps;
        (z.add(&Poly1::new(c)), Some(eps), Some(deg as u32))
    } else {
        (z, None, None)
    };
    if z.leading() <= 0.0 {
        return Err(Error::BadBoundary("the odd-degree height must have a positive leading coefficient".into()));
    }
    let z_fn = CoordFn::from_poly(&z);
    let roots = z_roots(&KnotCurve { z: z_fn.clone(), ..curve.clone() })?;
    if roots.len() != 1 {
        return Err(Error::BadBoundary(format!("height has {} roots on {}, expected 1", roots.len(), curve.domain)));
    }
    let a = roots[0];
    if z.derivative().eval(a) <= 1e-12 {
        return Err(Error::BadBoundary(format!("root {a} of the height is not simple")));
    }
    let beyond = real_roots(&z, Interval::of(a, f64::INFINITY), 1e-13)?;
    if beyond.iter().any(|&r| r > a + 1e-9) {
        return Err(Error::BadBoundary(format!("height vanishes again to the right of {a}")));
    }
    Ok(OddHeight { z: z_fn, epsilon, added_degree, a })
}

/// `(t, s) -> (f1, g1, h1 sin s, h1 cos s)` on `[a, inf) x [0, 2 pi]`.
pub fn spun_plane_infinity(curve: &KnotCurve) -> Result<(Surface4, OddHeight)> {
    let height = odd_height(curve)?;
    let coords = [
        Expr2::of_t(curve.x.clone()),
        Expr2::of_t(curve.y.clone()),
        Expr2::product(height.z.clone(), CoordFn::trig(1.0, Trig::sin(1))),
        Expr2::product(height.z.clone(), CoordFn::trig(1.0, Trig::cos(1))),
    ];
    let mut s = Surface4::single(
        format!("plane at infinity {}", curve.name),
        Interval::of(height.a, f64::INFINITY),
        full_turn(),
        coords,
    );
    s.s_periodic = true;
    s.t_sampling = TSampling::Tan { delta: TAN_DELTA };
    Ok((s, height))
}
