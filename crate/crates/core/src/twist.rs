//! d-twist spinning: rotating the knotted part of an arc about a horizontal
//! chord while it spins, blended into the fixed ends by a smooth bump.

use crate::coordfn::{CoordFn, Trig};
use crate::error::{Error, Result};
use crate::expr::{Expr2, Weight};
use crate::knots::ArcSpec;
use crate::poly::Interval;
use crate::spin::full_turn;
use crate::surface::Surface4;

/// `F(x) = exp(-1/x)` for `x > 0`, else 0.
pub fn flat_exp(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// `B(t) = F(d1 - t^2) / (F(t^2 - d2) + F(d1 - t^2))`: 1 for `t^2 <= d2`,
/// 0 for `t^2 >= d1`, smooth in between.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothBump {
    d1: f64,
    d2: f64,
}

impl SmoothBump {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        if !(d2 > 0.0 && d2 < d1 && d1.is_finite()) {
            return Err(Error::BumpMismatch(format!("need 0 < d2 < d1, got d1 = {d1}, d2 = {d2}")));
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }

    pub fn d2(&self) -> f64 {
        self.d2
    }

    pub fn eval(&self, t: f64) -> f64 {
        let tt = t * t;
        if tt <= self.d2 {
            return 1.0;
        }
        if tt >= self.d1 {
            return 0.0;
        }
        // F(v) / (F(u) + F(v)) = 1 / (1 + exp(1/v - 1/u)); no 0/0 near the ends.
        let (u, v) = (tt - self.d2, self.d1 - tt);
        1.0 / (1.0 + (1.0 / v - 1.0 / u).exp())
    }
}

pub fn smooth_bump_eval(bump: &SmoothBump, t: f64) -> f64 {
    bump.eval(t)
}

/// Which closed form of the rotated arc to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RotationFormula {
    /// Rodrigues rotation about the chord through `P` and `Q`.
    #[default]
    Matrix,
    /// The three component equations exactly as commonly printed: rotation
    /// about the parallel line through `(0, 0, c)`, with `g21` in the
    /// `sin(phi) (c - h)` slot of `g'`.
    Printed,
}

/// The horizontal chord `PQ`, `P = arc(t1)`, `Q = arc(t2)`, at height `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistAxis {
    pub t1: f64,
    pub t2: f64,
    pub c: f64,
    pub f21: f64,
    pub g21: f64,
    pub n: f64,
    /// Foot of the perpendicular from the `z`-axis onto the chord, in the
    /// `xy` plane. Zero when the chord meets the `z`-axis.
    pub origin: [f64; 2],
}

impl TwistAxis {
    /// Builds the chord between `t1` and `t2`; their heights must agree.
    pub fn through(arc: &ArcSpec, t1: f64, t2: f64) -> Result<Self> {
        let k = &arc.curve;
        let (p, q) = (k.eval(t1), k.eval(t2));
        if (p[2] - q[2]).abs() > 1e-6 {
            return Err(Error::NoAxis(format!("z({t1}) = {} and z({t2}) = {} differ", p[2], q[2])));
        }
        let (f21, g21) = (q[0] - p[0], q[1] - p[1]);
        let n = f21.hypot(g21);
        if n <= 1e-12 {
            return Err(Error::NoAxis(format!("P and Q project to the same point for t = {t1}, {t2}")));
        }
        let (kx, ky) = (f21 / n, g21 / n);
        let along = p[0] * kx + p[1] * ky;
        let origin = [p[0] - along * kx, p[1] - along * ky];
        Ok(Self { t1, t2, c: q[2], f21, g21, n, origin })
    }

    pub fn direction(&self) -> [f64; 2] {
        [self.f21 / self.n, self.g21 / self.n]
    }

    /// Rotates `p` by `phi` about the chord.
    pub fn rotate(&self, p: [f64; 3], phi: f64, formula: RotationFormula) -> [f64; 3] {
        let (f21, g21, n, c) = (self.f21, self.g21, self.n, self.c);
        let (cs, sn) = (phi.cos(), phi.sin());
        let nn = n * n;
        match formula {
            RotationFormula::Matrix => {
                let [ox, oy] = self.origin;
                let (f, g, h) = (p[0] - ox, p[1] - oy, p[2] - c);
                [
                    ox + ((f21 * f21 + g21 * g21 * cs) * f + f21 * g21 * (1.0 - cs) * g + n * g21 * sn * h) / nn,
                    oy + (f21 * g21 * (1.0 - cs) * f + (f21 * f21 * cs + g21 * g21) * g - n * f21 * sn * h) / nn,
                    c + (-g21 * sn * f + f21 * sn * g) / n + cs * h,
                ]
            }
            RotationFormula::Printed => {
                let [f, g, h] = p;
                [
                    ((f21 * f21 + g21 * g21 * cs) * f + f21 * g21 * (1.0 - cs) * g + n * g21 * sn * (h - c)) / nn,
                    (f21 * g21 * (1.0 - cs) * f + (f21 * f21 * cs + g21 * g21) * g + n * g21 * sn * (c - h)) / nn,
                    (-g21 * sn * f + f21 * sn * g + n * cs * h + n * c * (1.0 - cs)) / n,
                ]
            }
        }
    }

    /// Homogeneous `T_o R T_{-o}` with `o = (origin, c)` and `R` the
    /// Rodrigues matrix `I + sin(phi) K + (1 - cos(phi)) K^2`.
    pub fn matrix(&self, phi: f64) -> [[f64; 4]; 4] {
        let [kx, ky] = self.direction();
        let k = [[0.0, 0.0, ky], [0.0, 0.0, -kx], [-ky, kx, 0.0]];
        let k2 = mat3_mul(&k, &k);
        let mut r = identity4();
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] += phi.sin() * k[i][j] + (1.0 - phi.cos()) * k2[i][j];
            }
        }
        let o = [self.origin[0], self.origin[1], self.c];
        mat4_mul(&mat4_mul(&translation(o), &r), &translation([-o[0], -o[1], -o[2]]))
    }

    /// Distance from `p` to the chord's line.
    pub fn distance_to_axis(&self, p: [f64; 3]) -> f64 {
        let [kx, ky] = self.direction();
        let v = [p[0] - self.origin[0], p[1] - self.origin[1], p[2] - self.c];
        let along = v[0] * kx + v[1] * ky;
        let w = [v[0] - along * kx, v[1] - along * ky, v[2]];
        (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt()
    }
}

fn identity4() -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

fn translation(o: [f64; 3]) -> [[f64; 4]; 4] {
    let mut m = identity4();
    for i in 0..3 {
        m[i][3] = o[i];
    }
    m
}

fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

fn mat4_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

/// Applies a homogeneous matrix to a point.
pub fn apply4(m: &[[f64; 4]; 4], p: [f64; 3]) -> [f64; 3] {
    let h = [p[0], p[1], p[2], 1.0];
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|k| m[i][k] * h[k]).sum();
    }
    out
}

/// Samples per tail when checking monotonicity of `z`.
const TAIL_SAMPLES: usize = 1024;
/// Grid side for the height check of the rotated arc.
const HEIGHT_GRID: usize = 256;

/// Picks `t2` halfway between the crossing span and `b`, then solves
/// `z(t1) = z(t2)` on the left tail by bisection.
pub fn choose_axis(arc: &ArcSpec, span: Interval) -> Result<TwistAxis> {
    check_span(arc, span)?;
    let z = |t: f64| arc.curve.z.eval(t);
    monotone_tail(arc, Interval::of(arc.a, span.lo()))?;
    monotone_tail(arc, Interval::of(span.hi(), arc.b))?;
    let t2 = 0.5 * (span.hi() + arc.b);
    let c = z(t2);
    let (mut lo, mut hi) = (arc.a, span.lo());
    let (g_lo, g_hi) = (z(lo) - c, z(hi) - c);
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoAxis(format!("height {c} at t2 = {t2} is not attained on the left tail")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (z(mid) - c).signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t1 = 0.5 * (lo + hi);
    let axis = TwistAxis::through(arc, t1, t2)?;
    check_height(arc, &axis)?;
    Ok(axis)
}

/// Uses caller-supplied `t1`, `t2`.
pub fn choose_axis_pinned(arc: &ArcSpec, span: Interval, t1: f64, t2: f64) -> Result<TwistAxis> {
    check_span(arc, span)?;
    if !(arc.a < t1 && t1 <= span.lo() && span.hi() <= t2 && t2 < arc.b) {
        return Err(Error::NoAxis(format!(
            "need {} < t1 <= {} and {} <= t2 < {}, got t1 = {t1}, t2 = {t2}",
            arc.a,
            span.lo(),
            span.hi(),
            arc.b
        )));
    }
    let axis = TwistAxis::through(arc, t1, t2)?;
    check_height(arc, &axis)?;
    Ok(axis)
}

fn check_span(arc: &ArcSpec, span: Interval) -> Result<()> {
    if !(arc.a < span.lo() && span.hi() < arc.b) {
        return Err(Error::NoAxis(format!("crossing span {span} is not inside the arc ({}, {})", arc.a, arc.b)));
    }
    Ok(())
}

fn monotone_tail(arc: &ArcSpec, tail: Interval) -> Result<()> {
    let vals: Vec<f64> = tail.linspace(TAIL_SAMPLES).iter().map(|&t| arc.curve.z.eval(t)).collect();
    let up = vals.windows(2).all(|w| w[1] > w[0]);
    let down = vals.windows(2).all(|w| w[1] < w[0]);
    if up || down {
        Ok(())
    } else {
        Err(Error::NoAxis(format!("z is not strictly monotone on {tail}")))
    }
}

/// The rotated part must stay above the boundary plane for every angle.
/// `h~` is a convex combination of `h'` and `h`, and `h > 0` inside the arc,
/// so it suffices to check `h'` on `[t1, t2] x [0, 2 pi]`.
fn check_height(arc: &ArcSpec, axis: &TwistAxis) -> Result<()> {
    let ts = Interval::of(axis.t1, axis.t2).linspace(HEIGHT_GRID);
    let phis = full_turn().linspace(HEIGHT_GRID);
    let min = ts
        .iter()
        .flat_map(|&t| {
            let p = arc.curve.eval(t);
            phis.iter().map(move |&phi| axis.rotate(p, phi, RotationFormula::Matrix)[2])
        })
        .fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        Ok(())
    } else {
        Err(Error::AxisTooLow { min_height: min })
    }
}

/// `d2 = (span radius)^2`, `d1 = min(t1^2, t2^2)`.
pub fn default_bump(span: Interval, axis: &TwistAxis) -> Result<SmoothBump> {
    let d2 = span.lo().powi(2).max(span.hi().powi(2));
    let d1 = (axis.t1 * axis.t1).min(axis.t2 * axis.t2);
    if d2 >= d1 {
        return Err(Error::BumpMismatch(format!("span radius^2 = {d2} is not below min(t1^2, t2^2) = {d1}")));
    }
    SmoothBump::new(d1, d2)
}

/// Samples used to validate the bump against the axis layout.
const BUMP_SAMPLES: usize = 1024;
/// Largest bump value tolerated outside `[t1, t2]`.
const BUMP_ZERO_TOL: f64 = 1e-9;

/// An arc together with its twist axis and bump.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistSetup {
    pub arc: ArcSpec,
    pub span: Interval,
    pub axis: TwistAxis,
    pub bump: SmoothBump,
    pub formula: RotationFormula,
}

impl TwistSetup {
    /// Checks that the bump is 1 on the crossing span and vanishes outside
    /// `[t1, t2]`.
    pub fn new(
        arc: ArcSpec,
        span: Interval,
        axis: TwistAxis,
        bump: SmoothBump,
        formula: RotationFormula,
    ) -> Result<Self> {
        for t in span.linspace(BUMP_SAMPLES) {
            if bump.eval(t) != 1.0 {
                return Err(Error::BumpMismatch(format!("B({t}) = {} on the crossing span", bump.eval(t))));
            }
        }
        for tail in [Interval::new(arc.a, axis.t1), Interval::new(axis.t2, arc.b)] {
            let tail = tail.map_err(|_| Error::BumpMismatch("axis endpoints outside the arc".into()))?;
            for t in tail.linspace(BUMP_SAMPLES / 2) {
                if (t < axis.t1 || t > axis.t2) && bump.eval(t) > BUMP_ZERO_TOL {
                    return Err(Error::BumpMismatch(format!("B({t}) = {} outside [t1, t2]", bump.eval(t))));
                }
            }
        }
        Ok(Self { arc, span, axis, bump, formula })
    }

    /// Default axis and bump for `arc` and `span`.
    pub fn auto(arc: ArcSpec, span: Interval) -> Result<Self> {
        let axis = choose_axis(&arc, span)?;
        let bump = default_bump(span, &axis)?;
        Self::new(arc, span, axis, bump, RotationFormula::Matrix)
    }

    pub fn rotated(&self, t: f64, phi: f64) -> [f64; 3] {
        self.axis.rotate(self.arc.curve.eval(t), phi, self.formula)
    }

    /// `B(t) rotated + (1 - B(t)) original`, coordinate-wise.
    pub fn blended(&self, t: f64, phi: f64) -> [f64; 3] {
        let b = self.bump.eval(t);
        let p = self.arc.curve.eval(t);
        if b == 0.0 {
            return p;
        }
        let q = self.axis.rotate(p, phi, self.formula);
        if b == 1.0 {
            return q;
        }
        [b * q[0] + (1.0 - b) * p[0], b * q[1] + (1.0 - b) * p[1], b * q[2] + (1.0 - b) * p[2]]
    }

    /// `(t, theta) -> (f~, g~, h~ cos theta, h~ sin theta)(t, d theta)`.
    pub fn surface(&self, d: u32) -> Surface4 {
        let k = &self.arc.curve;
        let [kx, ky] = self.axis.direction();
        let (origin, r12) = match self.formula {
            RotationFormula::Matrix => ([self.axis.origin[0], self.axis.origin[1], self.axis.c], -kx),
            RotationFormula::Printed => ([0.0, 0.0, self.axis.c], -ky),
        };
        let one = CoordFn::constant(1.0);
        let cos = CoordFn::trig(1.0, Trig::cos(d));
        let sin = CoordFn::trig(1.0, Trig::sin(d));
        let lin = |a: f64, b: f64| one.scale(a).add(&cos.scale(b));
        // Rotation entries as functions of theta, with phi = d theta.
        let r = [
            [lin(kx * kx, ky * ky), lin(kx * ky, -kx * ky), sin.scale(ky)],
            [lin(kx * ky, -kx * ky), lin(ky * ky, kx * kx), sin.scale(r12)],
            [sin.scale(-ky), sin.scale(kx), cos.clone()],
        ];
        let v = [k.x.add_constant(-origin[0]), k.y.add_constant(-origin[1]), k.z.add_constant(-origin[2])];
        let orig = [&k.x, &k.y, &k.z];
        let blended: Vec<Expr2> = (0..3)
            .map(|i| {
                let mut e =
                    Expr2::zero().plus_weighted(Weight::Bump(self.bump), CoordFn::constant(origin[i]), one.clone());
                for j in 0..3 {
                    e = e.plus_weighted(Weight::Bump(self.bump), v[j].clone(), r[i][j].clone());
                }
                e.plus_weighted(Weight::BumpComplement(self.bump), orig[i].clone(), one.clone())
            })
            .collect();
        let coords = [
            blended[0].clone(),
            blended[1].clone(),
            blended[2].mul_s(&CoordFn::trig(1.0, Trig::cos(1))),
            blended[2].mul_s(&CoordFn::trig(1.0, Trig::sin(1))),
        ];
        let mut s = Surface4::single(format!("{d}-twist spun {}", k.name), self.arc.interval(), full_turn(), coords);
        s.s_periodic = true;
        s
    }
}

pub fn twist_spun_surface(setup: &TwistSetup, d: u32) -> Surface4 {
    setup.surface(d)
}
