//! Univariate polynomials, real-root isolation and Chebyshev interpolation.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest degree accepted by [`chebyshev_approx`]. Monomial conversion of
/// higher-degree Chebyshev series loses too many digits in double precision.
pub const MAX_CHEB_DEGREE: usize = 64;

/// Default number of uniform bracketing cells used by the root finders.
pub const ROOT_GRID_CELLS: usize = 4096;

const BISECTION_BUDGET: usize = 400;

/// A real interval `[lo, hi]`. Either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Invalid(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Panics on an empty interval. For literals and internal construction.
    pub fn of(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi).expect("valid interval")
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Intersection, or `None` when it is empty or a single point.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi)).ok()
    }

    /// `n` equally spaced points including both ends. Requires a finite interval.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        match n {
            0 => vec![],
            1 => vec![self.mid()],
            _ => {
                let step = self.len() / (n - 1) as f64;
                (0..n).map(|i| if i == n - 1 { self.hi } else { self.lo + step * i as f64 }).collect()
            }
        }
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Dense polynomial; `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly1 {
    coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn scale(&self, s: f64) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        Poly1::new((0..n).map(|k| get(&self.coeffs, k) + get(&other.coeffs, k)).collect())
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        if self.is_zero() || other.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1::new(out)
    }

    /// `p(alpha * x + beta)`.
    pub fn compose_affine(&self, alpha: f64, beta: f64) -> Poly1 {
        let lin = Poly1::new(vec![beta, alpha]);
        self.coeffs.iter().rev().fold(Poly1::zero(), |acc, &c| acc.mul(&lin).add(&Poly1::constant(c)))
    }

    /// Cauchy bound: every real root satisfies `|x| <= bound`.
    pub fn root_bound(&self) -> f64 {
        let lead = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)].iter().fold(0.0f64, |m, c| m.max(c.abs() / lead));
        1.0 + m
    }
}

/// All real roots of `p` in `domain`, ascending, each within `tol` of a true
/// root. Roots of even multiplicity are found through the critical points of
/// `p` and reported once.
///
/// The domain is split at a uniform grid of [`ROOT_GRID_CELLS`] cells and at
/// every real critical point, so `p` is monotone on each piece and a piece
/// holds at most one root. Unbounded ends are clipped to the Cauchy bound.
pub fn real_roots(p: &Poly1, domain: Interval, tol: f64) -> Result<Vec<f64>> {
    if p.is_zero() {
        return Err(Error::Invalid("real_roots of the zero polynomial".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    if p.degree() == 0 {
        return Ok(vec![]);
    }
    let bound = p.root_bound();
    let lo = domain.lo().max(-bound);
    let hi = domain.hi().min(bound);
    if lo > hi {
        return Ok(vec![]);
    }
    if lo == hi {
        return Ok(if p.eval(lo) == 0.0 { vec![lo] } else { vec![] });
    }
    let span = Interval::of(lo, hi);
    let dp = p.derivative();
    let critical = if dp.degree() >= 1 { real_roots(&dp, span, tol)? } else { vec![] };

    let mut breaks = span.linspace(ROOT_GRID_CELLS + 1);
    breaks.extend(critical.iter().copied());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let residual_tol = tol * (1.0 + p.max_abs_coeff());
    let f = |x: f64| p.eval(x);
    let df = |x: f64| dp.eval(x);
    let mut roots = bracket_and_refine(&f, &df, &breaks, tol)?;
    roots.extend(critical.iter().copied().filter(|&c| p.eval(c).abs() <= residual_tol));
    Ok(merge_close(roots, tol))
}

/// Roots of an arbitrary smooth function on a finite domain by sign-change
/// bracketing on `cells` uniform cells, bisection and one Newton step.
/// Tangential zeros are picked up at grid-local minima of `|f|` whose
/// refined value is within `residual_tol`.
pub fn roots_of_fn<F, D>(f: F, df: D, domain: Interval, cells: usize, tol: f64, residual_tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !domain.is_finite() {
        return Err(Error::DomainUnbounded);
    }
    let grid = domain.linspace(cells.max(1) + 1);
    let mut roots = bracket_and_refine(&f, &df, &grid, tol)?;
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    for (x, v) in [(grid[0], vals[0]), (grid[grid.len() - 1], vals[vals.len() - 1])] {
        if v.abs() <= residual_tol {
            roots.push(x);
        }
    }
    for i in 1..grid.len().saturating_sub(1) {
        let (a, b, c) = (vals[i - 1].abs(), vals[i].abs(), vals[i + 1].abs());
        let same_sign = vals[i - 1].signum() == vals[i].signum() && vals[i].signum() == vals[i + 1].signum();
        if same_sign && b <= a && b <= c {
            // Golden-section on |f| inside the two neighbouring cells.
            let (lo, hi) = (grid[i - 1], grid[i + 1]);
            if roots.iter().any(|&r| lo <= r && r <= hi) {
                continue;
            }
            let x = golden_min(|x| f(x).abs(), lo, hi, tol);
            if f(x).abs() <= residual_tol {
                roots.push(x);
            }
        }
    }
    Ok(merge_close(roots, tol))
}

fn bracket_and_refine(f: &dyn Fn(f64) -> f64, df: &dyn Fn(f64) -> f64, breaks: &[f64], tol: f64) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    let mut prev = breaks[0];
    let mut fprev = f(prev);
    if fprev == 0.0 {
        roots.push(prev);
    }
    for &x in &breaks[1..] {
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if fprev != 0.0 && (fprev < 0.0) != (fx < 0.0) {
            roots.push(bisect(f, df, prev, x, fprev, tol)?);
        }
        prev = x;
        fprev = fx;
    }
    Ok(roots)
}

fn bisect(
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    tol: f64,
) -> Result<f64> {
    let mut iter = 0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        iter += 1;
        if iter > BISECTION_BUDGET {
            return Err(Error::NonConvergence(format!("bisection on [{a}, {b}] exceeded {BISECTION_BUDGET} steps")));
        }
    }
    let x = 0.5 * (a + b);
    let (fx, dfx) = (f(x), df(x));
    if dfx != 0.0 && dfx.is_finite() {
        let polished = x - fx / dfx;
        if polished >= a && polished <= b && f(polished).abs() <= fx.abs() {
            return Ok(polished);
        }
    }
    Ok(x)
}

fn golden_min(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a) <= tol {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

fn merge_close(mut roots: Vec<f64>, tol: f64) -> Vec<f64> {
    roots.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last() {
            Some(&last) if (r - last).abs() <= 4.0 * tol => {}
            _ => out.push(r),
        }
    }
    out
}

/// Degree-`degree` interpolant of `target` at the Chebyshev-Gauss nodes of
/// `domain`, expanded into monomial coefficients in the domain variable.
pub fn chebyshev_approx<F: Fn(f64) -> f64>(target: F, domain: Interval, degree: usize) -> Result<Poly1> {
    if !domain.is_finite() {
        return Err(Error::UnboundedDomain);
    }
    if degree > MAX_CHEB_DEGREE {
        return Err(Error::Invalid(format!("Chebyshev degree {degree} exceeds the cap {MAX_CHEB_DEGREE}")));
    }
    let n = degree + 1;
    let half = 0.5 * domain.len();
    let mid = domain.mid();
    let theta: Vec<f64> = (0..n).map(|k| PI * (k as f64 + 0.5) / n as f64).collect();
    let values: Vec<f64> = theta.iter().map(|th| target(mid + half * th.cos())).collect();

    let mut series = vec![0.0; n];
    for (j, c) in series.iter_mut().enumerate() {
        let sum: f64 = values.iter().zip(&theta).map(|(v, th)| v * (j as f64 * th).cos()).sum();
        *c = 2.0 * sum / n as f64;
    }
    series[0] *= 0.5;

    // Sum of c_j T_j(x) in the monomial basis of x in [-1, 1].
    let mut in_x = Poly1::zero();
    let mut t_prev = Poly1::constant(1.0);
    let mut t_cur = Poly1::new(vec![0.0, 1.0]);
    for (j, &c) in series.iter().enumerate() {
        let tj = match j {
            0 => t_prev.clone(),
            1 => t_cur.clone(),
            _ => {
                let next = Poly1::new(vec![0.0, 2.0]).mul(&t_cur).add(&t_prev.scale(-1.0));
                t_prev = std::mem::replace(&mut t_cur, next);
                t_cur.clone()
            }
        };
        in_x = in_x.add(&tj.scale(c));
    }
    // x = (t - mid) / half
    Ok(in_x.compose_affine(1.0 / half, -mid / half))
}

/// Largest `|approx(x) - target(x)|` over `n` uniform samples of `domain`.
pub fn max_error<F: Fn(f64) -> f64>(approx: &Poly1, target: F, domain: Interval, n: usize) -> f64 {
    sup_diff(|x| approx.eval(x), target, domain, n)
}

/// Largest `|a(x) - b(x)|` over `n` uniform samples of a finite `domain`.
pub fn sup_diff(a: impl Fn(f64) -> f64, b: impl Fn(f64) -> f64, domain: Interval, n: usize) -> f64 {
    domain.linspace(n.max(2)).into_iter().fold(0.0, |m, x| m.max((a(x) - b(x)).abs()))
}

/// Largest `|g(x)|` over `n` uniform samples of a finite `domain`.
pub fn sup_abs(g: impl Fn(f64) -> f64, domain: Interval, n: usize) -> f64 {
    domain.linspace(n.max(2)).into_iter().fold(0.0, |m, x| m.max(g(x).abs()))
}
