//! Bivariate expressions in separated form: `sum_k w_k(t) a_k(t) b_k(s)`.
//!
//! `a_k` and `b_k` are [`CoordFn`]s; `w_k` is a product of non-analytic
//! weights (the twist bump, its complement, Tube profiles). Every surface in
//! the crate is four of these, which keeps evaluation, differentiation and
//! polynomialization uniform.

use crate::coordfn::CoordFn;
use crate::error::{Error, Result};
use crate::poly::{chebyshev_approx, sup_abs, sup_diff, Interval};
use crate::tube::BumpProfile;
use crate::twist::SmoothBump;

/// Samples used when measuring univariate approximation errors.
const BOUND_SAMPLES: usize = 8193;

#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Bump(SmoothBump),
    /// `1 - B(t)`.
    BumpComplement(SmoothBump),
    Profile(BumpProfile),
}

impl Weight {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Weight::Bump(b) => b.eval(t),
            Weight::BumpComplement(b) => 1.0 - b.eval(t),
            Weight::Profile(p) => p.eval(t),
        }
    }
}

/// The `t`-side of a term: `prod(weights) * base(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TFactor {
    pub weights: Vec<Weight>,
    pub base: CoordFn,
}

impl TFactor {
    pub fn eval(&self, t: f64) -> f64 {
        self.weights.iter().fold(self.base.eval(t), |acc, w| acc * w.eval(t))
    }

    pub fn is_weighted(&self) -> bool {
        !self.weights.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term2 {
    pub t: TFactor,
    pub s: CoordFn,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expr2 {
    terms: Vec<Term2>,
}

impl Expr2 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `a(t) * b(s)`.
    pub fn product(a: CoordFn, b: CoordFn) -> Self {
        Self::default().plus(a, b)
    }

    pub fn of_t(a: CoordFn) -> Self {
        Self::product(a, CoordFn::constant(1.0))
    }

    pub fn of_s(b: CoordFn) -> Self {
        Self::product(CoordFn::constant(1.0), b)
    }

    /// Appends `a(t) * b(s)`; zero terms are dropped.
    pub fn plus(mut self, a: CoordFn, b: CoordFn) -> Self {
        self.push(TFactor { weights: vec![], base: a }, b);
        self
    }

    /// Appends `w(t) * a(t) * b(s)`.
    pub fn plus_weighted(mut self, w: Weight, a: CoordFn, b: CoordFn) -> Self {
        self.push(TFactor { weights: vec![w], base: a }, b);
        self
    }

    fn push(&mut self, t: TFactor, s: CoordFn) {
        if !t.base.is_zero() && !s.is_zero() {
            self.terms.push(Term2 { t, s });
        }
    }

    pub fn terms(&self) -> &[Term2] {
        &self.terms
    }

    pub fn add(&self, other: &Expr2) -> Expr2 {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scale(&self, c: f64) -> Expr2 {
        let mut out = Expr2::zero();
        for term in &self.terms {
            out.push(TFactor { weights: term.t.weights.clone(), base: term.t.base.scale(c) }, term.s.clone());
        }
        out
    }

    /// Multiplies every `s`-factor by `m(s)`.
    pub fn mul_s(&self, m: &CoordFn) -> Expr2 {
        let mut out = Expr2::zero();
        for term in &self.terms {
            out.push(term.t.clone(), term.s.mul(m));
        }
        out
    }

    /// Attaches `w` to every term.
    pub fn weighted(&self, w: &Weight) -> Expr2 {
        let mut out = self.clone();
        for term in &mut out.terms {
            term.t.weights.push(w.clone());
        }
        out
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        self.terms.iter().map(|term| term.t.eval(t) * term.s.eval(s)).sum()
    }

    /// True when every factor is a weight-free polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|term| !term.t.is_weighted() && term.t.base.is_polynomial() && term.s.is_polynomial())
    }

    pub fn has_weights(&self) -> bool {
        self.terms.iter().any(|term| term.t.is_weighted())
    }

    /// Partial derivative in `t`; `None` when a weight is present.
    pub fn partial_t(&self) -> Option<Expr2> {
        let mut out = Expr2::zero();
        for term in &self.terms {
            if term.t.is_weighted() {
                return None;
            }
            out = out.plus(term.t.base.derivative(), term.s.clone());
        }
        Some(out)
    }

    /// Partial derivative in `s`; `None` when a weight is present.
    pub fn partial_s(&self) -> Option<Expr2> {
        let mut out = Expr2::zero();
        for term in &self.terms {
            if term.t.is_weighted() {
                return None;
            }
            out = out.plus(term.t.base.clone(), term.s.derivative());
        }
        Some(out)
    }

    /// Replaces every non-polynomial factor by a Chebyshev interpolant.
    ///
    /// Terms sharing an `s`-factor are merged first. A weight-free `t`-side
    /// keeps its polynomial part and has each trig factor substituted; a
    /// weighted `t`-side is interpolated as a whole. Returns the polynomial
    /// expression and an upper bound on `|exact - poly|` over the rectangle,
    /// assembled by the triangle inequality from measured univariate errors.
    pub fn polynomialize(&self, t_dom: Interval, s_dom: Interval, degree: usize) -> Result<(Expr2, f64)> {
        let mut groups: Vec<(CoordFn, Vec<&TFactor>)> = Vec::new();
        for term in &self.terms {
            match groups.iter_mut().find(|(s, _)| *s == term.s) {
                Some((_, ts)) => ts.push(&term.t),
                None => groups.push((term.s.clone(), vec![&term.t])),
            }
        }

        let mut out = Expr2::zero();
        let mut bound = 0.0;
        for (s_fn, t_fns) in groups {
            let weighted = t_fns.iter().any(|f| f.is_weighted());
            let exact_t = |t: f64| t_fns.iter().map(|f| f.eval(t)).sum::<f64>();
            let (t_poly, t_err) = if weighted {
                let p = chebyshev_approx(exact_t, t_dom, degree)?;
                let err = sup_diff(|t| p.eval(t), exact_t, t_dom, BOUND_SAMPLES);
                (p, err)
            } else {
                let sum = t_fns.iter().fold(CoordFn::zero(), |acc, f| acc.add(&f.base));
                match sum.to_poly() {
                    Some(p) => (p, 0.0),
                    None => {
                        let p = sum.substitute_trig(t_dom, degree)?;
                        let err = sup_diff(|t| p.eval(t), |t| sum.eval(t), t_dom, BOUND_SAMPLES);
                        (p, err)
                    }
                }
            };
            let (s_poly, s_err) = match s_fn.to_poly() {
                Some(p) => (p, 0.0),
                None => {
                    let p = s_fn.substitute_trig(s_dom, degree)?;
                    let err = sup_diff(|s| p.eval(s), |s| s_fn.eval(s), s_dom, BOUND_SAMPLES);
                    (p, err)
                }
            };
            // |ab - a'b'| <= |a - a'| |b'| + |a| |b - b'|
            if t_err > 0.0 {
                bound += t_err * bounded_sup(|s| s_poly.eval(s), s_dom)?;
            }
            if s_err > 0.0 {
                bound += s_err * bounded_sup(exact_t, t_dom)?;
            }
            out = out.plus(CoordFn::from_poly(&t_poly), CoordFn::from_poly(&s_poly));
        }
        Ok((out, bound))
    }
}

fn bounded_sup(g: impl Fn(f64) -> f64, dom: Interval) -> Result<f64> {
    if !dom.is_finite() {
        return Err(Error::UnboundedDomain);
    }
    Ok(sup_abs(g, dom, BOUND_SAMPLES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordfn::Trig;
    use std::f64::consts::PI;

    #[test]
    fn product_and_sum_evaluate() {
        let h = CoordFn::poly(&[3.0, 0.0, 4.0, 0.0, -1.0]);
        let e = Expr2::product(h.clone(), CoordFn::trig(1.0, Trig::cos(1))).plus(CoordFn::t(), CoordFn::t());
        let (t, s) = (0.7, 1.3);
        assert!((e.eval(t, s) - (h.eval(t) * s.cos() + t * s)).abs() < 1e-14);
    }

    #[test]
    fn partials_of_polynomial_expression() {
        // p = t^5 - 10 t + u^2 (t + s), u = 2
        let p = Expr2::of_t(CoordFn::poly(&[0.0, -10.0, 0.0, 0.0, 0.0, 1.0]))
            .plus(CoordFn::monomial(4.0, 1), CoordFn::constant(1.0))
            .plus(CoordFn::constant(4.0), CoordFn::t());
        let pt = p.partial_t().unwrap();
        let ps = p.partial_s().unwrap();
        assert!((pt.eval(1.0, 5.0) - (5.0 - 10.0 + 4.0)).abs() < 1e-14);
        assert!((ps.eval(1.0, 5.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn weights_block_symbolic_partials() {
        let b = SmoothBump::new(4.8, 3.8).unwrap();
        let e = Expr2::zero().plus_weighted(Weight::Bump(b), CoordFn::t(), CoordFn::constant(1.0));
        assert!(e.partial_t().is_none());
        assert!(e.has_weights() && !e.is_polynomial());
    }

    #[test]
    fn polynomialize_spun_coordinate_bound() {
        let h = CoordFn::poly(&[3.0, 0.0, 4.0, 0.0, -1.0]);
        let e = Expr2::product(h.clone(), CoordFn::trig(1.0, Trig::cos(1)));
        let a = (2.0 + 7f64.sqrt()).sqrt();
        let (t_dom, s_dom) = (Interval::of(-a, a), Interval::of(0.0, 2.0 * PI));
        let (p, bound) = e.polynomialize(t_dom, s_dom, 8).unwrap();
        assert!(p.is_polynomial());
        // max |h| = 7 at t^2 = 2, times the cos interpolation error
        let c = chebyshev_approx(f64::cos, s_dom, 8).unwrap();
        let e_cos = crate::poly::max_error(&c, f64::cos, s_dom, BOUND_SAMPLES);
        assert!((bound - 7.0 * e_cos).abs() < 1e-6 * bound);
        let mut worst = 0.0f64;
        for t in t_dom.linspace(128) {
            for s in s_dom.linspace(128) {
                worst = worst.max((p.eval(t, s) - e.eval(t, s)).abs());
            }
        }
        assert!(worst <= bound);
    }

    #[test]
    fn polynomial_input_is_unchanged() {
        let e = Expr2::product(CoordFn::poly(&[1.0, 2.0]), CoordFn::poly(&[0.0, 0.0, 1.0]));
        let (p, bound) =
            e.polynomialize(Interval::of(0.0, f64::INFINITY), Interval::of(f64::NEG_INFINITY, 0.0), 8).unwrap();
        assert_eq!(bound, 0.0);
        assert_eq!(p, e);
    }

    #[test]
    fn trig_on_unbounded_domain_is_rejected() {
        let e = Expr2::of_s(CoordFn::trig(1.0, Trig::sin(1)));
        let r = e.polynomialize(Interval::of(0.0, 1.0), Interval::of(0.0, f64::INFINITY), 8);
        assert!(matches!(r, Err(Error::UnboundedDomain)));
    }
}
