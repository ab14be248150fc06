//! Coordinate functions: finite sums of `c * t^p * {1, cos(m t), sin(m t)}`.
//!
//! The set is closed under addition, multiplication (product-to-sum) and
//! differentiation, which covers every polynomial and trigonometric knot in
//! the catalog.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{chebyshev_approx, Interval, Poly1};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TrigKind {
    #[serde(rename = "cos")]
    Cos,
    #[serde(rename = "sin")]
    Sin,
}

/// `cos(freq * t)` or `sin(freq * t)` with a positive integer frequency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Trig {
    #[serde(rename = "k")]
    pub kind: TrigKind,
    #[serde(rename = "f")]
    pub freq: u32,
}

impl Trig {
    pub fn cos(freq: u32) -> Self {
        Trig { kind: TrigKind::Cos, freq }
    }

    pub fn sin(freq: u32) -> Self {
        Trig { kind: TrigKind::Sin, freq }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = self.freq as f64 * t;
        match self.kind {
            TrigKind::Cos => x.cos(),
            TrigKind::Sin => x.sin(),
        }
    }
}

/// One term `coeff * t^power * trig(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "c")]
    pub coeff: f64,
    #[serde(rename = "p")]
    pub power: u32,
    pub trig: Option<Trig>,
}

impl Term {
    pub fn eval(&self, t: f64) -> f64 {
        let base = self.coeff * t.powi(self.power as i32);
        match self.trig {
            None => base,
            Some(tr) => base * tr.eval(t),
        }
    }
}

#[derive(Deserialize)]
struct RawCoordFn {
    terms: Vec<Term>,
}

/// A coordinate function in canonical form: like terms merged, zero terms
/// dropped, sorted by (trig, power).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoordFn")]
pub struct CoordFn {
    terms: Vec<Term>,
}

impl TryFrom<RawCoordFn> for CoordFn {
    type Error = Error;

    fn try_from(raw: RawCoordFn) -> Result<Self> {
        for term in &raw.terms {
            if !term.coeff.is_finite() {
                return Err(Error::Invalid(format!("non-finite coefficient {}", term.coeff)));
            }
            if matches!(term.trig, Some(Trig { freq: 0, .. })) {
                return Err(Error::Invalid("trig frequency must be a positive integer".into()));
            }
        }
        Ok(CoordFn::from_terms(raw.terms))
    }
}

type TermKey = (Option<Trig>, u32);

impl CoordFn {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms(vec![Term { coeff: c, power: 0, trig: None }])
    }

    /// The identity `t`.
    pub fn t() -> Self {
        Self::monomial(1.0, 1)
    }

    pub fn monomial(coeff: f64, power: u32) -> Self {
        Self::from_terms(vec![Term { coeff, power, trig: None }])
    }

    pub fn trig(coeff: f64, trig: Trig) -> Self {
        Self::from_terms(vec![Term { coeff, power: 0, trig: Some(trig) }])
    }

    /// `sum_k coeffs[k] * t^k`.
    pub fn poly(coeffs: &[f64]) -> Self {
        Self::from_terms(
            coeffs.iter().enumerate().map(|(k, &c)| Term { coeff: c, power: k as u32, trig: None }).collect(),
        )
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut merged: BTreeMap<TermKey, f64> = BTreeMap::new();
        for term in terms {
            let (sign, trig) = match term.trig {
                Some(Trig { freq: 0, kind: TrigKind::Cos }) => (1.0, None),
                Some(Trig { freq: 0, kind: TrigKind::Sin }) => (0.0, None),
                other => (1.0, other),
            };
            let c = sign * term.coeff;
            if c != 0.0 {
                *merged.entry((trig, term.power)).or_insert(0.0) += c;
            }
        }
        CoordFn {
            terms: merged
                .into_iter()
                .filter(|(_, c)| *c != 0.0)
                .map(|((trig, power), coeff)| Term { coeff, power, trig })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| t.trig.is_none())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    /// Term-wise product rule.
    pub fn derivative(&self) -> CoordFn {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for term in &self.terms {
            if term.power > 0 {
                out.push(Term { coeff: term.coeff * term.power as f64, power: term.power - 1, trig: term.trig });
            }
            if let Some(tr) = term.trig {
                let m = tr.freq as f64;
                let (coeff, kind) = match tr.kind {
                    TrigKind::Cos => (-m * term.coeff, TrigKind::Sin),
                    TrigKind::Sin => (m * term.coeff, TrigKind::Cos),
                };
                out.push(Term { coeff, power: term.power, trig: Some(Trig { kind, freq: tr.freq }) });
            }
        }
        CoordFn::from_terms(out)
    }

    pub fn add(&self, other: &CoordFn) -> CoordFn {
        CoordFn::from_terms(self.terms.iter().chain(&other.terms).copied().collect())
    }

    pub fn sub(&self, other: &CoordFn) -> CoordFn {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> CoordFn {
        CoordFn::from_terms(self.terms.iter().map(|t| Term { coeff: t.coeff * s, ..*t }).collect())
    }

    pub fn add_constant(&self, c: f64) -> CoordFn {
        self.add(&CoordFn::constant(c))
    }

    /// Product, with trig products expanded by the product-to-sum identities.
    pub fn mul(&self, other: &CoordFn) -> CoordFn {
        let mut out = Vec::with_capacity(2 * self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let power = a.power + b.power;
                let coeff = a.coeff * b.coeff;
                match (a.trig, b.trig) {
                    (None, tr) | (tr, None) => out.push(Term { coeff, power, trig: tr }),
                    (Some(x), Some(y)) => {
                        for (c, trig) in trig_product(x, y) {
                            out.push(Term { coeff: coeff * c, power, trig: Some(trig) });
                        }
                    }
                }
            }
        }
        CoordFn::from_terms(out)
    }

    /// `t -> f(-t)`.
    pub fn reflect(&self) -> CoordFn {
        CoordFn::from_terms(
            self.terms
                .iter()
                .map(|t| {
                    let mut sign = if t.power % 2 == 1 { -1.0 } else { 1.0 };
                    if matches!(t.trig, Some(Trig { kind: TrigKind::Sin, .. })) {
                        sign = -sign;
                    }
                    Term { coeff: sign * t.coeff, ..*t }
                })
                .collect(),
        )
    }

    /// Lossless conversion when the function is trig-free.
    pub fn to_poly(&self) -> Option<Poly1> {
        if !self.is_polynomial() {
            return None;
        }
        let deg = self.terms.iter().map(|t| t.power).max().unwrap_or(0) as usize;
        let mut coeffs = vec![0.0; deg + 1];
        for t in &self.terms {
            coeffs[t.power as usize] += t.coeff;
        }
        Some(Poly1::new(coeffs))
    }

    pub fn from_poly(p: &Poly1) -> CoordFn {
        CoordFn::poly(p.coeffs())
    }

    /// Replaces every trig factor by its degree-`degree` Chebyshev interpolant
    /// on `domain`, keeping the polynomial factors exact.
    pub fn substitute_trig(&self, domain: Interval, degree: usize) -> Result<Poly1> {
        let mut cache: BTreeMap<Trig, Poly1> = BTreeMap::new();
        let mut acc = Poly1::zero();
        for term in &self.terms {
            let mut mono = vec![0.0; term.power as usize + 1];
            mono[term.power as usize] = term.coeff;
            let mono = Poly1::new(mono);
            let piece = match term.trig {
                None => mono,
                Some(tr) => {
                    if !domain.is_finite() {
                        return Err(Error::UnboundedDomain);
                    }
                    let approx = match cache.get(&tr) {
                        Some(p) => p.clone(),
                        None => {
                            let p = chebyshev_approx(|x| tr.eval(x), domain, degree)?;
                            cache.insert(tr, p.clone());
                            p
                        }
                    };
                    mono.mul(&approx)
                }
            };
            acc = acc.add(&piece);
        }
        Ok(acc)
    }
}

fn trig_product(x: Trig, y: Trig) -> Vec<(f64, Trig)> {
    use TrigKind::*;
    let (a, b) = (x.freq as i64, y.freq as i64);
    let diff = |kind: TrigKind, m: i64| -> (f64, Trig) {
        // Fold negative frequencies: cos(-m t) = cos(m t), sin(-m t) = -sin(m t).
        let sign = if m < 0 && kind == Sin { -1.0 } else { 1.0 };
        (sign, Trig { kind, freq: m.unsigned_abs() as u32 })
    };
    let sum = |kind: TrigKind| Trig { kind, freq: (a + b) as u32 };
    match (x.kind, y.kind) {
        (Cos, Cos) => {
            let (s, t) = diff(Cos, a - b);
            vec![(0.5 * s, t), (0.5, sum(Cos))]
        }
        (Sin, Sin) => {
            let (s, t) = diff(Cos, a - b);
            vec![(0.5 * s, t), (-0.5, sum(Cos))]
        }
        (Sin, Cos) => {
            let (s, t) = diff(Sin, a - b);
            vec![(0.5, sum(Sin)), (0.5 * s, t)]
        }
        (Cos, Sin) => {
            let (s, t) = diff(Sin, b - a);
            vec![(0.5, sum(Sin)), (0.5 * s, t)]
        }
    }
}

impl fmt::Display for CoordFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let c = term.coeff;
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            }
            let mag = c.abs();
            let bare = term.power == 0 && term.trig.is_none();
            if mag != 1.0 || bare {
                write!(f, "{mag}")?;
            }
            if term.power > 0 {
                if mag != 1.0 {
                    write!(f, " ")?;
                }
                match term.power {
                    1 => write!(f, "t")?,
                    p => write!(f, "t^{p}")?,
                }
            }
            if let Some(tr) = term.trig {
                if mag != 1.0 || term.power > 0 {
                    write!(f, " ")?;
                }
                let name = match tr.kind {
                    TrigKind::Cos => "cos",
                    TrigKind::Sin => "sin",
                };
                match tr.freq {
                    1 => write!(f, "{name}(t)")?,
                    m => write!(f, "{name}({m}t)")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn torus_x() -> CoordFn {
        // cos(2t)(cos(7t) + 3)
        CoordFn::trig(1.0, Trig::cos(2)).mul(&CoordFn::trig(1.0, Trig::cos(7)).add_constant(3.0))
    }

    #[test]
    fn evaluates_examples() {
        assert_eq!(CoordFn::poly(&[0.0, -3.0, 0.0, 1.0]).eval(2.0), 2.0);
        assert_eq!(CoordFn::poly(&[3.0, 0.0, 4.0, 0.0, -1.0]).eval(0.0), 3.0);
        assert_eq!(torus_x().eval(0.0), 4.0);
    }

    #[test]
    fn product_to_sum_matches_direct_product() {
        let f = torus_x();
        assert!(f.terms().iter().all(|t| t.power == 0));
        let g = CoordFn::trig(1.0, Trig::sin(2)).mul(&CoordFn::trig(1.0, Trig::cos(7)).add_constant(3.0));
        for k in 0..50 {
            let t = -3.0 + 0.17 * k as f64;
            let x = (2.0 * t).cos() * ((7.0 * t).cos() + 3.0);
            let y = (2.0 * t).sin() * ((7.0 * t).cos() + 3.0);
            assert!((f.eval(t) - x).abs() < 1e-13);
            assert!((g.eval(t) - y).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(CoordFn::poly(&[0.0, -3.0, 0.0, 1.0]).derivative(), CoordFn::poly(&[-3.0, 0.0, 3.0]));
        assert!(CoordFn::constant(5.0).derivative().is_zero());
        assert_eq!(CoordFn::trig(1.0, Trig::sin(7)).derivative(), CoordFn::trig(7.0, Trig::cos(7)));
    }

    #[test]
    fn zero_frequency_folds() {
        assert_eq!(CoordFn::trig(2.0, Trig::cos(0)), CoordFn::constant(2.0));
        assert!(CoordFn::trig(2.0, Trig::sin(0)).is_zero());
        // cos(t) * cos(t) = 1/2 + cos(2t)/2
        let sq = CoordFn::trig(1.0, Trig::cos(1)).mul(&CoordFn::trig(1.0, Trig::cos(1)));
        assert_eq!(sq, CoordFn::constant(0.5).add(&CoordFn::trig(0.5, Trig::cos(2))));
    }

    #[test]
    fn json_form() {
        let js = r#"{"terms":[{"c":1.0,"p":3,"trig":null},{"c":-3.0,"p":1,"trig":null},{"c":2.0,"p":0,"trig":{"k":"sin","f":7}}]}"#;
        let f: CoordFn = serde_json::from_str(js).unwrap();
        assert!((f.eval(1.0) - (1.0 - 3.0 + 2.0 * 7f64.sin())).abs() < 1e-15);
        let back: CoordFn = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"terms":[{"c":1.0,"p":0,"trig":{"k":"cos","f":0}}]}"#;
        assert!(serde_json::from_str::<CoordFn>(bad).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(CoordFn::poly(&[0.0, -3.0, 0.0, 1.0]).to_string(), "-3 t + t^3");
        assert_eq!(CoordFn::trig(1.0, Trig::sin(7)).to_string(), "sin(7t)");
    }

    #[test]
    fn substitute_trig_keeps_polynomial_part() {
        let f = CoordFn::poly(&[1.0, 2.0]).add(&CoordFn::trig(1.0, Trig::cos(1)));
        let dom = Interval::of(0.0, 6.0);
        let p = f.substitute_trig(dom, 12).unwrap();
        for k in 0..20 {
            let t = 0.3 * k as f64;
            assert!((p.eval(t) - f.eval(t)).abs() < 1e-6);
        }
        assert!(f.substitute_trig(Interval::of(0.0, f64::INFINITY), 8).is_err());
        assert!(CoordFn::t().substitute_trig(Interval::of(0.0, f64::INFINITY), 8).is_ok());
    }

    fn arb_coordfn() -> impl Strategy<Value = CoordFn> {
        let trig = prop_oneof![
            Just(None),
            (1u32..8).prop_map(|f| Some(Trig::cos(f))),
            (1u32..8).prop_map(|f| Some(Trig::sin(f))),
        ];
        prop::collection::vec((-5.0f64..5.0, 0u32..5, trig), 0..6).prop_map(|v| {
            CoordFn::from_terms(v.into_iter().map(|(c, p, trig)| Term { coeff: c, power: p, trig }).collect())
        })
    }

    proptest! {
        #[test]
        fn derivative_matches_central_difference(f in arb_coordfn(), t in -2.0f64..2.0) {
            let h = 1e-5;
            let fd = (f.eval(t + h) - f.eval(t - h)) / (2.0 * h);
            let d = f.derivative().eval(t);
            // Central-difference truncation error is h^2/6 * f'''(xi), xi within h of t.
            let d3 = f.derivative().derivative().derivative();
            let m3 = [t - h, t, t + h].iter().fold(0.0f64, |m, &x| m.max(d3.eval(x).abs()));
            let trunc = h * h / 6.0 * m3 * 1.01;
            prop_assert!((fd - d).abs() <= 1e-6 * (1.0 + d.abs()) + trunc, "fd {} vs {}", fd, d);
        }

        #[test]
        fn poly_roundtrip_is_exact(coeffs in prop::collection::vec(-10.0f64..10.0, 1..8)) {
            let p = Poly1::new(coeffs);
            let f = CoordFn::from_poly(&p);
            prop_assert_eq!(f.to_poly().unwrap(), p);
        }

        #[test]
        fn mul_is_pointwise(f in arb_coordfn(), g in arb_coordfn(), t in -2.0f64..2.0) {
            let lhs = f.mul(&g).eval(t);
            let rhs = f.eval(t) * g.eval(t);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }

        #[test]
        fn reflect_is_pointwise(f in arb_coordfn(), t in -2.0f64..2.0) {
            prop_assert!((f.reflect().eval(t) - f.eval(-t)).abs() <= 1e-9 * (1.0 + f.eval(-t).abs()));
        }
    }
}
