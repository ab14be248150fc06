//! Parametric surfaces in R^4, possibly piecewise in `s`.

use crate::error::{Error, Result};
use crate::expr::Expr2;
use crate::poly::Interval;

/// How the `t` parameter is laid out on a sampling grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TSampling {
    /// Uniform, both endpoints included.
    Closed,
    /// Uniform over one period, right endpoint dropped; stitched.
    Periodic,
    /// Cell centres, endpoints excluded.
    Open,
    /// `t = lo + tan(q pi / 2)` for `q` uniform in `[0, 1 - delta]`.
    Tan { delta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub s: Interval,
    pub coords: [Expr2; 4],
}

impl Piece {
    pub fn eval(&self, t: f64, s: f64) -> [f64; 4] {
        [self.coords[0].eval(t, s), self.coords[1].eval(t, s), self.coords[2].eval(t, s), self.coords[3].eval(t, s)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Exact,
    Polynomial,
}

/// Polynomial replacement of the exact pieces with its deviation bound.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyForm {
    pub pieces: Vec<Piece>,
    pub degree: usize,
    /// Upper bound on the coordinate-wise deviation from the exact form.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Surface4 {
    pub label: String,
    pub t_domain: Interval,
    /// Exact pieces, ordered by `s`, sharing their boundaries.
    pub pieces: Vec<Piece>,
    pub poly: Option<PolyForm>,
    pub t_sampling: TSampling,
    /// The `s` range is one full period and the mesh is stitched.
    pub s_periodic: bool,
    /// The edges `t = lo` and `t = hi` are each glued to themselves by
    /// reflecting `s` about the middle of the `s` window.
    pub t_edges_folded: bool,
    /// Sampling windows; required for unbounded directions.
    pub t_window: Option<Interval>,
    pub s_window: Option<Interval>,
}

/// Tolerance for agreement of neighbouring pieces on their shared boundary.
pub const SEAM_TOL: f64 = 1e-9;

impl Surface4 {
    pub fn single(label: impl Into<String>, t_domain: Interval, s_domain: Interval, coords: [Expr2; 4]) -> Self {
        Self {
            label: label.into(),
            t_domain,
            pieces: vec![Piece { s: s_domain, coords }],
            poly: None,
            t_sampling: TSampling::Closed,
            s_periodic: false,
            t_edges_folded: false,
            t_window: None,
            s_window: None,
        }
    }

    pub fn s_domain(&self) -> Interval {
        Interval::of(self.pieces[0].s.lo(), self.pieces[self.pieces.len() - 1].s.hi())
    }

    /// Interior piece boundaries.
    pub fn seams(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.s.lo()).collect()
    }

    pub fn form_pieces(&self, form: Form) -> Option<&[Piece]> {
        match form {
            Form::Exact => Some(&self.pieces),
            Form::Polynomial => self.poly.as_ref().map(|p| p.pieces.as_slice()),
        }
    }

    /// Polynomial form when present, otherwise the exact one.
    pub fn active_form(&self) -> Form {
        if self.poly.is_some() {
            Form::Polynomial
        } else {
            Form::Exact
        }
    }

    /// Index of the first piece whose `s` interval contains `s`.
    pub fn piece_index(&self, s: f64) -> usize {
        self.pieces.iter().position(|p| p.s.contains(s)).unwrap_or(if s < self.pieces[0].s.lo() {
            0
        } else {
            self.pieces.len() - 1
        })
    }

    pub fn eval(&self, t: f64, s: f64) -> [f64; 4] {
        self.pieces[self.piece_index(s)].eval(t, s)
    }

    pub fn eval_form(&self, form: Form, t: f64, s: f64) -> Option<[f64; 4]> {
        let pieces = self.form_pieces(form)?;
        Some(pieces[self.piece_index(s)].eval(t, s))
    }

    /// The `t` range used for sampling and seam checks.
    pub fn t_extent(&self) -> Result<Interval> {
        let w = self.t_window.unwrap_or(self.t_domain);
        if w.is_finite() {
            Ok(w)
        } else {
            Err(Error::DomainUnbounded)
        }
    }

    /// Largest mismatch between neighbouring pieces at each seam over `n`
    /// uniformly spaced `t` values.
    pub fn seam_mismatches(&self, form: Form, n: usize) -> Result<Vec<(f64, f64)>> {
        let pieces = self.form_pieces(form).ok_or_else(|| Error::Invalid("surface has no polynomial form".into()))?;
        let ts = self.t_extent()?.linspace(n.max(2));
        Ok(pieces
            .windows(2)
            .map(|w| {
                let s = w[1].s.lo();
                let worst = ts
                    .iter()
                    .map(|&t| {
                        let (p, q) = (w[0].eval(t, s), w[1].eval(t, s));
                        p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max);
                (s, worst)
            })
            .collect())
    }

    /// Checks that neighbouring pieces agree on their shared boundary.
    pub fn validate_seams(&self) -> Result<()> {
        for w in self.pieces.windows(2) {
            if w[0].s.hi() != w[1].s.lo() {
                return Err(Error::Invalid(format!("pieces {} and {} are not adjacent", w[0].s, w[1].s)));
            }
        }
        for (seam, mismatch) in self.seam_mismatches(Form::Exact, 256)? {
            if mismatch > SEAM_TOL {
                return Err(Error::SeamMismatch { seam, mismatch });
            }
        }
        Ok(())
    }

    /// Attaches a polynomial form in which every trigonometric factor and
    /// every bump-weighted factor is replaced by a degree-`degree` Chebyshev
    /// interpolant on its parameter's domain.
    pub fn polynomialize(&self, degree: usize) -> Result<Surface4> {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut bound = 0.0f64;
        for piece in &self.pieces {
            let mut coords: Vec<Expr2> = Vec::with_capacity(4);
            for c in &piece.coords {
                let (p, b) = c.polynomialize(self.t_domain, piece.s, degree)?;
                bound = bound.max(b);
                coords.push(p);
            }
            let coords: [Expr2; 4] = coords.try_into().expect("four coordinates");
            pieces.push(Piece { s: piece.s, coords });
        }
        let mut out = self.clone();
        out.poly = Some(PolyForm { pieces, degree, bound });
        Ok(out)
    }

    /// Largest coordinate deviation between the two forms on an
    /// `n x n` grid of the sampling extent.
    pub fn form_deviation(&self, n: usize) -> Result<f64> {
        if self.poly.is_none() {
            return Ok(0.0);
        }
        let ts = self.t_extent()?.linspace(n);
        let s_ext = self.s_window.unwrap_or(self.s_domain());
        if !s_ext.is_finite() {
            return Err(Error::DomainUnbounded);
        }
        let ss = s_ext.linspace(n);
        let mut worst = 0.0f64;
        for &t in &ts {
            for &s in &ss {
                let p = self.eval(t, s);
                let q = self.eval_form(Form::Polynomial, t, s).expect("polynomial form");
                for k in 0..4 {
                    worst = worst.max((p[k] - q[k]).abs());
                }
            }
        }
        Ok(worst)
    }
}
