//! Quad meshes sampled from surfaces, and projections to R^3.

use crate::error::{Error, Result};
use crate::par::{map_indices, Exec};
use crate::poly::Interval;
use crate::surface::{Form, Surface4, TSampling};

/// A row-major parameter grid: vertex `i * ns + j` sits at `(t_i, s_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh<const D: usize> {
    pub nt: usize,
    pub ns: usize,
    pub params: Vec<[f64; 2]>,
    pub vertices: Vec<[f64; D]>,
    pub quads: Vec<[usize; 4]>,
    pub wrap_t: bool,
    pub wrap_s: bool,
    /// The first and last `t` rows continue into each other with `s`
    /// reflected about the middle of the `s` range.
    pub fold_t: bool,
}

pub type Mesh4 = Mesh<4>;
pub type Mesh3 = Mesh<3>;

impl<const D: usize> Mesh<D> {
    /// Builds the grid connectivity. Columns `j`, `j + 1` with equal `s`
    /// (duplicated seam rows) are not joined.
    pub fn grid(
        nt: usize,
        ns: usize,
        params: Vec<[f64; 2]>,
        vertices: Vec<[f64; D]>,
        wrap_t: bool,
        wrap_s: bool,
    ) -> Self {
        assert_eq!(params.len(), nt * ns);
        assert_eq!(vertices.len(), nt * ns);
        let idx = |i: usize, j: usize| i * ns + j;
        let ti = if wrap_t { nt } else { nt.saturating_sub(1) };
        let sj = if wrap_s { ns } else { ns.saturating_sub(1) };
        let mut quads = Vec::with_capacity(ti * sj);
        if nt >= 2 && ns >= 2 {
            for i in 0..ti {
                let i2 = (i + 1) % nt;
                for j in 0..sj {
                    let j2 = (j + 1) % ns;
                    if j2 != 0 && params[idx(0, j)][1] == params[idx(0, j2)][1] {
                        continue;
                    }
                    quads.push([idx(i, j), idx(i2, j), idx(i2, j2), idx(i, j2)]);
                }
            }
        }
        Self { nt, ns, params, vertices, quads, wrap_t, wrap_s, fold_t: false }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bbox_diagonal(&self) -> f64 {
        let mut lo = [f64::INFINITY; D];
        let mut hi = [f64::NEG_INFINITY; D];
        for v in &self.vertices {
            for k in 0..D {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        if self.vertices.is_empty() {
            return 0.0;
        }
        (0..D).map(|k| (hi[k] - lo[k]).powi(2)).sum::<f64>().sqrt()
    }
}

/// Sample parameters in `t` for a surface's layout.
pub fn t_samples(surf: &Surface4, nt: usize) -> Result<(Vec<f64>, bool)> {
    if let Some(w) = surf.t_window {
        if !w.is_finite() {
            return Err(Error::DomainUnbounded);
        }
        let periodic = surf.t_sampling == TSampling::Periodic && w == surf.t_domain;
        return Ok((layout(w, nt, surf.t_sampling, periodic), periodic));
    }
    let dom = surf.t_domain;
    match surf.t_sampling {
        TSampling::Tan { delta } => {
            if !dom.lo().is_finite() || !(delta > 0.0 && delta < 1.0) {
                return Err(Error::DomainUnbounded);
            }
            let q = Interval::of(0.0, 1.0 - delta).linspace(nt);
            Ok((q.iter().map(|q| dom.lo() + (q * std::f64::consts::FRAC_PI_2).tan()).collect(), false))
        }
        _ if !dom.is_finite() => Err(Error::DomainUnbounded),
        TSampling::Periodic => Ok((layout(dom, nt, TSampling::Periodic, true), true)),
        other => Ok((layout(dom, nt, other, false), false)),
    }
}

fn layout(w: Interval, n: usize, mode: TSampling, periodic: bool) -> Vec<f64> {
    let step = w.len() / n as f64;
    match mode {
        TSampling::Open => (0..n).map(|i| w.lo() + (i as f64 + 0.5) * step).collect(),
        _ if periodic => (0..n).map(|i| w.lo() + i as f64 * step).collect(),
        _ => w.linspace(n),
    }
}

/// Sample parameters in `s`: one period, or per piece with shared seams
/// repeated once. Counts are split across pieces in proportion to length.
pub fn s_samples(surf: &Surface4, ns: usize) -> Result<(Vec<f64>, bool)> {
    let full = surf.s_window.unwrap_or(surf.s_domain());
    if !full.is_finite() {
        return Err(Error::DomainUnbounded);
    }
    if surf.pieces.len() == 1 {
        if surf.s_periodic && surf.s_window.is_none() {
            let step = full.len() / ns as f64;
            return Ok(((0..ns).map(|j| full.lo() + j as f64 * step).collect(), true));
        }
        return Ok((full.linspace(ns), false));
    }
    let parts: Vec<Interval> = surf.pieces.iter().filter_map(|p| p.s.intersect(&full)).collect();
    let total: f64 = parts.iter().map(Interval::len).sum();
    let mut out = Vec::with_capacity(ns + parts.len());
    let mut used = 0usize;
    for (k, part) in parts.iter().enumerate() {
        let n = if k + 1 == parts.len() {
            ns.saturating_sub(used).max(2)
        } else {
            ((ns as f64 * part.len() / total).round() as usize).max(2)
        };
        used += n;
        out.extend(part.linspace(n));
    }
    Ok((out, false))
}

pub fn sample_surface(surf: &Surface4, nt: usize, ns: usize) -> Result<Mesh4> {
    sample_surface_with(surf, surf.active_form(), nt, ns, Exec::default())
}

pub fn sample_surface_with(surf: &Surface4, form: Form, nt: usize, ns: usize, exec: Exec) -> Result<Mesh4> {
    if nt < 2 || ns < 2 {
        return Err(Error::Invalid(format!("need at least 2x2 samples, got {nt}x{ns}")));
    }
    let pieces = surf.form_pieces(form).ok_or_else(|| Error::Invalid("surface has no polynomial form".into()))?;
    let (ts, wrap_t) = t_samples(surf, nt)?;
    let (ss, wrap_s) = s_samples(surf, ns)?;
    let ns = ss.len();
    // Piece of each column; on a seam the column is evaluated by the piece
    // it was generated for, so both sides of a seam get their own row.
    let mut col_piece = Vec::with_capacity(ns);
    let mut k = 0usize;
    for (j, &s) in ss.iter().enumerate() {
        if j > 0 && ss[j - 1] == s {
            k += 1;
        }
        while k + 1 < pieces.len() && s > pieces[k].s.hi() {
            k += 1;
        }
        col_piece.push(k.min(pieces.len() - 1));
    }
    let rows: Vec<Vec<[f64; 4]>> = map_indices(exec, ts.len(), |i| {
        let t = ts[i];
        ss.iter().zip(&col_piece).map(|(&s, &k)| pieces[k].eval(t, s)).collect()
    });
    let params = ts.iter().flat_map(|&t| ss.iter().map(move |&s| [t, s])).collect();
    let vertices = rows.into_iter().flatten().collect();
    let mut mesh = Mesh::grid(ts.len(), ns, params, vertices, wrap_t, wrap_s);
    mesh.fold_t = surf.t_edges_folded && surf.t_window.is_none();
    Ok(mesh)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectionSpec {
    /// Removes coordinate 0..4 (x, y, z, w).
    Drop(usize),
    /// Rows must be orthonormal.
    Matrix([[f64; 4]; 3]),
}

impl ProjectionSpec {
    /// Parses the three kept axes, e.g. `xzw` drops `y`.
    pub fn parse(kept: &str) -> Result<Self> {
        let dropped = match kept {
            "yzw" => 0,
            "xzw" => 1,
            "xyw" => 2,
            "xyz" => 3,
            _ => return Err(Error::Invalid(format!("unknown projection `{kept}`; use xyz, xyw, xzw or yzw"))),
        };
        Ok(ProjectionSpec::Drop(dropped))
    }

    pub fn matrix(rows: [[f64; 4]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..4).map(|k| rows[i][k] * rows[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > 1e-12 {
                    return Err(Error::Invalid(format!("projection rows {i}, {j} are not orthonormal")));
                }
            }
        }
        Ok(ProjectionSpec::Matrix(rows))
    }

    pub fn apply(&self, p: [f64; 4]) -> [f64; 3] {
        match self {
            ProjectionSpec::Drop(k) => {
                let mut out = [0.0; 3];
                let mut n = 0;
                for (i, &v) in p.iter().enumerate() {
                    if i != *k {
                        out[n] = v;
                        n += 1;
                    }
                }
                out
            }
            ProjectionSpec::Matrix(m) => {
                let mut out = [0.0; 3];
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (0..4).map(|k| m[i][k] * p[k]).sum();
                }
                out
            }
        }
    }
}

pub fn project(mesh: &Mesh4, spec: ProjectionSpec) -> Mesh3 {
    Mesh {
        nt: mesh.nt,
        ns: mesh.ns,
        params: mesh.params.clone(),
        vertices: mesh.vertices.iter().map(|&v| spec.apply(v)).collect(),
        quads: mesh.quads.clone(),
        wrap_t: mesh.wrap_t,
        wrap_s: mesh.wrap_s,
        fold_t: mesh.fold_t,
    }
}
