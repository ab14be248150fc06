//! Sampled embedding checks and seam reports.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::par::{flat_map_indices, Exec};
use crate::surface::{Form, Surface4};

/// Rows whose vertices all lie this close to the row's first vertex are
/// treated as a single point (spin-axis rows).
pub const DEGENERATE_ROW_TOL: f64 = 1e-9;
/// Default parameter gap, in grid steps.
pub const DEFAULT_PARAM_GAP: f64 = 3.0;
/// Default `min_dist` as a fraction of the bounding-box diagonal.
pub const DEFAULT_MIN_DIST_FRACTION: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub dist: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectivityReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl InjectivityReport {
    fn from(mut violations: Vec<Violation>) -> Self {
        violations.sort_by_key(|v| (v.i, v.j));
        Self { pass: violations.is_empty(), violations }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub param_gap: f64,
    /// Absolute threshold; `None` uses the bounding-box default.
    pub min_dist: Option<f64>,
    pub exec: Exec,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { param_gap: DEFAULT_PARAM_GAP, min_dist: None, exec: Exec::default() }
    }
}

struct Topology {
    nt: usize,
    ns: usize,
    wrap_t: bool,
    wrap_s: bool,
    degenerate: Vec<bool>,
    /// Column of `s_lo + s_hi - s_j`, when the `t` edges are folded.
    mirror: Option<Vec<usize>>,
    /// Cumulative edge lengths along each row (`ns` entries per row, plus
    /// the closing edge when `s` wraps) and along each column.
    row_cum: Vec<f64>,
    col_cum: Vec<f64>,
}

impl Topology {
    fn of<const D: usize>(mesh: &Mesh<D>) -> Self {
        let (nt, ns) = (mesh.nt, mesh.ns);
        let v = |i: usize, j: usize| &mesh.vertices[i * ns + j];
        let degenerate = (0..nt)
            .map(|i| {
                let row = &mesh.vertices[i * ns..(i + 1) * ns];
                row.iter().all(|p| dist(p, &row[0]) <= DEGENERATE_ROW_TOL)
            })
            .collect();
        let mirror = (mesh.fold_t && ns > 0).then(|| {
            let s: Vec<f64> = (0..ns).map(|j| mesh.params[j][1]).collect();
            let (lo, hi) = (s[0], s[ns - 1]);
            s.iter()
                .map(|&sj| {
                    let target = lo + hi - sj;
                    (0..ns).min_by(|&a, &b| (s[a] - target).abs().total_cmp(&(s[b] - target).abs())).unwrap_or(0)
                })
                .collect()
        });
        let mut row_cum = Vec::with_capacity(nt * (ns + 1));
        for i in 0..nt {
            let mut acc = 0.0;
            row_cum.push(acc);
            for j in 1..=ns {
                acc += dist(v(i, j - 1), v(i, j % ns));
                row_cum.push(acc);
            }
        }
        let mut col_cum = Vec::with_capacity(ns * (nt + 1));
        for j in 0..ns {
            let mut acc = 0.0;
            col_cum.push(acc);
            for i in 1..=nt {
                acc += dist(v(i - 1, j), v(i % nt, j));
                col_cum.push(acc);
            }
        }
        Self { nt, ns, wrap_t: mesh.wrap_t, wrap_s: mesh.wrap_s, degenerate, mirror, row_cum, col_cum }
    }

    /// Grid distance `max(|di|, |dj|)`, cyclic where wrapped; `dj` is 0
    /// when either row is collapsed. Across folded edges the path through
    /// the fold is also considered.
    fn param_distance(&self, a: usize, b: usize) -> usize {
        let (i1, j1, i2, j2) = (a / self.ns, a % self.ns, b / self.ns, b % self.ns);
        let mut di = i1.abs_diff(i2);
        if self.wrap_t {
            di = di.min(self.nt - di);
        }
        let mut dj = j1.abs_diff(j2);
        if self.wrap_s {
            dj = dj.min(self.ns - dj);
        }
        if self.degenerate[i1] || self.degenerate[i2] {
            dj = 0;
        }
        let mut d = di.max(dj);
        if let Some(mirror) = &self.mirror {
            let dj = j1.abs_diff(mirror[j2]);
            let below = i1 + i2 + 1;
            let above = 2 * self.nt - 1 - i1 - i2;
            d = d.min(below.min(above).max(dj));
        }
        d
    }

    fn along_row(&self, i: usize, j1: usize, j2: usize) -> f64 {
        let row = &self.row_cum[i * (self.ns + 1)..(i + 1) * (self.ns + 1)];
        let direct = (row[j1] - row[j2]).abs();
        if self.wrap_s {
            direct.min(row[self.ns] - direct)
        } else {
            direct
        }
    }

    fn along_col(&self, j: usize, i1: usize, i2: usize) -> f64 {
        let col = &self.col_cum[j * (self.nt + 1)..(j + 1) * (self.nt + 1)];
        let direct = (col[i1] - col[i2]).abs();
        if self.wrap_t {
            direct.min(col[self.nt] - direct)
        } else {
            direct
        }
    }

    /// Length of the shorter one-turn grid path between two vertices: an
    /// upper bound on their distance within the surface.
    fn path_length(&self, a: usize, b: usize) -> f64 {
        let (i1, j1, i2, j2) = (a / self.ns, a % self.ns, b / self.ns, b % self.ns);
        let row_first = self.along_row(i1, j1, j2) + self.along_col(j2, i1, i2);
        let col_first = self.along_col(j1, i1, i2) + self.along_row(i2, j1, j2);
        row_first.min(col_first)
    }
}

fn dist<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    (0..D).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>().sqrt()
}

fn resolve<const D: usize>(mesh: &Mesh<D>, opts: &CheckOptions) -> Result<f64> {
    if !(opts.param_gap > 0.0) {
        return Err(Error::Invalid(format!("param_gap must be positive, got {}", opts.param_gap)));
    }
    let min_dist = opts.min_dist.unwrap_or(DEFAULT_MIN_DIST_FRACTION * mesh.bbox_diagonal());
    if min_dist.is_nan() || min_dist < 0.0 {
        return Err(Error::Invalid(format!("min_dist must be nonnegative, got {min_dist}")));
    }
    Ok(min_dist)
}

/// Pairs closer than `min_dist` in space that are more than `param_gap`
/// grid steps apart and whose one-turn grid path is longer than
/// `param_gap * min_dist`. Candidates come from a uniform spatial hash of
/// cell size `min_dist`.
pub fn injectivity_check<const D: usize>(mesh: &Mesh<D>, opts: &CheckOptions) -> Result<InjectivityReport> {
    let min_dist = resolve(mesh, opts)?;
    if min_dist == 0.0 || mesh.len() < 2 {
        return Ok(InjectivityReport::from(vec![]));
    }
    let topo = Topology::of(mesh);
    let key = |v: &[f64; D]| v.map(|x| (x / min_dist).floor() as i64);
    let mut buckets: HashMap<[i64; D], Vec<usize>> = HashMap::new();
    for (idx, v) in mesh.vertices.iter().enumerate() {
        buckets.entry(key(v)).or_default().push(idx);
    }
    let offsets: Vec<[i64; D]> = (0..3usize.pow(D as u32))
        .map(|mut code| {
            let mut o = [0i64; D];
            for slot in o.iter_mut() {
                *slot = (code % 3) as i64 - 1;
                code /= 3;
            }
            o
        })
        .collect();
    let violations = flat_map_indices(opts.exec, mesh.len(), |a| {
        let va = &mesh.vertices[a];
        let ka = key(va);
        let mut out = Vec::new();
        for o in &offsets {
            let mut k = ka;
            for d in 0..D {
                k[d] += o[d];
            }
            if let Some(bucket) = buckets.get(&k) {
                for &b in bucket {
                    if b > a {
                        push_if_violation(mesh, &topo, a, b, opts.param_gap, min_dist, &mut out);
                    }
                }
            }
        }
        out
    });
    Ok(InjectivityReport::from(violations))
}

/// All-pairs reference implementation of [`injectivity_check`].
pub fn injectivity_check_brute<const D: usize>(mesh: &Mesh<D>, opts: &CheckOptions) -> Result<InjectivityReport> {
    let min_dist = resolve(mesh, opts)?;
    let topo = Topology::of(mesh);
    let violations = flat_map_indices(opts.exec, mesh.len(), |a| {
        let mut out = Vec::new();
        for b in a + 1..mesh.len() {
            push_if_violation(mesh, &topo, a, b, opts.param_gap, min_dist, &mut out);
        }
        out
    });
    Ok(InjectivityReport::from(violations))
}

fn push_if_violation<const D: usize>(
    mesh: &Mesh<D>,
    topo: &Topology,
    a: usize,
    b: usize,
    gap: f64,
    min_dist: f64,
    out: &mut Vec<Violation>,
) {
    let d = dist(&mesh.vertices[a], &mesh.vertices[b]);
    if d < min_dist && topo.param_distance(a, b) as f64 > gap && topo.path_length(a, b) > gap * min_dist {
        out.push(Violation { i: a, j: b, dist: d });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeamStat {
    pub s: f64,
    pub max_mismatch: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeamReport {
    pub seams: Vec<SeamStat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Largest coordinate mismatch across each seam at `n` values of `t`.
pub fn seam_check(surf: &Surface4, n: usize) -> Result<SeamReport> {
    let seams: Vec<SeamStat> = surf
        .seam_mismatches(Form::Exact, n)?
        .into_iter()
        .map(|(s, max_mismatch)| SeamStat { s, max_mismatch })
        .collect();
    let note = seams.is_empty().then(|| "single-piece surface: no seams".to_string());
    Ok(SeamReport { seams, note })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_mesh(points: Vec<[f64; 2]>) -> Mesh<2> {
        let n = points.len();
        let params = (0..n).map(|i| [i as f64, 0.0]).collect();
        Mesh::grid(n, 1, params, points, false, false)
    }

    #[test]
    fn single_point_passes() {
        let m = line_mesh(vec![[0.0, 0.0]]);
        assert!(injectivity_check(&m, &CheckOptions::default()).unwrap().pass);
    }

    #[test]
    fn returning_curve_is_caught() {
        let pts: Vec<[f64; 2]> = (0..10).map(|i| [(i as f64 * 0.7).sin(), 0.0]).collect();
        let opts = CheckOptions { min_dist: Some(0.05), ..CheckOptions::default() };
        let hashed = injectivity_check(&line_mesh(pts.clone()), &opts).unwrap();
        let brute = injectivity_check_brute(&line_mesh(pts), &opts).unwrap();
        assert!(!hashed.pass);
        assert_eq!(hashed, brute);
    }

    /// Rows of concentric circles of radius `r0 + i`; row 0 is a small circle.
    fn rings(nt: usize, ns: usize, r0: f64) -> Mesh<2> {
        let mut params = Vec::new();
        let mut verts = Vec::new();
        for i in 0..nt {
            for j in 0..ns {
                let s = std::f64::consts::TAU * j as f64 / ns as f64;
                let r = r0 + i as f64;
                params.push([i as f64, s]);
                verts.push([r * s.cos(), r * s.sin()]);
            }
        }
        Mesh::grid(nt, ns, params, verts, false, true)
    }

    #[test]
    fn small_ring_is_not_a_collision() {
        // Row 0 has circumference 0.0628: every pair on it is within
        // min_dist and far apart in grid steps, but joined along the row.
        let m = rings(4, 40, 0.01);
        let opts = CheckOptions { min_dist: Some(0.05), ..CheckOptions::default() };
        assert!(injectivity_check(&m, &opts).unwrap().pass);
        assert!(injectivity_check_brute(&m, &opts).unwrap().pass);
    }

    #[test]
    fn folded_edges_join_mirrored_columns() {
        // A strip t in {0..4}, s in [-1, 1] whose first row is glued to
        // itself by s -> -s: vertex (0, j) sits next to (0, ns-1-j).
        let (nt, ns) = (5, 21);
        let mut params = Vec::new();
        let mut verts = Vec::new();
        for i in 0..nt {
            for j in 0..ns {
                let s = -1.0 + 2.0 * j as f64 / (ns - 1) as f64;
                params.push([i as f64, s]);
                let gap = if i == 0 { 4e-3 } else { i as f64 };
                verts.push([s.abs() * 10.0, gap * s.signum()]);
            }
        }
        let mut m = Mesh::grid(nt, ns, params, verts, false, false);
        let opts = CheckOptions { min_dist: Some(0.01), ..CheckOptions::default() };
        assert!(!injectivity_check(&m, &opts).unwrap().pass);
        m.fold_t = true;
        assert!(injectivity_check(&m, &opts).unwrap().pass);
        assert_eq!(injectivity_check(&m, &opts).unwrap(), injectivity_check_brute(&m, &opts).unwrap());
    }

    #[test]
    fn report_json_shape() {
        let r = InjectivityReport::from(vec![Violation { i: 1, j: 7, dist: 0.5 }]);
        assert_eq!(r.to_json(), r#"{"pass":false,"violations":[{"i":1,"j":7,"dist":0.5}]}"#);
    }
}
