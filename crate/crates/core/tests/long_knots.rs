use std::f64::consts::PI;

use knotforge::longknots::{
    knotted_disc, knotted_plane_construction1, monotonicity_threshold, plane_radius_threshold, simple_long_2knot,
    singular_parameters, singularity_index_upper_bound, trivializing_homotopy,
};
use knotforge::mesh::sample_surface_with;
use knotforge::{
    arc_from_curve, catalog_get, crossings, injectivity_check, seam_check, CheckOptions, CoordFn, Exec, Form, Interval,
    KnotCurve,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `(t^3 - 3t, t^4 - 4t^2, t^5 - 10t)`.
fn canonical_trefoil() -> KnotCurve {
    catalog_get("trefoil-long").unwrap().swap_yz()
}

#[test]
fn canonical_trefoil_coordinates() {
    let k = canonical_trefoil();
    for t in [-1.7f64, -0.3, 0.0, 0.8, 2.2] {
        let want = [t * t * t - 3.0 * t, t.powi(4) - 4.0 * t * t, t.powi(5) - 10.0 * t];
        let got = k.eval(t);
        assert!((0..3).all(|i| (got[i] - want[i]).abs() < 1e-12));
    }
    let p = simple_long_2knot(&k).unwrap();
    let (t, s) = (0.7, -1.3);
    let want = [k.x.eval(t) + s, k.y.eval(t) + s, s, k.z.eval(t)];
    assert_eq!(p.eval(t, s), want);
}

#[test]
fn simple_long_2knot_is_embedded_and_immersed() {
    let p = simple_long_2knot(&canonical_trefoil()).unwrap();
    let mesh = sample_surface_with(&p.to_surface("P"), Form::Exact, 256, 256, Exec::default()).unwrap();
    let report = injectivity_check(&mesh, &CheckOptions::default()).unwrap();
    assert!(report.pass, "{} violations", report.violations.len());

    // Jacobian rank 2: Gram determinant of central-difference partials.
    let mut rng = StdRng::seed_from_u64(0x2c0f);
    let h = 1e-6;
    for _ in 0..4096 {
        let t = rng.random_range(p.t_window.lo()..p.t_window.hi());
        let s = rng.random_range(p.s_window.lo()..p.s_window.hi());
        let d = |a: [f64; 4], b: [f64; 4]| [0, 1, 2, 3].map(|k| (a[k] - b[k]) / (2.0 * h));
        let pt = d(p.eval(t + h, s), p.eval(t - h, s));
        let ps = d(p.eval(t, s + h), p.eval(t, s - h));
        let dot = |a: [f64; 4], b: [f64; 4]| (0..4).map(|k| a[k] * b[k]).sum::<f64>();
        let gram = dot(pt, pt) * dot(ps, ps) - dot(pt, ps).powi(2);
        assert!(gram > 1e-3, "rank drop at ({t}, {s}): {gram:e}");
    }
}

#[test]
fn homotopy_starts_at_the_knot_and_ends_monotone() {
    let p = simple_long_2knot(&canonical_trefoil()).unwrap();
    let same = trivializing_homotopy(&p, 0.0);
    for (t, s) in [(0.1, 0.2), (-1.5, 1.0), (2.0, -0.4)] {
        assert_eq!(same.eval(t, s), p.eval(t, s));
    }
    // d/dt (t^5 - 10t) has minimum -10 at t = 0 and d/ds vanishes.
    let m = monotonicity_threshold(&p, None).unwrap();
    assert!((m - 10f64.sqrt()).abs() < 1e-6, "{m}");

    let f = trivializing_homotopy(&p, m * 1.001);
    let ts = p.t_window.linspace(401);
    let ss = p.s_window.linspace(401);
    for &s in ss.iter().step_by(20) {
        assert!(ts.windows(2).all(|w| f.eval(w[1], s)[3] > f.eval(w[0], s)[3]));
    }
    for &t in ts.iter().step_by(20) {
        assert!(ss.windows(2).all(|w| f.eval(t, w[1])[3] > f.eval(t, w[0])[3]));
    }
    // Below the threshold t-monotonicity fails near t = 0.
    let g = trivializing_homotopy(&p, 0.9 * m);
    assert!(g.eval(0.01, 0.0)[3] < g.eval(-0.01, 0.0)[3]);

    let flat = simple_long_2knot(&KnotCurve::new(
        "line",
        CoordFn::t(),
        CoordFn::zero(),
        CoordFn::t(),
        Interval::of(f64::NEG_INFINITY, f64::INFINITY),
    ))
    .unwrap();
    assert_eq!(monotonicity_threshold(&flat, None).unwrap(), 0.0);
}

#[test]
fn singular_parameters_solve_the_double_point_system() {
    let k = canonical_trefoil();
    let list = singular_parameters(&k).unwrap();
    let n_cross = crossings(&k, 1e-10).unwrap().len();
    assert_eq!(n_cross, 3);
    assert!(!list.is_empty() && list.len() <= n_cross);
    assert_eq!(singularity_index_upper_bound(&k).unwrap(), list.len());
    let p = simple_long_2knot(&k).unwrap();
    for sp in &list {
        let (ta, tb, u) = (sp.crossing.t_over, sp.crossing.t_under, sp.u);
        assert!(u > 0.0);
        assert!((k.x.eval(ta) - k.x.eval(tb)).abs() < 1e-8);
        assert!((k.y.eval(ta) - k.y.eval(tb)).abs() < 1e-8);
        let lhs = k.z.eval(ta) + u * u * ta;
        let rhs = k.z.eval(tb) + u * u * tb;
        assert!((lhs - rhs).abs() < 1e-8);
        // The stage u surface really has a double point, for every s.
        let f = trivializing_homotopy(&p, u);
        for s in [-1.0, 0.0, 0.5] {
            let (a, b) = (f.eval(ta, s), f.eval(tb, s));
            assert!((0..4).all(|i| (a[i] - b[i]).abs() < 1e-8));
        }
    }
    // Strictly between singular values no crossing closes its gap.
    let mut us: Vec<f64> = vec![0.0];
    us.extend(list.iter().map(|p| p.u));
    us.push(list.last().unwrap().u * 2.0 + 1.0);
    for w in us.windows(2) {
        let u = 0.5 * (w[0] + w[1]);
        for c in crossings(&k, 1e-10).unwrap() {
            let gap = (k.z.eval(c.t_over) + u * u * c.t_over) - (k.z.eval(c.t_under) + u * u * c.t_under);
            assert!(gap.abs() > 1e-6, "u = {u}: gap {gap:e}");
        }
    }
}

#[test]
fn constant_height_has_no_singular_stage() {
    let mut k = canonical_trefoil();
    k.z = CoordFn::constant(2.0);
    assert!(singular_parameters(&k).unwrap().is_empty());
}

#[test]
fn disc_boundary_is_the_arc_and_its_mirror() {
    let arc = arc_from_curve(&catalog_get("trefoil-arc").unwrap()).unwrap();
    let disc = knotted_disc(&arc);
    let k = &arc.curve;
    for t in arc.interval().linspace(65) {
        let (f, g, h) = (k.x.eval(t), k.y.eval(t), k.z.eval(t));
        let p = disc.eval(t, 0.0);
        let q = disc.eval(t, PI);
        assert_eq!([p[0], p[1], p[2], p[3]], [f, g, 0.0, h]);
        assert!((q[0] - f).abs() < 1e-15 && (q[1] - g).abs() < 1e-15);
        assert!(q[2].abs() < 1e-12 && (q[3] + h).abs() < 1e-12);
    }
}

#[test]
fn construction_one_seams_are_exact() {
    let arc = arc_from_curve(&catalog_get("trefoil-arc").unwrap()).unwrap();
    let r = plane_radius_threshold(&arc).unwrap();
    let plane = knotted_plane_construction1(&arc, r).unwrap();
    let report = seam_check(&plane, 256).unwrap();
    assert_eq!(report.seams.len(), 2);
    assert!((report.seams[0].s - 0.0).abs() < 1e-15 && (report.seams[1].s - PI).abs() < 1e-15);
    for seam in &report.seams {
        assert!(seam.max_mismatch <= 1e-12, "{seam:?}");
    }
    assert!(knotted_plane_construction1(&arc, 0.5 * r).is_err());
}

#[test]
fn construction_one_radius_keeps_outer_heights_monotone() {
    let arc = arc_from_curve(&catalog_get("trefoil-arc").unwrap()).unwrap();
    let r = plane_radius_threshold(&arc).unwrap();
    // h' ranges over [-max, max] for this even arc; the oracle is a dense grid.
    let dh = arc.curve.z.derivative();
    let worst = arc.interval().linspace(100_001).into_iter().map(|t| dh.eval(t).abs()).fold(0.0, f64::max);
    assert!((r - worst.sqrt()).abs() < 1e-6, "{r} vs {}", worst.sqrt());
    let plane = knotted_plane_construction1(&arc, r).unwrap();
    let ts = arc.interval().linspace(2001);
    for s in [-r - 1.0, -r, PI + r, PI + r + 1.0] {
        assert!(ts.windows(2).all(|w| plane.eval(w[1], s)[3] >= plane.eval(w[0], s)[3] - 1e-9));
    }
}

/// Solves `psi1(t_a, -sigma) = psi2(t_b, pi + sigma)` over each crossing of
/// the arc: `sigma^2 = (h(t_a) + h(t_b)) / (t_b - t_a)`.
#[test]
fn construction_one_outer_pieces_meet_over_each_crossing() {
    let arc = arc_from_curve(&catalog_get("trefoil-arc").unwrap()).unwrap();
    let r = plane_radius_threshold(&arc).unwrap();
    let plane = knotted_plane_construction1(&arc, r).unwrap();
    let window = plane.s_window.unwrap();
    let k = &arc.curve;
    let list = crossings(&arc.restricted(), 1e-10).unwrap();
    assert!(!list.is_empty());
    let mut found = 0;
    for c in list {
        let (ta, tb) = (c.t_over.min(c.t_under), c.t_over.max(c.t_under));
        let sigma2 = (k.z.eval(ta) + k.z.eval(tb)) / (tb - ta);
        assert!(sigma2 > 0.0);
        let sigma = sigma2.sqrt();
        let (p, q) = (plane.eval(ta, -sigma), plane.eval(tb, PI + sigma));
        let gap = (0..4).map(|i| (p[i] - q[i]).abs()).fold(0.0, f64::max);
        assert!(gap < 1e-10, "{gap:e}");
        if window.contains(-sigma) && window.contains(PI + sigma) {
            found += 1;
        }
    }
    // Every one of these double points lies in the sampled window.
    assert_eq!(found, 4);
}
