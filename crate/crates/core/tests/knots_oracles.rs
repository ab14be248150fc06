use knotforge::knots::{crossings_with, CrossingOptions, CATALOG};
use knotforge::{arc_from_curve, catalog_get, crossing_span, crossings, CoordFn, Error, Interval, KnotCurve};

/// Crossings of the `(x, y)` projection found by intersecting the segments
/// of an `n`-segment polyline. Returns `(first, second)` parameter pairs.
fn polyline_crossings(k: &KnotCurve, n: usize) -> Vec<(f64, f64)> {
    let ts = k.domain.linspace(n + 1);
    let pts: Vec<[f64; 2]> = ts.iter().map(|&t| [k.x.eval(t), k.y.eval(t)]).collect();
    let closed = k.is_closed();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 2)..n {
            if closed && i == 0 && j == n - 1 {
                continue;
            }
            let (p, r) = (pts[i], [pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1]]);
            let (q, s) = (pts[j], [pts[j + 1][0] - pts[j][0], pts[j + 1][1] - pts[j][1]]);
            let den = r[0] * s[1] - r[1] * s[0];
            if den == 0.0 {
                continue;
            }
            let qp = [q[0] - p[0], q[1] - p[1]];
            let a = (qp[0] * s[1] - qp[1] * s[0]) / den;
            let b = (qp[0] * r[1] - qp[1] * r[0]) / den;
            if (0.0..1.0).contains(&a) && (0.0..1.0).contains(&b) {
                out.push((ts[i] + a * (ts[i + 1] - ts[i]), ts[j] + b * (ts[j + 1] - ts[j])));
            }
        }
    }
    out
}

fn assert_matches_oracle(k: &KnotCurve) -> usize {
    let ours = crossings(k, 1e-10).unwrap();
    let oracle = polyline_crossings(k, 6000);
    assert_eq!(ours.len(), oracle.len(), "{}: {ours:?} vs {oracle:?}", k.name);
    for (a, b) in oracle {
        let hit = ours.iter().any(|c| (c.first() - a).abs() < 1e-4 && (c.second() - b).abs() < 1e-4);
        assert!(hit, "{}: oracle crossing ({a}, {b}) missing", k.name);
    }
    for c in &ours {
        let (p, q) = (k.eval(c.t_over), k.eval(c.t_under));
        assert!((p[0] - q[0]).abs() < 1e-10 && (p[1] - q[1]).abs() < 1e-10);
        assert!(p[2] > q[2]);
    }
    ours.len()
}

#[test]
fn catalog_crossings_match_the_polyline_oracle() {
    for name in CATALOG {
        let k = catalog_get(name).unwrap();
        assert_matches_oracle(&k);
        if let Ok(arc) = arc_from_curve(&k) {
            assert_matches_oracle(&arc.restricted());
        }
    }
}

/// Knot determinant of a long-knot diagram closed up at infinity, from the
/// Fox 3-colouring matrix: one row per crossing, `2 over - in - out`.
fn determinant(k: &KnotCurve) -> i64 {
    let list = crossings(k, 1e-10).unwrap();
    let mut unders: Vec<f64> = list.iter().map(|c| c.t_under).collect();
    unders.sort_by(f64::total_cmp);
    let n = unders.len();
    if n == 0 {
        return 1;
    }
    // Arc k runs from under-crossing k - 1 to under-crossing k; the two
    // unbounded ends join through infinity.
    let arc_of = |t: f64| unders.iter().filter(|&&u| u < t).count() % n;
    let mut m = vec![vec![0.0f64; n]; n];
    for c in &list {
        let row = unders.iter().position(|&u| u == c.t_under).unwrap();
        m[row][arc_of(c.t_over)] += 2.0;
        m[row][row] -= 1.0;
        m[row][(row + 1) % n] -= 1.0;
    }
    // Any first minor; Gaussian elimination with partial pivoting.
    let mut a: Vec<Vec<f64>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    let mut det = 1.0;
    for col in 0..n - 1 {
        let piv = (col..n - 1).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[piv][col] == 0.0 {
            return 0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        let pivot = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            let f = row[col] / pivot[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x -= f * p;
            }
        }
    }
    det.abs().round() as i64
}

#[test]
fn trefoil_crossing_counts() {
    // As listed, (t^3 - 3t, t^5 - 10t) projects with a fourth crossing
    // near the ends of the knotted part; with the height and second
    // coordinate swapped the projection is the standard three-crossing one.
    let k = catalog_get("trefoil-long").unwrap();
    assert_eq!(assert_matches_oracle(&k), 4);
    let canonical = k.swap_yz();
    assert_eq!(assert_matches_oracle(&canonical), 3);
    for c in crossings(&canonical, 1e-10).unwrap() {
        assert!(c.first() > -1.946 && c.second() < 1.946);
    }
    assert_eq!(determinant(&canonical), 3);
}

#[test]
fn twist_arc_outer_crossings_lie_just_past_the_printed_span() {
    let arc = arc_from_curve(&catalog_get("trefoil-twist-arc").unwrap()).unwrap();
    let list = crossings(&arc.restricted(), 1e-10).unwrap();
    assert_eq!(list.len(), 4);
    let hi = list.iter().map(|c| c.second()).fold(f64::NEG_INFINITY, f64::max);
    let lo = list.iter().map(|c| c.first()).fold(f64::INFINITY, f64::min);
    // The outermost crossing pair sits at +-1.95630, just outside the
    // printed span [-1.946, 1.946] and the bump plateau t^2 <= 3.8.
    assert!((hi - 1.9562952014676112).abs() < 1e-9 && (lo + hi).abs() < 1e-9);
    assert!(hi > 1.946 && hi < 3.8f64.sqrt() + 0.01);
    assert_eq!(determinant(&arc.restricted()), 3);
}

#[test]
fn figure_eight_needs_the_plus_sign() {
    let printed = catalog_get("figure8-arc").unwrap();
    let arc = arc_from_curve(&printed).unwrap();
    // 20 - 13t^2 - t^4 vanishes at t^2 = (sqrt(249) - 13) / 2.
    let root = ((249f64.sqrt() - 13.0) / 2.0).sqrt();
    assert!((arc.b - root).abs() < 1e-9);
    assert!(crossings(&arc.restricted(), 1e-10).unwrap().is_empty());
    assert_eq!(assert_matches_oracle(&printed), 8);
    assert_eq!(determinant(&printed), 1);

    let mut plus = printed.clone();
    plus.z = CoordFn::poly(&[20.0, 0.0, 13.0, 0.0, -1.0]);
    let arc = arc_from_curve(&plus).unwrap();
    let root = ((13.0 + 249f64.sqrt()) / 2.0).sqrt();
    assert!((arc.b - root).abs() < 1e-9 && (arc.b - 3.7934).abs() < 1e-4);
    assert_eq!(assert_matches_oracle(&arc.restricted()), 8);
    assert_eq!(determinant(&arc.restricted()), 5);
}

#[test]
fn straight_line_has_no_crossings() {
    let line = KnotCurve::new("line", CoordFn::t(), CoordFn::zero(), CoordFn::zero(), Interval::of(-5.0, 5.0));
    assert!(crossings(&line, 1e-10).unwrap().is_empty());
    assert!(matches!(crossing_span(&line), Err(Error::NoCrossings)));
}

#[test]
fn scan_resolution_does_not_change_the_answer() {
    let k = catalog_get("torus-2-7").unwrap();
    let base = crossings(&k, 1e-10).unwrap();
    for grid in [256, 2048] {
        let other = crossings_with(&k, &CrossingOptions { grid, tol: 1e-10, ..CrossingOptions::default() }).unwrap();
        assert_eq!(other.len(), base.len());
        for (a, b) in base.iter().zip(&other) {
            assert!((a.t_over - b.t_over).abs() < 1e-9 && (a.t_under - b.t_under).abs() < 1e-9);
        }
    }
}

#[test]
fn catalog_entries_and_errors() {
    let t = 1.3;
    let arc = catalog_get("trefoil-arc").unwrap();
    assert!((arc.z.eval(t) - (-t.powi(4) + 4.0 * t * t + 3.0)).abs() < 1e-12);
    let tw = catalog_get("trefoil-twist-arc").unwrap();
    assert!((tw.z.eval(t) - (-t.powi(4) + 4.0 * t * t + 16.0)).abs() < 1e-12);
    let torus = catalog_get("torus-2-7").unwrap();
    for t in Interval::of(0.0, 6.0).linspace(13) {
        let want =
            [(2.0 * t).cos() * ((7.0 * t).cos() + 3.0), (2.0 * t).sin() * ((7.0 * t).cos() + 3.0), (7.0 * t).sin()];
        let got = torus.eval(t);
        assert!((0..3).all(|i| (got[i] - want[i]).abs() < 1e-12));
    }
    assert!(torus.is_closed());
    assert!(matches!(catalog_get("nonesuch"), Err(Error::UnknownKnot(_))));
    let bad =
        KnotCurve::new("bump", CoordFn::t(), CoordFn::zero(), CoordFn::poly(&[1.0, 0.0, 1.0]), Interval::of(-3.0, 3.0));
    assert!(matches!(arc_from_curve(&bad), Err(Error::BadBoundary(_))));
}

#[test]
fn knot_json_round_trip() {
    for name in CATALOG {
        let k = catalog_get(name).unwrap();
        let text = serde_json::to_string(&k).unwrap();
        assert_eq!(KnotCurve::from_json_str(&text).unwrap(), k);
    }
    let text = r#"{"name":"tiny","x":{"terms":[{"c":1.0,"p":1,"trig":null}]},
        "y":{"terms":[{"c":2.0,"p":0,"trig":{"k":"cos","f":3}}]},
        "z":{"terms":[]},"domain":[-1.0,1.0]}"#;
    let k = KnotCurve::from_json_str(text).unwrap();
    assert_eq!(k.eval(0.5), [0.5, 2.0 * 1.5f64.cos(), 0.0]);
}
