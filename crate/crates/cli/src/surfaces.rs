use anyhow::{bail, Context, Result};
use knotforge::knots::resolve_knot;
use knotforge::longknots::{knotted_disc, knotted_plane_construction1, plane_radius_threshold};
use knotforge::surface::TSampling;
use knotforge::tube::{tube_surface, weldify, TubeParams, WeldedDiagram};
use knotforge::twist::{choose_axis, choose_axis_pinned, default_bump, RotationFormula, SmoothBump, TwistSetup};
use knotforge::{arc_from_curve, crossing_span, spin, KnotCurve, Surface4};

use crate::cli::{DiscArgs, KnotArgs, PlaneArgs, SpinArgs, SurfaceCmd, TubeArgs, TwistArgs, Usage};

pub fn load_knot(args: &KnotArgs, default: &str) -> Result<KnotCurve> {
    let mut k = match (&args.spec, &args.knot) {
        (Some(path), _) => KnotCurve::load(path)?,
        (None, Some(name)) => resolve_knot(name)?,
        (None, None) => resolve_knot(default)?,
    };
    if args.reorder {
        k = k.swap_yz();
    }
    if let Some(c) = args.lift {
        k.z = k.z.add_constant(c);
    }
    Ok(k)
}

pub fn spin_surface(args: &SpinArgs) -> Result<Surface4> {
    let k = load_knot(&args.knot, "trefoil-arc")?;
    let s = spin::spun_knot(&k)?;
    Ok(match args.polynomialize.0 {
        Some(deg) => s.polynomialize(deg)?,
        None => s,
    })
}

pub fn twist_setup(args: &TwistArgs) -> Result<TwistSetup> {
    let k = load_knot(&args.knot, "trefoil-twist-arc")?;
    let arc = arc_from_curve(&k)?;
    let span = match args.span {
        Some(span) => span,
        None => crossing_span(&arc.restricted())?,
    };
    let axis = match (args.t1, args.t2) {
        (Some(t1), Some(t2)) => choose_axis_pinned(&arc, span, t1, t2)?,
        _ => choose_axis(&arc, span)?,
    };
    let bump = match (args.d1, args.d2) {
        (Some(d1), Some(d2)) => SmoothBump::new(d1, d2)?,
        _ => default_bump(span, &axis)?,
    };
    let formula = if args.eq_verbatim { RotationFormula::Printed } else { RotationFormula::Matrix };
    Ok(TwistSetup::new(arc, span, axis, bump, formula)?)
}

pub fn twist_surface(args: &TwistArgs) -> Result<Surface4> {
    let s = twist_setup(args)?.surface(args.d);
    Ok(match args.polynomialize.0 {
        Some(deg) => s.polynomialize(deg)?,
        None => s,
    })
}

pub fn welded_diagram(args: &TubeArgs) -> Result<WeldedDiagram> {
    let mut diag = match &args.spec {
        Some(path) => WeldedDiagram::load(path)?,
        None => {
            let base = resolve_knot(&args.knot)?;
            let pattern: Vec<usize> = args.weld.iter().map(|k| k - 1).collect();
            weldify(&base, &pattern).with_context(|| format!("welding crossings {:?} of {}", args.weld, base.name))?
        }
    };
    if let Some(l) = args.l {
        diag.l = l;
        diag.validate()?;
    }
    Ok(diag)
}

pub fn tube(args: &TubeArgs) -> Result<Surface4> {
    let diag = welded_diagram(args)?;
    let params = TubeParams::new(args.r, args.dc, args.dw)?;
    Ok(tube_surface(&diag, params, args.true_radius)?)
}

pub fn disc(args: &DiscArgs) -> Result<Surface4> {
    let k = load_knot(&args.knot, "trefoil-arc")?;
    Ok(knotted_disc(&arc_from_curve(&k)?))
}

pub fn plane(args: &PlaneArgs) -> Result<Surface4> {
    match args.construction {
        1 => {
            if args.window.is_some() {
                bail!(Usage("--window applies to construction 2 only".into()));
            }
            let k = load_knot(&args.knot, "trefoil-arc")?;
            let arc = arc_from_curve(&k)?;
            let r = match args.r {
                Some(r) => r,
                None => plane_radius_threshold(&arc)?,
            };
            Ok(knotted_plane_construction1(&arc, r)?)
        }
        _ => {
            if args.r.is_some() {
                bail!(Usage("--R applies to construction 1 only".into()));
            }
            if !(args.delta > 0.0 && args.delta < 1.0) {
                bail!(Usage(format!("--delta must lie in (0, 1), got {}", args.delta)));
            }
            let k = load_knot(&args.knot, "trefoil-long")?;
            let (mut s, _) = spin::spun_plane_infinity(&k)?;
            s.t_sampling = TSampling::Tan { delta: args.delta };
            if let Some(w) = args.window {
                s.t_window = Some(w);
            }
            Ok(s)
        }
    }
}

pub fn build(cmd: &SurfaceCmd) -> Result<(Surface4, (usize, usize))> {
    Ok(match cmd {
        SurfaceCmd::Spin(a) => (spin_surface(a)?, a.grid.samples),
        SurfaceCmd::TwistSpin(a) => (twist_surface(a)?, a.grid.samples),
        SurfaceCmd::Tube(a) => (tube(a)?, a.grid.samples),
        SurfaceCmd::Disc(a) => (disc(a)?, a.grid.samples),
        SurfaceCmd::Plane(a) => (plane(a)?, a.grid.samples),
    })
}
