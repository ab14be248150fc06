#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod surfaces;

use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use knotforge::export::{export_csv, export_obj, export_stl};
use knotforge::knots::CATALOG;
use knotforge::longknots::singular_parameters;
use knotforge::mesh::sample_surface_with;
use knotforge::{
    catalog_get, chebyshev_approx, crossings, injectivity_check, injectivity_check_brute, max_error, project,
    sample_surface, seam_check, spin, CheckOptions, Exec, Form, Interval, ProjectionSpec, Surface4,
};
use serde::Serialize;

use cli::{ApproxArgs, Cli, Command, OutArgs, TrigFn, TwistArgs, Usage, VerifyArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Catalog => {
            for name in CATALOG {
                let k = catalog_get(name)?;
                writeln!(out, "{name}  t in {}", k.domain)?;
                writeln!(out, "  x = {}", k.x)?;
                writeln!(out, "  y = {}", k.y)?;
                writeln!(out, "  z = {}", k.z)?;
            }
        }
        Command::Crossings { knot } => {
            let k = surfaces::load_knot(&knot, "trefoil-long")?;
            let list = crossings(&k, knotforge::knots::CROSSING_TOL)?;
            writeln!(out, "{:>20} {:>20} {:>20} {:>20}", "t_over", "t_under", "x", "y")?;
            for c in &list {
                writeln!(out, "{:>20.12} {:>20.12} {:>20.12} {:>20.12}", c.t_over, c.t_under, c.xy[0], c.xy[1])?;
            }
            writeln!(out, "{} crossings", list.len())?;
        }
        Command::Spin { args, out: o } => {
            let s = surfaces::spin_surface(&args)?;
            emit(&mut out, &s, args.grid.samples, &o)?;
        }
        Command::TwistSpin { args, out: o } => {
            if args.verify_reduction {
                let diff = reduction_difference(&args)?;
                writeln!(out, "d=0 reduction sup-difference vs spin: {diff:e}")?;
                if !(diff < 1e-12) {
                    bail!("d=0 twist spin differs from the spin by {diff:e}");
                }
            }
            let s = surfaces::twist_surface(&args)?;
            emit(&mut out, &s, args.grid.samples, &o)?;
        }
        Command::Tube { args, out: o } => {
            let s = surfaces::tube(&args)?;
            emit(&mut out, &s, args.grid.samples, &o)?;
        }
        Command::Disc { args, out: o } => {
            let s = surfaces::disc(&args)?;
            emit(&mut out, &s, args.grid.samples, &o)?;
        }
        Command::Plane { args, out: o } => {
            let s = surfaces::plane(&args)?;
            emit(&mut out, &s, args.grid.samples, &o)?;
        }
        Command::Singular { knot } => {
            let k = surfaces::load_knot(&knot, "trefoil-long")?;
            let list = singular_parameters(&k)?;
            writeln!(out, "{:>20} {:>20} {:>20}", "u", "t_a", "t_b")?;
            for p in &list {
                writeln!(out, "{:>20.12} {:>20.12} {:>20.12}", p.u, p.crossing.t_over, p.crossing.t_under)?;
            }
            writeln!(out, "singularity index upper bound: {}", list.len())?;
        }
        Command::Approx(args) => approx(&mut out, &args)?,
        Command::Verify(args) => return verify(&mut out, &args),
    }
    Ok(ExitCode::SUCCESS)
}

/// Samples, reports and optionally writes a mesh.
fn emit(out: &mut impl Write, s: &Surface4, (nt, ns): (usize, usize), o: &OutArgs) -> Result<()> {
    let mesh = sample_surface(s, nt, ns)?;
    writeln!(out, "surface: {}", s.label)?;
    writeln!(out, "samples: {}x{}", mesh.nt, mesh.ns)?;
    writeln!(out, "vertices: {}  quads: {}", mesh.len(), mesh.quads.len())?;
    writeln!(out, "bbox diagonal: {:.9}", mesh.bbox_diagonal())?;
    if let Some(p) = &s.poly {
        writeln!(out, "polynomial form: degree {}, deviation bound {:e}", p.degree, p.bound)?;
    }
    let Some(path) = &o.out else { return Ok(()) };
    match extension(path).as_deref() {
        Some("csv") => export_csv(&mesh, path)?,
        Some(ext @ ("obj" | "stl")) => {
            let m3 = project(&mesh, ProjectionSpec::parse(&o.project)?);
            if ext == "obj" {
                export_obj(&m3, path)?;
            } else {
                export_stl(&m3, path)?;
            }
        }
        _ => bail!(Usage(format!("{}: output must end in .obj, .stl or .csv", path.display()))),
    }
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn extension(path: &Path) -> Option<String> {
    path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase)
}

/// Largest coordinate difference between the `d = 0` twist spin and the
/// plain spin of the same arc over the sample grid.
fn reduction_difference(args: &TwistArgs) -> Result<f64> {
    let setup = surfaces::twist_setup(args)?;
    let twisted = setup.surface(0);
    let spun = spin::spun_surface(&setup.arc);
    let (nt, ns) = args.grid.samples;
    let a = sample_surface_with(&twisted, Form::Exact, nt, ns, Exec::default())?;
    let b = sample_surface_with(&spun, Form::Exact, nt, ns, Exec::default())?;
    Ok(a.vertices
        .iter()
        .zip(&b.vertices)
        .flat_map(|(p, q)| p.iter().zip(q).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max))
}

fn approx(out: &mut impl Write, args: &ApproxArgs) -> Result<()> {
    let domain = args.domain.unwrap_or(Interval::of(0.0, TAU));
    if args.samples < 2 {
        bail!(Usage("--samples must be at least 2".into()));
    }
    let target = match args.func {
        TrigFn::Cos => f64::cos,
        TrigFn::Sin => f64::sin,
    };
    let p = chebyshev_approx(target, domain, args.degree)?;
    let name = match args.func {
        TrigFn::Cos => "cos",
        TrigFn::Sin => "sin",
    };
    writeln!(out, "{name} on {domain}, degree {}", args.degree)?;
    for (k, c) in p.coeffs().iter().enumerate() {
        writeln!(out, "c{k:<2} = {c:+.17e}")?;
    }
    writeln!(out, "max error on {} samples: {:e}", args.samples, max_error(&p, target, domain, args.samples))?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    surface: &'a str,
    samples: [usize; 2],
    injectivity: &'a knotforge::InjectivityReport,
    seams: &'a knotforge::verify::SeamReport,
}

fn verify(out: &mut impl Write, args: &VerifyArgs) -> Result<ExitCode> {
    let (surf, (nt, ns)) = surfaces::build(&args.surface)?;
    let mesh = sample_surface(&surf, nt, ns)?;
    let opts = CheckOptions { param_gap: args.param_gap, min_dist: args.min_dist, exec: Exec::default() };
    let report = if args.brute { injectivity_check_brute(&mesh, &opts)? } else { injectivity_check(&mesh, &opts)? };
    let seams = seam_check(&surf, 256).context("seam check")?;
    let doc = VerifyDoc { surface: &surf.label, samples: [mesh.nt, mesh.ns], injectivity: &report, seams: &seams };
    writeln!(out, "{}", serde_json::to_string(&doc)?)?;
    if report.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("injectivity check failed: {} violations", report.violations.len());
        Ok(ExitCode::from(1))
    }
}
