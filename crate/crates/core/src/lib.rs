//! Polynomial and trigonometric parametrizations of knotted surfaces in R^4:
//! spun and twist-spun 2-knots, Tube images of welded diagrams, long 2-knots
//! and knotted planes, with meshing, export and sampled embedding checks.

// `!(x > 0.0)` style guards are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coordfn;
pub mod error;
pub mod export;
pub mod expr;
pub mod knots;
pub mod longknots;
pub mod mesh;
pub mod par;
pub mod poly;
pub mod spin;
pub mod surface;
pub mod tube;
pub mod twist;
pub mod verify;

pub use coordfn::{CoordFn, Term, Trig, TrigKind};
pub use error::{Error, Result};
pub use expr::{Expr2, Weight};
pub use knots::{arc_from_curve, catalog_get, crossing_span, crossings, ArcSpec, CrossingDatum, KnotCurve};
pub use mesh::{project, sample_surface, Mesh3, Mesh4, ProjectionSpec};
pub use par::Exec;
pub use poly::{chebyshev_approx, max_error, real_roots, Interval, Poly1};
pub use surface::{Form, Surface4};
pub use verify::{injectivity_check, injectivity_check_brute, seam_check, CheckOptions, InjectivityReport};
