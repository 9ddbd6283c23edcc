//! Cubic B-spline curve approximation with optimizer-driven knot selection.
//!
//! The geometry half of the crate ([`bspline`], [`param_fit`]) is generic over
//! the scalar type through [`Scalar`]; the optimizers ([`dea`], [`ga`]) work on
//! `f64` fitness values and are independent of the curve types. [`knot_genome`]
//! glues the two together: a bitstring over the data points selects which
//! parameters become interior knots.
//!
//! Concrete aliases for the common `f64` instantiations live at the crate root.

pub mod bspline;
pub mod dea;
mod error;
pub mod ga;
pub mod knot_genome;
pub mod param_fit;
mod scalar;

pub use bspline::{basis_eval, build_clamped_knot_vector, BSplineCurve, KnotVector, Point};
pub use error::{Error, Result};
pub use knot_genome::{EvaluationRecord, KnotGenome};
pub use param_fit::{FitReport, ParameterAssignment, Parameterization};
pub use scalar::Scalar;

/// Degree used by every benchmark in this crate.
pub const CUBIC: usize = 3;

pub type KnotVector64 = KnotVector<f64>;
pub type KnotVector32 = KnotVector<f32>;
pub type Point2 = Point<f64, 2>;
pub type Point3 = Point<f64, 3>;
pub type Curve2 = BSplineCurve<f64, 2>;
pub type Curve3 = BSplineCurve<f64, 3>;
pub type Curve2f = BSplineCurve<f32, 2>;
pub type Assignment64 = ParameterAssignment<f64>;
pub type FitReport2 = FitReport<f64, 2>;
pub type FitReport3 = FitReport<f64, 3>;
pub type Record2 = EvaluationRecord<f64, 2>;
pub type Record3 = EvaluationRecord<f64, 3>;
