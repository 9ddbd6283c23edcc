//! Benchmark curves, CSV ingestion, experiment sweeps and output emission for
//! knot-selection experiments. The `knotfit` binary is a thin CLI over this.

pub mod csv_io;
pub mod curves;
mod error;
pub mod experiment;
pub mod output;

pub use csv_io::load_csv;
pub use curves::{
    generate_archimedean_spiral, generate_epitrochoid, generate_vivaldi, AngleUnit, CurveKind,
    CurveSpec, PointSet,
};
pub use error::HarnessError;
pub use experiment::{
    run_experiment, run_on_points, ExperimentConfig, ExperimentOutcome, FittedCurve, Method,
    MethodChoice, ResultRow, ResultsTable,
};
pub use output::{emit_outputs, OutputPaths};
