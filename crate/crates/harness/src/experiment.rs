//! Iteration sweeps: one optimizer run per (iteration count, repeat, method).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use knotfit_core::dea::DeaConfig;
use knotfit_core::ga::GaConfig;
use knotfit_core::knot_genome::{KnotProblem, KnotSearch};
use knotfit_core::param_fit::parameterize;
use knotfit_core::{Curve2, Curve3, Parameterization, Point, CUBIC};

use crate::curves::{CurveSpec, PointSet};
use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dea,
    Ga,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Dea => "dea",
            Self::Ga => "ga",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Dea,
    Ga,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> &'static [Method] {
        match self {
            Self::Dea => &[Method::Dea],
            Self::Ga => &[Method::Ga],
            Self::Both => &[Method::Dea, Method::Ga],
        }
    }
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dea" => Ok(Self::Dea),
            "ga" => Ok(Self::Ga),
            "both" => Ok(Self::Both),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub curve: CurveSpec,
    pub method: MethodChoice,
    /// Optimizer loops (DEA) or generations (GA) per row, ascending.
    pub iteration_sweep: Vec<usize>,
    /// Template for DEA runs; `loops_number` and `seed` are set per row.
    pub dea: DeaConfig,
    /// Template for GA runs; `generations`, `population_size` and `seed` are
    /// set per row so both methods get the same budget.
    pub ga: GaConfig,
    pub parameterization: Parameterization,
    pub degree: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(curve: CurveSpec) -> Self {
        Self {
            curve,
            method: MethodChoice::Dea,
            iteration_sweep: vec![10, 25, 50, 100, 250, 500, 1000, 2000],
            dea: DeaConfig::default(),
            ga: GaConfig::default(),
            parameterization: Parameterization::Centripetal,
            degree: CUBIC,
            repeats: 1,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.iteration_sweep.is_empty() {
            return Err(HarnessError::Usage("iteration sweep is empty".into()));
        }
        if self.iteration_sweep.contains(&0) {
            return Err(HarnessError::Usage(
                "iteration counts must be positive".into(),
            ));
        }
        if self.iteration_sweep.windows(2).any(|w| w[1] < w[0]) {
            return Err(HarnessError::Usage(
                "iteration sweep must be ascending".into(),
            ));
        }
        if self.repeats == 0 {
            return Err(HarnessError::Usage("repeats must be positive".into()));
        }
        if self.degree == 0 {
            return Err(HarnessError::Usage("degree must be positive".into()));
        }
        Ok(())
    }
}

/// Seed of row `row` in a sweep started from `master` (SplitMix64 step).
pub fn derive_seed(master: u64, row: u64) -> u64 {
    let mut z = master.wrapping_add(row.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub iterations: usize,
    pub method: Method,
    /// `None` when no feasible genome was found.
    pub rmse: Option<f64>,
    pub euclidean_distance: Option<f64>,
    pub control_points: usize,
    pub cost: Option<f64>,
    pub fitness: f64,
    pub seed: u64,
    pub wall_time_ms: f64,
}

impl ResultRow {
    pub fn feasible(&self) -> bool {
        self.euclidean_distance.is_some()
    }

    /// Equality on everything except the wall time.
    pub fn same_result(&self, other: &Self) -> bool {
        Self {
            wall_time_ms: 0.0,
            ..self.clone()
        } == Self {
            wall_time_ms: 0.0,
            ..other.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultsTable {
    pub rows: Vec<ResultRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FittedCurve {
    Planar(Curve2),
    Spatial(Curve3),
}

impl FittedCurve {
    pub fn degree(&self) -> usize {
        match self {
            Self::Planar(c) => c.degree(),
            Self::Spatial(c) => c.degree(),
        }
    }

    pub fn knots(&self) -> &[f64] {
        match self {
            Self::Planar(c) => c.knot_vector().knots(),
            Self::Spatial(c) => c.knot_vector().knots(),
        }
    }

    pub fn control_rows(&self) -> Vec<Vec<f64>> {
        match self {
            Self::Planar(c) => c.control_points().iter().map(|p| p.0.to_vec()).collect(),
            Self::Spatial(c) => c.control_points().iter().map(|p| p.0.to_vec()).collect(),
        }
    }

    pub fn sample_rows(&self, count: usize) -> Vec<Vec<f64>> {
        match self {
            Self::Planar(c) => c.sample(count).iter().map(|p| p.0.to_vec()).collect(),
            Self::Spatial(c) => c.sample(count).iter().map(|p| p.0.to_vec()).collect(),
        }
    }
}

/// A finished sweep: its table, the lowest-cost fitted curve, and the data.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub table: ResultsTable,
    pub best_fit: Option<FittedCurve>,
    pub points: PointSet,
}

impl ExperimentOutcome {
    pub fn all_infeasible(&self) -> bool {
        self.table.rows.iter().all(|r| !r.feasible())
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    config.validate()?;
    let points = config.curve.points()?;
    run_on_points(points, config)
}

/// Runs the sweep on already loaded points; `config.curve` is ignored.
pub fn run_on_points(
    points: PointSet,
    config: &ExperimentConfig,
) -> Result<ExperimentOutcome, HarnessError> {
    config.validate()?;
    let (table, best_fit) = match &points {
        PointSet::Planar(p) => {
            let (t, best) = sweep(p, config)?;
            (t, best.map(FittedCurve::Planar))
        }
        PointSet::Spatial(p) => {
            let (t, best) = sweep(p, config)?;
            (t, best.map(FittedCurve::Spatial))
        }
    };
    Ok(ExperimentOutcome {
        table,
        best_fit,
        points,
    })
}

type Sweep<const D: usize> = (ResultsTable, Option<knotfit_core::BSplineCurve<f64, D>>);

fn sweep<const D: usize>(
    points: &[Point<f64, D>],
    config: &ExperimentConfig,
) -> Result<Sweep<D>, HarnessError> {
    let assignment = parameterize(points, config.parameterization)?;
    let problem = KnotProblem::new(points.to_vec(), assignment, config.degree)?;
    let mut table = ResultsTable::default();
    let mut best: Option<(f64, knotfit_core::BSplineCurve<f64, D>)> = None;
    let mut row_index = 0u64;
    for &iterations in &config.iteration_sweep {
        for _ in 0..config.repeats {
            for &method in config.method.methods() {
                let seed = derive_seed(config.seed, row_index);
                row_index += 1;
                let started = Instant::now();
                let search = run_method(&problem, method, iterations, seed, config)?;
                let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
                let record = search.best;
                let row = match &record.report {
                    Some(r) => ResultRow {
                        iterations,
                        method,
                        rmse: Some(r.rmse),
                        euclidean_distance: Some(r.euclidean_distance),
                        control_points: r.control_point_count,
                        cost: Some(record.cost),
                        fitness: record.fitness,
                        seed,
                        wall_time_ms,
                    },
                    None => ResultRow {
                        iterations,
                        method,
                        rmse: None,
                        euclidean_distance: None,
                        control_points: 0,
                        cost: None,
                        fitness: 0.0,
                        seed,
                        wall_time_ms,
                    },
                };
                if let Some(report) = record.report {
                    if best.as_ref().is_none_or(|(c, _)| record.cost < *c) {
                        best = Some((record.cost, report.curve));
                    }
                }
                table.rows.push(row);
            }
        }
    }
    Ok((table, best.map(|(_, c)| c)))
}

fn run_method<const D: usize>(
    problem: &KnotProblem<f64, D>,
    method: Method,
    iterations: usize,
    seed: u64,
    config: &ExperimentConfig,
) -> Result<KnotSearch<f64, D>, HarnessError> {
    let search = match method {
        Method::Dea => problem.solve_dea(&DeaConfig {
            loops_number: iterations,
            seed,
            ..config.dea.clone()
        }),
        Method::Ga => problem.solve_ga(&GaConfig {
            generations: iterations,
            population_size: config.dea.locations_count,
            seed,
            ..config.ga.clone()
        }),
    };
    Ok(search?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_per_row() {
        let seeds: Vec<u64> = (0..100).map(|r| derive_seed(7, r)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 100);
        assert_eq!(derive_seed(7, 3), seeds[3]);
    }

    #[test]
    fn sweep_validation() {
        let mut c = ExperimentConfig::new(CurveSpec::spiral());
        c.iteration_sweep = vec![];
        assert!(c.validate().is_err());
        c.iteration_sweep = vec![20, 10];
        assert!(c.validate().is_err());
        c.iteration_sweep = vec![10, 20];
        assert!(c.validate().is_ok());
    }

    #[test]
    fn row_count_is_sweep_times_methods() {
        let mut c = ExperimentConfig::new(CurveSpec::spiral());
        c.method = MethodChoice::Both;
        c.iteration_sweep = vec![10, 25];
        c.dea.locations_count = 10;
        let out = run_experiment(&c).unwrap();
        assert_eq!(out.table.rows.len(), 4);
        for row in &out.table.rows {
            let d = row.euclidean_distance.unwrap();
            let cost = row.cost.unwrap();
            assert!((cost - row.control_points as f64 * d).abs() <= 1e-9 * cost);
        }
        assert!(out.best_fit.is_some());
    }
}
