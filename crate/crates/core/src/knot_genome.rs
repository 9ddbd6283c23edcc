//! Knot selections encoded as bitstrings over the data points.
//!
//! Bit `i` set means the parameter of data point `i` becomes an interior knot.
//! The two endpoint bits are always clear: their parameters are already the
//! clamped end knots.

use std::fmt;

use crate::bspline::{build_clamped_knot_vector, KnotVector, Point};
use crate::dea::{self, AlternativesModel, DeaConfig, DeaOutcome};
use crate::error::{domain, Result};
use crate::ga::{self, GaConfig, GaOutcome};
use crate::param_fit::{FitReport, ParameterAssignment};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KnotGenome {
    bits: Vec<bool>,
}

impl KnotGenome {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() < 2 {
            return domain("a genome covers at least the two endpoints");
        }
        if bits[0] || bits[bits.len() - 1] {
            return domain("endpoint bits cannot be selected");
        }
        Ok(Self { bits })
    }

    /// All-zero genome of length `len` (no interior knots).
    pub fn empty(len: usize) -> Result<Self> {
        Self::new(vec![false; len])
    }

    /// Genome of length `free.len() + 2` with `free` as the interior bits.
    pub fn from_free_bits(free: &[bool]) -> Self {
        let mut bits = Vec::with_capacity(free.len() + 2);
        bits.push(false);
        bits.extend_from_slice(free);
        bits.push(false);
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn free_bits(&self) -> &[bool] {
        &self.bits[1..self.bits.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn selected_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn selected_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }
}

impl fmt::Display for KnotGenome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Interior knots at the parameters of the selected points, clamped at 0 and 1.
pub fn decode<T: Scalar>(
    genome: &KnotGenome,
    assignment: &ParameterAssignment<T>,
    p: usize,
) -> Result<KnotVector<T>> {
    if genome.len() != assignment.len() {
        return domain(format!(
            "genome has {} bits but there are {} parameters",
            genome.len(),
            assignment.len()
        ));
    }
    let bits = genome.bits();
    if bits[0] || bits[bits.len() - 1] {
        return domain("endpoint bits cannot be selected");
    }
    let params = assignment.params();
    let interior: Vec<T> = genome.selected_indices().map(|i| params[i]).collect();
    build_clamped_knot_vector(&interior, p)
}

/// Every basis support `[t_i, t_{i+p+1})` (closed for the last function)
/// holds at least one data parameter, and no interior knot repeats more than
/// `p` times.
///
/// This is necessary, not sufficient, for a full-rank fit: a vector with more
/// control points than data passes but the solve still reports rank deficiency.
pub fn check_feasible<T: Scalar>(
    knot_vector: &KnotVector<T>,
    assignment: &ParameterAssignment<T>,
) -> bool {
    let p = knot_vector.degree();
    let t = knot_vector.knots();
    let interior = knot_vector.interior();
    let mut run = 1;
    for w in interior.windows(2) {
        run = if w[0] == w[1] { run + 1 } else { 1 };
        if run > p {
            return false;
        }
    }
    let params = assignment.params();
    let n = knot_vector.control_point_count();
    let last = t[t.len() - 1];
    (0..n).all(|i| {
        let (lo, hi) = (t[i], t[i + p + 1]);
        let first = params.partition_point(|&u| u < lo);
        match params.get(first) {
            Some(&u) => u < hi || (i + 1 == n && hi == last && u <= hi),
            None => false,
        }
    })
}

/// Outcome of scoring one genome.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRecord<T, const D: usize> {
    pub genome: KnotGenome,
    pub feasible: bool,
    pub report: Option<FitReport<T, D>>,
    /// `1 / (control points * distance)`, or 0 when infeasible.
    pub fitness: f64,
    /// `control points * distance`, or `f64::INFINITY` when infeasible.
    pub cost: f64,
}

impl<T, const D: usize> EvaluationRecord<T, D> {
    fn infeasible(genome: KnotGenome) -> Self {
        Self {
            genome,
            feasible: false,
            report: None,
            fitness: 0.0,
            cost: f64::INFINITY,
        }
    }

    pub fn control_point_count(&self) -> Option<usize> {
        self.report.as_ref().map(|r| r.control_point_count)
    }

    pub fn euclidean_distance(&self) -> Option<f64> {
        self.report.as_ref().map(|r| r.euclidean_distance)
    }
}

/// Decode, check, fit and score. Never fails: every failure is an infeasible
/// record with fitness 0.
pub fn evaluate<T: Scalar, const D: usize>(
    genome: &KnotGenome,
    points: &[Point<T, D>],
    assignment: &ParameterAssignment<T>,
    p: usize,
) -> EvaluationRecord<T, D> {
    let fitted = (|| {
        if points.len() != assignment.len() {
            return domain("point and parameter counts differ");
        }
        let kv = decode(genome, assignment, p)?;
        if !check_feasible(&kv, assignment) {
            return domain("knot vector fails the support condition");
        }
        FitReport::fit(points, assignment, &kv)
    })();
    match fitted {
        Ok(report) => EvaluationRecord {
            genome: genome.clone(),
            feasible: true,
            fitness: report.fitness,
            cost: report.cost,
            report: Some(report),
        },
        Err(_) => EvaluationRecord::infeasible(genome.clone()),
    }
}

/// A dataset prepared for knot search.
#[derive(Debug, Clone)]
pub struct KnotProblem<T, const D: usize> {
    points: Vec<Point<T, D>>,
    assignment: ParameterAssignment<T>,
    degree: usize,
}

/// Best genome of a search together with its per-loop best-ever fitness.
#[derive(Debug, Clone)]
pub struct KnotSearch<T, const D: usize> {
    pub best: EvaluationRecord<T, D>,
    pub trace: Vec<f64>,
}

impl<T: Scalar, const D: usize> KnotProblem<T, D> {
    pub fn new(
        points: Vec<Point<T, D>>,
        assignment: ParameterAssignment<T>,
        degree: usize,
    ) -> Result<Self> {
        if points.len() != assignment.len() {
            return domain(format!(
                "{} points but {} parameters",
                points.len(),
                assignment.len()
            ));
        }
        if points.len() < 3 {
            return domain("knot search needs at least one interior point");
        }
        Ok(Self {
            points,
            assignment,
            degree,
        })
    }

    pub fn points(&self) -> &[Point<T, D>] {
        &self.points
    }

    pub fn assignment(&self) -> &ParameterAssignment<T> {
        &self.assignment
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of selectable (interior) points.
    pub fn free_bits(&self) -> usize {
        self.points.len() - 2
    }

    pub fn evaluate(&self, genome: &KnotGenome) -> EvaluationRecord<T, D> {
        evaluate(genome, &self.points, &self.assignment, self.degree)
    }

    pub fn fitness_of_free_bits(&self, free: &[bool]) -> f64 {
        self.evaluate(&KnotGenome::from_free_bits(free)).fitness
    }

    /// One binary variable per interior point; alternative index 1 selects it.
    pub fn solve_dea(&self, config: &DeaConfig) -> Result<KnotSearch<T, D>> {
        let model = AlternativesModel::binary(self.free_bits());
        let DeaOutcome {
            best_location,
            trace,
            ..
        } = dea::run(
            &model,
            |loc: &[usize]| {
                let free: Vec<bool> = loc.iter().map(|&a| a == 1).collect();
                self.fitness_of_free_bits(&free)
            },
            config,
        )?;
        let free: Vec<bool> = best_location.iter().map(|&a| a == 1).collect();
        Ok(KnotSearch {
            best: self.evaluate(&KnotGenome::from_free_bits(&free)),
            trace: trace.iter().map(|s| s.best_fitness).collect(),
        })
    }

    pub fn solve_ga(&self, config: &GaConfig) -> Result<KnotSearch<T, D>> {
        let GaOutcome { best, trace, .. } = ga::run(
            |bits: &[bool]| {
                self.evaluate(&KnotGenome {
                    bits: bits.to_vec(),
                })
                .fitness
            },
            self.points.len(),
            config,
        )?;
        Ok(KnotSearch {
            best: self.evaluate(&KnotGenome { bits: best }),
            trace,
        })
    }
}
