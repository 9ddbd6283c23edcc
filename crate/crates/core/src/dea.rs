//! Discrete Dolphin Echolocation.
//!
//! Each variable picks one of an ordered list of alternatives. Every loop the
//! population's fitness is accumulated onto the chosen alternatives (and,
//! within the effective radius, onto their neighbours with triangular weights
//! and mirror reflection at the list ends). The best location of the loop then
//! receives probability `PP` per variable, the remaining `1 - PP` is split
//! over the other alternatives in proportion to their accumulated fitness, and
//! the next population is drawn from those categorical distributions. `PP`
//! follows a power-law schedule from `PP_1` on the first loop to 1 on the last.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};

/// How the small constant added to every accumulated fitness is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Epsilon {
    /// A fixed value.
    Absolute(f64),
    /// This fraction of the loop's best fitness, recomputed every loop.
    RelativeToBest(f64),
}

impl Default for Epsilon {
    fn default() -> Self {
        Self::RelativeToBest(1e-9)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeaConfig {
    pub locations_count: usize,
    pub loops_number: usize,
    /// Convergence factor of the first loop.
    pub pp_first: f64,
    /// Exponent of the convergence curve.
    pub power: f64,
    pub effective_radius: usize,
    pub epsilon: Epsilon,
    pub seed: u64,
}

impl Default for DeaConfig {
    fn default() -> Self {
        Self {
            locations_count: 40,
            loops_number: 100,
            pp_first: 0.1,
            power: 1.0,
            effective_radius: 0,
            epsilon: Epsilon::default(),
            seed: 0,
        }
    }
}

impl DeaConfig {
    pub fn validate(&self, model: &AlternativesModel) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.locations_count == 0 {
            return bad("locations_count must be positive".into());
        }
        if self.loops_number == 0 {
            return bad("loops_number must be positive".into());
        }
        if !(self.pp_first > 0.0 && self.pp_first < 1.0) {
            return bad(format!("pp_first {} not in (0, 1)", self.pp_first));
        }
        if !(self.power > 0.0 && self.power.is_finite()) {
            return bad(format!("power {} must be positive", self.power));
        }
        match self.epsilon {
            Epsilon::Absolute(e) | Epsilon::RelativeToBest(e) if !(e > 0.0 && e.is_finite()) => {
                return bad(format!("epsilon {e} must be positive"));
            }
            _ => {}
        }
        let limit = model.max_len() / 4;
        if self.effective_radius > limit {
            return bad(format!(
                "effective radius {} exceeds a quarter of the largest alternative list ({limit})",
                self.effective_radius
            ));
        }
        Ok(())
    }
}

/// Sizes of the per-variable alternative lists. Alternatives are addressed by
/// their position in a list sorted by the variable's most important property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativesModel {
    lengths: Vec<usize>,
}

impl AlternativesModel {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return domain("at least one variable is required");
        }
        if let Some(j) = lengths.iter().position(|&l| l == 0) {
            return domain(format!("variable {j} has no alternatives"));
        }
        Ok(Self { lengths })
    }

    /// Builds the model from explicit alternative values, checking that each
    /// list is strictly ascending or strictly descending.
    pub fn from_values<A: PartialOrd>(alternatives: &[Vec<A>]) -> Result<Self> {
        for (j, list) in alternatives.iter().enumerate() {
            let ascending = list.windows(2).all(|w| w[0] < w[1]);
            let descending = list.windows(2).all(|w| w[0] > w[1]);
            if !(ascending || descending) {
                return domain(format!(
                    "alternatives of variable {j} are not sorted and distinct"
                ));
            }
        }
        Self::new(alternatives.iter().map(Vec::len).collect())
    }

    /// `variables` binary choices `{0, 1}`.
    pub fn binary(variables: usize) -> Self {
        Self {
            lengths: vec![2; variables.max(1)],
        }
    }

    pub fn variables(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn max_len(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }
}

/// `PP_1 + (1 - PP_1) (loop^power - 1) / (loops^power - 1)`; 1 for a single-loop run.
pub fn convergence_pp(loop_index: usize, config: &DeaConfig) -> f64 {
    let loops = config.loops_number;
    if loops <= 1 {
        return 1.0;
    }
    let loop_index = loop_index.clamp(1, loops);
    if loop_index == loops {
        return 1.0;
    }
    let num = (loop_index as f64).powf(config.power) - 1.0;
    let den = (loops as f64).powf(config.power) - 1.0;
    config.pp_first + (1.0 - config.pp_first) * num / den
}

/// Triangular weight of an alternative `offset` positions from the chosen one.
pub fn neighbour_weight(offset: usize, radius: usize) -> f64 {
    (radius + 1 - offset) as f64 / (radius + 1) as f64
}

/// Mirror an out-of-range index back into `0..len`: `-m -> m - 1` and
/// `len - 1 + m -> len - m`.
pub fn reflect(index: isize, len: usize) -> usize {
    let len = len as isize;
    let mut i = index;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= len {
            i = 2 * len - 1 - i;
        } else {
            return i as usize;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeaState {
    /// `locations[i][j]` is the alternative index of variable `j` at location `i`.
    pub locations: Vec<Vec<usize>>,
    /// Accumulated fitness per variable and alternative.
    pub accumulated_fitness: Vec<Vec<f64>>,
    /// Best location of the current loop and its fitness.
    pub best_location: Vec<usize>,
    pub best_fitness: f64,
    pub loop_index: usize,
}

impl DeaState {
    pub fn new(model: &AlternativesModel, locations: Vec<Vec<usize>>) -> Result<Self> {
        if locations.is_empty() {
            return domain("no locations");
        }
        for (i, loc) in locations.iter().enumerate() {
            if loc.len() != model.variables() {
                return domain(format!("location {i} has {} variables", loc.len()));
            }
            if let Some(j) = loc.iter().zip(model.lengths()).position(|(&a, &l)| a >= l) {
                return domain(format!("location {i} variable {j} has no such alternative"));
            }
        }
        Ok(Self {
            best_location: locations[0].clone(),
            locations,
            accumulated_fitness: model.lengths().iter().map(|&l| vec![0.0; l]).collect(),
            best_fitness: 0.0,
            loop_index: 1,
        })
    }

    /// Recomputes the accumulated fitness from scratch for this loop's
    /// locations and records the loop's best location (first on ties).
    pub fn accumulate_fitness(
        &mut self,
        location_fitnesses: &[f64],
        effective_radius: usize,
    ) -> Result<()> {
        if location_fitnesses.len() != self.locations.len() {
            return domain(format!(
                "{} fitness values for {} locations",
                location_fitnesses.len(),
                self.locations.len()
            ));
        }
        if let Some(i) = location_fitnesses
            .iter()
            .position(|f| !(*f >= 0.0 && f.is_finite()))
        {
            return domain(format!(
                "fitness of location {i} must be finite and non-negative"
            ));
        }
        for af in &mut self.accumulated_fitness {
            af.iter_mut().for_each(|v| *v = 0.0);
        }
        let r = effective_radius as isize;
        for (loc, &fit) in self.locations.iter().zip(location_fitnesses) {
            for (af, &a) in self.accumulated_fitness.iter_mut().zip(loc) {
                let len = af.len();
                for k in -r..=r {
                    let target = reflect(a as isize + k, len);
                    af[target] += neighbour_weight(k.unsigned_abs(), effective_radius) * fit;
                }
            }
        }
        let (best, &best_fitness) = location_fitnesses.iter().enumerate().fold(
            (0, &location_fitnesses[0]),
            |acc, (i, f)| if *f > *acc.1 { (i, f) } else { acc },
        );
        self.best_location = self.locations[best].clone();
        self.best_fitness = best_fitness;
        Ok(())
    }

    /// Adds `epsilon` to every accumulated fitness, zeroes each variable's
    /// best-location alternative, and returns the sampling distributions: the
    /// best alternative gets `pp`, the others share `1 - pp` by accumulated
    /// fitness.
    pub fn finalize_probabilities(&mut self, pp: f64, epsilon: f64) -> Vec<Vec<f64>> {
        self.accumulated_fitness
            .iter_mut()
            .zip(&self.best_location)
            .map(|(af, &best)| {
                af.iter_mut().for_each(|v| *v += epsilon);
                af[best] = 0.0;
                if af.len() == 1 {
                    return vec![1.0];
                }
                let rest: f64 = af.iter().sum();
                let others = (af.len() - 1) as f64;
                af.iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        if i == best {
                            pp
                        } else if rest > 0.0 {
                            (1.0 - pp) * v / rest
                        } else {
                            (1.0 - pp) / others
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Draws `count` locations, location-major and variable-minor, one uniform
/// number per draw.
pub fn sample_locations<R: Rng + ?Sized>(
    probabilities: &[Vec<f64>],
    count: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    (0..count)
        .map(|_| probabilities.iter().map(|p| draw(p, rng)).collect())
        .collect()
}

fn draw<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probabilities.iter().enumerate() {
        acc += p;
        if x < acc {
            return i;
        }
    }
    // rounding left x above the total; fall back to the last alternative with mass
    probabilities
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probabilities.len() - 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopStats {
    pub loop_index: usize,
    pub pp: f64,
    pub loop_best_fitness: f64,
    /// Best fitness seen in any loop so far.
    pub best_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeaOutcome {
    pub best_location: Vec<usize>,
    pub best_fitness: f64,
    pub trace: Vec<LoopStats>,
}

/// Runs the optimizer, maximizing `fitness`. The callback must be total and
/// non-negative (return 0 for infeasible locations); it is called from several
/// threads at once but never touches the random stream.
pub fn run<F>(model: &AlternativesModel, fitness: F, config: &DeaConfig) -> Result<DeaOutcome>
where
    F: Fn(&[usize]) -> f64 + Sync,
{
    run_observed(model, fitness, config, |_, _| {})
}

/// [`run`], calling `on_loop` after every loop except the last with the loop's
/// statistics and the distributions the next population is drawn from.
pub fn run_observed<F, O>(
    model: &AlternativesModel,
    fitness: F,
    config: &DeaConfig,
    mut on_loop: O,
) -> Result<DeaOutcome>
where
    F: Fn(&[usize]) -> f64 + Sync,
    O: FnMut(&LoopStats, &[Vec<f64>]),
{
    config.validate(model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let uniform: Vec<Vec<f64>> = model
        .lengths()
        .iter()
        .map(|&l| vec![1.0 / l as f64; l])
        .collect();
    let initial = sample_locations(&uniform, config.locations_count, &mut rng);
    let mut state = DeaState::new(model, initial)?;

    let mut best_location = state.locations[0].clone();
    let mut best_fitness = f64::NEG_INFINITY;
    let mut trace = Vec::with_capacity(config.loops_number);

    for loop_index in 1..=config.loops_number {
        state.loop_index = loop_index;
        let pp = convergence_pp(loop_index, config);
        let fitnesses: Vec<f64> = state
            .locations
            .par_iter()
            .map(|loc| sanitize(fitness(loc)))
            .collect();
        state.accumulate_fitness(&fitnesses, config.effective_radius)?;
        if state.best_fitness > best_fitness {
            best_fitness = state.best_fitness;
            best_location.clone_from(&state.best_location);
        }
        trace.push(LoopStats {
            loop_index,
            pp,
            loop_best_fitness: state.best_fitness,
            best_fitness,
        });
        if loop_index == config.loops_number {
            break;
        }
        let epsilon = match config.epsilon {
            Epsilon::Absolute(e) => e,
            Epsilon::RelativeToBest(f) => f * state.best_fitness,
        };
        let probabilities = state.finalize_probabilities(pp, epsilon);
        on_loop(trace.last().expect("pushed above"), &probabilities);
        state.locations = sample_locations(&probabilities, config.locations_count, &mut rng);
    }

    Ok(DeaOutcome {
        best_location,
        best_fitness,
        trace,
    })
}

fn sanitize(f: f64) -> f64 {
    if f.is_finite() && f > 0.0 {
        f
    } else {
        0.0
    }
}
