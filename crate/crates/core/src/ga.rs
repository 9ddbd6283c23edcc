//! Plain generational genetic algorithm over fixed-length bitstrings whose
//! first and last bits are pinned to zero.
//!
//! Tournament selection, one-point crossover, per-bit flip mutation of the
//! free bits, and elitism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability; `None` means `1 / genome_length`.
    pub mutation_rate: Option<f64>,
    pub tournament_size: usize,
    pub elitism_count: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 40,
            generations: 100,
            crossover_rate: 0.9,
            mutation_rate: None,
            tournament_size: 3,
            elitism_count: 1,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self, genome_length: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if genome_length < 3 {
            return bad(format!("genome length {genome_length} leaves no free bit"));
        }
        if self.population_size == 0 || self.generations == 0 {
            return bad("population size and generations must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!(
                "crossover rate {} not in [0, 1]",
                self.crossover_rate
            ));
        }
        if let Some(m) = self.mutation_rate {
            if !(0.0..=1.0).contains(&m) {
                return bad(format!("mutation rate {m} not in [0, 1]"));
            }
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return bad(format!(
                "tournament size {} must be in 1..={}",
                self.tournament_size, self.population_size
            ));
        }
        if self.elitism_count > self.population_size {
            return bad(format!(
                "elitism count {} exceeds the population",
                self.elitism_count
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub best: Vec<bool>,
    pub best_fitness: f64,
    /// Best-ever fitness after each generation.
    pub trace: Vec<f64>,
}

/// Maximizes `fitness` over bitstrings of `genome_length` with pinned ends.
pub fn run<F>(fitness: F, genome_length: usize, config: &GaConfig) -> Result<GaOutcome>
where
    F: Fn(&[bool]) -> f64 + Sync,
{
    config.validate(genome_length)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mutation = config.mutation_rate.unwrap_or(1.0 / genome_length as f64);
    let last = genome_length - 1;

    let mut population: Vec<Vec<bool>> = (0..config.population_size)
        .map(|_| {
            (0..genome_length)
                .map(|i| i != 0 && i != last && rng.gen_bool(0.5))
                .collect()
        })
        .collect();

    let mut best = population[0].clone();
    let mut best_fitness = f64::NEG_INFINITY;
    let mut trace = Vec::with_capacity(config.generations);

    for generation in 0..config.generations {
        let scores: Vec<f64> = population
            .par_iter()
            .map(|g| {
                let f = fitness(g);
                if f.is_finite() && f > 0.0 {
                    f
                } else {
                    0.0
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..population.len()).collect();
        // stable, so ties keep population order
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
        if scores[order[0]] > best_fitness {
            best_fitness = scores[order[0]];
            best.clone_from(&population[order[0]]);
        }
        trace.push(best_fitness);
        if generation + 1 == config.generations {
            break;
        }

        let mut next: Vec<Vec<bool>> = order[..config.elitism_count]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < config.population_size {
            let a = tournament(&scores, config.tournament_size, &mut rng);
            let b = tournament(&scores, config.tournament_size, &mut rng);
            let (mut c1, mut c2) = (population[a].clone(), population[b].clone());
            if rng.gen_bool(config.crossover_rate) {
                let cut = rng.gen_range(1..last);
                c1[cut..].swap_with_slice(&mut c2[cut..]);
            }
            for child in [c1, c2] {
                if next.len() == config.population_size {
                    break;
                }
                let mut child = child;
                mutate(&mut child, mutation, &mut rng);
                next.push(child);
            }
        }
        population = next;
    }

    Ok(GaOutcome {
        best,
        best_fitness,
        trace,
    })
}

fn tournament<R: Rng>(scores: &[f64], size: usize, rng: &mut R) -> usize {
    let mut winner = rng.gen_range(0..scores.len());
    for _ in 1..size {
        let challenger = rng.gen_range(0..scores.len());
        if scores[challenger] > scores[winner] {
            winner = challenger;
        }
    }
    winner
}

fn mutate<R: Rng>(genome: &mut [bool], rate: f64, rng: &mut R) {
    if rate <= 0.0 {
        return;
    }
    let last = genome.len() - 1;
    for bit in &mut genome[1..last] {
        if rng.gen_bool(rate) {
            *bit = !*bit;
        }
    }
}
