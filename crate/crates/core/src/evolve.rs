//! Genetic algorithm over rule permutations.

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::agents::{AgentPolicy, Chromosome};
use crate::error::{HanabiError, Result};
use crate::eval::{evaluate, EvalConfig, EvalMode, FitnessReport, ALL_SIZES};
use crate::rng::{derive_seed, rng_for, GameRng};
use crate::rules::{catalog, Edition};

const GENERATION_TAG: u64 = 0x0067_656e;
const VARIATION_TAG: u64 = 0x0076_6172;
const REEVAL_TAG: u64 = 0x7265_6576;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    /// Population size.
    pub p: usize,
    /// Chromosome length; must equal the catalog size when given.
    pub s: Option<usize>,
    /// Per-offspring swap-mutation probability.
    pub m: f64,
    /// Crossover probability.
    pub c: f64,
    /// Elites copied unchanged.
    pub e: usize,
    /// Tournament size.
    pub t: usize,
    /// Generations.
    pub g: usize,
    /// Games per size and pairing in each generation.
    pub n: usize,
    pub edition: Edition,
    pub mode: EvalMode,
    pub sizes: Vec<usize>,
    pub seed: u64,
    /// Chromosomes re-evaluated at the end.
    pub top_k: usize,
    /// Games per size and pairing in the re-evaluation.
    pub big_n: usize,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            p: 200,
            s: None,
            m: 0.1,
            c: 0.9,
            e: 20,
            t: 5,
            g: 500,
            n: 20,
            edition: Edition::New,
            mode: EvalMode::Mirror,
            sizes: ALL_SIZES.to_vec(),
            seed: 0,
            top_k: 10,
            big_n: 2000,
        }
    }
}

impl EvolveConfig {
    pub fn chromosome_size(&self) -> usize {
        catalog(self.edition).len()
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |k: &str, m: String| Err(HanabiError::config(k, m));
        if self.p == 0 {
            return cfg("p", "population must be positive".into());
        }
        if let Some(s) = self.s {
            let size = self.chromosome_size();
            if s != size {
                return cfg(
                    "s",
                    format!("{s} does not match the {} catalog size {size}", self.edition),
                );
            }
        }
        if !(0.0..=1.0).contains(&self.m) {
            return cfg("m", format!("{} is not a probability", self.m));
        }
        if !(0.0..=1.0).contains(&self.c) {
            return cfg("c", format!("{} is not a probability", self.c));
        }
        if self.e > self.p {
            return cfg("e", format!("elitism {} exceeds population {}", self.e, self.p));
        }
        if self.t == 0 || self.t > self.p {
            return cfg("t", format!("tournament size must be in 1..={}", self.p));
        }
        if self.g == 0 {
            return cfg("G", "at least one generation is required".into());
        }
        if self.top_k == 0 {
            return cfg("top_k", "must be positive".into());
        }
        if self.big_n == 0 {
            return cfg("big_n", "must be positive".into());
        }
        self.eval_config(0, self.n).validate()
    }

    pub fn eval_config(&self, seed_base: u64, n: usize) -> EvalConfig {
        EvalConfig::with_mode(self.mode, &self.sizes, n, seed_base)
    }

    /// Seed-set root shared by every individual of generation `g`.
    pub fn generation_seed(&self, g: usize) -> u64 {
        derive_seed(self.seed, &[GENERATION_TAG, g as u64])
    }

    pub fn reevaluation_seed(&self) -> u64 {
        derive_seed(self.seed, &[REEVAL_TAG])
    }
}

/// Copies `a[i..=j]` in place and fills the other positions left to right
/// with the genes of `b` in `b`'s order.
pub fn ordered_crossover_at<T: Copy + PartialEq>(a: &[T], b: &[T], i: usize, j: usize) -> Vec<T> {
    assert!(i <= j && j < a.len() && a.len() == b.len());
    let segment = &a[i..=j];
    let mut fill = b.iter().filter(|g| !segment.contains(g));
    (0..a.len())
        .map(|pos| {
            if (i..=j).contains(&pos) {
                a[pos]
            } else {
                *fill.next().expect("b is a permutation of a")
            }
        })
        .collect()
}

pub fn ordered_crossover(a: &Chromosome, b: &Chromosome, rng: &mut impl Rng) -> Result<Chromosome> {
    if a.edition() != b.edition() || a.len() != b.len() {
        return Err(HanabiError::InvalidInput(
            "crossover parents come from different catalogs".into(),
        ));
    }
    let n = a.len();
    let (mut i, mut j) = (rng.gen_range(0..n), rng.gen_range(0..n));
    if i > j {
        std::mem::swap(&mut i, &mut j);
    }
    let genes = ordered_crossover_at(a.genes(), b.genes(), i, j);
    Ok(Chromosome::from_genes_unchecked(a.edition(), genes))
}

/// With probability `m`, exchanges two distinct positions.
pub fn swap_mutation(chrom: &Chromosome, rng: &mut impl Rng, m: f64) -> Chromosome {
    let mut genes = chrom.genes().to_vec();
    let n = genes.len();
    if n >= 2 && rng.gen_bool(m) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        genes.swap(i, j);
    }
    Chromosome::from_genes_unchecked(chrom.edition(), genes)
}

/// Index of the tournament winner: `t` distinct individuals drawn, highest
/// fitness wins, ties go to the lower index.
pub fn tournament_index(fitness: &[f64], t: usize, rng: &mut impl Rng) -> usize {
    index::sample(rng, fitness.len(), t)
        .into_iter()
        .min_by(|&x, &y| better(fitness, x, y))
        .expect("t >= 1")
}

pub fn tournament_select<'a>(
    population: &'a [Chromosome],
    fitness: &[f64],
    t: usize,
    rng: &mut impl Rng,
) -> &'a Chromosome {
    &population[tournament_index(fitness, t, rng)]
}

/// Ordering that puts the fitter individual first, lower index on ties.
fn better(fitness: &[f64], x: usize, y: usize) -> Ordering {
    fitness[y]
        .partial_cmp(&fitness[x])
        .unwrap_or(Ordering::Equal)
        .then(x.cmp(&y))
}

/// Indices sorted from fittest to least fit.
pub fn ranking(fitness: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..fitness.len()).collect();
    idx.sort_by(|&x, &y| better(fitness, x, y));
    idx
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub seed_base: u64,
    pub population: Vec<Chromosome>,
    pub fitness: Vec<f64>,
    pub best_index: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

impl GenerationRecord {
    pub fn best(&self) -> &Chromosome {
        &self.population[self.best_index]
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    pub history: Vec<GenerationRecord>,
    pub final_population: Vec<Chromosome>,
}

fn evaluate_population(population: &[Chromosome], cfg: &EvalConfig) -> Result<Vec<FitnessReport>> {
    population
        .par_iter()
        .map(|c| evaluate(&AgentPolicy::RuleSequence(c.clone()), cfg))
        .collect()
}

fn next_generation(
    population: &[Chromosome],
    fitness: &[f64],
    config: &EvolveConfig,
    rng: &mut GameRng,
) -> Result<Vec<Chromosome>> {
    let mut next: Vec<Chromosome> = ranking(fitness)
        .into_iter()
        .take(config.e)
        .map(|i| population[i].clone())
        .collect();
    while next.len() < config.p {
        let a = tournament_select(population, fitness, config.t, rng);
        let b = tournament_select(population, fitness, config.t, rng);
        let child = if rng.gen_bool(config.c) {
            ordered_crossover(a, b, rng)?
        } else {
            a.clone()
        };
        next.push(swap_mutation(&child, rng, config.m));
    }
    Ok(next)
}

/// Runs the GA. `observe` sees every generation with its per-individual
/// reports as soon as it has been evaluated.
pub fn evolve_with(
    config: &EvolveConfig,
    mut observe: impl FnMut(&GenerationRecord, &[FitnessReport]) -> Result<()>,
) -> Result<EvolveOutcome> {
    config.validate()?;
    let mut rng = rng_for(derive_seed(config.seed, &[VARIATION_TAG]), 0);
    let mut population: Vec<Chromosome> = (0..config.p)
        .map(|_| Chromosome::random(config.edition, &mut rng))
        .collect();
    let mut history = Vec::with_capacity(config.g);
    for generation in 0..config.g {
        let seed_base = config.generation_seed(generation);
        let reports = evaluate_population(&population, &config.eval_config(seed_base, config.n))?;
        let fitness: Vec<f64> = reports.iter().map(|r| r.mean).collect();
        let best_index = ranking(&fitness)[0];
        let record = GenerationRecord {
            generation,
            seed_base,
            best_index,
            best_fitness: fitness[best_index],
            mean_fitness: fitness.iter().sum::<f64>() / fitness.len() as f64,
            population: population.clone(),
            fitness,
        };
        observe(&record, &reports)?;
        if generation + 1 < config.g {
            population = next_generation(&population, &record.fitness, config, &mut rng)?;
        }
        history.push(record);
    }
    Ok(EvolveOutcome {
        history,
        final_population: population,
    })
}

pub fn evolve(config: &EvolveConfig) -> Result<EvolveOutcome> {
    evolve_with(config, |_, _| Ok(()))
}

/// The `k` distinct chromosomes with the highest recorded fitness, earliest
/// first on ties.
pub fn top_recorded(history: &[GenerationRecord], k: usize) -> Vec<(Chromosome, f64)> {
    let mut all: Vec<(f64, usize, usize)> = history
        .iter()
        .flat_map(|r| r.fitness.iter().enumerate().map(move |(i, &f)| (f, r.generation, i)))
        .collect();
    all.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then((a.1, a.2).cmp(&(b.1, b.2)))
    });
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (f, g, i) in all {
        let chrom = &history[g].population[i];
        if seen.insert(chrom.clone()) {
            out.push((chrom.clone(), f));
            if out.len() == k {
                break;
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Reevaluated {
    pub chromosome: Chromosome,
    pub recorded_fitness: f64,
    pub report: FitnessReport,
}

/// Re-scores the best recorded chromosomes on a fresh seed-set and ranks
/// them by the new mean.
pub fn reevaluate_top(history: &[GenerationRecord], k: usize, eval: &EvalConfig) -> Result<Vec<Reevaluated>> {
    if history.is_empty() {
        return Err(HanabiError::InvalidInput("empty history".into()));
    }
    let top = top_recorded(history, k);
    let mut out = top
        .into_par_iter()
        .map(|(chromosome, recorded_fitness)| {
            let report = evaluate(&AgentPolicy::RuleSequence(chromosome.clone()), eval)?;
            Ok(Reevaluated {
                chromosome,
                recorded_fitness,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| b.report.mean.partial_cmp(&a.report.mean).unwrap_or(Ordering::Equal));
    Ok(out)
}
