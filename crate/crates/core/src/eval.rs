//! Fitness evaluation.
//!
//! Mirror play seats `s` copies of one policy; mixed play seats the
//! protagonist once, at a seeded seat, next to copies of a pool member. Every
//! policy evaluated with the same [`EvalConfig`] faces exactly the same
//! (size, seed, pairing, seat) tuples.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::agents::{AgentPolicy, CompiledAgent, PresetDefinition, PresetName};
use crate::engine::{GameState, MAX_PLAYERS, MIN_PLAYERS};
use crate::error::{HanabiError, Result};
use crate::rng::{derive_seed, rng_for, DECISION_STREAM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalMode {
    Mirror,
    Mixed,
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalMode::Mirror => "mirror",
            EvalMode::Mixed => "mixed",
        })
    }
}

impl FromStr for EvalMode {
    type Err = HanabiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mirror" => Ok(EvalMode::Mirror),
            "mixed" => Ok(EvalMode::Mixed),
            _ => Err(HanabiError::Parse(format!(
                "unknown mode '{s}' (expected mirror or mixed)"
            ))),
        }
    }
}

pub const ALL_SIZES: [usize; 4] = [2, 3, 4, 5];

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub mode: EvalMode,
    pub sizes: Vec<usize>,
    /// Games per (size, pairing).
    pub n: usize,
    /// Root of the seed-set; game `i` of size `s` is dealt from
    /// `derive_seed(seed_base, [s, i])`.
    pub seed_base: u64,
    pub pool: Vec<PresetDefinition>,
}

impl EvalConfig {
    pub fn mirror(sizes: &[usize], n: usize, seed_base: u64) -> EvalConfig {
        EvalConfig {
            mode: EvalMode::Mirror,
            sizes: sizes.to_vec(),
            n,
            seed_base,
            pool: Vec::new(),
        }
    }

    /// Mixed evaluation against the full seven-agent pool.
    pub fn mixed(sizes: &[usize], n: usize, seed_base: u64) -> EvalConfig {
        EvalConfig {
            mode: EvalMode::Mixed,
            sizes: sizes.to_vec(),
            n,
            seed_base,
            pool: PresetName::POOL.into_iter().map(PresetDefinition::bundled).collect(),
        }
    }

    pub fn with_mode(mode: EvalMode, sizes: &[usize], n: usize, seed_base: u64) -> EvalConfig {
        match mode {
            EvalMode::Mirror => EvalConfig::mirror(sizes, n, seed_base),
            EvalMode::Mixed => EvalConfig::mixed(sizes, n, seed_base),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(HanabiError::config("sizes", "at least one game size is required"));
        }
        for &s in &self.sizes {
            if !(MIN_PLAYERS..=MAX_PLAYERS).contains(&s) {
                return Err(HanabiError::config("sizes", format!("{s} is not in 2..=5")));
            }
        }
        let mut sorted = self.sizes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.sizes.len() {
            return Err(HanabiError::config("sizes", "duplicate game size"));
        }
        if self.n == 0 {
            return Err(HanabiError::config("n", "must be positive"));
        }
        if self.mode == EvalMode::Mixed && self.pool.is_empty() {
            return Err(HanabiError::config("pool", "mixed mode needs a non-empty pool"));
        }
        Ok(())
    }

    pub fn seed(&self, size: usize, game: usize) -> u64 {
        derive_seed(self.seed_base, &[size as u64, game as u64])
    }

    fn pairings(&self) -> usize {
        match self.mode {
            EvalMode::Mirror => 1,
            EvalMode::Mixed => self.pool.len(),
        }
    }

    pub fn expected_games(&self) -> usize {
        self.sizes.len() * self.pairings() * self.n
    }

    /// Every game this configuration plays, in report order.
    pub fn fixtures(&self) -> Vec<Fixture> {
        let mut out = Vec::with_capacity(self.expected_games());
        for &size in &self.sizes {
            for pairing in 0..self.pairings() {
                for game in 0..self.n {
                    let seed = self.seed(size, game);
                    let (pairing, seat) = match self.mode {
                        EvalMode::Mirror => (None, 0),
                        EvalMode::Mixed => (Some(pairing), protagonist_seat(seed, size, pairing)),
                    };
                    out.push(Fixture {
                        size,
                        pairing,
                        seat,
                        seed,
                    });
                }
            }
        }
        out
    }
}

/// Seat of the evaluated policy in a mixed game.
pub fn protagonist_seat(seed: u64, size: usize, pairing: usize) -> usize {
    (derive_seed(seed, &[size as u64, pairing as u64]) % size as u64) as usize
}

/// One game of an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fixture {
    pub size: usize,
    /// Pool index in mixed play.
    pub pairing: Option<usize>,
    /// Protagonist seat; 0 in mirror play.
    pub seat: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameRecord {
    pub fixture: Fixture,
    pub score: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitnessReport {
    pub mean: f64,
    pub per_size: Vec<(usize, f64)>,
    pub games: usize,
    pub sem: f64,
    pub records: Vec<GameRecord>,
}

impl FitnessReport {
    pub fn from_records(records: Vec<GameRecord>) -> FitnessReport {
        let games = records.len();
        let scores = records.iter().map(|r| r.score as f64);
        let (mean, sem) = mean_sem(scores);
        let mut sizes: Vec<usize> = records.iter().map(|r| r.fixture.size).collect();
        sizes.sort_unstable();
        sizes.dedup();
        let per_size = sizes
            .into_iter()
            .map(|s| {
                let (m, _) = mean_sem(records.iter().filter(|r| r.fixture.size == s).map(|r| r.score as f64));
                (s, m)
            })
            .collect();
        FitnessReport {
            mean,
            per_size,
            games,
            sem,
            records,
        }
    }

    pub fn size_mean(&self, size: usize) -> Option<f64> {
        self.per_size.iter().find(|(s, _)| *s == size).map(|&(_, m)| m)
    }
}

impl fmt::Display for FitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, m) in &self.per_size {
            write!(f, "{s}p={m:.2}  ")?;
        }
        write!(f, "mean={:.2} sem={:.3} games={}", self.mean, self.sem, self.games)
    }
}

/// Sample mean and standard error; the error of fewer than two values is 0.
pub fn mean_sem(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let values: Vec<f64> = values.collect();
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Plays one game to the end. Decisions draw from the game's decision stream.
pub fn run_match(seats: &[&CompiledAgent], seed: u64) -> Result<GameState> {
    let mut state = GameState::new(seats.len(), seed)?;
    let mut rng = rng_for(seed, DECISION_STREAM);
    while !state.is_terminal() {
        let player = state.current_player();
        let action = seats[player].act(&state, player, &mut rng);
        state.apply(action)?;
    }
    Ok(state)
}

/// [`run_match`] with uncompiled policies.
pub fn run_policies(policies: &[&AgentPolicy], seed: u64) -> Result<GameState> {
    let compiled: Vec<CompiledAgent> = policies.iter().map(|p| p.compile(policies.len())).collect();
    let refs: Vec<&CompiledAgent> = compiled.iter().collect();
    run_match(&refs, seed)
}

fn play_fixture(policy: &AgentPolicy, pool: &[PresetDefinition], fx: Fixture) -> Result<u32> {
    let me = policy.compile(fx.size);
    let state = match fx.pairing {
        None => run_match(&vec![&me; fx.size], fx.seed)?,
        Some(p) => {
            let partner = AgentPolicy::Preset(pool[p].clone()).compile(fx.size);
            let seats: Vec<&CompiledAgent> = (0..fx.size)
                .map(|s| if s == fx.seat { &me } else { &partner })
                .collect();
            run_match(&seats, fx.seed)?
        }
    };
    Ok(state.score())
}

/// Evaluates `policy` under `config`, in whichever mode it names.
///
/// Games run on the current rayon pool; the report does not depend on the
/// number of workers.
pub fn evaluate(policy: &AgentPolicy, config: &EvalConfig) -> Result<FitnessReport> {
    config.validate()?;
    let records = config
        .fixtures()
        .into_par_iter()
        .map(|fixture| play_fixture(policy, &config.pool, fixture).map(|score| GameRecord { fixture, score }))
        .collect::<Result<Vec<_>>>()?;
    Ok(FitnessReport::from_records(records))
}

pub fn mirror_fitness(policy: &AgentPolicy, config: &EvalConfig) -> Result<FitnessReport> {
    if config.mode != EvalMode::Mirror {
        return Err(HanabiError::config("mode", "mirror_fitness needs mode = mirror"));
    }
    evaluate(policy, config)
}

pub fn mixed_fitness(policy: &AgentPolicy, config: &EvalConfig) -> Result<FitnessReport> {
    if config.mode != EvalMode::Mixed {
        return Err(HanabiError::config("mode", "mixed_fitness needs mode = mixed"));
    }
    evaluate(policy, config)
}

/// Runs `f` on a dedicated pool of `workers` threads (0 = rayon default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HanabiError::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub const SCORE_LOG_HEADER: &str = "generation,individual,mode,size,pairing,seat,seed,score";

/// Appends one line per game to a score log.
pub fn write_score_log(
    out: &mut impl Write,
    generation: usize,
    individual: usize,
    mode: EvalMode,
    report: &FitnessReport,
) -> std::io::Result<()> {
    for r in &report.records {
        let f = r.fixture;
        let pairing = f.pairing.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "{generation},{individual},{mode},{},{pairing},{},{},{}",
            f.size, f.seat, f.seed, r.score
        )?;
    }
    Ok(())
}

/// One parsed score-log line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoreLogEntry {
    pub generation: usize,
    pub individual: usize,
    pub mode: EvalMode,
    pub fixture: Fixture,
    pub score: u32,
}

impl FromStr for ScoreLogEntry {
    type Err = HanabiError;

    fn from_str(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 8 {
            return Err(HanabiError::Parse(format!("score log line needs 8 fields: '{line}'")));
        }
        let num = |i: usize| -> Result<u64> {
            fields[i]
                .parse()
                .map_err(|_| HanabiError::Parse(format!("field {i} of '{line}' is not a number")))
        };
        Ok(ScoreLogEntry {
            generation: num(0)? as usize,
            individual: num(1)? as usize,
            mode: fields[2].parse()?,
            fixture: Fixture {
                size: num(3)? as usize,
                pairing: if fields[4] == "-" { None } else { Some(num(4)? as usize) },
                seat: num(5)? as usize,
                seed: num(6)?,
            },
            score: num(7)? as u32,
        })
    }
}
