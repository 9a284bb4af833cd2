//! Run directories.
//!
//! ```text
//! run/
//!   manifest.toml          command line, seed, timestamps
//!   config.toml            resolved configuration
//!   fitness_curve.csv      generation,best,mean
//!   best/gen_0000.toml     best chromosome of each generation
//!   populations/gen_0000.txt   fitness<TAB>rule ids, one individual per line
//!   scores.csv             per-game score log (optional)
//!   top/rank_01.toml       re-evaluated best chromosomes
//!   top_k.csv              their reports
//! ```

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::agents::{AgentPolicy, Chromosome, CompiledAgent, PresetDefinition};
use crate::analysis::{fitness_curve, CURVE_CSV_HEADER};
use crate::config;
use crate::engine::GameState;
use crate::error::{HanabiError, Result};
use crate::eval::{run_match, write_score_log, FitnessReport, ScoreLogEntry, SCORE_LOG_HEADER};
use crate::evolve::{evolve_with, reevaluate_top, EvolveConfig, EvolveOutcome, GenerationRecord, Reevaluated};
use crate::rules::{Edition, RuleId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, enough to re-run the command.
    pub args: Vec<String>,
    pub config_path: Option<String>,
    /// Stored as a string: TOML integers stop at i64::MAX.
    pub seed: String,
    pub out_dir: String,
    pub version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>, config_path: Option<String>, seed: u64, out_dir: &Path) -> Self {
        RunManifest {
            command: command.to_string(),
            args,
            config_path,
            seed: seed.to_string(),
            out_dir: out_dir.display().to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: unix_now(),
            finished_unix: 0,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = toml::to_string(self).map_err(|e| HanabiError::Parse(e.to_string()))?;
        write_file(&dir.join("manifest.toml"), &text)
    }

    pub fn read(path: &Path) -> Result<RunManifest> {
        let text = read_file(path)?;
        toml::from_str(&text).map_err(|e| HanabiError::Parse(format!("{}: {e}", path.display())))
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| HanabiError::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HanabiError::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| HanabiError::io(path, e))
}

fn gen_name(generation: usize, ext: &str) -> String {
    format!("gen_{generation:04}.{ext}")
}

/// Writes artifacts as generations complete.
pub struct RunWriter {
    dir: PathBuf,
    config: EvolveConfig,
    curve: BufWriter<File>,
    scores: Option<BufWriter<File>>,
}

impl RunWriter {
    pub fn create(dir: &Path, config: &EvolveConfig, score_log: bool) -> Result<RunWriter> {
        for sub in ["", "best", "populations", "top"] {
            create_dir(&dir.join(sub))?;
        }
        write_file(&dir.join("config.toml"), &config::to_toml(config))?;
        let open = |name: &str, header: &str| -> Result<BufWriter<File>> {
            let path = dir.join(name);
            let mut w = BufWriter::new(File::create(&path).map_err(|e| HanabiError::io(&path, e))?);
            writeln!(w, "{header}").map_err(|e| HanabiError::io(&path, e))?;
            Ok(w)
        };
        Ok(RunWriter {
            dir: dir.to_path_buf(),
            config: config.clone(),
            curve: open("fitness_curve.csv", CURVE_CSV_HEADER)?,
            scores: if score_log {
                Some(open("scores.csv", SCORE_LOG_HEADER)?)
            } else {
                None
            },
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn io(&self, name: &str) -> impl Fn(std::io::Error) -> HanabiError + '_ {
        let path = self.dir.join(name);
        move |e| HanabiError::io(&path, e)
    }

    pub fn observe(&mut self, record: &GenerationRecord, reports: &[FitnessReport]) -> Result<()> {
        let point = fitness_curve(std::slice::from_ref(record))[0];
        writeln!(self.curve, "{},{},{}", point.generation, point.best, point.mean)
            .map_err(self.io("fitness_curve.csv"))?;
        self.curve.flush().map_err(self.io("fitness_curve.csv"))?;
        write_file(
            &self.dir.join("best").join(gen_name(record.generation, "toml")),
            &record.best().to_file_string(),
        )?;
        let mut pop = String::new();
        for (chrom, f) in record.population.iter().zip(&record.fitness) {
            pop.push_str(&format!("{f}\t{chrom}\n"));
        }
        write_file(
            &self.dir.join("populations").join(gen_name(record.generation, "txt")),
            &pop,
        )?;
        if let Some(w) = self.scores.as_mut() {
            let path = self.dir.join("scores.csv");
            for (i, report) in reports.iter().enumerate() {
                write_score_log(w, record.generation, i, self.config.mode, report)
                    .map_err(|e| HanabiError::io(&path, e))?;
            }
            w.flush().map_err(|e| HanabiError::io(&path, e))?;
        }
        Ok(())
    }

    pub fn finish(&mut self, top: &[Reevaluated]) -> Result<()> {
        let mut csv = String::from("rank,recorded_fitness,mean,sem,games");
        for &s in &self.config.sizes {
            csv.push_str(&format!(",mean_{s}p"));
        }
        csv.push('\n');
        for (rank, r) in top.iter().enumerate() {
            write_file(
                &self.dir.join("top").join(format!("rank_{:02}.toml", rank + 1)),
                &r.chromosome.to_file_string(),
            )?;
            csv.push_str(&format!(
                "{},{},{},{},{}",
                rank + 1,
                r.recorded_fitness,
                r.report.mean,
                r.report.sem,
                r.report.games
            ));
            for (_, m) in &r.report.per_size {
                csv.push_str(&format!(",{m}"));
            }
            csv.push('\n');
        }
        write_file(&self.dir.join("top_k.csv"), &csv)
    }
}

pub struct EvolveRun {
    pub outcome: EvolveOutcome,
    pub top: Vec<Reevaluated>,
}

/// Evolves, re-evaluates the best chromosomes and writes every artifact
/// except the manifest.
pub fn run_evolve(
    config: &EvolveConfig,
    dir: &Path,
    score_log: bool,
    mut progress: impl FnMut(&GenerationRecord),
) -> Result<EvolveRun> {
    let mut writer = RunWriter::create(dir, config, score_log)?;
    let outcome = evolve_with(config, |record, reports| {
        progress(record);
        writer.observe(record, reports)
    })?;
    let eval = config.eval_config(config.reevaluation_seed(), config.big_n);
    let top = reevaluate_top(&outcome.history, config.top_k, &eval)?;
    writer.finish(&top)?;
    Ok(EvolveRun { outcome, top })
}

pub fn load_population(dir: &Path, generation: usize, edition: Edition) -> Result<Vec<Chromosome>> {
    let path = dir.join("populations").join(gen_name(generation, "txt"));
    read_file(&path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let ids = line
                .split('\t')
                .nth(1)
                .ok_or_else(|| HanabiError::Parse(format!("{}: bad line '{line}'", path.display())))?;
            let genes = ids
                .split_whitespace()
                .map(|t| {
                    t.parse::<u16>()
                        .map(RuleId)
                        .map_err(|_| HanabiError::Parse(format!("{}: bad rule id '{t}'", path.display())))
                })
                .collect::<Result<Vec<_>>>()?;
            Chromosome::new(edition, genes)
        })
        .collect()
}

/// Seats for one logged game: the individual at the protagonist seat, the
/// pool member (or more copies of the individual) elsewhere.
pub fn seats_for(entry: &ScoreLogEntry, me: &AgentPolicy, pool: &[PresetDefinition]) -> Result<Vec<CompiledAgent>> {
    let size = entry.fixture.size;
    let mine = me.compile(size);
    match entry.fixture.pairing {
        None => Ok(vec![mine; size]),
        Some(p) => {
            let def = pool
                .get(p)
                .ok_or_else(|| HanabiError::InvalidInput(format!("pairing {p} is not in the pool")))?;
            let partner = AgentPolicy::Preset(def.clone()).compile(size);
            Ok((0..size)
                .map(|s| {
                    if s == entry.fixture.seat {
                        mine.clone()
                    } else {
                        partner.clone()
                    }
                })
                .collect())
        }
    }
}

/// Re-plays one score-log entry of a run directory.
pub fn replay_entry(dir: &Path, entry: &ScoreLogEntry) -> Result<GameState> {
    let cfg = config::parse(&read_file(&dir.join("config.toml"))?)?;
    let population = load_population(dir, entry.generation, cfg.edition)?;
    let chrom = population
        .get(entry.individual)
        .ok_or_else(|| HanabiError::InvalidInput(format!("no individual {}", entry.individual)))?;
    let pool = cfg.eval_config(0, 1).pool;
    let seats = seats_for(entry, &AgentPolicy::RuleSequence(chrom.clone()), &pool)?;
    let refs: Vec<&CompiledAgent> = seats.iter().collect();
    run_match(&refs, entry.fixture.seed)
}

/// Chromosomes read from a directory, and the files that failed.
pub type ChromosomeDir = (Vec<(PathBuf, Chromosome)>, Vec<HanabiError>);

/// Chromosome files directly inside `dir`, sorted by name. Unreadable files
/// are returned as errors alongside the good ones.
pub fn load_chromosome_dir(dir: &Path) -> Result<ChromosomeDir> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| HanabiError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "toml")
                && p.file_name()
                    .is_some_and(|n| n != "config.toml" && n != "manifest.toml")
        })
        .collect();
    paths.sort();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for path in paths {
        match AgentPolicy::load(&path) {
            Ok(AgentPolicy::RuleSequence(c)) => good.push((path, c)),
            Ok(_) => bad.push(HanabiError::InvalidInput(format!(
                "{}: not a chromosome",
                path.display()
            ))),
            Err(e) => bad.push(HanabiError::InvalidInput(format!("{}: {e}", path.display()))),
        }
    }
    Ok((good, bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::EvalMode;

    fn tiny(mode: EvalMode) -> EvolveConfig {
        EvolveConfig {
            p: 4,
            e: 1,
            t: 2,
            g: 2,
            n: 1,
            sizes: vec![2, 3],
            mode,
            seed: 5,
            top_k: 2,
            big_n: 1,
            ..EvolveConfig::default()
        }
    }

    #[test]
    fn artifacts_written_and_replayable() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = tiny(EvalMode::Mixed);
        let run = run_evolve(&cfg, tmp.path(), true, |_| {}).unwrap();
        for f in [
            "config.toml",
            "fitness_curve.csv",
            "scores.csv",
            "top_k.csv",
            "best/gen_0001.toml",
            "top/rank_01.toml",
        ] {
            assert!(tmp.path().join(f).exists(), "{f}");
        }
        let pop = load_population(tmp.path(), 1, cfg.edition).unwrap();
        assert_eq!(pop, run.outcome.history[1].population);
        let log = read_file(&tmp.path().join("scores.csv")).unwrap();
        assert_eq!(log.lines().count(), 1 + 2 * 4 * 2 * 7);
        for line in log.lines().skip(1).step_by(13) {
            let entry: ScoreLogEntry = line.parse().unwrap();
            assert_eq!(replay_entry(tmp.path(), &entry).unwrap().score(), entry.score);
        }
        let (chroms, errors) = load_chromosome_dir(&tmp.path().join("top")).unwrap();
        assert_eq!(chroms.len(), 2);
        assert!(errors.is_empty());
    }

    #[test]
    fn manifest_round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        let m = RunManifest::new("evolve", vec!["--seed".into(), "3".into()], None, u64::MAX, tmp.path());
        m.write(tmp.path()).unwrap();
        assert_eq!(RunManifest::read(&tmp.path().join("manifest.toml")).unwrap(), m);
    }
}
