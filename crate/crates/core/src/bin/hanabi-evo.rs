use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hanabi_evo::agents::{load_pool, AgentPolicy, PresetName};
use hanabi_evo::analysis::{composition_report, curve_csv, parse_curve_csv, COMPOSITION_CSV_HEADER};
use hanabi_evo::config;
use hanabi_evo::eval::{evaluate, with_workers, EvalConfig, EvalMode, ScoreLogEntry, ALL_SIZES};
use hanabi_evo::evolve::EvolveConfig;
use hanabi_evo::rules::{catalog, Edition};
use hanabi_evo::runs::{self, read_file, write_file, RunManifest};
use hanabi_evo::{HanabiError, Result};

#[derive(Parser)]
#[command(name = "hanabi-evo", version, about = "Evolve and evaluate rule-based Hanabi agents")]
struct Cli {
    /// Evaluation threads (0 = one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct EvalOverrides {
    /// Games per size and pairing.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated game sizes, e.g. 2,3,4,5.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    mode: Option<EvalMode>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the genetic algorithm and write a run directory.
    Evolve {
        /// Config file, or the name of a bundled profile (desk, mirror-new, mixed-old, mixed-new, two-player, three-plus).
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        edition: Option<Edition>,
        /// Generations.
        #[arg(long = "G")]
        generations: Option<usize>,
        /// Write every game to scores.csv.
        #[arg(long)]
        score_log: bool,
        #[command(flatten)]
        eval: EvalOverrides,
    },
    /// Score the baseline agents against the full pool.
    Validate {
        /// Directory of preset files replacing bundled pool members.
        #[arg(long)]
        pool: Option<PathBuf>,
        #[command(flatten)]
        eval: EvalOverrides,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an agent file (or a preset name).
    Evaluate {
        agent: String,
        #[command(flatten)]
        eval: EvalOverrides,
    },
    /// Composition report for a directory of chromosome files.
    Analyze {
        dir: PathBuf,
        /// Write composition.csv (and fitness_curve.csv when found) here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        label: Option<String>,
    },
    /// Print the event history of one game from a run's score log.
    Replay {
        run: PathBuf,
        /// 1-based line number in scores.csv, header excluded.
        #[arg(long)]
        entry: usize,
    },
    /// Re-run the command recorded in a manifest.
    Rerun {
        manifest: PathBuf,
        /// Write to this directory instead of the recorded one.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the rule catalog.
    Catalog {
        #[arg(long, default_value = "new")]
        edition: Edition,
    },
    /// Build a situational agent from a two-player and a three-plus agent.
    Combine {
        #[arg(long)]
        two: PathBuf,
        #[arg(long)]
        three_plus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn eval_config(o: &EvalOverrides, default_mode: EvalMode, default_n: usize) -> EvalConfig {
    EvalConfig::with_mode(
        o.mode.unwrap_or(default_mode),
        o.sizes.as_deref().unwrap_or(&ALL_SIZES),
        o.n.unwrap_or(default_n),
        o.seed.unwrap_or(0),
    )
}

fn load_agent(spec: &str) -> Result<AgentPolicy> {
    if !Path::new(spec).exists() {
        if let Ok(name) = spec.parse::<PresetName>() {
            return Ok(AgentPolicy::preset(name));
        }
    }
    AgentPolicy::load(spec)
}

fn cmd_evolve(
    config_src: &str,
    out: &Path,
    edition: Option<Edition>,
    generations: Option<usize>,
    score_log: bool,
    o: &EvalOverrides,
    args: Vec<String>,
) -> Result<()> {
    let mut cfg: EvolveConfig = config::load(config_src)?;
    if let Some(e) = edition {
        cfg.edition = e;
        cfg.s = None;
    }
    if let Some(g) = generations {
        cfg.g = g;
    }
    if let Some(n) = o.n {
        cfg.n = n;
    }
    if let Some(s) = &o.sizes {
        cfg.sizes = s.clone();
    }
    if let Some(m) = o.mode {
        cfg.mode = m;
    }
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    let mut manifest = RunManifest::new("evolve", args, Some(config_src.to_string()), cfg.seed, out);
    std::fs::create_dir_all(out).map_err(|e| HanabiError::io(out, e))?;
    manifest.write(out)?;
    let run = runs::run_evolve(&cfg, out, score_log, |r| {
        eprintln!(
            "gen {:>4}  best {:6.2}  mean {:6.2}",
            r.generation, r.best_fitness, r.mean_fitness
        );
    })?;
    println!("rank  recorded  re-evaluated");
    for (i, r) in run.top.iter().enumerate() {
        println!("{:>4}  {:8.2}  {}", i + 1, r.recorded_fitness, r.report);
    }
    manifest.finished_unix = runs::unix_now();
    manifest.write(out)
}

fn cmd_validate(pool: Option<&Path>, o: &EvalOverrides, out: Option<&Path>) -> Result<()> {
    let mut cfg = eval_config(o, EvalMode::Mixed, 400);
    cfg.pool = load_pool(pool)?;
    let mut table = String::from("agent,mean,sem,games\n");
    println!("{:<12} {:>6} {:>7} {:>7}", "agent", "mean", "sem", "games");
    for name in PresetName::PROTAGONISTS {
        let def = cfg.pool.iter().find(|p| p.name == name).expect("pool has every name");
        let report = evaluate(&AgentPolicy::Preset(def.clone()), &cfg)?;
        println!(
            "{:<12} {:>6.2} {:>7.3} {:>7}",
            name, report.mean, report.sem, report.games
        );
        table.push_str(&format!("{name},{},{},{}\n", report.mean, report.sem, report.games));
    }
    if let Some(out) = out {
        write_file(out, &table)?;
    }
    Ok(())
}

fn cmd_evaluate(agent: &str, o: &EvalOverrides) -> Result<()> {
    let policy = load_agent(agent)?;
    let cfg = eval_config(o, EvalMode::Mirror, 20);
    let report = evaluate(&policy, &cfg)?;
    for (s, m) in &report.per_size {
        println!("{s} players: {m:.2}");
    }
    println!(
        "mean: {:.2}  sem: {:.3}  games: {}",
        report.mean, report.sem, report.games
    );
    Ok(())
}

fn cmd_analyze(dir: &Path, out: Option<&Path>, label: Option<&str>) -> Result<()> {
    let (chroms, errors) = runs::load_chromosome_dir(dir)?;
    for e in &errors {
        eprintln!("skipped: {e}");
    }
    let set: Vec<_> = chroms.into_iter().map(|(_, c)| c).collect();
    if set.is_empty() {
        return Err(HanabiError::InvalidInput(format!(
            "no chromosome files in {}",
            dir.display()
        )));
    }
    let label = label.map(str::to_string).unwrap_or_else(|| dir.display().to_string());
    let report = composition_report(&set)?;
    print!("{}", report.table(&label));

    // a run directory or its top/ subdirectory
    let curve_path = [dir.join("fitness_curve.csv"), dir.join("../fitness_curve.csv")]
        .into_iter()
        .find(|p| p.exists());
    let curve = match &curve_path {
        Some(p) => Some(parse_curve_csv(&read_file(p)?)?),
        None => None,
    };
    if let Some(curve) = &curve {
        if let (Some(first), Some(last)) = (curve.first(), curve.last()) {
            println!(
                "fitness curve: {} generations, best {:.2} -> {:.2}",
                curve.len(),
                first.best,
                last.best
            );
        }
    }
    if let Some(out) = out {
        std::fs::create_dir_all(out).map_err(|e| HanabiError::io(out, e))?;
        write_file(
            &out.join("composition.csv"),
            &format!("{COMPOSITION_CSV_HEADER}\n{}\n", report.csv_row(&label)),
        )?;
        if let Some(curve) = &curve {
            write_file(&out.join("fitness_curve.csv"), &curve_csv(curve))?;
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(HanabiError::InvalidInput(format!(
            "{} file(s) could not be read",
            errors.len()
        )))
    }
}

fn cmd_replay(run: &Path, entry: usize) -> Result<()> {
    let log = read_file(&run.join("scores.csv"))?;
    let line = log
        .lines()
        .nth(entry)
        .filter(|_| entry > 0)
        .ok_or_else(|| HanabiError::InvalidInput(format!("scores.csv has no entry {entry}")))?;
    let parsed: ScoreLogEntry = line.parse()?;
    let state = runs::replay_entry(run, &parsed)?;
    print!("{}", state.export_history());
    if state.score() != parsed.score {
        return Err(HanabiError::InvalidInput(format!(
            "replayed score {} differs from logged score {}",
            state.score(),
            parsed.score
        )));
    }
    Ok(())
}

fn cmd_combine(two: &Path, three: &Path, out: &Path) -> Result<()> {
    let policy = AgentPolicy::situational(AgentPolicy::load(two)?, AgentPolicy::load(three)?);
    policy.save(out)
}

fn run(cli: Cli, args: Vec<String>) -> Result<()> {
    let workers = cli.workers;
    with_workers(workers, move || match cli.command {
        Command::Evolve {
            config,
            out,
            edition,
            generations,
            score_log,
            eval,
        } => cmd_evolve(&config, &out, edition, generations, score_log, &eval, args),
        Command::Validate { pool, eval, out } => cmd_validate(pool.as_deref(), &eval, out.as_deref()),
        Command::Evaluate { agent, eval } => cmd_evaluate(&agent, &eval),
        Command::Analyze { dir, out, label } => cmd_analyze(&dir, out.as_deref(), label.as_deref()),
        Command::Replay { run, entry } => cmd_replay(&run, entry),
        Command::Rerun { manifest, out } => {
            let m = RunManifest::read(&manifest)?;
            let mut argv = vec!["hanabi-evo".to_string()];
            let mut recorded = m.args.clone();
            if let Some(out) = out {
                if let Some(i) = recorded.iter().position(|a| a == "--out") {
                    recorded[i + 1] = out.display().to_string();
                }
            }
            argv.extend(recorded.iter().cloned());
            let cli = Cli::try_parse_from(&argv).map_err(|e| HanabiError::Parse(e.to_string()))?;
            if matches!(cli.command, Command::Rerun { .. }) {
                return Err(HanabiError::InvalidInput("a manifest cannot record a rerun".into()));
            }
            run(cli, recorded)
        }
        Command::Catalog { edition } => {
            print!("{}", catalog(edition).listing());
            Ok(())
        }
        Command::Combine { two, three_plus, out } => cmd_combine(&two, &three_plus, &out),
    })?
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
