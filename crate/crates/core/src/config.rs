//! Run configuration files.
//!
//! ```toml
//! [evolve]
//! p = 200      # population
//! m = 0.1      # swap-mutation probability
//! c = 0.9      # crossover probability
//! e = 20       # elites
//! t = 5        # tournament size
//! G = 500      # generations
//! n = 20       # games per size and pairing
//! edition = "new"
//! seed = 1
//!
//! [eval]
//! mode = "mirror"
//! sizes = [2, 3, 4, 5]
//!
//! [reevaluate]
//! k = 10
//! n = 2000
//! ```
//!
//! Every key is optional; missing keys take the defaults above. `s` may be
//! given and must then equal the catalog size.

use std::path::Path;

use toml::{Table, Value};

use crate::error::{HanabiError, Result};
use crate::evolve::EvolveConfig;

/// Configurations shipped with the crate, by name.
pub const PROFILES: [(&str, &str); 6] = [
    ("desk", include_str!("../configs/desk.toml")),
    ("mirror-new", include_str!("../configs/mirror-new.toml")),
    ("mixed-old", include_str!("../configs/mixed-old.toml")),
    ("mixed-new", include_str!("../configs/mixed-new.toml")),
    ("two-player", include_str!("../configs/two-player.toml")),
    ("three-plus", include_str!("../configs/three-plus.toml")),
];

pub fn profile(name: &str) -> Option<&'static str> {
    PROFILES.iter().find(|(n, _)| *n == name).map(|&(_, text)| text)
}

/// Reads a config from a file path, or a bundled profile when `source`
/// names one and no such file exists.
pub fn load(source: &str) -> Result<EvolveConfig> {
    let path = Path::new(source);
    if !path.exists() {
        if let Some(text) = profile(source) {
            return parse(text);
        }
    }
    let text = std::fs::read_to_string(path).map_err(|e| HanabiError::io(path, e))?;
    parse(&text)
}

fn section<'a>(root: &'a Table, name: &str) -> Result<Option<&'a Table>> {
    match root.get(name) {
        None => Ok(None),
        Some(Value::Table(t)) => Ok(Some(t)),
        Some(_) => Err(HanabiError::config(name, "expected a section")),
    }
}

fn check_keys(table: &Table, section: &str, allowed: &[&str]) -> Result<()> {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(HanabiError::config(format!("{section}.{key}"), "unknown key"));
        }
    }
    Ok(())
}

fn get_usize(t: &Table, section: &str, key: &str) -> Result<Option<usize>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
        Some(v) => Err(HanabiError::config(
            format!("{section}.{key}"),
            format!("expected a non-negative integer, found {v}"),
        )),
    }
}

fn get_f64(t: &Table, section: &str, key: &str) -> Result<Option<f64>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Float(f)) => Ok(Some(*f)),
        Some(Value::Integer(i)) => Ok(Some(*i as f64)),
        Some(v) => Err(HanabiError::config(
            format!("{section}.{key}"),
            format!("expected a number, found {v}"),
        )),
    }
}

fn get_str<'a>(t: &'a Table, section: &str, key: &str) -> Result<Option<&'a str>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(v) => Err(HanabiError::config(
            format!("{section}.{key}"),
            format!("expected a string, found {v}"),
        )),
    }
}

/// Prefixes the key of a validation error with its section.
fn in_section(section: &str, e: HanabiError) -> HanabiError {
    match e {
        HanabiError::Config { key, message } => HanabiError::config(format!("{section}.{key}"), message),
        other => other,
    }
}

pub fn parse(text: &str) -> Result<EvolveConfig> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| HanabiError::Parse(e.to_string()))?;
    check_keys(&root, "", &["evolve", "eval", "reevaluate"]).map_err(|e| match e {
        HanabiError::Config { key, message } => HanabiError::config(key.trim_start_matches('.').to_string(), message),
        other => other,
    })?;
    let mut cfg = EvolveConfig::default();
    let empty = Table::new();

    let ev = section(&root, "evolve")?.unwrap_or(&empty);
    check_keys(
        ev,
        "evolve",
        &["p", "s", "m", "c", "e", "t", "G", "n", "edition", "seed"],
    )?;
    if let Some(v) = get_usize(ev, "evolve", "p")? {
        cfg.p = v;
    }
    cfg.s = get_usize(ev, "evolve", "s")?;
    if let Some(v) = get_f64(ev, "evolve", "m")? {
        cfg.m = v;
    }
    if let Some(v) = get_f64(ev, "evolve", "c")? {
        cfg.c = v;
    }
    if let Some(v) = get_usize(ev, "evolve", "e")? {
        cfg.e = v;
    }
    if let Some(v) = get_usize(ev, "evolve", "t")? {
        cfg.t = v;
    }
    if let Some(v) = get_usize(ev, "evolve", "G")? {
        cfg.g = v;
    }
    if let Some(v) = get_usize(ev, "evolve", "n")? {
        cfg.n = v;
    }
    if let Some(v) = get_str(ev, "evolve", "edition")? {
        cfg.edition = v
            .parse()
            .map_err(|e: HanabiError| HanabiError::config("evolve.edition", e.to_string()))?;
    }
    // seeds above i64::MAX do not fit a TOML integer and are written as strings
    match ev.get("seed") {
        None => {}
        Some(Value::Integer(i)) if *i >= 0 => cfg.seed = *i as u64,
        Some(Value::String(s)) if s.parse::<u64>().is_ok() => cfg.seed = s.parse().expect("checked"),
        Some(v) => return Err(HanabiError::config("evolve.seed", format!("expected a u64, found {v}"))),
    }

    let eval = section(&root, "eval")?.unwrap_or(&empty);
    check_keys(eval, "eval", &["mode", "sizes"])?;
    if let Some(v) = get_str(eval, "eval", "mode")? {
        cfg.mode = v
            .parse()
            .map_err(|e: HanabiError| HanabiError::config("eval.mode", e.to_string()))?;
    }
    if let Some(v) = eval.get("sizes") {
        let bad = || HanabiError::config("eval.sizes", "expected a list of integers in 2..=5");
        let list = v.as_array().ok_or_else(bad)?;
        cfg.sizes = list
            .iter()
            .map(|x| x.as_integer().filter(|i| *i >= 0).map(|i| i as usize).ok_or_else(bad))
            .collect::<Result<_>>()?;
    }

    let re = section(&root, "reevaluate")?.unwrap_or(&empty);
    check_keys(re, "reevaluate", &["k", "n"])?;
    if let Some(v) = get_usize(re, "reevaluate", "k")? {
        cfg.top_k = v;
    }
    if let Some(v) = get_usize(re, "reevaluate", "n")? {
        cfg.big_n = v;
    }

    cfg.validate().map_err(|e| match e {
        HanabiError::Config { key, message } => {
            let section = match key.as_str() {
                "sizes" | "mode" | "pool" => "eval",
                "top_k" => return HanabiError::config("reevaluate.k", message),
                "big_n" => return HanabiError::config("reevaluate.n", message),
                _ => "evolve",
            };
            in_section(section, HanabiError::Config { key, message })
        }
        other => other,
    })?;
    Ok(cfg)
}

/// Serialises a config in the format [`parse`] reads.
pub fn to_toml(cfg: &EvolveConfig) -> String {
    let sizes: Vec<String> = cfg.sizes.iter().map(|s| s.to_string()).collect();
    let mut out = format!("[evolve]\np = {}\n", cfg.p);
    if let Some(s) = cfg.s {
        out.push_str(&format!("s = {s}\n"));
    }
    out.push_str(&format!(
        "m = {:?}\nc = {:?}\ne = {}\nt = {}\nG = {}\nn = {}\nedition = \"{}\"\nseed = {}\n\n[eval]\nmode = \"{}\"\nsizes = [{}]\n\n[reevaluate]\nk = {}\nn = {}\n",
        cfg.m,
        cfg.c,
        cfg.e,
        cfg.t,
        cfg.g,
        cfg.n,
        cfg.edition,
        if cfg.seed > i64::MAX as u64 { format!("\"{}\"", cfg.seed) } else { cfg.seed.to_string() },
        cfg.mode,
        sizes.join(", "),
        cfg.top_k,
        cfg.big_n
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::EvalMode;
    use crate::rules::Edition;

    fn key_of(text: &str) -> String {
        match parse(text) {
            Err(HanabiError::Config { key, .. }) => key,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse("").unwrap(), EvolveConfig::default());
    }

    #[test]
    fn bundled_profiles_parse() {
        for (name, text) in PROFILES {
            parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        let desk = parse(profile("desk").unwrap()).unwrap();
        assert_eq!((desk.p, desk.g, desk.n), (30, 30, 10));
        assert_eq!(desk.edition, Edition::New);
        assert_eq!(desk.mode, EvalMode::Mirror);
        let mixed = parse(profile("mixed-old").unwrap()).unwrap();
        assert_eq!((mixed.edition, mixed.mode), (Edition::Old, EvalMode::Mixed));
    }

    #[test]
    fn diagnostics_name_the_key() {
        assert_eq!(key_of("[evolve]\ne = 500\n"), "evolve.e");
        assert_eq!(key_of("[evolve]\np = \"x\"\n"), "evolve.p");
        assert_eq!(key_of("[evolve]\nbogus = 1\n"), "evolve.bogus");
        assert_eq!(key_of("[eval]\nsizes = [2, 7]\n"), "eval.sizes");
        assert_eq!(key_of("[eval]\nmode = \"solo\"\n"), "eval.mode");
        assert_eq!(key_of("[evolve]\nedition = \"x\"\n"), "evolve.edition");
        assert_eq!(key_of("[evolve]\ns = 50\n"), "evolve.s");
        assert_eq!(key_of("[reevaluate]\nk = 0\n"), "reevaluate.k");
        assert_eq!(key_of("[extra]\n"), "extra");
    }

    #[test]
    fn round_trip() {
        let cfg = EvolveConfig {
            p: 40,
            s: Some(48),
            m: 0.25,
            edition: Edition::Old,
            mode: EvalMode::Mixed,
            sizes: vec![3, 5],
            seed: u64::MAX - 3,
            ..EvolveConfig::default()
        };
        assert_eq!(parse(&to_toml(&cfg)).unwrap(), cfg);
    }
}
