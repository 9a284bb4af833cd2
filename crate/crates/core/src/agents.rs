//! Rule-sequence agents.
//!
//! An agent walks its ordered rule list and plays the action of the first
//! rule that applies; if none applies it plays a uniformly random legal
//! action. Chromosomes are full permutations of a catalog, presets are short
//! hand-written lists, and a situational agent dispatches on game size.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;

use crate::engine::{Action, GameState};
use crate::error::{HanabiError, Result};
use crate::knowledge::PlayerView;
use crate::rng::GameRng;
use crate::rules::{catalog, Edition, Rule, RuleId};

/// A permutation of every rule id in one catalog edition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    edition: Edition,
    genes: Vec<RuleId>,
}

impl Chromosome {
    pub fn new(edition: Edition, genes: Vec<RuleId>) -> Result<Chromosome> {
        let size = catalog(edition).len();
        if genes.len() != size {
            return Err(HanabiError::InvalidInput(format!(
                "chromosome has {} genes, {edition} catalog has {size} rules",
                genes.len()
            )));
        }
        let mut seen = vec![false; size];
        for id in &genes {
            let idx = id.0 as usize;
            if idx >= size {
                return Err(HanabiError::UnknownRule(id.0));
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(HanabiError::InvalidInput(format!("rule {id} appears twice")));
            }
        }
        Ok(Chromosome { edition, genes })
    }

    pub fn random(edition: Edition, rng: &mut impl Rng) -> Chromosome {
        let mut genes: Vec<RuleId> = catalog(edition).ids().collect();
        genes.shuffle(rng);
        Chromosome { edition, genes }
    }

    /// The catalog in id order.
    pub fn identity(edition: Edition) -> Chromosome {
        Chromosome {
            edition,
            genes: catalog(edition).ids().collect(),
        }
    }

    pub fn edition(&self) -> Edition {
        self.edition
    }

    pub fn genes(&self) -> &[RuleId] {
        &self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn is_valid_permutation(&self) -> bool {
        Chromosome::new(self.edition, self.genes.clone()).is_ok()
    }

    /// Builds a chromosome without validation; for operators that preserve
    /// the permutation property themselves.
    pub(crate) fn from_genes_unchecked(edition: Edition, genes: Vec<RuleId>) -> Chromosome {
        Chromosome { edition, genes }
    }

    pub fn to_file_string(&self) -> String {
        format_agent_file("chromosome", None, self.edition, &self.genes)
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.genes.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", ids.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetName {
    Iggi,
    Internal,
    Outer,
    LegalRandom,
    VanDenBergh,
    Flawed,
    Piers,
}

impl PresetName {
    /// The seven-agent test pool used for mixed evaluation.
    pub const POOL: [PresetName; 7] = [
        PresetName::Iggi,
        PresetName::Internal,
        PresetName::Outer,
        PresetName::LegalRandom,
        PresetName::VanDenBergh,
        PresetName::Flawed,
        PresetName::Piers,
    ];

    /// Pool members that are evaluated as protagonists in validation.
    pub const PROTAGONISTS: [PresetName; 6] = [
        PresetName::Iggi,
        PresetName::Outer,
        PresetName::LegalRandom,
        PresetName::VanDenBergh,
        PresetName::Flawed,
        PresetName::Piers,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Iggi => "IGGI",
            PresetName::Internal => "Internal",
            PresetName::Outer => "Outer",
            PresetName::LegalRandom => "LegalRandom",
            PresetName::VanDenBergh => "VanDenBergh",
            PresetName::Flawed => "Flawed",
            PresetName::Piers => "Piers",
        }
    }

    fn bundled_source(self) -> &'static str {
        match self {
            PresetName::Iggi => include_str!("../presets/iggi.toml"),
            PresetName::Internal => include_str!("../presets/internal.toml"),
            PresetName::Outer => include_str!("../presets/outer.toml"),
            PresetName::LegalRandom => include_str!("../presets/legal_random.toml"),
            PresetName::VanDenBergh => include_str!("../presets/van_den_bergh.toml"),
            PresetName::Flawed => include_str!("../presets/flawed.toml"),
            PresetName::Piers => include_str!("../presets/piers.toml"),
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = HanabiError;

    fn from_str(s: &str) -> Result<Self> {
        PresetName::POOL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| HanabiError::Parse(format!("unknown preset '{s}'")))
    }
}

/// A named, hand-ordered rule list from the baseline pool.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetDefinition {
    pub name: PresetName,
    pub edition: Edition,
    pub rules: Vec<RuleId>,
}

impl PresetDefinition {
    /// The definition shipped with the crate.
    pub fn bundled(name: PresetName) -> PresetDefinition {
        match AgentFile::parse(name.bundled_source()).and_then(|f| f.into_policy()) {
            Ok(AgentPolicy::Preset(def)) => def,
            other => panic!("bundled preset {name} is malformed: {other:?}"),
        }
    }

    pub fn to_file_string(&self) -> String {
        format_agent_file("preset", Some(self.name.as_str()), self.edition, &self.rules)
    }
}

/// The seven-agent pool, with any preset files in `dir` replacing the
/// bundled definition of the same name.
pub fn load_pool(dir: Option<&Path>) -> Result<Vec<PresetDefinition>> {
    let mut pool: Vec<PresetDefinition> = PresetName::POOL.into_iter().map(PresetDefinition::bundled).collect();
    let Some(dir) = dir else {
        return Ok(pool);
    };
    let entries = std::fs::read_dir(dir).map_err(|e| HanabiError::io(dir, e))?;
    let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for path in paths.into_iter().filter(|p| p.extension().is_some_and(|x| x == "toml")) {
        match AgentPolicy::load(&path)? {
            AgentPolicy::Preset(def) => {
                let slot = pool
                    .iter_mut()
                    .find(|p| p.name == def.name)
                    .expect("pool has every name");
                *slot = def;
            }
            _ => {
                return Err(HanabiError::InvalidInput(format!("{}: not a preset", path.display())));
            }
        }
    }
    Ok(pool)
}

/// How a seat chooses its moves.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentPolicy {
    RuleSequence(Chromosome),
    Preset(PresetDefinition),
    Situational {
        two_player: Box<AgentPolicy>,
        three_plus: Box<AgentPolicy>,
    },
}

impl AgentPolicy {
    pub fn preset(name: PresetName) -> AgentPolicy {
        AgentPolicy::Preset(PresetDefinition::bundled(name))
    }

    pub fn situational(two_player: AgentPolicy, three_plus: AgentPolicy) -> AgentPolicy {
        AgentPolicy::Situational {
            two_player: Box::new(two_player),
            three_plus: Box::new(three_plus),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AgentPolicy::RuleSequence(_) => "chromosome".to_string(),
            AgentPolicy::Preset(p) => p.name.to_string(),
            AgentPolicy::Situational { .. } => "situational".to_string(),
        }
    }

    /// Resolves the policy to the rule list used in a game of `num_players`.
    pub fn compile(&self, num_players: usize) -> CompiledAgent {
        let (edition, ids) = match self {
            AgentPolicy::RuleSequence(c) => (c.edition, c.genes.as_slice()),
            AgentPolicy::Preset(p) => (p.edition, p.rules.as_slice()),
            AgentPolicy::Situational { two_player, three_plus } => {
                return if num_players == 2 {
                    two_player.compile(num_players)
                } else {
                    three_plus.compile(num_players)
                }
            }
        };
        let cat = catalog(edition);
        CompiledAgent {
            rules: ids
                .iter()
                .map(|&id| cat.get(id).expect("ids validated on construction").rule)
                .collect(),
        }
    }

    pub fn to_file_string(&self) -> String {
        match self {
            AgentPolicy::RuleSequence(c) => c.to_file_string(),
            AgentPolicy::Preset(p) => p.to_file_string(),
            AgentPolicy::Situational { two_player, three_plus } => {
                let section = |title: &str, inner: &AgentPolicy| {
                    let body = inner.to_file_string();
                    format!("[{title}]\n{body}")
                };
                format!(
                    "kind = \"situational\"\n\n{}\n{}",
                    section("two_player", two_player),
                    section("three_plus", three_plus)
                )
            }
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<AgentPolicy> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HanabiError::io(path, e))?;
        AgentFile::parse(&text)?.into_policy()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_file_string()).map_err(|e| HanabiError::io(path, e))
    }
}

/// A policy resolved to concrete rules for one game size.
#[derive(Debug, Clone)]
pub struct CompiledAgent {
    rules: Vec<Rule>,
}

impl CompiledAgent {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// First applicable rule's action, or a random legal action when no rule applies.
    pub fn act(&self, state: &GameState, player: usize, rng: &mut GameRng) -> Action {
        let view = PlayerView::new(state, player);
        self.act_in_view(&view, rng)
    }

    pub fn act_in_view(&self, view: &PlayerView<'_>, rng: &mut GameRng) -> Action {
        for rule in &self.rules {
            if let Some(action) = rule.apply(view, rng) {
                return action;
            }
        }
        *view
            .legal_actions()
            .choose(rng)
            .expect("a non-terminal state always has a legal action")
    }

    /// Index of the rule that fires, if any.
    pub fn firing_rule(&self, view: &PlayerView<'_>, rng: &mut GameRng) -> Option<usize> {
        self.rules.iter().position(|r| r.apply(view, rng).is_some())
    }
}

pub fn act(policy: &AgentPolicy, state: &GameState, player: usize, rng: &mut GameRng) -> Action {
    policy.compile(state.num_players()).act(state, player, rng)
}

/// Same as [`act`]; kept separate to mirror the two-policy entry point.
pub fn situational_act(
    two_player: &AgentPolicy,
    three_plus: &AgentPolicy,
    state: &GameState,
    player: usize,
    rng: &mut GameRng,
) -> Action {
    if state.num_players() == 2 {
        act(two_player, state, player, rng)
    } else {
        act(three_plus, state, player, rng)
    }
}

fn format_agent_file(kind: &str, name: Option<&str>, edition: Edition, ids: &[RuleId]) -> String {
    let cat = catalog(edition);
    let mut out = format!("kind = \"{kind}\"\n");
    if let Some(name) = name {
        out.push_str(&format!("name = \"{name}\"\n"));
    }
    out.push_str(&format!("edition = \"{edition}\"\nrules = [\n"));
    for id in ids {
        let name = cat.get(*id).map(|s| s.rule.name()).unwrap_or_else(|_| "?".into());
        out.push_str(&format!("  {id:>3}, # {name}\n"));
    }
    out.push_str("]\n");
    out
}

/// On-disk agent description (TOML).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentFile {
    kind: String,
    name: Option<String>,
    edition: Option<String>,
    rules: Option<Vec<u16>>,
    two_player: Option<Box<AgentFile>>,
    three_plus: Option<Box<AgentFile>>,
}

impl AgentFile {
    fn parse(text: &str) -> Result<AgentFile> {
        toml::from_str(text).map_err(|e| HanabiError::Parse(e.to_string()))
    }

    fn edition(&self) -> Result<Edition> {
        self.edition
            .as_deref()
            .ok_or_else(|| HanabiError::config("edition", "missing"))?
            .parse()
            .map_err(|e: HanabiError| HanabiError::config("edition", e.to_string()))
    }

    fn rule_ids(&self, edition: Edition) -> Result<Vec<RuleId>> {
        let ids: Vec<RuleId> = self
            .rules
            .as_ref()
            .ok_or_else(|| HanabiError::config("rules", "missing"))?
            .iter()
            .map(|&i| RuleId(i))
            .collect();
        let cat = catalog(edition);
        for &id in &ids {
            cat.get(id)?;
        }
        Ok(ids)
    }

    fn into_policy(self) -> Result<AgentPolicy> {
        match self.kind.as_str() {
            "chromosome" => {
                let edition = self.edition()?;
                Ok(AgentPolicy::RuleSequence(Chromosome::new(
                    edition,
                    self.rule_ids(edition)?,
                )?))
            }
            "preset" => {
                let name: PresetName = self
                    .name
                    .as_deref()
                    .ok_or_else(|| HanabiError::config("name", "missing"))?
                    .parse()?;
                if self.rules.is_none() {
                    return Ok(AgentPolicy::preset(name));
                }
                let edition = self.edition()?;
                let rules = self.rule_ids(edition)?;
                let mut sorted = rules.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != rules.len() {
                    return Err(HanabiError::config("rules", "duplicate rule id"));
                }
                Ok(AgentPolicy::Preset(PresetDefinition { name, edition, rules }))
            }
            "situational" => {
                let two = self
                    .two_player
                    .ok_or_else(|| HanabiError::config("two_player", "missing"))?;
                let three = self
                    .three_plus
                    .ok_or_else(|| HanabiError::config("three_plus", "missing"))?;
                Ok(AgentPolicy::situational(two.into_policy()?, three.into_policy()?))
            }
            other => Err(HanabiError::config("kind", format!("unknown agent kind '{other}'"))),
        }
    }
}

pub fn parse_agent(text: &str) -> Result<AgentPolicy> {
    AgentFile::parse(text)?.into_policy()
}
