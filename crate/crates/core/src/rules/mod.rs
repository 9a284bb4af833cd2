//! The rule catalog.
//!
//! A rule looks at the game through a [`PlayerView`] and either proposes a
//! legal action or declines. Rules are grouped as play, tell and discard
//! heuristics, finesse-style conventions, and the intent-aware rules
//! (`PlayJustHinted`, `TellUnambiguous1/2`) that only exist in the new edition.

mod convention;
mod discard;
mod intent;
mod play;
mod tell;

use std::fmt;
use std::sync::OnceLock;

use crate::engine::Action;
use crate::error::{HanabiError, Result};
use crate::knowledge::PlayerView;
use crate::rng::GameRng;

pub use intent::{tell_unambiguous_1, tell_unambiguous_2, tell_unambiguous_2_scores, HintScore};

/// Extra condition on which hinted cards `PlayJustHinted` may play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HintRestriction {
    /// Only cards pointed at by a hint that touched no other card.
    Standalone,
    /// Only the most recently drawn card.
    Newest,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JustHintedParams {
    pub min_prob: f64,
    pub min_lives: u8,
    pub restriction: Option<HintRestriction>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    PlayIfCertain,
    PlaySafeCard,
    PlayProbablySafeCard(f64),
    /// Requires more than one life left.
    IfLivesPlayProbablySafeCard(f64),
    /// Requires an empty deck and more than one life left.
    IfHailMaryPlayProbablySafeCard(f64),
    CompleteTellUsefulCard,
    TellAboutOnes,
    TellAnyoneAboutUsefulCard,
    TellAnyoneAboutOldestUsefulCard,
    TellPlayableCard,
    TellPlayableCardOuter,
    TellAnyoneAboutUselessCard,
    TellDispensable,
    TellFives,
    TellMostInformation,
    TellRandomly,
    TellUnknown,
    DiscardUseless,
    DiscardSafe,
    OsawaDiscard,
    DiscardIfCertain,
    DiscardHighest,
    DiscardOldestFirst,
    DiscardOldestNoInfoFirst,
    DiscardUnidentifiedCard,
    DiscardLeastLikelyToBeNecessary,
    DiscardProbablyUselessCard(f64),
    PlayFinesse,
    PlayFinesseTold,
    TellFinesse,
    PlayUniquePossibleCard,
    TellIllinformed,
    TryToUnblock,
    LegalRandom,
    PlayJustHinted(JustHintedParams),
    TellUnambiguous1,
    TellUnambiguous2 {
        w1: f64,
        w2: f64,
    },
}

impl Rule {
    /// Proposes an action for the viewing player, or `None` if the rule does not apply.
    pub fn apply(&self, view: &PlayerView<'_>, rng: &mut GameRng) -> Option<Action> {
        use Rule::*;
        match *self {
            PlayIfCertain => play::play_if_certain(view),
            PlaySafeCard => play::play_safe_card(view),
            PlayProbablySafeCard(p) => play::play_probably_safe(view, p),
            IfLivesPlayProbablySafeCard(p) => (view.lives() > 1).then(|| play::play_probably_safe(view, p)).flatten(),
            IfHailMaryPlayProbablySafeCard(p) => (view.lives() > 1 && view.deck_len() == 0)
                .then(|| play::play_probably_safe(view, p))
                .flatten(),
            CompleteTellUsefulCard => tell::complete_tell_useful(view),
            TellAboutOnes => tell::tell_about_value(view, 1),
            TellFives => tell::tell_about_value(view, 5),
            TellAnyoneAboutUsefulCard | TellPlayableCardOuter => tell::tell_anyone_about_useful(view),
            TellAnyoneAboutOldestUsefulCard => tell::tell_oldest_useful(view),
            TellPlayableCard => tell::tell_playable_card(view, rng),
            TellAnyoneAboutUselessCard | TellDispensable => tell::tell_about_useless(view),
            TellMostInformation => tell::tell_most_information(view),
            TellRandomly => tell::tell_randomly(view, rng),
            TellUnknown => tell::tell_unknown(view),
            DiscardUseless => discard::discard_dead(view),
            DiscardSafe => discard::discard_played(view),
            OsawaDiscard => discard::osawa_discard(view),
            DiscardIfCertain => discard::discard_if_certain(view),
            DiscardHighest => discard::discard_highest(view),
            DiscardOldestFirst => discard::discard_oldest(view),
            DiscardOldestNoInfoFirst => discard::discard_oldest_no_info(view),
            DiscardUnidentifiedCard => discard::discard_unidentified(view),
            DiscardLeastLikelyToBeNecessary => discard::discard_least_necessary(view),
            DiscardProbablyUselessCard(p) => discard::discard_probably_useless(view, p),
            PlayFinesse => convention::play_finesse(view),
            PlayFinesseTold => convention::play_finesse_told(view),
            TellFinesse => convention::tell_finesse(view),
            PlayUniquePossibleCard => convention::play_unique_possible(view),
            TellIllinformed => convention::tell_illinformed(view),
            TryToUnblock => convention::try_to_unblock(view),
            LegalRandom => legal_random(view, rng),
            PlayJustHinted(params) => intent::play_just_hinted(params, view),
            TellUnambiguous1 => intent::tell_unambiguous_1(view),
            TellUnambiguous2 { w1, w2 } => intent::tell_unambiguous_2(view, w1, w2),
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

fn legal_random(view: &PlayerView<'_>, rng: &mut GameRng) -> Option<Action> {
    use rand::seq::SliceRandom;
    view.legal_actions().choose(rng).copied()
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Rule::*;
        match self {
            PlayProbablySafeCard(p) => write!(f, "PlayProbablySafeCard({p})"),
            IfLivesPlayProbablySafeCard(p) => write!(f, "IfLives>1PlayProbablySafeCard({p})"),
            IfHailMaryPlayProbablySafeCard(p) => write!(f, "IfHailMaryPlayProbablySafeCard({p})"),
            DiscardProbablyUselessCard(p) => write!(f, "DiscardProbablyUselessCard({p})"),
            PlayJustHinted(JustHintedParams {
                min_prob,
                min_lives,
                restriction,
            }) => {
                write!(f, "PlayJustHinted(p={min_prob},n={min_lives}")?;
                match restriction {
                    Some(HintRestriction::Standalone) => write!(f, ",standalone)"),
                    Some(HintRestriction::Newest) => write!(f, ",newest)"),
                    None => write!(f, ")"),
                }
            }
            TellUnambiguous2 { w1, w2 } => write!(f, "TellUnambiguous2(w1={w1},w2={w2})"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Stable catalog identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(pub u16);

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleSpec {
    pub id: RuleId,
    pub rule: Rule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edition {
    /// Framework-native rules plus the conditional wrappers.
    Old,
    /// Old rules plus `PlayJustHinted` variants and `TellUnambiguous1/2`.
    New,
}

impl fmt::Display for Edition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Edition::Old => "old",
            Edition::New => "new",
        })
    }
}

impl std::str::FromStr for Edition {
    type Err = HanabiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "old" => Ok(Edition::Old),
            "new" => Ok(Edition::New),
            other => Err(HanabiError::Parse(format!("unknown edition '{other}'"))),
        }
    }
}

/// Probability grid for the plain probably-safe play rule.
pub const PLAY_PROBABLY_SAFE_GRID: [f64; 6] = [0.0, 0.2, 0.25, 0.4, 0.6, 0.8];
/// Grid for the lives-guarded play rule, the probably-useless discard and
/// `PlayJustHinted`.
pub const COMMON_GRID: [f64; 5] = [0.0, 0.2, 0.4, 0.6, 0.8];
pub const HAIL_MARY_GRID: [f64; 2] = [0.0, 0.1];
/// Default `TellUnambiguous2` weights.
pub const DEFAULT_UNAMBIGUOUS_WEIGHTS: (f64, f64) = (1.0, 1.0);

#[derive(Debug, Clone)]
pub struct Catalog {
    edition: Edition,
    rules: Vec<RuleSpec>,
}

fn old_rules() -> Vec<Rule> {
    use Rule::*;
    let mut rules = vec![PlayIfCertain, PlaySafeCard];
    rules.extend(PLAY_PROBABLY_SAFE_GRID.map(PlayProbablySafeCard));
    rules.extend(COMMON_GRID.map(IfLivesPlayProbablySafeCard));
    rules.extend(HAIL_MARY_GRID.map(IfHailMaryPlayProbablySafeCard));
    rules.extend([
        CompleteTellUsefulCard,
        TellAboutOnes,
        TellAnyoneAboutUsefulCard,
        TellAnyoneAboutOldestUsefulCard,
        TellPlayableCard,
        TellPlayableCardOuter,
        TellAnyoneAboutUselessCard,
        TellDispensable,
        TellFives,
        TellMostInformation,
        TellRandomly,
        TellUnknown,
        DiscardUseless,
        DiscardSafe,
        OsawaDiscard,
        DiscardIfCertain,
        DiscardHighest,
        DiscardOldestFirst,
        DiscardOldestNoInfoFirst,
        DiscardUnidentifiedCard,
        DiscardLeastLikelyToBeNecessary,
    ]);
    rules.extend(COMMON_GRID.map(DiscardProbablyUselessCard));
    rules.extend([
        PlayFinesse,
        PlayFinesseTold,
        TellFinesse,
        PlayUniquePossibleCard,
        TellIllinformed,
        TryToUnblock,
        LegalRandom,
    ]);
    rules
}

fn new_rules() -> Vec<Rule> {
    let mut rules = Vec::new();
    for min_prob in COMMON_GRID {
        for min_lives in [0, 1] {
            for restriction in [None, Some(HintRestriction::Standalone)] {
                rules.push(Rule::PlayJustHinted(JustHintedParams {
                    min_prob,
                    min_lives,
                    restriction,
                }));
            }
        }
    }
    let (w1, w2) = DEFAULT_UNAMBIGUOUS_WEIGHTS;
    rules.push(Rule::TellUnambiguous1);
    rules.push(Rule::TellUnambiguous2 { w1, w2 });
    rules
}

impl Catalog {
    fn build(edition: Edition) -> Catalog {
        let mut rules = old_rules();
        if edition == Edition::New {
            rules.extend(new_rules());
        }
        let rules = rules
            .into_iter()
            .enumerate()
            .map(|(i, rule)| RuleSpec {
                id: RuleId(i as u16),
                rule,
            })
            .collect();
        Catalog { edition, rules }
    }

    pub fn edition(&self) -> Edition {
        self.edition
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[RuleSpec] {
        &self.rules
    }

    pub fn get(&self, id: RuleId) -> Result<&RuleSpec> {
        self.rules.get(id.0 as usize).ok_or(HanabiError::UnknownRule(id.0))
    }

    pub fn ids(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.rules.iter().map(|r| r.id)
    }

    pub fn find_by_name(&self, name: &str) -> Option<&RuleSpec> {
        self.rules.iter().find(|r| r.rule.name() == name)
    }

    /// Text listing, one `id<TAB>name` line per rule.
    pub fn listing(&self) -> String {
        let mut out = format!("# rule catalog edition={} size={}\n", self.edition, self.len());
        for spec in &self.rules {
            out.push_str(&format!("{}\t{}\n", spec.id, spec.rule));
        }
        out
    }
}

pub fn catalog(edition: Edition) -> &'static Catalog {
    static OLD: OnceLock<Catalog> = OnceLock::new();
    static NEW: OnceLock<Catalog> = OnceLock::new();
    match edition {
        Edition::Old => OLD.get_or_init(|| Catalog::build(Edition::Old)),
        Edition::New => NEW.get_or_init(|| Catalog::build(Edition::New)),
    }
}

/// Applies one catalog rule for the state's current player.
pub fn apply_rule(rule: &RuleSpec, state: &crate::engine::GameState, rng: &mut GameRng) -> Option<Action> {
    let view = PlayerView::new(state, state.current_player());
    rule.rule.apply(&view, rng)
}

/// Index of the slot maximising `score`, lowest slot on ties.
pub(crate) fn argmax_slot(len: usize, mut score: impl FnMut(usize) -> f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for slot in 0..len {
        let s = score(slot);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((slot, s));
        }
    }
    best
}
