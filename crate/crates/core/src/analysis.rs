//! Chromosome composition reports and fitness curves.

use std::collections::BTreeMap;
use std::fmt;

use crate::agents::Chromosome;
use crate::error::{HanabiError, Result};
use crate::evolve::GenerationRecord;
use crate::rules::{catalog, Edition, Rule, RuleId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Play,
    Tell,
    Discard,
    Other,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Play => "play",
            Category::Tell => "tell",
            Category::Discard => "discard",
            Category::Other => "other",
        })
    }
}

/// Conditional wrappers count as the action they wrap.
pub fn category(rule: &Rule) -> Category {
    use Rule::*;
    match rule {
        PlayIfCertain
        | PlaySafeCard
        | PlayProbablySafeCard(_)
        | IfLivesPlayProbablySafeCard(_)
        | IfHailMaryPlayProbablySafeCard(_)
        | PlayFinesse
        | PlayFinesseTold
        | PlayUniquePossibleCard
        | PlayJustHinted(_) => Category::Play,
        CompleteTellUsefulCard
        | TellAboutOnes
        | TellAnyoneAboutUsefulCard
        | TellAnyoneAboutOldestUsefulCard
        | TellPlayableCard
        | TellPlayableCardOuter
        | TellAnyoneAboutUselessCard
        | TellDispensable
        | TellFives
        | TellMostInformation
        | TellRandomly
        | TellUnknown
        | TellFinesse
        | TellIllinformed
        | TryToUnblock
        | TellUnambiguous1
        | TellUnambiguous2 { .. } => Category::Tell,
        DiscardUseless
        | DiscardSafe
        | OsawaDiscard
        | DiscardIfCertain
        | DiscardHighest
        | DiscardOldestFirst
        | DiscardOldestNoInfoFirst
        | DiscardUnidentifiedCard
        | DiscardLeastLikelyToBeNecessary
        | DiscardProbablyUselessCard(_) => Category::Discard,
        LegalRandom => Category::Other,
    }
}

pub fn classify_rules(edition: Edition) -> BTreeMap<RuleId, Category> {
    catalog(edition)
        .rules()
        .iter()
        .map(|spec| (spec.id, category(&spec.rule)))
        .collect()
}

fn rules_of(chrom: &Chromosome) -> impl Iterator<Item = Rule> + '_ {
    let cat = catalog(chrom.edition());
    chrom
        .genes()
        .iter()
        .map(move |&id| cat.get(id).expect("chromosome ids are valid").rule)
}

fn first_position(chrom: &Chromosome, want: Category) -> Option<usize> {
    rules_of(chrom).position(|r| category(&r) == want)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChromosomeReport {
    pub set_size: usize,
    /// PlayJustHinted variant in first position.
    pub just_hinted_first: usize,
    /// TellUnambiguous1 or 2 is the earliest tell rule.
    pub unambiguous_first_tell: usize,
    pub play_before_tell: usize,
    pub tell_before_play: usize,
    /// Set contains old-edition chromosomes, where the first two counts are
    /// zero by construction.
    pub old_edition_caveat: bool,
}

pub fn composition_report(set: &[Chromosome]) -> Result<ChromosomeReport> {
    if set.is_empty() {
        return Err(HanabiError::InvalidInput("empty chromosome set".into()));
    }
    let mut report = ChromosomeReport {
        set_size: set.len(),
        just_hinted_first: 0,
        unambiguous_first_tell: 0,
        play_before_tell: 0,
        tell_before_play: 0,
        old_edition_caveat: set.iter().any(|c| c.edition() == Edition::Old),
    };
    for chrom in set {
        if matches!(rules_of(chrom).next(), Some(Rule::PlayJustHinted(_))) {
            report.just_hinted_first += 1;
        }
        let first_tell = rules_of(chrom).find(|r| category(r) == Category::Tell);
        if matches!(first_tell, Some(Rule::TellUnambiguous1 | Rule::TellUnambiguous2 { .. })) {
            report.unambiguous_first_tell += 1;
        }
        match (
            first_position(chrom, Category::Play),
            first_position(chrom, Category::Tell),
        ) {
            (Some(p), Some(t)) if p < t => report.play_before_tell += 1,
            (Some(_), Some(_)) => report.tell_before_play += 1,
            _ => {}
        }
    }
    Ok(report)
}

pub const COMPOSITION_CSV_HEADER: &str =
    "label,set_size,just_hinted_first,unambiguous_first_tell,play_before_tell,tell_before_play,old_edition";

impl ChromosomeReport {
    pub fn csv_row(&self, label: &str) -> String {
        format!(
            "{label},{},{},{},{},{},{}",
            self.set_size,
            self.just_hinted_first,
            self.unambiguous_first_tell,
            self.play_before_tell,
            self.tell_before_play,
            self.old_edition_caveat
        )
    }

    pub fn table(&self, label: &str) -> String {
        let n = self.set_size;
        let mut out = format!(
            "{label}\n  PlayJustHinted first       {}/{n}\n  TellUnambiguous first tell {}/{n}\n  play before tell           {}/{n}\n  tell before play           {}/{n}\n",
            self.just_hinted_first, self.unambiguous_first_tell, self.play_before_tell, self.tell_before_play
        );
        if self.old_edition_caveat {
            out.push_str("  note: old-edition chromosomes cannot contain PlayJustHinted or TellUnambiguous\n");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
}

pub fn fitness_curve(history: &[GenerationRecord]) -> Vec<CurvePoint> {
    history
        .iter()
        .map(|r| CurvePoint {
            generation: r.generation,
            best: r.best_fitness,
            mean: r.mean_fitness,
        })
        .collect()
}

pub const CURVE_CSV_HEADER: &str = "generation,best,mean";

pub fn curve_csv(curve: &[CurvePoint]) -> String {
    let mut out = format!("{CURVE_CSV_HEADER}\n");
    for p in curve {
        out.push_str(&format!("{},{},{}\n", p.generation, p.best, p.mean));
    }
    out
}

/// Parses [`curve_csv`] output.
pub fn parse_curve_csv(text: &str) -> Result<Vec<CurvePoint>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CURVE_CSV_HEADER) {
        return Err(HanabiError::Parse("missing fitness curve header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let bad = || HanabiError::Parse(format!("bad curve row '{l}'"));
            if f.len() != 3 {
                return Err(bad());
            }
            Ok(CurvePoint {
                generation: f[0].parse().map_err(|_| bad())?,
                best: f[1].parse().map_err(|_| bad())?,
                mean: f[2].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(edition: Edition, head: &[&str]) -> Chromosome {
        let cat = catalog(edition);
        let mut genes: Vec<RuleId> = head.iter().map(|n| cat.find_by_name(n).unwrap().id).collect();
        let rest: Vec<RuleId> = cat.ids().filter(|id| !genes.contains(id)).collect();
        genes.extend(rest);
        Chromosome::new(edition, genes).unwrap()
    }

    #[test]
    fn classification_examples() {
        let cat = catalog(Edition::New);
        let cls = classify_rules(Edition::New);
        let of = |n: &str| cls[&cat.find_by_name(n).unwrap().id];
        assert_eq!(of("PlaySafeCard"), Category::Play);
        assert_eq!(of("TellUnambiguous1"), Category::Tell);
        assert_eq!(of("IfLives>1PlayProbablySafeCard(0.8)"), Category::Play);
        assert_eq!(of("OsawaDiscard"), Category::Discard);
        assert_eq!(of("LegalRandom"), Category::Other);
        assert_eq!(cls.len(), cat.len());
        assert_eq!(classify_rules(Edition::Old).len(), catalog(Edition::Old).len());
    }

    #[test]
    fn discard_tell_play_is_tell_first() {
        let c = build(Edition::New, &["OsawaDiscard", "TellUnknown", "PlaySafeCard"]);
        let r = composition_report(&[c]).unwrap();
        assert_eq!((r.play_before_tell, r.tell_before_play), (0, 1));
        assert_eq!(r.unambiguous_first_tell, 0);
    }

    #[test]
    fn nine_of_ten_just_hinted_first() {
        let mut set: Vec<Chromosome> = (0..9)
            .map(|_| {
                build(
                    Edition::New,
                    &["PlayJustHinted(p=0.2,n=1,standalone)", "TellUnambiguous1"],
                )
            })
            .collect();
        set.push(build(Edition::New, &["TellUnambiguous2(w1=1,w2=1)"]));
        let r = composition_report(&set).unwrap();
        assert_eq!(r.just_hinted_first, 9);
        assert_eq!(r.unambiguous_first_tell, 10);
        assert_eq!(r.play_before_tell, 9);
        assert_eq!(r.play_before_tell + r.tell_before_play, 10);
        assert!(!r.old_edition_caveat);
    }

    #[test]
    fn old_edition_flagged() {
        let r = composition_report(&[Chromosome::identity(Edition::Old)]).unwrap();
        assert!(r.old_edition_caveat);
        assert_eq!(r.just_hinted_first, 0);
        assert!(composition_report(&[]).is_err());
    }

    #[test]
    fn curve_csv_round_trip() {
        let pts = vec![
            CurvePoint {
                generation: 0,
                best: 3.25,
                mean: 1.5,
            },
            CurvePoint {
                generation: 1,
                best: 4.0,
                mean: 2.125,
            },
        ];
        assert_eq!(parse_curve_csv(&curve_csv(&pts)).unwrap(), pts);
    }
}
