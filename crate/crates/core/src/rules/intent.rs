//! Rules that reason about why a hint was given, or how a hint will be read.

use crate::engine::{Action, EventKind, Hint, SlotSet};
use crate::knowledge::{CandidateDistribution, PlayerView};

use super::{HintRestriction, JustHintedParams};

/// Plays the most likely playable card among those pointed at since our
/// previous action.
pub(super) fn play_just_hinted(params: JustHintedParams, view: &PlayerView<'_>) -> Option<Action> {
    if view.lives() <= params.min_lives || view.my_hand_len() == 0 {
        return None;
    }
    let newest = view.my_hand_len() - 1;
    let mut candidates = SlotSet::default();
    for event in view.events_since_my_last_action() {
        if let EventKind::HintGiven { target, touched, .. } = event.kind {
            if target != view.me() {
                continue;
            }
            if params.restriction == Some(HintRestriction::Standalone) && touched.len() != 1 {
                continue;
            }
            for slot in touched.iter() {
                if params.restriction != Some(HintRestriction::Newest) || slot == newest {
                    candidates.insert(slot);
                }
            }
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for slot in candidates.iter() {
        let p = view.prob_playable(slot);
        if best.is_none_or(|(_, b)| p > b) {
            best = Some((slot, p));
        }
    }
    best.filter(|&(_, p)| p > params.min_prob)
        .map(|(slot, _)| Action::Play(slot))
}

/// Every legal hint to every other player, lowest player index first,
/// colors before values.
fn candidate_hints(view: &PlayerView<'_>) -> Vec<(usize, Hint, SlotSet)> {
    let mut targets: Vec<usize> = view.others().collect();
    targets.sort_unstable();
    let mut out = Vec::new();
    for target in targets {
        for hint in Hint::all() {
            let touched = view.touched_by(target, hint);
            if !touched.is_empty() {
                out.push((target, hint, touched));
            }
        }
    }
    out
}

/// Among hints pointing at a playable card and telling its owner something
/// new, the one pointing at the most playable cards, then the fewest
/// unplayable ones.
pub fn tell_unambiguous_1(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    let mut best: Option<((usize, usize), Action)> = None;
    for (target, hint, touched) in candidate_hints(view) {
        let hand = view.hand_of(target);
        let mut playable = 0;
        let mut unplayable = 0;
        let mut informative = false;
        for slot in touched.iter() {
            let hc = &hand[slot];
            if view.board().is_playable(hc.card()) {
                playable += 1;
                informative |= hc.knowledge().is_new_information(hint, true);
            } else {
                unplayable += 1;
            }
        }
        if playable == 0 || !informative {
            continue;
        }
        // maximise playable, then minimise unplayable
        let key = (playable, usize::MAX - unplayable);
        if best.is_none_or(|(b, _)| key > b) {
            best = Some((key, Action::Tell { target, hint }));
        }
    }
    best.map(|(_, a)| a)
}

/// Value of one candidate hint under the weighted-playability objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HintScore {
    pub action: Action,
    /// Σ w1·p over the target's playable cards minus Σ w2·p over the
    /// unplayable ones, with p the target's own post-hint belief.
    pub value: f64,
    /// `value` minus the same sum before the hint.
    pub gain: f64,
    pub touches_playable: bool,
}

fn hand_value(
    view: &PlayerView<'_>,
    target: usize,
    unseen: &[u8; crate::card::NUM_IDENTITIES],
    hint: Option<(Hint, SlotSet)>,
    w1: f64,
    w2: f64,
) -> f64 {
    let board = view.board();
    view.hand_of(target)
        .iter()
        .enumerate()
        .map(|(slot, hc)| {
            let mut k = hc.knowledge().clone();
            if let Some((h, touched)) = hint {
                k.apply_hint(h, touched.contains(slot));
            }
            let p = CandidateDistribution::from_knowledge(&k, unseen).probability(|c| board.is_playable(c));
            if board.is_playable(hc.card()) {
                w1 * p
            } else {
                -w2 * p
            }
        })
        .sum()
}

/// Scores every legal hint from the target's point of view.
pub fn tell_unambiguous_2_scores(view: &PlayerView<'_>, w1: f64, w2: f64) -> Vec<HintScore> {
    let mut out = Vec::new();
    let mut current: Option<(usize, [u8; crate::card::NUM_IDENTITIES], f64)> = None;
    for (target, hint, touched) in candidate_hints(view) {
        if current.is_none_or(|(t, _, _)| t != target) {
            let unseen = view.estimated_unseen_for(target);
            let before = hand_value(view, target, &unseen, None, w1, w2);
            current = Some((target, unseen, before));
        }
        let (_, unseen, before) = current.as_ref().expect("set above");
        let value = hand_value(view, target, unseen, Some((hint, touched)), w1, w2);
        let hand = view.hand_of(target);
        out.push(HintScore {
            action: Action::Tell { target, hint },
            value,
            gain: value - before,
            touches_playable: touched.iter().any(|s| view.board().is_playable(hand[s].card())),
        });
    }
    out
}

/// The hint with the largest gain, provided some hint points at a playable
/// card and the best gain is positive.
pub fn tell_unambiguous_2(view: &PlayerView<'_>, w1: f64, w2: f64) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    let scores = tell_unambiguous_2_scores(view, w1, w2);
    if !scores.iter().any(|s| s.touches_playable) {
        return None;
    }
    let mut best: Option<&HintScore> = None;
    for s in &scores {
        if best.is_none_or(|b| s.gain > b.gain) {
            best = Some(s);
        }
    }
    best.filter(|b| b.gain > 0.0).map(|b| b.action)
}
