use crate::engine::Action;
use crate::knowledge::PlayerView;

use super::argmax_slot;

fn first_slot(view: &PlayerView<'_>, pred: impl Fn(usize) -> bool) -> Option<Action> {
    (0..view.my_hand_len()).find(|&s| pred(s)).map(Action::Discard)
}

/// Every candidate is blocked by a fully discarded prerequisite.
pub(super) fn discard_dead(view: &PlayerView<'_>) -> Option<Action> {
    first_slot(view, |s| {
        let dist = view.candidates(s);
        dist.total() > 0 && dist.probability(|c| view.board().is_useless(c) && c.value() > view.stack(c.color())) >= 1.0
    })
}

/// Every candidate has already been played.
pub(super) fn discard_played(view: &PlayerView<'_>) -> Option<Action> {
    first_slot(view, |s| {
        let dist = view.candidates(s);
        dist.total() > 0 && dist.probability(|c| c.value() <= view.stack(c.color())) >= 1.0
    })
}

/// Dead for either reason.
pub(super) fn osawa_discard(view: &PlayerView<'_>) -> Option<Action> {
    first_slot(view, |s| view.prob_useless(s) >= 1.0)
}

pub(super) fn discard_if_certain(view: &PlayerView<'_>) -> Option<Action> {
    first_slot(view, |s| {
        let k = view.my_knowledge(s);
        k.is_fully_known() && view.prob_useless(s) >= 1.0
    })
}

/// Highest told-or-deduced value; declines when no value is known.
pub(super) fn discard_highest(view: &PlayerView<'_>) -> Option<Action> {
    let mut best: Option<(usize, u8)> = None;
    for s in 0..view.my_hand_len() {
        if let Some(v) = view.my_knowledge(s).known_value() {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((s, v));
            }
        }
    }
    best.map(|(s, _)| Action::Discard(s))
}

pub(super) fn discard_oldest(view: &PlayerView<'_>) -> Option<Action> {
    (view.my_hand_len() > 0).then_some(Action::Discard(0))
}

pub(super) fn discard_oldest_no_info(view: &PlayerView<'_>) -> Option<Action> {
    first_slot(view, |s| view.my_knowledge(s).is_untold())
}

/// The newest card nobody has pointed at.
pub(super) fn discard_unidentified(view: &PlayerView<'_>) -> Option<Action> {
    (0..view.my_hand_len())
        .rev()
        .find(|&s| view.my_knowledge(s).is_untold())
        .map(Action::Discard)
}

pub(super) fn discard_least_necessary(view: &PlayerView<'_>) -> Option<Action> {
    argmax_slot(view.my_hand_len(), |s| -view.prob_necessary(s)).map(|(s, _)| Action::Discard(s))
}

pub(super) fn discard_probably_useless(view: &PlayerView<'_>, threshold: f64) -> Option<Action> {
    argmax_slot(view.my_hand_len(), |s| view.prob_useless(s))
        .filter(|&(_, p)| p > threshold)
        .map(|(s, _)| Action::Discard(s))
}
