//! Finesse-style conventions.
//!
//! These rules only have one-line descriptions to go on, so each one fires
//! in a narrow, clearly recognisable situation and declines otherwise.

use crate::card::Card;
use crate::engine::{Action, EventKind, Hint};
use crate::knowledge::{CandidateDistribution, PlayerView};

/// A hint from someone else to a third player pointed at a single card that
/// is two above its stack while the card in between is not visible anywhere:
/// assume our newest, unpointed card is the missing one.
pub(super) fn play_finesse(view: &PlayerView<'_>) -> Option<Action> {
    if view.lives() <= 1 || view.my_hand_len() == 0 {
        return None;
    }
    let newest = view.my_hand_len() - 1;
    if !view.my_knowledge(newest).is_untold() {
        return None;
    }
    for event in view.events_since_my_last_action() {
        let EventKind::HintGiven { target, touched, .. } = event.kind else {
            continue;
        };
        if target == view.me() || touched.len() != 1 {
            continue;
        }
        let slot = touched.iter().next()?;
        let Some(hinted) = view.hand_of(target).get(slot).map(|hc| hc.card()) else {
            continue;
        };
        if hinted.value() != view.stack(hinted.color()) + 2 {
            continue;
        }
        let missing = Card::new(hinted.color(), hinted.value() - 1).ok()?;
        let visible_elsewhere = view
            .others()
            .any(|p| view.hand_of(p).iter().any(|hc| hc.card() == missing));
        if !visible_elsewhere && view.candidates(newest).count(missing) > 0 {
            return Some(Action::Play(newest));
        }
    }
    None
}

/// We were pointed at alone, and someone has since played a card: our card
/// was probably waiting on that play.
pub(super) fn play_finesse_told(view: &PlayerView<'_>) -> Option<Action> {
    let mut standalone: Option<usize> = None;
    let mut played_after = false;
    for event in view.events_since_my_last_action() {
        match event.kind {
            EventKind::HintGiven { target, touched, .. } if target == view.me() && touched.len() == 1 => {
                standalone = touched.iter().next();
                played_after = false;
            }
            EventKind::Played { .. } if standalone.is_some() => played_after = true,
            _ => {}
        }
    }
    let slot = standalone.filter(|_| played_after)?;
    (view.prob_playable(slot) > 0.5).then_some(Action::Play(slot))
}

/// The player after us holds, as their newest unpointed card, the one card
/// that lets a later player's card become playable: point at the later card
/// alone so the next player infers the finesse.
pub(super) fn tell_finesse(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 || view.num_players() < 3 {
        return None;
    }
    let mut others = view.others();
    let next = others.next()?;
    let next_hand = view.hand_of(next);
    let newest = next_hand.last()?;
    if !newest.knowledge().is_untold() || !view.board().is_playable(newest.card()) {
        return None;
    }
    let bridge = newest.card();
    for target in others {
        for hc in view.hand_of(target) {
            let c = hc.card();
            if c.color() != bridge.color() || c.value() != bridge.value() + 1 || !hc.knowledge().is_untold() {
                continue;
            }
            for hint in [Hint::Color(c.color()), Hint::Value(c.value())] {
                if view.touched_by(target, hint).len() == 1 {
                    return Some(Action::Tell { target, hint });
                }
            }
        }
    }
    None
}

/// Only one identity is still possible and it is playable.
pub(super) fn play_unique_possible(view: &PlayerView<'_>) -> Option<Action> {
    (0..view.my_hand_len())
        .find(|&s| view.candidates(s).unique().is_some_and(|c| view.board().is_playable(c)))
        .map(Action::Play)
}

fn hint_for_playable_or_widest(view: &PlayerView<'_>, target: usize) -> Option<Action> {
    let hand = view.hand_of(target);
    if let Some(hc) = hand.iter().find(|hc| view.board().is_playable(hc.card())) {
        let hint = if hc.knowledge().known_value().is_none() {
            Hint::Value(hc.card().value())
        } else {
            Hint::Color(hc.card().color())
        };
        return Some(Action::Tell { target, hint });
    }
    let mut best: Option<(usize, Hint)> = None;
    for hint in Hint::all() {
        let n = view.touched_by(target, hint).len();
        if n > 0 && best.is_none_or(|(b, _)| n > b) {
            best = Some((n, hint));
        }
    }
    best.map(|(_, hint)| Action::Tell { target, hint })
}

/// A player with no pointed-at card at all gets a hint.
pub(super) fn tell_illinformed(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    let target = view
        .others()
        .find(|&p| view.hand_of(p).iter().all(|hc| hc.knowledge().is_untold()))?;
    hint_for_playable_or_widest(view, target)
}

/// Whether `player` has neither a sure play nor a sure discard, as far as we
/// can reconstruct their beliefs.
fn is_blocked(view: &PlayerView<'_>, player: usize) -> bool {
    let unseen = view.estimated_unseen_for(player);
    !view.hand_of(player).iter().any(|hc| {
        let dist = CandidateDistribution::from_knowledge(hc.knowledge(), &unseen);
        dist.probability(|c| view.board().is_playable(c)) >= 1.0
            || dist.probability(|c| view.board().is_useless(c)) >= 1.0
    })
}

/// Helps the first blocked player when nobody between us could.
pub(super) fn try_to_unblock(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    for player in view.others() {
        if !is_blocked(view, player) {
            // this player can act and unblock anyone further along
            return None;
        }
        let hand = view.hand_of(player);
        let Some(hc) = hand
            .iter()
            .find(|hc| view.board().is_playable(hc.card()))
            .or_else(|| hand.iter().find(|hc| view.board().is_useless(hc.card())))
        else {
            continue;
        };
        let k = hc.knowledge();
        if k.known_value().is_none() {
            return Some(Action::tell_value(player, hc.card().value()));
        }
        if k.known_color().is_none() {
            return Some(Action::tell_color(player, hc.card().color()));
        }
    }
    None
}
