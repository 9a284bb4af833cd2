use rand::seq::SliceRandom;
use rand::Rng;

use crate::card::Card;
use crate::engine::{Action, Hint};
use crate::knowledge::{CardKnowledge, PlayerView};
use crate::rng::GameRng;

fn tell(target: usize, hint: Hint) -> Action {
    Action::Tell { target, hint }
}

/// Missing information about `card`, value first.
fn missing_value_first(k: &CardKnowledge, card: Card) -> Option<Hint> {
    if k.known_value().is_none() {
        Some(Hint::Value(card.value()))
    } else if k.known_color().is_none() {
        Some(Hint::Color(card.color()))
    } else {
        None
    }
}

fn missing_color_first(k: &CardKnowledge, card: Card) -> Option<Hint> {
    if k.known_color().is_none() {
        Some(Hint::Color(card.color()))
    } else if k.known_value().is_none() {
        Some(Hint::Value(card.value()))
    } else {
        None
    }
}

pub(super) fn complete_tell_useful(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    for target in view.others() {
        for hc in view.hand_of(target) {
            if !view.board().is_playable(hc.card()) {
                continue;
            }
            let k = hc.knowledge();
            match (k.known_color(), k.known_value()) {
                (Some(_), None) => return Some(tell(target, Hint::Value(hc.card().value()))),
                (None, Some(_)) => return Some(tell(target, Hint::Color(hc.card().color()))),
                _ => {}
            }
        }
    }
    None
}

/// Points at every card of `value` in the first hand holding one its owner
/// does not know about.
pub(super) fn tell_about_value(view: &PlayerView<'_>, value: u8) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    view.others()
        .find(|&t| {
            view.hand_of(t)
                .iter()
                .any(|hc| hc.card().value() == value && hc.knowledge().known_value().is_none())
        })
        .map(|t| tell(t, Hint::Value(value)))
}

pub(super) fn tell_anyone_about_useful(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    for target in view.others() {
        for hc in view.hand_of(target) {
            if view.board().is_playable(hc.card()) {
                if let Some(hint) = missing_value_first(hc.knowledge(), hc.card()) {
                    return Some(tell(target, hint));
                }
            }
        }
    }
    None
}

/// Like [`tell_anyone_about_useful`] but picks the playable card drawn
/// earliest across all other hands.
pub(super) fn tell_oldest_useful(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    let mut best: Option<(u32, usize, Hint)> = None;
    for target in view.others() {
        for hc in view.hand_of(target) {
            if !view.board().is_playable(hc.card()) {
                continue;
            }
            if let Some(hint) = missing_value_first(hc.knowledge(), hc.card()) {
                let age = hc.knowledge().drawn_turn();
                if best.is_none_or(|(a, _, _)| age < a) {
                    best = Some((age, target, hint));
                }
            }
        }
    }
    best.map(|(_, t, h)| tell(t, h))
}

/// Tells color or value (coin flip) of the first playable card found, even
/// if that information is already known.
pub(super) fn tell_playable_card(view: &PlayerView<'_>, rng: &mut GameRng) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    for target in view.others() {
        if let Some(hc) = view
            .hand_of(target)
            .iter()
            .find(|hc| view.board().is_playable(hc.card()))
        {
            let hint = if rng.gen_bool(0.5) {
                Hint::Color(hc.card().color())
            } else {
                Hint::Value(hc.card().value())
            };
            return Some(tell(target, hint));
        }
    }
    None
}

pub(super) fn tell_about_useless(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    for target in view.others() {
        for hc in view.hand_of(target) {
            if view.board().is_useless(hc.card()) {
                if let Some(hint) = missing_color_first(hc.knowledge(), hc.card()) {
                    return Some(tell(target, hint));
                }
            }
        }
    }
    None
}

/// The hint pointing at the most cards whose owner learns something new from it.
pub(super) fn tell_most_information(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    let mut best: Option<(usize, Action)> = None;
    for target in view.others() {
        let hand = view.hand_of(target);
        for hint in Hint::all() {
            let touched = view.touched_by(target, hint);
            if touched.is_empty() {
                continue;
            }
            let gained = touched
                .iter()
                .filter(|&s| hand[s].knowledge().is_new_information(hint, true))
                .count();
            if gained > 0 && best.is_none_or(|(g, _)| gained > g) {
                best = Some((gained, tell(target, hint)));
            }
        }
    }
    best.map(|(_, a)| a)
}

pub(super) fn tell_randomly(view: &PlayerView<'_>, rng: &mut GameRng) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    let tells: Vec<Action> = view.legal_actions().into_iter().filter(Action::is_tell).collect();
    tells.choose(rng).copied()
}

/// New information (color first) about the first card whose owner is
/// missing some.
pub(super) fn tell_unknown(view: &PlayerView<'_>) -> Option<Action> {
    if view.hint_tokens() == 0 {
        return None;
    }
    for target in view.others() {
        for hc in view.hand_of(target) {
            if let Some(hint) = missing_color_first(hc.knowledge(), hc.card()) {
                return Some(tell(target, hint));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::Color;
    use crate::engine::{GameState, Scenario};
    use crate::rng::rng_for;

    fn state() -> GameState {
        Scenario::new(3)
            .hand(0, &["B2", "B3"])
            .hand(1, &["R4", "Y2", "G1"])
            .hand(2, &["W1", "R1", "B1"])
            .stack(Color::Yellow, 1)
            .build()
            .unwrap()
    }

    #[test]
    fn useful_card_value_first_next_player_first() {
        let g = state();
        let view = PlayerView::new(&g, 0);
        assert_eq!(tell_anyone_about_useful(&view), Some(Action::tell_value(1, 2)));
    }

    #[test]
    fn complete_tell_needs_partial_knowledge() {
        let mut g = state();
        assert_eq!(complete_tell_useful(&PlayerView::new(&g, 0)), None);
        g.apply(Action::tell_color(1, Color::Green)).unwrap();
        // player 1 acts next; give player 0 the turn back by cycling
        g.apply(Action::Discard(0)).unwrap();
        g.apply(Action::Discard(0)).unwrap();
        let view = PlayerView::new(&g, 0);
        assert_eq!(complete_tell_useful(&view), Some(Action::tell_value(1, 1)));
    }

    #[test]
    fn ones_and_fives() {
        let g = state();
        let view = PlayerView::new(&g, 0);
        assert_eq!(tell_about_value(&view, 1), Some(Action::tell_value(1, 1)));
        assert_eq!(tell_about_value(&view, 5), None);
    }

    #[test]
    fn useless_card_gets_colour() {
        let g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["R4", "Y1"])
            .stack(Color::Yellow, 2)
            .build()
            .unwrap();
        let view = PlayerView::new(&g, 0);
        assert_eq!(tell_about_useless(&view), Some(Action::tell_color(1, Color::Yellow)));
    }

    #[test]
    fn no_tokens_no_tells() {
        let g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["R1"])
            .hint_tokens(0)
            .build()
            .unwrap();
        let view = PlayerView::new(&g, 0);
        let mut rng = rng_for(0, 0);
        assert_eq!(tell_randomly(&view, &mut rng), None);
        assert_eq!(tell_most_information(&view), None);
        assert_eq!(tell_unknown(&view), None);
        assert_eq!(tell_playable_card(&view, &mut rng), None);
    }

    #[test]
    fn most_information_prefers_widest_new_hint() {
        let g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["R1", "R2", "R3", "G4"])
            .build()
            .unwrap();
        let view = PlayerView::new(&g, 0);
        assert_eq!(tell_most_information(&view), Some(Action::tell_color(1, Color::Red)));
    }
}
