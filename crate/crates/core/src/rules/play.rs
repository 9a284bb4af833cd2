use crate::engine::Action;
use crate::knowledge::PlayerView;

use super::argmax_slot;

pub(super) fn play_if_certain(view: &PlayerView<'_>) -> Option<Action> {
    (0..view.my_hand_len())
        .find(|&slot| {
            let k = view.my_knowledge(slot);
            match (k.known_color(), k.known_value()) {
                (Some(c), Some(v)) => view.stack(c) + 1 == v,
                _ => false,
            }
        })
        .map(Action::Play)
}

pub(super) fn play_safe_card(view: &PlayerView<'_>) -> Option<Action> {
    (0..view.my_hand_len())
        .find(|&slot| view.prob_playable(slot) >= 1.0)
        .map(Action::Play)
}

/// Plays the most likely playable card when its probability exceeds `threshold`.
pub(super) fn play_probably_safe(view: &PlayerView<'_>, threshold: f64) -> Option<Action> {
    argmax_slot(view.my_hand_len(), |s| view.prob_playable(s))
        .filter(|&(_, p)| p > threshold)
        .map(|(slot, _)| Action::Play(slot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::Color;
    use crate::engine::{GameState, Hint, Scenario};
    use crate::knowledge::PlayerView;

    fn hinted(mut g: GameState, hints: &[(usize, Hint)]) -> GameState {
        for &(target, hint) in hints {
            if g.current_player() == target {
                let other = (target + 1) % g.num_players();
                let filler = g.hand(other)[0].card().value();
                g.apply(Action::tell_value(other, filler)).unwrap();
            }
            g.apply(Action::Tell { target, hint }).unwrap();
        }
        g
    }

    #[test]
    fn safe_card_even_with_partial_info() {
        // every 1 is playable on an empty board, colour does not matter
        let g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["R3", "G1"])
            .build()
            .unwrap();
        let g = hinted(g, &[(1, Hint::Value(1))]);
        let view = PlayerView::new(&g, 1);
        assert_eq!(play_safe_card(&view), Some(Action::Play(1)));
        assert_eq!(play_if_certain(&view), None);
    }

    #[test]
    fn certain_needs_both_axes() {
        let g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["R1", "G3"])
            .build()
            .unwrap();
        let g = hinted(g, &[(1, Hint::Color(Color::Red)), (1, Hint::Value(1))]);
        let view = PlayerView::new(&g, 1);
        assert_eq!(play_if_certain(&view), Some(Action::Play(0)));
    }

    #[test]
    fn threshold_is_strict() {
        let g = GameState::new(2, 5).unwrap();
        let view = PlayerView::new(&g, 0);
        let best = (0..5).map(|s| view.prob_playable(s)).fold(0.0, f64::max);
        assert!(best > 0.0 && best < 1.0);
        assert!(play_probably_safe(&view, best).is_none());
        assert!(play_probably_safe(&view, best - 1e-9).is_some());
    }
}
