// Helpers shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::HashMap;

use hanabi_evo::card::{Card, Color, NUM_IDENTITIES};
use hanabi_evo::rng::{rng_for, GameRng};
use hanabi_evo::{Action, GameState, Hint};
use rand::seq::SliceRandom;
use rand::Rng;

const COPIES: [u8; 5] = [3, 2, 2, 2, 1];
const MAX_MOVES: usize = 1000;

/// Checks the invariants that must hold after every move. `prev_score` is
/// the score before the move.
pub fn check_state(g: &GameState, prev_score: u32) -> Result<(), String> {
    let census = g.card_census();
    for id in 0..NUM_IDENTITIES {
        let want = COPIES[id % 5] as u32;
        if census[id] != want {
            return Err(format!(
                "card {} appears {} times, expected {want}",
                Card::from_identity(id),
                census[id]
            ));
        }
    }
    if g.hint_tokens() > 8 {
        return Err(format!("{} hint tokens", g.hint_tokens()));
    }
    if g.lives() > 3 {
        return Err(format!("{} lives", g.lives()));
    }
    if g.lives() == 0 && !g.is_terminal() {
        return Err("no lives left but game continues".into());
    }
    let stacks: u32 = Color::ALL.iter().map(|&c| g.stack(c) as u32).sum();
    if g.score() != stacks {
        return Err(format!("score {} differs from stack total {stacks}", g.score()));
    }
    if g.score() < prev_score {
        return Err(format!("score fell from {prev_score} to {}", g.score()));
    }
    let hand_size = if g.num_players() <= 3 { 5 } else { 4 };
    for p in 0..g.num_players() {
        let len = g.hand(p).len();
        if len > hand_size || (g.deck_len() > 0 && len != hand_size) {
            return Err(format!("player {p} holds {len} cards"));
        }
    }
    Ok(())
}

/// Plays a game with uniformly random legal moves, checking invariants after
/// every move. Returns the final state.
pub fn random_game_checked(size: usize, seed: u64) -> Result<GameState, String> {
    let mut g = GameState::new(size, seed).map_err(|e| e.to_string())?;
    let mut rng = rng_for(seed, 99);
    check_state(&g, 0)?;
    let mut moves = 0;
    let mut last_turn_with_cards: Option<usize> = None;
    while !g.is_terminal() {
        let prev = g.score();
        let legal = g.legal_actions(g.current_player());
        let action = *legal.choose(&mut rng).ok_or("no legal action")?;
        g.apply(action).map_err(|e| format!("legal action rejected: {e}"))?;
        moves += 1;
        check_state(&g, prev)?;
        if g.deck_len() > 0 {
            last_turn_with_cards = Some(moves);
        } else if let Some(t) = last_turn_with_cards {
            if moves - t > size {
                return Err(format!("game ran {} moves past the last draw", moves - t));
            }
        }
        if moves > MAX_MOVES {
            return Err("game did not terminate".into());
        }
    }
    Ok(g)
}

/// Plays `steps` random moves, stopping early rather than ending the game.
pub fn random_midgame(size: usize, seed: u64, steps: usize) -> GameState {
    let mut g = GameState::new(size, seed).unwrap();
    let mut rng = rng_for(seed, 98);
    for _ in 0..steps {
        let legal = g.legal_actions(g.current_player());
        let action = *legal.choose(&mut rng).unwrap();
        let mut next = g.clone();
        next.apply(action).unwrap();
        if next.is_terminal() {
            break;
        }
        g = next;
    }
    g
}

fn hint_matches(hint: Hint, card: Card) -> bool {
    match hint {
        Hint::Color(c) => card.color() == c,
        Hint::Value(v) => card.value() == v,
    }
}

/// Every hint each card (by uid) has been part of, and whether it was touched.
/// Rebuilt by replaying the game from its seed.
fn hint_constraints(state: &GameState) -> HashMap<u8, Vec<(Hint, bool)>> {
    let mut out: HashMap<u8, Vec<(Hint, bool)>> = HashMap::new();
    let mut g = GameState::new(state.num_players(), state.seed()).unwrap();
    for action in state.action_log() {
        if let Action::Tell { target, hint } = action {
            for hc in g.hand(target) {
                out.entry(hc.uid())
                    .or_default()
                    .push((hint, hint_matches(hint, hc.card())));
            }
        }
        g.apply(action).unwrap();
    }
    assert_eq!(g.history(), state.history(), "replay diverged");
    out
}

fn copies(card: Card) -> usize {
    COPIES[card.value() as usize - 1] as usize
}

fn discarded(state: &GameState, card: Card) -> usize {
    state.discard().iter().filter(|&&c| c == card).count()
}

fn useless(state: &GameState, card: Card) -> bool {
    let top = state.stack(card.color());
    card.value() <= top
        || (top + 1..card.value()).any(|v| {
            discarded(state, Card::new(card.color(), v).unwrap()) == copies(Card::new(card.color(), v).unwrap())
        })
}

/// (playable, useless, necessary) probabilities for `owner`'s card at `slot`,
/// by enumerating the physical cards the owner cannot see and keeping those
/// consistent with every hint the slot's card received.
pub fn oracle_probabilities(state: &GameState, owner: usize, slot: usize) -> (f64, f64, f64) {
    let constraints = hint_constraints(state);
    let uid = state.hand(owner)[slot].uid();
    let mine = constraints.get(&uid).cloned().unwrap_or_default();
    let hidden: Vec<Card> = state
        .hand(owner)
        .iter()
        .map(|hc| hc.card())
        .chain(state.deck_cards())
        .collect();
    let consistent: Vec<Card> = hidden
        .into_iter()
        .filter(|&c| mine.iter().all(|&(h, touched)| hint_matches(h, c) == touched))
        .collect();
    let total = consistent.len() as f64;
    let share = |pred: &dyn Fn(Card) -> bool| consistent.iter().filter(|&&c| pred(c)).count() as f64 / total;
    let playable = share(&|c| c.value() == state.stack(c.color()) + 1);
    let is_useless = share(&|c| useless(state, c));
    let necessary = share(&|c| !useless(state, c) && copies(c) - discarded(state, c) == 1);
    (playable, is_useless, necessary)
}

/// Random game size and number of warm-up moves.
pub fn sample_setup(rng: &mut GameRng) -> (usize, usize) {
    (rng.gen_range(2..=5), rng.gen_range(0..60))
}
