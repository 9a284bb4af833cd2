//! What a player knows about their own hand, and the probabilities derived
//! from it.
//!
//! Beliefs condition on hints (positive and negative) and on every card the
//! owner can see: other hands, the discard pile and the fireworks. Candidate
//! identities are weighted by their number of unseen copies.

use crate::card::{Card, Color, NUM_IDENTITIES, NUM_VALUES};
use crate::engine::{Action, Event, EventKind, GameState, HandCard, Hint, SlotSet};
use crate::error::{HanabiError, Result};

const ALL_MASK: u8 = 0b1_1111;

/// Hint-derived knowledge about one hand slot, from its owner's side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardKnowledge {
    colors: u8,
    values: u8,
    told_color: Option<Color>,
    told_value: Option<u8>,
    drawn_turn: u32,
}

impl CardKnowledge {
    pub fn new(drawn_turn: u32) -> CardKnowledge {
        CardKnowledge {
            colors: ALL_MASK,
            values: ALL_MASK,
            told_color: None,
            told_value: None,
            drawn_turn,
        }
    }

    pub fn apply_hint(&mut self, hint: Hint, touched: bool) {
        match hint {
            Hint::Color(c) => {
                let bit = 1 << c.index();
                if touched {
                    self.colors &= bit;
                    self.told_color = Some(c);
                } else {
                    self.colors &= !bit;
                }
            }
            Hint::Value(v) => {
                let bit = 1 << (v - 1);
                if touched {
                    self.values &= bit;
                    self.told_value = Some(v);
                } else {
                    self.values &= !bit;
                }
            }
        }
    }

    pub fn could_have_color(&self, color: Color) -> bool {
        self.colors & (1 << color.index()) != 0
    }

    pub fn could_have_value(&self, value: u8) -> bool {
        self.values & (1 << (value - 1)) != 0
    }

    pub fn could_be(&self, card: Card) -> bool {
        self.could_have_color(card.color()) && self.could_have_value(card.value())
    }

    pub fn possible_colors(&self) -> impl Iterator<Item = Color> + '_ {
        Color::ALL.into_iter().filter(|&c| self.could_have_color(c))
    }

    pub fn possible_values(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=5).filter(|&v| self.could_have_value(v))
    }

    /// The color, if only one remains possible (told or deduced from negatives).
    pub fn known_color(&self) -> Option<Color> {
        (self.colors.count_ones() == 1).then(|| Color::from_index(self.colors.trailing_zeros() as usize))
    }

    pub fn known_value(&self) -> Option<u8> {
        (self.values.count_ones() == 1).then(|| self.values.trailing_zeros() as u8 + 1)
    }

    pub fn told_color(&self) -> Option<Color> {
        self.told_color
    }

    pub fn told_value(&self) -> Option<u8> {
        self.told_value
    }

    pub fn is_fully_known(&self) -> bool {
        self.known_color().is_some() && self.known_value().is_some()
    }

    /// No color or value has been pointed at for this card.
    pub fn is_untold(&self) -> bool {
        self.told_color.is_none() && self.told_value.is_none()
    }

    pub fn drawn_turn(&self) -> u32 {
        self.drawn_turn
    }

    /// Whether `hint` would tell this card's owner anything they do not know yet.
    pub fn is_new_information(&self, hint: Hint, touched: bool) -> bool {
        let mut after = self.clone();
        after.apply_hint(hint, touched);
        after.colors != self.colors || after.values != self.values
    }
}

/// Unseen copies of each identity consistent with one slot's knowledge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateDistribution {
    counts: [u8; NUM_IDENTITIES],
}

impl CandidateDistribution {
    pub fn from_knowledge(knowledge: &CardKnowledge, unseen: &[u8; NUM_IDENTITIES]) -> Self {
        let mut counts = [0u8; NUM_IDENTITIES];
        for color in knowledge.possible_colors() {
            for value in knowledge.possible_values() {
                let id = color.index() * NUM_VALUES + value as usize - 1;
                counts[id] = unseen[id];
            }
        }
        CandidateDistribution { counts }
    }

    pub fn count(&self, card: Card) -> u8 {
        self.counts[card.identity()]
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().map(|&c| c as u32).sum()
    }

    /// Candidates with a non-zero count.
    pub fn iter(&self) -> impl Iterator<Item = (Card, u8)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(id, &n)| (Card::from_identity(id), n))
    }

    /// Share of the mass satisfying `pred`; zero for an empty distribution.
    pub fn probability(&self, mut pred: impl FnMut(Card) -> bool) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let hits: u32 = self.iter().filter(|(c, _)| pred(*c)).map(|(_, n)| n as u32).sum();
        hits as f64 / total as f64
    }

    /// Only one identity remains.
    pub fn unique(&self) -> Option<Card> {
        let mut it = self.iter();
        let first = it.next()?;
        it.next().is_none().then_some(first.0)
    }
}

/// Card status on the current board, for every identity.
#[derive(Debug, Clone, Copy)]
pub struct BoardStatus {
    playable: [bool; NUM_IDENTITIES],
    useless: [bool; NUM_IDENTITIES],
    necessary: [bool; NUM_IDENTITIES],
}

impl BoardStatus {
    pub fn of(state: &GameState) -> BoardStatus {
        let copies = state.deck_spec().copies_by_identity();
        let discarded = state.discard_counts();
        let mut status = BoardStatus {
            playable: [false; NUM_IDENTITIES],
            useless: [false; NUM_IDENTITIES],
            necessary: [false; NUM_IDENTITIES],
        };
        for color in Color::ALL {
            let top = state.stack(color);
            // First value of this color that can no longer be completed.
            let dead_from = (top + 1..=5).find(|&v| {
                let id = Card::new(color, v).expect("value").identity();
                discarded[id] >= copies[id]
            });
            for value in 1..=5u8 {
                let id = color.index() * NUM_VALUES + value as usize - 1;
                let useless = value <= top || dead_from.is_some_and(|d| value > d);
                status.playable[id] = value == top + 1;
                status.useless[id] = useless;
                status.necessary[id] = !useless && discarded[id] + 1 == copies[id];
            }
        }
        status
    }

    pub fn is_playable(&self, card: Card) -> bool {
        self.playable[card.identity()]
    }

    /// Already played, or blocked by a fully discarded prerequisite.
    pub fn is_useless(&self, card: Card) -> bool {
        self.useless[card.identity()]
    }

    /// Still needed and every other copy is discarded.
    pub fn is_necessary(&self, card: Card) -> bool {
        self.necessary[card.identity()]
    }
}

#[derive(Debug, Clone, Copy)]
struct SlotBelief {
    dist: CandidateDistribution,
    playable: f64,
    useless: f64,
    necessary: f64,
}

/// The game as seen by one player: everything except their own cards and the deck.
///
/// Rules only ever receive a view, so they cannot read hidden identities.
#[derive(Debug, Clone)]
pub struct PlayerView<'a> {
    state: &'a GameState,
    me: usize,
    board: BoardStatus,
    unseen: [u8; NUM_IDENTITIES],
    beliefs: Vec<SlotBelief>,
}

impl<'a> PlayerView<'a> {
    pub fn new(state: &'a GameState, me: usize) -> PlayerView<'a> {
        let board = BoardStatus::of(state);
        let mut unseen = state.deck_spec().copies_by_identity();
        let mut remove = |card: Card| unseen[card.identity()] -= 1;
        for p in (0..state.num_players()).filter(|&p| p != me) {
            state.hand(p).iter().for_each(|hc| remove(hc.card()));
        }
        state.discard().iter().for_each(|&c| remove(c));
        for color in Color::ALL {
            for v in 1..=state.stack(color) {
                remove(Card::new(color, v).expect("stack value"));
            }
        }
        let beliefs = state
            .hand(me)
            .iter()
            .map(|hc| {
                let dist = CandidateDistribution::from_knowledge(hc.knowledge(), &unseen);
                SlotBelief {
                    dist,
                    playable: dist.probability(|c| board.is_playable(c)),
                    useless: dist.probability(|c| board.is_useless(c)),
                    necessary: dist.probability(|c| board.is_necessary(c)),
                }
            })
            .collect();
        PlayerView {
            state,
            me,
            board,
            unseen,
            beliefs,
        }
    }

    pub fn me(&self) -> usize {
        self.me
    }

    pub fn num_players(&self) -> usize {
        self.state.num_players()
    }

    pub fn hint_tokens(&self) -> u8 {
        self.state.hint_tokens()
    }

    pub fn lives(&self) -> u8 {
        self.state.lives()
    }

    pub fn deck_len(&self) -> usize {
        self.state.deck_len()
    }

    pub fn stack(&self, color: Color) -> u8 {
        self.state.stack(color)
    }

    pub fn board(&self) -> &BoardStatus {
        &self.board
    }

    pub fn discard_counts(&self) -> &[u8; NUM_IDENTITIES] {
        self.state.discard_counts()
    }

    pub fn legal_actions(&self) -> Vec<Action> {
        self.state.legal_actions(self.me)
    }

    /// Copies of each identity the owner cannot see.
    pub fn unseen(&self) -> &[u8; NUM_IDENTITIES] {
        &self.unseen
    }

    pub fn my_hand_len(&self) -> usize {
        self.beliefs.len()
    }

    pub fn my_knowledge(&self, slot: usize) -> &CardKnowledge {
        self.state.hand(self.me)[slot].knowledge()
    }

    pub fn candidates(&self, slot: usize) -> &CandidateDistribution {
        &self.beliefs[slot].dist
    }

    pub fn prob_playable(&self, slot: usize) -> f64 {
        self.beliefs[slot].playable
    }

    pub fn prob_useless(&self, slot: usize) -> f64 {
        self.beliefs[slot].useless
    }

    pub fn prob_necessary(&self, slot: usize) -> f64 {
        self.beliefs[slot].necessary
    }

    /// Other players in turn order, starting with the next one.
    pub fn others(&self) -> impl Iterator<Item = usize> {
        let n = self.num_players();
        let me = self.me;
        (1..n).map(move |i| (me + i) % n)
    }

    /// The hand of another player. Panics when asked for the viewer's own hand.
    pub fn hand_of(&self, player: usize) -> &'a [HandCard] {
        assert_ne!(player, self.me, "own hand is hidden");
        self.state.hand(player)
    }

    pub fn touched_by(&self, target: usize, hint: Hint) -> SlotSet {
        assert_ne!(target, self.me, "own hand is hidden");
        self.state.touched_by(target, hint)
    }

    /// Events since this player's previous action, excluding the identity of
    /// cards this player drew.
    pub fn events_since_my_last_action(&self) -> impl Iterator<Item = &'a Event> {
        let history = self.state.history();
        let me = self.me;
        let start = history
            .iter()
            .rposition(|e| e.player == me && !matches!(e.kind, EventKind::CardDrawn { .. }))
            .map_or(0, |i| i + 1);
        history[start..]
            .iter()
            .filter(move |e| !(e.player == me && matches!(e.kind, EventKind::CardDrawn { .. })))
    }

    /// Unseen copies from `target`'s side, as far as this viewer can tell:
    /// the viewer's own hand is unknown to them, so it is counted as unseen.
    pub fn estimated_unseen_for(&self, target: usize) -> [u8; NUM_IDENTITIES] {
        assert_ne!(target, self.me);
        let mut unseen = self.unseen;
        for hc in self.hand_of(target) {
            unseen[hc.card().identity()] += 1;
        }
        unseen
    }
}

fn occupied(state: &GameState, owner: usize, slot: usize) -> Result<()> {
    if owner >= state.num_players() || slot >= state.hand(owner).len() {
        return Err(HanabiError::InvalidInput(format!(
            "player {owner} has no card in slot {slot}"
        )));
    }
    Ok(())
}

pub fn candidates(state: &GameState, owner: usize, slot: usize) -> Result<CandidateDistribution> {
    occupied(state, owner, slot)?;
    Ok(*PlayerView::new(state, owner).candidates(slot))
}

pub fn prob_playable(state: &GameState, owner: usize, slot: usize) -> Result<f64> {
    occupied(state, owner, slot)?;
    Ok(PlayerView::new(state, owner).prob_playable(slot))
}

pub fn prob_useless(state: &GameState, owner: usize, slot: usize) -> Result<f64> {
    occupied(state, owner, slot)?;
    Ok(PlayerView::new(state, owner).prob_useless(slot))
}

pub fn prob_necessary(state: &GameState, owner: usize, slot: usize) -> Result<f64> {
    occupied(state, owner, slot)?;
    Ok(PlayerView::new(state, owner).prob_necessary(slot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Scenario;

    /// Gives `hint` to `target`; if it is the target's turn they first spend
    /// a hint on the next player.
    fn tell(state: &mut GameState, target: usize, hint: Hint) {
        if state.current_player() == target {
            let other = (target + 1) % state.num_players();
            let filler = state.hand(other)[0].card().value();
            state.apply(Action::tell_value(other, filler)).unwrap();
        }
        state.apply(Action::Tell { target, hint }).unwrap();
    }

    #[test]
    fn fully_told_card_collapses() {
        let mut g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["R1", "G3"])
            .build()
            .unwrap();
        tell(&mut g, 1, Hint::Color(Color::Red));
        tell(&mut g, 1, Hint::Value(1));
        let dist = candidates(&g, 1, 0).unwrap();
        let items: Vec<_> = dist.iter().collect();
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].0, "R1".parse().unwrap());
        assert!(items[0].1 >= 1);
        assert_eq!(prob_playable(&g, 1, 0).unwrap(), 1.0);
    }

    #[test]
    fn fresh_two_player_total_is_forty_five() {
        let g = GameState::new(2, 17).unwrap();
        for slot in 0..5 {
            assert_eq!(candidates(&g, 0, slot).unwrap().total(), 45);
            assert_eq!(prob_useless(&g, 0, slot).unwrap(), 0.0);
        }
    }

    #[test]
    fn exhausted_copies_vanish() {
        let g = Scenario::new(2)
            .hand(0, &["R2", "R3"])
            .hand(1, &["B1", "B1"])
            .discarded(&["B1"])
            .build()
            .unwrap();
        for slot in 0..2 {
            assert_eq!(candidates(&g, 0, slot).unwrap().count("B1".parse().unwrap()), 0);
        }
    }

    #[test]
    fn known_five_without_four_not_playable() {
        let mut g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["R5", "G3"])
            .build()
            .unwrap();
        tell(&mut g, 1, Hint::Value(5));
        assert_eq!(prob_playable(&g, 1, 0).unwrap(), 0.0);
        // fives are unique, none discarded: all necessary
        assert_eq!(prob_necessary(&g, 1, 0).unwrap(), 1.0);
    }

    #[test]
    fn known_one_useless_when_all_stacks_started() {
        let mut s = Scenario::new(2).hand(0, &["B2"]).hand(1, &["R1", "G3"]);
        for c in Color::ALL {
            s = s.stack(c, 1);
        }
        let mut g = s.build().unwrap();
        tell(&mut g, 1, Hint::Value(1));
        assert_eq!(prob_useless(&g, 1, 0).unwrap(), 1.0);
        assert_eq!(prob_playable(&g, 1, 0).unwrap(), 0.0);
        assert_eq!(prob_necessary(&g, 1, 0).unwrap(), 0.0);
    }

    #[test]
    fn dead_prerequisite_makes_card_useless() {
        let mut g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["G4", "R2"])
            .discarded(&["G3", "G3"])
            .build()
            .unwrap();
        tell(&mut g, 1, Hint::Color(Color::Green));
        tell(&mut g, 1, Hint::Value(4));
        assert_eq!(prob_useless(&g, 1, 0).unwrap(), 1.0);
    }

    #[test]
    fn last_copy_is_necessary() {
        let mut g = Scenario::new(2)
            .hand(0, &["B2"])
            .hand(1, &["Y2", "R2"])
            .discarded(&["Y2"])
            .build()
            .unwrap();
        tell(&mut g, 1, Hint::Color(Color::Yellow));
        tell(&mut g, 1, Hint::Value(2));
        assert_eq!(prob_necessary(&g, 1, 0).unwrap(), 1.0);
    }

    #[test]
    fn empty_slot_rejected() {
        let g = GameState::new(2, 1).unwrap();
        assert!(candidates(&g, 0, 5).is_err());
        assert!(prob_playable(&g, 2, 0).is_err());
    }

    #[test]
    fn hints_never_grow_candidate_sets() {
        let mut g = GameState::new(3, 8).unwrap();
        let before: Vec<u32> = (0..5).map(|s| candidates(&g, 1, s).unwrap().total()).collect();
        let v = g.hand(1)[0].card().value();
        tell(&mut g, 1, Hint::Value(v));
        for (s, b) in before.iter().enumerate() {
            assert!(candidates(&g, 1, s).unwrap().total() <= *b);
        }
    }

    #[test]
    fn view_hides_own_draws() {
        let mut g = GameState::new(2, 3).unwrap();
        g.apply(Action::Discard(0)).unwrap();
        g.apply(Action::Discard(0)).unwrap();
        let view = PlayerView::new(&g, 0);
        let events: Vec<_> = view.events_since_my_last_action().collect();
        // player 1's discard and draw are visible; our own draw came before and is hidden anyway
        assert_eq!(events.len(), 2);
        assert!(events.iter().all(|e| e.player == 1));
    }
}
