//! Seeded Hanabi state machine.
//!
//! Hands are ordered oldest card first; a drawn card is appended at the end.
//! Every applied action appends to an event history that is never rewritten.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::card::{Card, Color, DeckSpec, NUM_COLORS, NUM_IDENTITIES};
use crate::error::{HanabiError, Result};
use crate::knowledge::CardKnowledge;
use crate::rng::{rng_for, DEAL_STREAM};

pub const MAX_HINT_TOKENS: u8 = 8;
pub const MAX_LIVES: u8 = 3;
pub const MIN_PLAYERS: usize = 2;
pub const MAX_PLAYERS: usize = 5;

pub fn hand_size_for(num_players: usize) -> usize {
    if num_players <= 3 {
        5
    } else {
        4
    }
}

/// What a hint points at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hint {
    Color(Color),
    Value(u8),
}

impl Hint {
    pub fn matches(self, card: Card) -> bool {
        match self {
            Hint::Color(c) => card.color() == c,
            Hint::Value(v) => card.value() == v,
        }
    }

    /// All ten hints, colors first.
    pub fn all() -> impl Iterator<Item = Hint> {
        Color::ALL.into_iter().map(Hint::Color).chain((1..=5).map(Hint::Value))
    }
}

impl fmt::Display for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hint::Color(c) => write!(f, "{c}"),
            Hint::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Play(usize),
    Discard(usize),
    Tell { target: usize, hint: Hint },
}

impl Action {
    pub fn tell_color(target: usize, color: Color) -> Action {
        Action::Tell {
            target,
            hint: Hint::Color(color),
        }
    }

    pub fn tell_value(target: usize, value: u8) -> Action {
        Action::Tell {
            target,
            hint: Hint::Value(value),
        }
    }

    pub fn is_tell(&self) -> bool {
        matches!(self, Action::Tell { .. })
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Play(s) => write!(f, "play {s}"),
            Action::Discard(s) => write!(f, "discard {s}"),
            Action::Tell { target, hint } => write!(f, "tell {target} {hint}"),
        }
    }
}

impl FromStr for Action {
    type Err = HanabiError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HanabiError::Parse(format!("bad action '{s}'"));
        let parts: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["play", slot] => Ok(Action::Play(num(slot)?)),
            ["discard", slot] => Ok(Action::Discard(num(slot)?)),
            ["tell", target, what] => {
                let target = num(target)?;
                let hint = match what.parse::<u8>() {
                    Ok(v) if (1..=5).contains(&v) => Hint::Value(v),
                    Ok(_) => return Err(bad()),
                    Err(_) => {
                        let mut chars = what.chars();
                        let color = chars.next().and_then(Color::from_letter).ok_or_else(bad)?;
                        if chars.next().is_some() {
                            return Err(bad());
                        }
                        Hint::Color(color)
                    }
                };
                Ok(Action::Tell { target, hint })
            }
            _ => Err(bad()),
        }
    }
}

/// A set of hand slots, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SlotSet(u8);

impl SlotSet {
    pub fn insert(&mut self, slot: usize) {
        self.0 |= 1 << slot;
    }

    pub fn contains(self, slot: usize) -> bool {
        self.0 & (1 << slot) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..8).filter(move |&s| self.contains(s))
    }
}

impl FromIterator<usize> for SlotSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = SlotSet::default();
        for s in iter {
            set.insert(s);
        }
        set
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    Played {
        slot: usize,
        card: Card,
    },
    Misplayed {
        slot: usize,
        card: Card,
    },
    Discarded {
        slot: usize,
        card: Card,
    },
    HintGiven {
        target: usize,
        hint: Hint,
        touched: SlotSet,
    },
    CardDrawn {
        card: Card,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub turn: u32,
    pub player: usize,
    pub kind: EventKind,
}

impl Event {
    /// The action that produced this event, if it was an action rather than a draw.
    pub fn action(&self) -> Option<Action> {
        match self.kind {
            EventKind::Played { slot, .. } | EventKind::Misplayed { slot, .. } => Some(Action::Play(slot)),
            EventKind::Discarded { slot, .. } => Some(Action::Discard(slot)),
            EventKind::HintGiven { target, hint, .. } => Some(Action::Tell { target, hint }),
            EventKind::CardDrawn { .. } => None,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t", self.turn, self.player)?;
        match &self.kind {
            EventKind::Played { slot, card } => write!(f, "play {slot}\tplayed {card}"),
            EventKind::Misplayed { slot, card } => write!(f, "play {slot}\tmisplayed {card}"),
            EventKind::Discarded { slot, card } => write!(f, "discard {slot}\tdiscarded {card}"),
            EventKind::HintGiven { target, hint, touched } => {
                let slots: Vec<String> = touched.iter().map(|s| s.to_string()).collect();
                write!(f, "tell {target} {hint}\ttouched {}", slots.join(","))
            }
            EventKind::CardDrawn { card } => write!(f, "draw\tdrew {card}"),
        }
    }
}

/// A card in a hand with its owner's knowledge about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandCard {
    pub(crate) card: Card,
    pub(crate) knowledge: CardKnowledge,
    /// Position of the card in the dealt deck; unique within a game.
    pub(crate) uid: u8,
}

impl HandCard {
    pub fn card(&self) -> Card {
        self.card
    }

    pub fn knowledge(&self) -> &CardKnowledge {
        &self.knowledge
    }

    pub fn uid(&self) -> u8 {
        self.uid
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    Ongoing,
    LivesExhausted,
    DeckExhausted,
    AllStacksComplete,
}

impl TerminalStatus {
    pub fn is_over(self) -> bool {
        self != TerminalStatus::Ongoing
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    num_players: usize,
    deck_spec: DeckSpec,
    hands: Vec<Vec<HandCard>>,
    /// Remaining deck; the next card drawn is the last element.
    deck: Vec<(Card, u8)>,
    fireworks: [u8; NUM_COLORS],
    discard: Vec<Card>,
    discard_counts: [u8; NUM_IDENTITIES],
    hint_tokens: u8,
    lives: u8,
    current_player: usize,
    turn: u32,
    final_turns: Option<usize>,
    history: Vec<Event>,
    seed: u64,
}

fn check_players(num_players: usize) -> Result<()> {
    if !(MIN_PLAYERS..=MAX_PLAYERS).contains(&num_players) {
        return Err(HanabiError::InvalidInput(format!(
            "player count {num_players} outside {MIN_PLAYERS}..={MAX_PLAYERS}"
        )));
    }
    Ok(())
}

impl GameState {
    /// Deals a fresh game with the default deck.
    pub fn new(num_players: usize, seed: u64) -> Result<GameState> {
        Self::with_deck_spec(num_players, seed, DeckSpec::default())
    }

    pub fn with_deck_spec(num_players: usize, seed: u64, deck_spec: DeckSpec) -> Result<GameState> {
        check_players(num_players)?;
        let mut cards = deck_spec.cards();
        cards.shuffle(&mut rng_for(seed, DEAL_STREAM));
        // Draw order is front to back of the shuffled deck; uid = shuffled position.
        let deck: Vec<(Card, u8)> = cards.into_iter().enumerate().map(|(i, c)| (c, i as u8)).rev().collect();
        let mut state = GameState {
            num_players,
            deck_spec,
            hands: vec![Vec::new(); num_players],
            deck,
            fireworks: [0; NUM_COLORS],
            discard: Vec::new(),
            discard_counts: [0; NUM_IDENTITIES],
            hint_tokens: MAX_HINT_TOKENS,
            lives: MAX_LIVES,
            current_player: 0,
            turn: 0,
            final_turns: None,
            history: Vec::new(),
            seed,
        };
        let hand_size = hand_size_for(num_players);
        for player in 0..num_players {
            for _ in 0..hand_size {
                state.deal_to(player);
            }
        }
        Ok(state)
    }

    fn deal_to(&mut self, player: usize) -> Option<Card> {
        let (card, uid) = self.deck.pop()?;
        self.hands[player].push(HandCard {
            card,
            knowledge: CardKnowledge::new(self.turn),
            uid,
        });
        Some(card)
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn deck_spec(&self) -> &DeckSpec {
        &self.deck_spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn hand(&self, player: usize) -> &[HandCard] {
        &self.hands[player]
    }

    pub fn hand_size(&self) -> usize {
        hand_size_for(self.num_players)
    }

    pub fn deck_len(&self) -> usize {
        self.deck.len()
    }

    /// Remaining deck cards in draw order.
    pub fn deck_cards(&self) -> impl Iterator<Item = Card> + '_ {
        self.deck.iter().rev().map(|(c, _)| *c)
    }

    pub fn fireworks(&self) -> &[u8; NUM_COLORS] {
        &self.fireworks
    }

    pub fn stack(&self, color: Color) -> u8 {
        self.fireworks[color.index()]
    }

    pub fn discard(&self) -> &[Card] {
        &self.discard
    }

    pub fn discard_counts(&self) -> &[u8; NUM_IDENTITIES] {
        &self.discard_counts
    }

    pub fn hint_tokens(&self) -> u8 {
        self.hint_tokens
    }

    pub fn lives(&self) -> u8 {
        self.lives
    }

    pub fn current_player(&self) -> usize {
        self.current_player
    }

    pub fn turn(&self) -> u32 {
        self.turn
    }

    pub fn history(&self) -> &[Event] {
        &self.history
    }

    pub fn is_playable(&self, card: Card) -> bool {
        self.fireworks[card.color().index()] + 1 == card.value()
    }

    pub fn score(&self) -> u32 {
        self.fireworks.iter().map(|&v| v as u32).sum()
    }

    pub fn terminal_status(&self) -> TerminalStatus {
        if self.lives == 0 {
            TerminalStatus::LivesExhausted
        } else if self.fireworks.iter().all(|&v| v == 5) {
            TerminalStatus::AllStacksComplete
        } else if self.final_turns == Some(0) {
            TerminalStatus::DeckExhausted
        } else {
            TerminalStatus::Ongoing
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal_status().is_over()
    }

    /// Hand slots of `target` that `hint` would point at.
    pub fn touched_by(&self, target: usize, hint: Hint) -> SlotSet {
        self.hands[target]
            .iter()
            .enumerate()
            .filter(|(_, hc)| hint.matches(hc.card))
            .map(|(s, _)| s)
            .collect()
    }

    pub fn legal_actions(&self, player: usize) -> Vec<Action> {
        if self.is_terminal() || player != self.current_player {
            return Vec::new();
        }
        let slots = self.hands[player].len();
        let mut actions: Vec<Action> = (0..slots).map(Action::Play).collect();
        actions.extend((0..slots).map(Action::Discard));
        if self.hint_tokens > 0 {
            for target in (0..self.num_players).filter(|&t| t != player) {
                actions.extend(
                    Hint::all()
                        .filter(|&h| !self.touched_by(target, h).is_empty())
                        .map(|hint| Action::Tell { target, hint }),
                );
            }
        }
        actions
    }

    pub fn check_legal(&self, player: usize, action: Action) -> Result<()> {
        let illegal = |reason: &str| HanabiError::IllegalAction {
            player,
            action: action.to_string(),
            reason: reason.to_string(),
        };
        if self.is_terminal() {
            return Err(illegal("game is over"));
        }
        if player != self.current_player {
            return Err(illegal("not this player's turn"));
        }
        match action {
            Action::Play(slot) | Action::Discard(slot) => {
                if slot >= self.hands[player].len() {
                    return Err(illegal("empty slot"));
                }
            }
            Action::Tell { target, hint } => {
                if self.hint_tokens == 0 {
                    return Err(illegal("no hint tokens"));
                }
                if target == player || target >= self.num_players {
                    return Err(illegal("bad hint target"));
                }
                if let Hint::Value(v) = hint {
                    if !(1..=5).contains(&v) {
                        return Err(illegal("bad hint value"));
                    }
                }
                if self.touched_by(target, hint).is_empty() {
                    return Err(illegal("hint touches no card"));
                }
            }
        }
        Ok(())
    }

    /// Applies `action` for the current player and returns the events it produced.
    pub fn apply(&mut self, action: Action) -> Result<&[Event]> {
        let player = self.current_player;
        self.check_legal(player, action)?;
        let first_new = self.history.len();
        let counting_down = self.final_turns.is_some();
        match action {
            Action::Play(slot) => {
                let hc = self.hands[player].remove(slot);
                let card = hc.card;
                if self.is_playable(card) {
                    self.fireworks[card.color().index()] += 1;
                    if card.value() == 5 {
                        self.hint_tokens = (self.hint_tokens + 1).min(MAX_HINT_TOKENS);
                    }
                    self.push_event(player, EventKind::Played { slot, card });
                } else {
                    self.lives -= 1;
                    self.discard_card(card);
                    self.push_event(player, EventKind::Misplayed { slot, card });
                }
                self.draw(player);
            }
            Action::Discard(slot) => {
                let hc = self.hands[player].remove(slot);
                self.discard_card(hc.card);
                self.hint_tokens = (self.hint_tokens + 1).min(MAX_HINT_TOKENS);
                self.push_event(player, EventKind::Discarded { slot, card: hc.card });
                self.draw(player);
            }
            Action::Tell { target, hint } => {
                self.hint_tokens -= 1;
                let touched = self.touched_by(target, hint);
                for (slot, hc) in self.hands[target].iter_mut().enumerate() {
                    hc.knowledge.apply_hint(hint, touched.contains(slot));
                }
                self.push_event(player, EventKind::HintGiven { target, hint, touched });
            }
        }
        if counting_down {
            if let Some(left) = self.final_turns.as_mut() {
                *left -= 1;
            }
        }
        self.turn += 1;
        self.current_player = (self.current_player + 1) % self.num_players;
        Ok(&self.history[first_new..])
    }

    fn discard_card(&mut self, card: Card) {
        self.discard.push(card);
        self.discard_counts[card.identity()] += 1;
    }

    fn draw(&mut self, player: usize) {
        if let Some(card) = self.deal_to(player) {
            self.push_event(player, EventKind::CardDrawn { card });
            if self.deck.is_empty() {
                self.final_turns = Some(self.num_players);
            }
        }
    }

    fn push_event(&mut self, player: usize, kind: EventKind) {
        self.history.push(Event {
            turn: self.turn,
            player,
            kind,
        });
    }

    /// Actions taken so far, in order, recovered from the event history.
    pub fn action_log(&self) -> Vec<Action> {
        self.history.iter().filter_map(Event::action).collect()
    }

    /// Line-delimited event history with a header carrying seed and player count.
    pub fn export_history(&self) -> String {
        let mut out = format!(
            "# hanabi-history players={} seed={} score={}\n",
            self.num_players,
            self.seed,
            self.score()
        );
        for event in &self.history {
            out.push_str(&event.to_string());
            out.push('\n');
        }
        out
    }

    /// Multiset of every card in the game, by identity, across deck, hands,
    /// discard and fireworks.
    pub fn card_census(&self) -> [u32; NUM_IDENTITIES] {
        let mut counts = [0u32; NUM_IDENTITIES];
        for (card, _) in &self.deck {
            counts[card.identity()] += 1;
        }
        for hand in &self.hands {
            for hc in hand {
                counts[hc.card.identity()] += 1;
            }
        }
        for card in &self.discard {
            counts[card.identity()] += 1;
        }
        for color in Color::ALL {
            for v in 1..=self.stack(color) {
                counts[Card::new(color, v).expect("stack value").identity()] += 1;
            }
        }
        counts
    }

    /// Replaces the card at `slot` of `player` with the deck card at
    /// `deck_index` (draw order), keeping the hand slot's knowledge.
    /// Used to build alternative worlds that differ only in hidden cards.
    pub fn swap_hidden(&mut self, player: usize, slot: usize, deck_index: usize) {
        let idx = self.deck.len() - 1 - deck_index;
        let hc = &mut self.hands[player][slot];
        std::mem::swap(&mut hc.card, &mut self.deck[idx].0);
        std::mem::swap(&mut hc.uid, &mut self.deck[idx].1);
    }
}

/// Plays out the given actions from a fresh deal.
pub fn replay(num_players: usize, seed: u64, actions: &[Action]) -> Result<GameState> {
    let mut state = GameState::new(num_players, seed)?;
    for &action in actions {
        state.apply(action)?;
    }
    Ok(state)
}

/// Builds mid-game positions directly, for tests and examples.
///
/// Cards not placed in hands, discard or fireworks form the deck, shuffled by
/// `seed` (or in canonical order when `canonical_deck` is set).
#[derive(Debug, Clone)]
pub struct Scenario {
    num_players: usize,
    hands: Vec<Vec<Card>>,
    fireworks: [u8; NUM_COLORS],
    discard: Vec<Card>,
    hint_tokens: u8,
    lives: u8,
    current_player: usize,
    seed: u64,
    deck_limit: Option<usize>,
}

impl Scenario {
    pub fn new(num_players: usize) -> Scenario {
        Scenario {
            num_players,
            hands: vec![Vec::new(); num_players],
            fireworks: [0; NUM_COLORS],
            discard: Vec::new(),
            hint_tokens: MAX_HINT_TOKENS,
            lives: MAX_LIVES,
            current_player: 0,
            seed: 0,
            deck_limit: None,
        }
    }

    pub fn hand(mut self, player: usize, cards: &[&str]) -> Scenario {
        self.hands[player] = cards.iter().map(|s| s.parse().expect("card literal")).collect();
        self
    }

    pub fn stack(mut self, color: Color, height: u8) -> Scenario {
        self.fireworks[color.index()] = height;
        self
    }

    pub fn discarded(mut self, cards: &[&str]) -> Scenario {
        self.discard
            .extend(cards.iter().map(|s| s.parse::<Card>().expect("card literal")));
        self
    }

    pub fn hint_tokens(mut self, tokens: u8) -> Scenario {
        self.hint_tokens = tokens;
        self
    }

    pub fn lives(mut self, lives: u8) -> Scenario {
        self.lives = lives;
        self
    }

    pub fn current_player(mut self, player: usize) -> Scenario {
        self.current_player = player;
        self
    }

    pub fn seed(mut self, seed: u64) -> Scenario {
        self.seed = seed;
        self
    }

    /// Keeps only `len` cards in the deck; the rest are moved to the discard pile.
    pub fn deck_len(mut self, len: usize) -> Scenario {
        self.deck_limit = Some(len);
        self
    }

    pub fn build(self) -> Result<GameState> {
        check_players(self.num_players)?;
        let spec = DeckSpec::default();
        let mut remaining = spec.copies_by_identity().map(i32::from);
        let mut take = |card: Card| -> Result<()> {
            let slot = &mut remaining[card.identity()];
            *slot -= 1;
            if *slot < 0 {
                return Err(HanabiError::InvalidInput(format!(
                    "scenario uses too many copies of {card}"
                )));
            }
            Ok(())
        };
        for hand in &self.hands {
            if hand.len() > hand_size_for(self.num_players) {
                return Err(HanabiError::InvalidInput("hand too large".into()));
            }
            for &c in hand {
                take(c)?;
            }
        }
        for &c in &self.discard {
            take(c)?;
        }
        for color in Color::ALL {
            let h = self.fireworks[color.index()];
            if h > 5 {
                return Err(HanabiError::InvalidInput("stack above 5".into()));
            }
            for v in 1..=h {
                take(Card::new(color, v)?)?;
            }
        }
        if self.hint_tokens > MAX_HINT_TOKENS || self.lives == 0 || self.lives > MAX_LIVES {
            return Err(HanabiError::InvalidInput("token or life count out of range".into()));
        }
        let mut deck: Vec<Card> = Vec::new();
        for (id, &n) in remaining.iter().enumerate() {
            for _ in 0..n {
                deck.push(Card::from_identity(id));
            }
        }
        deck.shuffle(&mut rng_for(self.seed, DEAL_STREAM));
        let mut discard = self.discard.clone();
        if let Some(limit) = self.deck_limit {
            while deck.len() > limit {
                discard.push(deck.pop().expect("non-empty"));
            }
        }
        let mut discard_counts = [0u8; NUM_IDENTITIES];
        for c in &discard {
            discard_counts[c.identity()] += 1;
        }
        let mut uid = 0u8;
        let mut next_uid = || {
            uid += 1;
            uid - 1
        };
        let hands = self
            .hands
            .iter()
            .map(|h| {
                h.iter()
                    .map(|&card| HandCard {
                        card,
                        knowledge: CardKnowledge::new(0),
                        uid: next_uid(),
                    })
                    .collect()
            })
            .collect();
        let deck = deck.into_iter().rev().map(|c| (c, next_uid())).collect();
        Ok(GameState {
            num_players: self.num_players,
            deck_spec: spec,
            hands,
            deck,
            fireworks: self.fireworks,
            discard,
            discard_counts,
            hint_tokens: self.hint_tokens,
            lives: self.lives,
            current_player: self.current_player,
            turn: 0,
            final_turns: None,
            history: Vec::new(),
            seed: self.seed,
        })
    }
}
