//! Cards, colors and deck composition.

use std::fmt;
use std::str::FromStr;

use crate::error::HanabiError;

pub const NUM_COLORS: usize = 5;
pub const NUM_VALUES: usize = 5;
/// Number of distinct card identities (color × value).
pub const NUM_IDENTITIES: usize = NUM_COLORS * NUM_VALUES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Blue,
    Red,
    Yellow,
    White,
    Green,
}

impl Color {
    pub const ALL: [Color; NUM_COLORS] = [Color::Blue, Color::Red, Color::Yellow, Color::White, Color::Green];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Color {
        Self::ALL[i]
    }

    pub fn letter(self) -> char {
        match self {
            Color::Blue => 'B',
            Color::Red => 'R',
            Color::Yellow => 'Y',
            Color::White => 'W',
            Color::Green => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        Self::ALL
            .iter()
            .copied()
            .find(|col| col.letter() == c.to_ascii_uppercase())
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A physical card: one of five colors and a value in `1..=5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card {
    color: Color,
    value: u8,
}

impl Card {
    pub fn new(color: Color, value: u8) -> Result<Card, HanabiError> {
        if !(1..=5).contains(&value) {
            return Err(HanabiError::InvalidInput(format!("card value {value} outside 1..=5")));
        }
        Ok(Card { color, value })
    }

    pub fn color(self) -> Color {
        self.color
    }

    pub fn value(self) -> u8 {
        self.value
    }

    /// Dense index in `0..25`, color-major.
    pub fn identity(self) -> usize {
        self.color.index() * NUM_VALUES + (self.value as usize - 1)
    }

    pub fn from_identity(id: usize) -> Card {
        Card {
            color: Color::from_index(id / NUM_VALUES),
            value: (id % NUM_VALUES) as u8 + 1,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.color, self.value)
    }
}

impl FromStr for Card {
    type Err = HanabiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let bad = || HanabiError::Parse(format!("bad card '{s}'"));
        let color = chars.next().and_then(Color::from_letter).ok_or_else(bad)?;
        let value = chars.next().and_then(|c| c.to_digit(10)).ok_or_else(bad)? as u8;
        if chars.next().is_some() {
            return Err(bad());
        }
        Card::new(color, value)
    }
}

/// Deck composition: copies of each value, identical for every color.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeckSpec {
    copies: [u8; NUM_VALUES],
}

impl Default for DeckSpec {
    fn default() -> Self {
        DeckSpec {
            copies: [3, 2, 2, 2, 1],
        }
    }
}

impl DeckSpec {
    pub fn new(copies: [u8; NUM_VALUES]) -> Result<DeckSpec, HanabiError> {
        if copies.contains(&0) {
            return Err(HanabiError::InvalidInput("every value needs at least one copy".into()));
        }
        Ok(DeckSpec { copies })
    }

    pub fn copies_of_value(&self, value: u8) -> u8 {
        self.copies[value as usize - 1]
    }

    pub fn copies(&self, card: Card) -> u8 {
        self.copies_of_value(card.value())
    }

    pub fn copies_by_identity(&self) -> [u8; NUM_IDENTITIES] {
        let mut out = [0u8; NUM_IDENTITIES];
        for (id, slot) in out.iter_mut().enumerate() {
            *slot = self.copies[id % NUM_VALUES];
        }
        out
    }

    pub fn size(&self) -> usize {
        NUM_COLORS * self.copies.iter().map(|&c| c as usize).sum::<usize>()
    }

    /// All cards in canonical (unshuffled) order.
    pub fn cards(&self) -> Vec<Card> {
        let mut cards = Vec::with_capacity(self.size());
        for color in Color::ALL {
            for value in 1..=5u8 {
                for _ in 0..self.copies_of_value(value) {
                    cards.push(Card { color, value });
                }
            }
        }
        cards
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_deck_has_fifty_cards() {
        let spec = DeckSpec::default();
        assert_eq!(spec.size(), 50);
        assert_eq!(spec.cards().len(), 50);
        assert_eq!(spec.copies_by_identity().iter().map(|&c| c as usize).sum::<usize>(), 50);
    }

    #[test]
    fn identity_round_trips() {
        for id in 0..NUM_IDENTITIES {
            assert_eq!(Card::from_identity(id).identity(), id);
        }
    }

    #[test]
    fn card_value_bounds() {
        assert!(Card::new(Color::Red, 0).is_err());
        assert!(Card::new(Color::Red, 6).is_err());
        assert_eq!("R3".parse::<Card>().unwrap(), Card::new(Color::Red, 3).unwrap());
        assert!("X3".parse::<Card>().is_err());
    }
}
