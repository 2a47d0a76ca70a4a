//! The 78 strict ordinal 2×2 bimatrix games.
//!
//! Two games are equivalent when one can be turned into the other by
//! relabelling rows, relabelling columns, or exchanging the players
//! (`(A, B) → (Bᵀ, Aᵀ)`). Each class is represented by the orbit member
//! whose column-wise encoding `A₁₁ A₂₁ A₁₂ A₂₂ B₁₁ B₂₁ B₁₂ B₂₂` is
//! lexicographically smallest.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::StrictOrdinalMatrix;

/// A pair of strict ordinal matrices: `a` for player 1, `b` for player 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BimatrixGame {
    pub a: StrictOrdinalMatrix,
    pub b: StrictOrdinalMatrix,
}

pub type OrbitKey = [u8; 8];

impl BimatrixGame {
    pub fn new(a: StrictOrdinalMatrix, b: StrictOrdinalMatrix) -> Self {
        BimatrixGame { a, b }
    }

    pub fn encoding(&self) -> OrbitKey {
        let mut key = [0u8; 8];
        key[..4].copy_from_slice(&self.a.column_wise());
        key[4..].copy_from_slice(&self.b.column_wise());
        key
    }

    pub fn swap_rows(&self) -> Self {
        BimatrixGame::new(self.a.swap_rows(), self.b.swap_rows())
    }

    pub fn swap_cols(&self) -> Self {
        BimatrixGame::new(self.a.swap_cols(), self.b.swap_cols())
    }

    pub fn swap_players(&self) -> Self {
        BimatrixGame::new(self.b.transpose(), self.a.transpose())
    }

    /// Every game reachable through the three generators, sorted by encoding.
    pub fn orbit(&self) -> Vec<BimatrixGame> {
        let mut seen: BTreeSet<(OrbitKey, BimatrixGame)> = BTreeSet::new();
        let mut stack = vec![*self];
        while let Some(g) = stack.pop() {
            if seen.insert((g.encoding(), g)) {
                stack.extend([g.swap_rows(), g.swap_cols(), g.swap_players()]);
            }
        }
        seen.into_iter().map(|(_, g)| g).collect()
    }
}

/// `a₁ a₂ a₃ a₄ -- b₁ b₂ b₃ b₄`, both matrices column-wise.
impl fmt::Display for BimatrixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4] = self.a.column_wise();
        let [b1, b2, b3, b4] = self.b.column_wise();
        write!(f, "{a1} {a2} {a3} {a4} -- {b1} {b2} {b3} {b4}")
    }
}

impl FromStr for BimatrixGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_game_line(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalGame {
    pub game: BimatrixGame,
    pub orbit_key: OrbitKey,
}

pub fn canonical_form(g: &BimatrixGame) -> CanonicalGame {
    let game = g.orbit()[0];
    CanonicalGame {
        game,
        orbit_key: game.encoding(),
    }
}

/// The 24 placements of {1, 2, 3, 4}, ordered by column-wise encoding.
pub fn all_strict_ordinal_matrices() -> Vec<StrictOrdinalMatrix> {
    let mut out = Vec::with_capacity(24);
    for a in 1..=4u8 {
        for b in 1..=4u8 {
            for c in 1..=4u8 {
                for d in 1..=4u8 {
                    if let Ok(m) = StrictOrdinalMatrix::from_column_wise([a, b, c, d]) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// All 576 ordered pairs of strict ordinal matrices.
pub fn all_raw_games() -> Vec<BimatrixGame> {
    let ms = all_strict_ordinal_matrices();
    ms.iter()
        .flat_map(|a| ms.iter().map(move |b| BimatrixGame::new(*a, *b)))
        .collect()
}

/// The canonical representatives of every equivalence class, sorted by orbit key.
pub fn enumerate_games() -> Vec<CanonicalGame> {
    let keys: BTreeSet<OrbitKey> = all_raw_games()
        .iter()
        .map(|g| canonical_form(g).orbit_key)
        .collect();
    keys.into_iter()
        .map(|k| {
            let game = game_from_key(&k);
            CanonicalGame { game, orbit_key: k }
        })
        .collect()
}

fn game_from_key(k: &OrbitKey) -> BimatrixGame {
    let a = StrictOrdinalMatrix::from_column_wise([k[0], k[1], k[2], k[3]]).expect("valid key");
    let b = StrictOrdinalMatrix::from_column_wise([k[4], k[5], k[6], k[7]]).expect("valid key");
    BimatrixGame::new(a, b)
}

/// Parses one catalog line, `a₁ a₂ a₃ a₄ -- b₁ b₂ b₃ b₄`.
///
/// Error positions are byte offsets into `text`.
pub fn parse_game_line(text: &str) -> Result<BimatrixGame> {
    let mut values = Vec::with_capacity(8);
    let mut separator_at = None;
    let mut pos = 0;
    for token in text.split_whitespace() {
        let offset = pos + text[pos..].find(token).expect("token from text");
        pos = offset + token.len();
        if token == "--" {
            if separator_at.is_some() || values.len() != 4 {
                return Err(Error::parse(offset, "'--' must follow exactly 4 values"));
            }
            separator_at = Some(offset);
            continue;
        }
        let v: u8 = token
            .parse()
            .map_err(|_| Error::parse(offset, format!("'{token}' is not an integer")))?;
        if !(1..=4).contains(&v) {
            return Err(Error::parse(offset, format!("value {v} not in 1..=4")));
        }
        if values.len() == 8 {
            return Err(Error::parse(offset, "more than 8 values"));
        }
        values.push(v);
    }
    if separator_at.is_none() {
        return Err(Error::parse(pos, "missing '--' separator"));
    }
    if values.len() != 8 {
        return Err(Error::parse(
            pos,
            format!("expected 8 values, found {}", values.len()),
        ));
    }
    let a = StrictOrdinalMatrix::from_column_wise([values[0], values[1], values[2], values[3]])
        .map_err(|e| Error::parse(0, e.to_string()))?;
    let b = StrictOrdinalMatrix::from_column_wise([values[4], values[5], values[6], values[7]])
        .map_err(|e| Error::parse(separator_at.unwrap_or(0), e.to_string()))?;
    Ok(BimatrixGame::new(a, b))
}

pub fn emit_game_line(g: &BimatrixGame) -> String {
    g.to_string()
}

/// One entry of the JSON catalog export.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub index: usize,
    #[serde(rename = "A")]
    pub a: [[u8; 2]; 2],
    #[serde(rename = "B")]
    pub b: [[u8; 2]; 2],
    pub orbit_key: OrbitKey,
    pub encoding: String,
}

pub fn catalog_entries(games: &[CanonicalGame]) -> Vec<CatalogEntry> {
    games
        .iter()
        .enumerate()
        .map(|(i, g)| CatalogEntry {
            index: i + 1,
            a: g.game.a.cells(),
            b: g.game.b.cells(),
            orbit_key: g.orbit_key,
            encoding: emit_game_line(&g.game),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_four_matrices() {
        let ms = all_strict_ordinal_matrices();
        assert_eq!(ms.len(), 24);
        assert!(ms.contains(&"[[1,3],[2,4]]".parse().unwrap()));
        let distinct: BTreeSet<_> = ms.iter().collect();
        assert_eq!(distinct.len(), 24);
    }

    #[test]
    fn parse_column_wise() {
        let g = parse_game_line("4 1 2 3 -- 2 4 3 1").unwrap();
        assert_eq!(g.a.cells(), [[4, 2], [1, 3]]);
        assert_eq!(g.b.cells(), [[2, 3], [4, 1]]);
        assert_eq!(emit_game_line(&g), "4 1 2 3 -- 2 4 3 1");
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_game_line("4 1 2 5 -- 2 4 3 1") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_game_line("4 1 2 3 2 4 3 1").is_err());
        assert!(parse_game_line("4 1 2 -- 3 2 4 3 1").is_err());
        assert!(parse_game_line("4 1 2 3 -- 2 4 3").is_err());
        assert!(parse_game_line("4 1 2 3 -- 2 4 3 1 1").is_err());
        assert!(parse_game_line("4 4 2 3 -- 2 4 3 1").is_err());
        assert!(parse_game_line("4 x 2 3 -- 2 4 3 1").is_err());
    }

    #[test]
    fn orbit_sizes_divide_eight() {
        for g in all_raw_games() {
            let n = g.orbit().len();
            assert_eq!(8 % n, 0, "orbit of {g} has size {n}");
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_orbit_invariant() {
        for g in all_raw_games() {
            let c = canonical_form(&g);
            assert_eq!(canonical_form(&c.game), c);
            for t in [g.swap_rows(), g.swap_cols(), g.swap_players()] {
                assert_eq!(canonical_form(&t).orbit_key, c.orbit_key);
            }
        }
    }

    #[test]
    fn seventy_eight_classes() {
        let games = enumerate_games();
        assert_eq!(games.len(), 78);
        assert!(games.windows(2).all(|w| w[0].orbit_key < w[1].orbit_key));
        let item6 = canonical_form(&parse_game_line("4 1 3 2 -- 2 1 3 4").unwrap());
        assert!(games.contains(&item6));
    }
}
