//! Exact-arithmetic domain types: payoff matrices, mixed strategies,
//! one-sided strategy parameters, adjacent-swap families and case tags.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used for every payoff and probability.
pub type Rational = Ratio<i64>;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Nearest `f64`, for display columns and grid oracles only.
pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// An `n × m` matrix of non-negative rational payoffs stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PayoffMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl PayoffMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "shape {rows}x{cols} has an empty dimension"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.is_negative()) {
            return Err(Error::InvalidMatrix(format!("negative payoff {bad}")));
        }
        Ok(PayoffMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from integer rows. Ragged input is rejected.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied().map(rat))
            .collect();
        PayoffMatrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries[row * self.cols + col]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_2x2(&self) -> bool {
        self.rows == 2 && self.cols == 2
    }

    pub(crate) fn require_2x2(&self) -> Result<()> {
        if self.is_2x2() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "expected a 2x2 matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// `scale · M + shift · J`, where `J` is the all-ones matrix.
    pub fn affine(&self, scale: Rational, shift: Rational) -> Result<Self> {
        let entries = self.entries.iter().map(|e| *e * scale + shift).collect();
        PayoffMatrix::new(self.rows, self.cols, entries)
    }
}

impl fmt::Display for PayoffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Parses `[[a,b],[c,d]]`; entries are integers or `p/q`, whitespace is ignored.
impl FromStr for PayoffMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = LiteralParser {
            bytes: s.as_bytes(),
            pos: 0,
            last: 0,
        };
        p.expect(b'[')?;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        loop {
            p.expect(b'[')?;
            let mut row = Vec::new();
            loop {
                row.push(p.number()?);
                match p.next_non_ws() {
                    Some(b',') => continue,
                    Some(b']') => break,
                    _ => return Err(Error::parse(p.last, "expected ',' or ']' in row")),
                }
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::parse(p.pos, "row length differs from first row"));
                }
            }
            rows.push(row);
            match p.next_non_ws() {
                Some(b',') => continue,
                Some(b']') => break,
                _ => return Err(Error::parse(p.last, "expected ',' or ']' after row")),
            }
        }
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(Error::parse(p.pos, "trailing characters"));
        }
        let cols = rows[0].len();
        let n = rows.len();
        PayoffMatrix::new(n, cols, rows.into_iter().flatten().collect())
    }
}

struct LiteralParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    /// Offset of the byte most recently returned by `next_non_ws`.
    last: usize,
}

impl LiteralParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next_non_ws(&mut self) -> Option<u8> {
        self.skip_ws();
        self.last = self.pos;
        let b = self.bytes.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn expect(&mut self, want: u8) -> Result<()> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(&b) if b == want => {
                self.pos += 1;
                Ok(())
            }
            Some(&b) => Err(Error::parse(
                self.pos,
                format!("expected '{}', found '{}'", want as char, b as char),
            )),
            None => Err(Error::parse(
                self.pos,
                format!("expected '{}', found end of input", want as char),
            )),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
        text.parse::<i64>()
            .map_err(|_| Error::parse(start, "expected an integer"))
    }

    fn number(&mut self) -> Result<Rational> {
        let numer = self.integer()?;
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let at = self.pos;
            let denom = self.integer()?;
            if denom <= 0 {
                return Err(Error::parse(at, "denominator must be positive"));
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(rat(numer))
        }
    }
}

/// A 2×2 matrix holding each of 1, 2, 3, 4 exactly once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrictOrdinalMatrix {
    cells: [[u8; 2]; 2],
}

impl StrictOrdinalMatrix {
    pub fn new(cells: [[u8; 2]; 2]) -> Result<Self> {
        let mut seen = [false; 4];
        for &v in cells.iter().flatten() {
            if !(1..=4).contains(&v) || seen[(v - 1) as usize] {
                return Err(Error::InvalidMatrix(format!(
                    "{cells:?} is not a strict ordinal 2x2 matrix"
                )));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(StrictOrdinalMatrix { cells })
    }

    /// Column-wise fill: `[c0, c1, c2, c3]` becomes `[[c0, c2], [c1, c3]]`.
    pub fn from_column_wise(values: [u8; 4]) -> Result<Self> {
        StrictOrdinalMatrix::new([[values[0], values[2]], [values[1], values[3]]])
    }

    pub fn from_payoff(m: &PayoffMatrix) -> Result<Self> {
        m.require_2x2()?;
        let mut cells = [[0u8; 2]; 2];
        for (r, row) in cells.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let v = m.get(r, c);
                if !v.is_integer() || v < rat(1) || v > rat(4) {
                    return Err(Error::InvalidMatrix(format!(
                        "{m} is not a strict ordinal 2x2 matrix"
                    )));
                }
                *cell = v.to_integer() as u8;
            }
        }
        StrictOrdinalMatrix::new(cells)
    }

    pub fn cells(&self) -> [[u8; 2]; 2] {
        self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row][col]
    }

    pub fn column_wise(&self) -> [u8; 4] {
        let c = self.cells;
        [c[0][0], c[1][0], c[0][1], c[1][1]]
    }

    pub fn payoff(&self) -> PayoffMatrix {
        let entries = self
            .cells
            .iter()
            .flatten()
            .map(|&v| rat(v as i64))
            .collect();
        PayoffMatrix {
            rows: 2,
            cols: 2,
            entries,
        }
    }

    pub fn transpose(&self) -> Self {
        let c = self.cells;
        StrictOrdinalMatrix {
            cells: [[c[0][0], c[1][0]], [c[0][1], c[1][1]]],
        }
    }

    pub fn swap_rows(&self) -> Self {
        let c = self.cells;
        StrictOrdinalMatrix {
            cells: [c[1], c[0]],
        }
    }

    pub fn swap_cols(&self) -> Self {
        let c = self.cells;
        StrictOrdinalMatrix {
            cells: [[c[0][1], c[0][0]], [c[1][1], c[1][0]]],
        }
    }

    /// Exchanges the ordinal values `k` and `k + 1` in place, `k ∈ {1, 2, 3}`.
    pub fn swap_adjacent(&self, k: u8) -> Result<Self> {
        if !(1..=3).contains(&k) {
            return Err(Error::OutOfRange(format!(
                "adjacent swap index {k} not in 1..=3"
            )));
        }
        let mut cells = self.cells;
        for v in cells.iter_mut().flatten() {
            if *v == k {
                *v = k + 1;
            } else if *v == k + 1 {
                *v = k;
            }
        }
        Ok(StrictOrdinalMatrix { cells })
    }
}

impl fmt::Display for StrictOrdinalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.cells;
        write!(f, "[[{},{}],[{},{}]]", c[0][0], c[0][1], c[1][0], c[1][1])
    }
}

impl FromStr for StrictOrdinalMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrictOrdinalMatrix::from_payoff(&s.parse()?)
    }
}

/// A probability vector on the simplex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedStrategy(Vec<Rational>);

impl MixedStrategy {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidStrategy("no components".into()));
        }
        if probs
            .iter()
            .any(|p| p.is_negative() || *p > Rational::one())
        {
            return Err(Error::InvalidStrategy(format!(
                "component outside [0,1] in {probs:?}"
            )));
        }
        let sum: Rational = probs.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidStrategy(format!("components sum to {sum}")));
        }
        Ok(MixedStrategy(probs))
    }

    pub fn pure(len: usize, index: usize) -> Self {
        let mut probs = vec![Rational::zero(); len];
        probs[index] = Rational::one();
        MixedStrategy(probs)
    }

    /// `[p, 1 − p]` for a two-strategy player.
    pub fn from_param(p: Rational) -> Result<Self> {
        MixedStrategy::new(vec![p, Rational::one() - p])
    }

    pub fn probs(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight on the first strategy.
    pub fn first(&self) -> Rational {
        self.0[0]
    }

    pub fn is_pure(&self) -> bool {
        self.0.iter().all(|p| p.is_zero() || p.is_one())
    }
}

impl fmt::Display for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Which side a strategy parameter is approached from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Exact,
    /// Limit from below, `value⁻`.
    Left,
    /// Limit from above, `value⁺`.
    Right,
}

/// A strategy parameter in `[0, 1]`, possibly a one-sided limit when a
/// supremum is approached but not attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SidedParam {
    value: Rational,
    side: Side,
}

impl SidedParam {
    pub fn new(value: Rational, side: Side) -> Result<Self> {
        if value.is_negative() || value > Rational::one() {
            return Err(Error::OutOfRange(format!("parameter {value} not in [0,1]")));
        }
        match side {
            Side::Left if value.is_zero() => Err(Error::OutOfRange(
                "left limit at 0 leaves the interval".into(),
            )),
            Side::Right if value.is_one() => Err(Error::OutOfRange(
                "right limit at 1 leaves the interval".into(),
            )),
            _ => Ok(SidedParam { value, side }),
        }
    }

    pub fn exact(value: Rational) -> Result<Self> {
        SidedParam::new(value, Side::Exact)
    }

    pub fn value(&self) -> Rational {
        self.value
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn strategy(&self) -> MixedStrategy {
        MixedStrategy(vec![self.value, Rational::one() - self.value])
    }
}

impl fmt::Display for SidedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Exact => write!(f, "{}", self.value),
            Side::Left => write!(f, "{}-", self.value),
            Side::Right => write!(f, "{}+", self.value),
        }
    }
}

/// `[B, B12, B23, B34]`: the matrix itself followed by its three adjacent swaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameFamily {
    members: [StrictOrdinalMatrix; 4],
}

impl GameFamily {
    pub const LABELS: [&'static str; 4] = ["B", "B12", "B23", "B34"];

    pub fn of(base: &StrictOrdinalMatrix) -> Self {
        let swap = |k| base.swap_adjacent(k).expect("k in range");
        GameFamily {
            members: [*base, swap(1), swap(2), swap(3)],
        }
    }

    /// Builds a family from arbitrary members. Used for degenerate probes
    /// such as four identical matrices; the adjacent-swap invariant is not
    /// checked.
    pub fn from_members(members: [StrictOrdinalMatrix; 4]) -> Self {
        GameFamily { members }
    }

    pub fn members(&self) -> &[StrictOrdinalMatrix; 4] {
        &self.members
    }

    pub fn base(&self) -> &StrictOrdinalMatrix {
        &self.members[0]
    }

    pub fn position(&self, m: &StrictOrdinalMatrix) -> Option<usize> {
        self.members.iter().position(|x| x == m)
    }

    /// Resolves `B`, `B12`, `B23`, `B34` (case-insensitive) or a matrix literal.
    pub fn select(&self, selector: &str) -> Result<usize> {
        let trimmed = selector.trim();
        if let Some(i) = Self::LABELS
            .iter()
            .position(|l| l.eq_ignore_ascii_case(trimmed))
        {
            return Ok(i);
        }
        let m: StrictOrdinalMatrix = trimmed.parse()?;
        self.position(&m).ok_or_else(|| Error::NotInFamily {
            matrix: m.to_string(),
            members: self.describe(),
        })
    }

    pub fn describe(&self) -> String {
        Self::LABELS
            .iter()
            .zip(self.members.iter())
            .map(|(l, m)| format!("{l}={m}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn family_of(b: &StrictOrdinalMatrix) -> GameFamily {
    GameFamily::of(b)
}

pub fn swap_adjacent(b: &StrictOrdinalMatrix, k: u8) -> Result<StrictOrdinalMatrix> {
    b.swap_adjacent(k)
}

/// What player 1 believes (first letter) and what player 2 believes
/// player 1 believes (second letter): Exact matrix or Family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameCase {
    EE,
    EF,
    FE,
    FF,
}

impl GameCase {
    pub const ALL: [GameCase; 4] = [GameCase::EE, GameCase::EF, GameCase::FE, GameCase::FF];

    pub fn as_str(&self) -> &'static str {
        match self {
            GameCase::EE => "EE",
            GameCase::EF => "EF",
            GameCase::FE => "FE",
            GameCase::FF => "FF",
        }
    }
}

impl fmt::Display for GameCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GameCase::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown case '{s}'")))
    }
}

/// How player 2 resolves indifference between its two columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum TieBreakRule {
    /// The column worst for player 1.
    #[default]
    Pessimistic,
    /// The column best for player 1.
    Optimistic,
    /// Mix both columns equally.
    Uniform,
    /// Always the first column.
    LowestIndex,
}

impl TieBreakRule {
    pub const ALL: [TieBreakRule; 4] = [
        TieBreakRule::Pessimistic,
        TieBreakRule::Optimistic,
        TieBreakRule::Uniform,
        TieBreakRule::LowestIndex,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TieBreakRule::Pessimistic => "pessimistic",
            TieBreakRule::Optimistic => "optimistic",
            TieBreakRule::Uniform => "uniform",
            TieBreakRule::LowestIndex => "lowest-index",
        }
    }
}

impl fmt::Display for TieBreakRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TieBreakRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TieBreakRule::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown tie-break rule '{s}'")))
    }
}

/// The bilinear form `xᵀ M y`.
pub fn payoff(x: &MixedStrategy, m: &PayoffMatrix, y: &MixedStrategy) -> Result<Rational> {
    if x.len() != m.rows() || y.len() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "x has {} components, y has {}, matrix is {}x{}",
            x.len(),
            y.len(),
            m.rows(),
            m.cols()
        )));
    }
    let mut total = Rational::zero();
    for (i, xi) in x.probs().iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.probs().iter().enumerate() {
            total += *xi * m.get(i, j) * *yj;
        }
    }
    Ok(total)
}
