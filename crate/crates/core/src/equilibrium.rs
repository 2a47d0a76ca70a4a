//! Nash equilibria and best responses for 2×2 bimatrix games.
//!
//! Strategies are written with one free parameter each: player 1 plays
//! `x = [a, 1 − a]`, player 2 plays `y = [b, 1 − b]`. Every payoff is then
//! bilinear in `(a, b)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::types::{MixedStrategy, PayoffMatrix, Rational, Side, SidedParam, TieBreakRule};

/// `c0 + ca·a + cb·b + cab·a·b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BilinearPayoff {
    pub c0: Rational,
    pub ca: Rational,
    pub cb: Rational,
    pub cab: Rational,
}

impl BilinearPayoff {
    pub fn eval(&self, a: Rational, b: Rational) -> Rational {
        self.c0 + self.ca * a + self.cb * b + self.cab * a * b
    }

    /// Coefficient of `b` at a fixed `a`; its sign decides player 2's column.
    pub fn b_slope(&self, a: Rational) -> Rational {
        self.cb + self.cab * a
    }

    /// Coefficient of `a` at a fixed `b`; its sign decides player 1's row.
    pub fn a_slope(&self, b: Rational) -> Rational {
        self.ca + self.cab * b
    }
}

pub fn bilinear_form(m: &PayoffMatrix) -> Result<BilinearPayoff> {
    m.require_2x2()?;
    let (m11, m12, m21, m22) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    Ok(BilinearPayoff {
        c0: m22,
        ca: m12 - m22,
        cb: m21 - m22,
        cab: m11 - m12 - m21 + m22,
    })
}

/// Player 2's choice at a given `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Response {
    pub b: Rational,
    /// Player 1's payoff (a limit when `a` is sided).
    pub p1: Rational,
    /// Whether player 2 was indifferent and the tie-break rule decided.
    pub tie: bool,
}

/// Sign of player 2's `b` coefficient at `a`, reading one-sided limits from
/// the adjacent open region.
fn slope_sign(form: &BilinearPayoff, a: &SidedParam) -> i8 {
    let s = form.b_slope(a.value());
    let sign = |r: Rational| -> i8 {
        if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        }
    };
    match (sign(s), a.side()) {
        (0, Side::Left) => -sign(form.cab),
        (0, Side::Right) => sign(form.cab),
        (s, _) => s,
    }
}

/// Player 2's best response column weight `b` for matrix `r` against `a`.
///
/// `p1_matrix` is only consulted to score the tie-break rules.
pub fn best_response_b(
    r: &PayoffMatrix,
    a: &SidedParam,
    rule: TieBreakRule,
    p1_matrix: &PayoffMatrix,
) -> Result<Response> {
    let r_form = bilinear_form(r)?;
    let a_form = bilinear_form(p1_matrix)?;
    Ok(respond(&r_form, &a_form, a, rule))
}

pub(crate) fn respond(
    r_form: &BilinearPayoff,
    a_form: &BilinearPayoff,
    a: &SidedParam,
    rule: TieBreakRule,
) -> Response {
    let av = a.value();
    let p1 = |b: Rational| a_form.eval(av, b);
    let pick = |b: Rational, tie: bool| Response { b, p1: p1(b), tie };
    match slope_sign(r_form, a) {
        1 => pick(Rational::one(), false),
        -1 => pick(Rational::zero(), false),
        _ => {
            let (one, zero) = (Rational::one(), Rational::zero());
            let b = match rule {
                TieBreakRule::Pessimistic if p1(zero) < p1(one) => zero,
                TieBreakRule::Optimistic if p1(zero) > p1(one) => zero,
                TieBreakRule::Uniform => Rational::new(1, 2),
                _ => one,
            };
            pick(b, true)
        }
    }
}

/// Where player 2's best response switches as `a` sweeps `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Breakpoint {
    /// `b = below` for `a < at`, `b = above` for `a > at`.
    Switch {
        at: Rational,
        below: Rational,
        above: Rational,
    },
    /// The response is the same pure column on all of `(0, 1)`.
    Constant(Rational),
    /// Player 2 is indifferent for every `a`; only possible for matrices
    /// with tied entries.
    Indifferent,
}

impl Breakpoint {
    pub fn at(&self) -> Option<Rational> {
        match self {
            Breakpoint::Switch { at, .. } => Some(*at),
            _ => None,
        }
    }
}

pub fn breakpoint_of(r: &PayoffMatrix) -> Result<Breakpoint> {
    Ok(breakpoint_from_form(&bilinear_form(r)?))
}

pub(crate) fn breakpoint_from_form(f: &BilinearPayoff) -> Breakpoint {
    let col = |positive: bool| {
        if positive {
            Rational::one()
        } else {
            Rational::zero()
        }
    };
    if f.cab.is_zero() {
        return if f.cb.is_zero() {
            Breakpoint::Indifferent
        } else {
            Breakpoint::Constant(col(f.cb.is_positive()))
        };
    }
    let root = -f.cb / f.cab;
    if root > Rational::zero() && root < Rational::one() {
        Breakpoint::Switch {
            at: root,
            below: col(f.cab.is_negative()),
            above: col(f.cab.is_positive()),
        }
    } else {
        let mid = f.b_slope(Rational::new(1, 2));
        Breakpoint::Constant(col(mid.is_positive()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquilibriumKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
    pub p1: Rational,
    pub p2: Rational,
    pub kind: EquilibriumKind,
}

impl Equilibrium {
    /// Player 1's parameter `a = x₁`.
    pub fn a(&self) -> Rational {
        self.x.first()
    }

    pub fn b(&self) -> Rational {
        self.y.first()
    }
}

/// All pure equilibria in row-major cell order, then the completely mixed
/// equilibrium if both indifference conditions have interior solutions.
pub fn nash_equilibria(a: &PayoffMatrix, b: &PayoffMatrix) -> Result<Vec<Equilibrium>> {
    let fa = bilinear_form(a)?;
    let fb = bilinear_form(b)?;
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let row_ok = a.get(i, j) >= a.get(1 - i, j);
            let col_ok = b.get(i, j) >= b.get(i, 1 - j);
            if row_ok && col_ok {
                let x = MixedStrategy::pure(2, i);
                let y = MixedStrategy::pure(2, j);
                out.push(Equilibrium {
                    p1: a.get(i, j),
                    p2: b.get(i, j),
                    x,
                    y,
                    kind: EquilibriumKind::Pure,
                });
            }
        }
    }
    let interior = |r: Rational| r > Rational::zero() && r < Rational::one();
    if !fb.cab.is_zero() && !fa.cab.is_zero() {
        let a_star = -fb.cb / fb.cab;
        let b_star = -fa.ca / fa.cab;
        if interior(a_star) && interior(b_star) {
            out.push(Equilibrium {
                x: MixedStrategy::from_param(a_star)?,
                y: MixedStrategy::from_param(b_star)?,
                p1: fa.eval(a_star, b_star),
                p2: fb.eval(a_star, b_star),
                kind: EquilibriumKind::Mixed,
            });
        }
    }
    Ok(out)
}

/// Which equilibrium to use when a game has several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum SelectionRule {
    /// Pure equilibria before mixed, then highest `p1`, then list order.
    #[default]
    P1MaxPureFirst,
    /// Highest `p1` over all equilibria, then list order.
    P1Max,
    /// Lowest `p1` over all equilibria, then list order.
    P1Min,
    /// First in list order.
    First,
    /// Last in list order (the mixed equilibrium when there is one).
    Last,
}

impl SelectionRule {
    pub const ALL: [SelectionRule; 5] = [
        SelectionRule::P1MaxPureFirst,
        SelectionRule::P1Max,
        SelectionRule::P1Min,
        SelectionRule::First,
        SelectionRule::Last,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SelectionRule::P1MaxPureFirst => "p1-max-pure-first",
            SelectionRule::P1Max => "p1-max",
            SelectionRule::P1Min => "p1-min",
            SelectionRule::First => "first",
            SelectionRule::Last => "last",
        }
    }
}

impl fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SelectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SelectionRule::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown selection rule '{s}'")))
    }
}

pub fn select_equilibrium(eqs: &[Equilibrium], rule: SelectionRule) -> Result<&Equilibrium> {
    if eqs.is_empty() {
        return Err(Error::Empty("equilibrium list"));
    }
    let chosen = match rule {
        SelectionRule::P1MaxPureFirst => {
            let has_pure = eqs.iter().any(|e| e.kind == EquilibriumKind::Pure);
            extreme_p1(
                eqs.iter()
                    .filter(|e| !has_pure || e.kind == EquilibriumKind::Pure),
                true,
            )
        }
        SelectionRule::P1Max => extreme_p1(eqs.iter(), true),
        SelectionRule::P1Min => extreme_p1(eqs.iter(), false),
        SelectionRule::First => &eqs[0],
        SelectionRule::Last => &eqs[eqs.len() - 1],
    };
    Ok(chosen)
}

/// First equilibrium with the largest (or smallest) `p1`.
fn extreme_p1<'a>(
    mut pool: impl Iterator<Item = &'a Equilibrium>,
    maximize: bool,
) -> &'a Equilibrium {
    let mut best = pool.next().expect("non-empty pool");
    for e in pool {
        if (maximize && e.p1 > best.p1) || (!maximize && e.p1 < best.p1) {
            best = e;
        }
    }
    best
}

/// Player 1's equilibrium payoff when player 2's true matrix `r` is common knowledge.
pub fn complete_info_payoff(
    a: &PayoffMatrix,
    r: &PayoffMatrix,
    rule: SelectionRule,
) -> Result<Rational> {
    let eqs = nash_equilibria(a, r)?;
    Ok(select_equilibrium(&eqs, rule)?.p1)
}
