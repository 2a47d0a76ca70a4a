//! Player 1's strategy and payoff in the four wrong-game cases.
//!
//! * **EE**: player 1 plays its Nash strategy for `(A, B)`; player 2 best
//!   responds to it with its true matrix `R`.
//! * **FE**: player 2 still best responds to the Nash strategy, so player 1
//!   predicts one response per family member and solves the max-min
//!   linear program over the resulting payoff vectors.
//! * **FF**: both sides reason about the whole family; player 1 plays the
//!   max-min strategy of the breakpoint sweep and player 2 best responds to
//!   it.
//! * **EF**: player 1 plays the Nash strategy, player 2 responds as though
//!   player 1 had played the FF strategy.
//!
//! Player 2's best response against `x = [a, 1 − a]` is a step function of
//! `a`, so player 1's payoff under each family member is piecewise linear.
//! Suprema that are only approached at a switch point are reported as
//! one-sided limits.

use num_traits::{One, Zero};

use crate::equilibrium::{
    bilinear_form, breakpoint_from_form, nash_equilibria, respond, select_equilibrium,
    BilinearPayoff, Breakpoint, SelectionRule,
};
use crate::error::{Error, Result};
use crate::types::{
    GameCase, GameFamily, Rational, Side, SidedParam, StrictOrdinalMatrix, TieBreakRule,
};

/// How player 1's strategy under an exactly known opponent matrix is found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum Concept {
    /// A Nash equilibrium of `(A, B)`, chosen by the selection rule.
    #[default]
    Nash,
    /// Player 1 commits to the `a` maximizing its payoff against player 2's
    /// best response (the sweep of [`m_function`] over a one-member family).
    Leader,
}

impl Concept {
    pub const ALL: [Concept; 2] = [Concept::Nash, Concept::Leader];

    pub fn as_str(&self) -> &'static str {
        match self {
            Concept::Nash => "nash",
            Concept::Leader => "leader",
        }
    }
}

impl std::str::FromStr for Concept {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Concept::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown solution concept '{s}'")))
    }
}

/// The protocol knobs every solver needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Rules {
    pub tie: TieBreakRule,
    pub selection: SelectionRule,
    pub concept: Concept,
}

/// A point examined by an optimizer together with its objective value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub at: SidedParam,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxMinResult {
    pub x: SidedParam,
    pub value: Rational,
    /// Members (or vectors) whose payoff equals the minimum at `x`.
    pub active_set: Vec<usize>,
    /// Player 1's payoff under each member at `x`.
    pub member_values: Vec<Rational>,
    pub candidates: Vec<Candidate>,
}

/// How the per-member payoffs are combined into one objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Min,
    Mean,
}

impl Aggregate {
    fn apply(self, values: &[Rational]) -> Rational {
        match self {
            Aggregate::Min => *values.iter().min().expect("non-empty"),
            Aggregate::Mean => {
                values.iter().copied().sum::<Rational>()
                    / Rational::from_integer(values.len() as i64)
            }
        }
    }
}

fn better(c: &Candidate, best: &Candidate) -> bool {
    let side_rank = |s: Side| match s {
        Side::Exact => 0,
        Side::Left => 1,
        Side::Right => 2,
    };
    (
        c.value,
        std::cmp::Reverse(c.at.value()),
        std::cmp::Reverse(side_rank(c.at.side())),
    ) > (
        best.value,
        std::cmp::Reverse(best.at.value()),
        std::cmp::Reverse(side_rank(best.at.side())),
    )
}

fn active(values: &[Rational], min: Rational) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == min)
        .map(|(i, _)| i)
        .collect()
}

/// Crossing of `p + q·a` and `r + s·a` strictly inside `(lo, hi)`, or on the
/// closed interval when `closed`.
fn crossing(
    (p, q): (Rational, Rational),
    (r, s): (Rational, Rational),
    lo: Rational,
    hi: Rational,
    closed: bool,
) -> Option<Rational> {
    if q == s {
        return None;
    }
    let a = (r - p) / (q - s);
    let inside = if closed {
        a >= lo && a <= hi
    } else {
        a > lo && a < hi
    };
    inside.then_some(a)
}

/// Exact solution of `max_{x ∈ Δ} min_j xᵀ v_j` for two-component vectors.
///
/// With `x = [a, 1 − a]` each objective is a line in `a`; the optimum of
/// their lower envelope lies at an endpoint or at a pairwise crossing.
/// Ties go to the smaller `a`.
pub fn maxmin_over_vectors(vectors: &[[Rational; 2]]) -> Result<MaxMinResult> {
    if vectors.is_empty() {
        return Err(Error::Empty("payoff vector list"));
    }
    let (zero, one) = (Rational::zero(), Rational::one());
    let lines: Vec<(Rational, Rational)> = vectors.iter().map(|v| (v[1], v[0] - v[1])).collect();
    let mut points = vec![zero, one];
    for (i, li) in lines.iter().enumerate() {
        for lj in &lines[i + 1..] {
            points.extend(crossing(*li, *lj, zero, one, true));
        }
    }
    points.sort();
    points.dedup();

    let eval = |a: Rational| -> Vec<Rational> { lines.iter().map(|(p, q)| *p + *q * a).collect() };
    let candidates: Vec<Candidate> = points
        .iter()
        .map(|&a| Candidate {
            at: SidedParam::exact(a).expect("a in [0,1]"),
            value: Aggregate::Min.apply(&eval(a)),
        })
        .collect();
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if better(c, &best) {
            best = *c;
        }
    }
    let member_values = eval(best.at.value());
    Ok(MaxMinResult {
        x: best.at,
        value: best.value,
        active_set: active(&member_values, best.value),
        member_values,
        candidates,
    })
}

/// Sweeps player 1's parameter over `[0, 1]` and returns the supremum of the
/// aggregated payoff, where each member's payoff follows player 2's best
/// response under that member.
pub(crate) fn envelope_optimum(
    a_form: &BilinearPayoff,
    member_forms: &[BilinearPayoff],
    tie: TieBreakRule,
    aggregate: Aggregate,
) -> MaxMinResult {
    let (zero, one) = (Rational::zero(), Rational::one());
    let mut splits = vec![zero, one];
    let mut any_indifferent = false;
    for f in member_forms {
        match breakpoint_from_form(f) {
            Breakpoint::Switch { at, .. } => splits.push(at),
            Breakpoint::Indifferent => any_indifferent = true,
            Breakpoint::Constant(_) => {}
        }
    }
    // An indifferent member resolved against player 1's own payoff changes
    // column where player 1 is itself indifferent between columns.
    if any_indifferent && !a_form.cab.is_zero() {
        let root = -a_form.cb / a_form.cab;
        if root > zero && root < one {
            splits.push(root);
        }
    }
    splits.sort();
    splits.dedup();

    let member_values = |at: &SidedParam| -> Vec<Rational> {
        member_forms
            .iter()
            .map(|f| respond(f, a_form, at, tie).p1)
            .collect()
    };
    let evaluate = |at: SidedParam| Candidate {
        at,
        value: aggregate.apply(&member_values(&at)),
    };

    let mut candidates = Vec::new();
    for &s in &splits {
        candidates.push(evaluate(SidedParam::exact(s).expect("in [0,1]")));
    }
    for w in splits.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        candidates.push(evaluate(SidedParam::new(lo, Side::Right).expect("lo < 1")));
        candidates.push(evaluate(SidedParam::new(hi, Side::Left).expect("hi > 0")));
        // Inside the open interval every member's response is fixed, so each
        // payoff is a line in `a`; the envelope can peak where two cross.
        let mid = SidedParam::exact((lo + hi) / 2).expect("in [0,1]");
        let lines: Vec<(Rational, Rational)> = member_forms
            .iter()
            .map(|f| {
                let b = respond(f, a_form, &mid, tie).b;
                (a_form.c0 + a_form.cb * b, a_form.a_slope(b))
            })
            .collect();
        let mut crossings: Vec<Rational> = Vec::new();
        for (i, li) in lines.iter().enumerate() {
            for lj in &lines[i + 1..] {
                crossings.extend(crossing(*li, *lj, lo, hi, false));
            }
        }
        crossings.sort();
        crossings.dedup();
        for c in crossings {
            candidates.push(evaluate(SidedParam::exact(c).expect("in (0,1)")));
        }
    }

    let mut best = candidates[0];
    for c in &candidates[1..] {
        if better(c, &best) {
            best = *c;
        }
    }
    let values = member_values(&best.at);
    let min = Aggregate::Min.apply(&values);
    MaxMinResult {
        x: best.at,
        value: best.value,
        active_set: active(&values, min),
        member_values: values,
        candidates,
    }
}

fn forms_of(family: &GameFamily) -> Vec<BilinearPayoff> {
    family
        .members()
        .iter()
        .map(|m| bilinear_form(&m.payoff()).expect("2x2"))
        .collect()
}

/// Player 1's max-min strategy against the worst family member.
pub fn m_function(a: &StrictOrdinalMatrix, family: &GameFamily, tie: TieBreakRule) -> MaxMinResult {
    let a_form = bilinear_form(&a.payoff()).expect("2x2");
    envelope_optimum(&a_form, &forms_of(family), tie, Aggregate::Min)
}

/// Like [`m_function`] but maximizing the average over equally likely members.
pub fn average_family_optimum(
    a: &StrictOrdinalMatrix,
    family: &GameFamily,
    tie: TieBreakRule,
) -> MaxMinResult {
    let a_form = bilinear_form(&a.payoff()).expect("2x2");
    envelope_optimum(&a_form, &forms_of(family), tie, Aggregate::Mean)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    /// Player 1's Nash parameter for `(A, B)` where the case uses it.
    pub x_ee: Option<SidedParam>,
    /// Switch point of each family member, in family order.
    pub breakpoints: Vec<Breakpoint>,
    /// The max-min or envelope solve behind the case, if any.
    pub optimizer: Option<MaxMinResult>,
    /// Strategy player 2 assumes player 1 plays.
    pub x_model: SidedParam,
    /// Player 2 was indifferent at the modelled strategy.
    pub tie: bool,
    /// Payoff when a sided parameter is evaluated exactly at its value with
    /// the tie-break rule, instead of as a limit.
    pub p1_at_exact_point: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSolution {
    pub case: GameCase,
    pub x_actual: SidedParam,
    /// Player 2's weight on its first column.
    pub y_actual: Rational,
    pub p1: Rational,
    pub diagnostics: Diagnostics,
}

/// A game `(A, B)` prepared for repeated solves against members of `F(B)`.
#[derive(Debug, Clone)]
pub struct WrongGame {
    a: StrictOrdinalMatrix,
    family: GameFamily,
    a_form: BilinearPayoff,
    member_forms: Vec<BilinearPayoff>,
    rules: Rules,
    x_ee: SidedParam,
}

impl WrongGame {
    pub fn new(a: StrictOrdinalMatrix, b: StrictOrdinalMatrix, rules: Rules) -> Result<Self> {
        let family = GameFamily::of(&b);
        let a_form = bilinear_form(&a.payoff())?;
        let x_ee = match rules.concept {
            Concept::Nash => {
                let eqs = nash_equilibria(&a.payoff(), &b.payoff())?;
                SidedParam::exact(select_equilibrium(&eqs, rules.selection)?.a())?
            }
            Concept::Leader => {
                let bf = bilinear_form(&b.payoff())?;
                envelope_optimum(&a_form, &[bf], rules.tie, Aggregate::Min).x
            }
        };
        Ok(WrongGame {
            a,
            family,
            a_form,
            member_forms: forms_of(&family),
            rules,
            x_ee,
        })
    }

    pub fn family(&self) -> &GameFamily {
        &self.family
    }

    pub fn x_ee(&self) -> SidedParam {
        self.x_ee
    }

    /// Player 1's payoff when the true matrix (member `r_index`) is known.
    pub fn complete_info_payoff(&self, r_index: usize) -> Result<Rational> {
        let r = self.family.members()[r_index];
        match self.rules.concept {
            Concept::Nash => crate::equilibrium::complete_info_payoff(
                &self.a.payoff(),
                &r.payoff(),
                self.rules.selection,
            ),
            Concept::Leader => Ok(envelope_optimum(
                &self.a_form,
                &[self.member_forms[r_index]],
                self.rules.tie,
                Aggregate::Min,
            )
            .value),
        }
    }

    pub fn r_index(&self, r: &StrictOrdinalMatrix) -> Result<usize> {
        self.family.position(r).ok_or_else(|| Error::NotInFamily {
            matrix: r.to_string(),
            members: self.family.describe(),
        })
    }

    fn breakpoints(&self) -> Vec<Breakpoint> {
        self.member_forms.iter().map(breakpoint_from_form).collect()
    }

    pub fn m_function(&self) -> MaxMinResult {
        envelope_optimum(
            &self.a_form,
            &self.member_forms,
            self.rules.tie,
            Aggregate::Min,
        )
    }

    pub fn average_optimum(&self) -> MaxMinResult {
        envelope_optimum(
            &self.a_form,
            &self.member_forms,
            self.rules.tie,
            Aggregate::Mean,
        )
    }

    /// Player 1's payoff vectors `A·y_j` for player 2's responses to the
    /// Nash strategy under each member.
    pub fn fe_vectors(&self) -> Vec<[Rational; 2]> {
        let a_m = self.a.payoff();
        let x = self.x_ee;
        self.member_forms
            .iter()
            .map(|f| {
                let b = respond(f, &self.a_form, &x, self.rules.tie).b;
                let nb = Rational::one() - b;
                [
                    a_m.get(0, 0) * b + a_m.get(0, 1) * nb,
                    a_m.get(1, 0) * b + a_m.get(1, 1) * nb,
                ]
            })
            .collect()
    }

    /// Player 2 (true matrix at `r_index`) responds to `model`; player 1
    /// actually plays `actual`.
    fn play(
        &self,
        case: GameCase,
        r_index: usize,
        actual: SidedParam,
        model: SidedParam,
        optimizer: Option<MaxMinResult>,
    ) -> CaseSolution {
        let r_form = &self.member_forms[r_index];
        let resp = respond(r_form, &self.a_form, &model, self.rules.tie);
        let p1 = self.a_form.eval(actual.value(), resp.b);
        let exact_model = SidedParam::exact(model.value()).expect("probability");
        let exact_resp = respond(r_form, &self.a_form, &exact_model, self.rules.tie);
        CaseSolution {
            case,
            x_actual: actual,
            y_actual: resp.b,
            p1,
            diagnostics: Diagnostics {
                x_ee: matches!(case, GameCase::EE | GameCase::EF | GameCase::FE)
                    .then_some(self.x_ee),
                breakpoints: self.breakpoints(),
                optimizer,
                x_model: model,
                tie: resp.tie,
                p1_at_exact_point: self.a_form.eval(actual.value(), exact_resp.b),
            },
        }
    }

    pub fn solve(&self, case: GameCase, r_index: usize) -> Result<CaseSolution> {
        if r_index >= 4 {
            return Err(Error::OutOfRange(format!(
                "family index {r_index} not in 0..4"
            )));
        }
        let x_ee = self.x_ee;
        Ok(match case {
            GameCase::EE => self.play(case, r_index, x_ee, x_ee, None),
            GameCase::FE => {
                let lp = maxmin_over_vectors(&self.fe_vectors())?;
                let x = lp.x;
                self.play(case, r_index, x, x, Some(lp))
            }
            GameCase::FF => {
                let m = self.m_function();
                let x = m.x;
                self.play(case, r_index, x, x, Some(m))
            }
            GameCase::EF => {
                let m = self.m_function();
                let model = m.x;
                self.play(case, r_index, x_ee, model, Some(m))
            }
        })
    }

    pub fn solve_for(&self, case: GameCase, r: &StrictOrdinalMatrix) -> Result<CaseSolution> {
        self.solve(case, self.r_index(r)?)
    }
}

fn solve_case(
    case: GameCase,
    a: &StrictOrdinalMatrix,
    b: &StrictOrdinalMatrix,
    r: &StrictOrdinalMatrix,
    rules: Rules,
) -> Result<CaseSolution> {
    WrongGame::new(*a, *b, rules)?.solve_for(case, r)
}

pub fn solve_ee(
    a: &StrictOrdinalMatrix,
    b: &StrictOrdinalMatrix,
    r: &StrictOrdinalMatrix,
    rules: Rules,
) -> Result<CaseSolution> {
    solve_case(GameCase::EE, a, b, r, rules)
}

pub fn solve_fe(
    a: &StrictOrdinalMatrix,
    b: &StrictOrdinalMatrix,
    r: &StrictOrdinalMatrix,
    rules: Rules,
) -> Result<CaseSolution> {
    solve_case(GameCase::FE, a, b, r, rules)
}

pub fn solve_ff(
    a: &StrictOrdinalMatrix,
    b: &StrictOrdinalMatrix,
    r: &StrictOrdinalMatrix,
    rules: Rules,
) -> Result<CaseSolution> {
    solve_case(GameCase::FF, a, b, r, rules)
}

pub fn solve_ef(
    a: &StrictOrdinalMatrix,
    b: &StrictOrdinalMatrix,
    r: &StrictOrdinalMatrix,
    rules: Rules,
) -> Result<CaseSolution> {
    solve_case(GameCase::EF, a, b, r, rules)
}
