//! Batch evaluation of player 1's loss over the whole catalog.
//!
//! Every canonical game `(A, B)` is solved in each case against each
//! possible true matrix `R ∈ F(B)`; the loss is the complete-information
//! payoff minus the payoff actually obtained.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::catalog::{enumerate_games, CanonicalGame};
use crate::equilibrium::SelectionRule;
use crate::error::{Error, Result};
use crate::robust::{Concept, Rules, WrongGame};
use crate::types::{to_f64, GameCase, Rational, TieBreakRule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossRecord {
    /// 1-based position in the sorted catalog.
    pub game_index: usize,
    pub case: GameCase,
    /// Position of `R` in `[B, B12, B23, B34]`.
    pub r_index: usize,
    pub p1_complete: Rational,
    pub p1_case: Rational,
    pub loss_abs: Rational,
    pub loss_rel: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PerGameReduce {
    Mean,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Population {
    AllGames,
    ChangedGamesOnly,
}

/// How per-record losses become one "average loss" per case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AggregationProtocol {
    pub include_r_equals_b: bool,
    pub per_game_reduce: PerGameReduce,
    pub population: Population,
}

impl Default for AggregationProtocol {
    fn default() -> Self {
        AggregationProtocol {
            include_r_equals_b: false,
            per_game_reduce: PerGameReduce::Mean,
            population: Population::ChangedGamesOnly,
        }
    }
}

impl FromStr for PerGameReduce {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(PerGameReduce::Mean),
            "max" => Ok(PerGameReduce::Max),
            _ => Err(Error::parse(0, format!("unknown per-game reduction '{s}'"))),
        }
    }
}

impl FromStr for Population {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "all" | "all_games" => Ok(Population::AllGames),
            "changed" | "changed_games_only" => Ok(Population::ChangedGamesOnly),
            _ => Err(Error::parse(0, format!("unknown population '{s}'"))),
        }
    }
}

impl AggregationProtocol {
    pub fn all() -> Vec<AggregationProtocol> {
        let mut out = Vec::with_capacity(8);
        for include_r_equals_b in [false, true] {
            for per_game_reduce in [PerGameReduce::Mean, PerGameReduce::Max] {
                for population in [Population::ChangedGamesOnly, Population::AllGames] {
                    out.push(AggregationProtocol {
                        include_r_equals_b,
                        per_game_reduce,
                        population,
                    });
                }
            }
        }
        out
    }

    pub fn r_indices(&self) -> std::ops::Range<usize> {
        if self.include_r_equals_b {
            0..4
        } else {
            1..4
        }
    }
}

impl fmt::Display for AggregationProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R=B {}, per-game {}, {}",
            if self.include_r_equals_b {
                "included"
            } else {
                "excluded"
            },
            match self.per_game_reduce {
                PerGameReduce::Mean => "mean",
                PerGameReduce::Max => "max",
            },
            match self.population {
                Population::AllGames => "all games",
                Population::ChangedGamesOnly => "changed games only",
            }
        )
    }
}

/// Loss records for one game, in (case, r_index) order.
pub fn evaluate_game(
    game_index: usize,
    g: &CanonicalGame,
    protocol: &AggregationProtocol,
    rules: Rules,
) -> Result<Vec<LossRecord>> {
    let wrap = |e: Error| Error::Game {
        index: game_index,
        source: Box::new(e),
    };
    let solver = WrongGame::new(g.game.a, g.game.b, rules).map_err(wrap)?;
    let mut complete = Vec::with_capacity(4);
    for r_index in 0..4 {
        complete.push(solver.complete_info_payoff(r_index).map_err(wrap)?);
    }
    let mut out = Vec::with_capacity(16);
    for case in GameCase::ALL {
        for r_index in protocol.r_indices() {
            let sol = solver.solve(case, r_index).map_err(wrap)?;
            let p1_complete = complete[r_index];
            let loss_abs = p1_complete - sol.p1;
            out.push(LossRecord {
                game_index,
                case,
                r_index,
                p1_complete,
                p1_case: sol.p1,
                loss_abs,
                loss_rel: loss_abs / p1_complete,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    /// Games with zero loss in every case and for every `R`.
    pub unchanged_all: BTreeSet<usize>,
    /// Games with some positive loss in each of the four cases.
    pub worse_all: BTreeSet<usize>,
    /// Games whose positive losses all occur in case EF.
    pub worse_only_ef: BTreeSet<usize>,
}

pub fn partition_observations(records: &[LossRecord]) -> Partition {
    let games: BTreeSet<usize> = records.iter().map(|r| r.game_index).collect();
    let mut p = Partition::default();
    for g in games {
        let recs: Vec<&LossRecord> = records.iter().filter(|r| r.game_index == g).collect();
        let worse_in = |case: GameCase| {
            recs.iter()
                .any(|r| r.case == case && r.loss_abs.is_positive())
        };
        if recs.iter().all(|r| r.loss_abs.is_zero()) {
            p.unchanged_all.insert(g);
        }
        if GameCase::ALL.into_iter().all(worse_in) {
            p.worse_all.insert(g);
        }
        if worse_in(GameCase::EF)
            && !worse_in(GameCase::EE)
            && !worse_in(GameCase::FE)
            && !worse_in(GameCase::FF)
        {
            p.worse_only_ef.insert(g);
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSummary {
    pub case: GameCase,
    pub no_change_count: usize,
    pub changed_count: usize,
    pub average_loss: Rational,
    /// `average_loss` over the complete-information average payoff.
    pub relative_average_loss: Rational,
    pub max_loss: Rational,
    pub min_loss: Rational,
    /// Records with a negative loss, i.e. an improvement for player 1.
    pub improvements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchSummary {
    pub protocol: AggregationProtocol,
    pub rules: Rules,
    pub game_count: usize,
    pub cases: Vec<CaseSummary>,
    /// Mean over all games of the complete-information payoff with `R = B`.
    pub complete_info_average: Rational,
    pub partition: Partition,
    pub records: Vec<LossRecord>,
}

impl BatchSummary {
    pub fn case(&self, case: GameCase) -> &CaseSummary {
        self.cases
            .iter()
            .find(|c| c.case == case)
            .expect("every case is summarised")
    }
}

fn mean(values: &[Rational]) -> Rational {
    if values.is_empty() {
        Rational::zero()
    } else {
        values.iter().copied().sum::<Rational>() / Rational::from_integer(values.len() as i64)
    }
}

fn summarize_case(
    case: GameCase,
    records: &[LossRecord],
    game_count: usize,
    protocol: &AggregationProtocol,
    complete_avg: Rational,
) -> CaseSummary {
    let recs: Vec<&LossRecord> = records.iter().filter(|r| r.case == case).collect();
    let games: BTreeSet<usize> = recs.iter().map(|r| r.game_index).collect();
    let mut per_game = Vec::new();
    let mut changed_count = 0;
    for g in &games {
        let losses: Vec<Rational> = recs
            .iter()
            .filter(|r| r.game_index == *g)
            .map(|r| r.loss_abs)
            .collect();
        let changed = losses.iter().any(|l| !l.is_zero());
        if changed {
            changed_count += 1;
        }
        if changed || protocol.population == Population::AllGames {
            per_game.push(match protocol.per_game_reduce {
                PerGameReduce::Mean => mean(&losses),
                PerGameReduce::Max => *losses.iter().max().expect("records per game"),
            });
        }
    }
    let average_loss = mean(&per_game);
    let losses = recs.iter().map(|r| r.loss_abs);
    CaseSummary {
        case,
        no_change_count: game_count - changed_count,
        changed_count,
        average_loss,
        relative_average_loss: if complete_avg.is_zero() {
            Rational::zero()
        } else {
            average_loss / complete_avg
        },
        max_loss: losses.clone().max().unwrap_or_else(Rational::zero),
        min_loss: losses.min().unwrap_or_else(Rational::zero),
        improvements: recs.iter().filter(|r| r.loss_abs.is_negative()).count(),
    }
}

pub fn summarize(
    records: Vec<LossRecord>,
    complete_info_average: Rational,
    game_count: usize,
    protocol: AggregationProtocol,
    rules: Rules,
) -> BatchSummary {
    let cases = GameCase::ALL
        .iter()
        .map(|c| summarize_case(*c, &records, game_count, &protocol, complete_info_average))
        .collect();
    BatchSummary {
        protocol,
        rules,
        game_count,
        cases,
        complete_info_average,
        partition: partition_observations(&records),
        records,
    }
}

fn all_records(games: &[CanonicalGame], rules: Rules) -> Result<(Vec<LossRecord>, Rational)> {
    let every_r = AggregationProtocol {
        include_r_equals_b: true,
        ..AggregationProtocol::default()
    };
    let mut records = Vec::with_capacity(games.len() * 16);
    let mut complete = Vec::with_capacity(games.len());
    for (i, g) in games.iter().enumerate() {
        records.extend(evaluate_game(i + 1, g, &every_r, rules)?);
        let solver = WrongGame::new(g.game.a, g.game.b, rules)?;
        complete.push(solver.complete_info_payoff(0)?);
    }
    records.sort_by_key(|r| (r.game_index, r.case, r.r_index));
    Ok((records, mean(&complete)))
}

fn summarize_protocol(
    records: &[LossRecord],
    complete_info_average: Rational,
    game_count: usize,
    protocol: AggregationProtocol,
    rules: Rules,
) -> BatchSummary {
    let kept = records
        .iter()
        .filter(|r| protocol.r_indices().contains(&r.r_index))
        .cloned()
        .collect();
    summarize(kept, complete_info_average, game_count, protocol, rules)
}

pub fn run_batch_on(
    games: &[CanonicalGame],
    protocol: AggregationProtocol,
    rules: Rules,
) -> Result<BatchSummary> {
    let (records, complete) = all_records(games, rules)?;
    Ok(summarize_protocol(
        &records,
        complete,
        games.len(),
        protocol,
        rules,
    ))
}

pub fn run_batch(protocol: AggregationProtocol, rules: Rules) -> Result<BatchSummary> {
    run_batch_on(&enumerate_games(), protocol, rules)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum HistogramKind {
    #[serde(rename = "absolute")]
    Absolute,
    #[serde(rename = "relative")]
    Relative,
}

impl HistogramKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            HistogramKind::Absolute => "absolute",
            HistogramKind::Relative => "relative",
        }
    }
}

impl FromStr for HistogramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "absolute" | "abs" => Ok(HistogramKind::Absolute),
            "relative" | "rel" => Ok(HistogramKind::Relative),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("unknown histogram kind '{s}'"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramBin {
    pub lo: Rational,
    pub hi: Rational,
    pub count: usize,
}

pub const DEFAULT_BINS: usize = 12;

/// Fixed-width bins over `[0, 3]` (absolute) or `[0, 1]` (relative), using
/// only records whose loss is non-zero. Bins are `(lo, hi]` except the first,
/// which is closed; negative losses are clamped into the first bin and
/// values above the range into the last.
pub fn histogram(
    records: &[LossRecord],
    case: GameCase,
    kind: HistogramKind,
    bins: usize,
) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::OutOfRange("histogram needs at least one bin".into()));
    }
    let upper = match kind {
        HistogramKind::Absolute => Rational::from_integer(3),
        HistogramKind::Relative => Rational::from_integer(1),
    };
    let width = upper / Rational::from_integer(bins as i64);
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin {
            lo: width * Rational::from_integer(i as i64),
            hi: width * Rational::from_integer(i as i64 + 1),
            count: 0,
        })
        .collect();
    for r in records
        .iter()
        .filter(|r| r.case == case && !r.loss_abs.is_zero())
    {
        let v = match kind {
            HistogramKind::Absolute => r.loss_abs,
            HistogramKind::Relative => r.loss_rel,
        };
        let v = v.max(Rational::zero());
        let idx = ((v / width).ceil().to_integer() - 1).clamp(0, bins as i64 - 1) as usize;
        out[idx].count += 1;
    }
    Ok(out)
}

/// One row of the protocol sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub summary: BatchSummary,
    /// How many of the four no-change counts equal the published ones.
    pub count_matches: usize,
    /// Largest absolute deviation of the four average losses.
    pub max_loss_deviation: f64,
    pub score: f64,
}

/// Values published for the catalog study, in EE, EF, FE, FF order.
pub mod reference {
    pub const NO_CHANGE: [usize; 4] = [44, 56, 44, 44];
    pub const AVERAGE_LOSS: [f64; 4] = [1.8676, 1.7045, 1.3971, 0.9632];
    pub const COMPLETE_INFO_AVERAGE: f64 = 3.481;
    pub const EE_RELATIVE_LOSS: f64 = 0.54;
    pub const UNCHANGED_ALL: usize = 22;
    pub const WORSE_ALL: usize = 44;
    pub const WORSE_ONLY_EF: usize = 12;
    pub const MAX_LOSS: [i64; 4] = [3, 3, 2, 2];
}

fn score_summary(s: &BatchSummary) -> (usize, f64, f64) {
    let mut matches = 0;
    let mut max_dev: f64 = 0.0;
    let mut score = 0.0;
    for (i, case) in GameCase::ALL.iter().enumerate() {
        let c = s.case(*case);
        if c.no_change_count == reference::NO_CHANGE[i] {
            matches += 1;
        }
        let dev = (to_f64(c.average_loss) - reference::AVERAGE_LOSS[i]).abs();
        max_dev = max_dev.max(dev);
        score += dev + (c.no_change_count as f64 - reference::NO_CHANGE[i] as f64).abs();
        score += (to_f64(c.max_loss) - reference::MAX_LOSS[i] as f64).abs();
    }
    score += (to_f64(s.complete_info_average) - reference::COMPLETE_INFO_AVERAGE).abs();
    if s.case(GameCase::FE).improvements == 0 {
        score += 1.0;
    }
    let p = &s.partition;
    score += (p.unchanged_all.len() as f64 - reference::UNCHANGED_ALL as f64).abs()
        + (p.worse_all.len() as f64 - reference::WORSE_ALL as f64).abs()
        + (p.worse_only_ef.len() as f64 - reference::WORSE_ONLY_EF as f64).abs();
    (matches, max_dev, score)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Index into `rows` of the best-scoring row.
    pub best: usize,
}

impl SweepTable {
    pub fn best(&self) -> &SweepRow {
        &self.rows[self.best]
    }
}

/// Runs every aggregation protocol under every equilibrium-selection and
/// tie-break rule and ranks the results against the published table.
pub fn protocol_sweep() -> Result<SweepTable> {
    let games = enumerate_games();
    let mut rows = Vec::new();
    for concept in Concept::ALL {
        for selection in SelectionRule::ALL {
            for tie in TieBreakRule::ALL {
                let rules = Rules {
                    tie,
                    selection,
                    concept,
                };
                let (records, complete) = all_records(&games, rules)?;
                for protocol in AggregationProtocol::all() {
                    let summary =
                        summarize_protocol(&records, complete, games.len(), protocol, rules);
                    let (count_matches, max_loss_deviation, score) = score_summary(&summary);
                    rows.push(SweepRow {
                        summary,
                        count_matches,
                        max_loss_deviation,
                        score,
                    });
                }
            }
        }
    }
    let best = rows
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.score.total_cmp(&y.score))
        .map(|(i, _)| i)
        .expect("non-empty sweep");
    Ok(SweepTable { rows, best })
}

fn fmt_dec(r: Rational) -> String {
    format!("{:.6}", to_f64(r))
}

#[derive(Serialize)]
struct CaseSummaryJson<'a> {
    case: &'a str,
    no_change_count: usize,
    changed_count: usize,
    average_loss: String,
    average_loss_decimal: String,
    relative_average_loss: String,
    relative_average_loss_decimal: String,
    max_loss: String,
    min_loss: String,
    improvements: usize,
}

#[derive(Serialize)]
struct ProtocolJson {
    include_r_equals_b: bool,
    per_game_reduce: &'static str,
    population: &'static str,
    tie_break: &'static str,
    equilibrium_selection: &'static str,
    concept: &'static str,
}

#[derive(Serialize)]
struct BatchSummaryJson<'a> {
    protocol: ProtocolJson,
    game_count: usize,
    complete_info_average: String,
    complete_info_average_decimal: String,
    cases: Vec<CaseSummaryJson<'a>>,
    partition: PartitionJson<'a>,
}

#[derive(Serialize)]
struct PartitionJson<'a> {
    unchanged_all: &'a BTreeSet<usize>,
    worse_all: &'a BTreeSet<usize>,
    worse_only_ef: &'a BTreeSet<usize>,
}

fn protocol_json(p: &AggregationProtocol, rules: &Rules) -> ProtocolJson {
    ProtocolJson {
        include_r_equals_b: p.include_r_equals_b,
        per_game_reduce: match p.per_game_reduce {
            PerGameReduce::Mean => "mean",
            PerGameReduce::Max => "max",
        },
        population: match p.population {
            Population::AllGames => "all_games",
            Population::ChangedGamesOnly => "changed_games_only",
        },
        tie_break: rules.tie.as_str(),
        equilibrium_selection: rules.selection.as_str(),
        concept: rules.concept.as_str(),
    }
}

pub fn summary_json(s: &BatchSummary) -> String {
    let doc = BatchSummaryJson {
        protocol: protocol_json(&s.protocol, &s.rules),
        game_count: s.game_count,
        complete_info_average: s.complete_info_average.to_string(),
        complete_info_average_decimal: fmt_dec(s.complete_info_average),
        cases: s
            .cases
            .iter()
            .map(|c| CaseSummaryJson {
                case: c.case.as_str(),
                no_change_count: c.no_change_count,
                changed_count: c.changed_count,
                average_loss: c.average_loss.to_string(),
                average_loss_decimal: fmt_dec(c.average_loss),
                relative_average_loss: c.relative_average_loss.to_string(),
                relative_average_loss_decimal: fmt_dec(c.relative_average_loss),
                max_loss: c.max_loss.to_string(),
                min_loss: c.min_loss.to_string(),
                improvements: c.improvements,
            })
            .collect(),
        partition: PartitionJson {
            unchanged_all: &s.partition.unchanged_all,
            worse_all: &s.partition.worse_all,
            worse_only_ef: &s.partition.worse_only_ef,
        },
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub const RECORD_HEADER: [&str; 10] = [
    "game_index",
    "case",
    "r_index",
    "p1_complete",
    "p1_case",
    "loss_abs",
    "loss_rel",
    "p1_complete_decimal",
    "loss_abs_decimal",
    "loss_rel_decimal",
];

fn csv_bytes<F>(fill: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).map_err(|e| Error::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    })?;
    w.into_inner().map_err(|e| Error::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    })
}

pub fn records_csv(records: &[LossRecord]) -> Result<Vec<u8>> {
    csv_bytes(|w| {
        w.write_record(RECORD_HEADER)?;
        for r in records {
            w.write_record([
                r.game_index.to_string(),
                r.case.to_string(),
                r.r_index.to_string(),
                r.p1_complete.to_string(),
                r.p1_case.to_string(),
                r.loss_abs.to_string(),
                r.loss_rel.to_string(),
                fmt_dec(r.p1_complete),
                fmt_dec(r.loss_abs),
                fmt_dec(r.loss_rel),
            ])?;
        }
        Ok(())
    })
}

pub fn histogram_csv(bins: &[HistogramBin]) -> Result<Vec<u8>> {
    csv_bytes(|w| {
        w.write_record(["bin_lo", "bin_hi", "count"])?;
        for b in bins {
            w.write_record([b.lo.to_string(), b.hi.to_string(), b.count.to_string()])?;
        }
        Ok(())
    })
}

/// Parses `loss_records.csv` back into records.
pub fn parse_records_csv(data: &[u8]) -> Result<Vec<LossRecord>> {
    let bad = |m: String| Error::Parse {
        position: 0,
        message: m,
    };
    let mut rdr = csv::Reader::from_reader(data);
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| {
            row.get(i)
                .ok_or_else(|| bad(format!("row {line}: missing column {i}")))
        };
        let num = |i: usize| -> Result<Rational> {
            let s = field(i)?;
            s.parse::<Rational>()
                .map_err(|_| bad(format!("row {line}: bad rational '{s}'")))
        };
        out.push(LossRecord {
            game_index: field(0)?
                .parse()
                .map_err(|_| bad(format!("row {line}: bad index")))?,
            case: field(1)?.parse()?,
            r_index: field(2)?
                .parse()
                .map_err(|_| bad(format!("row {line}: bad r_index")))?,
            p1_complete: num(3)?,
            p1_case: num(4)?,
            loss_abs: num(5)?,
            loss_rel: num(6)?,
        });
    }
    Ok(out)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(bytes).map_err(io)
}

/// Writes `batch_summary.json`, `loss_records.csv` and one
/// `hist_<case>_<kind>.csv` per case and kind; returns the paths written.
pub fn write_batch_outputs(dir: &Path, s: &BatchSummary, bins: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut written = Vec::new();
    let summary = dir.join("batch_summary.json");
    write_file(&summary, summary_json(s).as_bytes())?;
    written.push(summary);
    let records = dir.join("loss_records.csv");
    write_file(&records, &records_csv(&s.records)?)?;
    written.push(records);
    for case in GameCase::ALL {
        for kind in [HistogramKind::Absolute, HistogramKind::Relative] {
            let path = dir.join(format!("hist_{}_{}.csv", case, kind.as_str()));
            write_file(
                &path,
                &histogram_csv(&histogram(&s.records, case, kind, bins)?)?,
            )?;
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{canonical_form, parse_game_line};

    fn record(game: usize, case: GameCase, loss: i64) -> LossRecord {
        let l = Rational::from_integer(loss);
        LossRecord {
            game_index: game,
            case,
            r_index: 1,
            p1_complete: Rational::from_integer(4),
            p1_case: Rational::from_integer(4) - l,
            loss_abs: l,
            loss_rel: l / 4,
        }
    }

    #[test]
    fn common_interest_game_never_loses() {
        // Both players rank the cells identically and cell (2,2) is best for
        // both; every family member keeps column 2 dominant.
        let g = canonical_form(&parse_game_line("1 3 2 4 -- 1 3 2 4").unwrap());
        let protocol = AggregationProtocol {
            include_r_equals_b: true,
            ..Default::default()
        };
        let recs = evaluate_game(1, &g, &protocol, Rules::default()).unwrap();
        assert_eq!(recs.len(), 16);
        for r in &recs {
            assert!(r.loss_abs.is_zero(), "{r:?}");
            assert_eq!(r.p1_complete, Rational::from_integer(4));
        }
        let excl = evaluate_game(1, &g, &AggregationProtocol::default(), Rules::default()).unwrap();
        assert_eq!(excl.len(), 12);
    }

    #[test]
    fn histogram_counts_changed_records_only() {
        let recs = vec![
            record(1, GameCase::EE, 0),
            record(1, GameCase::EE, 3),
            record(2, GameCase::EE, 1),
            record(2, GameCase::EE, -1),
            record(2, GameCase::FF, 2),
        ];
        let h = histogram(&recs, GameCase::EE, HistogramKind::Absolute, 3).unwrap();
        assert_eq!(h.iter().map(|b| b.count).collect::<Vec<_>>(), vec![2, 0, 1]);
        assert_eq!(h[2].hi, Rational::from_integer(3));
        let empty = histogram(
            &[record(1, GameCase::FE, 0)],
            GameCase::FE,
            HistogramKind::Relative,
            4,
        )
        .unwrap();
        assert!(empty.iter().all(|b| b.count == 0));
        assert!(histogram(&recs, GameCase::EE, HistogramKind::Absolute, 0).is_err());
    }

    #[test]
    fn partition_definitions() {
        let mut recs = Vec::new();
        for case in GameCase::ALL {
            recs.push(record(1, case, 0));
            recs.push(record(2, case, 1));
            recs.push(record(3, case, if case == GameCase::EF { 2 } else { 0 }));
        }
        let p = partition_observations(&recs);
        assert_eq!(p.unchanged_all, BTreeSet::from([1]));
        assert_eq!(p.worse_all, BTreeSet::from([2]));
        assert_eq!(p.worse_only_ef, BTreeSet::from([3]));
    }

    #[test]
    fn records_csv_round_trips() {
        let recs = vec![record(1, GameCase::EE, 3), record(7, GameCase::FE, -1)];
        let bytes = records_csv(&recs).unwrap();
        assert_eq!(parse_records_csv(&bytes).unwrap(), recs);
    }
}
