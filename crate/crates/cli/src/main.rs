use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wronggame::catalog::{catalog_entries, emit_game_line};
use wronggame::equilibrium::Breakpoint;
use wronggame::experiment::{
    histogram, histogram_csv, protocol_sweep, run_batch, write_batch_outputs, AggregationProtocol,
    BatchSummary, HistogramKind, PerGameReduce, Population, DEFAULT_BINS,
};
use wronggame::robust::Concept;
use wronggame::types::to_f64;
use wronggame::{
    enumerate_games, Error, GameCase, GameFamily, Rational, Rules, SelectionRule,
    StrictOrdinalMatrix, TieBreakRule, WrongGame,
};

#[derive(Parser)]
#[command(
    name = "wronggame",
    version,
    about = "Solve 2x2 games played with the wrong model of the opponent"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the 78 strict ordinal games.
    Enumerate {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve one game in one case against one true matrix.
    Solve(SolveArgs),
    /// Run every catalog game and write summary, records and histograms.
    Batch {
        #[command(flatten)]
        batch: BatchArgs,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
    },
    /// Export one loss histogram as CSV.
    Hist {
        #[command(flatten)]
        batch: BatchArgs,
        #[arg(long, value_parser = parse_from_str::<GameCase>)]
        case: GameCase,
        #[arg(long, value_parser = parse_from_str::<HistogramKind>, default_value = "absolute")]
        kind: HistogramKind,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
    },
    /// Rank every aggregation protocol and rule combination against the reference table.
    Sweep {
        #[arg(long, env = "WRONGGAME_OUT", default_value = "wronggame-out")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct RuleArgs {
    #[arg(long, value_parser = parse_from_str::<TieBreakRule>, default_value = "pessimistic")]
    tie: TieBreakRule,
    #[arg(long, value_parser = parse_from_str::<SelectionRule>, default_value = "p1-max-pure-first")]
    selection: SelectionRule,
    #[arg(long, value_parser = parse_from_str::<Concept>, default_value = "nash")]
    concept: Concept,
}

impl RuleArgs {
    fn rules(&self) -> Rules {
        Rules {
            tie: self.tie,
            selection: self.selection,
            concept: self.concept,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Player 1's matrix, e.g. "[[4,1],[2,3]]".
    #[arg(long = "A", requires = "b", conflicts_with = "game")]
    a: Option<String>,
    /// Player 2's matrix as player 1 believes it.
    #[arg(long = "B", requires = "a")]
    b: Option<String>,
    /// 1-based catalog index.
    #[arg(long, required_unless_present = "a")]
    game: Option<usize>,
    #[arg(long, value_parser = parse_from_str::<GameCase>)]
    case: GameCase,
    /// True matrix: B, B12, B23, B34 or a matrix literal.
    #[arg(long = "R", default_value = "B")]
    r: String,
    #[command(flatten)]
    rules: RuleArgs,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long)]
    include_r_equals_b: bool,
    #[arg(long, value_parser = parse_from_str::<PerGameReduce>, default_value = "mean")]
    per_game: PerGameReduce,
    #[arg(long, value_parser = parse_from_str::<Population>, default_value = "changed")]
    population: Population,
    #[command(flatten)]
    rules: RuleArgs,
    #[arg(long, env = "WRONGGAME_OUT", default_value = "wronggame-out")]
    out: PathBuf,
}

impl BatchArgs {
    fn protocol(&self) -> AggregationProtocol {
        AggregationProtocol {
            include_r_equals_b: self.include_r_equals_b,
            per_game_reduce: self.per_game,
            population: self.population,
        }
    }
}

fn parse_from_str<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr<Err = Error>,
{
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 4,
        Error::Game { source, .. } => exit_code(source),
        _ => 3,
    }
}

fn io_err(path: &Path, e: io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn dual(r: Rational) -> String {
    format!("{r} ({:.6})", to_f64(r))
}

fn run(cli: Cli, out: &mut impl Write) -> wronggame::Result<()> {
    let stdout_err = |e: io::Error| io_err(Path::new("<stdout>"), e);
    match cli.command {
        Command::Enumerate { format } => {
            let games = enumerate_games();
            match format {
                Format::Text => {
                    for (i, g) in games.iter().enumerate() {
                        writeln!(out, "{:2}  {}", i + 1, emit_game_line(&g.game))
                            .map_err(stdout_err)?;
                    }
                }
                Format::Json => {
                    let json = serde_json::to_string_pretty(&catalog_entries(&games))
                        .expect("serializable");
                    writeln!(out, "{json}").map_err(stdout_err)?;
                }
            }
        }
        Command::Solve(args) => solve(&args, out)?,
        Command::Batch { batch, bins } => {
            let summary = run_batch(batch.protocol(), batch.rules.rules())?;
            let files = write_batch_outputs(&batch.out, &summary, bins)?;
            write!(out, "{}", table(&summary)).map_err(stdout_err)?;
            for f in files {
                writeln!(out, "wrote {}", f.display()).map_err(stdout_err)?;
            }
        }
        Command::Hist {
            batch,
            case,
            kind,
            bins,
        } => {
            let summary = run_batch(batch.protocol(), batch.rules.rules())?;
            let csv = histogram_csv(&histogram(&summary.records, case, kind, bins)?)?;
            fs::create_dir_all(&batch.out).map_err(|e| io_err(&batch.out, e))?;
            let path = batch.out.join(format!("hist_{case}_{}.csv", kind.as_str()));
            fs::write(&path, &csv).map_err(|e| io_err(&path, e))?;
            out.write_all(&csv).map_err(stdout_err)?;
        }
        Command::Sweep { out: dir } => {
            let sweep = protocol_sweep()?;
            let mut text = String::from(
                "rank,score,count_matches,max_loss_deviation,concept,selection,tie,include_r_equals_b,per_game,population,no_change_EE,no_change_EF,no_change_FE,no_change_FF,loss_EE,loss_EF,loss_FE,loss_FF,complete_info_average\n",
            );
            let mut order: Vec<usize> = (0..sweep.rows.len()).collect();
            order.sort_by(|&i, &j| {
                sweep.rows[i]
                    .score
                    .total_cmp(&sweep.rows[j].score)
                    .then(i.cmp(&j))
            });
            for (rank, &i) in order.iter().enumerate() {
                let row = &sweep.rows[i];
                let s = &row.summary;
                let counts: Vec<String> = GameCase::ALL
                    .iter()
                    .map(|c| s.case(*c).no_change_count.to_string())
                    .collect();
                let losses: Vec<String> = GameCase::ALL
                    .iter()
                    .map(|c| format!("{:.4}", to_f64(s.case(*c).average_loss)))
                    .collect();
                text.push_str(&format!(
                    "{},{:.4},{},{:.4},{},{},{},{},{},{},{},{},{:.4}\n",
                    rank + 1,
                    row.score,
                    row.count_matches,
                    row.max_loss_deviation,
                    s.rules.concept.as_str(),
                    s.rules.selection.as_str(),
                    s.rules.tie.as_str(),
                    s.protocol.include_r_equals_b,
                    match s.protocol.per_game_reduce {
                        PerGameReduce::Mean => "mean",
                        PerGameReduce::Max => "max",
                    },
                    match s.protocol.population {
                        Population::AllGames => "all",
                        Population::ChangedGamesOnly => "changed",
                    },
                    counts.join(","),
                    losses.join(","),
                    to_f64(s.complete_info_average)
                ));
            }
            fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
            let path = dir.join("sweep.csv");
            fs::write(&path, text.as_bytes()).map_err(|e| io_err(&path, e))?;
            let best = sweep.best();
            writeln!(
                out,
                "best match: concept {}, selection {}, tie {}, [{}], score {:.4}",
                best.summary.rules.concept.as_str(),
                best.summary.rules.selection.as_str(),
                best.summary.rules.tie.as_str(),
                best.summary.protocol,
                best.score
            )
            .map_err(stdout_err)?;
            write!(out, "{}", table(&best.summary)).map_err(stdout_err)?;
            writeln!(out, "wrote {}", path.display()).map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn table(s: &BatchSummary) -> String {
    let mut t = format!(
        "{:<6}{:>32}{:>16}\n",
        "Type", "Number of games with no change", "average loss"
    );
    for c in &s.cases {
        t.push_str(&format!(
            "{:<6}{:>32}{:>16.4}\n",
            c.case.as_str(),
            c.no_change_count,
            to_f64(c.average_loss)
        ));
    }
    t.push_str(&format!(
        "complete information average: {}\n",
        dual(s.complete_info_average)
    ));
    t
}

fn describe_breakpoint(bp: &Breakpoint) -> String {
    match bp {
        Breakpoint::Switch { at, below, above } => {
            format!("switch at a={at} (b={below} below, b={above} above)")
        }
        Breakpoint::Constant(b) => format!("constant b={b}"),
        Breakpoint::Indifferent => "indifferent".to_string(),
    }
}

fn solve(args: &SolveArgs, out: &mut impl Write) -> wronggame::Result<()> {
    let (a, b): (StrictOrdinalMatrix, StrictOrdinalMatrix) = match (&args.a, &args.b, args.game) {
        (Some(a), Some(b), _) => (a.parse()?, b.parse()?),
        (_, _, Some(idx)) => {
            let games = enumerate_games();
            let g = games.get(idx.wrapping_sub(1)).ok_or_else(|| {
                Error::OutOfRange(format!("game index {idx} not in 1..={}", games.len()))
            })?;
            (g.game.a, g.game.b)
        }
        _ => return Err(Error::InvalidMatrix("give --A and --B, or --game".into())),
    };
    let solver = WrongGame::new(a, b, args.rules.rules())?;
    let family = solver.family();
    let r_index = family.select(&args.r)?;
    let sol = solver.solve(args.case, r_index)?;
    let complete = solver.complete_info_payoff(r_index)?;
    let d = &sol.diagnostics;

    let mut text = String::new();
    text.push_str(&format!("A = {a}\nB = {b}\n"));
    text.push_str(&format!("family: {}\n", family.describe()));
    text.push_str(&format!(
        "case {} with R = {} = {}\n",
        args.case,
        GameFamily::LABELS[r_index],
        family.members()[r_index]
    ));
    text.push_str(&format!(
        "x: a = {} -> {}\n",
        sol.x_actual,
        sol.x_actual.strategy()
    ));
    text.push_str(&format!("y: b = {}\n", sol.y_actual));
    text.push_str(&format!("p1: {}\n", dual(sol.p1)));
    text.push_str(&format!("p1 complete information: {}\n", dual(complete)));
    text.push_str(&format!("loss: {}\n", dual(complete - sol.p1)));
    text.push_str("diagnostics:\n");
    if let Some(x) = d.x_ee {
        text.push_str(&format!("  x_EE: a = {x}\n"));
    }
    text.push_str(&format!("  player 2 models a = {}\n", d.x_model));
    text.push_str(&format!("  player 2 indifferent: {}\n", d.tie));
    text.push_str(&format!(
        "  p1 evaluated exactly at a: {}\n",
        d.p1_at_exact_point
    ));
    for (label, bp) in GameFamily::LABELS.iter().zip(&d.breakpoints) {
        text.push_str(&format!(
            "  breakpoint {label}: {}\n",
            describe_breakpoint(bp)
        ));
    }
    if let Some(opt) = &d.optimizer {
        text.push_str(&format!(
            "  optimizer: a = {}, value = {}\n",
            opt.x,
            dual(opt.value)
        ));
        let active: Vec<String> = opt
            .active_set
            .iter()
            .map(|&i| {
                GameFamily::LABELS
                    .get(i)
                    .map_or(format!("#{i}"), |l| l.to_string())
            })
            .collect();
        text.push_str(&format!("  active: {}\n", active.join(", ")));
        let cands: Vec<String> = opt
            .candidates
            .iter()
            .map(|c| format!("{}:{}", c.at, c.value))
            .collect();
        text.push_str(&format!("  candidates: {}\n", cands.join(" ")));
    }
    out.write_all(text.as_bytes())
        .map_err(|e| io_err(Path::new("<stdout>"), e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
