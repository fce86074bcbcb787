use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use affmb_core::game::{BreakerPolicy, Status};
use affmb_core::polycalc::{appendix_pair, verify_appendix};
use affmb_core::solver::Board;
use affmb_core::strategy::StrategyTree;
use affmb_core::{CopyMode, Error, ErrorClass};
use clap::{Parser, Subcommand};

use crate::api::{parse_policy, router};
use crate::reports::{classify_report, naturals, parse_set, solve_report, to_json, tree_report, verify_report};
use crate::session::{GameSession, SessionStore};

#[derive(Parser, Debug)]
#[command(name = "affmb", version, about = "Maker-Breaker affine copy game: strategies, play, solver and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Symmetry classification of a set.
    Classify {
        #[arg(long)]
        set: String,
    },
    /// Build Maker's strategy tree.
    Tree {
        #[arg(long)]
        set: String,
        /// Relabel into naturals (root fixed, integer copies).
        #[arg(long)]
        realize: bool,
        /// Also write the tree JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a tree file as a strategy for a set.
    Verify {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        moves: usize,
    },
    /// Play the tree agent against a Breaker policy.
    Play {
        #[arg(long)]
        set: String,
        /// unique, greedy, endpoint, random[:seed], scripted:a,b,… or human
        #[arg(long, default_value = "greedy")]
        breaker: String,
        #[arg(long, default_value = "rational")]
        mode: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Bounded exhaustive search on a finite board.
    Solve {
        #[arg(long)]
        set: String,
        /// `a..b` (inclusive) or a comma list.
        #[arg(long)]
        board: String,
        #[arg(long)]
        max_moves: usize,
        #[arg(long, default_value = "rational")]
        mode: String,
        /// Fix Breaker to a policy instead of searching its moves.
        #[arg(long)]
        breaker: Option<String>,
    },
    /// Polynomial checks of the generic 4-set degeneracies.
    Appendix {
        /// A single system `i,j` with 1 <= i <= j <= 3.
        #[arg(long, conflicts_with = "all")]
        pair: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8172)]
        port: u16,
        #[arg(long, env = "AFFMB_STATE_DIR")]
        state_dir: Option<PathBuf>,
    },
}

/// Failure of a command, carrying its exit code.
enum Failure {
    Error(Error),
    Io(String),
    /// Output was produced, but it reports a negative result.
    Negative(i32),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn emit(out: &mut dyn Write, summary: &str, json: &str) -> Result<(), Failure> {
    writeln!(out, "{summary}\n{json}").map_err(|e| Failure::Io(e.to_string()))
}

fn mode(text: &str) -> Result<CopyMode, Failure> {
    Ok(text.parse::<CopyMode>()?)
}

/// Runs one command line. Exit codes: 0 success, 2 bad input or domain
/// error, 1 internal error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, input: &mut dyn BufRead) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, input) {
        Ok(()) => 0,
        Err(Failure::Negative(code)) => code,
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e.class() {
                ErrorClass::Internal => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, input: &mut dyn BufRead) -> Result<(), Failure> {
    match command {
        Command::Classify { set } => {
            let report = classify_report(&parse_set(&set)?)?;
            emit(out, &report.summary(), &to_json(&report))
        }
        Command::Tree { set, realize, out: file } => {
            let report = tree_report(&parse_set(&set)?, realize)?;
            if let Some(path) = file {
                let body = match &report.realized {
                    Some(r) => to_json(r),
                    None => to_json(&report.strategy.tree),
                };
                std::fs::write(&path, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            }
            emit(out, &report.summary(), &to_json(&report))
        }
        Command::Verify { tree, set, moves } => {
            let text = std::fs::read_to_string(&tree)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", tree.display())))?;
            let t: StrategyTree = serde_json::from_str(&text)
                .map_err(|e| Failure::Error(Error::Parse(format!("{}: {e}", tree.display()))))?;
            let report = verify_report(&t, &parse_set(&set)?, moves);
            emit(out, &report.summary(), &to_json(&report))?;
            if report.report.valid {
                Ok(())
            } else {
                Err(Failure::Negative(2))
            }
        }
        Command::Play { set, breaker, mode: m, seed } => play(&set, &breaker, &m, seed, out, input),
        Command::Solve { set, board, max_moves, mode: m, breaker } => {
            let board: Board = board.parse()?;
            let breaker = breaker.map(|b| parse_policy(Some(&b), None)).transpose()?;
            let report = solve_report(&parse_set(&set)?, board, max_moves, mode(&m)?, breaker)?;
            emit(out, &report.summary(), &to_json(&report))
        }
        Command::Appendix { pair: Some(pair), .. } => {
            let (i, j) = pair
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("pair {pair:?} is not of the form i,j")))?;
            let report = appendix_pair(i, j)?;
            let solutions: Vec<String> = report
                .solutions
                .iter()
                .map(|t| format!("({},{},{})", t[0], t[1], t[2]))
                .collect();
            let summary = if solutions.is_empty() {
                format!("pair ({i},{j}): no positive rational solutions")
            } else {
                format!("pair ({i},{j}): positive rational solutions {}", solutions.join(", "))
            };
            emit(out, &summary, &to_json(&report))
        }
        Command::Appendix { .. } => {
            let report = verify_appendix()?;
            let summary = if report.passed {
                format!(
                    "appendix reproduced: {} pairs classified, flagged solutions {}",
                    report.pairs.len(),
                    report
                        .flagged_solutions
                        .iter()
                        .map(|t| format!("({},{},{})", t[0], t[1], t[2]))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            } else {
                format!("appendix discrepancies: {}", report.discrepancies.join("; "))
            };
            emit(out, &summary, &to_json(&report))?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Negative(1))
            }
        }
        Command::Serve { port, state_dir } => serve(port, state_dir, out),
    }
}

fn play(set: &str, breaker: &str, m: &str, seed: Option<u64>, out: &mut dyn Write, input: &mut dyn BufRead) -> Result<(), Failure> {
    let s = naturals(&parse_set(set)?)?;
    let policy = parse_policy(Some(breaker), seed)?;
    let human = policy == BreakerPolicy::Human;
    let mut session = GameSession::start("cli".into(), &s, mode(m)?, policy)?;
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    while human && !session.state.is_over() {
        let threats: Vec<String> = session.threats().iter().map(|t| format!("{}x{}", t.n, t.count)).collect();
        writeln!(
            out,
            "Maker {:?}  Breaker {:?}  threats [{}]  your move:",
            session.state.maker,
            session.state.breaker,
            threats.join(" ")
        )
        .map_err(io)?;
        let mut line = String::new();
        if input.read_line(&mut line).map_err(io)? == 0 {
            return Err(Failure::Io("input ended before the game finished".into()));
        }
        match line.trim().parse::<u64>() {
            Ok(n) => match session.breaker_move(n) {
                Ok(()) => {}
                Err(e @ (Error::IllegalMove(_) | Error::GameState(_))) => writeln!(out, "rejected: {e}").map_err(io)?,
                Err(e) => return Err(e.into()),
            },
            Err(_) => writeln!(out, "enter a natural number").map_err(io)?,
        }
    }
    let transcript = session.state.transcript();
    let summary = match (&transcript.status, &transcript.witness) {
        (Status::MakerWon, Some(w)) => format!(
            "Maker won in {} moves: {:?} = {}·S + {}",
            session.state.maker_moves(),
            w.points,
            w.a,
            w.b
        ),
        (status, _) => format!("game ended {status:?} after {} Maker moves", session.state.maker_moves()),
    };
    emit(out, &summary, &to_json(&transcript))
}

fn serve(port: u16, state_dir: Option<PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    let store = match &state_dir {
        Some(dir) => SessionStore::persistent(dir)
            .map_err(|e| Failure::Io(format!("cannot use state dir {}: {e}", dir.display())))?,
        None => SessionStore::in_memory(),
    };
    let app = router(Arc::new(store));
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Error(Error::Internal(e.to_string())))?;
    runtime.block_on(async {
        let addr = SocketAddr::from(([0, 0, 0, 0], port));
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Failure::Io(format!("cannot bind port {port}: {e}")))?;
        writeln!(out, "listening on http://127.0.0.1:{port}").map_err(|e| Failure::Io(e.to_string()))?;
        out.flush().map_err(|e| Failure::Io(e.to_string()))?;
        axum::serve(listener, app)
            .await
            .map_err(|e| Failure::Error(Error::Internal(e.to_string())))
    })
}
