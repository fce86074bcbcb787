//! Exhaustive bounded search on a finite board.
//!
//! Both players are restricted to the board's points; a Maker win found here
//! transfers to the unrestricted game, while the absence of one is only a
//! statement about this board.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{find_affine_map, map_fits_mode, CopyMode, Orientation, Pattern, Rational};
use crate::game::{breaker_policy_move, BreakerPolicy, BreakerReply, GameState, Move, Side, Status};
use crate::strategy::RealizedTree;

/// Hard ceiling on board size (holdings are 64-bit masks).
pub const MAX_BOARD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    pub max_board: usize,
    pub max_budget: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_board: 32,
            max_budget: 8,
        }
    }
}

/// A finite set of naturals both players are confined to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Board {
    points: Vec<u64>,
}

impl TryFrom<Vec<u64>> for Board {
    type Error = Error;
    fn try_from(points: Vec<u64>) -> Result<Self> {
        Board::new(points)
    }
}

impl From<Board> for Vec<u64> {
    fn from(b: Board) -> Vec<u64> {
        b.points
    }
}

impl Board {
    pub fn new(points: impl IntoIterator<Item = u64>) -> Result<Board> {
        let points: Vec<u64> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if points.is_empty() {
            return Err(Error::Domain("board is empty".into()));
        }
        if points.len() > MAX_BOARD {
            return Err(Error::Resource(format!(
                "board has {} points; at most {MAX_BOARD} are supported",
                points.len()
            )));
        }
        Ok(Board { points })
    }

    /// The integers `lo..=hi`.
    pub fn range(lo: u64, hi: u64) -> Result<Board> {
        if hi < lo {
            return Err(Error::Domain(format!("empty board range {lo}..{hi}")));
        }
        if hi - lo >= MAX_BOARD as u64 {
            return Err(Error::Resource(format!("board range {lo}..{hi} is too large")));
        }
        Board::new(lo..=hi)
    }

    pub fn from_tree(t: &RealizedTree) -> Result<Board> {
        Board::new(t.natural_labels()?)
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, n: u64) -> Option<usize> {
        self.points.binary_search(&n).ok()
    }

    fn mask_of<'a>(&self, ns: impl IntoIterator<Item = &'a u64>) -> u64 {
        ns.into_iter()
            .filter_map(|&n| self.index_of(n))
            .fold(0, |m, i| m | (1 << i))
    }

    fn points_of(&self, mask: u64) -> impl Iterator<Item = u64> + '_ {
        (0..self.points.len()).filter(move |i| mask >> i & 1 == 1).map(|i| self.points[i])
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.points.iter().join(","))
    }
}

/// Accepts `a..b` (inclusive) or a comma-separated list.
impl FromStr for Board {
    type Err = Error;
    fn from_str(text: &str) -> Result<Board> {
        let parse = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("expected a natural, got {v:?}")))
        };
        match text.split_once("..") {
            Some((lo, hi)) => Board::range(parse(lo)?, parse(hi.trim_start_matches('='))?),
            None => Board::new(text.split(',').map(parse).collect::<Result<Vec<_>>>()?),
        }
    }
}

/// Grows `seeds` by completion points: points `x` such that a subset `R` of
/// the current points plus `x` is a copy of some sub-pattern of `s` with at
/// least three elements (or of `s` itself when it is smaller). Rounds repeat
/// until nothing new appears or `max_points` is reached; the smallest new
/// points are kept first.
pub fn completion_closure(s: &Pattern, seeds: &[u64], max_points: usize) -> Result<Board> {
    let mut points: BTreeSet<u64> = seeds.iter().copied().collect();
    if s.len() < 2 {
        return Board::new(points);
    }
    let smallest = s.len().min(3);
    let mut subs: Vec<(Pattern, Rational)> = Vec::new();
    for size in smallest..=s.len() {
        for idx in (0..s.len()).combinations(size) {
            let sub = Pattern::new(idx.iter().map(|&i| s[i].clone()).collect())?;
            for i in 0..sub.len() {
                subs.push((sub.without(i)?, sub[i].clone()));
            }
        }
    }
    while points.len() < max_points {
        let mut fresh = BTreeSet::new();
        for (rest, missing) in &subs {
            for combo in points.iter().copied().combinations(rest.len()) {
                let r = Pattern::from_naturals(&combo).expect("distinct points");
                if let Ok(Some(g)) = find_affine_map(rest, &r, Orientation::Increasing) {
                    let x = g.apply(missing);
                    if let Some(n) = x.is_integer().then(|| x.to_u64()).flatten() {
                        if !points.contains(&n) {
                            fresh.insert(n);
                        }
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        let room = max_points - points.len();
        points.extend(fresh.into_iter().take(room));
    }
    Board::new(points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Fewest Maker selections that force a win, if any within the budget.
    pub min_maker_moves: Option<usize>,
    pub principal_variation: Vec<Move>,
    pub nodes_searched: u64,
    /// Always true: a missing win says nothing beyond this board.
    pub board_relative: bool,
}

/// Copies of `s` lying entirely in the board, as bitmasks.
fn winning_lines(s: &Pattern, board: &Board, mode: CopyMode) -> Vec<u64> {
    let pts = board.points();
    let mut lines = BTreeSet::new();
    if s.len() == 1 {
        return (0..pts.len()).map(|i| 1u64 << i).collect();
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let image = Pattern::from_naturals(&[pts[i], pts[j]]).expect("distinct");
            let head = Pattern::new(s[..2].to_vec()).expect("increasing");
            let Ok(Some(f)) = find_affine_map(&head, &image, Orientation::Increasing) else {
                continue;
            };
            if !map_fits_mode(&f, mode) {
                continue;
            }
            let mask = s.iter().try_fold(0u64, |m, x| {
                let y = f.apply(x);
                let n = y.is_integer().then(|| y.to_u64()).flatten()?;
                board.index_of(n).map(|k| m | (1 << k))
            });
            if let Some(mask) = mask {
                lines.insert(mask);
            }
        }
    }
    lines.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    maker: u64,
    breaker: u64,
    /// Breaker selections off the board; they only matter to fixed policies.
    off_board: Vec<u64>,
    remaining: usize,
    turn: Side,
}

struct Search<'a> {
    s: &'a Pattern,
    board: &'a Board,
    mode: CopyMode,
    lines: Vec<u64>,
    fixed: Option<&'a BreakerPolicy>,
    universe: u64,
    memo: HashMap<Key, bool>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(s: &'a Pattern, board: &'a Board, mode: CopyMode, fixed: Option<&'a BreakerPolicy>) -> Self {
        Search {
            s,
            board,
            mode,
            lines: winning_lines(s, board, mode),
            fixed,
            universe: board.points().last().copied().unwrap_or(0).saturating_mul(4).max(16),
            memo: HashMap::new(),
            nodes: 0,
        }
    }

    fn live(&self, maker: u64, breaker: u64, remaining: usize) -> impl Iterator<Item = u64> + '_ {
        self.lines
            .iter()
            .copied()
            .filter(move |&l| l & breaker == 0 && (l & !maker).count_ones() as usize <= remaining)
    }

    fn has_line(&self, maker: u64) -> bool {
        self.lines.iter().any(|&l| l & !maker == 0)
    }

    /// Unclaimed points on live lines, ascending.
    fn candidates(&self, maker: u64, breaker: u64, remaining: usize) -> Vec<usize> {
        let union = self.live(maker, breaker, remaining).fold(0u64, |u, l| u | l) & !maker & !breaker;
        (0..self.board.len()).filter(|i| union >> i & 1 == 1).collect()
    }

    fn game_state(&self, maker: u64, breaker: u64, off_board: &[u64]) -> GameState {
        let mut g = GameState::from_naturals(
            &self.s.to_naturals().expect("solver targets are naturals"),
            self.mode,
        )
        .expect("valid target");
        g.maker = self.board.points_of(maker).collect();
        g.breaker = self.board.points_of(breaker).chain(off_board.iter().copied()).collect();
        g.turn = Side::Breaker;
        g
    }

    /// The fixed policy's reply, as a board index or an off-board natural.
    fn fixed_reply(&self, policy: &BreakerPolicy, maker: u64, breaker: u64, off_board: &[u64]) -> Result<std::result::Result<usize, u64>> {
        let g = self.game_state(maker, breaker, off_board);
        match breaker_policy_move(policy, &g, self.universe)? {
            BreakerReply::Play(n) => Ok(self.board.index_of(n).ok_or(n)),
            BreakerReply::AwaitingInput => Err(Error::Contract("the solver cannot wait for a human Breaker".into())),
        }
    }

    fn maker_node(&mut self, maker: u64, breaker: u64, off_board: &[u64], remaining: usize) -> Result<bool> {
        self.node(maker, breaker, off_board, remaining, Side::Maker)
    }

    fn node(&mut self, maker: u64, breaker: u64, off_board: &[u64], remaining: usize, turn: Side) -> Result<bool> {
        let key = Key {
            maker,
            breaker,
            off_board: if self.fixed.is_some() { off_board.to_vec() } else { Vec::new() },
            remaining,
            turn,
        };
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.nodes += 1;
        let value = match turn {
            Side::Maker => self.eval_maker(maker, breaker, off_board, remaining)?,
            Side::Breaker => self.eval_breaker(maker, breaker, off_board, remaining)?,
        };
        self.memo.insert(key, value);
        Ok(value)
    }

    fn eval_maker(&mut self, maker: u64, breaker: u64, off_board: &[u64], remaining: usize) -> Result<bool> {
        if remaining == 0 {
            return Ok(false);
        }
        if self.live(maker, breaker, 1).next().is_some() {
            return Ok(true);
        }
        for i in self.candidates(maker, breaker, remaining) {
            let next = maker | 1 << i;
            if remaining > 1 && self.node(next, breaker, off_board, remaining - 1, Side::Breaker)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn eval_breaker(&mut self, maker: u64, breaker: u64, off_board: &[u64], remaining: usize) -> Result<bool> {
        if self.live(maker, breaker, remaining).next().is_none() {
            return Ok(false);
        }
        if let Some(policy) = self.fixed {
            return match self.fixed_reply(policy, maker, breaker, off_board)? {
                Ok(i) => self.maker_node(maker, breaker | 1 << i, off_board, remaining),
                Err(n) => {
                    let mut off = off_board.to_vec();
                    off.push(n);
                    off.sort_unstable();
                    self.maker_node(maker, breaker, &off, remaining)
                }
            };
        }
        let singles: BTreeSet<u64> = self.live(maker, breaker, 1).map(|l| l & !maker).collect();
        if singles.len() >= 2 {
            return Ok(true);
        }
        for i in self.candidates(maker, breaker, remaining) {
            if !self.maker_node(maker, breaker | 1 << i, off_board, remaining)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// One winning line of play from a position Maker wins in `remaining`.
    fn principal_variation(&mut self, mut maker: u64, mut breaker: u64, remaining: usize) -> Result<Vec<Move>> {
        let mut off_board = Vec::new();
        let mut pv = Vec::new();
        for left in (1..=remaining).rev() {
            let pick = self.candidates(maker, breaker, left).into_iter().find_map(|i| {
                let next = maker | 1 << i;
                if self.has_line(next) {
                    return Some(Ok(i));
                }
                match self.node(next, breaker, &off_board, left - 1, Side::Breaker) {
                    Ok(true) if left > 1 => Some(Ok(i)),
                    Ok(_) => None,
                    Err(e) => Some(Err(e)),
                }
            });
            let Some(i) = pick.transpose()? else {
                return Err(Error::Internal("principal variation lost the win".into()));
            };
            maker |= 1 << i;
            pv.push(Move {
                by: Side::Maker,
                n: self.board.points()[i],
                threats: Vec::new(),
            });
            if self.has_line(maker) {
                break;
            }
            let reply = match self.fixed {
                Some(policy) => self.fixed_reply(policy, maker, breaker, &off_board)?,
                None => Ok(self.candidates(maker, breaker, left - 1)[0]),
            };
            let n = match reply {
                Ok(j) => {
                    breaker |= 1 << j;
                    self.board.points()[j]
                }
                Err(n) => {
                    off_board.push(n);
                    off_board.sort_unstable();
                    n
                }
            };
            pv.push(Move {
                by: Side::Breaker,
                n,
                threats: Vec::new(),
            });
        }
        Ok(pv)
    }
}

fn check_limits(s: &Pattern, board: &Board, budget: usize, limits: SolverLimits) -> Result<()> {
    if board.len() > limits.max_board.min(MAX_BOARD) {
        return Err(Error::Resource(format!(
            "board has {} points; the limit is {}",
            board.len(),
            limits.max_board
        )));
    }
    if budget > limits.max_budget {
        return Err(Error::Resource(format!("budget {budget} exceeds the limit {}", limits.max_budget)));
    }
    if !s.is_natural() {
        return Err(Error::Domain(format!("target {{{s}}} must consist of naturals")));
    }
    Ok(())
}

/// Fewest Maker moves forcing a win on `board` from an empty position.
///
/// With `fixed_breaker` Breaker follows that policy instead of searching;
/// its off-board replies are recorded and cost Maker nothing.
pub fn solve_bounded(
    s: &Pattern,
    board: &Board,
    budget: usize,
    mode: CopyMode,
    fixed_breaker: Option<&BreakerPolicy>,
) -> Result<SolveResult> {
    solve_with_limits(s, board, budget, mode, fixed_breaker, SolverLimits::default())
}

pub fn solve_with_limits(
    s: &Pattern,
    board: &Board,
    budget: usize,
    mode: CopyMode,
    fixed_breaker: Option<&BreakerPolicy>,
    limits: SolverLimits,
) -> Result<SolveResult> {
    check_limits(s, board, budget, limits)?;
    let mut search = Search::new(s, board, mode, fixed_breaker);
    let mut found = None;
    for b in 1..=budget {
        if search.maker_node(0, 0, &[], b)? {
            found = Some(b);
            break;
        }
    }
    let principal_variation = match found {
        Some(b) => search.principal_variation(0, 0, b)?,
        None => Vec::new(),
    };
    Ok(SolveResult {
        min_maker_moves: found,
        principal_variation,
        nodes_searched: search.nodes,
        board_relative: true,
    })
}

/// A move for the side to play in `state` achieving the minimax value on
/// `board`: Maker wins as fast as possible, Breaker delays the win as long
/// as possible. Ties go to the smallest point. Holdings off the board are
/// ignored.
pub fn best_move(s: &Pattern, board: &Board, state: &GameState, budget: usize) -> Result<u64> {
    check_limits(s, board, budget, SolverLimits::default())?;
    if state.status != Status::Ongoing {
        return Err(Error::GameState("game is over".into()));
    }
    let mut search = Search::new(s, board, state.mode, None);
    let maker = board.mask_of(&state.maker);
    let breaker = board.mask_of(&state.breaker);
    let free: Vec<usize> = (0..board.len()).filter(|i| (maker | breaker) >> i & 1 == 0).collect();
    let Some(&first_free) = free.first() else {
        return Err(Error::Resource("no free point on the board".into()));
    };
    match state.turn {
        Side::Maker => {
            for left in 1..=budget {
                if !search.maker_node(maker, breaker, &[], left)? {
                    continue;
                }
                for i in search.candidates(maker, breaker, left) {
                    let next = maker | 1 << i;
                    if search.has_line(next)
                        || (left > 1 && search.node(next, breaker, &[], left - 1, Side::Breaker)?)
                    {
                        return Ok(board.points()[i]);
                    }
                }
            }
            Ok(board.points()[first_free])
        }
        Side::Breaker => {
            let mut best: Option<(usize, usize)> = None;
            for &i in &free {
                let after = breaker | 1 << i;
                let mut value = budget + 1;
                for left in 1..=budget {
                    if search.maker_node(maker, after, &[], left)? {
                        value = left;
                        break;
                    }
                }
                if best.is_none_or(|(v, _)| value > v) {
                    best = Some((value, i));
                }
            }
            Ok(board.points()[best.expect("free is nonempty").1])
        }
    }
}
