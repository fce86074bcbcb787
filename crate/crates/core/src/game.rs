//! Alternating play on the naturals: game state, the tree-walking Maker
//! agent, Breaker policies and play-outs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{contains_copy, find_affine_map, map_fits_mode, CopyMode, Orientation, Pattern, Rational};
use crate::solver::{self, Board};
use crate::strategy::RealizedTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Maker,
    Breaker,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Maker => Side::Breaker,
            Side::Breaker => Side::Maker,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ongoing,
    MakerWon,
    MoveCapped,
}

/// The copy of `S` Maker completed: `points = a·S + b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<u64>,
    pub a: Rational,
    pub b: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub by: Side,
    pub n: u64,
    /// Open completion points for Maker right after this move.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub threats: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub s: Vec<u64>,
    pub mode: CopyMode,
    pub maker: BTreeSet<u64>,
    pub breaker: BTreeSet<u64>,
    pub turn: Side,
    pub history: Vec<Move>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Maker selections after which an unwon game ends as `move_capped`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_cap: Option<usize>,
}

fn to_natural(x: &Rational) -> Option<u64> {
    if x.is_integer() {
        x.to_u64()
    } else {
        None
    }
}

fn rationals(xs: impl IntoIterator<Item = u64>) -> Vec<Rational> {
    xs.into_iter().map(Rational::from).collect()
}

/// Starts a game for a target of naturals.
pub fn new_game(s: &Pattern, mode: CopyMode) -> Result<GameState> {
    let naturals = s
        .to_naturals()
        .ok_or_else(|| Error::Domain(format!("target {{{s}}} must consist of naturals")))?;
    GameState::from_naturals(&naturals, mode)
}

impl GameState {
    pub fn from_naturals(s: &[u64], mode: CopyMode) -> Result<GameState> {
        if s.is_empty() {
            return Err(Error::Domain("target set is empty".into()));
        }
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("target {s:?} repeats an element")));
        }
        Ok(GameState {
            s: sorted,
            mode,
            maker: BTreeSet::new(),
            breaker: BTreeSet::new(),
            turn: Side::Maker,
            history: Vec::new(),
            status: Status::Ongoing,
            witness: None,
            move_cap: None,
        })
    }

    pub fn with_move_cap(mut self, cap: usize) -> GameState {
        self.move_cap = Some(cap);
        self
    }

    pub fn target(&self) -> Pattern {
        Pattern::from_naturals(&self.s).expect("targets are validated on construction")
    }

    pub fn is_free(&self, n: u64) -> bool {
        !self.maker.contains(&n) && !self.breaker.contains(&n)
    }

    pub fn maker_moves(&self) -> usize {
        self.maker.len()
    }

    pub fn breaker_moves(&self) -> usize {
        self.breaker.len()
    }

    /// Maker's selections in the order they were made.
    pub fn maker_sequence(&self) -> Vec<u64> {
        self.history.iter().filter(|m| m.by == Side::Maker).map(|m| m.n).collect()
    }

    pub fn is_over(&self) -> bool {
        self.status != Status::Ongoing
    }

    /// Plays `n` for the side to move.
    pub fn apply_move(&self, n: u64) -> Result<GameState> {
        if self.is_over() {
            return Err(Error::GameState(format!("game is over ({:?})", self.status)));
        }
        if !self.is_free(n) {
            return Err(Error::IllegalMove(format!("{n} is already selected")));
        }
        let mut next = self.clone();
        let by = self.turn;
        match by {
            Side::Maker => next.maker.insert(n),
            Side::Breaker => next.breaker.insert(n),
        };
        next.turn = by.other();
        if by == Side::Maker {
            let s = self.target();
            if let Some(w) = contains_copy(&rationals(next.maker.iter().copied()), &s, self.mode) {
                next.status = Status::MakerWon;
                next.witness = Some(Witness {
                    points: w.points.to_naturals().expect("maker holds naturals"),
                    a: w.map.a().clone(),
                    b: w.map.b().clone(),
                });
            } else if next.move_cap.is_some_and(|cap| next.maker.len() >= cap) {
                next.status = Status::MoveCapped;
            }
        }
        let threats = if next.status == Status::MakerWon {
            Vec::new()
        } else {
            open_threats(&next).into_keys().collect()
        };
        next.history.push(Move { by, n, threats });
        Ok(next)
    }

    /// The record of the game so far.
    pub fn transcript(&self) -> Transcript {
        Transcript {
            s: self.s.clone(),
            mode: self.mode,
            moves: self.history.clone(),
            status: self.status,
            witness: self.witness.clone(),
        }
    }
}

/// Points completing a copy of `sub` from the holdings `r` (`|r| = |sub| - 1`)
/// under `mode`, excluding points of `r` itself.
fn completions_in_mode(r: &Pattern, sub: &Pattern, mode: CopyMode) -> Vec<Rational> {
    let mut out = Vec::new();
    for i in 0..sub.len() {
        let rest = sub.without(i).expect("sub has at least two points");
        if let Ok(Some(g)) = find_affine_map(&rest, r, Orientation::Increasing) {
            let x = g.apply(&sub[i]);
            if map_fits_mode(&g, mode) && !r.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Free natural points `x` where some `(|sub|-1)`-subset of Maker's holdings
/// plus `x` is a copy of `sub`, with the number of such subsets per point.
/// The map also records whether each point ever lies outside the hull of a
/// subset it completes.
fn level_threats(g: &GameState, subs: &[Pattern]) -> BTreeMap<u64, (usize, bool)> {
    let mut out: BTreeMap<u64, (usize, bool)> = BTreeMap::new();
    let Some(size) = subs.first().map(|p| p.len() - 1) else {
        return out;
    };
    if size == 0 || g.maker.len() < size {
        return out;
    }
    for combo in g.maker.iter().copied().combinations(size) {
        let r = Pattern::from_naturals(&combo).expect("holdings are distinct");
        for sub in subs {
            for x in completions_in_mode(&r, sub, g.mode) {
                let Some(n) = to_natural(&x) else { continue };
                if !g.is_free(n) {
                    continue;
                }
                let outside = &x < r.first() || &x > r.last();
                let entry = out.entry(n).or_insert((0, false));
                entry.0 += 1;
                entry.1 |= outside;
            }
        }
    }
    out
}

/// Free points that would complete a copy of `S` for Maker right now, with
/// how many `(|S|-1)`-subsets of Maker's holdings each one completes.
///
/// Completions are computed over ℚ and filtered to points whose copy
/// qualifies under the game's mode.
pub fn open_threats(g: &GameState) -> BTreeMap<u64, usize> {
    let s = g.target();
    if s.len() < 2 {
        return BTreeMap::new();
    }
    level_threats(g, std::slice::from_ref(&s))
        .into_iter()
        .map(|(n, (count, _))| (n, count))
        .collect()
}

/// Threats one level down: points extending Maker's `(|S|-2)`-subsets to
/// copies of some `S ∖ {s_i}`.
fn precursor_threats(g: &GameState) -> BTreeMap<u64, (usize, bool)> {
    let s = g.target();
    if s.len() < 3 {
        return BTreeMap::new();
    }
    let subs: Vec<Pattern> = (0..s.len()).map(|i| s.without(i).expect("|S| >= 3")).collect();
    level_threats(g, &subs)
}

/// Moves Maker along a realized strategy tree.
///
/// The first move is the root; afterwards Maker steps to the first child
/// (in tree order) of its current vertex whose subtree Breaker has not
/// touched.
pub fn maker_tree_move(t: &RealizedTree, g: &GameState) -> Result<u64> {
    if g.turn != Side::Maker {
        return Err(Error::GameState("it is Breaker's turn".into()));
    }
    let labels = t.natural_labels()?;
    let tree = &t.tree;
    let mut current: Option<usize> = None;
    for n in g.maker_sequence() {
        let candidates: Vec<usize> = match current {
            None => vec![tree.root()],
            Some(v) => tree.children(v).to_vec(),
        };
        current = Some(
            candidates
                .into_iter()
                .find(|&c| labels[c] == n)
                .ok_or_else(|| Error::StrategyViolated(format!("maker move {n} is off the strategy tree")))?,
        );
    }
    let Some(v) = current else {
        return Ok(labels[tree.root()]);
    };
    tree.children(v)
        .iter()
        .copied()
        .find(|&c| tree.subtree(c).iter().all(|&u| !g.breaker.contains(&labels[u])))
        .map(|c| labels[c])
        .ok_or_else(|| {
            Error::StrategyViolated(format!(
                "no child of {} has a subtree free of Breaker's selections",
                labels[v]
            ))
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BreakerPolicy {
    /// Blocks a unique immediate completion, otherwise plays greedily.
    UniqueCompletion,
    /// Blocks the point completing the most copies; smallest free point
    /// when nothing is threatened.
    GreedyThreat,
    /// Prefers extremal completion points, looking one level ahead when
    /// nothing is immediately threatened.
    Endpoint,
    /// Uniform over the free points of the universe.
    Random { seed: u64 },
    /// Plays the listed numbers in order, then the smallest free point.
    Scripted(Vec<u64>),
    /// Waits for moves submitted from outside.
    Human,
}

impl fmt::Display for BreakerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BreakerPolicy::UniqueCompletion => f.write_str("unique_completion"),
            BreakerPolicy::GreedyThreat => f.write_str("greedy_threat"),
            BreakerPolicy::Endpoint => f.write_str("endpoint"),
            BreakerPolicy::Random { seed } => write!(f, "random:{seed}"),
            BreakerPolicy::Scripted(moves) => write!(f, "scripted:{}", moves.iter().join(",")),
            BreakerPolicy::Human => f.write_str("human"),
        }
    }
}

impl FromStr for BreakerPolicy {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let (name, arg) = match text.split_once(':') {
            Some((name, arg)) => (name.trim(), Some(arg.trim())),
            None => (text.trim(), None),
        };
        let parse_u64 = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("expected a natural, got {v:?}")))
        };
        match (name, arg) {
            ("unique" | "unique_completion", None) => Ok(BreakerPolicy::UniqueCompletion),
            ("greedy" | "greedy_threat", None) => Ok(BreakerPolicy::GreedyThreat),
            ("endpoint", None) => Ok(BreakerPolicy::Endpoint),
            ("human", None) => Ok(BreakerPolicy::Human),
            ("random", None) => Ok(BreakerPolicy::Random { seed: 0 }),
            ("random", Some(seed)) => Ok(BreakerPolicy::Random { seed: parse_u64(seed)? }),
            ("scripted", arg) => {
                let moves = arg
                    .unwrap_or("")
                    .split(',')
                    .filter(|v| !v.trim().is_empty())
                    .map(parse_u64)
                    .collect::<Result<Vec<_>>>()?;
                Ok(BreakerPolicy::Scripted(moves))
            }
            _ => Err(Error::Parse(format!("unknown breaker policy {text:?}"))),
        }
    }
}

impl Serialize for BreakerPolicy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BreakerPolicy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// What a Breaker policy decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakerReply {
    Play(u64),
    AwaitingInput,
}

/// Default Breaker universe `[0, 4·max label]` for a realized tree.
pub fn default_universe(t: &RealizedTree) -> u64 {
    t.natural_labels()
        .ok()
        .and_then(|ls| ls.into_iter().max())
        .unwrap_or(0)
        .saturating_mul(4)
        .max(16)
}

fn smallest_free(g: &GameState, universe: u64) -> Result<u64> {
    (0..=universe)
        .find(|&n| g.is_free(n))
        .ok_or_else(|| Error::Resource(format!("no free natural in [0, {universe}]")))
}

fn most_threatened(threats: &BTreeMap<u64, usize>) -> Option<u64> {
    // max_by_key keeps the last maximum; iterate descending so ties go to the smallest.
    threats.iter().rev().max_by_key(|(_, &count)| count).map(|(&n, _)| n)
}

fn extremal_choice(threats: &BTreeMap<u64, (usize, bool)>) -> Option<u64> {
    threats
        .iter()
        .rev()
        .max_by_key(|(_, &(count, outside))| (outside, count))
        .map(|(&n, _)| n)
}

/// Breaker's reply under `policy`, drawing fallback moves from `[0, universe]`.
pub fn breaker_policy_move(policy: &BreakerPolicy, g: &GameState, universe: u64) -> Result<BreakerReply> {
    if g.is_over() {
        return Err(Error::GameState(format!("game is over ({:?})", g.status)));
    }
    if g.turn != Side::Breaker {
        return Err(Error::GameState("it is Maker's turn".into()));
    }
    let n = match policy {
        BreakerPolicy::Human => return Ok(BreakerReply::AwaitingInput),
        BreakerPolicy::UniqueCompletion => {
            let threats = open_threats(g);
            if threats.len() == 1 {
                *threats.keys().next().expect("one threat")
            } else {
                return breaker_policy_move(&BreakerPolicy::GreedyThreat, g, universe);
            }
        }
        BreakerPolicy::GreedyThreat => match most_threatened(&open_threats(g)) {
            Some(n) => n,
            None => smallest_free(g, universe)?,
        },
        BreakerPolicy::Endpoint => {
            let immediate = level_threats(g, std::slice::from_ref(&g.target()));
            match extremal_choice(&immediate).or_else(|| extremal_choice(&precursor_threats(g))) {
                Some(n) => n,
                None => smallest_free(g, universe)?,
            }
        }
        BreakerPolicy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rng.set_stream(g.breaker_moves() as u64);
            let pick = (0..64).map(|_| rng.gen_range(0..=universe)).find(|&n| g.is_free(n));
            match pick {
                Some(n) => n,
                None => {
                    let free: Vec<u64> = (0..=universe).filter(|&n| g.is_free(n)).collect();
                    if free.is_empty() {
                        return Err(Error::Resource(format!("no free natural in [0, {universe}]")));
                    }
                    free[rng.gen_range(0..free.len())]
                }
            }
        }
        BreakerPolicy::Scripted(moves) => match moves.get(g.breaker_moves()) {
            Some(&n) if g.is_free(n) => n,
            _ => smallest_free(g, universe)?,
        },
    };
    Ok(BreakerReply::Play(n))
}

/// The side choosing Maker's moves in a play-out.
#[derive(Debug, Clone)]
pub enum MakerAgent {
    Tree(RealizedTree),
    /// Bounded search restricted to `board`, re-solved every move.
    Solver { board: Board, budget: usize },
}

impl MakerAgent {
    pub fn choose(&self, g: &GameState) -> Result<u64> {
        match self {
            MakerAgent::Tree(t) => maker_tree_move(t, g),
            MakerAgent::Solver { board, budget } => {
                let left = budget.saturating_sub(g.maker_moves());
                solver::best_move(&g.target(), board, g, left)
            }
        }
    }

    fn universe(&self) -> u64 {
        match self {
            MakerAgent::Tree(t) => default_universe(t),
            MakerAgent::Solver { board, .. } => board.points().last().copied().unwrap_or(0).saturating_mul(4).max(16),
        }
    }
}

/// Record of a finished (or capped) game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub s: Vec<u64>,
    pub mode: CopyMode,
    pub moves: Vec<Move>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Plays until Maker wins or has made `move_cap` selections.
pub fn play_out(
    s: &Pattern,
    maker: &MakerAgent,
    breaker: &BreakerPolicy,
    move_cap: usize,
    mode: CopyMode,
) -> Result<Transcript> {
    if move_cap == 0 {
        return Err(Error::Contract("move cap must be at least 1".into()));
    }
    if *breaker == BreakerPolicy::Human {
        return Err(Error::Contract("a human Breaker cannot be played out automatically".into()));
    }
    let universe = maker.universe();
    let mut g = new_game(s, mode)?.with_move_cap(move_cap);
    while !g.is_over() {
        let n = match g.turn {
            Side::Maker => maker.choose(&g)?,
            Side::Breaker => match breaker_policy_move(breaker, &g, universe)? {
                BreakerReply::Play(n) => n,
                BreakerReply::AwaitingInput => unreachable!("human policies are rejected above"),
            },
        };
        g = g.apply_move(n)?;
    }
    Ok(g.transcript())
}
