//! Live games: one Maker tree agent per session, with optional JSON-lines
//! persistence of every state change.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use affmb_core::game::{
    breaker_policy_move, default_universe, maker_tree_move, new_game, open_threats, BreakerPolicy, BreakerReply,
    GameState, Side,
};
use affmb_core::strategy::{build_strategy, prepare_agent_tree, Construction, RealizedTree};
use affmb_core::symmetry::{classify, SymmetryKind};
use affmb_core::{CopyMode, Error, Pattern, Result};
use serde::{Deserialize, Serialize};

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSession {
    pub id: String,
    pub state: GameState,
    pub realized: RealizedTree,
    pub policy: BreakerPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SymmetryKind>,
    pub construction: Construction,
    pub claimed_moves: usize,
    pub created_ms: u64,
    pub updated_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threat {
    pub n: u64,
    /// How many Maker subsets the point completes.
    pub count: usize,
}

/// A session as returned to clients: the stored state plus the points
/// Breaker currently has to worry about.
#[derive(Debug, Serialize)]
pub struct SessionView<'a> {
    #[serde(flatten)]
    pub session: &'a GameSession,
    pub threats: Vec<Threat>,
}

impl GameSession {
    /// Builds Maker's tree for `s` and lets Maker open. Automatic Breaker
    /// policies are played out to the end immediately.
    pub fn start(id: String, s: &[u64], mode: CopyMode, policy: BreakerPolicy) -> Result<GameSession> {
        let pattern = Pattern::from_naturals(s)?;
        let strategy = build_strategy(&pattern)?;
        let realized = prepare_agent_tree(&strategy.tree, &pattern)?;
        let state = new_game(&pattern, mode)?.with_move_cap(strategy.claimed_moves);
        let kind = if s.len() >= 3 { Some(classify(&pattern)?.kind) } else { None };
        let now = now_ms();
        let mut session = GameSession {
            id,
            state,
            realized,
            policy,
            kind,
            construction: strategy.construction,
            claimed_moves: strategy.claimed_moves,
            created_ms: now,
            updated_ms: now,
        };
        session.advance()?;
        Ok(session)
    }

    fn advance(&mut self) -> Result<()> {
        let universe = default_universe(&self.realized);
        while !self.state.is_over() {
            let n = match self.state.turn {
                Side::Maker => maker_tree_move(&self.realized, &self.state)?,
                Side::Breaker => match breaker_policy_move(&self.policy, &self.state, universe)? {
                    BreakerReply::Play(n) => n,
                    BreakerReply::AwaitingInput => break,
                },
            };
            self.state = self.state.apply_move(n)?;
        }
        self.updated_ms = now_ms();
        Ok(())
    }

    /// Applies a submitted Breaker move followed by Maker's reply.
    pub fn breaker_move(&mut self, n: u64) -> Result<()> {
        if self.policy != BreakerPolicy::Human {
            return Err(Error::GameState(format!("Breaker is played by the {} policy in this session", self.policy)));
        }
        if self.state.is_over() {
            return Err(Error::GameState("the game is over".into()));
        }
        if self.state.turn != Side::Breaker {
            return Err(Error::GameState("it is not Breaker's turn".into()));
        }
        self.state = self.state.apply_move(n)?;
        self.advance()
    }

    pub fn threats(&self) -> Vec<Threat> {
        if self.state.is_over() {
            return Vec::new();
        }
        open_threats(&self.state)
            .into_iter()
            .map(|(n, count)| Threat { n, count })
            .collect()
    }

    pub fn view(&self) -> SessionView<'_> {
        SessionView {
            session: self,
            threats: self.threats(),
        }
    }
}

/// A stored HTTP response, replayed for repeated request tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub status: u16,
    pub body: String,
}

#[derive(Debug)]
pub struct Entry {
    pub session: GameSession,
    pub replies: HashMap<String, Reply>,
}

#[derive(Serialize, Deserialize)]
struct LogLine {
    event: String,
    session: GameSession,
}

const LOG_FILE: &str = "sessions.jsonl";

/// All live sessions, each behind its own lock.
#[derive(Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<tokio::sync::Mutex<Entry>>>>,
    /// Replies to game creations, keyed by request token.
    pub created: tokio::sync::Mutex<HashMap<String, Reply>>,
    log: Option<Mutex<File>>,
}

impl SessionStore {
    pub fn in_memory() -> SessionStore {
        SessionStore::default()
    }

    /// Opens (or creates) `dir/sessions.jsonl` and restores the latest
    /// snapshot of every session recorded there.
    pub fn persistent(dir: &Path) -> std::io::Result<SessionStore> {
        fs::create_dir_all(dir)?;
        let path = dir.join(LOG_FILE);
        let mut sessions = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: LogLine = serde_json::from_str(&line)
                    .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
                sessions.insert(entry.session.id.clone(), entry.session);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        let store = SessionStore {
            log: Some(Mutex::new(file)),
            ..SessionStore::default()
        };
        {
            let mut map = store.sessions.write().expect("fresh lock");
            for (id, session) in sessions {
                map.insert(
                    id,
                    Arc::new(tokio::sync::Mutex::new(Entry {
                        session,
                        replies: HashMap::new(),
                    })),
                );
            }
        }
        Ok(store)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, id: &str) -> Option<Arc<tokio::sync::Mutex<Entry>>> {
        self.sessions.read().expect("session map lock").get(id).cloned()
    }

    pub fn insert(&self, session: GameSession) -> Result<()> {
        self.record("created", &session)?;
        let id = session.id.clone();
        let entry = Entry {
            session,
            replies: HashMap::new(),
        };
        self.sessions
            .write()
            .expect("session map lock")
            .insert(id, Arc::new(tokio::sync::Mutex::new(entry)));
        Ok(())
    }

    /// Appends a snapshot to the log when persistence is on.
    pub fn record(&self, event: &str, session: &GameSession) -> Result<()> {
        let Some(log) = &self.log else {
            return Ok(());
        };
        let line = serde_json::to_string(&LogLine {
            event: event.to_string(),
            session: session.clone(),
        })
        .map_err(|e| Error::Internal(e.to_string()))?;
        let mut file = log.lock().expect("log lock");
        writeln!(file, "{line}").map_err(|e| Error::Resource(format!("cannot write session log: {e}")))
    }
}
