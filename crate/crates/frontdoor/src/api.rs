//! HTTP JSON API.
//!
//! | method | path | success |
//! |---|---|---|
//! | POST | `/api/games` | 201, session after Maker's opening move |
//! | GET | `/api/games/{id}` | 200, session |
//! | POST | `/api/games/{id}/breaker-move` | 200, session after Maker's reply |
//! | GET | `/api/classify?s=1,2,3,5` | 200, classification |
//! | POST | `/api/trees` | 200, strategy tree |
//!
//! Errors are `{"error": …, "class": …}` with 400 for bad input, 404 for an
//! unknown session and 409 for occupied numbers or moves out of turn.
//! Mutations accept a request token (`Idempotency-Key` header or
//! `request_token` field); a repeated token gets the stored reply.

use std::collections::HashMap;
use std::sync::Arc;

use affmb_core::game::BreakerPolicy;
use affmb_core::{CopyMode, Error, ErrorClass, Pattern};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use tower_http::cors::CorsLayer;

use crate::reports::{classify_report, parse_set, to_json, tree_report};
use crate::session::{GameSession, Reply, SessionStore};

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/api/games", post(create_game))
        .route("/api/games/{id}", get(get_game))
        .route("/api/games/{id}/breaker-move", post(breaker_move))
        .route("/api/classify", get(classify))
        .route("/api/trees", post(trees))
        .layer(CorsLayer::permissive())
        .with_state(store)
}

fn json_reply(status: StatusCode, body: String) -> Reply {
    Reply {
        status: status.as_u16(),
        body,
    }
}

fn error_reply(status: StatusCode, class: &str, message: impl Into<String>) -> Reply {
    let body = serde_json::json!({ "error": message.into(), "class": class });
    json_reply(status, to_json(&body))
}

fn from_error(e: &Error) -> Reply {
    match e.class() {
        ErrorClass::Domain => error_reply(StatusCode::BAD_REQUEST, "domain", e.to_string()),
        ErrorClass::Conflict => error_reply(StatusCode::CONFLICT, "conflict", e.to_string()),
        ErrorClass::Internal => error_reply(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()),
    }
}

fn not_found(id: &str) -> Reply {
    error_reply(StatusCode::NOT_FOUND, "not_found", format!("no game with id {id:?}"))
}

impl IntoResponse for Reply {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, [(header::CONTENT_TYPE, "application/json")], self.body).into_response()
    }
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, Reply> {
    serde_json::from_slice(body)
        .map_err(|e| error_reply(StatusCode::BAD_REQUEST, "domain", format!("malformed request body: {e}")))
}

fn request_token(headers: &HeaderMap, field: Option<String>) -> Option<String> {
    headers
        .get("idempotency-key")
        .and_then(|v| v.to_str().ok())
        .map(str::to_string)
        .or(field)
}

#[derive(Deserialize)]
struct CreateGame {
    s: Vec<u64>,
    #[serde(default)]
    mode: CopyMode,
    #[serde(default)]
    breaker: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    request_token: Option<String>,
}

/// Reads a policy name; a bare `random` takes its seed from `seed`.
pub fn parse_policy(name: Option<&str>, seed: Option<u64>) -> Result<BreakerPolicy, Error> {
    match name.unwrap_or("human") {
        "random" => Ok(BreakerPolicy::Random { seed: seed.unwrap_or(0) }),
        other => other.parse(),
    }
}

fn start_game(store: &SessionStore, req: &CreateGame) -> Reply {
    let policy = match parse_policy(req.breaker.as_deref(), req.seed) {
        Ok(p) => p,
        Err(e) => return from_error(&e),
    };
    let id = uuid::Uuid::new_v4().to_string();
    match GameSession::start(id, &req.s, req.mode, policy) {
        Ok(session) => {
            let reply = json_reply(StatusCode::CREATED, to_json(&session.view()));
            match store.insert(session) {
                Ok(()) => reply,
                Err(e) => from_error(&e),
            }
        }
        Err(e) => from_error(&e),
    }
}

async fn create_game(State(store): State<Arc<SessionStore>>, headers: HeaderMap, body: Bytes) -> Reply {
    let req: CreateGame = match parse_body(&body) {
        Ok(r) => r,
        Err(reply) => return reply,
    };
    match request_token(&headers, req.request_token.clone()) {
        Some(token) => {
            let mut created = store.created.lock().await;
            if let Some(reply) = created.get(&token) {
                return reply.clone();
            }
            let reply = start_game(&store, &req);
            created.insert(token, reply.clone());
            reply
        }
        None => start_game(&store, &req),
    }
}

async fn get_game(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> Reply {
    match store.get(&id) {
        Some(entry) => json_reply(StatusCode::OK, to_json(&entry.lock().await.session.view())),
        None => not_found(&id),
    }
}

#[derive(Deserialize)]
struct BreakerMove {
    n: u64,
    #[serde(default)]
    request_token: Option<String>,
}

async fn breaker_move(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Reply {
    let Some(entry) = store.get(&id) else {
        return not_found(&id);
    };
    let req: BreakerMove = match parse_body(&body) {
        Ok(r) => r,
        Err(reply) => return reply,
    };
    let token = request_token(&headers, req.request_token.clone());
    let mut entry = entry.lock().await;
    if let Some(reply) = token.as_ref().and_then(|t| entry.replies.get(t)) {
        return reply.clone();
    }
    let mut next = entry.session.clone();
    let reply = match next.breaker_move(req.n).and_then(|()| store.record("breaker_move", &next)) {
        Ok(()) => {
            entry.session = next;
            json_reply(StatusCode::OK, to_json(&entry.session.view()))
        }
        Err(e) => from_error(&e),
    };
    if let Some(token) = token {
        entry.replies.insert(token, reply.clone());
    }
    reply
}

async fn classify(Query(params): Query<HashMap<String, String>>) -> Reply {
    let Some(text) = params.get("s") else {
        return error_reply(StatusCode::BAD_REQUEST, "domain", "missing query parameter s");
    };
    match parse_set(text).and_then(|s| classify_report(&s)) {
        Ok(report) => json_reply(StatusCode::OK, to_json(&report)),
        Err(e) => from_error(&e),
    }
}

#[derive(Deserialize)]
struct TreeRequest {
    s: Pattern,
    #[serde(default)]
    realize: bool,
}

async fn trees(body: Bytes) -> Reply {
    let req: TreeRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(reply) => return reply,
    };
    match tree_report(&req.s, req.realize) {
        Ok(report) => json_reply(StatusCode::OK, to_json(&report)),
        Err(e) => from_error(&e),
    }
}
