use std::io::Cursor;
use std::sync::Arc;
use std::time::Duration;

use affmb::api::router;
use affmb::session::SessionStore;
use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>, token: Option<&str>) -> (StatusCode, String) {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(t) = token {
        req = req.header("idempotency-key", t);
    }
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn send_json(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (status, text) = send(app, method, uri, body, None).await;
    (status, serde_json::from_str(&text).unwrap())
}

fn app() -> Router {
    router(Arc::new(SessionStore::in_memory()))
}

fn numbers(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

async fn human_game(app: &Router) -> Value {
    let (status, session) = send_json(app, "POST", "/api/games", Some(json!({"s": [1, 2, 3, 4], "mode": "rational", "breaker": "human"}))).await;
    assert_eq!(status, StatusCode::CREATED);
    session
}

#[tokio::test]
async fn new_game_opens_with_the_realized_root() {
    let app = app();
    let session = human_game(&app).await;
    let root = session["realized"]["root"].as_u64().unwrap() as usize;
    let root_label: u64 = session["realized"]["vertices"][root]["label"].as_str().unwrap().parse().unwrap();
    assert_eq!(numbers(&session["state"]["maker"]), vec![root_label]);
    assert_eq!(session["state"]["turn"], "breaker");
    assert_eq!(session["kind"], "arithmetic");
    assert_eq!(session["claimed_moves"], 4);

    let id = session["id"].as_str().unwrap();
    let (status, fetched) = send_json(&app, "GET", &format!("/api/games/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(fetched, session);
}

#[tokio::test]
async fn blocking_the_largest_threat_still_loses_in_four() {
    let app = app();
    let mut session = human_game(&app).await;
    let id = session["id"].as_str().unwrap().to_string();
    while session["state"]["status"] == "ongoing" {
        let threats = session["threats"].as_array().unwrap();
        let pick = threats
            .iter()
            .max_by_key(|t| (t["count"].as_u64().unwrap(), std::cmp::Reverse(t["n"].as_u64().unwrap())))
            .map(|t| t["n"].as_u64().unwrap())
            .unwrap_or(1000 + session["state"]["breaker"].as_array().unwrap().len() as u64);
        let (status, next) = send_json(&app, "POST", &format!("/api/games/{id}/breaker-move"), Some(json!({"n": pick}))).await;
        assert_eq!(status, StatusCode::OK);
        session = next;
    }
    assert_eq!(session["state"]["status"], "maker_won");
    assert!(numbers(&session["state"]["maker"]).len() <= 4);
    assert_eq!(session["state"]["witness"]["points"].as_array().unwrap().len(), 4);
    assert!(session["threats"].as_array().unwrap().is_empty());

    let (status, err) = send_json(&app, "POST", &format!("/api/games/{id}/breaker-move"), Some(json!({"n": 5000}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(err["class"], "conflict");
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let session = human_game(&app).await;
    let id = session["id"].as_str().unwrap();
    let taken = numbers(&session["state"]["maker"])[0];
    let uri = format!("/api/games/{id}/breaker-move");

    let (status, _) = send_json(&app, "POST", &uri, Some(json!({"n": taken}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = send(&app, "POST", &uri, None, None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send_json(&app, "POST", &uri, Some(json!({"n": -3}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, err) = send_json(&app, "GET", "/api/games/nope", None).await;
    assert_eq!((status, err["class"].as_str()), (StatusCode::NOT_FOUND, Some("not_found")));
    let (status, _) = send_json(&app, "POST", "/api/games/nope/breaker-move", Some(json!({"n": 1}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    for bad in [
        json!({"s": [2, 2, 3]}),
        json!({"s": []}),
        json!({"s": [1, 2, 3, 4, 5]}),
        json!({"s": [1, 2, 3], "breaker": "sneaky"}),
        json!({"s": [1, 2, 3], "mode": "complex"}),
        json!({"t": 1}),
    ] {
        let (status, _) = send_json(&app, "POST", "/api/games", Some(bad.clone())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{bad}");
    }
}

#[tokio::test]
async fn automatic_breaker_sessions_finish_at_creation() {
    let app = app();
    let (status, session) = send_json(&app, "POST", "/api/games", Some(json!({"s": [0, 1, 2, 5], "breaker": "random", "seed": 4}))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(session["state"]["status"], "maker_won");
    assert_eq!(session["policy"], "random:4");
    let id = session["id"].as_str().unwrap();
    let (status, _) = send_json(&app, "POST", &format!("/api/games/{id}/breaker-move"), Some(json!({"n": 99}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn repeated_tokens_replay_the_first_reply() {
    let app = app();
    let body = json!({"s": [1, 2, 3, 4], "breaker": "human"});
    let (s1, first) = send(&app, "POST", "/api/games", Some(body.clone()), Some("create-1")).await;
    let (s2, second) = send(&app, "POST", "/api/games", Some(body), Some("create-1")).await;
    assert_eq!((s1, s2), (StatusCode::CREATED, StatusCode::CREATED));
    assert_eq!(first, second);

    let id = serde_json::from_str::<Value>(&first).unwrap()["id"].as_str().unwrap().to_string();
    let uri = format!("/api/games/{id}/breaker-move");
    let (a, one) = send(&app, "POST", &uri, Some(json!({"n": 500})), Some("move-1")).await;
    let (b, two) = send(&app, "POST", &uri, Some(json!({"n": 500, "request_token": "move-1"})), None).await;
    assert_eq!((a, b), (StatusCode::OK, StatusCode::OK));
    assert_eq!(one, two);
    let (_, state) = send_json(&app, "GET", &format!("/api/games/{id}"), None).await;
    assert_eq!(numbers(&state["state"]["breaker"]), vec![500]);
    assert_eq!(numbers(&state["state"]["maker"]).len(), 2);
}

#[tokio::test]
async fn classify_and_trees_match_the_cli() {
    let app = app();
    let (status, body) = send(&app, "GET", "/api/classify?s=1,2,3,5", None, None).await;
    assert_eq!(status, StatusCode::OK);
    let mut out = Vec::new();
    let code = affmb::cli::run(["affmb", "classify", "--set", "1,2,3,5"], &mut out, &mut Vec::new(), &mut Cursor::new(Vec::new()));
    assert_eq!(code, 0);
    let out = String::from_utf8(out).unwrap();
    let (_, cli_json) = out.split_once('\n').unwrap();
    assert_eq!(cli_json.trim_end(), body);

    let (status, _) = send(&app, "GET", "/api/classify?s=1,x", None, None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "GET", "/api/classify", None, None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, tree) = send_json(&app, "POST", "/api/trees", Some(json!({"s": [0, 1, 2, 5], "realize": true}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(tree["claimed_moves"], 5);
    assert_eq!(tree["realized"]["integer_copy_certified"], true);
    let (status, _) = send_json(&app, "POST", "/api/trees", Some(json!({"s": "1,2,3,4,5"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn cors_is_enabled() {
    let req = Request::builder()
        .uri("/api/classify?s=1,2,4,8")
        .header("origin", "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let res = app().oneshot(req).await.unwrap();
    assert!(res.headers().contains_key("access-control-allow-origin"));
}

#[tokio::test]
async fn one_busy_session_does_not_block_another() {
    let store = Arc::new(SessionStore::in_memory());
    let app = router(store.clone());
    let a = human_game(&app).await;
    let b = human_game(&app).await;
    let entry = store.get(a["id"].as_str().unwrap()).unwrap();
    let _held = entry.lock().await;
    let uri = format!("/api/games/{}/breaker-move", b["id"].as_str().unwrap());
    let reply = tokio::time::timeout(Duration::from_secs(5), send_json(&app, "POST", &uri, Some(json!({"n": 700})))).await;
    assert_eq!(reply.expect("session b answered").0, StatusCode::OK);
}

#[tokio::test]
async fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(Arc::new(SessionStore::persistent(dir.path()).unwrap()));
    let session = human_game(&app).await;
    let id = session["id"].as_str().unwrap();
    let (_, after) = send_json(&app, "POST", &format!("/api/games/{id}/breaker-move"), Some(json!({"n": 321}))).await;
    let log = std::fs::read_to_string(dir.path().join("sessions.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 2);

    let restored = SessionStore::persistent(dir.path()).unwrap();
    assert_eq!(restored.len(), 1);
    let app = router(Arc::new(restored));
    let (status, fetched) = send_json(&app, "GET", &format!("/api/games/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(fetched["state"], after["state"]);
}
