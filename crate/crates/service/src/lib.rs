//! HTTP service for interactive learning sessions.
//!
//! Routes:
//!
//! - `POST /sessions` with `{"kind": "pattern", "chart": ...}` or
//!   `{"kind": "family-or" | "family-and", "family": {...}}`
//! - `GET /sessions/{id}`, `GET /sessions/{id}/query`
//! - `POST /sessions/{id}/answer` with `{"answer": 0|1, "key": "...", "seq": n?}`
//! - `GET /sessions/{id}/result`, `GET /sessions/{id}/transcript`
//! - `GET /health`
//!
//! Answers to one session are serialized; a request that finds the session busy
//! gets `409`. Every accepted answer is on disk before the response is sent.

pub mod error;
pub mod session;
pub mod store;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};
use tokio::sync::Mutex;
use tower_http::services::ServeDir;

pub use error::ApiError;
use session::{AnswerRequest, CreateRequest, Live, SessionView};
use store::{IndexEntry, Store};

#[derive(Clone, Debug)]
pub struct Config {
    pub addr: SocketAddr,
    /// Where sessions are persisted; `None` keeps everything in memory.
    pub data_dir: Option<PathBuf>,
    pub max_sessions: usize,
    /// Static files (the web UI bundle) served at `/`.
    pub static_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { addr: ([127, 0, 0, 1], 8080).into(), data_dir: None, max_sessions: 1000, static_dir: None }
    }
}

type Shared = Arc<Mutex<Live>>;

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    sessions: RwLock<HashMap<String, Shared>>,
    store: Option<Store>,
    max_sessions: usize,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl AppState {
    /// Opens the store (if any) and replays every persisted session.
    pub fn open(config: &Config) -> Result<AppState, ApiError> {
        let store = config.data_dir.as_ref().map(Store::open).transpose()?;
        let mut sessions = HashMap::new();
        if let Some(store) = &store {
            for (entry, answers) in store.load()? {
                let live = Live::restore(entry.id.clone(), entry.spec, entry.created, &answers)?;
                sessions.insert(entry.id, Arc::new(Mutex::new(live)));
            }
        }
        Ok(AppState { inner: Arc::new(Inner { sessions: RwLock::new(sessions), store, max_sessions: config.max_sessions }) })
    }

    pub fn session_count(&self) -> usize {
        self.inner.sessions.read().expect("session map lock").len()
    }

    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        self.inner.sessions.read().expect("session map lock").get(id).cloned().ok_or_else(|| ApiError::NotFound(id.to_string()))
    }
}

pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/health", get(health))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/query", get(get_query))
        .route("/sessions/{id}/answer", post(post_answer))
        .route("/sessions/{id}/result", get(get_result))
        .route("/sessions/{id}/transcript", get(get_transcript))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds `config.addr` and serves until the process is stopped.
pub async fn serve(config: Config) -> Result<(), ApiError> {
    let state = AppState::open(&config)?;
    let app = router(state, config.static_dir.clone());
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    axum::serve(listener, app).await?;
    Ok(())
}

async fn health(State(state): State<AppState>) -> Json<Value> {
    Json(json!({ "status": "ok", "sessions": state.session_count() }))
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let req: CreateRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::BadRequest(format!("invalid session request: {e}")))?;
    let spec = req.into_spec()?;
    if state.session_count() >= state.inner.max_sessions {
        return Err(ApiError::Full(state.inner.max_sessions));
    }
    let id = uuid::Uuid::new_v4().simple().to_string();
    let created = now();
    let live = Live::build(id.clone(), spec.clone(), created)?;
    if let Some(store) = &state.inner.store {
        store.create(&IndexEntry { id: id.clone(), created, spec })?;
    }
    let view = live.view();
    let mut sessions = state.inner.sessions.write().expect("session map lock");
    if sessions.len() >= state.inner.max_sessions {
        return Err(ApiError::Full(state.inner.max_sessions));
    }
    sessions.insert(id, Arc::new(Mutex::new(live)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let live = state.get(&id)?;
    let live = live.lock().await;
    Ok(Json(live.view()))
}

async fn get_query(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let live = state.get(&id)?;
    let live = live.lock().await;
    let view = live.view();
    let query = live.query()?;
    Ok(Json(json!({ "id": id, "query": query, "progress": view.progress })))
}

async fn post_answer(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Json<SessionView>, ApiError> {
    let req = AnswerRequest::parse(&body)?;
    let live = state.get(&id)?;
    let mut live = live.try_lock().map_err(|_| ApiError::Conflict(format!("session {id} is busy with another answer")))?;
    if live.is_repeat(&req)? {
        return Ok(Json(live.view()));
    }
    let (next, line) = live.prepare(&req, now())?;
    if let Some(store) = &state.inner.store {
        store.append_answer(&id, &line)?;
    }
    live.commit(next, &line);
    Ok(Json(live.view()))
}

async fn get_result(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let live = state.get(&id)?;
    let live = live.lock().await;
    let result = live.result()?;
    Ok(Json(json!({ "id": id, "result": result })))
}

async fn get_transcript(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let live = state.get(&id)?;
    let live = live.lock().await;
    Ok(Json(json!({ "id": id, "status": live.status(), "records": live.transcript() })))
}
