//! HTTP API over a [`SessionStore`]. Documents are JSON; errors are
//! problem documents whose `code` names the failure.

mod store;

use std::future::Future;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::advisor::{Advisory, DispatchPolicy};
use crate::bundled;
use crate::landmarks::{LandmarkGraph, LandmarkStatus};
use crate::session::{SessionCommand, SessionConfig, SessionError};

pub use store::{SessionStore, StoreError};

/// Body of `POST /sessions`. Either `example` names a bundled model or
/// `domain` and `problem` carry PDDL text.
#[derive(Debug, Clone, Default, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct CreateSessionRequest {
    #[serde(default)]
    pub example: Option<String>,
    #[serde(default)]
    pub domain: Option<String>,
    #[serde(default)]
    pub problem: Option<String>,
    #[serde(default)]
    pub config: Option<ConfigOverrides>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct ConfigOverrides {
    pub dispatch_policy: Option<DispatchPolicy>,
    pub suggest_budget_ms: Option<u64>,
    pub analysis_budget_ms: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct SuggestRequest {
    #[serde(default)]
    pub budget_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct AdvisoriesResponse {
    pub revision: u64,
    pub advisories: Vec<Advisory>,
}

#[derive(Debug, Clone, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct LandmarksResponse {
    pub revision: u64,
    pub graph: LandmarkGraph,
    pub statuses: Vec<LandmarkStatus>,
}

/// `application/problem+json` error body.
#[derive(Debug, Clone, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Problem {
    pub status: u16,
    pub code: String,
    pub title: String,
    pub detail: serde_json::Value,
}

pub struct ApiError {
    status: StatusCode,
    code: String,
    title: String,
    detail: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, title: impl Into<String>) -> Self {
        ApiError { status, code: code.to_string(), title: title.into(), detail: serde_json::Value::Null }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match &e {
            SessionError::InvalidCommand(_) => StatusCode::BAD_REQUEST,
            SessionError::StepNotApplicable { .. } | SessionError::DispatchBlocked { .. } => StatusCode::CONFLICT,
            SessionError::SchemaVersionMismatch { .. } | SessionError::InvalidSnapshot(_) | SessionError::Model(_) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
        };
        ApiError { status, code: e.code().to_string(), title: e.to_string(), detail: e.detail() }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(_) => ApiError::new(StatusCode::NOT_FOUND, "NotFound", e.to_string()),
            StoreError::Session(e) => e.into(),
            StoreError::Io(_) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "PersistenceError", e.to_string()),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "InvalidCommand", e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Problem { status: self.status.as_u16(), code: self.code, title: self.title, detail: self.detail };
        (self.status, [(header::CONTENT_TYPE, "application/problem+json")], Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;
type Store = Arc<SessionStore>;

pub fn router(store: Store) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/commands", post(post_command))
        .route("/sessions/{id}/advisories", get(get_advisories))
        .route("/sessions/{id}/landmarks", get(get_landmarks))
        .route("/sessions/{id}/suggest", post(post_suggest))
        .with_state(store)
}

/// Serves until `shutdown` resolves, then writes every session snapshot.
pub async fn serve(
    listener: tokio::net::TcpListener,
    store: Store,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(store.clone())).with_graceful_shutdown(shutdown).await?;
    store.flush()
}

async fn health(State(store): State<Store>) -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "sessions": store.len() }))
}

async fn list_sessions(State(store): State<Store>) -> Json<serde_json::Value> {
    Json(json!({ "sessions": store.ids() }))
}

async fn create_session(
    State(store): State<Store>,
    body: Result<Json<CreateSessionRequest>, JsonRejection>,
) -> ApiResult<impl IntoResponse> {
    let Json(req) = body?;
    let (domain, problem) = match (&req.example, &req.domain, &req.problem) {
        (Some(name), None, None) => {
            let ex = bundled::find(name).ok_or_else(|| {
                ApiError::new(StatusCode::BAD_REQUEST, "InvalidCommand", format!("unknown bundled example `{name}`"))
            })?;
            (ex.domain.to_string(), ex.problem.to_string())
        }
        (None, Some(d), Some(p)) => (d.clone(), p.clone()),
        _ => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "InvalidCommand",
                "give either `example` or both `domain` and `problem`",
            ))
        }
    };
    let mut config: SessionConfig = store.defaults();
    if let Some(o) = req.config {
        config.dispatch_policy = o.dispatch_policy.unwrap_or(config.dispatch_policy);
        config.suggest_budget_ms = o.suggest_budget_ms.unwrap_or(config.suggest_budget_ms);
        config.analysis_budget_ms = o.analysis_budget_ms.unwrap_or(config.analysis_budget_ms);
    }
    let session = tokio::task::block_in_place(|| store.create(&domain, &problem, config))?;
    Ok((StatusCode::CREATED, Json(serde_json::to_value(session.view()).expect("view serializes"))))
}

async fn get_session(State(store): State<Store>, Path(id): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let session = store.get(&id)?;
    Ok(Json(serde_json::to_value(session.view()).expect("view serializes")))
}

async fn post_command(
    State(store): State<Store>,
    Path(id): Path<String>,
    body: Result<Json<SessionCommand>, JsonRejection>,
) -> ApiResult<impl IntoResponse> {
    store.get(&id)?;
    let Json(cmd) = body?;
    Ok(Json(store.command(&id, cmd).await?))
}

async fn get_advisories(State(store): State<Store>, Path(id): Path<String>) -> ApiResult<Json<AdvisoriesResponse>> {
    let s = store.get(&id)?;
    Ok(Json(AdvisoriesResponse { revision: s.revision(), advisories: s.advisories().to_vec() }))
}

async fn get_landmarks(State(store): State<Store>, Path(id): Path<String>) -> ApiResult<Json<LandmarksResponse>> {
    let s = store.get(&id)?;
    let a = s.analysis();
    Ok(Json(LandmarksResponse { revision: s.revision(), graph: a.landmarks.clone(), statuses: a.statuses.clone() }))
}

async fn post_suggest(
    State(store): State<Store>,
    Path(id): Path<String>,
    body: Option<Json<SuggestRequest>>,
) -> ApiResult<impl IntoResponse> {
    let budget = body.and_then(|Json(b)| b.budget_ms);
    Ok(Json(store.update(&id, |s| s.handle_suggest(budget)).await?))
}
