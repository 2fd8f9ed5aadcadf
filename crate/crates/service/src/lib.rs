//! HTTP exam service.
//!
//! Serves questions, grades answers synchronously as they arrive, and exposes
//! the instructor review queue and policy editing. See `docs/api.md` for the
//! wire format.

mod api;
pub mod config;
mod error;
mod sessions;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::{MatchedPath, Request};
use axum::middleware::{self, Next};
use axum::response::Response;
use axum::routing::{get, post};
use axum::Router;
use tashih_store::ExamStore;

pub use api::AnswerReceipt;
pub use config::ServiceConfig;
pub use error::ApiError;
pub use sessions::{Session, SessionRegistry};

#[derive(Clone)]
pub struct AppState {
    store: Arc<ExamStore>,
    sessions: Arc<SessionRegistry>,
    instructor_token: Arc<str>,
    student_token: Arc<str>,
}

impl AppState {
    pub fn new(store: Arc<ExamStore>, config: &ServiceConfig) -> Self {
        Self {
            store,
            sessions: Arc::new(SessionRegistry::new(config.session_ttl_secs)),
            instructor_token: config.instructor_token.as_str().into(),
            student_token: config.student_token.as_str().into(),
        }
    }

    pub fn store(&self) -> &ExamStore {
        &self.store
    }
}

/// One log line per request. The route template is logged instead of the raw
/// path so session tokens never reach the logs.
async fn log_request(request: Request, next: Next) -> Response {
    let started = Instant::now();
    let method = request.method().clone();
    let route = request
        .extensions()
        .get::<MatchedPath>()
        .map_or_else(|| "<unmatched>".to_string(), |p| p.as_str().to_string());
    let response = next.run(request).await;
    tracing::info!(
        %method,
        route,
        status = response.status().as_u16(),
        micros = started.elapsed().as_micros() as u64,
        "request"
    );
    response
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/health", get(api::health))
        .route("/api/exams", post(api::create_exam))
        .route("/api/exams/{exam_id}/questions/{number}", get(api::get_question))
        .route("/api/exams/{exam_id}/policy", get(api::get_policy).put(api::put_policy))
        .route("/api/sessions", post(api::open_session))
        .route("/api/sessions/{token}/answers", post(api::submit_answer))
        .route("/api/review-queue", get(api::review_queue))
        .route("/api/review/{submission_id}", post(api::record_review))
        .route_layer(middleware::from_fn(log_request))
        .with_state(state)
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Store(#[from] tashih_store::StoreError),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: String, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Installs a plain-text subscriber on stdout, filtered by `RUST_LOG`
/// (default `info`).
pub fn init_logging() {
    let filter = tracing_subscriber::EnvFilter::try_from_default_env()
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info"));
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stdout)
        .with_ansi(false)
        .try_init();
}

/// Opens the store, binds and serves until Ctrl-C or SIGTERM.
///
/// Prints `listening on http://ADDR` to stdout once the socket is bound, which
/// is the way to learn the port when `listen` ends in `:0`.
pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    let store = Arc::new(ExamStore::open(&config.store_path)?);
    let listener = tokio::net::TcpListener::bind(&config.listen)
        .await
        .map_err(|source| ServeError::Bind {
            addr: config.listen.clone(),
            source,
        })?;
    let addr: SocketAddr = listener.local_addr()?;
    println!("listening on http://{addr}");
    tracing::info!(store = %config.store_path.display(), "store opened");
    let app = router(AppState::new(store, &config));
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown_signal())
        .await?;
    Ok(())
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        if let Ok(mut s) = tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            s.recv().await;
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
}
