//! JSON API for the play client.
//!
//! Generation and solving run on the blocking pool. With a levels directory
//! configured, seeded generation requests are answered from disk when the
//! same parameters were generated before.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use swap_planarity::generate::{generate_level, EdgeBudget, GenerationParams, DEFAULT_DELTA};
use swap_planarity::geom::RenderMetrics;
use swap_planarity::puzzle::{PuzzleError, PuzzleInstance};
use swap_planarity::solve::{min_swaps_with, SolveOptions};
use tower_http::services::ServeDir;

/// Request limits; generation and search are exponential in these.
pub const MAX_N: usize = 30;
pub const MAX_SWAPS: u32 = 6;
pub const MAX_SOLVE_DEPTH: u32 = 10;
pub const DEFAULT_N: usize = 10;
pub const DEFAULT_SWAPS: u32 = 2;
pub const DEFAULT_SOLVE_DEPTH: u32 = 6;

#[derive(Clone, Debug, Default)]
pub struct ServerConfig {
    pub levels: Option<PathBuf>,
    pub static_dir: Option<PathBuf>,
}

type Shared = Arc<ServerConfig>;

pub fn router(config: ServerConfig) -> Router {
    let static_dir = config.static_dir.clone();
    let app = Router::new()
        .route("/api/puzzle/new", get(new_puzzle))
        .route("/api/solve", post(solve))
        .with_state(Arc::new(config));
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.fallback(|| async { error(StatusCode::NOT_FOUND, "no such route".into()) }),
    }
}

pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, message: String) -> Response {
    json(status, serde_json::json!({ "error": message }).to_string())
}

#[derive(Debug, Default, Deserialize)]
pub struct NewPuzzleQuery {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub s: Option<u32>,
    pub delta: Option<i64>,
    pub seed: Option<u64>,
}

impl NewPuzzleQuery {
    fn params(&self, seed: u64) -> Result<GenerationParams, String> {
        let n = self.n.unwrap_or(DEFAULT_N);
        let s = self.s.unwrap_or(DEFAULT_SWAPS);
        if n > MAX_N {
            return Err(format!("n = {n} exceeds the server limit of {MAX_N}"));
        }
        if s > MAX_SWAPS {
            return Err(format!("s = {s} exceeds the server limit of {MAX_SWAPS}"));
        }
        let m = self.m.unwrap_or((2 * n).saturating_sub(3));
        let mut params = GenerationParams::new(n, EdgeBudget::Total(m), s, seed);
        params.metrics =
            RenderMetrics::from_delta(self.delta.unwrap_or(DEFAULT_DELTA)).map_err(|e| e.to_string())?;
        params.validate().map_err(|e| e.to_string())?;
        Ok(params)
    }
}

fn cache_path(dir: &Path, p: &GenerationParams) -> PathBuf {
    let edges = match p.edges {
        EdgeBudget::Total(m) => format!("m{m}"),
        EdgeBudget::Remove(k) => format!("r{k}"),
    };
    dir.join(format!("n{}-{edges}-s{}-d{}-seed{}.json", p.n, p.s, p.metrics.delta, p.seed))
}

fn generate_cached(levels: Option<&Path>, params: &GenerationParams, cacheable: bool) -> Result<String, String> {
    let path = levels.filter(|_| cacheable).map(|dir| cache_path(dir, params));
    if let Some(path) = &path {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(inst) = PuzzleInstance::from_json(&text) {
                return Ok(inst.to_json());
            }
        }
    }
    let body = generate_level(params).map_err(|e| e.to_string())?.instance.to_json();
    if let Some(path) = &path {
        // write then rename, so concurrent readers never see half a file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if std::fs::write(&tmp, &body).is_ok() {
            let _ = std::fs::rename(&tmp, path);
        }
    }
    Ok(body)
}

async fn new_puzzle(State(config): State<Shared>, Query(q): Query<NewPuzzleQuery>) -> Response {
    let seed = q.seed.unwrap_or_else(rand::random);
    let params = match q.params(seed) {
        Ok(p) => p,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    let cacheable = q.seed.is_some();
    let result = tokio::task::spawn_blocking(move || {
        generate_cached(config.levels.as_deref(), &params, cacheable)
    })
    .await;
    match result {
        Ok(Ok(body)) => json(StatusCode::OK, body),
        Ok(Err(e)) => error(StatusCode::UNPROCESSABLE_ENTITY, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

#[derive(Debug, Default, Deserialize)]
pub struct SolveQuery {
    pub max_depth: Option<u32>,
}

async fn solve(Query(q): Query<SolveQuery>, body: String) -> Response {
    let inst = match PuzzleInstance::from_json(&body) {
        Ok(inst) => inst,
        Err(e @ PuzzleError::Invalid(_)) => return error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
        Err(e) => return error(StatusCode::BAD_REQUEST, e.to_string()),
    };
    let depth = q.max_depth.unwrap_or(if inst.meta.s > 0 { inst.meta.s } else { DEFAULT_SOLVE_DEPTH });
    if depth > MAX_SOLVE_DEPTH {
        return error(
            StatusCode::BAD_REQUEST,
            format!("max_depth = {depth} exceeds the server limit of {MAX_SOLVE_DEPTH}"),
        );
    }
    let result = tokio::task::spawn_blocking(move || min_swaps_with(&inst, &SolveOptions::new(depth))).await;
    match result {
        Ok(Ok(report)) => json(StatusCode::OK, serde_json::to_string(&report).expect("report serializes")),
        Ok(Err(e)) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}
