//! Read-only HTTP JSON API over one or more loaded datasets.
//!
//! Every handler is a pure read of a sealed [`Dataset`]; no request leaves
//! state behind. IRIs in paths are percent-encoded.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use odpkit_core::dataset::{load_config, Dataset, DatasetError};
use odpkit_core::explore::{ColumnInfo, ExploreError, FilterSet, TableRow, WorldAssumption};
use odpkit_core::graph::is_absolute_iri;
use serde::Serialize;
use tower_http::services::ServeDir;

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_LIMIT: usize = 50;
pub const JSON_CONTENT_TYPE: &str = "application/json; charset=utf-8";

/// Loaded datasets in configuration order.
#[derive(Debug, Clone, Default)]
pub struct AppState {
    datasets: Arc<Vec<Arc<Dataset>>>,
}

impl AppState {
    pub fn new(datasets: Vec<Dataset>) -> Self {
        Self {
            datasets: Arc::new(datasets.into_iter().map(Arc::new).collect()),
        }
    }

    /// Loads every dataset listed in a configuration file.
    pub fn from_config(path: &FsPath) -> Result<Self, DatasetError> {
        let configs = load_config(path)?;
        let datasets = configs
            .iter()
            .map(Dataset::load)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(datasets))
    }

    pub fn dataset(&self, id: &str) -> Option<&Arc<Dataset>> {
        self.datasets.iter().find(|d| d.id() == id)
    }

    pub fn datasets(&self) -> &[Arc<Dataset>] {
        &self.datasets
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    pub status: u16,
    pub code: String,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            status: status.as_u16(),
            code: code.into(),
            message: message.into(),
        }
    }

    fn not_found(code: &str, what: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, code, format!("{what} not found"))
    }
}

impl From<ExploreError> for ApiError {
    fn from(e: ExploreError) -> Self {
        let status = match e {
            ExploreError::UnknownPattern(_) => StatusCode::NOT_FOUND,
            ExploreError::SchemaMismatch { .. } | ExploreError::MissingAnchor(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            ExploreError::InvalidPage => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        Self::new(status, e.code(), e.to_string())
    }
}

fn json_response<T: Serialize>(status: StatusCode, body: &T) -> Response {
    match serde_json::to_vec(body) {
        Ok(bytes) => {
            let mut resp = (status, bytes).into_response();
            resp.headers_mut().insert(
                header::CONTENT_TYPE,
                HeaderValue::from_static(JSON_CONTENT_TYPE),
            );
            resp
        }
        Err(e) => {
            log::error!("cannot serialize response: {e}");
            StatusCode::INTERNAL_SERVER_ERROR.into_response()
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        json_response(status, &self)
    }
}

struct Json<T>(T);

impl<T: Serialize> IntoResponse for Json<T> {
    fn into_response(self) -> Response {
        json_response(StatusCode::OK, &self.0)
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;
type Params = Query<HashMap<String, String>>;

fn dataset<'a>(state: &'a AppState, id: &str) -> Result<&'a Arc<Dataset>, ApiError> {
    state
        .dataset(id)
        .ok_or_else(|| ApiError::not_found("unknown_dataset", &format!("dataset {id}")))
}

fn param<T: std::str::FromStr>(
    params: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, ApiError> {
    params
        .get(key)
        .map(|raw| {
            raw.trim().parse::<T>().map_err(|_| {
                ApiError::new(
                    StatusCode::BAD_REQUEST,
                    format!("invalid_{key}:{raw}"),
                    format!("query parameter {key} has invalid value {raw:?}"),
                )
            })
        })
        .transpose()
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetInfo {
    pub id: String,
    pub pattern_count: usize,
    pub triple_count: usize,
}

async fn list_datasets(State(state): State<AppState>) -> ApiResult<Vec<DatasetInfo>> {
    Ok(Json(
        state
            .datasets()
            .iter()
            .map(|d| DatasetInfo {
                id: d.id().to_owned(),
                pattern_count: d.pattern_count(),
                triple_count: d.triple_count(),
            })
            .collect(),
    ))
}

async fn summary(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Params,
) -> Result<Response, ApiError> {
    let ds = dataset(&state, &id)?;
    let threshold = match param::<i64>(&params, "threshold")? {
        Some(t) if t < 0 => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                format!("negative_threshold:{t}"),
                "threshold must not be negative",
            ))
        }
        t => t.map(|t| t as usize),
    };
    Ok(Json(ds.summary(threshold)).into_response())
}

#[derive(Debug, Serialize)]
pub struct InstancesPage {
    pub pattern: String,
    pub columns: Vec<ColumnInfo>,
    pub rows: Vec<TableRow>,
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub world: WorldAssumption,
}

async fn instances(
    State(state): State<AppState>,
    Path((id, pid)): Path<(String, String)>,
    Query(params): Params,
) -> ApiResult<InstancesPage> {
    let ds = dataset(&state, &id)?;
    let pattern = ds
        .resolve_pattern(&pid)
        .ok_or_else(|| ApiError::not_found("unknown_pattern", &format!("pattern {pid}")))?;
    let schema = ds.schema(&pattern)?;
    let offset = param::<usize>(&params, "offset")?.unwrap_or(0);
    let limit = param::<usize>(&params, "limit")?.unwrap_or(DEFAULT_LIMIT);
    let world = match params.get("world") {
        Some(w) => w.parse::<WorldAssumption>()?,
        None => WorldAssumption::Open,
    };
    let filters = FilterSet::parse(
        params.get("filters").map_or("", String::as_str),
        world,
        schema,
    )?;
    let table = ds.table(&pattern, &filters, offset, limit)?;
    Ok(Json(InstancesPage {
        columns: schema.column_info(),
        pattern,
        rows: table.rows,
        total: table.total,
        offset,
        limit,
        world,
    }))
}

async fn instance(
    State(state): State<AppState>,
    Path((id, iri)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let ds = dataset(&state, &id)?;
    match ds.frame(&iri) {
        None => Err(ApiError::not_found(
            "unknown_instance",
            &format!("instance {iri}"),
        )),
        Some(Ok(frame)) => Ok(Json(frame).into_response()),
        Some(Err(e)) => Err(ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "frame_error",
            e.to_string(),
        )),
    }
}

async fn resource(
    State(state): State<AppState>,
    Path((id, iri)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let ds = dataset(&state, &id)?;
    if !is_absolute_iri(&iri) {
        return Err(ApiError::not_found(
            "unknown_resource",
            &format!("resource {iri}"),
        ));
    }
    let view = ds.resource(&iri).map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "frame_error",
            e.to_string(),
        )
    })?;
    if view.is_empty() {
        return Err(ApiError::not_found(
            "unknown_resource",
            &format!("resource {iri}"),
        ));
    }
    Ok(Json(view).into_response())
}

async fn fallback() -> ApiError {
    ApiError::not_found("not_found", "route")
}

/// The API router; static UI assets are served under `/ui/` when a
/// directory is given.
pub fn router(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/datasets", get(list_datasets))
        .route("/api/datasets/{id}/summary", get(summary))
        .route(
            "/api/datasets/{id}/patterns/{pid}/instances",
            get(instances),
        )
        .route("/api/datasets/{id}/instances/{iri}", get(instance))
        .route("/api/datasets/{id}/resources/{iri}", get(resource))
        .fallback(fallback)
        .with_state(state);
    match ui_dir {
        Some(dir) => api.nest_service(
            "/ui",
            ServeDir::new(dir).append_index_html_on_directories(true),
        ),
        None => api,
    }
}

/// Published JSON schema documents, by file name.
pub fn schemas() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        (
            "datasets.schema.json",
            include_str!("../schemas/datasets.schema.json"),
        ),
        (
            "summary.schema.json",
            include_str!("../schemas/summary.schema.json"),
        ),
        (
            "instances.schema.json",
            include_str!("../schemas/instances.schema.json"),
        ),
        (
            "frame.schema.json",
            include_str!("../schemas/frame.schema.json"),
        ),
        (
            "resource.schema.json",
            include_str!("../schemas/resource.schema.json"),
        ),
        (
            "error.schema.json",
            include_str!("../schemas/error.schema.json"),
        ),
    ])
}

/// Serves until Ctrl-C.
pub async fn serve(
    state: AppState,
    addr: SocketAddr,
    ui_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state, ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

/// Runs [`serve`] on a fresh multi-threaded runtime.
pub fn serve_blocking(
    state: AppState,
    addr: SocketAddr,
    ui_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?
        .block_on(serve(state, addr, ui_dir))
}
