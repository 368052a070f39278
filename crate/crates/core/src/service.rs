//! HTTP service: a registry of schemas that clients query over JSON.
//!
//! | method | path                  | body                          |
//! |--------|-----------------------|-------------------------------|
//! | POST   | `/schemas`            | schema document, or `{samples, config}` |
//! | GET    | `/schemas`            |                               |
//! | GET    | `/schemas/{id}`       |                               |
//! | POST   | `/schemas/{id}/query` | `{query, format, allPaths}`   |
//!
//! Query responses carry exactly the bytes the command line prints for the
//! same format; evaluation time is reported in `x-elapsed-micros`.

use std::collections::BTreeMap;
use std::fs;
use std::future::Future;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::engine::{run_query, Options, QueryError};
use crate::io::{extract_schema, load_schema, save_schema, DocumentSample, ExtractionConfig, LoadError};
use crate::model::{SchemaKind, USchemaModel};
use crate::render::{render, Format};

pub const DEFAULT_LISTEN: &str = "127.0.0.1:7474";
pub const ELAPSED_HEADER: &str = "x-elapsed-micros";

const SCHEMA_SUFFIX: &str = ".uschema.json";

/// Registered schemas, keyed by id. Optionally mirrored to a directory.
#[derive(Debug, Default)]
pub struct Registry {
    schemas: RwLock<BTreeMap<String, Arc<USchemaModel>>>,
    dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("schema `{0}` is already registered")]
    Duplicate(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Load { path: PathBuf, source: LoadError },
}

/// Lowercase ASCII letters and digits separated by single dashes.
pub fn slugify(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.is_empty() && !out.ends_with('-') {
            out.push('-');
        }
    }
    while out.ends_with('-') {
        out.pop();
    }
    if out.is_empty() {
        out.push_str("schema");
    }
    out
}

impl Registry {
    pub fn new() -> Registry {
        Registry::default()
    }

    /// Loads every `*.uschema.json` file of `dir` and writes newly
    /// registered schemas there.
    pub fn with_dir(dir: &Path) -> Result<Registry, RegistryError> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| RegistryError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(io_err(dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.to_string_lossy().ends_with(SCHEMA_SUFFIX))
            .collect();
        paths.sort();
        let mut schemas = BTreeMap::new();
        for path in paths {
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let model = load_schema(&text).map_err(|source| RegistryError::Load {
                path: path.clone(),
                source,
            })?;
            let id = path
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(|n| n.strip_suffix(SCHEMA_SUFFIX))
                .map_or_else(|| slugify(&model.name), str::to_string);
            schemas.insert(id, Arc::new(model));
        }
        Ok(Registry {
            schemas: RwLock::new(schemas),
            dir: Some(dir.to_path_buf()),
        })
    }

    pub fn register(&self, model: USchemaModel) -> Result<String, RegistryError> {
        let id = slugify(&model.name);
        let mut schemas = self.schemas.write().unwrap_or_else(|e| e.into_inner());
        if schemas.contains_key(&id) {
            return Err(RegistryError::Duplicate(id));
        }
        if let Some(dir) = &self.dir {
            let path = dir.join(format!("{id}{SCHEMA_SUFFIX}"));
            fs::write(&path, save_schema(&model)).map_err(|source| RegistryError::Io { path, source })?;
        }
        schemas.insert(id.clone(), Arc::new(model));
        Ok(id)
    }

    pub fn get(&self, id: &str) -> Option<Arc<USchemaModel>> {
        self.schemas
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
    }

    pub fn list(&self) -> Vec<(String, Arc<USchemaModel>)> {
        self.schemas
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct TypeCounts {
    entity: usize,
    relationship: usize,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SchemaSummary {
    schema_id: String,
    name: String,
    kind: SchemaKind,
    type_counts: TypeCounts,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ExtractRequest {
    samples: Vec<DocumentSample>,
    #[serde(default)]
    config: ExtractionConfig,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct QueryRequest {
    query: String,
    #[serde(default)]
    format: Format,
    #[serde(default)]
    all_paths: bool,
}

fn error(status: StatusCode, body: Value) -> Response {
    (status, Json(body)).into_response()
}

fn bad_request(message: impl ToString) -> Response {
    error(StatusCode::BAD_REQUEST, json!({ "error": message.to_string() }))
}

fn not_found(id: &str) -> Response {
    error(
        StatusCode::NOT_FOUND,
        json!({ "error": format!("no schema with id `{id}`") }),
    )
}

async fn register(State(reg): State<Arc<Registry>>, body: Bytes) -> Response {
    let Ok(text) = std::str::from_utf8(&body) else {
        return bad_request("request body is not UTF-8");
    };
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return bad_request(format!("request body is not JSON: {e}")),
    };
    let model = if value.get("samples").is_some() {
        let req: ExtractRequest = match serde_json::from_value(value) {
            Ok(r) => r,
            Err(e) => return bad_request(e),
        };
        match extract_schema(&req.samples, &req.config) {
            Ok(m) => m,
            Err(e) => return bad_request(e),
        }
    } else {
        match load_schema(text) {
            Ok(m) => m,
            Err(LoadError::Validation(violations)) => {
                return error(
                    StatusCode::BAD_REQUEST,
                    json!({ "error": "invalid schema", "violations": violations }),
                )
            }
            Err(e) => return bad_request(e),
        }
    };
    match reg.register(model) {
        Ok(id) => (StatusCode::CREATED, Json(json!({ "schemaId": id }))).into_response(),
        Err(e @ RegistryError::Duplicate(_)) => {
            error(StatusCode::CONFLICT, json!({ "error": e.to_string() }))
        }
        Err(e) => error(
            StatusCode::INTERNAL_SERVER_ERROR,
            json!({ "error": e.to_string() }),
        ),
    }
}

async fn list(State(reg): State<Arc<Registry>>) -> Json<Vec<SchemaSummary>> {
    Json(
        reg.list()
            .into_iter()
            .map(|(id, m)| SchemaSummary {
                schema_id: id,
                name: m.name.clone(),
                kind: m.kind,
                type_counts: TypeCounts {
                    entity: m.entity_types.len(),
                    relationship: m.relationship_types.len(),
                },
            })
            .collect(),
    )
}

async fn fetch(State(reg): State<Arc<Registry>>, UrlPath(id): UrlPath<String>) -> Response {
    match reg.get(&id) {
        Some(m) => (
            [(header::CONTENT_TYPE, "application/json")],
            save_schema(&m),
        )
            .into_response(),
        None => not_found(&id),
    }
}

async fn query(
    State(reg): State<Arc<Registry>>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Response {
    let Some(model) = reg.get(&id) else {
        return not_found(&id);
    };
    let req: QueryRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return bad_request(e),
    };
    let started = Instant::now();
    let options = Options {
        all_paths: req.all_paths,
    };
    match run_query(&model, &req.query, options) {
        Ok(result) => {
            let text = render(&result, req.format);
            let micros = started.elapsed().as_micros().to_string();
            let mut resp = (
                [(header::CONTENT_TYPE, req.format.media_type())],
                text,
            )
                .into_response();
            if let Ok(v) = HeaderValue::from_str(&micros) {
                resp.headers_mut().insert(ELAPSED_HEADER, v);
            }
            resp
        }
        Err(QueryError::Syntax(e)) => error(
            StatusCode::UNPROCESSABLE_ENTITY,
            json!({
                "kind": e.category(),
                "line": e.line(),
                "column": e.column(),
                "message": e.message(),
            }),
        ),
        Err(QueryError::Engine(e)) => error(
            StatusCode::UNPROCESSABLE_ENTITY,
            json!({ "kind": "semantic", "line": 1, "column": 1, "message": e.to_string() }),
        ),
    }
}

const PLACEHOLDER_PAGE: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>SkiQL</title></head>
<body>
<h1>SkiQL</h1>
<p>No console is installed. Start the server with <code>--console DIR</code>
to serve one, or use the JSON API under <code>/schemas</code>.</p>
</body></html>
";

async fn placeholder() -> Html<&'static str> {
    Html(PLACEHOLDER_PAGE)
}

/// The API routes, plus static files from `console` (or a placeholder page)
/// at `/`.
pub fn router(registry: Arc<Registry>, console: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/schemas", post(register).get(list))
        .route("/schemas/{id}", get(fetch))
        .route("/schemas/{id}/query", post(query))
        .with_state(registry);
    match console {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder)),
    }
}

/// Serves until `shutdown` resolves.
pub async fn serve<F>(listener: tokio::net::TcpListener, app: Router, shutdown: F) -> io::Result<()>
where
    F: Future<Output = ()> + Send + 'static,
{
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await
}
