//! Read-only HTTP API over a workspace.
//!
//! | route | body |
//! |-------|------|
//! | `GET /api/experiments` | `[{"benchmark","linker"}]`, sorted |
//! | `GET /api/benchmarks` | `[{"name","articles"}]`, sorted |
//! | `GET /api/results/{benchmark}/{linker}` | the results file, verbatim |
//! | `GET /api/articles/{benchmark}/{linker}` | `[{"article_id","title"}]` in benchmark order |
//! | `GET /api/articles/{benchmark}/{linker}?article={id}` | one line of the cases file |
//! | `GET /` and other paths | static files from `<workspace>/ui` |
//!
//! Errors are `{"error": message}` with status 400, 404 or 405.
//!
//! Request handling is a pure function of the workspace files ([`Api::handle`]),
//! so it can be tested without a socket; [`serve`] wraps it in an axum server.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, RwLock};

use indexmap::IndexMap;
use percent_encoding::percent_decode_str;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::parse_articles;
use crate::workspace::{validate_name, Workspace};

const JSON: &str = "application/json; charset=utf-8";

const FALLBACK_INDEX: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>linkeval</title></head>
<body><h1>linkeval</h1>
<p>No UI assets found in <code>&lt;workspace&gt;/ui</code>. The JSON API is available:</p>
<ul>
<li><a href=\"/api/experiments\">/api/experiments</a></li>
<li><a href=\"/api/benchmarks\">/api/benchmarks</a></li>
</ul></body></html>
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiResponse {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl ApiResponse {
    fn json(status: u16, body: impl Into<Vec<u8>>) -> Self {
        ApiResponse {
            status,
            content_type: JSON,
            body: body.into(),
        }
    }

    fn serialized<T: Serialize>(value: &T) -> Self {
        ApiResponse::json(200, serde_json::to_vec(value).expect("response serializes"))
    }

    fn error(status: u16, message: impl Into<String>) -> Self {
        #[derive(Serialize)]
        struct Body {
            error: String,
        }
        let body = serde_json::to_vec(&Body { error: message.into() }).expect("error serializes");
        ApiResponse::json(status, body)
    }

    pub fn body_str(&self) -> &str {
        std::str::from_utf8(&self.body).unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentEntry {
    pub benchmark: String,
    pub linker: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkEntry {
    pub name: String,
    pub articles: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleEntry {
    pub article_id: String,
    pub title: String,
}

/// Cases file split into raw lines keyed by article id.
#[derive(Debug)]
struct CasesIndex {
    lines: IndexMap<String, String>,
    titles: Vec<ArticleEntry>,
}

#[derive(Deserialize)]
struct CasesHead {
    article_id: String,
    #[serde(default)]
    title: String,
}

impl CasesIndex {
    fn parse(text: &str) -> Result<Self> {
        let mut lines = IndexMap::new();
        let mut titles = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let head: CasesHead = crate::error::from_json_line(line, i + 1)?;
            titles.push(ArticleEntry {
                article_id: head.article_id.clone(),
                title: head.title,
            });
            lines.insert(head.article_id, line.to_string());
        }
        Ok(CasesIndex { lines, titles })
    }
}

/// Request handler with a per-experiment cache of parsed cases files.
#[derive(Debug)]
pub struct Api {
    workspace: Workspace,
    cases: RwLock<HashMap<(String, String), Arc<CasesIndex>>>,
}

impl Api {
    pub fn new(workspace: Workspace) -> Self {
        Api {
            workspace,
            cases: RwLock::new(HashMap::new()),
        }
    }

    /// Handles one request. `query` is the raw query string without `?`.
    pub fn handle(&self, method: &str, path: &str, query: Option<&str>) -> ApiResponse {
        if method != "GET" && method != "HEAD" {
            return ApiResponse::error(405, format!("method {method} not allowed"));
        }
        let segments: Vec<String> = path
            .split('/')
            .filter(|s| !s.is_empty())
            .map(|s| percent_decode_str(s).decode_utf8_lossy().into_owned())
            .collect();
        let segs: Vec<&str> = segments.iter().map(String::as_str).collect();
        let query = match parse_query(query.unwrap_or("")) {
            Ok(q) => q,
            Err(msg) => return ApiResponse::error(400, msg),
        };
        match segs.as_slice() {
            ["api", "experiments"] => self.experiments(),
            ["api", "benchmarks"] => self.benchmarks(),
            ["api", "results", benchmark, linker] => self.results(benchmark, linker),
            ["api", "articles", benchmark, linker] => self.articles(benchmark, linker, &query),
            ["api", ..] => ApiResponse::error(404, format!("no such endpoint `{path}`")),
            _ => self.static_file(&segs),
        }
    }

    fn experiments(&self) -> ApiResponse {
        match self.workspace.list_experiments() {
            Ok(keys) => {
                let entries: Vec<ExperimentEntry> = keys
                    .into_iter()
                    .map(|k| ExperimentEntry {
                        benchmark: k.benchmark,
                        linker: k.linker,
                    })
                    .collect();
                ApiResponse::serialized(&entries)
            }
            Err(e) => ApiResponse::error(500, e.to_string()),
        }
    }

    fn benchmarks(&self) -> ApiResponse {
        let names = match self.workspace.list_benchmarks() {
            Ok(names) => names,
            Err(e) => return ApiResponse::error(500, e.to_string()),
        };
        let mut entries = Vec::with_capacity(names.len());
        for name in names {
            let path = match self.workspace.benchmark_path(&name) {
                Ok(p) => p,
                Err(e) => return ApiResponse::error(500, e.to_string()),
            };
            let articles = std::fs::read_to_string(&path)
                .map_err(|e| Error::io(&path, e))
                .and_then(|text| parse_articles(&text));
            match articles {
                Ok(articles) => entries.push(BenchmarkEntry {
                    name,
                    articles: articles.len(),
                }),
                Err(e) => return ApiResponse::error(500, e.to_string()),
            }
        }
        ApiResponse::serialized(&entries)
    }

    fn results(&self, benchmark: &str, linker: &str) -> ApiResponse {
        let path = match self.workspace.results_path(benchmark, linker) {
            Ok(p) => p,
            Err(e) => return ApiResponse::error(400, e.to_string()),
        };
        match std::fs::read(&path) {
            Ok(bytes) => ApiResponse::json(200, bytes),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                ApiResponse::error(404, format!("no results for `{benchmark}.{linker}`"))
            }
            Err(e) => ApiResponse::error(500, e.to_string()),
        }
    }

    fn articles(&self, benchmark: &str, linker: &str, query: &[(String, String)]) -> ApiResponse {
        if let Err(e) = validate_name("benchmark", benchmark).and_then(|_| validate_name("linker", linker)) {
            return ApiResponse::error(400, e.to_string());
        }
        let mut article = None;
        for (key, value) in query {
            match key.as_str() {
                "article" if value.is_empty() => return ApiResponse::error(400, "empty `article` parameter"),
                "article" if article.is_some() => return ApiResponse::error(400, "repeated `article` parameter"),
                "article" => article = Some(value.as_str()),
                other => return ApiResponse::error(400, format!("unknown parameter `{other}`")),
            }
        }
        let index = match self.cases_index(benchmark, linker) {
            Ok(Some(index)) => index,
            Ok(None) => return ApiResponse::error(404, format!("no results for `{benchmark}.{linker}`")),
            Err(e) => return ApiResponse::error(500, e.to_string()),
        };
        match article {
            None => ApiResponse::serialized(&index.titles),
            Some(id) => match index.lines.get(id) {
                Some(line) => ApiResponse::json(200, line.clone()),
                None => ApiResponse::error(404, format!("no article `{id}` in `{benchmark}.{linker}`")),
            },
        }
    }

    fn cases_index(&self, benchmark: &str, linker: &str) -> Result<Option<Arc<CasesIndex>>> {
        let key = (benchmark.to_string(), linker.to_string());
        if let Some(index) = self.cases.read().expect("cache lock").get(&key) {
            return Ok(Some(Arc::clone(index)));
        }
        let path = self.workspace.cases_path(benchmark, linker)?;
        let text = match std::fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(&path, e)),
        };
        let index = Arc::new(CasesIndex::parse(&text)?);
        let mut cache = self.cases.write().expect("cache lock");
        Ok(Some(Arc::clone(cache.entry(key).or_insert(index))))
    }

    fn static_file(&self, segs: &[&str]) -> ApiResponse {
        let ui = self.workspace.root().join("ui");
        let rel: PathBuf = if segs.is_empty() {
            PathBuf::from("index.html")
        } else {
            segs.iter().collect()
        };
        if !rel.components().all(|c| matches!(c, Component::Normal(_))) {
            return ApiResponse::error(400, "invalid path");
        }
        match std::fs::read(ui.join(&rel)) {
            Ok(body) => ApiResponse {
                status: 200,
                content_type: content_type(&rel),
                body,
            },
            Err(_) if segs.is_empty() => ApiResponse {
                status: 200,
                content_type: "text/html; charset=utf-8",
                body: FALLBACK_INDEX.as_bytes().to_vec(),
            },
            Err(_) => ApiResponse::error(404, format!("no such file `{}`", rel.display())),
        }
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("json") => JSON,
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        _ => "application/octet-stream",
    }
}

fn parse_query(query: &str) -> std::result::Result<Vec<(String, String)>, String> {
    let decode = |s: &str| {
        percent_decode_str(&s.replace('+', " "))
            .decode_utf8()
            .map(|c| c.into_owned())
            .map_err(|_| format!("query is not valid UTF-8: `{s}`"))
    };
    query
        .split('&')
        .filter(|p| !p.is_empty())
        .map(|pair| {
            let (k, v) = pair.split_once('=').unwrap_or((pair, ""));
            Ok((decode(k)?, decode(v)?))
        })
        .collect()
}

async fn dispatch(
    axum::extract::State(api): axum::extract::State<Arc<Api>>,
    method: axum::http::Method,
    uri: axum::http::Uri,
) -> axum::response::Response {
    let api = Arc::clone(&api);
    let path = uri.path().to_string();
    let query = uri.query().map(str::to_string);
    let method = method.as_str().to_string();
    let response = tokio::task::spawn_blocking(move || api.handle(&method, &path, query.as_deref()))
        .await
        .unwrap_or_else(|e| ApiResponse::error(500, e.to_string()));
    axum::response::Response::builder()
        .status(response.status)
        .header(axum::http::header::CONTENT_TYPE, response.content_type)
        .body(axum::body::Body::from(response.body))
        .expect("valid response")
}

pub fn router(api: Arc<Api>) -> axum::Router {
    axum::Router::new().fallback(dispatch).with_state(api)
}

/// Serves the workspace on `127.0.0.1:port` until the process is stopped.
pub async fn serve(workspace: Workspace, port: u16) -> Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Error::Workspace(format!("cannot bind {addr}: {e}")))?;
    log::info!("serving {} on http://{addr}", workspace.root().display());
    axum::serve(listener, router(Arc::new(Api::new(workspace))))
        .await
        .map_err(|e| Error::Workspace(format!("server error: {e}")))
}
