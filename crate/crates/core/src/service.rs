//! JSON session API behind the elicitation UI.
//!
//! Sessions live in memory; with a journal directory every create and
//! judgment is appended to `<dir>/<session_id>.jsonl` and replayed at start.
//! Each session sits behind its own mutex, so writes to one session are
//! serialized while distinct sessions proceed independently.

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::consistency::{consistency_report, random_index_lookup, ConsistencyReport};
use crate::ingest::{sig6, write_provisional_matrix_csv};
use crate::matrix::{most_inconsistent_triad, ComparisonMatrix};
use crate::ranking::{rank_criteria, RankingRow};
use crate::scale::{Judgment, JudgmentScale};
use crate::weights::{principal_eigenpair, rowsum_weights};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NextPair {
    pub i: usize,
    pub j: usize,
    pub row: String,
    pub col: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriadHint {
    pub items: [String; 3],
    pub indices: [usize; 3],
    pub deviation: f64,
}

/// Why a request was refused; rendered as 422 with the constraint named.
#[derive(Debug, Clone, PartialEq)]
pub struct Invalid {
    pub constraint: &'static str,
    pub message: String,
}

fn invalid(constraint: &'static str, message: impl Into<String>) -> Invalid {
    Invalid { constraint, message: message.into() }
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

#[derive(Debug, Clone)]
pub struct ElicitationSession {
    pub session_id: String,
    pub criteria: Vec<String>,
    pub scale: JudgmentScale,
    pub answered: BTreeMap<(usize, usize), Judgment>,
    pub created: u64,
    pub updated: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Progress {
    /// CR over the largest fully answered leading block of criteria.
    pub cr_so_far: Option<f64>,
    pub cr_order: usize,
    pub answered_count: usize,
    pub total_pairs: usize,
    pub next_pair: Option<NextPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_triad: Option<TriadHint>,
}

impl ElicitationSession {
    pub fn new(session_id: String, criteria: Vec<String>, scale: JudgmentScale) -> Result<Self, Invalid> {
        if criteria.len() < 2 {
            return Err(invalid("criteria", "a session needs at least two criteria"));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(d) = criteria.iter().find(|c| !seen.insert(c.as_str())) {
            return Err(invalid("criteria", format!("duplicate criterion `{d}`")));
        }
        if criteria.iter().any(|c| c.trim().is_empty()) {
            return Err(invalid("criteria", "criterion names must be nonempty"));
        }
        let t = now();
        Ok(ElicitationSession { session_id, criteria, scale, answered: BTreeMap::new(), created: t, updated: t })
    }

    pub fn total_pairs(&self) -> usize {
        let n = self.criteria.len();
        n * (n - 1) / 2
    }

    pub fn is_complete(&self) -> bool {
        self.answered.len() == self.total_pairs()
    }

    pub fn next_pair(&self) -> Option<NextPair> {
        let n = self.criteria.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .find(|p| !self.answered.contains_key(p))
            .map(|(i, j)| NextPair { i, j, row: self.criteria[i].clone(), col: self.criteria[j].clone() })
    }

    /// Parses a JSON number or string against the session scale.
    pub fn parse_value(&self, value: &Value) -> Result<Judgment, Invalid> {
        let parsed = match value {
            Value::Number(n) => n.as_f64().and_then(|x| self.scale.snap(x)),
            Value::String(s) => self.scale.parse_value(s).ok(),
            _ => None,
        };
        parsed.ok_or_else(|| {
            invalid(
                "scale",
                format!(
                    "{value} is not on the {} scale {{{}}}",
                    self.scale.name(),
                    self.scale.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
                ),
            )
        })
    }

    /// Records (or overwrites) the judgment for `(i, j)`, `i < j`.
    pub fn answer(&mut self, i: usize, j: usize, value: Judgment) -> Result<(), Invalid> {
        let n = self.criteria.len();
        if !(i < j && j < n) {
            return Err(invalid("pair", format!("({i}, {j}) is not a pair i < j < {n}")));
        }
        if !self.scale.contains(value) {
            return Err(invalid("scale", format!("{value} is not on the {} scale", self.scale.name())));
        }
        self.answered.insert((i, j), value);
        self.updated = now();
        Ok(())
    }

    /// Current matrix with unanswered pairs set to 1, and a per-row flag
    /// marking rows that still contain such placeholders.
    pub fn provisional_matrix(&self) -> (ComparisonMatrix, Vec<bool>) {
        let n = self.criteria.len();
        let mut entries = vec![vec![1.0; n]; n];
        let mut flags = vec![false; n];
        for i in 0..n {
            for j in (i + 1)..n {
                match self.answered.get(&(i, j)) {
                    Some(v) => {
                        entries[i][j] = v.to_f64();
                        entries[j][i] = v.recip().to_f64();
                    }
                    None => {
                        flags[i] = true;
                        flags[j] = true;
                    }
                }
            }
        }
        let m = ComparisonMatrix::new(self.criteria.clone(), entries).expect("scale values are reciprocal");
        (m, flags)
    }

    /// Size of the largest leading block of criteria whose pairs are all answered.
    fn complete_prefix(&self) -> usize {
        let n = self.criteria.len();
        let mut k = 1;
        while k < n && (0..k).all(|i| self.answered.contains_key(&(i, k))) {
            k += 1;
        }
        k
    }

    pub fn progress(&self) -> Progress {
        let k = self.complete_prefix();
        let (m, _) = self.provisional_matrix();
        let idx: Vec<usize> = (0..k).collect();
        let sub = m.submatrix(&idx).expect("prefix indices are valid");
        let cr_so_far = consistency_report(&sub).ok().map(|r| r.cr);
        let worst_triad = if k >= 3 { triad_hint(&sub) } else { None };
        Progress {
            cr_so_far,
            cr_order: k,
            answered_count: self.answered.len(),
            total_pairs: self.total_pairs(),
            next_pair: self.next_pair(),
            worst_triad,
        }
    }

    pub fn report(&self) -> Value {
        let (m, _) = self.provisional_matrix();
        let rowsum = rowsum_weights(&m);
        let eigen = principal_eigenpair(&m);
        let consistency: Option<ConsistencyReport> = match &eigen {
            Ok((lambda, _)) => random_index_lookup(m.order())
                .ok()
                .map(|ri| ConsistencyReport::from_lambda(m.order(), *lambda, ri)),
            Err(_) => None,
        };
        let eigen_w = eigen.as_ref().ok().map(|(_, w)| w.clone());
        let ranking: Vec<RankingRow> = rank_criteria(eigen_w.as_ref().unwrap_or(&rowsum)).rows().to_vec();
        json!({
            "session_id": self.session_id,
            "complete": self.is_complete(),
            "answered_count": self.answered.len(),
            "weights": {
                "labels": self.criteria,
                "eigenvector": eigen_w.map(|w| w.weights().iter().map(|x| sig6(*x)).collect::<Vec<_>>()),
                "rowsum": rowsum.weights().iter().map(|x| sig6(*x)).collect::<Vec<_>>(),
            },
            "ranking": ranking.iter().map(|r| json!({"rank": r.rank, "factor": r.factor, "weight": sig6(r.weight)})).collect::<Vec<_>>(),
            "consistency_report": consistency.map(|c| json!({
                "order": c.order,
                "lambda_max": sig6(c.lambda_max),
                "ci": sig6(c.ci),
                "ri": c.ri,
                "cr": sig6(c.cr),
                "consistent": c.consistent,
            })),
            "worst_triad": if m.order() >= 3 { triad_hint(&m) } else { None },
        })
    }

    pub fn matrix_csv(&self) -> String {
        let (m, flags) = self.provisional_matrix();
        write_provisional_matrix_csv(&m, &flags)
    }
}

fn triad_hint(m: &ComparisonMatrix) -> Option<TriadHint> {
    most_inconsistent_triad(m).ok().map(|t| TriadHint {
        items: [m.labels()[t.i].clone(), m.labels()[t.j].clone(), m.labels()[t.k].clone()],
        indices: [t.i, t.j, t.k],
        deviation: sig6(t.deviation),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
enum JournalEvent {
    Create { session_id: String, criteria: Vec<String>, scale: String, at: u64 },
    Judgment { i: usize, j: usize, value: String, at: u64 },
}

/// All live sessions.
#[derive(Default)]
pub struct SessionStore {
    sessions: Mutex<HashMap<String, Arc<Mutex<ElicitationSession>>>>,
    journal: Option<PathBuf>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) a journal directory and replays it.
    pub fn with_journal(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("jsonl") {
                continue;
            }
            if let Some(s) = replay(&fs::read_to_string(&path)?) {
                sessions.insert(s.session_id.clone(), Arc::new(Mutex::new(s)));
            }
        }
        Ok(SessionStore { sessions: Mutex::new(sessions), journal: Some(dir) })
    }

    fn append(&self, id: &str, event: &JournalEvent) {
        if let Some(dir) = &self.journal {
            let line = serde_json::to_string(event).expect("journal event serializes");
            let res = OpenOptions::new()
                .create(true)
                .append(true)
                .open(dir.join(format!("{id}.jsonl")))
                .and_then(|mut f| writeln!(f, "{line}"));
            if let Err(e) = res {
                eprintln!("warning: journal write for session {id} failed: {e}");
            }
        }
    }

    pub fn create(&self, criteria: Vec<String>, scale_name: &str) -> Result<Arc<Mutex<ElicitationSession>>, Invalid> {
        let scale = JudgmentScale::by_name(scale_name).map_err(|e| invalid("scale", e.to_string()))?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let s = ElicitationSession::new(id.clone(), criteria, scale)?;
        self.append(
            &id,
            &JournalEvent::Create {
                session_id: id.clone(),
                criteria: s.criteria.clone(),
                scale: scale_name.to_ascii_lowercase(),
                at: s.created,
            },
        );
        let s = Arc::new(Mutex::new(s));
        self.sessions.lock().unwrap().insert(id, s.clone());
        Ok(s)
    }

    pub fn get(&self, id: &str) -> Option<Arc<Mutex<ElicitationSession>>> {
        self.sessions.lock().unwrap().get(id).cloned()
    }

    pub fn answer(&self, id: &str, i: usize, j: usize, value: &Value) -> Option<Result<Progress, Invalid>> {
        let s = self.get(id)?;
        let mut s = s.lock().unwrap();
        let out = s.parse_value(value).and_then(|v| {
            s.answer(i, j, v)?;
            self.append(id, &JournalEvent::Judgment { i, j, value: v.to_string(), at: s.updated });
            Ok(s.progress())
        });
        Some(out)
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn replay(text: &str) -> Option<ElicitationSession> {
    let mut session: Option<ElicitationSession> = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        match serde_json::from_str::<JournalEvent>(line).ok()? {
            JournalEvent::Create { session_id, criteria, scale, at } => {
                let mut s = ElicitationSession::new(session_id, criteria, JudgmentScale::by_name(&scale).ok()?).ok()?;
                s.created = at;
                s.updated = at;
                session = Some(s);
            }
            JournalEvent::Judgment { i, j, value, at } => {
                let s = session.as_mut()?;
                let v = s.scale.parse_value(&value).ok()?;
                s.answer(i, j, v).ok()?;
                s.updated = at;
            }
        }
    }
    session
}

#[derive(Deserialize)]
struct CreateBody {
    criteria: Vec<String>,
    #[serde(default = "default_scale")]
    scale: String,
}

fn default_scale() -> String {
    "study".into()
}

#[derive(Deserialize)]
struct JudgmentBody {
    i: usize,
    j: usize,
    value: Value,
}

fn unprocessable(e: Invalid) -> Response {
    (StatusCode::UNPROCESSABLE_ENTITY, Json(json!({"error": e.message, "constraint": e.constraint}))).into_response()
}

fn not_found(id: &str) -> Response {
    (StatusCode::NOT_FOUND, Json(json!({"error": format!("unknown session `{id}`")}))).into_response()
}

async fn create_session(State(store): State<Arc<SessionStore>>, body: Result<Json<CreateBody>, axum::extract::rejection::JsonRejection>) -> Response {
    let Json(body) = match body {
        Ok(b) => b,
        Err(e) => return unprocessable(invalid("body", e.body_text())),
    };
    match store.create(body.criteria, &body.scale) {
        Ok(s) => {
            let s = s.lock().unwrap();
            (StatusCode::CREATED, Json(json!({"session_id": s.session_id, "next_pair": s.next_pair()}))).into_response()
        }
        Err(e) => unprocessable(e),
    }
}

async fn put_judgment(
    State(store): State<Arc<SessionStore>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<JudgmentBody>, axum::extract::rejection::JsonRejection>,
) -> Response {
    if store.get(&id).is_none() {
        return not_found(&id);
    }
    let Json(body) = match body {
        Ok(b) => b,
        Err(e) => return unprocessable(invalid("body", e.body_text())),
    };
    match store.answer(&id, body.i, body.j, &body.value) {
        None => not_found(&id),
        Some(Ok(p)) => Json(p).into_response(),
        Some(Err(e)) => unprocessable(e),
    }
}

async fn get_report(State(store): State<Arc<SessionStore>>, UrlPath(id): UrlPath<String>) -> Response {
    match store.get(&id) {
        Some(s) => Json(s.lock().unwrap().report()).into_response(),
        None => not_found(&id),
    }
}

async fn get_matrix(State(store): State<Arc<SessionStore>>, UrlPath(id): UrlPath<String>) -> Response {
    match store.get(&id) {
        Some(s) => ([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], s.lock().unwrap().matrix_csv()).into_response(),
        None => not_found(&id),
    }
}

/// API routes, plus the UI bundle from `static_dir` when given.
pub fn router(store: Arc<SessionStore>, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/:id/judgments", put(put_judgment))
        .route("/api/sessions/:id/report", get(get_report))
        .route("/api/sessions/:id/matrix.csv", get(get_matrix))
        .with_state(store);
    match static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

/// Binds and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, static_dir: Option<PathBuf>, journal: Option<PathBuf>) -> std::io::Result<()> {
    let store = match journal {
        Some(dir) => SessionStore::with_journal(dir)?,
        None => SessionStore::in_memory(),
    };
    let app = router(Arc::new(store), static_dir.as_deref());
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app).await
}
