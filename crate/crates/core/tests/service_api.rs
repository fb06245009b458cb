use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use ahp_core::ingest::parse_matrix_csv;
use ahp_core::service::{router, SessionStore};

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

async fn candy_session(app: &Router) -> String {
    let (status, body) =
        call(app, Method::POST, "/api/sessions", Some(json!({"criteria": ["Lollipops", "Taffy", "Chocolate"]}))).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    let v = json(&body);
    assert_eq!(v["next_pair"]["row"], "Lollipops");
    assert_eq!(v["next_pair"]["col"], "Taffy");
    v["session_id"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn candy_elicitation_flow() {
    let app = router(Arc::new(SessionStore::in_memory()), None);
    let id = candy_session(&app).await;
    let put = |i: usize, j: usize, v: Value| {
        let app = app.clone();
        let uri = format!("/api/sessions/{id}/judgments");
        async move { call(&app, Method::PUT, &uri, Some(json!({"i": i, "j": j, "value": v}))).await }
    };

    let (s, body) = put(0, 1, json!(2)).await;
    assert_eq!(s, StatusCode::OK, "{body}");
    let p = json(&body);
    assert_eq!(p["answered_count"], 1);
    assert_eq!(p["total_pairs"], 3);
    assert_eq!(p["cr_order"], 2);

    put(0, 2, json!("1/3")).await;
    let (_, body) = put(1, 2, json!(1)).await;
    let p = json(&body);
    assert!(p["next_pair"].is_null());
    assert!(p["cr_so_far"].as_f64().unwrap() > 0.1);
    assert_eq!(p["worst_triad"]["items"], json!(["Lollipops", "Taffy", "Chocolate"]));

    let (s, body) = call(&app, Method::GET, &format!("/api/sessions/{id}/report"), None).await;
    assert_eq!(s, StatusCode::OK);
    let r = json(&body);
    assert_eq!(r["complete"], true);
    assert_eq!(r["consistency_report"]["consistent"], false);
    assert_eq!(r["ranking"][0]["factor"], "Chocolate");

    // revising Lollipops vs Chocolate to 2 brings the matrix under the threshold
    let (_, body) = put(0, 2, json!(2)).await;
    assert!(json(&body)["cr_so_far"].as_f64().unwrap() < 0.1);

    let (s, csv) = call(&app, Method::GET, &format!("/api/sessions/{id}/matrix.csv"), None).await;
    assert_eq!(s, StatusCode::OK);
    let m = parse_matrix_csv(csv.as_bytes()).unwrap();
    assert_eq!(m.get(2, 0), 0.5);
}

#[tokio::test]
async fn invalid_requests() {
    let app = router(Arc::new(SessionStore::in_memory()), None);
    let (s, _) = call(&app, Method::GET, "/api/sessions/nope/report", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = call(&app, Method::PUT, "/api/sessions/nope/judgments", Some(json!({"i": 0, "j": 1, "value": 2}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    let (s, body) = call(&app, Method::POST, "/api/sessions", Some(json!({"criteria": ["A", "A"]}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    assert!(json(&body)["constraint"].is_string());

    let id = candy_session(&app).await;
    let uri = format!("/api/sessions/{id}/judgments");
    for bad in [json!({"i": 0, "j": 1, "value": 4}), json!({"i": 1, "j": 0, "value": 2}), json!({"i": 0, "j": 9, "value": 2})] {
        let (s, body) = call(&app, Method::PUT, &uri, Some(bad.clone())).await;
        assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{bad} -> {body}");
        assert!(json(&body)["error"].is_string());
    }
    let (s, _) = call(&app, Method::PUT, &uri, Some(json!({"nonsense": true}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn journal_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    let id = {
        let app = router(Arc::new(SessionStore::with_journal(dir.path()).unwrap()), None);
        let id = candy_session(&app).await;
        let uri = format!("/api/sessions/{id}/judgments");
        call(&app, Method::PUT, &uri, Some(json!({"i": 0, "j": 1, "value": 2}))).await;
        id
    };
    let app = router(Arc::new(SessionStore::with_journal(dir.path()).unwrap()), None);
    let (s, body) = call(&app, Method::GET, &format!("/api/sessions/{id}/report"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(json(&body)["answered_count"], 1);
}

#[tokio::test]
async fn static_bundle_is_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html>ok</html>").unwrap();
    let app = router(Arc::new(SessionStore::in_memory()), Some(dir.path()));
    let (s, body) = call(&app, Method::GET, "/index.html", None).await;
    assert_eq!(s, StatusCode::OK);
    assert!(body.contains("ok"));
}
