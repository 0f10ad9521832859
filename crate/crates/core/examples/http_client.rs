//! Starts the service on an ephemeral port and walks scenario 1 over HTTP.
//!
//! cargo run --example http_client

use std::sync::Arc;

use serde_json::{json, Value};

use radar::service::{serve, SessionStore};
use radar::session::SessionConfig;

fn main() {
    let (addr_tx, addr_rx) = std::sync::mpsc::channel();
    let (stop_tx, stop_rx) = tokio::sync::oneshot::channel::<()>();
    let server = std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(async {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            addr_tx.send(listener.local_addr().unwrap()).unwrap();
            let store = Arc::new(SessionStore::new(None, SessionConfig::default()));
            serve(listener, store, async {
                let _ = stop_rx.await;
            })
            .await
            .unwrap();
        });
    });
    let base = format!("http://{}", addr_rx.recv().unwrap());
    let client = reqwest::blocking::Client::new();

    let view: Value = client
        .post(format!("{base}/sessions"))
        .json(&json!({ "example": "firefighting/scenario1" }))
        .send()
        .unwrap()
        .json()
        .unwrap();
    let id = view["id"].as_str().unwrap();
    println!("created session {id}");

    for cmd in [
        json!({ "type": "AppendStep", "action": "dispatch-big-engines(station1)" }),
        json!({ "type": "ExecuteStep" }),
        json!({ "type": "AdjustResource", "fluent": "available-big(station1)", "delta": 2 }),
        json!({ "type": "ExecuteStep" }),
    ] {
        let resp = client.post(format!("{base}/sessions/{id}/commands")).json(&cmd).send().unwrap();
        let status = resp.status();
        let body: Value = resp.json().unwrap();
        println!("{} -> {status}: {}", cmd["type"], body.get("code").unwrap_or(&body["revision"]));
    }

    let adv: Value = client.get(format!("{base}/sessions/{id}/advisories")).send().unwrap().json().unwrap();
    println!("{}", serde_json::to_string_pretty(&adv).unwrap());

    stop_tx.send(()).unwrap();
    server.join().unwrap();
}
