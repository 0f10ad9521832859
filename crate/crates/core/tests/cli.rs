//! The `radar` binary: exit codes, deterministic output and published
//! schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel).display().to_string()
}

fn schemas_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn radar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radar")).args(args).env_remove("RUST_LOG").output().unwrap()
}

fn analyze(problem: &str, format: &str) -> Output {
    radar(&["analyze", "--domain", &data("firefighting/domain.pddl"), "--problem", &data(problem), "--format", format])
}

fn chain(cmd: &str, problem: &str) -> Output {
    radar(&[cmd, "--domain", &data("toy/chain-domain.pddl"), "--problem", &data(problem), "--format", "json"])
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn validate(schema_file: &str, doc: &serde_json::Value) {
    let text = std::fs::read_to_string(schemas_dir().join(schema_file)).unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

#[test]
fn published_schemas_are_current() {
    for (name, schema) in radar::schema::published() {
        let on_disk = std::fs::read_to_string(schemas_dir().join(name)).unwrap_or_default();
        assert_eq!(
            on_disk,
            radar::schema::render(&schema),
            "docs/schemas/{name} is stale; run the export_schemas example"
        );
    }
}

#[test]
fn analyze_scenario1_json() {
    let out = analyze("firefighting/scenario1.pddl", "json");
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    validate("analyze-report.json", &doc);
    let kinds: Vec<&str> = doc["advisories"].as_array().unwrap().iter().map(|a| a["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "resource-shortfall").count(), 1);
}

#[test]
fn analyze_exit_codes() {
    let sat = chain("analyze", "toy/chain-satisfied.pddl");
    assert_eq!(sat.status.code(), Some(0));
    let kinds: Vec<String> =
        json(&sat)["advisories"].as_array().unwrap().iter().map(|a| a["kind"].as_str().unwrap().to_string()).collect();
    assert_eq!(kinds, vec!["goal-achieved"]);

    let unreachable = chain("analyze", "toy/chain-unreachable.pddl");
    assert_eq!(unreachable.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unreachable.stdout).contains("goal-unreachable"));
}

#[test]
fn analyze_with_plan_file() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.txt");
    std::fs::write(&plan, "; reference plan\n(dispatch-big-engines station1)\nextinguish-small-with-big(building1)\n")
        .unwrap();
    let out = radar(&[
        "analyze",
        "--domain",
        &data("firefighting/domain.pddl"),
        "--problem",
        &data("firefighting/scenario1.pddl"),
        "--plan",
        plan.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["validation"]["firstInvalid"], 0);

    std::fs::write(&plan, "no-such-action\n").unwrap();
    let bad = radar(&[
        "analyze",
        "--domain",
        &data("firefighting/domain.pddl"),
        "--problem",
        &data("firefighting/scenario1.pddl"),
        "--plan",
        plan.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.pddl");
    std::fs::write(&broken, "(define (domain d)\n  (:predicates (p)\n").unwrap();
    let out = radar(&["analyze", "--domain", broken.to_str().unwrap(), "--problem", &data("toy/chain-problem.pddl")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.pddl:"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(radar(&["analyze"]).status.code(), Some(2));
    assert_eq!(radar(&["frobnicate"]).status.code(), Some(2));
    let out = radar(&["serve", "--dispatch-policy", "maybe"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn landmarks_reports() {
    let out = chain("landmarks", "toy/chain-problem.pddl");
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    validate("landmarks-report.json", &doc);
    assert_eq!(doc["landmarks"].as_array().unwrap().len(), 2);
    let orders = doc["orders"].as_array().unwrap();
    assert_eq!(orders.iter().filter(|o| o["kind"] == "greedy-necessary").count(), 1);

    let s1 = radar(&[
        "landmarks",
        "--domain",
        &data("firefighting/domain.pddl"),
        "--problem",
        &data("firefighting/scenario1.pddl"),
        "--format",
        "json",
    ]);
    let doc = json(&s1);
    assert!(doc["landmarks"].as_array().unwrap().iter().any(|l| l["disjuncts"].as_array().unwrap().len() == 2));

    let s2 = radar(&[
        "landmarks",
        "--domain",
        &data("firefighting/domain.pddl"),
        "--problem",
        &data("firefighting/scenario2.pddl"),
        "--format",
        "json",
    ]);
    let doc = json(&s2);
    assert!(doc["landmarks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|l| l["disjuncts"] == serde_json::json!(["on-scene(rescuers)"])));
}

fn replay(events: &str, problem: &str, format: &str) -> Output {
    radar(&[
        "replay",
        &data(events),
        "--domain",
        &data("firefighting/domain.pddl"),
        "--problem",
        &data(problem),
        "--format",
        format,
    ])
}

#[test]
fn replay_transcripts() {
    let out = replay("firefighting/scenario1.events", "firefighting/scenario1.pddl", "json");
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    validate("transcript.json", &doc);
    let finals = doc["finalAdvisories"].as_array().unwrap();
    assert!(finals.iter().all(|a| a["severity"] == "info"));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.events");
    std::fs::write(&empty, "").unwrap();
    let out = radar(&[
        "replay",
        empty.to_str().unwrap(),
        "--domain",
        &data("firefighting/domain.pddl"),
        "--problem",
        &data("firefighting/scenario1.pddl"),
        "--format",
        "json",
    ]);
    let doc = json(&out);
    assert!(doc["entries"].as_array().unwrap().is_empty());
    assert_eq!(doc["initialAdvisories"], doc["finalAdvisories"]);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let runs: Vec<Box<dyn Fn() -> Output>> = vec![
        Box::new(|| analyze("firefighting/scenario1.pddl", "json")),
        Box::new(|| analyze("firefighting/scenario2.pddl", "text")),
        Box::new(|| chain("landmarks", "toy/chain-problem.pddl")),
        Box::new(|| replay("firefighting/scenario1.events", "firefighting/scenario1.pddl", "json")),
        Box::new(|| replay("firefighting/scenario2.events", "firefighting/scenario2.pddl", "text")),
    ];
    for run in runs {
        let a = run();
        let b = run();
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn serve_on_occupied_port_exits_2() {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = listener.local_addr().unwrap().port().to_string();
    let dir = tempfile::tempdir().unwrap();
    let out = radar(&["serve", "--port", &port, "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn serve_answers_health_and_flushes_on_interrupt() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_radar"))
        .args(["serve", "--port", &port.to_string()])
        .env("RADAR_DATA_DIR", dir.path())
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();
    let client = reqwest::blocking::Client::new();
    let base = format!("http://127.0.0.1:{port}");
    let mut health = None;
    for _ in 0..100 {
        if let Ok(resp) = client.get(format!("{base}/health")).send() {
            health = Some(resp.json::<serde_json::Value>().unwrap());
            break;
        }
        std::thread::sleep(std::time::Duration::from_millis(50));
    }
    assert_eq!(health.expect("server came up")["status"], "ok");

    let view: serde_json::Value = client
        .post(format!("{base}/sessions"))
        .json(&serde_json::json!({ "example": "toy/chain" }))
        .send()
        .unwrap()
        .json()
        .unwrap();
    let id = view["id"].as_str().unwrap();

    let killed = Command::new("kill").args(["-INT", &child.id().to_string()]).status().unwrap();
    assert!(killed.success());
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(dir.path().join(format!("{id}.json")).exists());
}
