//! JSON Schemas for every document the CLI and the HTTP API exchange.

use schemars::schema::RootSchema;
use schemars::schema_for;

use crate::advisor::Advisory;
use crate::cli::{AnalyzeReport, LandmarksReport};
use crate::service::{AdvisoriesResponse, CreateSessionRequest, LandmarksResponse, Problem, SuggestRequest};
use crate::session::{CommandResponse, ScenarioEvent, SessionCommand, SessionView, Snapshot, Transcript};

/// `(file name, schema)` pairs, in a fixed order.
pub fn published() -> Vec<(&'static str, RootSchema)> {
    vec![
        ("advisory.json", schema_for!(Advisory)),
        ("analyze-report.json", schema_for!(AnalyzeReport)),
        ("landmarks-report.json", schema_for!(LandmarksReport)),
        ("transcript.json", schema_for!(Transcript)),
        ("scenario-event.json", schema_for!(ScenarioEvent)),
        ("snapshot.json", schema_for!(Snapshot)),
        ("session-command.json", schema_for!(SessionCommand)),
        ("command-response.json", schema_for!(CommandResponse)),
        ("session-view.json", schema_for!(SessionView<'static>)),
        ("create-session-request.json", schema_for!(CreateSessionRequest)),
        ("suggest-request.json", schema_for!(SuggestRequest)),
        ("advisories-response.json", schema_for!(AdvisoriesResponse)),
        ("landmarks-response.json", schema_for!(LandmarksResponse)),
        ("problem.json", schema_for!(Problem)),
    ]
}

/// Pretty-printed schema text as written to disk.
pub fn render(schema: &RootSchema) -> String {
    serde_json::to_string_pretty(schema).expect("schema serializes") + "\n"
}
