use serde::{Deserialize, Serialize};

use super::{CommandResponse, Session, SessionCommand, SessionError};
use crate::advisor::Advisory;

/// One line of a scenario file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioEvent {
    pub at_millis: u64,
    #[serde(default)]
    pub note: String,
    pub command: SessionCommand,
}

/// Parses line-delimited scenario events. Blank lines are skipped; events
/// must be sorted by `atMillis`.
pub fn parse_events(text: &str) -> Result<Vec<ScenarioEvent>, String> {
    let mut events: Vec<ScenarioEvent> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let event: ScenarioEvent = serde_json::from_str(line).map_err(|e| format!("line {}: {e}", n + 1))?;
        if events.last().is_some_and(|prev| prev.at_millis > event.at_millis) {
            return Err(format!("line {}: events are not sorted by atMillis", n + 1));
        }
        events.push(event);
    }
    Ok(events)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum TranscriptOutcome {
    Accepted { response: CommandResponse },
    Rejected { code: String, message: String, detail: serde_json::Value },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct TranscriptEntry {
    pub index: usize,
    pub at_millis: u64,
    pub note: String,
    pub command: SessionCommand,
    pub outcome: TranscriptOutcome,
    /// Session revision after the event.
    pub revision: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct Transcript {
    pub initial_advisories: Vec<Advisory>,
    pub entries: Vec<TranscriptEntry>,
    pub final_revision: u64,
    pub final_advisories: Vec<Advisory>,
    pub goal_satisfied: bool,
}

/// Applies `events` in order without waiting between them. A rejected
/// event is recorded and leaves the session as it was.
pub fn replay(session: &mut Session, events: &[ScenarioEvent]) -> Transcript {
    let initial_advisories = session.advisories().to_vec();
    let entries = events
        .iter()
        .enumerate()
        .map(|(index, event)| {
            let outcome = match session.handle(event.command.clone()) {
                Ok(response) => TranscriptOutcome::Accepted { response },
                Err(e) => rejected(&e),
            };
            TranscriptEntry {
                index,
                at_millis: event.at_millis,
                note: event.note.clone(),
                command: event.command.clone(),
                outcome,
                revision: session.revision(),
            }
        })
        .collect();
    Transcript {
        initial_advisories,
        entries,
        final_revision: session.revision(),
        final_advisories: session.advisories().to_vec(),
        goal_satisfied: session.data().current_state.satisfies(&session.data().goals),
    }
}

fn rejected(e: &SessionError) -> TranscriptOutcome {
    TranscriptOutcome::Rejected { code: e.code().to_string(), message: e.to_string(), detail: e.detail() }
}
