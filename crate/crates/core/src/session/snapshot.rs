use serde::{Deserialize, Serialize};

use super::{Session, SessionData, SessionError};
use crate::pddl;

pub const SNAPSHOT_SCHEMA_VERSION: u32 = 1;

/// Versioned on-disk form of a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct Snapshot {
    pub schema_version: u32,
    pub session: SessionData,
}

pub fn snapshot(session: &Session) -> Snapshot {
    Snapshot { schema_version: SNAPSHOT_SCHEMA_VERSION, session: session.data.clone() }
}

impl Session {
    pub fn to_snapshot_json(&self) -> String {
        serde_json::to_string_pretty(&snapshot(self)).expect("snapshot serializes")
    }
}

/// Rebuilds a session from a snapshot document. Never returns a partially
/// restored session.
pub fn restore(text: &str) -> Result<Session, SessionError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| SessionError::InvalidSnapshot(e.to_string()))?;
    match value.get("schemaVersion") {
        Some(v) if v.as_u64() == Some(u64::from(SNAPSHOT_SCHEMA_VERSION)) => {}
        other => {
            return Err(SessionError::SchemaVersionMismatch {
                found: other.map_or("missing".to_string(), ToString::to_string),
                expected: SNAPSHOT_SCHEMA_VERSION,
            })
        }
    }
    let snap: Snapshot = serde_json::from_value(value).map_err(|e| SessionError::InvalidSnapshot(e.to_string()))?;
    let data = snap.session;
    if data.trace.last() != Some(&data.current_state) || data.transitions.len() + 1 != data.trace.len() {
        return Err(SessionError::InvalidSnapshot("trace does not end at the current state".into()));
    }
    let domain = pddl::parse_domain(&data.domain_text)?;
    let problem = pddl::parse_problem(&data.problem_text, &domain)?;
    let session = Session::from_parts(data, domain, problem);
    let ids = session.actions_by_id();
    if let Some(step) = session.data.plan.iter().find(|s| !ids.contains_key(s.action.as_str())) {
        return Err(SessionError::InvalidSnapshot(format!("plan refers to unknown action `{}`", step.action)));
    }
    Ok(session)
}
