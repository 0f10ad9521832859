use serde::{Deserialize, Serialize};

use crate::advisor::{Advisory, DispatchDecision, PlanValidationReport, SearchError};
use crate::quantity::Quantity;
use crate::reachability::ActionClassification;
use crate::task::{Atom, Fluent};

/// The only way to change a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "type")]
pub enum SessionCommand {
    AddGoal {
        atom: Atom,
    },
    RemoveGoal {
        atom: Atom,
    },
    AddFact {
        atom: Atom,
    },
    RemoveFact {
        atom: Atom,
    },
    AdjustResource {
        fluent: Fluent,
        delta: Quantity,
    },
    AppendStep {
        action: String,
    },
    RemoveStep {
        index: usize,
    },
    /// Executes the first pending step.
    ExecuteStep,
    RequestSuggestions,
    Dispatch,
    SetConfig {
        key: String,
        value: serde_json::Value,
    },
    /// Removes a ground action from the model seen by analysis and search.
    DisableAction {
        action: String,
    },
    EnableAction {
        action: String,
    },
}

impl SessionCommand {
    pub fn name(&self) -> &'static str {
        match self {
            SessionCommand::AddGoal { .. } => "AddGoal",
            SessionCommand::RemoveGoal { .. } => "RemoveGoal",
            SessionCommand::AddFact { .. } => "AddFact",
            SessionCommand::RemoveFact { .. } => "RemoveFact",
            SessionCommand::AdjustResource { .. } => "AdjustResource",
            SessionCommand::AppendStep { .. } => "AppendStep",
            SessionCommand::RemoveStep { .. } => "RemoveStep",
            SessionCommand::ExecuteStep => "ExecuteStep",
            SessionCommand::RequestSuggestions => "RequestSuggestions",
            SessionCommand::Dispatch => "Dispatch",
            SessionCommand::SetConfig { .. } => "SetConfig",
            SessionCommand::DisableAction { .. } => "DisableAction",
            SessionCommand::EnableAction { .. } => "EnableAction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum SuggestionOutcome {
    Found,
    Timeout,
    Unsolvable,
}

/// Result of the last RequestSuggestions. `actions` continue the valid
/// prefix of the pending plan (its first `afterStep` pending steps).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct Suggestions {
    pub revision: u64,
    pub outcome: SuggestionOutcome,
    pub after_step: usize,
    pub actions: Vec<String>,
}

impl Suggestions {
    pub fn from_search(revision: u64, after_step: usize, result: Result<Vec<String>, SearchError>) -> Self {
        let (outcome, actions) = match result {
            Ok(a) => (SuggestionOutcome::Found, a),
            Err(SearchError::Timeout) => (SuggestionOutcome::Timeout, Vec::new()),
            Err(SearchError::Unsolvable) => (SuggestionOutcome::Unsolvable, Vec::new()),
        };
        Suggestions { revision, outcome, after_step, actions }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct DispatchOutcome {
    pub decision: DispatchDecision,
    /// Steps executed by this dispatch.
    pub executed: Vec<String>,
    /// Set when execution stopped at a step that could not run (warn policy).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped_at: Option<ActionClassification>,
}

/// Extra result carried by some commands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum CommandDetail {
    Executed { action: String },
    Dispatched(DispatchOutcome),
    Suggested(Suggestions),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct CommandResponse {
    pub revision: u64,
    pub advisories: Vec<Advisory>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<CommandDetail>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error("{0}")]
    InvalidCommand(String),
    #[error("step {action} is not applicable in the current state")]
    StepNotApplicable { action: String, classification: Box<ActionClassification> },
    #[error("dispatch blocked: the plan does not accomplish the goals")]
    DispatchBlocked { report: Box<PlanValidationReport> },
    #[error("snapshot schema version {found} is not supported (expected {expected})")]
    SchemaVersionMismatch { found: String, expected: u32 },
    #[error("invalid snapshot: {0}")]
    InvalidSnapshot(String),
    #[error("{0}")]
    Model(#[from] crate::pddl::PddlError),
}

impl SessionError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::InvalidCommand(_) => "InvalidCommand",
            SessionError::StepNotApplicable { .. } => "StepNotApplicable",
            SessionError::DispatchBlocked { .. } => "DispatchBlocked",
            SessionError::SchemaVersionMismatch { .. } => "SchemaVersionMismatch",
            SessionError::InvalidSnapshot(_) => "InvalidSnapshot",
            SessionError::Model(e) => e.code(),
        }
    }

    /// Structured details for problem documents.
    pub fn detail(&self) -> serde_json::Value {
        match self {
            SessionError::StepNotApplicable { action, classification } => {
                serde_json::json!({ "action": action, "classification": classification })
            }
            SessionError::DispatchBlocked { report } => serde_json::json!({ "report": report }),
            SessionError::Model(e) => {
                let p = e.position();
                serde_json::json!({ "line": p.line, "column": p.column })
            }
            _ => serde_json::Value::Null,
        }
    }
}

pub(crate) fn invalid(message: impl Into<String>) -> SessionError {
    SessionError::InvalidCommand(message.into())
}
