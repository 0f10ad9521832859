use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::quantity::Quantity;
use crate::reachability::{ActionClassification, ActionStatus};
use crate::task::{Atom, Fluent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum AdvisoryKind {
    GoalUnreachable,
    LandmarkUnreachable,
    ResourceShortfall,
    PlanStepInvalid,
    PlanIncomplete,
    GoalAchieved,
    Info,
}

/// Ordered so that alerts sort first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Alert,
    Suggestion,
    Info,
}

impl AdvisoryKind {
    pub fn severity(self) -> Severity {
        match self {
            AdvisoryKind::GoalUnreachable | AdvisoryKind::LandmarkUnreachable | AdvisoryKind::PlanStepInvalid => {
                Severity::Alert
            }
            AdvisoryKind::ResourceShortfall => Severity::Suggestion,
            AdvisoryKind::PlanIncomplete | AdvisoryKind::GoalAchieved | AdvisoryKind::Info => Severity::Info,
        }
    }
}

/// One way of satisfying a resource-blocked landmark: produce `disjunct`
/// with `achiever`, which needs `shortfall` more units of `fluent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct ShortfallAlternative {
    pub disjunct: Atom,
    pub achiever: String,
    pub fluent: Fluent,
    pub required: Quantity,
    pub available: Quantity,
    pub shortfall: Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct ResourceShortfall {
    pub alternatives: Vec<ShortfallAlternative>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct AdvisoryPayload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub landmark: Option<BTreeSet<Atom>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub goals: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shortfall: Option<ResourceShortfall>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ActionClassification>,
    /// goal-achieved: true when the goals hold only at the end of the pending plan
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projected: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Advisory {
    pub kind: AdvisoryKind,
    pub severity: Severity,
    pub message: String,
    pub payload: AdvisoryPayload,
}

impl Advisory {
    pub fn new(kind: AdvisoryKind, payload: AdvisoryPayload) -> Self {
        Advisory { kind, severity: kind.severity(), message: render(kind, &payload), payload }
    }
}

fn atoms(list: &[Atom]) -> String {
    list.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn either(set: &BTreeSet<Atom>) -> String {
    let parts: Vec<String> = set.iter().map(ToString::to_string).collect();
    match parts.len() {
        0 => String::new(),
        1 => parts[0].clone(),
        _ => format!("either {}", parts.join(" or ")),
    }
}

/// Message templates, one per kind. Clients render from the payload; the
/// text is presentation only.
fn render(kind: AdvisoryKind, p: &AdvisoryPayload) -> String {
    let landmark = p.landmark.as_ref().map(either).unwrap_or_default();
    match kind {
        AdvisoryKind::GoalUnreachable => {
            format!("The goal cannot be accomplished: {} cannot be reached from the current state", atoms(&p.goals))
        }
        AdvisoryKind::LandmarkUnreachable => {
            format!("Every plan must achieve {landmark}, but no available action can reach it from the current state")
        }
        AdvisoryKind::ResourceShortfall => {
            let options: Vec<String> = p
                .shortfall
                .iter()
                .flat_map(|s| &s.alternatives)
                .map(|a| {
                    format!(
                        "{} more {} for {} (have {}, need {})",
                        a.shortfall, a.fluent, a.achiever, a.available, a.required
                    )
                })
                .collect();
            format!("To accomplish the goals, {landmark} is needed: request {}", options.join(" or "))
        }
        AdvisoryKind::PlanStepInvalid => {
            let step = p.step_index.map(|i| i + 1).unwrap_or(0);
            let action = p.action.clone().unwrap_or_default();
            let reason = p.classification.as_ref().map(blocking_reason).unwrap_or_default();
            match &p.note {
                Some(note) => format!("Step {step} ({action}) cannot be executed: {note}"),
                None => format!("Step {step} ({action}) cannot be executed: {reason}"),
            }
        }
        AdvisoryKind::PlanIncomplete => {
            format!("The plan is valid so far but does not yet accomplish {}", atoms(&p.goals))
        }
        AdvisoryKind::GoalAchieved => {
            if p.projected == Some(true) {
                "The plan accomplishes all goals".to_string()
            } else {
                "All goals are accomplished".to_string()
            }
        }
        AdvisoryKind::Info => p.note.clone().unwrap_or_default(),
    }
}

fn blocking_reason(c: &ActionClassification) -> String {
    let mut parts = Vec::new();
    if !c.missing_pre.is_empty() {
        parts.push(format!("missing {}", atoms(&c.missing_pre)));
    }
    if !c.violated_neg_pre.is_empty() {
        parts.push(format!("{} must not hold", atoms(&c.violated_neg_pre)));
    }
    for f in &c.failed_numeric_pre {
        parts.push(format!("not enough {} (need {}, have {})", f.fluent, f.required, f.available));
    }
    if parts.is_empty() && c.status == ActionStatus::Applicable {
        return "applicable".to_string();
    }
    parts.join("; ")
}
