use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::reachability::{self, ActionClassification, ExecutionError};
use crate::task::{Atom, GroundAction, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum StepVerdict {
    Ok,
    Invalid,
    NotEvaluated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct StepReport {
    pub index: usize,
    pub action: String,
    pub verdict: StepVerdict,
    /// Present on the invalid step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ActionClassification>,
    /// Set when the step's effects would drive a resource negative.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct PlanValidationReport {
    pub steps: Vec<StepReport>,
    pub first_invalid: Option<usize>,
    /// State after the last ok step.
    pub end_state: State,
    pub goal_satisfied: bool,
    /// Goal atoms missing from `end_state`.
    pub unsatisfied_goals: Vec<Atom>,
}

impl PlanValidationReport {
    pub fn is_valid(&self) -> bool {
        self.first_invalid.is_none()
    }
}

/// Simulates `plan` from `start` with full semantics, stopping at the first
/// step that cannot be executed.
pub fn validate_plan(start: &State, plan: &[&GroundAction], goal: &BTreeSet<Atom>) -> PlanValidationReport {
    let mut state = start.clone();
    let mut steps = Vec::with_capacity(plan.len());
    let mut first_invalid = None;
    for (index, action) in plan.iter().enumerate() {
        if first_invalid.is_some() {
            steps.push(StepReport {
                index,
                action: action.id.clone(),
                verdict: StepVerdict::NotEvaluated,
                classification: None,
                error: None,
            });
            continue;
        }
        match reachability::apply(&state, action) {
            Ok(next) => {
                state = next;
                steps.push(StepReport {
                    index,
                    action: action.id.clone(),
                    verdict: StepVerdict::Ok,
                    classification: None,
                    error: None,
                });
            }
            Err(ExecutionError::NotApplicable(class)) => {
                first_invalid = Some(index);
                steps.push(StepReport {
                    index,
                    action: action.id.clone(),
                    verdict: StepVerdict::Invalid,
                    classification: Some(class),
                    error: None,
                });
            }
            Err(e @ ExecutionError::NegativeResource { .. }) => {
                first_invalid = Some(index);
                steps.push(StepReport {
                    index,
                    action: action.id.clone(),
                    verdict: StepVerdict::Invalid,
                    classification: Some(reachability::applicable(&state, action)),
                    error: Some(e.to_string()),
                });
            }
        }
    }
    let unsatisfied_goals: Vec<Atom> = goal.iter().filter(|g| !state.holds(g)).cloned().collect();
    PlanValidationReport {
        goal_satisfied: first_invalid.is_none() && unsatisfied_goals.is_empty(),
        steps,
        first_invalid,
        end_state: state,
        unsatisfied_goals,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum DispatchPolicy {
    #[default]
    Block,
    Warn,
}

impl std::str::FromStr for DispatchPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "block" => Ok(DispatchPolicy::Block),
            "warn" => Ok(DispatchPolicy::Warn),
            other => Err(format!("unknown dispatch policy `{other}` (expected block or warn)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum DispatchDecision {
    Allow,
    AllowWithWarning,
    Block,
}

pub fn dispatch_gate(report: &PlanValidationReport, policy: DispatchPolicy) -> DispatchDecision {
    if report.goal_satisfied {
        DispatchDecision::Allow
    } else {
        match policy {
            DispatchPolicy::Block => DispatchDecision::Block,
            DispatchPolicy::Warn => DispatchDecision::AllowWithWarning,
        }
    }
}
