//! Execution semantics and delete-relaxed reachability.

pub(crate) mod index;
mod rpg;

use serde::{Deserialize, Serialize};

use crate::quantity::Quantity;
use crate::task::{Atom, Fluent, GroundAction, State};

pub use rpg::{build_rpg, AchieverError, RelaxedPlanningGraph};

/// How numeric preconditions are treated while building a relaxed planning
/// graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResourcePolicy {
    /// Numeric preconditions always hold.
    IgnoreNumeric,
    /// Numeric preconditions are checked against the state's values,
    /// raised by every reachable increase or assignment. Decreases are
    /// ignored, which keeps the relaxation monotone.
    EnforceNumericStatic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum ActionStatus {
    Applicable,
    BlockedPropositional,
    BlockedResource,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct FailedNumeric {
    pub fluent: Fluent,
    pub required: Quantity,
    pub available: Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct ActionClassification {
    pub action: String,
    pub status: ActionStatus,
    pub failed_numeric_pre: Vec<FailedNumeric>,
    /// Positive preconditions absent from the state.
    pub missing_pre: Vec<Atom>,
    /// Negative preconditions that currently hold.
    pub violated_neg_pre: Vec<Atom>,
}

impl ActionClassification {
    pub fn is_applicable(&self) -> bool {
        self.status == ActionStatus::Applicable
    }
}

/// Classifies `action` in `state`. Propositional blocking dominates
/// resource blocking; every failed numeric precondition is listed either way.
pub fn applicable(state: &State, action: &GroundAction) -> ActionClassification {
    let missing_pre: Vec<Atom> = action.pre.iter().filter(|a| !state.holds(a)).cloned().collect();
    let violated_neg_pre: Vec<Atom> = action.neg_pre.iter().filter(|a| state.holds(a)).cloned().collect();
    let failed_numeric_pre: Vec<FailedNumeric> = action
        .numeric_pre
        .iter()
        .filter_map(|c| {
            let available = state.value(&c.fluent);
            (available < c.threshold).then(|| FailedNumeric {
                fluent: c.fluent.clone(),
                required: c.threshold,
                available,
            })
        })
        .collect();
    let status = if !missing_pre.is_empty() || !violated_neg_pre.is_empty() {
        ActionStatus::BlockedPropositional
    } else if !failed_numeric_pre.is_empty() {
        ActionStatus::BlockedResource
    } else {
        ActionStatus::Applicable
    };
    ActionClassification { action: action.id.clone(), status, failed_numeric_pre, missing_pre, violated_neg_pre }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecutionError {
    #[error("action {} is not applicable ({:?})", .0.action, .0.status)]
    NotApplicable(ActionClassification),
    #[error("action {action} drives {fluent} to {value}")]
    NegativeResource { action: String, fluent: Fluent, value: Quantity },
}

/// Successor state under full semantics: deletes, then adds, then numeric
/// effects in listed order.
pub fn apply(state: &State, action: &GroundAction) -> Result<State, ExecutionError> {
    let class = applicable(state, action);
    if !class.is_applicable() {
        return Err(ExecutionError::NotApplicable(class));
    }
    apply_unchecked(state, action)
}

/// Applies effects without checking preconditions. Still refuses to produce
/// a negative fluent.
pub fn apply_unchecked(state: &State, action: &GroundAction) -> Result<State, ExecutionError> {
    let mut next = state.clone();
    for a in &action.del {
        next.atoms.remove(a);
    }
    for a in &action.add {
        next.atoms.insert(a.clone());
    }
    for eff in &action.numeric_eff {
        let value = eff.apply_to(next.value(&eff.fluent));
        if value.is_negative() {
            return Err(ExecutionError::NegativeResource {
                action: action.id.clone(),
                fluent: eff.fluent.clone(),
                value,
            });
        }
        next.fluents.insert(eff.fluent.clone(), value);
    }
    Ok(next)
}
