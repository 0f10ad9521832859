//! Alerts, suggestions and suggested actions derived from landmark
//! statuses, plan validation and a satisficing search.

mod advisory;
mod analyze;
mod search;
mod validate;

pub use advisory::{Advisory, AdvisoryKind, AdvisoryPayload, ResourceShortfall, Severity, ShortfallAlternative};
pub use analyze::{analyze, analyze_initial, Analysis, AnalysisContext, DEFAULT_ANALYSIS_BUDGET};
pub use search::{suggest_actions, SearchError, DEFAULT_SUGGEST_BUDGET};
pub use validate::{
    dispatch_gate, validate_plan, DispatchDecision, DispatchPolicy, PlanValidationReport, StepReport, StepVerdict,
};
