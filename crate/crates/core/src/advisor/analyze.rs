use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::advisory::{Advisory, AdvisoryKind, AdvisoryPayload, ResourceShortfall, ShortfallAlternative};
use super::validate::{validate_plan, PlanValidationReport};
use crate::landmarks::{self, ExtractionOptions, LandmarkGraph, LandmarkStatus, Status};
use crate::task::{Atom, GroundAction, State};

pub const DEFAULT_ANALYSIS_BUDGET: Duration = Duration::from_secs(2);

/// What `analyze` reads: the current action set, execution trace (ending at
/// `current`), goals and the pending plan steps.
#[derive(Debug, Clone, Copy)]
pub struct AnalysisContext<'a> {
    pub actions: &'a [GroundAction],
    pub current: &'a State,
    pub trace: &'a [State],
    pub goals: &'a BTreeSet<Atom>,
    pub plan: &'a [&'a GroundAction],
    pub budget: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct Analysis {
    pub advisories: Vec<Advisory>,
    pub landmarks: LandmarkGraph,
    pub statuses: Vec<LandmarkStatus>,
    pub validation: PlanValidationReport,
}

struct Ranked {
    level: usize,
    label: String,
    advisory: Advisory,
}

pub fn analyze(ctx: &AnalysisContext<'_>) -> Analysis {
    let options = ExtractionOptions { deadline: Some(Instant::now() + ctx.budget), ..Default::default() };
    let (graph, unreachable_goals) =
        match landmarks::extract_landmarks_with(ctx.current, ctx.goals, ctx.actions, options) {
            Ok(g) => (g, Vec::new()),
            Err(e) => (*e.graph, e.goals),
        };
    let statuses = landmarks::landmark_status(&graph, ctx.trace, ctx.current, ctx.actions);
    let mut ranked = Vec::new();

    if !unreachable_goals.is_empty() {
        let label = unreachable_goals.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        ranked.push(Ranked {
            level: 0,
            label,
            advisory: Advisory::new(
                AdvisoryKind::GoalUnreachable,
                AdvisoryPayload { goals: unreachable_goals, ..Default::default() },
            ),
        });
    }

    for st in &statuses {
        let lm = &graph.nodes[st.landmark];
        let level = st.level.or(graph.levels[st.landmark]).unwrap_or(usize::MAX);
        match st.status {
            Status::RequiredUnreachable => ranked.push(Ranked {
                level,
                label: lm.label(),
                advisory: Advisory::new(
                    AdvisoryKind::LandmarkUnreachable,
                    AdvisoryPayload { landmark: Some(lm.disjuncts.clone()), level: st.level, ..Default::default() },
                ),
            }),
            Status::RequiredResourceBlocked => {
                let alternatives = st
                    .blocking
                    .iter()
                    .flat_map(|b| {
                        b.failed.iter().map(|f| ShortfallAlternative {
                            disjunct: b.disjunct.clone(),
                            achiever: b.achiever.clone(),
                            fluent: f.fluent.clone(),
                            required: f.required,
                            available: f.available,
                            shortfall: f.available.shortfall_to(f.required),
                        })
                    })
                    .collect();
                ranked.push(Ranked {
                    level,
                    label: lm.label(),
                    advisory: Advisory::new(
                        AdvisoryKind::ResourceShortfall,
                        AdvisoryPayload {
                            landmark: Some(lm.disjuncts.clone()),
                            level: st.level,
                            shortfall: Some(ResourceShortfall { alternatives }),
                            ..Default::default()
                        },
                    ),
                });
            }
            Status::Achieved | Status::RequiredReachable => {}
        }
    }

    let validation = validate_plan(ctx.current, ctx.plan, ctx.goals);
    if let Some(i) = validation.first_invalid {
        let step = &validation.steps[i];
        ranked.push(Ranked {
            level: usize::MAX,
            label: format!("{i:08}"),
            advisory: Advisory::new(
                AdvisoryKind::PlanStepInvalid,
                AdvisoryPayload {
                    step_index: Some(i),
                    action: Some(step.action.clone()),
                    classification: step.classification.clone(),
                    note: step.error.clone(),
                    ..Default::default()
                },
            ),
        });
    } else if validation.goal_satisfied {
        ranked.push(Ranked {
            level: usize::MAX,
            label: String::new(),
            advisory: Advisory::new(
                AdvisoryKind::GoalAchieved,
                AdvisoryPayload { projected: Some(!ctx.plan.is_empty()), ..Default::default() },
            ),
        });
    } else {
        ranked.push(Ranked {
            level: usize::MAX,
            label: String::new(),
            advisory: Advisory::new(
                AdvisoryKind::PlanIncomplete,
                AdvisoryPayload { goals: validation.unsatisfied_goals.clone(), ..Default::default() },
            ),
        });
    }

    if graph.partial {
        ranked.push(Ranked {
            level: usize::MAX,
            label: "~partial".into(),
            advisory: Advisory::new(
                AdvisoryKind::Info,
                AdvisoryPayload {
                    note: Some(format!(
                        "Analysis stopped after {} ms; some landmarks may be missing",
                        ctx.budget.as_millis()
                    )),
                    ..Default::default()
                },
            ),
        });
    }

    ranked.sort_by(|a, b| {
        (a.advisory.severity, a.level, &a.label, a.advisory.kind).cmp(&(
            b.advisory.severity,
            b.level,
            &b.label,
            b.advisory.kind,
        ))
    });
    Analysis { advisories: ranked.into_iter().map(|r| r.advisory).collect(), landmarks: graph, statuses, validation }
}

/// Analyze a problem as loaded: no trace beyond the initial state.
pub fn analyze_initial(
    actions: &[GroundAction],
    init: &State,
    goals: &BTreeSet<Atom>,
    plan: &[&GroundAction],
) -> Analysis {
    analyze(&AnalysisContext {
        actions,
        current: init,
        trace: std::slice::from_ref(init),
        goals,
        plan,
        budget: DEFAULT_ANALYSIS_BUDGET,
    })
}
