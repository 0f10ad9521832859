//! Interactive sessions: model, state, goals and plan, changed only through
//! [`SessionCommand`]s and re-analyzed after every accepted command.

mod command;
mod replay;
mod snapshot;

use std::collections::{BTreeSet, HashMap};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::advisor::{self, Advisory, Analysis, AnalysisContext, DispatchDecision, DispatchPolicy};
use crate::pddl::{self, DomainModel, ProblemInstance};
use crate::reachability::{self, ExecutionError};
use crate::task::{Atom, GroundAction, State};

pub use command::{
    CommandDetail, CommandResponse, DispatchOutcome, SessionCommand, SessionError, SuggestionOutcome, Suggestions,
};
pub use replay::{parse_events, replay, ScenarioEvent, Transcript, TranscriptEntry, TranscriptOutcome};
pub use snapshot::{restore, snapshot, Snapshot, SNAPSHOT_SCHEMA_VERSION};

use command::invalid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct SessionConfig {
    pub dispatch_policy: DispatchPolicy,
    pub suggest_budget_ms: u64,
    pub analysis_budget_ms: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            dispatch_policy: DispatchPolicy::Block,
            suggest_budget_ms: advisor::DEFAULT_SUGGEST_BUDGET.as_millis() as u64,
            analysis_budget_ms: advisor::DEFAULT_ANALYSIS_BUDGET.as_millis() as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum StepStatus {
    Pending,
    Executed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct PlanStep {
    pub action: String,
    pub status: StepStatus,
}

/// How the state at `trace[i + 1]` came from `trace[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Transition {
    Executed { action: String },
    Edited { command: SessionCommand },
}

/// The persisted part of a session. Everything else is derived from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct SessionData {
    pub id: String,
    pub domain_text: String,
    pub problem_text: String,
    pub current_state: State,
    /// Every state the session has been in, starting at the initial state
    /// and ending at `current_state`.
    pub trace: Vec<State>,
    pub transitions: Vec<Transition>,
    pub goals: BTreeSet<Atom>,
    pub plan: Vec<PlanStep>,
    pub disabled_actions: BTreeSet<String>,
    pub config: SessionConfig,
    pub revision: u64,
    pub suggestions: Option<Suggestions>,
    pub last_dispatch: Option<DispatchOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    data: SessionData,
    domain: DomainModel,
    problem: ProblemInstance,
    catalog: Vec<GroundAction>,
    analysis: Analysis,
}

/// What clients see: the persisted data plus the latest analysis.
#[derive(Debug, Clone, Serialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct SessionView<'a> {
    #[serde(flatten)]
    pub data: &'a SessionData,
    pub analysis: &'a Analysis,
}

impl Session {
    pub fn create(domain_text: &str, problem_text: &str, config: SessionConfig) -> Result<Session, SessionError> {
        Self::create_with_id(uuid::Uuid::new_v4().to_string(), domain_text, problem_text, config)
    }

    pub fn create_with_id(
        id: impl Into<String>,
        domain_text: &str,
        problem_text: &str,
        config: SessionConfig,
    ) -> Result<Session, SessionError> {
        let domain = pddl::parse_domain(domain_text)?;
        let problem = pddl::parse_problem(problem_text, &domain)?;
        let init = problem.initial_state();
        let data = SessionData {
            id: id.into(),
            domain_text: domain_text.to_string(),
            problem_text: problem_text.to_string(),
            current_state: init.clone(),
            trace: vec![init],
            transitions: Vec::new(),
            goals: problem.goal.clone(),
            plan: Vec::new(),
            disabled_actions: BTreeSet::new(),
            config,
            revision: 0,
            suggestions: None,
            last_dispatch: None,
        };
        Ok(Self::from_parts(data, domain, problem))
    }

    fn from_parts(data: SessionData, domain: DomainModel, problem: ProblemInstance) -> Session {
        let mut session = Session { data, domain, problem, catalog: Vec::new(), analysis: placeholder_analysis() };
        session.reground();
        session.analysis = session.fresh_analysis();
        session
    }

    pub fn id(&self) -> &str {
        &self.data.id
    }

    pub fn revision(&self) -> u64 {
        self.data.revision
    }

    pub fn data(&self) -> &SessionData {
        &self.data
    }

    pub fn domain(&self) -> &DomainModel {
        &self.domain
    }

    pub fn problem(&self) -> &ProblemInstance {
        &self.problem
    }

    /// All ground actions, including disabled ones.
    pub fn catalog(&self) -> &[GroundAction] {
        &self.catalog
    }

    pub fn analysis(&self) -> &Analysis {
        &self.analysis
    }

    pub fn advisories(&self) -> &[Advisory] {
        &self.analysis.advisories
    }

    pub fn view(&self) -> SessionView<'_> {
        SessionView { data: &self.data, analysis: &self.analysis }
    }

    /// Ground actions visible to analysis and search.
    pub fn active_actions(&self) -> Vec<GroundAction> {
        self.catalog.iter().filter(|a| !self.data.disabled_actions.contains(&a.id)).cloned().collect()
    }

    fn pending(&self) -> impl Iterator<Item = (usize, &PlanStep)> {
        self.data.plan.iter().enumerate().filter(|(_, s)| s.status == StepStatus::Pending)
    }

    fn pending_actions(&self) -> Vec<&GroundAction> {
        let ids = pddl::by_id(&self.catalog);
        self.pending().filter_map(|(_, s)| ids.get(s.action.as_str()).copied()).collect()
    }

    /// Analysis of the current context computed from scratch.
    pub fn fresh_analysis(&self) -> Analysis {
        let actions = self.active_actions();
        let plan = self.pending_actions();
        advisor::analyze(&AnalysisContext {
            actions: &actions,
            current: &self.data.current_state,
            trace: &self.data.trace,
            goals: &self.data.goals,
            plan: &plan,
            budget: Duration::from_millis(self.data.config.analysis_budget_ms),
        })
    }

    /// Grounds against every atom the session has seen, so actions that
    /// pending steps refer to survive fact edits.
    fn reground(&mut self) {
        let atoms: BTreeSet<Atom> = self.data.trace.iter().flat_map(|s| s.atoms.iter().cloned()).collect();
        self.catalog = pddl::ground_against(&self.domain, &self.problem, &atoms);
    }

    /// Applies `cmd` atomically. On error the session is unchanged.
    pub fn handle(&mut self, cmd: SessionCommand) -> Result<CommandResponse, SessionError> {
        let mut next = self.clone();
        let detail = next.apply(cmd)?;
        next.data.revision += 1;
        next.analysis = next.fresh_analysis();
        *self = next;
        Ok(CommandResponse { revision: self.data.revision, advisories: self.analysis.advisories.clone(), detail })
    }

    /// RequestSuggestions with a one-off search budget.
    pub fn handle_suggest(&mut self, budget_ms: Option<u64>) -> Result<CommandResponse, SessionError> {
        let saved = self.data.config.suggest_budget_ms;
        if let Some(b) = budget_ms.filter(|&b| b > 0) {
            self.data.config.suggest_budget_ms = b;
        }
        let result = self.handle(SessionCommand::RequestSuggestions);
        self.data.config.suggest_budget_ms = saved;
        result
    }

    fn lookup(&self, id: &str) -> Result<&GroundAction, SessionError> {
        self.catalog.iter().find(|a| a.id == id).ok_or_else(|| invalid(format!("unknown action `{id}`")))
    }

    fn edit_state(&mut self, state: State, cmd: SessionCommand) {
        self.data.current_state = state.clone();
        self.data.trace.push(state);
        self.data.transitions.push(Transition::Edited { command: cmd });
    }

    fn execute(&mut self, index: usize) -> Result<String, SessionError> {
        let id = self.data.plan[index].action.clone();
        let action = self.lookup(&id)?;
        let next = reachability::apply(&self.data.current_state, action).map_err(|e| match e {
            ExecutionError::NotApplicable(classification) => {
                SessionError::StepNotApplicable { action: id.clone(), classification: Box::new(classification) }
            }
            ExecutionError::NegativeResource { .. } => SessionError::StepNotApplicable {
                action: id.clone(),
                classification: Box::new(reachability::applicable(&self.data.current_state, action)),
            },
        })?;
        self.data.current_state = next.clone();
        self.data.trace.push(next);
        self.data.transitions.push(Transition::Executed { action: id.clone() });
        self.data.plan[index].status = StepStatus::Executed;
        Ok(id)
    }

    fn apply(&mut self, cmd: SessionCommand) -> Result<Option<CommandDetail>, SessionError> {
        match &cmd {
            SessionCommand::AddGoal { atom } => {
                pddl::check_ground_atom(atom, &self.domain, &self.problem).map_err(invalid)?;
                if !self.data.goals.insert(atom.clone()) {
                    return Err(invalid(format!("`{atom}` is already a goal")));
                }
            }
            SessionCommand::RemoveGoal { atom } => {
                if !self.data.goals.remove(atom) {
                    return Err(invalid(format!("`{atom}` is not a goal")));
                }
            }
            SessionCommand::AddFact { atom } => {
                pddl::check_ground_atom(atom, &self.domain, &self.problem).map_err(invalid)?;
                let mut state = self.data.current_state.clone();
                if !state.atoms.insert(atom.clone()) {
                    return Err(invalid(format!("`{atom}` already holds")));
                }
                self.edit_state(state, cmd.clone());
                self.reground();
            }
            SessionCommand::RemoveFact { atom } => {
                let mut state = self.data.current_state.clone();
                if !state.atoms.remove(atom) {
                    return Err(invalid(format!("`{atom}` does not hold")));
                }
                self.edit_state(state, cmd.clone());
                self.reground();
            }
            SessionCommand::AdjustResource { fluent, delta } => {
                pddl::check_ground_fluent(fluent, &self.domain, &self.problem).map_err(invalid)?;
                let mut state = self.data.current_state.clone();
                let value = state.value(fluent) + *delta;
                if value.is_negative() {
                    return Err(invalid(format!("`{fluent}` would become negative ({value})")));
                }
                state.fluents.insert(fluent.clone(), value);
                self.edit_state(state, cmd.clone());
            }
            SessionCommand::AppendStep { action } => {
                self.lookup(action)?;
                if self.data.disabled_actions.contains(action) {
                    return Err(invalid(format!("action `{action}` is disabled")));
                }
                self.data.plan.push(PlanStep { action: action.clone(), status: StepStatus::Pending });
            }
            SessionCommand::RemoveStep { index } => match self.data.plan.get(*index) {
                Some(step) if step.status == StepStatus::Pending => {
                    self.data.plan.remove(*index);
                }
                Some(_) => return Err(invalid(format!("step {index} was already executed"))),
                None => return Err(invalid(format!("no step at index {index}"))),
            },
            SessionCommand::ExecuteStep => {
                let Some((index, _)) = self.pending().next() else {
                    return Err(invalid("the plan has no pending step"));
                };
                let action = self.execute(index)?;
                return Ok(Some(CommandDetail::Executed { action }));
            }
            SessionCommand::RequestSuggestions => {
                let plan = self.pending_actions();
                let report = advisor::validate_plan(&self.data.current_state, &plan, &self.data.goals);
                let after_step = report.first_invalid.unwrap_or(plan.len());
                let actions = self.active_actions();
                let budget = Duration::from_millis(self.data.config.suggest_budget_ms);
                let result = advisor::suggest_actions(&report.end_state, &self.data.goals, &actions, budget)
                    .map(|p| p.iter().map(|a| a.id.clone()).collect());
                let suggestions = Suggestions::from_search(self.data.revision + 1, after_step, result);
                self.data.suggestions = Some(suggestions.clone());
                return Ok(Some(CommandDetail::Suggested(suggestions)));
            }
            SessionCommand::Dispatch => {
                let report =
                    advisor::validate_plan(&self.data.current_state, &self.pending_actions(), &self.data.goals);
                let decision = advisor::dispatch_gate(&report, self.data.config.dispatch_policy);
                if decision == DispatchDecision::Block {
                    return Err(SessionError::DispatchBlocked { report: Box::new(report) });
                }
                let indices: Vec<usize> = self.pending().map(|(i, _)| i).collect();
                let mut outcome = DispatchOutcome { decision, executed: Vec::new(), stopped_at: None };
                for i in indices {
                    match self.execute(i) {
                        Ok(id) => outcome.executed.push(id),
                        Err(SessionError::StepNotApplicable { classification, .. }) => {
                            outcome.stopped_at = Some(*classification);
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                self.data.last_dispatch = Some(outcome.clone());
                return Ok(Some(CommandDetail::Dispatched(outcome)));
            }
            SessionCommand::SetConfig { key, value } => self.set_config(key, value)?,
            SessionCommand::DisableAction { action } => {
                self.lookup(action)?;
                if self.pending().any(|(_, s)| &s.action == action) {
                    return Err(invalid(format!("action `{action}` is used by a pending step")));
                }
                if !self.data.disabled_actions.insert(action.clone()) {
                    return Err(invalid(format!("action `{action}` is already disabled")));
                }
            }
            SessionCommand::EnableAction { action } => {
                if !self.data.disabled_actions.remove(action) {
                    return Err(invalid(format!("action `{action}` is not disabled")));
                }
            }
        }
        Ok(None)
    }

    fn set_config(&mut self, key: &str, value: &serde_json::Value) -> Result<(), SessionError> {
        let millis =
            || value.as_u64().filter(|&v| v > 0).ok_or_else(|| invalid(format!("`{key}` must be a positive integer")));
        match key {
            "dispatchPolicy" => {
                let text = value.as_str().ok_or_else(|| invalid("`dispatchPolicy` must be a string"))?;
                self.data.config.dispatch_policy = text.parse().map_err(invalid)?;
            }
            "suggestBudgetMs" => self.data.config.suggest_budget_ms = millis()?,
            "analysisBudgetMs" => self.data.config.analysis_budget_ms = millis()?,
            other => return Err(invalid(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Index from action id to ground action over the catalog.
    pub fn actions_by_id(&self) -> HashMap<&str, &GroundAction> {
        pddl::by_id(&self.catalog)
    }
}

fn placeholder_analysis() -> Analysis {
    Analysis {
        advisories: Vec::new(),
        landmarks: crate::landmarks::LandmarkGraph {
            nodes: Vec::new(),
            levels: Vec::new(),
            orders: Vec::new(),
            unreachable_goals: Vec::new(),
            partial: false,
        },
        statuses: Vec::new(),
        validation: advisor::validate_plan(&State::default(), &[], &BTreeSet::new()),
    }
}
