//! Greedy best-first search for suggested actions.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::validate::validate_plan;
use crate::landmarks::{self, ExtractionOptions};
use crate::reachability::index::IndexedTask;
use crate::reachability::{self, ResourcePolicy};
use crate::task::{Atom, GroundAction, State};

pub const DEFAULT_SUGGEST_BUDGET: Duration = Duration::from_secs(5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema, thiserror::Error)]
#[serde(rename_all = "kebab-case")]
pub enum SearchError {
    #[error("no plan found within the time budget")]
    Timeout,
    /// The reachable state space was exhausted without meeting the goal.
    #[error("goal is unreachable from this state")]
    Unsolvable,
}

struct Node {
    state: State,
    parent: Option<(usize, usize)>,
    achieved: Vec<bool>,
}

/// Finds a plan from `state` to `goal` using only `actions`.
///
/// Nodes are ordered by the number of landmarks not yet achieved on the
/// path (goal landmarks count until they hold), then by the sum of goal
/// levels in the relaxed graph, then by the sequence of action ids. States
/// whose goals are relaxed-unreachable with resources enforced are pruned.
pub fn suggest_actions<'a>(
    state: &State,
    goal: &BTreeSet<Atom>,
    actions: &'a [GroundAction],
    budget: Duration,
) -> Result<Vec<&'a GroundAction>, SearchError> {
    let deadline = Instant::now() + budget;
    if state.satisfies(goal) {
        return Ok(Vec::new());
    }
    let options = ExtractionOptions { deadline: Some(deadline), ..Default::default() };
    let graph =
        landmarks::extract_landmarks_with(state, goal, actions, options).map_err(|_| SearchError::Unsolvable)?;

    let task = IndexedTask::new(state, actions, goal);
    let goal_ids: Vec<usize> = goal.iter().map(|g| task.atom_index(g).expect("interned")).collect();
    let mut order: Vec<usize> = (0..actions.len()).collect();
    order.sort_by(|&a, &b| actions[a].id.cmp(&actions[b].id));
    let mut rank = vec![0u32; actions.len()];
    for (r, &a) in order.iter().enumerate() {
        rank[a] = r as u32;
    }

    // Relaxed goal-level sum, or None for a dead end.
    let estimate = |s: &State| -> Option<u64> {
        let levels =
            task.relaxed(&task.state_atoms(s), &task.state_fluents(s), ResourcePolicy::EnforceNumericStatic, None);
        goal_ids.iter().map(|&g| levels.fact_level(g).map(u64::from)).sum()
    };
    let h = |s: &State, achieved: &[bool]| -> usize {
        graph
            .nodes
            .iter()
            .zip(achieved)
            .filter(|(lm, &done)| {
                let is_goal = lm.origin == landmarks::LandmarkOrigin::Goal;
                !done || (is_goal && !lm.held_in(s))
            })
            .count()
    };

    let Some(root_sum) = estimate(state) else {
        return Err(SearchError::Unsolvable);
    };
    let root_achieved: Vec<bool> = graph.nodes.iter().map(|lm| lm.held_in(state)).collect();
    let mut nodes = vec![Node { state: state.clone(), parent: None, achieved: root_achieved }];
    let mut seen: HashSet<State> = HashSet::from([state.clone()]);
    let mut open = BinaryHeap::new();
    open.push(Reverse((h(state, &nodes[0].achieved), root_sum, Vec::<u32>::new(), 0usize)));

    while let Some(Reverse((_, _, path, idx))) = open.pop() {
        if Instant::now() >= deadline {
            return Err(SearchError::Timeout);
        }
        for a in 0..actions.len() {
            let Ok(next) = reachability::apply(&nodes[idx].state, &actions[a]) else {
                continue;
            };
            if !seen.insert(next.clone()) {
                continue;
            }
            let achieved: Vec<bool> =
                graph.nodes.iter().zip(&nodes[idx].achieved).map(|(lm, &done)| done || lm.held_in(&next)).collect();
            let child = nodes.len();
            let is_goal = next.satisfies(goal);
            let key = if is_goal { None } else { estimate(&next) };
            let hv = h(&next, &achieved);
            nodes.push(Node { state: next, parent: Some((idx, a)), achieved });
            if is_goal {
                let plan = extract_plan(&nodes, child, actions);
                if validate_plan(state, &plan, goal).goal_satisfied {
                    return Ok(plan);
                }
                continue;
            }
            let Some(sum) = key else { continue };
            let mut child_path = path.clone();
            child_path.push(rank[a]);
            open.push(Reverse((hv, sum, child_path, child)));
        }
    }
    Err(SearchError::Unsolvable)
}

fn extract_plan<'a>(nodes: &[Node], mut idx: usize, actions: &'a [GroundAction]) -> Vec<&'a GroundAction> {
    let mut plan = Vec::new();
    while let Some((parent, a)) = nodes[idx].parent {
        plan.push(&actions[a]);
        idx = parent;
    }
    plan.reverse();
    plan
}
