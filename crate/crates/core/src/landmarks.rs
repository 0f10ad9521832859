//! Fact and disjunctive landmarks by backchaining over first achievers in
//! the relaxed planning graph.
//!
//! Every derived candidate must pass [`verify_landmark`] before it is
//! emitted: with all of its achievers removed, some goal atom that was
//! relaxed-reachable must become relaxed-unreachable. Relaxed
//! unreachability implies real unreachability, so emitted landmarks are
//! sound. Extraction is not complete and may miss landmarks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::quantity::Quantity;
use crate::reachability::index::{IndexedTask, RelaxedLevels};
use crate::reachability::{FailedNumeric, ResourcePolicy};
use crate::task::{Atom, GroundAction, State};

pub const DEFAULT_DISJUNCTION_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum LandmarkOrigin {
    Goal,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Landmark {
    pub disjuncts: BTreeSet<Atom>,
    pub origin: LandmarkOrigin,
    pub verified: bool,
}

impl Landmark {
    pub fn is_disjunctive(&self) -> bool {
        self.disjuncts.len() > 1
    }

    pub fn held_in(&self, state: &State) -> bool {
        self.disjuncts.iter().any(|d| state.holds(d))
    }

    /// `a | b | c`
    pub fn label(&self) -> String {
        self.disjuncts.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingKind {
    GreedyNecessary,
    Natural,
}

/// `from` must be achieved before `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct LandmarkOrdering {
    pub from: usize,
    pub to: usize,
    pub kind: OrderingKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct LandmarkGraph {
    pub nodes: Vec<Landmark>,
    /// Relaxed (ignore-numeric) level of each node in the extraction state.
    pub levels: Vec<Option<usize>>,
    pub orders: Vec<LandmarkOrdering>,
    pub unreachable_goals: Vec<Atom>,
    /// Extraction stopped at its deadline; the graph may be missing landmarks.
    pub partial: bool,
}

impl LandmarkGraph {
    pub fn find(&self, disjuncts: &BTreeSet<Atom>) -> Option<usize> {
        self.nodes.iter().position(|n| &n.disjuncts == disjuncts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("goal atoms unreachable: {}", .goals.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))]
pub struct GoalUnreachable {
    pub goals: Vec<Atom>,
    pub graph: Box<LandmarkGraph>,
}

#[derive(Debug, Clone, Copy)]
pub struct ExtractionOptions {
    pub disjunction_cap: usize,
    pub deadline: Option<Instant>,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        ExtractionOptions { disjunction_cap: DEFAULT_DISJUNCTION_CAP, deadline: None }
    }
}

pub fn extract_landmarks(
    state: &State,
    goal: &BTreeSet<Atom>,
    actions: &[GroundAction],
) -> Result<LandmarkGraph, GoalUnreachable> {
    extract_landmarks_with(state, goal, actions, ExtractionOptions::default())
}

pub fn extract_landmarks_with(
    state: &State,
    goal: &BTreeSet<Atom>,
    actions: &[GroundAction],
    options: ExtractionOptions,
) -> Result<LandmarkGraph, GoalUnreachable> {
    let task = IndexedTask::new(state, actions, goal);
    let init = task.state_atoms(state);
    let fluents = task.state_fluents(state);
    let base = task.relaxed(&init, &fluents, ResourcePolicy::IgnoreNumeric, None);
    let goal_ids: Vec<usize> = goal.iter().map(|g| task.atom_index(g).expect("interned")).collect();
    let reachable_goals: Vec<usize> = goal_ids.iter().copied().filter(|&g| base.fact_level(g).is_some()).collect();
    let verifier = Verifier { task: &task, init: &init, fluents: &fluents, goals: &reachable_goals };

    // Landmarks as sorted atom-id sets while extracting.
    let mut nodes: Vec<(Vec<usize>, LandmarkOrigin)> = Vec::new();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut partial = false;

    let mut sorted_goals = goal_ids.clone();
    sorted_goals.sort_by(|a, b| task.atoms[*a].cmp(&task.atoms[*b]));
    for g in sorted_goals {
        let key = vec![g];
        if index.contains_key(&key) {
            continue;
        }
        index.insert(key.clone(), nodes.len());
        queue.push_back(nodes.len());
        nodes.push((key, LandmarkOrigin::Goal));
    }

    while let Some(current) = queue.pop_front() {
        if options.deadline.is_some_and(|d| Instant::now() >= d) {
            partial = true;
            break;
        }
        let set = nodes[current].0.clone();
        match base.set_level(&set) {
            Some(l) if l > 0 => {}
            _ => continue,
        }
        let achievers = base.first_achievers(&task, &set);
        if achievers.is_empty() {
            continue;
        }
        for candidate in candidates(&task, &base, &achievers, options.disjunction_cap) {
            if let Some(&existing) = index.get(&candidate) {
                if existing != current {
                    edges.insert((existing, current));
                }
                continue;
            }
            if !verifier.accepts(&candidate) {
                continue;
            }
            let id = nodes.len();
            index.insert(candidate.clone(), id);
            nodes.push((candidate, LandmarkOrigin::Derived));
            edges.insert((id, current));
            queue.push_back(id);
        }
    }

    // Natural orderings: `a` precedes `b` when `b` is relaxed-unreachable
    // once every achiever of `a` is removed.
    let levels: Vec<Option<u32>> = nodes.iter().map(|(set, _)| base.set_level(set)).collect();
    let mut natural = BTreeSet::new();
    if !partial {
        for a in 0..nodes.len() {
            let Some(la) = levels[a] else { continue };
            if la == 0 {
                continue;
            }
            let mut removed: Option<RelaxedLevels> = None;
            for b in 0..nodes.len() {
                let Some(lb) = levels[b] else { continue };
                if la >= lb || edges.contains(&(a, b)) {
                    continue;
                }
                let without = removed.get_or_insert_with(|| verifier.without_achievers(&nodes[a].0));
                if without.set_level(&nodes[b].0).is_none() {
                    natural.insert((a, b));
                }
            }
        }
    }

    // Deterministic node order: by level (unreached last), then by atoms.
    let labels: Vec<Vec<&Atom>> = nodes.iter().map(|(set, _)| set.iter().map(|&p| &task.atoms[p]).collect()).collect();
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&x, &y| {
        let lx = levels[x].unwrap_or(u32::MAX);
        let ly = levels[y].unwrap_or(u32::MAX);
        lx.cmp(&ly).then_with(|| labels[x].cmp(&labels[y]))
    });
    let mut position = vec![0; nodes.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }

    let graph_nodes: Vec<Landmark> = order
        .iter()
        .map(|&i| Landmark {
            disjuncts: nodes[i].0.iter().map(|&p| task.atoms[p].clone()).collect(),
            origin: nodes[i].1,
            verified: true,
        })
        .collect();
    let mut orders: Vec<LandmarkOrdering> = edges
        .iter()
        .map(|&(f, t)| LandmarkOrdering { from: position[f], to: position[t], kind: OrderingKind::GreedyNecessary })
        .chain(natural.iter().map(|&(f, t)| LandmarkOrdering {
            from: position[f],
            to: position[t],
            kind: OrderingKind::Natural,
        }))
        .collect();
    orders.sort();

    let unreachable_goals: Vec<Atom> =
        goal.iter().filter(|g| base.fact_level(task.atom_index(g).unwrap()).is_none()).cloned().collect();
    let graph = LandmarkGraph {
        nodes: graph_nodes,
        levels: order.iter().map(|&i| levels[i].map(|l| l as usize)).collect(),
        orders,
        unreachable_goals: unreachable_goals.clone(),
        partial,
    };
    if unreachable_goals.is_empty() {
        Ok(graph)
    } else {
        Err(GoalUnreachable { goals: unreachable_goals, graph: Box::new(graph) })
    }
}

/// Fact candidates from the shared preconditions of the achievers, then
/// same-predicate disjunctive candidates that cover every achiever.
fn candidates(task: &IndexedTask<'_>, base: &RelaxedLevels, achievers: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let not_initial = |p: usize| base.fact_level(p) != Some(0);

    let mut shared: BTreeSet<usize> = task.pre[achievers[0]].iter().copied().collect();
    for &a in &achievers[1..] {
        let pre: BTreeSet<usize> = task.pre[a].iter().copied().collect();
        shared = shared.intersection(&pre).copied().collect();
    }
    let facts: BTreeSet<usize> = shared.into_iter().filter(|&p| not_initial(p)).collect();

    let mut by_predicate: BTreeMap<&str, (BTreeSet<usize>, usize)> = BTreeMap::new();
    for &a in achievers {
        let mut seen_here = BTreeSet::new();
        for &p in &task.pre[a] {
            let pred = task.atoms[p].predicate.as_str();
            let entry = by_predicate.entry(pred).or_default();
            entry.0.insert(p);
            if seen_here.insert(pred) {
                entry.1 += 1;
            }
        }
    }

    let mut out: Vec<Vec<usize>> = facts.iter().map(|&p| vec![p]).collect();
    for (_, (union, covered)) in by_predicate {
        if covered < achievers.len() || union.len() < 2 || union.len() > cap {
            continue;
        }
        // A member that already holds, or that is itself a fact landmark,
        // makes the disjunction uninformative.
        if union.iter().any(|&p| !not_initial(p) || facts.contains(&p)) {
            continue;
        }
        out.push(union.into_iter().collect());
    }
    out.sort_by(|a, b| {
        let la: Vec<&Atom> = a.iter().map(|&p| &task.atoms[p]).collect();
        let lb: Vec<&Atom> = b.iter().map(|&p| &task.atoms[p]).collect();
        la.len().cmp(&lb.len()).then(la.cmp(&lb))
    });
    out
}

struct Verifier<'t, 'a> {
    task: &'t IndexedTask<'a>,
    init: &'t [bool],
    fluents: &'t [Quantity],
    goals: &'t [usize],
}

impl Verifier<'_, '_> {
    fn without_achievers(&self, set: &[usize]) -> RelaxedLevels {
        let mut excluded = vec![false; self.task.actions.len()];
        for &p in set {
            for &a in &self.task.adders[p] {
                excluded[a] = true;
            }
        }
        self.task.relaxed(self.init, self.fluents, ResourcePolicy::IgnoreNumeric, Some(&excluded))
    }

    fn accepts(&self, set: &[usize]) -> bool {
        if set.iter().all(|&p| self.init[p]) {
            return false;
        }
        let levels = self.without_achievers(set);
        self.goals.iter().any(|&g| levels.fact_level(g).is_none())
    }
}

/// True iff removing every action that adds a member of `candidate` makes
/// some relaxed-reachable goal atom relaxed-unreachable from `state`.
pub fn verify_landmark(
    candidate: &BTreeSet<Atom>,
    state: &State,
    goal: &BTreeSet<Atom>,
    actions: &[GroundAction],
) -> bool {
    let task = IndexedTask::new(state, actions, goal.iter().chain(candidate));
    let init = task.state_atoms(state);
    let fluents = task.state_fluents(state);
    let base = task.relaxed(&init, &fluents, ResourcePolicy::IgnoreNumeric, None);
    let goals: Vec<usize> =
        goal.iter().map(|g| task.atom_index(g).unwrap()).filter(|&g| base.fact_level(g).is_some()).collect();
    let set: Vec<usize> = candidate.iter().map(|c| task.atom_index(c).unwrap()).collect();
    Verifier { task: &task, init: &init, fluents: &fluents, goals: &goals }.accepts(&set)
}

// ---------------------------------------------------------------------------
// status tracking

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Achieved,
    RequiredReachable,
    RequiredResourceBlocked,
    RequiredUnreachable,
}

/// Why one disjunct of a resource-blocked landmark cannot be produced: the
/// cheapest of its first achievers and the numeric preconditions it fails.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct DisjunctBlocking {
    pub disjunct: Atom,
    pub achiever: String,
    pub failed: Vec<FailedNumeric>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct LandmarkStatus {
    pub landmark: usize,
    pub status: Status,
    /// Relaxed (ignore-numeric) level from the current state.
    pub level: Option<usize>,
    /// Filled for [`Status::RequiredResourceBlocked`].
    pub blocking: Vec<DisjunctBlocking>,
}

/// Status of every landmark in `graph` given the execution `trace` (which
/// ends at `current`) and the current action set.
///
/// A landmark is resource-blocked when it is reachable ignoring numeric
/// preconditions, unreachable when they are enforced (with reachable
/// increases raising the available amounts), and every first achiever of
/// every reachable disjunct fails some numeric precondition against those
/// amounts.
pub fn landmark_status(
    graph: &LandmarkGraph,
    trace: &[State],
    current: &State,
    actions: &[GroundAction],
) -> Vec<LandmarkStatus> {
    let task = IndexedTask::new(current, actions, graph.nodes.iter().flat_map(|n| n.disjuncts.iter()));
    let init = task.state_atoms(current);
    let fluents = task.state_fluents(current);
    let relaxed = task.relaxed(&init, &fluents, ResourcePolicy::IgnoreNumeric, None);
    let enforced = task.relaxed(&init, &fluents, ResourcePolicy::EnforceNumericStatic, None);

    graph
        .nodes
        .iter()
        .enumerate()
        .map(|(i, lm)| {
            let ids: Vec<usize> = lm.disjuncts.iter().map(|d| task.atom_index(d).unwrap()).collect();
            let level = relaxed.set_level(&ids).map(|l| l as usize);
            let mut blocking = Vec::new();
            let status = if lm.held_in(current) || trace.iter().any(|s| lm.held_in(s)) {
                Status::Achieved
            } else if level.is_none() {
                Status::RequiredUnreachable
            } else if enforced.set_level(&ids).is_some() {
                Status::RequiredReachable
            } else {
                match resource_blocking(&task, &relaxed, &enforced, &ids) {
                    Some(b) => {
                        blocking = b;
                        Status::RequiredResourceBlocked
                    }
                    None => Status::RequiredReachable,
                }
            };
            LandmarkStatus { landmark: i, status, level, blocking }
        })
        .collect()
}

fn resource_blocking(
    task: &IndexedTask<'_>,
    relaxed: &RelaxedLevels,
    enforced: &RelaxedLevels,
    ids: &[usize],
) -> Option<Vec<DisjunctBlocking>> {
    let mut out = Vec::new();
    for &p in ids {
        if relaxed.fact_level(p).is_none() {
            continue;
        }
        let mut best: Option<(Quantity, DisjunctBlocking)> = None;
        for a in relaxed.first_achievers(task, &[p]) {
            let failed: Vec<FailedNumeric> = task.numeric_pre[a]
                .iter()
                .filter_map(|&(f, threshold)| {
                    let available = enforced.bounds[f]?;
                    (available < threshold).then(|| FailedNumeric {
                        fluent: task.fluents[f].clone(),
                        required: threshold,
                        available,
                    })
                })
                .collect();
            if failed.is_empty() {
                return None;
            }
            let total = failed.iter().fold(Quantity::ZERO, |acc, f| acc + f.available.shortfall_to(f.required));
            let candidate =
                DisjunctBlocking { disjunct: task.atoms[p].clone(), achiever: task.actions[a].id.clone(), failed };
            // achievers come in id order, so ties keep the first id
            if best.as_ref().is_none_or(|(t, _)| total < *t) {
                best = Some((total, candidate));
            }
        }
        out.push(best?.1);
    }
    (!out.is_empty()).then_some(out)
}
