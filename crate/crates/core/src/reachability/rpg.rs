use std::collections::{BTreeMap, BTreeSet};

use super::index::IndexedTask;
use super::ResourcePolicy;
use crate::task::{Atom, GroundAction, State};

/// Layered delete-relaxed reachability from a state.
///
/// Negative preconditions are treated as satisfied at every level. Atoms
/// that never appear are unreached (`None`).
#[derive(Debug, Clone)]
pub struct RelaxedPlanningGraph<'a> {
    actions: &'a [GroundAction],
    fact_level: BTreeMap<Atom, Option<usize>>,
    action_level: Vec<Option<usize>>,
    levels: usize,
    policy: ResourcePolicy,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AchieverError {
    #[error("target is unreachable in the relaxed planning graph")]
    TargetUnreachable,
    #[error("target already holds in the evaluated state")]
    TargetInitiallyTrue,
}

pub fn build_rpg<'a>(state: &State, actions: &'a [GroundAction], policy: ResourcePolicy) -> RelaxedPlanningGraph<'a> {
    let task = IndexedTask::new(state, actions, []);
    let levels = task.relaxed(&task.state_atoms(state), &task.state_fluents(state), policy, None);
    let fact_level =
        task.atoms.iter().enumerate().map(|(i, a)| (a.clone(), levels.fact_level(i).map(|l| l as usize))).collect();
    let action_level = levels.action.iter().map(|&l| (l != super::index::UNREACHED).then_some(l as usize)).collect();
    RelaxedPlanningGraph { actions, fact_level, action_level, levels: levels.depth as usize, policy }
}

impl<'a> RelaxedPlanningGraph<'a> {
    pub fn policy(&self) -> ResourcePolicy {
        self.policy
    }

    /// Number of fact layers up to the fixpoint.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn fact_level(&self, atom: &Atom) -> Option<usize> {
        self.fact_level.get(atom).copied().flatten()
    }

    pub fn action_level(&self, id: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.id == id).and_then(|i| self.action_level[i])
    }

    pub fn reachable(&self, atom: &Atom) -> bool {
        self.fact_level(atom).is_some()
    }

    /// Atoms reached at some level, with their level.
    pub fn reached(&self) -> impl Iterator<Item = (&Atom, usize)> {
        self.fact_level.iter().filter_map(|(a, l)| l.map(|l| (a, l)))
    }

    /// Minimum level over `target`, or `None` when no member is reached.
    pub fn set_level<'t>(&self, target: impl IntoIterator<Item = &'t Atom>) -> Option<usize> {
        target.into_iter().filter_map(|a| self.fact_level(a)).min()
    }

    /// Actions that can add a member of `target` at its earliest level.
    pub fn first_achievers<'t>(
        &self,
        target: impl IntoIterator<Item = &'t Atom>,
    ) -> Result<Vec<&'a GroundAction>, AchieverError> {
        let target: BTreeSet<&Atom> = target.into_iter().collect();
        let level = self.set_level(target.iter().copied()).ok_or(AchieverError::TargetUnreachable)?;
        if level == 0 {
            return Err(AchieverError::TargetInitiallyTrue);
        }
        Ok(self
            .actions
            .iter()
            .zip(&self.action_level)
            .filter(|(a, l)| l.is_some_and(|l| l < level) && target.iter().any(|t| a.add.contains(*t)))
            .map(|(a, _)| a)
            .collect())
    }
}
