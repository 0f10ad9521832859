//! Integer-indexed view of a ground task, shared by relaxed reachability,
//! landmark extraction and search.

use std::collections::HashMap;

use super::ResourcePolicy;
use crate::quantity::Quantity;
use crate::task::{Atom, Fluent, GroundAction, NumericOp, State};

pub(crate) const UNREACHED: u32 = u32::MAX;

pub(crate) struct IndexedTask<'a> {
    pub actions: &'a [GroundAction],
    pub atoms: Vec<Atom>,
    pub atom_ids: HashMap<Atom, usize>,
    pub fluents: Vec<Fluent>,
    pub fluent_ids: HashMap<Fluent, usize>,
    pub pre: Vec<Vec<usize>>,
    pub add: Vec<Vec<usize>>,
    pub numeric_pre: Vec<Vec<(usize, Quantity)>>,
    pub numeric_eff: Vec<Vec<(usize, NumericOp, Quantity)>>,
    /// action indices adding each atom
    pub adders: Vec<Vec<usize>>,
}

impl<'a> IndexedTask<'a> {
    pub fn new<'b>(state: &State, actions: &'a [GroundAction], extra: impl IntoIterator<Item = &'b Atom>) -> Self {
        let mut task = IndexedTask {
            actions,
            atoms: Vec::new(),
            atom_ids: HashMap::new(),
            fluents: Vec::new(),
            fluent_ids: HashMap::new(),
            pre: Vec::with_capacity(actions.len()),
            add: Vec::with_capacity(actions.len()),
            numeric_pre: Vec::with_capacity(actions.len()),
            numeric_eff: Vec::with_capacity(actions.len()),
            adders: Vec::new(),
        };
        for atom in &state.atoms {
            task.atom_id(atom);
        }
        for atom in extra {
            task.atom_id(atom);
        }
        for fluent in state.fluents.keys() {
            task.fluent_id(fluent);
        }
        for a in actions {
            let pre = a.pre.iter().map(|x| task.atom_id(x)).collect();
            for x in a.neg_pre.iter().chain(&a.del) {
                task.atom_id(x);
            }
            let add = a.add.iter().map(|x| task.atom_id(x)).collect();
            let npre = a.numeric_pre.iter().map(|c| (task.fluent_id(&c.fluent), c.threshold)).collect();
            let neff = a.numeric_eff.iter().map(|e| (task.fluent_id(&e.fluent), e.op, e.amount)).collect();
            task.pre.push(pre);
            task.add.push(add);
            task.numeric_pre.push(npre);
            task.numeric_eff.push(neff);
        }
        task.adders = vec![Vec::new(); task.atoms.len()];
        for (i, adds) in task.add.iter().enumerate() {
            for &p in adds {
                task.adders[p].push(i);
            }
        }
        task
    }

    fn atom_id(&mut self, atom: &Atom) -> usize {
        if let Some(&id) = self.atom_ids.get(atom) {
            return id;
        }
        let id = self.atoms.len();
        self.atoms.push(atom.clone());
        self.atom_ids.insert(atom.clone(), id);
        id
    }

    fn fluent_id(&mut self, fluent: &Fluent) -> usize {
        if let Some(&id) = self.fluent_ids.get(fluent) {
            return id;
        }
        let id = self.fluents.len();
        self.fluents.push(fluent.clone());
        self.fluent_ids.insert(fluent.clone(), id);
        id
    }

    pub fn atom_index(&self, atom: &Atom) -> Option<usize> {
        self.atom_ids.get(atom).copied()
    }

    pub fn state_atoms(&self, state: &State) -> Vec<bool> {
        let mut out = vec![false; self.atoms.len()];
        for a in &state.atoms {
            if let Some(i) = self.atom_index(a) {
                out[i] = true;
            }
        }
        out
    }

    pub fn state_fluents(&self, state: &State) -> Vec<Quantity> {
        self.fluents.iter().map(|f| state.value(f)).collect()
    }

    /// Delete-relaxed reachability fixpoint from `init`. Actions flagged in
    /// `excluded` never participate.
    pub fn relaxed(
        &self,
        init: &[bool],
        fluents: &[Quantity],
        policy: ResourcePolicy,
        excluded: Option<&[bool]>,
    ) -> RelaxedLevels {
        let n_actions = self.actions.len();
        let mut fact = vec![UNREACHED; self.atoms.len()];
        for (i, &t) in init.iter().enumerate() {
            if t {
                fact[i] = 0;
            }
        }
        let mut action = vec![UNREACHED; n_actions];
        // Upper bounds on fluent values; None = unbounded.
        let mut bound: Vec<Option<Quantity>> = fluents.iter().map(|&q| Some(q)).collect();
        let mut level: u32 = 0;
        loop {
            let mut fired = Vec::new();
            for a in 0..n_actions {
                if action[a] != UNREACHED || excluded.is_some_and(|ex| ex[a]) {
                    continue;
                }
                if !self.pre[a].iter().all(|&p| fact[p] <= level) {
                    continue;
                }
                if policy == ResourcePolicy::EnforceNumericStatic
                    && !self.numeric_pre[a].iter().all(|&(f, t)| bound[f].is_none_or(|b| b >= t))
                {
                    continue;
                }
                fired.push(a);
            }
            if fired.is_empty() {
                break;
            }
            for &a in &fired {
                action[a] = level;
                for &p in &self.add[a] {
                    if fact[p] == UNREACHED {
                        fact[p] = level + 1;
                    }
                }
                if policy == ResourcePolicy::EnforceNumericStatic {
                    for &(f, op, amount) in &self.numeric_eff[a] {
                        match op {
                            NumericOp::Decrease => {}
                            NumericOp::Increase => {
                                if !amount.is_zero() {
                                    bound[f] = None;
                                }
                            }
                            NumericOp::Assign => {
                                if let Some(b) = bound[f] {
                                    if amount > b {
                                        bound[f] = Some(amount);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            level += 1;
        }
        let depth = fact.iter().filter(|&&l| l != UNREACHED).max().map_or(0, |&m| m + 1);
        RelaxedLevels { fact, action, depth, bounds: bound }
    }
}

pub(crate) struct RelaxedLevels {
    pub fact: Vec<u32>,
    pub action: Vec<u32>,
    pub depth: u32,
    /// Fluent upper bounds at the fixpoint (`None` = unbounded). Only
    /// raised under [`ResourcePolicy::EnforceNumericStatic`].
    pub bounds: Vec<Option<Quantity>>,
}

impl RelaxedLevels {
    pub fn fact_level(&self, p: usize) -> Option<u32> {
        let l = self.fact[p];
        (l != UNREACHED).then_some(l)
    }

    /// Minimum level over a set, `None` if every member is unreached.
    pub fn set_level(&self, set: &[usize]) -> Option<u32> {
        set.iter().filter_map(|&p| self.fact_level(p)).min()
    }

    /// Actions with level below the set's level that add some member.
    pub fn first_achievers(&self, task: &IndexedTask<'_>, set: &[usize]) -> Vec<usize> {
        let Some(target) = self.set_level(set) else {
            return Vec::new();
        };
        let mut out: Vec<usize> =
            set.iter().flat_map(|&p| task.adders[p].iter().copied()).filter(|&a| self.action[a] < target).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
