//! Schema instantiation with static-precondition pruning.

use std::collections::{BTreeSet, HashMap};

use super::model::*;
use crate::task::{format_call, Atom, Fluent, GroundAction, NumericCondition, NumericEffect};

/// Grounds every schema against the problem's objects, pruning bindings
/// whose static preconditions are false in the problem's initial atoms.
pub fn ground(dom: &DomainModel, prob: &ProblemInstance) -> Vec<GroundAction> {
    ground_against(dom, prob, &prob.init_atoms)
}

/// Like [`ground`], but static preconditions are evaluated against `atoms`
/// instead of the initial state. Sessions use this after fact edits.
pub fn ground_against(dom: &DomainModel, prob: &ProblemInstance, atoms: &BTreeSet<Atom>) -> Vec<GroundAction> {
    let statics = dom.static_predicates();
    let universe = prob.universe(dom);
    let mut out = Vec::new();
    for schema in &dom.schemas {
        let candidates: Vec<Vec<&str>> = schema
            .params
            .iter()
            .map(|p| universe.iter().filter(|o| dom.is_subtype(&o.ty, &p.ty)).map(|o| o.name.as_str()).collect())
            .collect();
        let mut binding: Vec<&str> = Vec::with_capacity(schema.params.len());
        let mut grounder = SchemaGrounder { schema, statics: &statics, atoms, candidates: &candidates, out: &mut out };
        grounder.extend(&mut binding);
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

struct SchemaGrounder<'a, 'o> {
    schema: &'a ActionSchema,
    statics: &'a BTreeSet<String>,
    atoms: &'a BTreeSet<Atom>,
    candidates: &'a [Vec<&'a str>],
    out: &'o mut Vec<GroundAction>,
}

impl<'a> SchemaGrounder<'a, '_> {
    fn extend(&mut self, binding: &mut Vec<&'a str>) {
        if !self.consistent(binding) {
            return;
        }
        let depth = binding.len();
        if depth == self.candidates.len() {
            let action = instantiate(self.schema, binding);
            self.out.push(action);
            return;
        }
        for &obj in &self.candidates[depth] {
            binding.push(obj);
            self.extend(binding);
            binding.pop();
        }
    }

    /// Checks every static atom and equality constraint whose variables are
    /// all bound by the current prefix.
    fn consistent(&self, binding: &[&str]) -> bool {
        let env = Env { params: &self.schema.params, binding };
        for tpl in &self.schema.positive_pre {
            if !self.statics.contains(&tpl.predicate) {
                continue;
            }
            if let Some(atom) = env.atom(tpl) {
                if !self.atoms.contains(&atom) {
                    return false;
                }
            }
        }
        for eq in &self.schema.equalities {
            if let (Some(l), Some(r)) = (env.resolve(&eq.left), env.resolve(&eq.right)) {
                if (l == r) == eq.negated {
                    return false;
                }
            }
        }
        true
    }
}

struct Env<'a, 'b> {
    params: &'a [TypedName],
    binding: &'b [&'b str],
}

impl Env<'_, '_> {
    fn resolve(&self, arg: &Arg) -> Option<String> {
        match arg {
            Arg::Const(c) => Some(c.clone()),
            Arg::Var(v) => {
                let idx = self.params.iter().position(|p| &p.name == v)?;
                self.binding.get(idx).map(|s| s.to_string())
            }
        }
    }

    fn args(&self, args: &[Arg]) -> Option<Vec<String>> {
        args.iter().map(|a| self.resolve(a)).collect()
    }

    fn atom(&self, tpl: &AtomTemplate) -> Option<Atom> {
        Some(Atom { predicate: tpl.predicate.clone(), args: self.args(&tpl.args)? })
    }

    fn fluent(&self, tpl: &FluentTemplate) -> Option<Fluent> {
        Some(Fluent { function: tpl.function.clone(), args: self.args(&tpl.args)? })
    }
}

fn instantiate(schema: &ActionSchema, binding: &[&str]) -> GroundAction {
    let env = Env { params: &schema.params, binding };
    let atoms =
        |tpls: &[AtomTemplate]| -> BTreeSet<Atom> { tpls.iter().map(|t| env.atom(t).expect("fully bound")).collect() };
    let args: Vec<String> = binding.iter().map(|s| s.to_string()).collect();
    let add = atoms(&schema.add_effects);
    // Distinct templates can collapse onto one atom under a binding; the
    // add effect wins, as in standard STRIPS semantics.
    let del = atoms(&schema.delete_effects).into_iter().filter(|a| !add.contains(a)).collect();
    GroundAction {
        id: format_call(&schema.name, &args),
        name: schema.name.clone(),
        args,
        pre: atoms(&schema.positive_pre),
        neg_pre: atoms(&schema.negative_pre),
        numeric_pre: schema
            .numeric_pre
            .iter()
            .map(|n| NumericCondition { fluent: env.fluent(&n.fluent).expect("fully bound"), threshold: n.threshold })
            .collect(),
        add,
        del,
        numeric_eff: schema
            .numeric_effects
            .iter()
            .map(|n| NumericEffect { fluent: env.fluent(&n.fluent).expect("fully bound"), op: n.op, amount: n.amount })
            .collect(),
    }
}

/// Index of ground actions by id.
pub fn by_id(actions: &[GroundAction]) -> HashMap<&str, &GroundAction> {
    actions.iter().map(|a| (a.id.as_str(), a)).collect()
}
