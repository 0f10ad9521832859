//! Seeded random planning instances and an exhaustive-search oracle.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use radar::pddl;
use radar::quantity::Quantity;
use radar::task::{Atom, Fluent, GroundAction, NumericOp, State};

pub mod sessions;

pub const MAX_STATES: usize = 100_000;

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub domain_text: String,
    pub problem_text: String,
    pub actions: Vec<GroundAction>,
    pub init: State,
    pub goal: BTreeSet<Atom>,
}

#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    pub numeric: bool,
    pub max_objects: usize,
    pub max_schemas: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { numeric: false, max_objects: 6, max_schemas: 4 }
    }
}

struct Pred {
    name: String,
    arity: usize,
}

fn atom_text(rng: &mut ChaCha8Rng, preds: &[Pred], params: &[String]) -> Option<String> {
    let p = &preds[rng.gen_range(0..preds.len())];
    if p.arity > 0 && params.is_empty() {
        return None;
    }
    let mut s = format!("({}", p.name);
    for _ in 0..p.arity {
        s.push(' ');
        s.push_str(&params[rng.gen_range(0..params.len())]);
    }
    s.push(')');
    Some(s)
}

fn random_atoms(rng: &mut ChaCha8Rng, preds: &[Pred], params: &[String], n: usize) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for _ in 0..n * 3 {
        if out.len() == n {
            break;
        }
        if let Some(a) = atom_text(rng, preds, params) {
            if !out.contains(&a) {
                out.push(a);
            }
        }
    }
    out
}

/// One random typed-STRIPS instance, optionally with a single consumable
/// resource. Returns PDDL text so the front end is exercised too.
pub fn generate(seed: u64, opts: GenOptions) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_preds = rng.gen_range(2..=4);
    let preds: Vec<Pred> = (0..n_preds).map(|i| Pred { name: format!("p{i}"), arity: rng.gen_range(0..=2) }).collect();
    let n_objects = rng.gen_range(2..=opts.max_objects.clamp(2, 4));
    let objects: Vec<String> = (0..n_objects).map(|i| format!("o{i}")).collect();

    let mut dom = String::from("(define (domain rnd)\n  (:requirements :strips :typing :negative-preconditions");
    if opts.numeric {
        dom.push_str(" :fluents");
    }
    dom.push_str(")\n  (:types obj)\n  (:predicates");
    for p in &preds {
        let _ = write!(dom, " ({}", p.name);
        for k in 0..p.arity {
            let _ = write!(dom, " ?a{k} - obj");
        }
        dom.push(')');
    }
    dom.push_str(")\n");
    if opts.numeric {
        dom.push_str("  (:functions (fuel))\n");
    }
    let n_schemas = rng.gen_range(1..=opts.max_schemas);
    for s in 0..n_schemas {
        let n_params = rng.gen_range(0..=2);
        let params: Vec<String> = (0..n_params).map(|k| format!("?x{k}")).collect();
        let n = rng.gen_range(0..=2);
        let pre = random_atoms(&mut rng, &preds, &params, n);
        let neg = if rng.gen_bool(0.25) { random_atoms(&mut rng, &preds, &params, 1) } else { Vec::new() };
        let n = rng.gen_range(1..=2);
        let add = random_atoms(&mut rng, &preds, &params, n);
        let n = rng.gen_range(0..=1);
        let del: Vec<String> =
            random_atoms(&mut rng, &preds, &params, n).into_iter().filter(|d| !add.contains(d)).collect();
        let neg: Vec<String> = neg.into_iter().filter(|n| !pre.contains(n)).collect();
        let cost = if opts.numeric && rng.gen_bool(0.5) { Some(rng.gen_range(1..=2)) } else { None };
        let refill = opts.numeric && cost.is_none() && rng.gen_bool(0.2);

        let _ = write!(dom, "  (:action s{s}\n    :parameters (");
        let _ = write!(dom, "{}", params.iter().map(|p| format!("{p} - obj")).collect::<Vec<_>>().join(" "));
        dom.push_str(")\n    :precondition (and");
        for a in &pre {
            let _ = write!(dom, " {a}");
        }
        for a in &neg {
            let _ = write!(dom, " (not {a})");
        }
        if let Some(c) = cost {
            let _ = write!(dom, " (>= (fuel) {c})");
        }
        dom.push_str(")\n    :effect (and");
        for a in &add {
            let _ = write!(dom, " {a}");
        }
        for a in &del {
            let _ = write!(dom, " (not {a})");
        }
        if let Some(c) = cost {
            let _ = write!(dom, " (decrease (fuel) {c})");
        }
        if refill {
            dom.push_str(" (assign (fuel) 2)");
        }
        dom.push_str("))\n");
    }
    dom.push_str(")\n");

    let mut prob =
        format!("(define (problem r{seed}) (:domain rnd)\n  (:objects {} - obj)\n  (:init", objects.join(" "));
    let n = rng.gen_range(1..=4);
    let init_atoms = random_atoms(&mut rng, &preds, &objects, n);
    for a in &init_atoms {
        let _ = write!(prob, " {a}");
    }
    if opts.numeric {
        let _ = write!(prob, " (= (fuel) {})", rng.gen_range(0..=4));
    }
    prob.push_str(")\n  (:goal (and");
    let n = rng.gen_range(1..=2);
    for a in random_atoms(&mut rng, &preds, &objects, n) {
        let _ = write!(prob, " {a}");
    }
    prob.push_str(")))\n");

    let d = pddl::parse_domain(&dom).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{dom}"));
    let p = pddl::parse_problem(&prob, &d).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{prob}"));
    let actions = pddl::ground(&d, &p);
    Instance { seed, domain_text: dom, problem_text: prob, actions, init: p.initial_state(), goal: p.goal }
}

/// Bitset form of a task, kept separate from the library's execution code.
pub struct Compiled {
    pub atoms: Vec<Atom>,
    ids: HashMap<Atom, usize>,
    fluents: Vec<Fluent>,
    actions: Vec<CompiledAction>,
    pub init: Packed,
    goal: u128,
}

struct CompiledAction {
    pre: u128,
    neg: u128,
    add: u128,
    del: u128,
    npre: Vec<(usize, Quantity)>,
    neff: Vec<(usize, NumericOp, Quantity)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Packed {
    pub bits: u128,
    pub values: Vec<Quantity>,
}

impl Compiled {
    pub fn new(init: &State, goal: &BTreeSet<Atom>, actions: &[GroundAction]) -> Compiled {
        let mut c = Compiled {
            atoms: Vec::new(),
            ids: HashMap::new(),
            fluents: Vec::new(),
            actions: Vec::new(),
            init: Packed { bits: 0, values: Vec::new() },
            goal: 0,
        };
        for a in actions {
            for f in a.numeric_pre.iter().map(|p| &p.fluent).chain(a.numeric_eff.iter().map(|e| &e.fluent)) {
                if !c.fluents.contains(f) {
                    c.fluents.push(f.clone());
                }
            }
        }
        for f in init.fluents.keys() {
            if !c.fluents.contains(f) {
                c.fluents.push(f.clone());
            }
        }
        let fid = |c: &Compiled, f: &Fluent| c.fluents.iter().position(|x| x == f).unwrap();
        c.init.bits = c.mask(&init.atoms);
        c.init.values = c.fluents.iter().map(|f| init.value(f)).collect();
        c.goal = c.mask(goal);
        for a in actions {
            let ca = CompiledAction {
                pre: c.mask(&a.pre),
                neg: c.mask(&a.neg_pre),
                add: c.mask(&a.add),
                del: c.mask(&a.del),
                npre: a.numeric_pre.iter().map(|p| (fid(&c, &p.fluent), p.threshold)).collect(),
                neff: a.numeric_eff.iter().map(|e| (fid(&c, &e.fluent), e.op, e.amount)).collect(),
            };
            c.actions.push(ca);
        }
        c
    }

    pub fn mask<'a>(&mut self, atoms: impl IntoIterator<Item = &'a Atom>) -> u128 {
        let mut m = 0u128;
        for a in atoms {
            let next = self.ids.len();
            let id = *self.ids.entry(a.clone()).or_insert(next);
            if id == next {
                self.atoms.push(a.clone());
            }
            assert!(id < 128, "too many atoms for the oracle");
            m |= 1 << id;
        }
        m
    }

    fn successor(&self, s: &Packed, a: &CompiledAction) -> Option<Packed> {
        if s.bits & a.pre != a.pre || s.bits & a.neg != 0 {
            return None;
        }
        if a.npre.iter().any(|&(f, t)| s.values[f] < t) {
            return None;
        }
        let mut values = s.values.clone();
        for &(f, op, amount) in &a.neff {
            values[f] = match op {
                NumericOp::Increase => values[f] + amount,
                NumericOp::Decrease => values[f] - amount,
                NumericOp::Assign => amount,
            };
            if values[f].is_negative() {
                return None;
            }
        }
        Some(Packed { bits: (s.bits & !a.del) | a.add, values })
    }

    pub fn is_goal(&self, s: &Packed) -> bool {
        s.bits & self.goal == self.goal
    }

    pub fn explore(&self, allowed: impl Fn(&Packed) -> bool) -> Exploration {
        let mut seen: HashSet<Packed> = HashSet::new();
        let mut states = Vec::new();
        let mut depth = Vec::new();
        let mut queue = VecDeque::new();
        if allowed(&self.init) {
            seen.insert(self.init.clone());
            states.push(self.init.clone());
            depth.push(0);
            queue.push_back(0);
        }
        while let Some(i) = queue.pop_front() {
            if states.len() > MAX_STATES {
                return Exploration { states, depth, complete: false };
            }
            for a in &self.actions {
                let Some(next) = self.successor(&states[i], a) else { continue };
                if !allowed(&next) || seen.contains(&next) {
                    continue;
                }
                seen.insert(next.clone());
                states.push(next);
                depth.push(depth[i] + 1);
                queue.push_back(states.len() - 1);
            }
        }
        Exploration { states, depth, complete: true }
    }
}

/// Breadth-first exploration of the real state space.
pub struct Exploration {
    pub states: Vec<Packed>,
    pub depth: Vec<usize>,
    /// False when the state space exceeded [`MAX_STATES`].
    pub complete: bool,
}

impl Instance {
    pub fn compiled(&self) -> Compiled {
        Compiled::new(&self.init, &self.goal, &self.actions)
    }
}

/// Length of the shortest plan, if any.
pub fn shortest_plan(inst: &Instance) -> Option<usize> {
    let c = inst.compiled();
    let ex = c.explore(|_| true);
    ex.states.iter().zip(&ex.depth).filter(|(s, _)| c.is_goal(s)).map(|(_, &d)| d).min()
}

/// True iff every plan from init passes through a state where some member
/// of `landmark` holds: the goal is unreachable through states avoiding it.
pub fn every_plan_passes(inst: &Instance, landmark: &BTreeSet<Atom>) -> bool {
    let mut c = inst.compiled();
    let m = c.mask(landmark);
    let ex = c.explore(|s| s.bits & m == 0);
    assert!(ex.complete);
    !ex.states.iter().any(|s| c.is_goal(s))
}

pub struct Corpus {
    pub solvable: Vec<Instance>,
    pub unsolvable: Vec<Instance>,
}

/// Draws instances from consecutive seeds until `want` solvable ones with
/// plans of at most 8 steps (and state spaces within bounds) are found.
pub fn corpus(first_seed: u64, want: usize, opts: GenOptions) -> Corpus {
    let mut solvable = Vec::new();
    let mut unsolvable = Vec::new();
    let mut seed = first_seed;
    while solvable.len() < want {
        let inst = generate(seed, opts);
        seed += 1;
        let c = inst.compiled();
        let ex = c.explore(|_| true);
        if !ex.complete {
            continue;
        }
        let best = ex.states.iter().zip(&ex.depth).filter(|(s, _)| c.is_goal(s)).map(|(_, &d)| d).min();
        match best {
            Some(d) if (1..=8).contains(&d) => solvable.push(inst),
            None if unsolvable.len() < want => unsolvable.push(inst),
            _ => {}
        }
    }
    Corpus { solvable, unsolvable }
}

/// Minimum number of real steps to reach a state containing each atom.
pub fn atom_distances(inst: &Instance) -> (HashMap<Atom, usize>, bool) {
    let c = inst.compiled();
    let ex = c.explore(|_| true);
    let mut dist: HashMap<Atom, usize> = HashMap::new();
    for (s, &d) in ex.states.iter().zip(&ex.depth) {
        for (i, atom) in c.atoms.iter().enumerate() {
            if s.bits & (1 << i) != 0 {
                dist.entry(atom.clone()).and_modify(|x| *x = (*x).min(d)).or_insert(d);
            }
        }
    }
    (dist, ex.complete)
}
