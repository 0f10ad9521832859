//! Lifted domain and problem models.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::quantity::Quantity;
use crate::task::{Atom, Fluent, NumericOp};

pub const ROOT_TYPE: &str = "object";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Requirement {
    Strips,
    Typing,
    NegativePreconditions,
    Equality,
    Fluents,
    NumericFluents,
}

impl Requirement {
    pub fn keyword(self) -> &'static str {
        match self {
            Requirement::Strips => ":strips",
            Requirement::Typing => ":typing",
            Requirement::NegativePreconditions => ":negative-preconditions",
            Requirement::Equality => ":equality",
            Requirement::Fluents => ":fluents",
            Requirement::NumericFluents => ":numeric-fluents",
        }
    }

    pub fn from_keyword(keyword: &str) -> Option<Self> {
        Some(match keyword {
            ":strips" => Requirement::Strips,
            ":typing" => Requirement::Typing,
            ":negative-preconditions" => Requirement::NegativePreconditions,
            ":equality" => Requirement::Equality,
            ":fluents" => Requirement::Fluents,
            ":numeric-fluents" => Requirement::NumericFluents,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypedName {
    pub name: String,
    pub ty: String,
}

/// Predicate or function signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub name: String,
    pub params: Vec<TypedName>,
}

/// Argument of a lifted atom: a schema variable (`?x`) or an object constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Arg {
    Var(String),
    Const(String),
}

impl Arg {
    pub fn text(&self) -> &str {
        match self {
            Arg::Var(v) => v,
            Arg::Const(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomTemplate {
    pub predicate: String,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluentTemplate {
    pub function: String,
    pub args: Vec<Arg>,
}

/// `(= a b)` or `(not (= a b))` over parameters/constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityConstraint {
    pub left: Arg,
    pub right: Arg,
    pub negated: bool,
}

/// `(>= (f ...) threshold)`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericPreTemplate {
    pub fluent: FluentTemplate,
    pub threshold: Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericEffectTemplate {
    pub fluent: FluentTemplate,
    pub op: NumericOp,
    pub amount: Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypedName>,
    pub positive_pre: Vec<AtomTemplate>,
    pub negative_pre: Vec<AtomTemplate>,
    pub equalities: Vec<EqualityConstraint>,
    pub numeric_pre: Vec<NumericPreTemplate>,
    pub add_effects: Vec<AtomTemplate>,
    pub delete_effects: Vec<AtomTemplate>,
    pub numeric_effects: Vec<NumericEffectTemplate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainModel {
    pub name: String,
    pub requirements: Vec<Requirement>,
    /// Declared types with their parent, in declaration order. The root
    /// type `object` is implicit and never listed.
    pub types: Vec<TypedName>,
    pub constants: Vec<TypedName>,
    pub predicates: Vec<Signature>,
    pub resource_functions: Vec<Signature>,
    pub schemas: Vec<ActionSchema>,
}

impl DomainModel {
    pub fn predicate(&self, name: &str) -> Option<&Signature> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn function(&self, name: &str) -> Option<&Signature> {
        self.resource_functions.iter().find(|p| p.name == name)
    }

    pub fn schema(&self, name: &str) -> Option<&ActionSchema> {
        self.schemas.iter().find(|s| s.name == name)
    }

    pub fn has_type(&self, name: &str) -> bool {
        name == ROOT_TYPE || self.types.iter().any(|t| t.name == name)
    }

    pub fn parent_of(&self, name: &str) -> Option<&str> {
        self.types.iter().find(|t| t.name == name).map(|t| t.ty.as_str())
    }

    /// True if `sub` equals `sup` or descends from it.
    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        let mut current = sub;
        // The hierarchy is validated acyclic, so the walk terminates.
        loop {
            if current == sup {
                return true;
            }
            match self.parent_of(current) {
                Some(parent) => current = parent,
                None => return false,
            }
        }
    }

    /// Predicates that no schema ever adds. Their truth value can only come
    /// from the initial state.
    pub fn static_predicates(&self) -> BTreeSet<String> {
        let added: BTreeSet<&str> =
            self.schemas.iter().flat_map(|s| s.add_effects.iter().map(|a| a.predicate.as_str())).collect();
        self.predicates.iter().filter(|p| !added.contains(p.name.as_str())).map(|p| p.name.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<TypedName>,
    pub init_atoms: BTreeSet<Atom>,
    pub init_fluents: BTreeMap<Fluent, Quantity>,
    pub goal: BTreeSet<Atom>,
}

impl ProblemInstance {
    /// Problem objects followed by the domain's constants, each with its type.
    pub fn universe<'a>(&'a self, dom: &'a DomainModel) -> Vec<&'a TypedName> {
        self.objects.iter().chain(dom.constants.iter()).collect()
    }

    pub fn object_type<'a>(&'a self, dom: &'a DomainModel, name: &str) -> Option<&'a str> {
        self.objects.iter().chain(dom.constants.iter()).find(|o| o.name == name).map(|o| o.ty.as_str())
    }

    pub fn initial_state(&self) -> crate::task::State {
        crate::task::State::new(self.init_atoms.clone(), self.init_fluents.clone())
    }
}
