//! Ground (propositional) planning vocabulary: atoms, fluents, states and
//! ground actions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::quantity::Quantity;

/// A ground atom such as `on-scene(big-engines)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<String>,
}

/// A ground numeric function term such as `available-big(station1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fluent {
    pub function: String,
    pub args: Vec<String>,
}

fn write_call(f: &mut fmt::Formatter<'_>, head: &str, args: &[String]) -> fmt::Result {
    if args.is_empty() {
        write!(f, "{head}")
    } else {
        write!(f, "{head}({})", args.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed ground term `{0}`")]
pub struct TermParseError(pub String);

/// Parses `name`, `name(a,b)` or the PDDL form `(name a b)`.
pub fn parse_call(text: &str) -> Result<(String, Vec<String>), TermParseError> {
    let err = || TermParseError(text.to_string());
    let t = text.trim();
    let valid = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    let (head, args): (&str, Vec<&str>) = if let Some(inner) = t.strip_prefix('(') {
        let inner = inner.strip_suffix(')').ok_or_else(err)?;
        let mut parts = inner.split_whitespace();
        let head = parts.next().ok_or_else(err)?;
        (head, parts.collect())
    } else if let Some(open) = t.find('(') {
        let rest = t[open + 1..].strip_suffix(')').ok_or_else(err)?;
        let args = if rest.trim().is_empty() { Vec::new() } else { rest.split(',').map(str::trim).collect() };
        (&t[..open], args)
    } else {
        (t, Vec::new())
    };
    if !valid(head) || !args.iter().all(|a| valid(a)) {
        return Err(err());
    }
    Ok((head.to_ascii_lowercase(), args.into_iter().map(str::to_ascii_lowercase).collect()))
}

/// Canonical `name(arg1,arg2)` rendering used for atoms, fluents and action ids.
pub fn format_call(head: &str, args: &[String]) -> String {
    if args.is_empty() {
        head.to_string()
    } else {
        format!("{head}({})", args.join(","))
    }
}

macro_rules! ground_term {
    ($ty:ident, $head:ident, $schema_name:literal) => {
        impl $ty {
            pub fn new(head: impl Into<String>, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
                $ty { $head: head.into(), args: args.into_iter().map(Into::into).collect() }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_call(f, &self.$head, &self.args)
            }
        }

        impl FromStr for $ty {
            type Err = TermParseError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let (head, args) = parse_call(s)?;
                Ok($ty { $head: head, args })
            }
        }

        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }

        impl schemars::JsonSchema for $ty {
            fn schema_name() -> String {
                $schema_name.to_string()
            }
            fn json_schema(gen: &mut schemars::gen::SchemaGenerator) -> schemars::schema::Schema {
                String::json_schema(gen)
            }
        }
    };
}

ground_term!(Atom, predicate, "Atom");
ground_term!(Fluent, function, "Fluent");

/// A world state: the true atoms plus the current value of every numeric
/// fluent. Fluents missing from the map read as zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct State {
    pub atoms: BTreeSet<Atom>,
    pub fluents: BTreeMap<Fluent, Quantity>,
}

impl State {
    pub fn new(atoms: BTreeSet<Atom>, fluents: BTreeMap<Fluent, Quantity>) -> Self {
        State { atoms, fluents }
    }

    pub fn holds(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn value(&self, fluent: &Fluent) -> Quantity {
        self.fluents.get(fluent).copied().unwrap_or(Quantity::ZERO)
    }

    pub fn satisfies<'a>(&self, goal: impl IntoIterator<Item = &'a Atom>) -> bool {
        goal.into_iter().all(|a| self.atoms.contains(a))
    }
}

/// `fluent >= threshold`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct NumericCondition {
    pub fluent: Fluent,
    pub threshold: Quantity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum NumericOp {
    Decrease,
    Increase,
    Assign,
}

impl NumericOp {
    pub fn keyword(self) -> &'static str {
        match self {
            NumericOp::Decrease => "decrease",
            NumericOp::Increase => "increase",
            NumericOp::Assign => "assign",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct NumericEffect {
    pub fluent: Fluent,
    pub op: NumericOp,
    pub amount: Quantity,
}

impl NumericEffect {
    pub fn apply_to(&self, current: Quantity) -> Quantity {
        match self.op {
            NumericOp::Decrease => current - self.amount,
            NumericOp::Increase => current + self.amount,
            NumericOp::Assign => self.amount,
        }
    }
}

/// A fully instantiated action schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct GroundAction {
    /// `name(arg1,arg2,...)`
    pub id: String,
    pub name: String,
    pub args: Vec<String>,
    pub pre: BTreeSet<Atom>,
    pub neg_pre: BTreeSet<Atom>,
    pub numeric_pre: Vec<NumericCondition>,
    pub add: BTreeSet<Atom>,
    pub del: BTreeSet<Atom>,
    pub numeric_eff: Vec<NumericEffect>,
}

impl GroundAction {
    /// An action with only propositional content, mostly useful in tests
    /// and generated instances.
    pub fn strips(
        name: &str,
        args: &[&str],
        pre: impl IntoIterator<Item = Atom>,
        add: impl IntoIterator<Item = Atom>,
        del: impl IntoIterator<Item = Atom>,
    ) -> Self {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let add: BTreeSet<Atom> = add.into_iter().collect();
        let del: BTreeSet<Atom> = del.into_iter().filter(|a| !add.contains(a)).collect();
        GroundAction {
            id: format_call(name, &args),
            name: name.to_string(),
            args,
            pre: pre.into_iter().collect(),
            neg_pre: BTreeSet::new(),
            numeric_pre: Vec::new(),
            add,
            del,
            numeric_eff: Vec::new(),
        }
    }

    pub fn adds_any<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> bool {
        atoms.into_iter().any(|a| self.add.contains(a))
    }
}
