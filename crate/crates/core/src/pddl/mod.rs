//! PDDL front end: a typed-STRIPS subset with a restricted numeric-resource
//! extension, plus grounding into propositional actions.
//!
//! Accepted requirements are `:strips`, `:typing`, `:negative-preconditions`,
//! `:equality`, and `:fluents`/`:numeric-fluents`. Numeric functions may only
//! appear in `(>= (f ...) c)` preconditions and in `increase`, `decrease`
//! or `assign` effects whose amount is a nonnegative constant. Goals are
//! conjunctions of positive atoms. [`SUPPORTED_SUBSET`] carries the same
//! description in machine-readable form.
//!
//! ```
//! let dom = radar::pddl::parse_domain("(define (domain d) (:predicates (p)))").unwrap();
//! assert_eq!(dom.name, "d");
//! assert_eq!(dom.predicates.len(), 1);
//! assert!(dom.schemas.is_empty());
//! ```

mod ground;
mod model;
mod parser;
mod printer;
pub mod sexpr;

use std::fmt;

use serde::Serialize;

pub use ground::{by_id, ground, ground_against};
pub use model::*;
pub use parser::{check_ground_atom, check_ground_fluent, parse_domain, parse_problem};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PddlError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Position, message: String },
    #[error("{pos}: unsupported feature {feature}")]
    UnsupportedFeature { pos: Position, feature: String },
    #[error("{pos}: {message}")]
    Semantic { pos: Position, message: String },
}

impl PddlError {
    pub(crate) fn syntax(pos: Position, message: impl Into<String>) -> Self {
        PddlError::Syntax { pos, message: message.into() }
    }

    pub(crate) fn unsupported(pos: Position, feature: impl Into<String>) -> Self {
        PddlError::UnsupportedFeature { pos, feature: feature.into() }
    }

    pub(crate) fn semantic(pos: Position, message: impl Into<String>) -> Self {
        PddlError::Semantic { pos, message: message.into() }
    }

    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            PddlError::Syntax { .. } => "SyntaxError",
            PddlError::UnsupportedFeature { .. } => "UnsupportedFeature",
            PddlError::Semantic { .. } => "SemanticError",
        }
    }

    pub fn position(&self) -> Position {
        match self {
            PddlError::Syntax { pos, .. }
            | PddlError::UnsupportedFeature { pos, .. }
            | PddlError::Semantic { pos, .. } => *pos,
        }
    }
}

/// Machine-readable description of the accepted PDDL fragment.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubsetDescription {
    pub requirements: &'static [&'static str],
    pub numeric_preconditions: &'static [&'static str],
    pub numeric_effects: &'static [&'static str],
    pub goals: &'static str,
    pub rejected: &'static [&'static str],
}

pub const SUPPORTED_SUBSET: SubsetDescription = SubsetDescription {
    requirements: &[":strips", ":typing", ":negative-preconditions", ":equality", ":fluents", ":numeric-fluents"],
    numeric_preconditions: &["(>= (f args...) c) with c a nonnegative rational constant"],
    numeric_effects: &["(increase (f args...) c)", "(decrease (f args...) c)", "(assign (f args...) c)"],
    goals: "conjunction of positive ground atoms",
    rejected: &[
        ":adl",
        ":disjunctive-preconditions",
        ":existential-preconditions",
        ":universal-preconditions",
        ":quantified-preconditions",
        ":conditional-effects",
        ":derived-predicates",
        ":durative-actions",
        ":duration-inequalities",
        ":continuous-effects",
        ":timed-initial-literals",
        ":preferences",
        ":constraints",
        ":action-costs",
        ":object-fluents",
        "either types",
        "numeric expressions",
        "numeric comparators other than >=",
        "negative goals",
        ":metric",
    ],
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::Atom;

    const TYPED: &str = "
        (define (domain logistics-lite)
          (:requirements :strips :typing :equality :negative-preconditions)
          (:types truck place - object depot - place)
          (:constants hq - depot)
          (:predicates (at ?t - truck ?p - place) (road ?a - place ?b - place) (busy ?t - truck))
          (:action drive
            :parameters (?t - truck ?from - place ?to - place)
            :precondition (and (at ?t ?from) (road ?from ?to) (not (= ?from ?to)) (not (busy ?t)))
            :effect (and (at ?t ?to) (not (at ?t ?from)))))";

    const TYPED_PROBLEM: &str = "
        (define (problem p1) (:domain logistics-lite)
          (:objects t1 t2 - truck a b - place)
          (:init (at t1 hq) (road hq a) (road a b) (road a a))
          (:goal (and (at t1 b))))";

    #[test]
    fn minimal_domain() {
        let dom = parse_domain("(define (domain d) (:predicates (p)))").unwrap();
        assert_eq!(dom.name, "d");
        assert_eq!(dom.predicates.len(), 1);
        assert_eq!(dom.schemas.len(), 0);
    }

    #[test]
    fn durative_requirement_is_named() {
        let err = parse_domain("(define (domain d) (:requirements :strips :durative-actions) (:predicates (p)))")
            .unwrap_err();
        match err {
            PddlError::UnsupportedFeature { feature, pos } => {
                assert_eq!(feature, ":durative-actions");
                assert_eq!(pos, Position { line: 1, column: 43 });
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unsupported_constructs() {
        let cases = [
            ("(define (domain d) (:predicates (p)) (:action a :parameters () :precondition (or (p) (p)) :effect (p)))", ":disjunctive-preconditions"),
            ("(define (domain d) (:predicates (p)) (:action a :parameters () :effect (when (p) (p))))", ":conditional-effects"),
            ("(define (domain d) (:predicates (p)) (:functions (f)) (:action a :parameters () :precondition (> (f) 1) :effect (p)))", "numeric comparator >"),
            ("(define (domain d) (:predicates (p)) (:functions (f)) (:action a :parameters () :effect (increase (f) (f))))", "numeric expressions"),
            ("(define (domain d) (:types a b) (:predicates (p ?x - (either a b))))", "either types"),
            ("(define (domain d) (:predicates (p)) (:durative-action a))", ":durative-actions"),
        ];
        for (text, feature) in cases {
            match parse_domain(text) {
                Err(PddlError::UnsupportedFeature { feature: f, .. }) => assert_eq!(f, feature, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn semantic_errors() {
        let cases = [
            "(define (domain d) (:types a - missing) (:predicates (p)))",
            "(define (domain d) (:types a - b b - a) (:predicates (p)))",
            "(define (domain d) (:predicates (p ?x - nope)))",
            "(define (domain d) (:predicates (p) (p)))",
            "(define (domain d) (:predicates (p)) (:action a :parameters () :precondition (q) :effect (p)))",
            "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (p) :effect (p ?x)))",
            "(define (domain d) (:predicates (p ?x)) (:action a :parameters () :effect (p ?y)))",
            "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :effect (and (p ?x) (not (p ?x)))))",
            "(define (domain d) (:predicates (p)) (:action a :parameters () :effect (p)) (:action a :parameters () :effect (p)))",
            "(define (domain d) (:types a b) (:predicates (p ?x - a)) (:action act :parameters (?y - b) :effect (p ?y)))",
        ];
        for text in cases {
            match parse_domain(text) {
                Err(PddlError::Semantic { .. }) => {}
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_domain("(define (domain d)\n  (:predicates (p))").unwrap_err();
        assert_eq!(err.code(), "SyntaxError");
        assert_eq!(err.position(), Position { line: 1, column: 1 });
        let err = parse_domain("(define (domain d)\n  (:predicates (p)) (:bogus))").unwrap_err();
        assert_eq!(err.position(), Position { line: 2, column: 21 });
    }

    #[test]
    fn typed_domain_and_problem() {
        let dom = parse_domain(TYPED).unwrap();
        assert!(dom.is_subtype("depot", "place"));
        assert!(dom.is_subtype("depot", "object"));
        assert!(!dom.is_subtype("place", "depot"));
        let prob = parse_problem(TYPED_PROBLEM, &dom).unwrap();
        assert_eq!(prob.goal.len(), 1);
        assert!(prob.init_atoms.contains(&"at(t1,hq)".parse::<Atom>().unwrap()));

        let actions = ground(&dom, &prob);
        let ids: Vec<&str> = actions.iter().map(|a| a.id.as_str()).collect();
        // road is static: only hq->a and a->b survive; a->a is removed by the
        // inequality constraint.
        assert_eq!(ids, vec!["drive(t1,a,b)", "drive(t1,hq,a)", "drive(t2,a,b)", "drive(t2,hq,a)"]);
    }

    #[test]
    fn problem_errors() {
        let dom = parse_domain(TYPED).unwrap();
        let bad_goal =
            "(define (problem p) (:domain logistics-lite) (:objects t1 - truck) (:init) (:goal (at t1 nowhere)))";
        assert_eq!(parse_problem(bad_goal, &dom).unwrap_err().code(), "SemanticError");
        let bad_type = "(define (problem p) (:domain logistics-lite) (:objects t1 - boat) (:init) (:goal (and)))";
        assert_eq!(parse_problem(bad_type, &dom).unwrap_err().code(), "SemanticError");
        let bad_pred =
            "(define (problem p) (:domain logistics-lite) (:objects t1 - truck) (:init) (:goal (flying t1)))";
        assert_eq!(parse_problem(bad_pred, &dom).unwrap_err().code(), "SemanticError");
        let wrong_domain = "(define (problem p) (:domain other) (:init) (:goal (and)))";
        assert_eq!(parse_problem(wrong_domain, &dom).unwrap_err().code(), "SemanticError");
        let neg_goal =
            "(define (problem p) (:domain logistics-lite) (:objects t1 - truck) (:init) (:goal (not (busy t1))))";
        assert_eq!(parse_problem(neg_goal, &dom).unwrap_err().code(), "UnsupportedFeature");
        let metric =
            "(define (problem p) (:domain logistics-lite) (:init) (:goal (and)) (:metric minimize (total-time)))";
        assert_eq!(parse_problem(metric, &dom).unwrap_err().code(), "UnsupportedFeature");
    }

    #[test]
    fn empty_init_with_unachievable_goal_is_valid() {
        let dom = parse_domain(
            "(define (domain d) (:predicates (p) (q)) (:action a :parameters () :precondition (p) :effect (p)))",
        )
        .unwrap();
        let prob = parse_problem("(define (problem x) (:domain d) (:init) (:goal (q)))", &dom).unwrap();
        assert!(prob.init_atoms.is_empty());
        assert_eq!(prob.goal.len(), 1);
    }

    #[test]
    fn one_parameter_three_objects() {
        let dom = parse_domain(
            "(define (domain d) (:types t) (:predicates (done ?x - t)) (:action finish :parameters (?x - t) :effect (done ?x)))",
        )
        .unwrap();
        let prob =
            parse_problem("(define (problem x) (:domain d) (:objects a b c - t) (:init) (:goal (done a)))", &dom)
                .unwrap();
        assert_eq!(ground(&dom, &prob).len(), 3);
    }

    #[test]
    fn static_precondition_false_everywhere_prunes_schema() {
        let dom = parse_domain(
            "(define (domain d) (:types t) (:predicates (ok ?x - t) (done ?x - t))
               (:action finish :parameters (?x - t) :precondition (ok ?x) :effect (done ?x)))",
        )
        .unwrap();
        let prob = parse_problem("(define (problem x) (:domain d) (:objects a b - t) (:init) (:goal (done a)))", &dom)
            .unwrap();
        assert!(ground(&dom, &prob).is_empty());
    }

    #[test]
    fn printer_round_trip_typed() {
        let dom = parse_domain(TYPED).unwrap();
        let again = parse_domain(&dom.to_string()).unwrap();
        assert_eq!(dom, again);
        let prob = parse_problem(TYPED_PROBLEM, &dom).unwrap();
        assert_eq!(parse_problem(&prob.to_string(), &dom).unwrap(), prob);
    }
}
