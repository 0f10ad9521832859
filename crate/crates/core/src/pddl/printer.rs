//! Canonical PDDL rendering. Parsing the output yields the same model.

use std::fmt::{self, Write};

use super::model::*;

fn typed(out: &mut String, entries: &[TypedName]) {
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{} - {}", e.name, e.ty);
    }
}

fn args(out: &mut String, args: &[Arg]) {
    for a in args {
        out.push(' ');
        out.push_str(a.text());
    }
}

fn atom(out: &mut String, a: &AtomTemplate) {
    let _ = write!(out, "({}", a.predicate);
    args(out, &a.args);
    out.push(')');
}

fn fluent(out: &mut String, f: &FluentTemplate) {
    let _ = write!(out, "({}", f.function);
    args(out, &f.args);
    out.push(')');
}

fn signature(out: &mut String, s: &Signature) {
    let _ = write!(out, "({}", s.name);
    if !s.params.is_empty() {
        out.push(' ');
        typed(out, &s.params);
    }
    out.push(')');
}

fn schema(out: &mut String, s: &ActionSchema) {
    let _ = writeln!(out, "  (:action {}", s.name);
    out.push_str("    :parameters (");
    typed(out, &s.params);
    out.push_str(")\n    :precondition (and");
    for a in &s.positive_pre {
        out.push(' ');
        atom(out, a);
    }
    for a in &s.negative_pre {
        out.push_str(" (not ");
        atom(out, a);
        out.push(')');
    }
    for e in &s.equalities {
        let eq = format!("(= {} {})", e.left.text(), e.right.text());
        if e.negated {
            let _ = write!(out, " (not {eq})");
        } else {
            let _ = write!(out, " {eq}");
        }
    }
    for n in &s.numeric_pre {
        out.push_str(" (>= ");
        fluent(out, &n.fluent);
        let _ = write!(out, " {})", n.threshold);
    }
    out.push_str(")\n    :effect (and");
    for a in &s.add_effects {
        out.push(' ');
        atom(out, a);
    }
    for a in &s.delete_effects {
        out.push_str(" (not ");
        atom(out, a);
        out.push(')');
    }
    for n in &s.numeric_effects {
        let _ = write!(out, " ({} ", n.op.keyword());
        fluent(out, &n.fluent);
        let _ = write!(out, " {})", n.amount);
    }
    out.push_str("))\n");
}

impl fmt::Display for DomainModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "(define (domain {})", self.name);
        if !self.requirements.is_empty() {
            let reqs: Vec<_> = self.requirements.iter().map(|r| r.keyword()).collect();
            let _ = writeln!(out, "  (:requirements {})", reqs.join(" "));
        }
        if !self.types.is_empty() {
            out.push_str("  (:types ");
            typed(&mut out, &self.types);
            out.push_str(")\n");
        }
        if !self.constants.is_empty() {
            out.push_str("  (:constants ");
            typed(&mut out, &self.constants);
            out.push_str(")\n");
        }
        out.push_str("  (:predicates");
        for p in &self.predicates {
            out.push(' ');
            signature(&mut out, p);
        }
        out.push_str(")\n");
        if !self.resource_functions.is_empty() {
            out.push_str("  (:functions");
            for p in &self.resource_functions {
                out.push(' ');
                signature(&mut out, p);
            }
            out.push_str(")\n");
        }
        for s in &self.schemas {
            schema(&mut out, s);
        }
        out.push(')');
        f.write_str(&out)
    }
}

impl fmt::Display for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "(define (problem {})", self.name);
        let _ = writeln!(out, "  (:domain {})", self.domain_name);
        if !self.objects.is_empty() {
            out.push_str("  (:objects ");
            typed(&mut out, &self.objects);
            out.push_str(")\n");
        }
        out.push_str("  (:init");
        for a in &self.init_atoms {
            let _ = write!(out, " ({}", a.predicate);
            for x in &a.args {
                let _ = write!(out, " {x}");
            }
            out.push(')');
        }
        for (fl, v) in &self.init_fluents {
            let _ = write!(out, " (= ({}", fl.function);
            for x in &fl.args {
                let _ = write!(out, " {x}");
            }
            let _ = write!(out, ") {v})");
        }
        out.push_str(")\n  (:goal (and");
        for a in &self.goal {
            let _ = write!(out, " ({}", a.predicate);
            for x in &a.args {
                let _ = write!(out, " {x}");
            }
            out.push(')');
        }
        out.push_str(")))");
        f.write_str(&out)
    }
}
