use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::model::*;
use super::sexpr::{self, SExpr};
use super::{PddlError, Position};
use crate::quantity::Quantity;
use crate::task::{Atom, Fluent, NumericOp};

pub fn parse_domain(text: &str) -> Result<DomainModel, PddlError> {
    let root = sexpr::read(text)?;
    let items = expect_define(&root, "domain")?;
    let name = header_name(&items[1], "domain")?;

    let mut dom = DomainModel {
        name,
        requirements: Vec::new(),
        types: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        resource_functions: Vec::new(),
        schemas: Vec::new(),
    };
    let mut seen_sections = HashSet::new();
    let mut action_nodes = Vec::new();

    for section in &items[2..] {
        let key = section_key(section)?;
        let body = &section.as_list().unwrap()[1..];
        if key != ":action" && !seen_sections.insert(key.to_string()) {
            return Err(PddlError::syntax(section.pos(), format!("duplicate {key} section")));
        }
        match key {
            ":requirements" => dom.requirements = parse_requirements(body)?,
            ":types" => {
                for entry in typed_list(body, false)? {
                    if entry.name.text == ROOT_TYPE {
                        continue;
                    }
                    dom.types.push(TypedName { name: entry.name.text, ty: entry.ty });
                }
            }
            ":constants" => {
                dom.constants =
                    typed_list(body, false)?.into_iter().map(|e| TypedName { name: e.name.text, ty: e.ty }).collect()
            }
            ":predicates" => {
                for node in body {
                    dom.predicates.push(signature(node)?);
                }
            }
            ":functions" => dom.resource_functions = function_signatures(body)?,
            ":action" => action_nodes.push(section),
            ":durative-action" => return Err(PddlError::unsupported(section.pos(), ":durative-actions")),
            ":derived" => return Err(PddlError::unsupported(section.pos(), ":derived-predicates")),
            ":constraints" => return Err(PddlError::unsupported(section.pos(), ":constraints")),
            other => return Err(PddlError::syntax(section.pos(), format!("unknown domain section {other}"))),
        }
    }

    validate_types(&dom, &items[2..])?;
    validate_signatures(&dom, &root)?;

    for node in action_nodes {
        let schema = parse_schema(node, &dom)?;
        if dom.schema(&schema.name).is_some() {
            return Err(PddlError::semantic(node.pos(), format!("duplicate action `{}`", schema.name)));
        }
        dom.schemas.push(schema);
    }
    Ok(dom)
}

pub fn parse_problem(text: &str, dom: &DomainModel) -> Result<ProblemInstance, PddlError> {
    let root = sexpr::read(text)?;
    let items = expect_define(&root, "problem")?;
    let name = header_name(&items[1], "problem")?;

    let mut domain_name = None;
    let mut objects: Vec<TypedName> = Vec::new();
    let mut init_nodes: &[SExpr] = &[];
    let mut goal_node = None;
    let mut seen_sections = HashSet::new();

    for section in &items[2..] {
        let key = section_key(section)?;
        let body = &section.as_list().unwrap()[1..];
        if !seen_sections.insert(key.to_string()) {
            return Err(PddlError::syntax(section.pos(), format!("duplicate {key} section")));
        }
        match key {
            ":domain" => {
                let [d] = body else {
                    return Err(PddlError::syntax(section.pos(), "(:domain <name>) expects one name"));
                };
                let d = symbol(d)?;
                if d.text != dom.name {
                    return Err(PddlError::semantic(
                        d.pos,
                        format!("problem is for domain `{}` but the domain is `{}`", d.text, dom.name),
                    ));
                }
                domain_name = Some(d.text);
            }
            ":requirements" => {
                parse_requirements(body)?;
            }
            ":objects" => {
                for entry in typed_list(body, false)? {
                    if !dom.has_type(&entry.ty) {
                        return Err(PddlError::semantic(
                            entry.name.pos,
                            format!("object `{}` has unknown type `{}`", entry.name.text, entry.ty),
                        ));
                    }
                    if objects.iter().any(|o| o.name == entry.name.text)
                        || dom.constants.iter().any(|c| c.name == entry.name.text)
                    {
                        return Err(PddlError::semantic(
                            entry.name.pos,
                            format!("object `{}` declared twice", entry.name.text),
                        ));
                    }
                    objects.push(TypedName { name: entry.name.text, ty: entry.ty });
                }
            }
            ":init" => init_nodes = body,
            ":goal" => {
                let [g] = body else {
                    return Err(PddlError::syntax(section.pos(), "(:goal ...) expects one condition"));
                };
                goal_node = Some(g);
            }
            ":metric" => return Err(PddlError::unsupported(section.pos(), ":metric")),
            ":constraints" => return Err(PddlError::unsupported(section.pos(), ":constraints")),
            other => return Err(PddlError::syntax(section.pos(), format!("unknown problem section {other}"))),
        }
    }

    let domain_name =
        domain_name.ok_or_else(|| PddlError::syntax(root.pos(), "problem is missing its (:domain ...) section"))?;
    let goal_node =
        goal_node.ok_or_else(|| PddlError::syntax(root.pos(), "problem is missing its (:goal ...) section"))?;

    let mut prob = ProblemInstance {
        name,
        domain_name,
        objects,
        init_atoms: BTreeSet::new(),
        init_fluents: BTreeMap::new(),
        goal: BTreeSet::new(),
    };

    for node in init_nodes {
        match node.head() {
            Some("=") => {
                let (fluent, value) = init_assignment(node, dom, &prob)?;
                if prob.init_fluents.insert(fluent.clone(), value).is_some() {
                    return Err(PddlError::semantic(node.pos(), format!("fluent `{fluent}` initialised twice")));
                }
            }
            Some("not") => return Err(PddlError::semantic(node.pos(), "negative literals are not allowed in :init")),
            Some("at") if node.as_list().map(|l| l.len()) == Some(3) && dom.predicate("at").is_none() => {
                return Err(PddlError::unsupported(node.pos(), ":timed-initial-literals"))
            }
            _ => {
                let atom = ground_atom(node, dom, &prob)?;
                prob.init_atoms.insert(atom);
            }
        }
    }

    for node in goal_conjuncts(goal_node)? {
        let atom = ground_atom(node, dom, &prob)?;
        prob.goal.insert(atom);
    }
    Ok(prob)
}

/// Parses a ground atom in PDDL or call syntax and checks it against the
/// domain and the problem's objects.
pub fn check_ground_atom(atom: &Atom, dom: &DomainModel, prob: &ProblemInstance) -> Result<(), String> {
    let sig = dom.predicate(&atom.predicate).ok_or_else(|| format!("undeclared predicate `{}`", atom.predicate))?;
    check_ground_args(&sig.params, &atom.args, dom, prob).map_err(|m| format!("{m} in atom `{atom}`"))
}

pub fn check_ground_fluent(fluent: &Fluent, dom: &DomainModel, prob: &ProblemInstance) -> Result<(), String> {
    let sig =
        dom.function(&fluent.function).ok_or_else(|| format!("undeclared resource function `{}`", fluent.function))?;
    check_ground_args(&sig.params, &fluent.args, dom, prob).map_err(|m| format!("{m} in fluent `{fluent}`"))
}

fn check_ground_args(
    params: &[TypedName],
    args: &[String],
    dom: &DomainModel,
    prob: &ProblemInstance,
) -> Result<(), String> {
    if params.len() != args.len() {
        return Err(format!("arity mismatch (expected {}, got {})", params.len(), args.len()));
    }
    for (param, arg) in params.iter().zip(args) {
        let ty = prob.object_type(dom, arg).ok_or_else(|| format!("undeclared object `{arg}`"))?;
        if !dom.is_subtype(ty, &param.ty) {
            return Err(format!("object `{arg}` of type `{ty}` where `{}` is expected", param.ty));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// structure helpers

#[derive(Debug, Clone)]
struct Symbol {
    text: String,
    pos: Position,
}

struct TypedEntry {
    name: Symbol,
    ty: String,
}

fn symbol(node: &SExpr) -> Result<Symbol, PddlError> {
    match node {
        SExpr::Atom { text, pos } => Ok(Symbol { text: text.clone(), pos: *pos }),
        SExpr::List { pos, .. } => Err(PddlError::syntax(*pos, "expected a name, found a list")),
    }
}

fn expect_define<'a>(root: &'a SExpr, kind: &str) -> Result<&'a [SExpr], PddlError> {
    let items = root.as_list().ok_or_else(|| PddlError::syntax(root.pos(), "expected (define ...)"))?;
    if root.head() != Some("define") {
        return Err(PddlError::syntax(root.pos(), "expected (define ...)"));
    }
    if items.len() < 2 {
        return Err(PddlError::syntax(root.pos(), format!("expected (define ({kind} <name>) ...)")));
    }
    Ok(items)
}

fn header_name(node: &SExpr, kind: &str) -> Result<String, PddlError> {
    match node.as_list() {
        Some([head, name]) if head.as_atom() == Some(kind) => Ok(symbol(name)?.text),
        _ => Err(PddlError::syntax(node.pos(), format!("expected ({kind} <name>)"))),
    }
}

fn section_key(section: &SExpr) -> Result<&str, PddlError> {
    match section.head() {
        Some(key) if key.starts_with(':') => Ok(key),
        _ => Err(PddlError::syntax(section.pos(), "expected a (:section ...) list")),
    }
}

fn parse_requirements(body: &[SExpr]) -> Result<Vec<Requirement>, PddlError> {
    let mut out = Vec::new();
    for node in body {
        let sym = symbol(node)?;
        if !sym.text.starts_with(':') {
            return Err(PddlError::syntax(sym.pos, format!("requirement `{}` must start with ':'", sym.text)));
        }
        match Requirement::from_keyword(&sym.text) {
            Some(r) => {
                if !out.contains(&r) {
                    out.push(r)
                }
            }
            None => return Err(PddlError::unsupported(sym.pos, sym.text)),
        }
    }
    Ok(out)
}

/// `a b - t c` → `[(a, t), (b, t), (c, object)]`.
fn typed_list(body: &[SExpr], variables: bool) -> Result<Vec<TypedEntry>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<Symbol> = Vec::new();
    let mut i = 0;
    while i < body.len() {
        let node = &body[i];
        if node.as_atom() == Some("-") {
            let ty_node =
                body.get(i + 1).ok_or_else(|| PddlError::syntax(node.pos(), "`-` must be followed by a type"))?;
            if ty_node.head() == Some("either") {
                return Err(PddlError::unsupported(ty_node.pos(), "either types"));
            }
            let ty = symbol(ty_node)?;
            if pending.is_empty() {
                return Err(PddlError::syntax(node.pos(), "type annotation without names"));
            }
            for name in pending.drain(..) {
                out.push(TypedEntry { name, ty: ty.text.clone() });
            }
            i += 2;
            continue;
        }
        let sym = symbol(node)?;
        if variables != sym.text.starts_with('?') {
            let what = if variables { "a ?variable" } else { "a name" };
            return Err(PddlError::syntax(sym.pos, format!("expected {what}, found `{}`", sym.text)));
        }
        pending.push(sym);
        i += 1;
    }
    for name in pending {
        out.push(TypedEntry { name, ty: ROOT_TYPE.to_string() });
    }
    Ok(out)
}

fn signature(node: &SExpr) -> Result<Signature, PddlError> {
    let items = node
        .as_list()
        .filter(|l| !l.is_empty())
        .ok_or_else(|| PddlError::syntax(node.pos(), "expected (name ?param - type ...)"))?;
    let name = symbol(&items[0])?;
    let params =
        typed_list(&items[1..], true)?.into_iter().map(|e| TypedName { name: e.name.text, ty: e.ty }).collect();
    Ok(Signature { name: name.text, params })
}

fn function_signatures(body: &[SExpr]) -> Result<Vec<Signature>, PddlError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < body.len() {
        let node = &body[i];
        if node.as_atom() == Some("-") {
            let ty = body.get(i + 1).ok_or_else(|| PddlError::syntax(node.pos(), "`-` must be followed by a type"))?;
            if ty.as_atom() != Some("number") {
                return Err(PddlError::unsupported(ty.pos(), ":object-fluents"));
            }
            i += 2;
            continue;
        }
        out.push(signature(node)?);
        i += 1;
    }
    Ok(out)
}

fn validate_types(dom: &DomainModel, sections: &[SExpr]) -> Result<(), PddlError> {
    let pos = sections.iter().find(|s| s.head() == Some(":types")).map(SExpr::pos).unwrap_or_default();
    let mut seen = HashSet::new();
    for t in &dom.types {
        if !seen.insert(t.name.as_str()) {
            return Err(PddlError::semantic(pos, format!("type `{}` declared twice", t.name)));
        }
    }
    for t in &dom.types {
        if !dom.has_type(&t.ty) {
            return Err(PddlError::semantic(pos, format!("type `{}` has undeclared parent `{}`", t.name, t.ty)));
        }
    }
    for t in &dom.types {
        let mut current = t.name.as_str();
        let mut steps = 0;
        while let Some(parent) = dom.parent_of(current) {
            steps += 1;
            if steps > dom.types.len() {
                return Err(PddlError::semantic(pos, format!("type hierarchy cycle through `{}`", t.name)));
            }
            current = parent;
        }
    }
    let mut const_names = HashSet::new();
    for c in &dom.constants {
        if !dom.has_type(&c.ty) {
            return Err(PddlError::semantic(pos, format!("constant `{}` has undeclared type `{}`", c.name, c.ty)));
        }
        if !const_names.insert(c.name.as_str()) {
            return Err(PddlError::semantic(pos, format!("constant `{}` declared twice", c.name)));
        }
    }
    Ok(())
}

fn validate_signatures(dom: &DomainModel, root: &SExpr) -> Result<(), PddlError> {
    let pos = root.pos();
    let mut names = HashSet::new();
    for sig in dom.predicates.iter().chain(&dom.resource_functions) {
        if !names.insert(sig.name.as_str()) {
            return Err(PddlError::semantic(pos, format!("predicate or function `{}` declared twice", sig.name)));
        }
        for p in &sig.params {
            if !dom.has_type(&p.ty) {
                return Err(PddlError::semantic(pos, format!("`{}` uses undeclared type `{}`", sig.name, p.ty)));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// action schemas

struct SchemaScope<'a> {
    dom: &'a DomainModel,
    vars: HashMap<String, String>,
}

impl SchemaScope<'_> {
    fn arg(&self, node: &SExpr) -> Result<(Arg, String), PddlError> {
        let sym = symbol(node)?;
        if sym.text.starts_with('?') {
            let ty = self
                .vars
                .get(&sym.text)
                .ok_or_else(|| PddlError::semantic(sym.pos, format!("variable `{}` is not a parameter", sym.text)))?;
            Ok((Arg::Var(sym.text), ty.clone()))
        } else {
            let c = self
                .dom
                .constants
                .iter()
                .find(|c| c.name == sym.text)
                .ok_or_else(|| PddlError::semantic(sym.pos, format!("undeclared constant `{}`", sym.text)))?;
            Ok((Arg::Const(sym.text), c.ty.clone()))
        }
    }

    fn args_against(
        &self,
        node: &SExpr,
        params: &[TypedName],
        nodes: &[SExpr],
        what: &str,
    ) -> Result<Vec<Arg>, PddlError> {
        if params.len() != nodes.len() {
            return Err(PddlError::semantic(
                node.pos(),
                format!("`{what}` expects {} arguments, found {}", params.len(), nodes.len()),
            ));
        }
        let mut out = Vec::with_capacity(nodes.len());
        for (param, n) in params.iter().zip(nodes) {
            let (arg, ty) = self.arg(n)?;
            if !self.dom.is_subtype(&ty, &param.ty) {
                return Err(PddlError::semantic(
                    n.pos(),
                    format!("`{}` has type `{ty}` but `{what}` expects `{}`", arg.text(), param.ty),
                ));
            }
            out.push(arg);
        }
        Ok(out)
    }

    fn atom(&self, node: &SExpr) -> Result<AtomTemplate, PddlError> {
        let items = node
            .as_list()
            .filter(|l| !l.is_empty())
            .ok_or_else(|| PddlError::syntax(node.pos(), "expected an atom (predicate args...)"))?;
        let head = symbol(&items[0])?;
        let sig = self
            .dom
            .predicate(&head.text)
            .ok_or_else(|| PddlError::semantic(head.pos, format!("undeclared predicate `{}`", head.text)))?;
        let args = self.args_against(node, &sig.params, &items[1..], &head.text)?;
        Ok(AtomTemplate { predicate: head.text, args })
    }

    fn fluent(&self, node: &SExpr) -> Result<FluentTemplate, PddlError> {
        let items = match node {
            SExpr::List { items, .. } if !items.is_empty() => items,
            _ => return Err(PddlError::syntax(node.pos(), "expected a function term (f args...)")),
        };
        let head = symbol(&items[0])?;
        let sig = self
            .dom
            .function(&head.text)
            .ok_or_else(|| PddlError::semantic(head.pos, format!("undeclared resource function `{}`", head.text)))?;
        let args = self.args_against(node, &sig.params, &items[1..], &head.text)?;
        Ok(FluentTemplate { function: head.text, args })
    }
}

fn constant_amount(node: &SExpr) -> Result<Quantity, PddlError> {
    match node {
        SExpr::List { pos, .. } => Err(PddlError::unsupported(*pos, "numeric expressions")),
        SExpr::Atom { text, pos } => {
            let q: Quantity =
                text.parse().map_err(|_| PddlError::syntax(*pos, format!("expected a number, found `{text}`")))?;
            if q.is_negative() {
                return Err(PddlError::semantic(*pos, format!("negative constant `{text}`")));
            }
            Ok(q)
        }
    }
}

fn parse_schema(node: &SExpr, dom: &DomainModel) -> Result<ActionSchema, PddlError> {
    let items = node.as_list().unwrap();
    let name = symbol(items.get(1).ok_or_else(|| PddlError::syntax(node.pos(), "(:action ...) needs a name"))?)?;
    let mut params = Vec::new();
    let mut pre_node = None;
    let mut eff_node = None;
    let mut i = 2;
    while i < items.len() {
        let key = symbol(&items[i])?;
        let value =
            items.get(i + 1).ok_or_else(|| PddlError::syntax(key.pos, format!("{} needs a value", key.text)))?;
        match key.text.as_str() {
            ":parameters" => {
                let list =
                    value.as_list().ok_or_else(|| PddlError::syntax(value.pos(), ":parameters expects a list"))?;
                params = typed_list(list, true)?;
            }
            ":precondition" => pre_node = Some(value),
            ":effect" => eff_node = Some(value),
            ":duration" | ":condition" => return Err(PddlError::unsupported(key.pos, ":durative-actions")),
            other => return Err(PddlError::syntax(key.pos, format!("unknown action key {other}"))),
        }
        i += 2;
    }

    let mut vars = HashMap::new();
    for p in &params {
        if !dom.has_type(&p.ty) {
            return Err(PddlError::semantic(
                p.name.pos,
                format!("parameter `{}` has undeclared type `{}`", p.name.text, p.ty),
            ));
        }
        if vars.insert(p.name.text.clone(), p.ty.clone()).is_some() {
            return Err(PddlError::semantic(p.name.pos, format!("parameter `{}` declared twice", p.name.text)));
        }
    }
    let scope = SchemaScope { dom, vars };

    let mut schema = ActionSchema {
        name: name.text.clone(),
        params: params.into_iter().map(|e| TypedName { name: e.name.text, ty: e.ty }).collect(),
        positive_pre: Vec::new(),
        negative_pre: Vec::new(),
        equalities: Vec::new(),
        numeric_pre: Vec::new(),
        add_effects: Vec::new(),
        delete_effects: Vec::new(),
        numeric_effects: Vec::new(),
    };
    if let Some(pre) = pre_node {
        precondition(pre, &scope, &mut schema)?;
    }
    if let Some(eff) = eff_node {
        effect(eff, &scope, &mut schema)?;
    }
    if let Some(both) = schema.add_effects.iter().find(|a| schema.delete_effects.contains(a)) {
        return Err(PddlError::semantic(
            node.pos(),
            format!("action `{}` both adds and deletes `{}`", schema.name, both.predicate),
        ));
    }
    Ok(schema)
}

fn precondition(node: &SExpr, scope: &SchemaScope<'_>, schema: &mut ActionSchema) -> Result<(), PddlError> {
    let items = node.as_list().ok_or_else(|| PddlError::syntax(node.pos(), "expected a condition list"))?;
    let Some(head) = node.head() else {
        if items.is_empty() {
            return Ok(());
        }
        return Err(PddlError::syntax(node.pos(), "expected a condition list"));
    };
    match head {
        "and" => {
            for sub in &items[1..] {
                precondition(sub, scope, schema)?;
            }
        }
        "not" => {
            let [_, inner] = items else {
                return Err(PddlError::syntax(node.pos(), "(not ...) takes one argument"));
            };
            match inner.head() {
                Some("=") => schema.equalities.push(equality(inner, scope, true)?),
                Some("and" | "or" | "not" | "imply" | "exists" | "forall") => {
                    return Err(PddlError::unsupported(inner.pos(), ":disjunctive-preconditions"))
                }
                _ => {
                    let atom = scope.atom(inner)?;
                    if !schema.negative_pre.contains(&atom) {
                        schema.negative_pre.push(atom);
                    }
                }
            }
        }
        "=" if items.len() == 3 && items[1].as_atom().is_some() && items[2].as_atom().is_some() => {
            schema.equalities.push(equality(node, scope, false)?)
        }
        ">=" => {
            let [_, lhs, rhs] = items else {
                return Err(PddlError::syntax(node.pos(), "(>= (f ...) c) takes two arguments"));
            };
            if lhs.as_atom().is_some() {
                return Err(PddlError::unsupported(node.pos(), "numeric comparisons other than (>= (f ...) c)"));
            }
            let fluent = scope.fluent(lhs)?;
            let threshold = constant_amount(rhs)?;
            schema.numeric_pre.push(NumericPreTemplate { fluent, threshold });
        }
        ">" | "<" | "<=" | "=" => return Err(PddlError::unsupported(node.pos(), format!("numeric comparator {head}"))),
        "or" | "imply" => return Err(PddlError::unsupported(node.pos(), ":disjunctive-preconditions")),
        "exists" => return Err(PddlError::unsupported(node.pos(), ":existential-preconditions")),
        "forall" => return Err(PddlError::unsupported(node.pos(), ":universal-preconditions")),
        "preference" => return Err(PddlError::unsupported(node.pos(), ":preferences")),
        _ => {
            let atom = scope.atom(node)?;
            if !schema.positive_pre.contains(&atom) {
                schema.positive_pre.push(atom);
            }
        }
    }
    Ok(())
}

fn equality(node: &SExpr, scope: &SchemaScope<'_>, negated: bool) -> Result<EqualityConstraint, PddlError> {
    let items = node.as_list().unwrap();
    let [_, l, r] = items else {
        return Err(PddlError::syntax(node.pos(), "(= a b) takes two arguments"));
    };
    if l.as_list().is_some() || r.as_list().is_some() {
        return Err(PddlError::unsupported(node.pos(), "numeric comparator ="));
    }
    Ok(EqualityConstraint { left: scope.arg(l)?.0, right: scope.arg(r)?.0, negated })
}

fn effect(node: &SExpr, scope: &SchemaScope<'_>, schema: &mut ActionSchema) -> Result<(), PddlError> {
    let items = node.as_list().ok_or_else(|| PddlError::syntax(node.pos(), "expected an effect list"))?;
    let Some(head) = node.head() else {
        if items.is_empty() {
            return Ok(());
        }
        return Err(PddlError::syntax(node.pos(), "expected an effect list"));
    };
    match head {
        "and" => {
            for sub in &items[1..] {
                effect(sub, scope, schema)?;
            }
        }
        "not" => {
            let [_, inner] = items else {
                return Err(PddlError::syntax(node.pos(), "(not ...) takes one argument"));
            };
            let atom = scope.atom(inner)?;
            if !schema.delete_effects.contains(&atom) {
                schema.delete_effects.push(atom);
            }
        }
        "increase" | "decrease" | "assign" => {
            let [_, lhs, rhs] = items else {
                return Err(PddlError::syntax(node.pos(), format!("({head} (f ...) c) takes two arguments")));
            };
            let op = match head {
                "increase" => NumericOp::Increase,
                "decrease" => NumericOp::Decrease,
                _ => NumericOp::Assign,
            };
            let fluent = scope.fluent(lhs)?;
            let amount = constant_amount(rhs)?;
            schema.numeric_effects.push(NumericEffectTemplate { fluent, op, amount });
        }
        "scale-up" | "scale-down" => return Err(PddlError::unsupported(node.pos(), format!("{head} effects"))),
        "when" => return Err(PddlError::unsupported(node.pos(), ":conditional-effects")),
        "forall" => return Err(PddlError::unsupported(node.pos(), ":conditional-effects")),
        _ => {
            let atom = scope.atom(node)?;
            if !schema.add_effects.contains(&atom) {
                schema.add_effects.push(atom);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// problem content

fn ground_atom(node: &SExpr, dom: &DomainModel, prob: &ProblemInstance) -> Result<Atom, PddlError> {
    let items = node
        .as_list()
        .filter(|l| !l.is_empty())
        .ok_or_else(|| PddlError::syntax(node.pos(), "expected a ground atom (predicate objects...)"))?;
    let head = symbol(&items[0])?;
    let mut args = Vec::with_capacity(items.len() - 1);
    for n in &items[1..] {
        let sym = symbol(n)?;
        if sym.text.starts_with('?') {
            return Err(PddlError::semantic(sym.pos, format!("variable `{}` in ground content", sym.text)));
        }
        args.push(sym.text);
    }
    let atom = Atom { predicate: head.text, args };
    check_ground_atom(&atom, dom, prob).map_err(|m| PddlError::semantic(node.pos(), m))?;
    Ok(atom)
}

fn init_assignment(node: &SExpr, dom: &DomainModel, prob: &ProblemInstance) -> Result<(Fluent, Quantity), PddlError> {
    let items = node.as_list().unwrap();
    let [_, term, value] = items else {
        return Err(PddlError::syntax(node.pos(), "(= (f ...) value) takes two arguments"));
    };
    let term_items = term
        .as_list()
        .filter(|l| !l.is_empty())
        .ok_or_else(|| PddlError::syntax(term.pos(), "expected a function term (f objects...)"))?;
    let head = symbol(&term_items[0])?;
    let args = term_items[1..].iter().map(|n| symbol(n).map(|s| s.text)).collect::<Result<Vec<_>, _>>()?;
    let fluent = Fluent { function: head.text, args };
    check_ground_fluent(&fluent, dom, prob).map_err(|m| PddlError::semantic(term.pos(), m))?;
    Ok((fluent, constant_amount(value)?))
}

fn goal_conjuncts(node: &SExpr) -> Result<Vec<&SExpr>, PddlError> {
    let mut out = Vec::new();
    collect_goal(node, &mut out)?;
    Ok(out)
}

fn collect_goal<'a>(node: &'a SExpr, out: &mut Vec<&'a SExpr>) -> Result<(), PddlError> {
    match node.head() {
        Some("and") => {
            for sub in &node.as_list().unwrap()[1..] {
                collect_goal(sub, out)?;
            }
        }
        Some("not") => return Err(PddlError::unsupported(node.pos(), "negative goals")),
        Some("or" | "imply") => return Err(PddlError::unsupported(node.pos(), ":disjunctive-preconditions")),
        Some("exists") => return Err(PddlError::unsupported(node.pos(), ":existential-preconditions")),
        Some("forall") => return Err(PddlError::unsupported(node.pos(), ":universal-preconditions")),
        Some("preference") => return Err(PddlError::unsupported(node.pos(), ":preferences")),
        Some(">=" | ">" | "<" | "<=" | "=") => return Err(PddlError::unsupported(node.pos(), "numeric goals")),
        None if node.as_list().is_some_and(|l| l.is_empty()) => {}
        _ => out.push(node),
    }
    Ok(())
}
