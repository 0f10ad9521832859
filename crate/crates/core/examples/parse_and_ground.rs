//! Parses the firefighting model and lists its ground actions.
//!
//! cargo run --example parse_and_ground

use radar::bundled;
use radar::pddl;

fn main() {
    let domain = pddl::parse_domain(bundled::FIREFIGHTING_DOMAIN).expect("domain parses");
    let problem = pddl::parse_problem(bundled::SCENARIO1, &domain).expect("problem parses");
    let init = problem.initial_state();

    println!("domain {} / problem {}", domain.name, problem.name);
    println!("initial state:");
    for atom in &init.atoms {
        println!("  {atom}");
    }
    for (fluent, value) in &init.fluents {
        println!("  {fluent} = {value}");
    }
    println!("goal: {:?}", problem.goal.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("ground actions:");
    for action in pddl::ground(&domain, &problem) {
        let numeric: Vec<String> =
            action.numeric_pre.iter().map(|c| format!("{} >= {}", c.fluent, c.threshold)).collect();
        if numeric.is_empty() {
            println!("  {}", action.id);
        } else {
            println!("  {:<40} needs {}", action.id, numeric.join(", "));
        }
    }

    // errors carry a position
    let err = pddl::parse_domain("(define (domain broken)\n  (:predicates (p)").unwrap_err();
    let pos = err.position();
    println!("broken domain: {} at line {} column {}", err.code(), pos.line, pos.column);
}
