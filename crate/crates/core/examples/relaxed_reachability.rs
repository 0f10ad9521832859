//! Relaxed planning graph levels under both resource policies.
//!
//! cargo run --example relaxed_reachability

use radar::bundled;
use radar::pddl;
use radar::reachability::{applicable, build_rpg, ResourcePolicy};

fn main() {
    let domain = pddl::parse_domain(bundled::FIREFIGHTING_DOMAIN).unwrap();
    let problem = pddl::parse_problem(bundled::SCENARIO1, &domain).unwrap();
    let actions = pddl::ground(&domain, &problem);
    let init = problem.initial_state();

    for policy in [ResourcePolicy::IgnoreNumeric, ResourcePolicy::EnforceNumericStatic] {
        let rpg = build_rpg(&init, &actions, policy);
        println!("{policy:?}: {} levels", rpg.levels());
        let mut reached: Vec<_> = rpg.reached().collect();
        reached.sort_by_key(|(atom, level)| (*level, atom.to_string()));
        for (atom, level) in reached {
            println!("  {level}  {atom}");
        }
        let goal_level = rpg.set_level(&problem.goal);
        println!("  goal level: {goal_level:?}");
    }

    println!("applicability in the initial state:");
    for action in &actions {
        let c = applicable(&init, action);
        println!("  {:<40} {:?}", action.id, c.status);
    }
}
