//! Asks the planner for a course of action before and after more
//! resources arrive.
//!
//! cargo run --example suggest_plan

use radar::advisor::{suggest_actions, validate_plan, DEFAULT_SUGGEST_BUDGET};
use radar::bundled;
use radar::pddl;
use radar::quantity::Quantity;

fn main() {
    let domain = pddl::parse_domain(bundled::FIREFIGHTING_DOMAIN).unwrap();
    let problem = pddl::parse_problem(bundled::SCENARIO2, &domain).unwrap();
    let actions = pddl::ground(&domain, &problem);
    let mut state = problem.initial_state();

    match suggest_actions(&state, &problem.goal, &actions, DEFAULT_SUGGEST_BUDGET) {
        Ok(plan) => println!("plan found with {} steps", plan.len()),
        Err(e) => println!("initial inventory: {e}"),
    }

    state.fluents.insert("available-big(station1)".parse().unwrap(), Quantity::from_int(2));
    state.fluents.insert("available-rescuer(station1)".parse().unwrap(), Quantity::from_int(4));
    let plan = suggest_actions(&state, &problem.goal, &actions, DEFAULT_SUGGEST_BUDGET).expect("solvable now");
    for (i, step) in plan.iter().enumerate() {
        println!("  {}. {}", i + 1, step.id);
    }
    println!("validated: {}", validate_plan(&state, &plan, &problem.goal).goal_satisfied);
}
