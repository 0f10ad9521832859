//! Runs the advisor on a problem with a draft plan and prints advisories
//! and the plan validation report.
//!
//! cargo run --example analyze_plan

use radar::advisor::{self, dispatch_gate, DispatchPolicy};
use radar::bundled;
use radar::pddl;

fn main() {
    let domain = pddl::parse_domain(bundled::FIREFIGHTING_DOMAIN).unwrap();
    let problem = pddl::parse_problem(bundled::SCENARIO1, &domain).unwrap();
    let actions = pddl::ground(&domain, &problem);
    let init = problem.initial_state();
    let ids = pddl::by_id(&actions);
    let plan = [ids["dispatch-big-engines(station1)"], ids["extinguish-small-with-big(building1)"]];

    let analysis = advisor::analyze_initial(&actions, &init, &problem.goal, &plan);
    for a in &analysis.advisories {
        println!("[{:?}] {:?}: {}", a.severity, a.kind, a.message);
    }
    let report = &analysis.validation;
    println!("first invalid step: {:?}, goal satisfied: {}", report.first_invalid, report.goal_satisfied);
    for policy in [DispatchPolicy::Block, DispatchPolicy::Warn] {
        println!("dispatch under {policy:?}: {:?}", dispatch_gate(report, policy));
    }
}
