//! Extracts landmarks and orderings, then tracks their status.
//!
//! cargo run --example landmarks -- firefighting/scenario2

use radar::bundled;
use radar::landmarks::{extract_landmarks, landmark_status};
use radar::pddl;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "firefighting/scenario1".into());
    let example = bundled::find(&name).expect("unknown bundled example");
    let domain = pddl::parse_domain(example.domain).unwrap();
    let problem = pddl::parse_problem(example.problem, &domain).unwrap();
    let actions = pddl::ground(&domain, &problem);
    let init = problem.initial_state();

    let graph = match extract_landmarks(&init, &problem.goal, &actions) {
        Ok(g) => g,
        Err(e) => {
            println!("{e}");
            return;
        }
    };
    let statuses = landmark_status(&graph, std::slice::from_ref(&init), &init, &actions);
    for (i, (lm, st)) in graph.nodes.iter().zip(&statuses).enumerate() {
        println!("#{i} {:<45} {:?} verified={} {:?}", lm.label(), lm.origin, lm.verified, st.status);
        for b in &st.blocking {
            for f in &b.failed {
                println!(
                    "     {} via {}: {} has {}, needs {}",
                    b.disjunct, b.achiever, f.fluent, f.available, f.required
                );
            }
        }
    }
    for o in &graph.orders {
        println!("#{} -> #{} ({:?})", o.from, o.to, o.kind);
    }
}
