pub mod advisor;
pub mod bundled;
pub mod cli;
pub mod landmarks;
pub mod pddl;
pub mod quantity;
pub mod reachability;
pub mod schema;
pub mod service;
pub mod session;
pub mod task;
