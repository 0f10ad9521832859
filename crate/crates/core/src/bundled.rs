//! Example models shipped with the crate.

/// A domain/problem pair, optionally with a scripted event file.
#[derive(Debug, Clone, Copy)]
pub struct BundledExample {
    pub name: &'static str,
    pub domain: &'static str,
    pub problem: &'static str,
    pub events: Option<&'static str>,
}

pub const FIREFIGHTING_DOMAIN: &str = include_str!("../data/firefighting/domain.pddl");
pub const SCENARIO1: &str = include_str!("../data/firefighting/scenario1.pddl");
pub const SCENARIO2: &str = include_str!("../data/firefighting/scenario2.pddl");
pub const SCENARIO2_SMALL: &str = include_str!("../data/firefighting/scenario2_small.pddl");
pub const SCENARIO1_EVENTS: &str = include_str!("../data/firefighting/scenario1.events");
pub const SCENARIO2_EVENTS: &str = include_str!("../data/firefighting/scenario2.events");
pub const CHAIN_DOMAIN: &str = include_str!("../data/toy/chain-domain.pddl");
pub const CHAIN_PROBLEM: &str = include_str!("../data/toy/chain-problem.pddl");
pub const CHAIN_SATISFIED: &str = include_str!("../data/toy/chain-satisfied.pddl");
pub const CHAIN_UNREACHABLE: &str = include_str!("../data/toy/chain-unreachable.pddl");

pub const EXAMPLES: &[BundledExample] = &[
    BundledExample {
        name: "firefighting/scenario1",
        domain: FIREFIGHTING_DOMAIN,
        problem: SCENARIO1,
        events: Some(SCENARIO1_EVENTS),
    },
    BundledExample {
        name: "firefighting/scenario2",
        domain: FIREFIGHTING_DOMAIN,
        problem: SCENARIO2,
        events: Some(SCENARIO2_EVENTS),
    },
    BundledExample {
        name: "firefighting/scenario2-small",
        domain: FIREFIGHTING_DOMAIN,
        problem: SCENARIO2_SMALL,
        events: None,
    },
    BundledExample { name: "toy/chain", domain: CHAIN_DOMAIN, problem: CHAIN_PROBLEM, events: None },
    BundledExample { name: "toy/chain-satisfied", domain: CHAIN_DOMAIN, problem: CHAIN_SATISFIED, events: None },
    BundledExample { name: "toy/chain-unreachable", domain: CHAIN_DOMAIN, problem: CHAIN_UNREACHABLE, events: None },
];

pub fn find(name: &str) -> Option<&'static BundledExample> {
    EXAMPLES.iter().find(|e| e.name == name)
}
