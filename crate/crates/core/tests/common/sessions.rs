//! Random session command sequences for property tests.

use proptest::prelude::*;

use radar::quantity::Quantity;
use radar::reachability;
use radar::session::{Session, SessionCommand, Transition};

pub const EXAMPLES: &[&str] = &["firefighting/scenario1", "firefighting/scenario2", "toy/chain"];

pub const ATOMS: &[&str] = &[
    "fire-out(building1)",
    "on-scene(big-engines)",
    "on-scene(rescuers)",
    "big-fire(building1)",
    "small-fire(building1)",
    "a",
    "b",
    "g",
    "bogus(x)",
];
pub const ACTIONS: &[&str] = &[
    "dispatch-big-engines(station1)",
    "dispatch-small-engines(station1)",
    "dispatch-rescuers(station1)",
    "extinguish-small-with-big(building1)",
    "extinguish-big-fire(building1)",
    "step-one",
    "step-two",
    "no-such-action",
];
pub const FLUENTS: &[&str] = &["available-big(station1)", "available-rescuer(station1)", "missing(station1)"];

pub fn command() -> impl Strategy<Value = SessionCommand> {
    let atom = (0..ATOMS.len()).prop_map(|i| ATOMS[i].parse().unwrap());
    let action = (0..ACTIONS.len()).prop_map(|i| ACTIONS[i].to_string());
    prop_oneof![
        atom.clone().prop_map(|atom| SessionCommand::AddGoal { atom }),
        atom.clone().prop_map(|atom| SessionCommand::RemoveGoal { atom }),
        atom.clone().prop_map(|atom| SessionCommand::AddFact { atom }),
        atom.prop_map(|atom| SessionCommand::RemoveFact { atom }),
        ((0..FLUENTS.len()), -3i64..=3).prop_map(|(f, d)| SessionCommand::AdjustResource {
            fluent: FLUENTS[f].parse().unwrap(),
            delta: Quantity::from_int(d)
        }),
        action.clone().prop_map(|action| SessionCommand::AppendStep { action }),
        action.clone().prop_map(|action| SessionCommand::AppendStep { action }),
        (0usize..4).prop_map(|index| SessionCommand::RemoveStep { index }),
        Just(SessionCommand::ExecuteStep),
        Just(SessionCommand::ExecuteStep),
        Just(SessionCommand::RequestSuggestions),
        Just(SessionCommand::Dispatch),
        prop_oneof![Just("block"), Just("warn"), Just("maybe")]
            .prop_map(|v| SessionCommand::SetConfig { key: "dispatchPolicy".into(), value: v.into() }),
        action.clone().prop_map(|action| SessionCommand::DisableAction { action }),
        action.prop_map(|action| SessionCommand::EnableAction { action }),
    ]
}

pub fn check_trace(s: &Session) {
    let d = s.data();
    assert_eq!(d.trace.len(), d.transitions.len() + 1);
    assert_eq!(d.trace.last(), Some(&d.current_state));
    let ids = s.actions_by_id();
    for (i, t) in d.transitions.iter().enumerate() {
        if let Transition::Executed { action } = t {
            let next = reachability::apply(&d.trace[i], ids[action.as_str()]).unwrap();
            assert_eq!(next, d.trace[i + 1]);
        }
    }
}
