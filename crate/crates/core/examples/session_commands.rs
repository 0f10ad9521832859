//! Drives a session with commands, then snapshots and restores it.
//!
//! cargo run --example session_commands

use radar::bundled;
use radar::quantity::Quantity;
use radar::session::{restore, Session, SessionCommand, SessionConfig};

fn show(label: &str, s: &Session) {
    println!("{label} (revision {}):", s.revision());
    for a in s.advisories() {
        println!("  {:?}: {}", a.kind, a.message);
    }
}

fn main() {
    let ex = bundled::find("firefighting/scenario1").unwrap();
    let mut s = Session::create(ex.domain, ex.problem, SessionConfig::default()).unwrap();
    show("initial", &s);

    let commands = [
        SessionCommand::AppendStep { action: "dispatch-big-engines(station1)".into() },
        SessionCommand::ExecuteStep,
        SessionCommand::AppendStep { action: "extinguish-small-with-big(building1)".into() },
        SessionCommand::AdjustResource {
            fluent: "available-big(station1)".parse().unwrap(),
            delta: Quantity::from_int(2),
        },
        SessionCommand::Dispatch,
    ];
    for cmd in commands {
        let name = cmd.name();
        match s.handle(cmd) {
            Ok(_) => show(name, &s),
            Err(e) => println!("{name} rejected: {} ({})", e.code(), e),
        }
    }

    let snapshot = s.to_snapshot_json();
    let restored = restore(&snapshot).unwrap();
    println!("snapshot is {} bytes; restored equal: {}", snapshot.len(), restored == s);
}
