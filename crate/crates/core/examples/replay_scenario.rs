//! Replays a bundled scenario and prints the transcript as JSON.
//!
//! cargo run --example replay_scenario -- firefighting/scenario1

use radar::bundled;
use radar::session::{parse_events, replay, Session, SessionConfig};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "firefighting/scenario1".into());
    let example = bundled::find(&name).expect("unknown bundled example");
    let mut session = Session::create_with_id("replay", example.domain, example.problem, SessionConfig::default())
        .expect("bundled model parses");
    let events = parse_events(example.events.unwrap_or("")).expect("bundled events parse");
    let transcript = replay(&mut session, &events);
    println!("{}", serde_json::to_string_pretty(&transcript).unwrap());
}
