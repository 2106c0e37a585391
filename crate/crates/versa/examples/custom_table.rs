//! Inspect the transition table and load a customized one.
//!
//! The table is plain data: rules with guard conditions, a self-loop set,
//! and the own-goal wildcard. This example prints the topology, then
//! tightens the carry-gap threshold and shows the behavioral difference on
//! the same stream.
//!
//! ```bash
//! cargo run --example custom_table
//! ```

use versa::fixtures::{synthetic_half, SyntheticConfig};
use versa::{default_table, verify_stream, HandlerRegistry, TransitionTable};

fn main() {
    let table = default_table();

    println!("== transition topology (version {}) ==", table.version());
    for rule in table.rules() {
        let guards = if rule.conditions.is_empty() {
            String::new()
        } else {
            let names: Vec<&str> = rule.conditions.iter().map(|c| c.name()).collect();
            format!("  [{}]", names.join(", "))
        };
        println!("  {} --{}--> {}{}", rule.source, rule.action, rule.target, guards);
    }
    for action in table.self_loops() {
        println!("  * --{action}--> * (self-loop)");
    }
    for wildcard in table.wildcards() {
        println!(
            "  any except {:?} --{}--> {}",
            wildcard.excluded_sources, wildcard.action, wildcard.target
        );
    }

    // round-trip through JSON and tighten the carry threshold
    let json = table.to_json();
    let reloaded = TransitionTable::from_json(&json).expect("own serialization parses");
    let strict = reloaded.with_carry_gap(1.0);

    let stream = synthetic_half(&SyntheticConfig::new("gaps", 1, 55).with_target(250));
    let registry = HandlerRegistry::standard();
    let (_, default_records) = verify_stream(&stream, &table, &registry);
    let (_, strict_records) = verify_stream(&stream, &strict, &registry);
    println!();
    println!(
        "same clean stream: {} exceptions at 3.0 m carry gap, {} at 1.0 m",
        default_records.len(),
        strict_records.len()
    );
    println!("(the stream was generated under the 3.0 m rule, so every move over 1.0 m now wants a Carry)");
}
