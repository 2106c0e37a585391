//! Reduce provider-specific vocabulary divergence with the simplified
//! variant: corner variants merge into one Corner action and the off-ball
//! self-loop events drop.
//!
//! ```bash
//! cargo run --example simplify_stream
//! ```

use std::collections::BTreeMap;

use versa::adapters::{simplify, SimplificationMap};
use versa::fixtures::{synthetic_half, SyntheticConfig};
use versa::ActionType;

fn histogram(actions: &[ActionType]) -> BTreeMap<ActionType, usize> {
    let mut counts = BTreeMap::new();
    for action in actions {
        *counts.entry(*action).or_insert(0) += 1;
    }
    counts
}

fn main() {
    let stream = synthetic_half(&SyntheticConfig::new("simplify-demo", 1, 2323).with_target(600));
    let map = SimplificationMap::default_map();
    let simplified = simplify(&stream, &map);

    let before = histogram(&stream.action_sequence());
    let after = histogram(&simplified.action_sequence());

    println!("{:<14} {:>7} {:>11}", "action", "versa", "simplified");
    for action in ActionType::ALL {
        let b = before.get(&action).copied().unwrap_or(0);
        let a = after.get(&action).copied().unwrap_or(0);
        if b != 0 || a != 0 {
            println!("{:<14} {b:>7} {a:>11}", action.to_string());
        }
    }
    println!();
    println!(
        "{} events -> {} ({:?})",
        stream.len(),
        simplified.len(),
        simplified.format_variant
    );
}
