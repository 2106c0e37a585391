//! Detect and repair the two canonical inconsistencies: a Block recorded
//! before its Shot, and a missing PassReceived after a successful pass.
//!
//! ```bash
//! cargo run --example verify_basics
//! ```

use versa::fixtures::{case1_block_before_shot, case2_missing_reception};
use versa::{default_table, verify_stream, HandlerRegistry, VersaStream};

fn show(label: &str, stream: &VersaStream) {
    let actions: Vec<String> = stream
        .events
        .iter()
        .map(|e| format!("{}{}", e.action, match e.provenance {
            versa::Provenance::Synthesized => "*",
            versa::Provenance::Reordered => "~",
            versa::Provenance::Recorded => "",
        }))
        .collect();
    println!("{label:<12} {}", actions.join(" -> "));
}

fn main() {
    let table = default_table();
    let registry = HandlerRegistry::standard();

    println!("== wrong order: Block recorded before the Shot it answered ==");
    let case1 = case1_block_before_shot();
    show("raw", &case1);
    let (corrected, exceptions) = verify_stream(&case1, &table, &registry);
    show("corrected", &corrected);
    for record in &exceptions {
        println!(
            "exception at index {}: {} in {} -> {} ({})",
            record.stream_index,
            record.action,
            record.state_at_failure,
            record.handler_applied,
            record.reason,
        );
    }

    println!();
    println!("== missing event: shot by a teammate with no reception between ==");
    let case2 = case2_missing_reception();
    show("raw", &case2);
    let (corrected, exceptions) = verify_stream(&case2, &table, &registry);
    show("corrected", &corrected);
    for record in &exceptions {
        println!(
            "exception at index {}: {} in {} -> {} (inserted {:?})",
            record.stream_index,
            record.action,
            record.state_at_failure,
            record.handler_applied,
            record.events_inserted,
        );
    }
    println!();
    println!("(* synthesized, ~ reordered)");
}
