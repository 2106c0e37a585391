//! Cross-provider consistency before and after correction.
//!
//! Takes one clean synthetic match, derives two "provider views" of it
//! (one that never records receptions, one that sprinkles in micro-carries)
//! and measures how similar the two accounts look, raw and corrected.
//! Correction converges both views toward the same underlying match.
//!
//! ```bash
//! cargo run --example compare_consistency
//! ```

use versa::corruptor::corrupt;
use versa::fixtures::{statsbomb_like_plan, synthetic_match, wyscout_like_plan};
use versa::metrics::normalized_edit_similarity;
use versa::{default_table, verify_stream, HandlerRegistry};

fn main() {
    let table = default_table();
    let registry = HandlerRegistry::standard();

    println!("{:<8} {:>10} {:>12} {:>12}", "half", "raw", "corrected", "gain");
    for half in synthetic_match("derby", 9090, 550) {
        let (reception_free, _) = corrupt(&half, &wyscout_like_plan(41));
        let (micro_carried, _) = corrupt(&half, &statsbomb_like_plan(42));

        let raw = normalized_edit_similarity(
            &reception_free.action_sequence(),
            &micro_carried.action_sequence(),
        );
        let (fixed_a, exceptions_a) = verify_stream(&reception_free, &table, &registry);
        let (fixed_b, exceptions_b) = verify_stream(&micro_carried, &table, &registry);
        let corrected = normalized_edit_similarity(
            &fixed_a.action_sequence(),
            &fixed_b.action_sequence(),
        );
        println!(
            "{:<8} {raw:>10.4} {corrected:>12.4} {:>+12.4}   ({} + {} exceptions repaired)",
            format!("p{}", half.period),
            corrected - raw,
            exceptions_a.len(),
            exceptions_b.len(),
        );
    }
}
