//! Exception statistics across a mixed-provider corpus, grouped by
//! (provider, league, season) like a data-quality audit table.
//!
//! Each synthetic "dataset" is damaged in its provider's characteristic
//! style, so the primary exception column shows the expected signature:
//! missing receptions for the reception-free provider, carries elsewhere.
//!
//! ```bash
//! cargo run --example exception_report
//! ```

use versa::corruptor::corrupt;
use versa::fixtures::{bepro_like_plan, synthetic_half, wyscout_like_plan, SyntheticConfig};
use versa::metrics::grouped_exception_report;
use versa::{default_table, verify_stream, HandlerRegistry, VersaStream};

fn main() {
    let table = default_table();
    let registry = HandlerRegistry::standard();

    let mut verified: Vec<(VersaStream, Vec<versa::ExceptionRecord>)> = Vec::new();
    let datasets = [
        ("bepro_like", "league-one", "2025", 3, true),
        ("wyscout_like", "league-two", "2025", 3, false),
        ("wyscout_like", "league-two", "2026", 2, false),
    ];
    for (provider, league, season, matches, carry_style) in datasets {
        for m in 0..matches {
            let seed = 7000 + m as u64 * 13 + season.len() as u64;
            let clean = synthetic_half(
                &SyntheticConfig::new(format!("{league}-{season}-m{m}"), 1, seed)
                    .with_target(420),
            );
            let plan = if carry_style {
                bepro_like_plan(seed)
            } else {
                wyscout_like_plan(seed)
            };
            let (mut view, _) = corrupt(&clean, &plan);
            view.meta.provider = Some(provider.to_string());
            view.meta.league = Some(league.to_string());
            view.meta.season = Some(season.to_string());
            verified.push(verify_stream(&view, &table, &registry));
        }
    }

    println!(
        "{:<14} {:<12} {:<8} {:>7} {:>8} {:>11} {:>24}",
        "provider", "league", "season", "matches", "events", "exception", "primary exception"
    );
    for row in grouped_exception_report(&verified) {
        let primary = row
            .stats
            .primary_exception
            .map(|(action, share)| format!("{action}({:.2}%)", share * 100.0))
            .unwrap_or_else(|| "none".into());
        println!(
            "{:<14} {:<12} {:<8} {:>7} {:>8} {:>10.2}% {:>24}",
            row.key.provider,
            row.key.league,
            row.key.season,
            row.match_count,
            row.stats.total_events,
            row.stats.exception_ratio * 100.0,
            primary
        );
    }
}
