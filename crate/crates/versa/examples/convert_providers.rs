//! Unify three provider-style files into the canonical representation.
//!
//! Fabricates one match in each provider's own units and vocabulary
//! (meters+milliseconds, yards-like top-left grid, percent grid), ingests
//! each with its profile, and exports canonical `.versa.jsonl` files.
//!
//! ```bash
//! cargo run --example convert_providers
//! ```

use versa::adapters::{canonical_file_name, export, ingest, write_provider_file, ProviderProfile};
use versa::corruptor::corrupt;
use versa::fixtures::{statsbomb_like_plan, synthetic_half, wyscout_like_plan, SyntheticConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let clean = synthetic_half(&SyntheticConfig::new("demo-match", 1, 404).with_target(300));

    // each provider view damages the clean half in that provider's style
    let bepro_view = clean.clone();
    let (statsbomb_view, _) = corrupt(&clean, &statsbomb_like_plan(1));
    let (wyscout_view, _) = corrupt(&clean, &wyscout_like_plan(2));

    for (view, profile_name) in [
        (&bepro_view, "bepro_like"),
        (&statsbomb_view, "statsbomb_like"),
        (&wyscout_view, "wyscout_like"),
    ] {
        let profile = ProviderProfile::builtin(profile_name).expect("builtin profile");
        let provider_path = dir.path().join(format!("{profile_name}.json"));
        write_provider_file(view, &profile, &provider_path)?;

        let stream = ingest(&provider_path, &profile)?;
        let out_path = dir.path().join(format!("{profile_name}-{}", canonical_file_name(&stream)));
        export(&stream, &out_path)?;

        let first = &stream.events[0];
        println!(
            "{profile_name:<16} {} events | first: {} {:?} at ({:.1}, {:.1}) t={:.1}s | wrote {}",
            stream.len(),
            first.action,
            first.outcome,
            first.x.unwrap_or_default(),
            first.y.unwrap_or_default(),
            first.timestamp,
            out_path.file_name().unwrap().to_string_lossy(),
        );
    }
    println!();
    println!("all three providers now share one frame (105m x 68m), one clock (s), one vocabulary");
    Ok(())
}
