//! Runs a small Monte-Carlo campaign and prints per-algorithm statistics.
//!
//! ```text
//! cargo run --release --example campaign -- [rounds] [seed] [building density] [height scale] [h_max]
//! ```

use std::time::Instant;

use uav_terrain::sim::{run_campaign, CampaignConfig};

fn main() -> uav_terrain::Result<()> {
    let mut args = std::env::args().skip(1);
    let rounds = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut cfg = CampaignConfig {
        rounds,
        seed,
        ..CampaignConfig::default()
    };
    if let Some(d) = args.next().and_then(|s| s.parse().ok()) {
        cfg.scenario.buildings.density = d;
    }
    if let Some(s) = args.next().and_then(|s| s.parse().ok()) {
        cfg.scenario.buildings.rayleigh_scale = s;
    }
    if let Some(h) = args.next().and_then(|s| s.parse().ok()) {
        cfg.settings.h_max = h;
    }
    let t = Instant::now();
    let report = run_campaign(&cfg)?;
    println!(
        "{} of {} rounds in {:.1?} ({} failed)",
        report.rounds_completed,
        report.rounds_requested,
        t.elapsed(),
        report.failures.len()
    );
    for a in &report.algorithms {
        print!(
            "{:>6}  mean coverage {:.4}  search length {:.1} [{:.1}, {:.1}]",
            a.algorithm.name(),
            a.mean_coverage,
            a.search_length.mean,
            a.search_length.shortest_20,
            a.search_length.longest_20
        );
        match a.mean_c2 {
            Some(c2) => println!("  mean |C2| {c2:.2}"),
            None => println!(),
        }
    }
    for f in report.failures.iter().take(5) {
        println!("round {}: {}", f.round, f.message);
    }
    Ok(())
}
