//! Exhaustive grid search, which bounds what any placement can reach.

use std::time::Instant;

use uav_terrain::channel::ChannelParams;
use uav_terrain::deploy::{brute_force, BlockageMode, BruteOptions, GridSpec};
use uav_terrain::sim::{generate_scenario, ScenarioConfig};

fn main() -> uav_terrain::Result<()> {
    let s = generate_scenario(&ScenarioConfig::default(), 2)?;
    for step in [10.0, 5.0, 2.0] {
        let opts = BruteOptions {
            grid: GridSpec {
                region: *s.map.area(),
                step,
                h_min: s.h_min,
                h_max: 120.0,
                h_step: step,
            },
            mode: BlockageMode::Basic,
        };
        let t = Instant::now();
        let r = brute_force(&s.map, &s.users, &ChannelParams::default(), &opts)?;
        let p = r.uav_position;
        println!(
            "grid {step:4.1} m: ({:6.1}, {:6.1}, {:5.1}) mean coverage {:.4} in {:.1?}",
            p.x,
            p.y,
            p.z,
            r.objective.unwrap_or(f64::NAN),
            t.elapsed()
        );
    }
    Ok(())
}
