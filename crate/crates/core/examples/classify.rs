//! Class boundaries for several classification degrees, and the classes of
//! a random population around a UAV hovering at 20 m.

use uav_terrain::channel::ChannelParams;
use uav_terrain::classify::{class_boundaries, classify_users, ClassificationConfig, ClassificationMode};
use uav_terrain::losmodel::EMPIRICAL_SUBURBAN;
use uav_terrain::sim::{generate_scenario, ScenarioConfig};

fn main() -> uav_terrain::Result<()> {
    let p = ChannelParams::default();
    for mode in [ClassificationMode::NonTerrain, ClassificationMode::Terrain] {
        for eps in [0.05, 0.1, 0.2, 0.4] {
            let cfg = ClassificationConfig::new(eps, mode)?;
            let (lo, hi) = class_boundaries(&p, &EMPIRICAL_SUBURBAN, &cfg, 20.0)?;
            println!("{mode:?} eps {eps}: R_min {:.1} m, R_max {:.1} m", lo.value(), hi.value());
        }
    }

    let cfg = ScenarioConfig {
        area_side: 3000.0,
        user_intensity: 40.0 / 9.0e6,
        ..ScenarioConfig::default()
    };
    let s = generate_scenario(&cfg, 11)?;
    let center = s.map.area().center().at(20.0);
    let classes = classify_users(&p, &EMPIRICAL_SUBURBAN, &ClassificationConfig::non_terrain(0.1)?, center, &s.users)?;
    for (u, c) in s.users.iter().zip(&classes).take(12) {
        println!("{:7.1} m  {c:?}", center.dist(u.on_ground()));
    }
    Ok(())
}
