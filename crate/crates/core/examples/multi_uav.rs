//! Splits the area into cells, places one SCPA UAV per cell and scores the
//! fleet with max-power association.

use uav_terrain::channel::ChannelParams;
use uav_terrain::deploy::{scpa, ScpaOptions};
use uav_terrain::losmodel::EMPIRICAL_SUBURBAN;
use uav_terrain::sim::{evaluate_deployment, generate_scenario, partition_multi_uav, BlockageMode, ScenarioConfig};

fn main() -> uav_terrain::Result<()> {
    let p = ChannelParams::default();
    let cfg = ScenarioConfig {
        area_side: 600.0,
        user_intensity: 40.0 / 360_000.0,
        ..ScenarioConfig::default()
    };
    let s = generate_scenario(&cfg, 4)?;
    for n in [1, 2, 4] {
        let mut uavs = Vec::new();
        for (cell, idx) in partition_multi_uav(s.map.area(), &s.users, n)? {
            let pos = if idx.is_empty() {
                cell.center().at(s.h_min)
            } else {
                let users: Vec<_> = idx.iter().map(|&i| s.users[i]).collect();
                scpa(&users, &p, &EMPIRICAL_SUBURBAN, Some(cell.center()), &ScpaOptions::new(s.h_min, 120.0))?.uav_position
            };
            uavs.push(pos);
        }
        for mode in [BlockageMode::Basic, BlockageMode::Multiple] {
            let cov = evaluate_deployment(&s, &p, &uavs, mode)?;
            println!("{n} UAVs, {mode:?}: coverage {cov:.4}");
        }
    }
    Ok(())
}
