//! Re-runs SCPA as users wander, warm-starting each search window at the
//! previous position.

use uav_terrain::channel::ChannelParams;
use uav_terrain::deploy::{scpa, ScpaOptions};
use uav_terrain::losmodel::EMPIRICAL_SUBURBAN;
use uav_terrain::rng;
use uav_terrain::sim::{evaluate_deployment, generate_scenario, step_users, BlockageMode, ScenarioConfig};

fn main() -> uav_terrain::Result<()> {
    let p = ChannelParams::default();
    let mut s = generate_scenario(&ScenarioConfig::default(), 9)?;
    let mut walk = rng::stream(9, "walk", 0);
    let opts = ScpaOptions::new(s.h_min, 120.0);
    let mut center = None;
    for step in 0..6 {
        let r = scpa(&s.users, &p, &EMPIRICAL_SUBURBAN, center, &opts)?;
        let pos = r.uav_position;
        let cov = evaluate_deployment(&s, &p, &[pos], BlockageMode::Basic)?;
        println!("step {step}: UAV ({:6.1}, {:6.1}, {:5.1})  coverage {cov:.3}", pos.x, pos.y, pos.z);
        center = Some(pos.xy());
        s = step_users(&s, 15.0, &mut walk);
    }
    Ok(())
}
