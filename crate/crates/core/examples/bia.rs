//! Balanced iterative placement with each of the four mass densities.

use uav_terrain::deploy::{bia, BiaOptions, DensityKind, MassDensity};
use uav_terrain::sim::{generate_scenario, ScenarioConfig};

fn main() -> uav_terrain::Result<()> {
    let s = generate_scenario(&ScenarioConfig::default(), 5)?;
    for kind in DensityKind::ALL {
        let md = MassDensity::with_defaults(kind, 20.0)?;
        let r = bia(&s.users, &md, &BiaOptions::default())?;
        let p = r.uav_position;
        println!("{:>8}: ({:6.1}, {:6.1}) at {} m", kind.short_name(), p.x, p.y, p.z);
    }
    Ok(())
}
