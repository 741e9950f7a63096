//! Draws a random suburban scenario, checks a few links for blockage and
//! round-trips the map through JSON.

use uav_terrain::sim::{generate_scenario, ScenarioConfig};
use uav_terrain::terrain::TerrainMap;

fn main() -> uav_terrain::Result<()> {
    let s = generate_scenario(&ScenarioConfig::default(), 7)?;
    println!(
        "{} buildings, tallest {:.1} m, h_min {:.1} m, {} users",
        s.map.buildings().len(),
        s.map.max_height(),
        s.h_min,
        s.users.len()
    );

    let c = s.map.area().center();
    for h in [5.0, 20.0, s.h_min] {
        let uav = c.at(h);
        let los = s.users.iter().filter(|u| s.map.is_los(u.on_ground(), uav)).count();
        let walls: usize = s.users.iter().map(|u| s.map.blockage_count(u.on_ground(), uav)).sum();
        println!("UAV over the center at {h:5.1} m: {los}/{} users in LoS, {walls} wall crossings", s.users.len());
    }

    let back = TerrainMap::from_json(&s.map.to_json())?;
    assert_eq!(back, s.map);
    println!("JSON round trip ok");
    Ok(())
}
