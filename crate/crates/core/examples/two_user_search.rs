//! Rotational search for a position that sees two users over a wall.

use uav_terrain::channel::ChannelParams;
use uav_terrain::deploy::{two_user_search, SearchOptions};
use uav_terrain::terrain::{Area, Building, Point2, TerrainMap};

fn main() -> uav_terrain::Result<()> {
    let map = TerrainMap::new(
        Area::square(200.0),
        vec![Building::rect(95.0, 60.0, 105.0, 140.0, 18.0)],
    )?;
    let u1 = Point2::new(80.0, 100.0);
    let u2 = Point2::new(125.0, 100.0);
    let r = two_user_search(&map, &ChannelParams::default(), u1, u2, &SearchOptions::new(20.0))?;
    let t = r.trajectory.as_ref().expect("search records its path");
    let p = r.uav_position;
    println!("{:?} after {:.1} m of flight", t.outcome, t.total_length);
    println!("UAV at ({:.2}, {:.2}, {:.2})", p.x, p.y, p.z);
    for (name, u) in [("u1", u1), ("u2", u2)] {
        println!("{name} in LoS: {}", map.is_los(u.on_ground(), p));
    }
    if let Some(g) = r.gamma_achieved {
        println!("worst average SNR {g:.3e}");
    }
    Ok(())
}
