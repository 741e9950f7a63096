//! Coverage probability versus distance under the default channel, for pure
//! LoS, pure NLoS and the elevation-averaged mix.

use uav_terrain::channel::{average_snr, conditional_coverage, coverage_probability, linear_to_db, ChannelParams, LinkState};
use uav_terrain::losmodel::EMPIRICAL_SUBURBAN;

fn main() -> uav_terrain::Result<()> {
    let p = ChannelParams::default();
    let h = 20.0;
    println!("{:>8} {:>10} {:>8} {:>8} {:>8}", "r (m)", "SNR LoS dB", "P LoS", "P NLoS", "P mix");
    for r in [25.0, 50.0, 100.0, 125.0, 200.0, 400.0, 1000.0, 3000.0, 6000.0] {
        println!(
            "{r:8.0} {:10.1} {:8.4} {:8.4} {:8.4}",
            linear_to_db(average_snr(&p, LinkState::Los, r)?),
            conditional_coverage(&p, LinkState::Los, r)?,
            conditional_coverage(&p, LinkState::Nlos, r)?,
            coverage_probability(&p, &EMPIRICAL_SUBURBAN, h, r)?,
        );
    }
    Ok(())
}
