//! Fits the three LoS-probability families to measured samples.
//!
//! With no argument the bundled `data/los_samples.csv` is used; pass `fly` to
//! sample a freshly generated terrain instead.

use std::fs::File;

use uav_terrain::losmodel::{fit, mse, read_samples_csv, FitOptions, LosFamily, EMPIRICAL_SUBURBAN};
use uav_terrain::sim::{generate_scenario, sample_terrain, ScenarioConfig};

fn main() -> uav_terrain::Result<()> {
    let samples = if std::env::args().nth(1).as_deref() == Some("fly") {
        let s = generate_scenario(&ScenarioConfig::default(), 3)?;
        sample_terrain(&s.map, s.h_min, 200, 3)?
    } else {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/los_samples.csv");
        read_samples_csv(File::open(path).map_err(|e| uav_terrain::Error::io(path, e))?)?
    };
    for s in &samples {
        println!("{:5.1} deg  {:.3}", s.theta, s.t);
    }
    println!("published suburban fit: mse {:.5}", mse(&EMPIRICAL_SUBURBAN, &samples));
    for family in [LosFamily::Sigmoid, LosFamily::Tanh, LosFamily::Relu] {
        let r = fit(&samples, family, &FitOptions::regularized(family))?;
        println!(
            "{family:?}: a {:.4} b {:.4} mse {:.5} ({} iterations)",
            r.model.a, r.model.b, r.mse, r.iterations
        );
    }
    Ok(())
}
