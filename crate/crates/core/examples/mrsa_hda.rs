//! The two search pipelines on one scenario: MRSA starts from a BIA
//! placement, HDA from SCPA, and both search around the hard-to-serve users.

use uav_terrain::channel::ChannelParams;
use uav_terrain::classify::UserClass;
use uav_terrain::deploy::{hda, mrsa, BiaOptions, DensityKind, MassDensity, PipelineOptions, ScpaOptions};
use uav_terrain::sim::{evaluate_deployment, fit_round_model, generate_scenario, BlockageMode, ScenarioConfig};

fn main() -> uav_terrain::Result<()> {
    let p = ChannelParams::default();
    let s = generate_scenario(&ScenarioConfig::default(), 21)?;
    let model = fit_round_model(&s, 100, 21)?;
    println!("fitted LoS model a {:.3} b {:.3}", model.a, model.b);

    let md = MassDensity::with_defaults(DensityKind::Triangular, s.h_min)?;
    let opts = PipelineOptions::new(s.h_min);
    let runs = [
        mrsa(&s.map, &s.users, &p, &md, &BiaOptions::default(), &opts)?,
        hda(&s.map, &s.users, &p, &model, &ScpaOptions::new(s.h_min, 120.0), &opts)?,
    ];
    for r in &runs {
        let c2 = r.classes.iter().filter(|c| **c == UserClass::C2).count();
        let cov = evaluate_deployment(&s, &p, &[r.uav_position], BlockageMode::Basic)?;
        let outcome = r.trajectory.as_ref().map(|t| format!("{:?}", t.outcome));
        println!(
            "{}: |C2| {c2}, coverage {cov:.3}, flew {:.1} m, {}",
            r.algorithm,
            r.search_length(),
            outcome.unwrap_or_else(|| "no search".into())
        );
    }
    Ok(())
}
