//! Samples generator inputs until one admits a tight game, then verifies it.

use stationary_nash::generator::{generate_tight, sample_inputs, verify_tight, Generated, GeneratorOptions, Restriction};
use stationary_nash::harness::stream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = stream(7, &[]);
    let opts = GeneratorOptions { per_pair: 3, first_only: true, ..Default::default() };
    let mut attempts = 0;
    let instances = loop {
        attempts += 1;
        let input = sample_inputs(4, 4, Restriction::Disjoint, &mut rng)?;
        if let Generated::Instances(v) = generate_tight(&input, &opts, &mut rng)? {
            break v;
        }
    };
    println!("feasible input found after {attempts} attempts");
    for inst in &instances {
        let checks = verify_tight(&inst.game, &inst.input, 200);
        println!("(k, l) = ({}, {}): passed {} f = {:.9} boundary min = {:.9}", inst.k, inst.l, checks.passed, checks.f, checks.boundary_min_value);
    }
    println!("{}", instances[0].game.to_json());
    println!("{}", serde_json::to_string_pretty(&instances[0].certificate())?);
    Ok(())
}
