//! Writes the hand-built games and their certificates as files the binary can read,
//! e.g. `stationary-nash solve DIR/tight_3x3.json --init file:DIR/tight_3x3.cert.json`.

use std::fs;
use std::path::PathBuf;

use stationary_nash::generator::{dfm_tight, half_sp, tight_3x3, tight_no_dominated, CanonicalInstance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "canonical".into()));
    fs::create_dir_all(&dir)?;
    let all: [(&str, CanonicalInstance); 4] =
        [("tight_3x3", tight_3x3()), ("tight_no_dominated", tight_no_dominated()), ("dfm_tight", dfm_tight()), ("half_sp", half_sp())];
    for (name, inst) in all {
        let mut cert = serde_json::to_value(inst.input())?;
        cert["rhoStar"] = inst.dual.rho.into();
        fs::write(dir.join(format!("{name}.json")), inst.game.to_json())?;
        fs::write(dir.join(format!("{name}.cert.json")), serde_json::to_string_pretty(&cert)?)?;
        println!("{}", dir.join(name).display());
    }
    Ok(())
}
