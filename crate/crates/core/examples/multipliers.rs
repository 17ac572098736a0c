//! Multiplier membership across the parameter regimes, with the criterion
//! profile sampled on circles of radius 1 − 2^{−j}.

use multspec::multipliers::{is_invertible, is_multiplier, multiplier_regime};
use multspec::numerics::ToleranceConfig;
use multspec::spaces::SpaceSpec;
use multspec::symbols::parse_symbol;

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let u = parse_symbol("B(0.3)*(z+2)")?;
    let spaces = [
        SpaceSpec::bloch(0.5)?,
        SpaceSpec::bloch(1.0)?,
        SpaceSpec::bloch(2.0)?,
        SpaceSpec::hardy(2.0)?,
        SpaceSpec::bergman_sobolev(2.0, 0.0, 0.75)?,
        SpaceSpec::bergman_sobolev(2.0, 0.0, 2.0)?,
        SpaceSpec::hardy_sobolev(1.0)?,
    ];
    for space in spaces {
        let r = is_multiplier(&space, &u, &tol)?;
        println!("{:<48} {:<20} {:?} (slope {:+.3})", space.to_string(), multiplier_regime(&space).name(), r.verdict, r.growth_slope);
    }
    let inv = is_invertible(&u, &tol)?;
    println!("M_u invertible: {} (inf |u| = {:.6})", inv.invertible, inv.inf_modulus);
    Ok(())
}
