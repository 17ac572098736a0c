//! Fredholm analysis of M_u − λ along a ray: the index is minus the number
//! of zeros of u − λ in the disk and jumps where the ray crosses u(∂𝔻).

use multspec::multipliers::fredholm_analysis;
use multspec::numerics::ToleranceConfig;
use multspec::spaces::SpaceSpec;
use multspec::symbols::parse_symbol;
use multspec::Complex64;

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let space = SpaceSpec::bloch(0.5)?;
    let u = parse_symbol("(z-1/2)*(z-2)")?;
    println!("{:>6} {:>9} {:>6} {:>10} {:>10}", "λ", "fredholm", "index", "δ", "annulus r");
    for k in 0..=12 {
        let lambda = Complex64::new(0.5 * k as f64, 0.0);
        let r = fredholm_analysis(&u, lambda, &space, &tol)?;
        let index = r.index.map_or("-".into(), |i| i.to_string());
        let annulus = r.annulus_radius.map_or("-".into(), |a| format!("{a:.4}"));
        println!("{:>6.2} {:>9} {:>6} {:>10.3e} {:>10}", lambda.re, r.fredholm, index, r.boundary_delta, annulus);
    }
    let r = fredholm_analysis(&parse_symbol("z^3")?, Complex64::new(0.0, 0.0), &space, &tol)?;
    println!("z^3 at 0: index {:?}, cokernel dimension {:?}", r.index, r.cokernel_dimension);
    Ok(())
}
