//! Symbols on the ball 𝔹ₙ: invertibility, sup norm, and the spectrum,
//! which coincides with the essential spectrum.

use multspec::multipliers::{fredholm_analysis, is_invertible};
use multspec::numerics::ToleranceConfig;
use multspec::spaces::SpaceSpec;
use multspec::spectra::{essential_spectrum, membership, spectrum, SpectrumOptions};
use multspec::symbols::Symbol;
use multspec::Complex64;

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let u = Symbol::parse_in("z1*z2 + z1/2", 2)?;
    let sup = u.sup_norm(&tol)?;
    println!("‖u‖∞ ≈ {:.6} at {:?} (grid spacing {:.3e})", sup.value, sup.witness, sup.resolution);
    let spec = spectrum(&u, &SpectrumOptions::default(), &tol)?;
    let space = SpaceSpec::bloch(0.5)?.with_dimension(2)?;
    let ess = essential_spectrum(&u, &space, &SpectrumOptions::default(), &tol)?;
    println!("σ and σ_e share {} of {} occupied cells", spec.cloud.iter().filter(|p| ess.cloud.contains(p)).count(), spec.cloud.len());
    for lambda in [Complex64::new(0.1, 0.0), Complex64::new(2.0, 0.0)] {
        let inv = is_invertible(&u.shifted(lambda), &tol)?;
        let fred = fredholm_analysis(&u, lambda, &space, &tol)?;
        println!("λ = {lambda}: {:?}, invertible {}, Fredholm {} index {:?}", membership(&spec, lambda), inv.invertible, fred.fredholm, fred.index);
    }
    Ok(())
}
