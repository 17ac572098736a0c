//! Spectrum of M_u in one variable: the region enclosed by u(∂𝔻), queried
//! by winding number.

use multspec::numerics::ToleranceConfig;
use multspec::spectra::{connectedness_check, membership, spectrum, to_svg, SpectrumOptions};
use multspec::symbols::parse_symbol;
use multspec::Complex64;

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let u = parse_symbol("z^2 + z/2")?;
    let est = spectrum(&u, &SpectrumOptions::default(), &tol)?;
    println!("u = {}", u.render());
    println!("spectral radius {:.12} attained at u({:.6}) = {:.6}", est.radius, est.radius_preimage[0], est.radius_witness);
    println!("boundary band {:.3e}, connected: {}", est.resolution.band, connectedness_check(&est));
    for lambda in [Complex64::new(0.0, 0.0), Complex64::new(-0.25, 0.3), Complex64::new(1.5, 0.0), Complex64::new(2.0, 1.0)] {
        println!("  {lambda:>12} -> {:?}", membership(&est, lambda));
    }
    let path = std::env::temp_dir().join("multspec_spectrum.svg");
    std::fs::write(&path, to_svg(&est)).expect("writable temp dir");
    println!("SVG written to {}", path.display());
    Ok(())
}
