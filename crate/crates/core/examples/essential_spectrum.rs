//! Essential spectrum on different spaces: the boundary curve where a
//! characterization applies, the annulus-intersection grid for H^∞-type
//! spaces, and an explicit refusal in the uncovered parameter band.

use multspec::numerics::ToleranceConfig;
use multspec::spaces::SpaceSpec;
use multspec::spectra::{essential_spectrum, membership, SpectrumOptions};
use multspec::symbols::parse_symbol;
use multspec::{Complex64, Error};

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let u = parse_symbol("B(0.5)*B(-0.5)")?;
    let origin = Complex64::new(0.0, 0.0);

    let curve = essential_spectrum(&u, &SpaceSpec::bloch(0.5)?, &SpectrumOptions::default(), &tol)?;
    println!("Bloch(0.5): {} boundary points, theory {}, 0 is {:?}", curve.curves[0].len(), curve.theory, membership(&curve, origin));

    let annulus = SpectrumOptions { annulus: true, occupancy_cells: 128, ..SpectrumOptions::default() };
    let grid = essential_spectrum(&u, &SpaceSpec::growth(0.5)?, &annulus, &tol)?;
    let cell = grid.resolution.grid.map(|g| g.cell).unwrap_or(0.0);
    println!("Growth(0.5), annulus mode: {} occupied cells of width {cell:.4}", grid.cloud.len());

    match essential_spectrum(&u, &SpaceSpec::bergman_sobolev(2.0, 0.0, 0.75)?, &SpectrumOptions::default(), &tol) {
        Err(Error::OutsideHypotheses { theorem }) => println!("A^2_(0,0.75): {theorem}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
