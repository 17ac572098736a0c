//! Growth of peak-function norms: fitted log–log exponents against the
//! predicted ones, and the exact p = 2 constant.

use multspec::numerics::{gamma_ratio_check, ToleranceConfig};
use multspec::peaks::{default_k_grid, exact_asymptote_check, exponent_csv, peak_norm_exponent, PeakFamily};
use multspec::spaces::SpaceSpec;
use multspec::Complex64;

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let one = Complex64::new(1.0, 0.0);
    for space in [SpaceSpec::hardy_sobolev(1.0)?, SpaceSpec::bloch(0.25)?, SpaceSpec::bergman_sobolev(2.0, 0.0, 2.0)?] {
        let grid = if matches!(space.space, multspec::spaces::Space::BergmanSobolev { .. }) { (3..=10).map(|j| 1 << j).collect() } else { default_k_grid() };
        let fit = peak_norm_exponent(&PeakFamily::new(one, grid, space)?, &tol)?;
        println!("{space}: fitted {:.4}, predicted {:.4}", fit.fitted_slope, fit.predicted_slope);
    }
    let fit = peak_norm_exponent(&PeakFamily::new(one, default_k_grid(), SpaceSpec::hardy_sobolev(2.0)?)?, &tol)?;
    print!("{}", exponent_csv(&fit));
    for j in [0, 1] {
        let check = exact_asymptote_check(2, 0.0, j, &[256, 1024, 4096])?;
        println!("‖D^{j} f_k‖² / asymptote: {:?}", check.ratios);
    }
    let e = gamma_ratio_check(1000.0, 2.0, 1.0)?;
    println!("gamma ratios at K=1000: {:.3e}, {:.3e}", e.ratio1_error, e.ratio2_error);
    Ok(())
}
