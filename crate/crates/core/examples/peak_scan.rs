//! Peak-function scan: ‖u·g_{ξ,k}‖ decays when u(ξ) = 0, which rules out
//! M_u being Fredholm, and stays bounded below otherwise.

use multspec::multipliers::{peak_refutation_scan, scan_csv};
use multspec::numerics::ToleranceConfig;
use multspec::spaces::SpaceSpec;
use multspec::symbols::parse_symbol;
use multspec::Complex64;

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let grid: Vec<u32> = (3..=10).map(|j| 1 << j).collect();
    let space = SpaceSpec::hardy_sobolev(1.0)?;
    let u = parse_symbol("(1+z)/2")?;
    println!("u = (1+z)/2, xi = -1 (zero of u):");
    print!("{}", scan_csv(&peak_refutation_scan(&u, Complex64::new(-1.0, 0.0), &space, &grid, &tol)?));
    println!("u = (1+z)/2, xi = 1 (|u| = 1 there):");
    print!("{}", scan_csv(&peak_refutation_scan(&u, Complex64::new(1.0, 0.0), &space, &grid, &tol)?));
    Ok(())
}
