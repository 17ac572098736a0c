//! Power-series arithmetic and the radial derivative of a quotient,
//! checked against direct series division.

use multspec::series::{quotient_radial_derivative, PowerSeries};
use multspec::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> multspec::Result<()> {
    let f = PowerSeries::polynomial(vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.0)]);
    let u = PowerSeries::polynomial(vec![c(2.0, 0.0), c(1.0, 0.5)]);
    let points = [c(0.3, 0.1), c(-0.7, 0.2), c(0.0, 0.9)];
    for order in 1..=3 {
        let via_formula = quotient_radial_derivative(&f, &u, order, &points, 1e-9)?;
        let direct = f.divide(&u, 300)?.radial_derivative(order as f64);
        for (z, v) in points.iter().zip(&via_formula) {
            println!("N={order} z={z:.2}: {v:.12} (direct {:.12})", direct.evaluate(*z));
        }
    }
    match quotient_radial_derivative(&f, &u, 0, &points, 1e-9) {
        Err(e) => println!("N=0: {e}"),
        Ok(_) => println!("N=0 unexpectedly accepted"),
    }
    let g = (&f * &PowerSeries::polynomial(vec![c(-0.4, 0.0), c(1.0, 0.0)])).divide_by_root(c(0.4, 0.0), 1e-12)?;
    println!("(f·(z−0.4))/(z−0.4) = {:?}", g.coeffs());
    Ok(())
}
