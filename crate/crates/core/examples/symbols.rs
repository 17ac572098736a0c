//! Parsing, evaluation and root location for symbols.

use multspec::numerics::ToleranceConfig;
use multspec::symbols::parse_symbol;
use multspec::{Complex64, Error};

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let u = parse_symbol("(z - 0.5i)^2 * B(0.25) / (z + 3)")?;
    println!("u = {}", u.render());
    let z = Complex64::new(0.2, -0.3);
    let (v, d) = u.value_and_derivative(z);
    println!("u({z}) = {v:.12}, u'({z}) = {d:.12}");
    let zeros = u.zeros_in_disk(Complex64::new(0.0, 0.0), &tol)?;
    for r in &zeros.zeros {
        println!("zero at {:.10} with multiplicity {}", r.location, r.multiplicity);
    }
    println!("winding of u(∂𝔻) about 0: {}", zeros.winding);
    let m = u.boundary_min_modulus(Complex64::new(0.0, 0.0), &tol)?;
    println!("min |u| on the circle {:.10} (certified ≥ {:.10})", m.min, m.lower_bound);
    for bad in ["z +* 2", "1/(z - 0.5)", "B(1.5)"] {
        match parse_symbol(bad) {
            Err(e @ (Error::Syntax { .. } | Error::DenominatorVanishes { .. } | Error::Domain(_))) => println!("{bad:>12}: {e}"),
            other => println!("{bad:>12}: {other:?}"),
        }
    }
    Ok(())
}
