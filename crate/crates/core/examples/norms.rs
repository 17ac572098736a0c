//! Norms of one function across the supported spaces, and the equivalent
//! Bergman–Sobolev norms built from R^β and from derivatives.

use multspec::numerics::ToleranceConfig;
use multspec::spaces::{equivalent_norm_d, equivalent_norm_r, norm, norm_of_symbol, SpaceSpec};
use multspec::symbols::parse_symbol;

fn main() -> multspec::Result<()> {
    let tol = ToleranceConfig::default();
    let u = parse_symbol("1/(z-1.5)")?;
    for space in [
        SpaceSpec::bloch(0.5)?,
        SpaceSpec::growth(0.5)?,
        SpaceSpec::hardy(2.0)?,
        SpaceSpec::hardy(1.0)?,
        SpaceSpec::hardy_sobolev(0.5)?,
        SpaceSpec::bergman_sobolev(2.0, 0.0, 1.0)?,
        SpaceSpec::bergman_sobolev(3.0, 1.0, 1.0)?,
    ] {
        let n = norm_of_symbol(&space, &u, &tol)?;
        println!("{:<48} {:.10} in [{:.10}, {:.10}] via {}", space.to_string(), n.value, n.low, n.high, n.method);
    }
    let space = SpaceSpec::bergman_sobolev(2.0, 0.0, 2.0)?;
    let f = u.to_series(512)?;
    println!(
        "{space}: (I+R)^β {:.8}, R^β {:.8}, derivatives {:.8}",
        norm(&space, &f, &tol)?.value,
        equivalent_norm_r(&space, &f)?,
        equivalent_norm_d(&space, &f)?
    );
    Ok(())
}
