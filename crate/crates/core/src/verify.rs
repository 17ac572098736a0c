//! Invariant suites behind `multspec verify`. Every random draw comes from
//! a ChaCha8 stream seeded with [`SEED`], so reruns are identical.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multipliers::is_invertible;
use crate::numerics::{fit_loglog_slope, gamma_ratio_check, ToleranceConfig};
use crate::peaks::{chu_vandermonde_check, parseval_check, peak_norm_exponent, predicted_norm_exponent, uniform_decay_check, PeakFamily};
use crate::series::{quotient_radial_derivative, PowerSeries};
use crate::spaces::SpaceSpec;
use crate::spectra::{essential_spectrum, membership, spectral_radius_report, spectrum, Membership, SpectrumOptions};
use crate::symbols::{Node, Symbol};

pub const SEED: u64 = 0x6d75_6c74_7370_6563;

pub const SUITES: [&str; 7] = ["stirling", "parseval", "chu", "exponents", "decay", "quotient", "spectra"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub case: String,
    pub value: f64,
    /// "<=" or ">="
    pub comparison: &'static str,
    pub threshold: f64,
    pub pass: bool,
}

impl Row {
    fn at_most(case: impl Into<String>, value: f64, threshold: f64) -> Self {
        Row { case: case.into(), value, comparison: "<=", threshold, pass: value <= threshold }
    }

    fn at_least(case: impl Into<String>, value: f64, threshold: f64) -> Self {
        Row { case: case.into(), value, comparison: ">=", threshold, pass: value >= threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<Row>,
    pub passed: bool,
}

/// Runs one named suite, or every suite for "all".
pub fn run_suite(name: &str, tol: &ToleranceConfig) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, tol)).collect();
    }
    Ok(vec![run_one(name, tol)?])
}

fn run_one(name: &str, tol: &ToleranceConfig) -> Result<SuiteReport> {
    let rows = match name {
        "stirling" => stirling()?,
        "parseval" => parseval()?,
        "chu" => chu()?,
        "exponents" => exponents(tol)?,
        "decay" => decay(tol)?,
        "quotient" => quotient(tol)?,
        "spectra" => spectra(tol)?,
        other => return Err(Error::Argument(format!("unknown suite '{other}'; expected one of {SUITES:?} or all"))),
    };
    let passed = rows.iter().all(|r| r.pass);
    Ok(SuiteReport { suite: name.to_string(), rows, passed })
}

/// Fixed-width table, one line per row.
pub fn summary_table(reports: &[SuiteReport]) -> String {
    let mut out = format!("{:<10} {:<62} {:>24} {:>2} {:>10}  {}\n", "suite", "case", "value", "", "threshold", "result");
    for rep in reports {
        for r in &rep.rows {
            out.push_str(&format!(
                "{:<10} {:<62} {:>24.16e} {:>2} {:>10.3e}  {}\n",
                rep.suite,
                r.case,
                r.value,
                r.comparison,
                r.threshold,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
    }
    out
}

fn stirling() -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (l, m) in [(0.5, 0.5), (2.0, 1.0), (3.0, 0.0)] {
        let at = |k: f64| gamma_ratio_check(k, l, m);
        let (e100, e1000, e1600) = (at(100.0)?, at(1000.0)?, at(1600.0)?);
        rows.push(Row::at_most(format!("ratio1 K=1000 L={l} M={m}"), e1000.ratio1_error, 1e-2));
        rows.push(Row::at_most(format!("ratio2 K=1000 L={l} M={m}"), e1000.ratio2_error, 1e-2));
        // ratio1 is exact when L = 0 or 1 and never is here
        rows.push(Row::at_least(format!("ratio1 decay 100->1600 L={l} M={m}"), e100.ratio1_error / e1600.ratio1_error, 2.0));
        rows.push(Row::at_least(format!("ratio2 decay 100->1600 L={l} M={m}"), e100.ratio2_error / e1600.ratio2_error, 2.0));
    }
    Ok(rows)
}

fn parseval() -> Result<Vec<Row>> {
    [0.0, 0.5, 0.9]
        .iter()
        .map(|&r| {
            let worst = (0..=30).map(|k| parseval_check(k, r).map(|c| c.rel_diff())).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
            Ok(Row::at_most(format!("max over K<=30, r={r}"), worst, 1e-10))
        })
        .collect()
}

fn chu() -> Result<Vec<Row>> {
    [-0.5, 0.0, 1.7]
        .iter()
        .map(|&g| {
            let worst = (0..=40).map(|k| chu_vandermonde_check(k, g).map(|c| c.rel_diff())).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
            Ok(Row::at_most(format!("max over K<=40, gamma={g}"), worst, 1e-11))
        })
        .collect()
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn exponents(tol: &ToleranceConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let hardy_grid: Vec<u32> = (6..=12).map(|j| 1 << j).collect();
    for beta in [0.75, 1.0, 2.0] {
        let fit = peak_norm_exponent(&PeakFamily::new(one(), hardy_grid.clone(), SpaceSpec::hardy_sobolev(beta)?)?, tol)?;
        rows.push(Row::at_most(format!("H2_beta beta={beta} squared slope"), (2.0 * fit.fitted_slope - (2.0 * beta - 0.5)).abs(), 0.05));
    }
    let grid: Vec<u32> = (3..=10).map(|j| 1 << j).collect();
    let bs = SpaceSpec::bergman_sobolev(2.0, 0.0, 2.0)?;
    let fit = peak_norm_exponent(&PeakFamily::new(one(), grid.clone(), bs)?, tol)?;
    rows.push(Row::at_most("A^2_{0,2} squared slope", (2.0 * fit.fitted_slope - 2.5).abs(), 0.1));
    for alpha in [0.25, 0.5, 1.0] {
        let fit = peak_norm_exponent(&PeakFamily::new(one(), grid.clone(), SpaceSpec::bloch(alpha)?)?, tol)?;
        rows.push(Row::at_most(format!("Bloch alpha={alpha} slope"), (fit.fitted_slope - (1.0 - alpha)).abs(), tol.slope_fit_tol));
    }
    // equivalent norms force equal growth exponents
    let original = SpaceSpec::bergman_sobolev(2.0, 1.0, 2.0)?;
    let shifted = original.shift_parameters(1.5)?;
    let a = peak_norm_exponent(&PeakFamily::new(one(), grid.clone(), original)?, tol)?;
    let b = peak_norm_exponent(&PeakFamily::new(one(), grid, shifted)?, tol)?;
    rows.push(Row::at_most(format!("{original} vs {shifted}"), (a.fitted_slope - b.fitted_slope).abs(), 2.0 * tol.slope_fit_tol));
    rows.push(Row::at_most("predicted exponent invariant under shift", (predicted_norm_exponent(&original)? - predicted_norm_exponent(&shifted)?).abs(), 1e-12));
    Ok(rows)
}

fn decay(tol: &ToleranceConfig) -> Result<Vec<Row>> {
    let grid: Vec<u32> = (3..=10).map(|j| 1 << j).collect();
    let mut rows = Vec::new();
    for space in [SpaceSpec::hardy_sobolev(1.0)?, SpaceSpec::bloch(0.5)?] {
        let family = PeakFamily::new(Complex64::new(-1.0, 0.0), grid.clone(), space)?;
        for m in [0, 1] {
            let sups = uniform_decay_check(&family, 0.5, m, tol)?;
            let ratio = sups[sups.len() - 1].1 / sups[0].1;
            rows.push(Row::at_most(format!("{space} R^{m} sup on A_0.5, last/first"), ratio, 0.1));
        }
    }
    Ok(rows)
}

fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

/// Random polynomial pair (f, u) with u zero-free on a neighbourhood of
/// the closed disk and |u| ≥ 0.3 there.
pub fn random_quotient_pair(rng: &mut ChaCha8Rng) -> (PowerSeries, PowerSeries) {
    let f: Vec<Complex64> = (0..rng.gen_range(1..=6)).map(|_| random_complex(rng, 1.0)).collect();
    loop {
        let roots: Vec<Complex64> = (0..rng.gen_range(1..=3)).map(|_| Complex64::from_polar(rng.gen_range(1.6..3.0), rng.gen_range(0.0..2.0 * PI))).collect();
        let u = from_roots(&roots, Complex64::new(1.0, 0.0));
        let inf = (0..512).map(|j| u.evaluate(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 512.0)).norm()).fold(f64::INFINITY, f64::min);
        if inf >= 0.3 {
            return (PowerSeries::polynomial(f), u);
        }
    }
}

fn from_roots(roots: &[Complex64], lead: Complex64) -> PowerSeries {
    roots.iter().fold(PowerSeries::polynomial(vec![lead]), |acc, &a| &acc * &PowerSeries::polynomial(vec![-a, Complex64::new(1.0, 0.0)]))
}

/// Max relative error of the quotient expansion against R^N of the
/// divided series, over `cases` random (f, u, N ≤ 4) and 100 points each.
pub fn quotient_formula_error(cases: usize, tol: &ToleranceConfig) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let (f, u) = random_quotient_pair(&mut rng);
        let order = rng.gen_range(1..=4u32);
        let points: Vec<Complex64> = (0..100).map(|_| random_complex(&mut rng, 0.9)).collect();
        let got = quotient_radial_derivative(&f, &u, order, &points, tol.rel_tol)?;
        // roots have modulus ≥ 1.6 and points ≤ 0.9, so 400 terms leave < 1e-90
        let oracle = f.divide(&u, 400)?.radial_derivative(order as f64);
        for (z, g) in points.iter().zip(&got) {
            let want = oracle.evaluate(*z);
            worst = worst.max((g - want).norm() / want.norm().max(1e-300));
        }
    }
    Ok(worst)
}

fn quotient(tol: &ToleranceConfig) -> Result<Vec<Row>> {
    let (f, u) = random_quotient_pair(&mut ChaCha8Rng::seed_from_u64(SEED));
    let rejected = matches!(quotient_radial_derivative(&f, &u, 0, &[Complex64::new(0.1, 0.0)], tol.rel_tol), Err(Error::Argument(_)));
    Ok(vec![
        Row::at_most("max rel error, 10 pairs x 100 points", quotient_formula_error(10, tol)?, 1e-9),
        Row::at_least("N = 0 rejected", if rejected { 1.0 } else { 0.0 }, 1.0),
    ])
}

/// Random rational symbol whose numerator zeros stay at least 0.15 away
/// from the unit circle and whose poles lie in 1.3 ≤ |z| ≤ 3.
pub fn random_rational_symbol(rng: &mut ChaCha8Rng) -> Symbol {
    let zeros: Vec<Complex64> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let r = if rng.gen_bool(0.5) { rng.gen_range(0.0..0.85) } else { rng.gen_range(1.15..2.5) };
            Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let poles: Vec<Complex64> = (0..rng.gen_range(0..=2)).map(|_| Complex64::from_polar(rng.gen_range(1.3..3.0), rng.gen_range(0.0..2.0 * PI))).collect();
    let lead = random_complex(rng, 2.0) + Complex64::new(0.5, 0.0);
    let num = from_roots(&zeros, lead).coeffs().to_vec();
    let den = from_roots(&poles, Complex64::new(1.0, 0.0)).coeffs().to_vec();
    Symbol::new(Node::Quotient(Box::new(Node::Poly(num)), Box::new(Node::Poly(den))), 1).expect("poles lie outside the closed disk")
}

/// Number of disagreements between is_invertible(u) and 0 ∉ σ(M_u) over
/// `count` random rational symbols.
pub fn invertibility_disagreements(count: usize, tol: &ToleranceConfig) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    for _ in 0..count {
        let u = random_rational_symbol(&mut rng);
        let inv = is_invertible(&u, tol)?.invertible;
        let outside = membership(&spectrum(&u, &SpectrumOptions::default(), tol)?, Complex64::new(0.0, 0.0)) == Membership::Outside;
        bad += usize::from(inv != outside);
    }
    Ok(bad)
}

/// Grid points where λ ∈ σ_e but λ ∉ σ.
pub fn containment_violations(u: &Symbol, space: &SpaceSpec, tol: &ToleranceConfig) -> Result<usize> {
    let opts = SpectrumOptions::default();
    let ess = essential_spectrum(u, space, &opts, tol)?;
    let spec = spectrum(u, &opts, tol)?;
    let r = spec.radius.max(1e-3) * 1.2;
    let mut bad = 0;
    for i in 0..41 {
        for j in 0..41 {
            let lambda = Complex64::new(-r + 2.0 * r * i as f64 / 40.0, -r + 2.0 * r * j as f64 / 40.0);
            if membership(&ess, lambda) == Membership::Inside && membership(&spec, lambda) == Membership::Outside {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

fn spectra(tol: &ToleranceConfig) -> Result<Vec<Row>> {
    let mut rows = vec![Row::at_most("invertibility vs spectrum, 30 symbols", invertibility_disagreements(30, tol)? as f64, 0.0)];
    let bloch = SpaceSpec::bloch(0.5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut containment = 0;
    let mut spread: f64 = 0.0;
    for _ in 0..5 {
        let u = random_rational_symbol(&mut rng);
        containment += containment_violations(&u, &bloch, tol)?;
        let r = spectral_radius_report(&u, &bloch, tol)?;
        let vals = [r.sup_spectrum, r.sup_essential, r.sup_norm_u];
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        spread = spread.max((hi - lo) / hi);
    }
    rows.push(Row::at_most("essential inside spectrum, 5 symbols x 41^2", containment as f64, 0.0));
    rows.push(Row::at_most("radius coincidence, relative spread", spread, 10.0 * tol.rel_tol));
    let slope = fit_loglog_slope(&[(1.0, 1.0), (2.0, 4.0), (4.0, 16.0)])?.slope;
    rows.push(Row::at_most("slope fit of x^2", (slope - 2.0).abs(), 1e-12));
    Ok(rows)
}
