//! Multiplier membership, invertibility and Fredholm analysis of M_u, and
//! the peak-function scan that detects non-Fredholm behaviour at boundary
//! zeros of u.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{fit_loglog_slope, ring_values, winding_number, ToleranceConfig, Winding};
use crate::peaks::{check_unimodular, peak_norm};
use crate::roots::clustered_roots;
use crate::spaces::{norm, norm_of_symbol, sup_grid_radii, symbol_truncation, Space, SpaceSpec, SUP_GRID_ANGLES};
use crate::symbols::{sphere_direction, sphere_grid, Symbol, ZeroSet};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

/// Which description of the multiplier algebra M(X) applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Bloch-type, α < 1: M = 𝓑_α ∩ H^∞.
    BlochLittleAlpha,
    /// Bloch, α = 1: bounded u with sup |u′|(1−|z|²) log(e/(1−|z|²)) < ∞.
    BlochLogWeight,
    /// M = H^∞.
    BoundedFunctions,
    /// The space is an algebra and M = X.
    SobolevAlgebra,
    /// (1+α)/p ≤ β ≤ (2+α)/p: no description available.
    UncoveredBand,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::BlochLittleAlpha => "bloch_little_alpha",
            Regime::BlochLogWeight => "bloch_log_weight",
            Regime::BoundedFunctions => "bounded_functions",
            Regime::SobolevAlgebra => "sobolev_algebra",
            Regime::UncoveredBand => "uncovered_band",
        }
    }
}

/// The multiplier regime, a function of the parameters alone.
pub fn multiplier_regime(space: &SpaceSpec) -> Regime {
    match space.space {
        Space::Bloch { alpha } if alpha < 1.0 => Regime::BlochLittleAlpha,
        Space::Bloch { alpha: 1.0 } => Regime::BlochLogWeight,
        Space::Bloch { .. } | Space::Growth { .. } | Space::Hardy { .. } => Regime::BoundedFunctions,
        Space::BergmanSobolev { .. } | Space::HardySobolev { .. } => {
            let (p, alpha, beta) = space.sobolev_parameters().expect("Sobolev scale");
            let lower = (1.0 + alpha) / p;
            if beta < lower || (p == 2.0 && beta <= lower) {
                Regime::BoundedFunctions
            } else if beta > (2.0 + alpha) / p {
                Regime::SobolevAlgebra
            } else {
                Regime::UncoveredBand
            }
        }
    }
}

/// How much of the Fredholm criterion is established for a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FredholmTheory {
    /// Fredholm ⟺ |u − λ| bounded below near the boundary; σ_e = u(∂𝔻).
    Characterized(&'static str),
    /// Only the sufficient direction is available.
    SufficiencyOnly,
}

impl FredholmTheory {
    pub fn label(self) -> &'static str {
        match self {
            FredholmTheory::Characterized(name) => name,
            FredholmTheory::SufficiencyOnly => "sufficiency_only",
        }
    }
}

pub fn fredholm_theory(space: &SpaceSpec) -> FredholmTheory {
    if space.n > 1 {
        return FredholmTheory::Characterized("several_variables");
    }
    match (space.space, multiplier_regime(space)) {
        (Space::Hardy { p }, _) if p <= 1.0 => FredholmTheory::SufficiencyOnly,
        (_, Regime::BoundedFunctions) => FredholmTheory::Characterized("bounded_multipliers"),
        (Space::Bloch { .. }, _) => FredholmTheory::Characterized("bloch_disk_algebra"),
        (Space::BergmanSobolev { p, .. }, Regime::SobolevAlgebra) if p > 1.0 => {
            FredholmTheory::Characterized("sobolev_disk_algebra")
        }
        (Space::HardySobolev { .. }, Regime::SobolevAlgebra) => FredholmTheory::Characterized("sobolev_disk_algebra"),
        _ => FredholmTheory::SufficiencyOnly,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierReport {
    pub verdict: Verdict,
    pub criterion: String,
    /// (radius, criterion quantity on that circle)
    pub witnesses: Vec<(f64, f64)>,
    /// log–log slope of the criterion quantity against 1/(1 − r)
    pub growth_slope: f64,
    /// ‖u‖_∞
    pub sup_norm: f64,
}

fn ring_max(f: &(dyn Fn(Complex64) -> f64 + Sync), r: f64) -> f64 {
    (0..SUP_GRID_ANGLES)
        .into_par_iter()
        .map(|j| f(Complex64::from_polar(r, 2.0 * PI * j as f64 / SUP_GRID_ANGLES as f64)))
        .reduce(|| 0.0, f64::max)
}

fn ring_min(f: &(dyn Fn(Complex64) -> f64 + Sync), r: f64) -> f64 {
    (0..SUP_GRID_ANGLES)
        .into_par_iter()
        .map(|j| f(Complex64::from_polar(r, 2.0 * PI * j as f64 / SUP_GRID_ANGLES as f64)))
        .reduce(|| f64::INFINITY, f64::min)
}

/// Yes when the quantity settles over the last four radii (non-increasing
/// or with shrinking increments), no when it grows with slope above 0.1.
fn profile_verdict(profile: &[(f64, f64)]) -> (Verdict, f64) {
    let interior: Vec<(f64, f64)> = profile.iter().copied().filter(|&(r, _)| r > 0.0).collect();
    let tail = &interior[interior.len().saturating_sub(6)..];
    let positive: Vec<(f64, f64)> = tail.iter().filter(|p| p.1 > 0.0).map(|&(r, q)| (1.0 / (1.0 - r), q)).collect();
    let slope = if positive.len() >= 3 { fit_loglog_slope(&positive).map(|f| f.slope).unwrap_or(0.0) } else { 0.0 };
    let last: Vec<f64> = interior[interior.len().saturating_sub(4)..].iter().map(|p| p.1).collect();
    let scale = last.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let non_increasing = last.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-300);
    let steps: Vec<f64> = last.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let settling = steps.windows(2).all(|d| d[1] <= 0.9 * d[0] + 1e-14 * scale);
    let verdict = if non_increasing || settling {
        Verdict::Yes
    } else if slope > 0.1 {
        Verdict::No
    } else {
        Verdict::Indeterminate
    };
    (verdict, slope)
}

fn worst(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
        (Verdict::Indeterminate, _) | (_, Verdict::Indeterminate) => Verdict::Indeterminate,
        _ => Verdict::Yes,
    }
}

/// Classifies u as a multiplier of `space` through the regime's criterion
/// quantity sampled on circles of radius 1 − 2^{−j}.
pub fn is_multiplier(space: &SpaceSpec, u: &Symbol, tol: &ToleranceConfig) -> Result<MultiplierReport> {
    if u.dim() != 1 || space.n != 1 {
        return Err(Error::Argument("multiplier criteria are implemented for one variable".into()));
    }
    let regime = multiplier_regime(space);
    let sup_norm = u.boundary_max_modulus(tol)?.max;
    let radii = sup_grid_radii(tol.boundary_refine_depth);
    let profile_of = |q: &(dyn Fn(f64) -> f64 + Sync)| -> Vec<(f64, f64)> { radii.iter().map(|&r| (r, q(r))).collect() };
    let modulus = |r: f64| ring_max(&|z| u.value(z).norm(), r);
    let bounded = profile_of(&modulus);

    let (verdict, witnesses, growth_slope) = match regime {
        Regime::UncoveredBand => (Verdict::Indeterminate, Vec::new(), 0.0),
        Regime::BoundedFunctions => {
            let (v, s) = profile_verdict(&bounded);
            (v, bounded, s)
        }
        Regime::BlochLittleAlpha | Regime::BlochLogWeight => {
            let Space::Bloch { alpha } = space.space else { unreachable!() };
            let weight = move |r: f64| {
                let x = 1.0 - r * r;
                if regime == Regime::BlochLogWeight {
                    x * (1.0 - x.ln())
                } else {
                    x.powf(alpha)
                }
            };
            let q = |r: f64| weight(r) * ring_max(&|z| u.value_and_derivative(z).1.norm(), r);
            let profile = profile_of(&q);
            let (v, s) = profile_verdict(&profile);
            (worst(v, profile_verdict(&bounded).0), profile, s)
        }
        Regime::SobolevAlgebra => {
            // norms of the dilations u_r(z) = u(rz) must converge
            let series = u.to_series(symbol_truncation(u)?)?;
            let q = |r: f64| -> Result<f64> {
                let mut rk = 1.0;
                let dilated: Vec<Complex64> = series
                    .coeffs()
                    .iter()
                    .map(|a| {
                        let v = a * rk;
                        rk *= r;
                        v
                    })
                    .collect();
                Ok(norm(space, &crate::series::PowerSeries::polynomial(dilated), tol)?.value)
            };
            let profile = radii.iter().filter(|&&r| r > 0.0).map(|&r| q(r).map(|v| (r, v))).collect::<Result<Vec<_>>>()?;
            let (v, s) = profile_verdict(&profile);
            (v, profile, s)
        }
    };
    Ok(MultiplierReport { verdict, criterion: regime.name().to_string(), witnesses, growth_slope, sup_norm })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertibilityReport {
    pub invertible: bool,
    /// inf |u| over the ball (0 when u has a zero in the closed ball)
    pub inf_modulus: f64,
    pub witness: Option<Vec<Complex64>>,
    /// Angular grid spacing for sampled (n > 1) answers.
    pub resolution: Option<f64>,
}

/// M_u is invertible exactly when inf |u| > 0, i.e. u has no zero in the
/// closed ball. For zero-free u the infimum sits on the boundary.
pub fn is_invertible(u: &Symbol, tol: &ToleranceConfig) -> Result<InvertibilityReport> {
    if u.dim() > 1 {
        return Ok(invertibility_on_ball(u));
    }
    match u.zeros_in_disk(ZERO, tol) {
        Err(Error::BoundaryZero { angle }) => Ok(InvertibilityReport {
            invertible: false,
            inf_modulus: 0.0,
            witness: Some(vec![Complex64::from_polar(1.0, angle)]),
            resolution: None,
        }),
        Err(e) => Err(e),
        Ok(zs) if zs.total_count > 0 => Ok(InvertibilityReport {
            invertible: false,
            inf_modulus: 0.0,
            witness: Some(vec![zs.zeros[0].location]),
            resolution: None,
        }),
        Ok(_) => {
            let bm = u.boundary_min_modulus(ZERO, tol)?;
            Ok(InvertibilityReport {
                invertible: true,
                inf_modulus: bm.min,
                witness: Some(vec![Complex64::from_polar(1.0, bm.argmin_angle)]),
                resolution: None,
            })
        }
    }
}

/// Every point of the ball lies on a slice ζ ↦ ζw through the origin; a
/// zero shows up as positive winding of the slice on |ζ| = 1.
fn invertibility_on_ball(u: &Symbol) -> InvertibilityReport {
    let p = u.multi().expect("polynomial form for n > 1");
    let dim = u.dim();
    let m = (8 * (p.total_degree() + 1)).next_power_of_two().max(64);
    let (grid, spacing) = sphere_grid(dim);
    struct Slice {
        min: f64,
        zero: Option<Complex64>,
        at: Complex64,
        w: Vec<Complex64>,
    }
    let slices: Vec<Slice> = grid
        .into_par_iter()
        .map(|angles| {
            let w = sphere_direction(dim, &angles);
            let s = p.slice(&w);
            let vals = ring_values(s.coeffs(), 1.0, m);
            let (j, min) = vals.iter().map(|v| v.norm()).enumerate().fold((0, f64::INFINITY), |a, x| if x.1 < a.1 { x } else { a });
            let at = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
            let zero = match winding_number(&vals, ZERO, 0.0) {
                Winding::Around(0) => None,
                _ => clustered_roots(s.coeffs(), 1e-7).into_iter().map(|r| r.location).min_by(|a, b| a.norm().total_cmp(&b.norm())),
            };
            Slice { min, zero, at, w }
        })
        .collect();
    let point = |s: &Slice, zeta: Complex64| s.w.iter().map(|x| x * zeta).collect::<Vec<_>>();
    if let Some((s, z)) = slices.iter().find_map(|s| s.zero.map(|z| (s, z))) {
        return InvertibilityReport { invertible: false, inf_modulus: 0.0, witness: Some(point(s, z)), resolution: Some(spacing) };
    }
    let best = slices.iter().min_by(|a, b| a.min.total_cmp(&b.min)).expect("nonempty grid");
    InvertibilityReport {
        invertible: best.min > 0.0,
        inf_modulus: best.min,
        witness: Some(point(best, best.at)),
        resolution: Some(spacing),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FredholmReport {
    pub lambda: Complex64,
    /// Certified lower bound for |u − λ| on the unit circle.
    pub boundary_delta: f64,
    pub boundary_min: f64,
    pub boundary_min_angle: f64,
    pub zeros: Option<ZeroSet>,
    pub fredholm: bool,
    pub index: Option<i64>,
    pub kernel_dimension: Option<usize>,
    pub cokernel_dimension: Option<usize>,
    /// r with |u − λ| ≥ boundary_min/2 on r ≤ |z| < 1.
    pub annulus_radius: Option<f64>,
    pub theory: String,
    pub conclusion: String,
}

/// Fredholm analysis of M_u − λI. When |u − λ| is bounded below on the
/// circle, the zeros α_i of u − λ in the disk (multiplicities m_i) span a
/// cokernel of dimension Σ m_i and the kernel is trivial, so the index is
/// −Σ m_i.
pub fn fredholm_analysis(u: &Symbol, lambda: Complex64, space: &SpaceSpec, tol: &ToleranceConfig) -> Result<FredholmReport> {
    let theory = fredholm_theory(space);
    if u.dim() > 1 {
        // σ_e = σ: Fredholm exactly off the spectrum, with index 0
        let inv = invertibility_on_ball(&u.shifted(lambda));
        return Ok(FredholmReport {
            lambda,
            boundary_delta: inv.inf_modulus,
            boundary_min: inv.inf_modulus,
            boundary_min_angle: 0.0,
            zeros: None,
            fredholm: inv.invertible,
            index: inv.invertible.then_some(0),
            kernel_dimension: inv.invertible.then_some(0),
            cokernel_dimension: inv.invertible.then_some(0),
            annulus_radius: None,
            theory: "several_variables".into(),
            conclusion: if inv.invertible { "fredholm" } else { "not_fredholm" }.into(),
        });
    }
    let bm = u.boundary_min_modulus(lambda, tol)?;
    let not_fredholm = |zeros: Option<ZeroSet>| FredholmReport {
        lambda,
        boundary_delta: bm.lower_bound.max(0.0),
        boundary_min: bm.min,
        boundary_min_angle: bm.argmin_angle,
        zeros,
        fredholm: false,
        index: None,
        kernel_dimension: None,
        cokernel_dimension: None,
        annulus_radius: None,
        theory: theory.label().into(),
        conclusion: match theory {
            FredholmTheory::Characterized(_) => "not_fredholm".into(),
            FredholmTheory::SufficiencyOnly => "no conclusion from implemented theory".into(),
        },
    };
    let zeros = match u.zeros_in_disk(lambda, tol) {
        Ok(z) => z,
        Err(Error::BoundaryZero { .. }) => return Ok(not_fredholm(None)),
        Err(e) => return Err(e),
    };
    if !(bm.lower_bound > 0.0) {
        return Ok(not_fredholm(Some(zeros)));
    }

    // rings are sampled, so the annulus must also clear every zero
    let radii = sup_grid_radii(tol.boundary_refine_depth);
    let half = 0.5 * bm.min;
    let outermost_zero = zeros.zeros.iter().map(|z| z.location.norm()).fold(-1.0, f64::max);
    let mut annulus_radius = radii[radii.len() - 1];
    for &r in radii.iter().rev() {
        if r <= outermost_zero || ring_min(&|z| (u.value(z) - lambda).norm(), r) < half {
            break;
        }
        annulus_radius = r;
    }
    let total = zeros.total_count;
    Ok(FredholmReport {
        lambda,
        boundary_delta: bm.lower_bound,
        boundary_min: bm.min,
        boundary_min_angle: bm.argmin_angle,
        zeros: Some(zeros),
        fredholm: true,
        index: Some(-(total as i64)),
        kernel_dimension: Some(0),
        cokernel_dimension: Some(total),
        annulus_radius: Some(annulus_radius),
        theory: theory.label().into(),
        conclusion: "fredholm".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub k: u32,
    /// ‖u·g_{ξ,k}‖ with g_{ξ,k} = f_{ξ,k}/‖f_{ξ,k}‖
    pub value: f64,
}

/// ‖u·g_{ξ,k}‖ along `k_grid`. The values tend to 0 when u(ξ) = 0 and
/// stay away from 0 when |u| is bounded below near ξ.
pub fn peak_refutation_scan(u: &Symbol, xi: Complex64, space: &SpaceSpec, k_grid: &[u32], tol: &ToleranceConfig) -> Result<Vec<ScanRow>> {
    check_unimodular(xi)?;
    if u.dim() != 1 || space.n != 1 {
        return Err(Error::Argument("the peak scan is implemented for one variable".into()));
    }
    let supported = match (space.space, multiplier_regime(space)) {
        (Space::Bloch { alpha }, _) => alpha <= 1.0,
        (Space::BergmanSobolev { .. } | Space::HardySobolev { .. }, Regime::SobolevAlgebra) => true,
        _ => false,
    };
    if !supported {
        return Err(Error::OutsideHypotheses {
            theorem: format!("peak scan needs Bloch alpha in (0, 1] or a Sobolev algebra; got {space}"),
        });
    }
    let base_degree = symbol_truncation(u)?;
    k_grid
        .par_iter()
        .map(|&k| {
            let value = match space.space {
                Space::Bloch { .. } => {
                    let f = Symbol::peak(xi, k);
                    norm_of_symbol(space, &u.times(&f)?, tol)?.value / norm_of_symbol(space, &f, tol)?.value
                }
                _ => {
                    let f = crate::peaks::peak_function(xi, k)?;
                    let uf = &u.to_series(base_degree + k as usize)? * &f;
                    norm(space, &uf, tol)?.value / peak_norm(space, xi, k, tol)?
                }
            };
            Ok(ScanRow { k, value })
        })
        .collect()
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("k,value\n");
    for r in rows {
        out.push_str(&format!("{},{:.16e}\n", r.k, r.value));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::parse_symbol;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn regimes() {
        assert_eq!(multiplier_regime(&SpaceSpec::bloch(0.5).unwrap()), Regime::BlochLittleAlpha);
        assert_eq!(multiplier_regime(&SpaceSpec::bloch(1.0).unwrap()), Regime::BlochLogWeight);
        assert_eq!(multiplier_regime(&SpaceSpec::bloch(1.5).unwrap()), Regime::BoundedFunctions);
        assert_eq!(multiplier_regime(&SpaceSpec::bergman_sobolev(2.0, 0.0, 0.3).unwrap()), Regime::BoundedFunctions);
        // equality is allowed for p = 2 only
        assert_eq!(multiplier_regime(&SpaceSpec::bergman_sobolev(2.0, 0.0, 0.5).unwrap()), Regime::BoundedFunctions);
        assert_eq!(multiplier_regime(&SpaceSpec::bergman_sobolev(3.0, 0.5, 0.5).unwrap()), Regime::UncoveredBand);
        assert_eq!(multiplier_regime(&SpaceSpec::bergman_sobolev(2.0, 0.0, 0.75).unwrap()), Regime::UncoveredBand);
        assert_eq!(multiplier_regime(&SpaceSpec::bergman_sobolev(2.0, 0.0, 1.5).unwrap()), Regime::SobolevAlgebra);
        assert_eq!(multiplier_regime(&SpaceSpec::hardy_sobolev(0.0).unwrap()), Regime::BoundedFunctions);
        assert_eq!(multiplier_regime(&SpaceSpec::hardy_sobolev(0.5).unwrap()), Regime::UncoveredBand);
        assert_eq!(multiplier_regime(&SpaceSpec::hardy_sobolev(0.75).unwrap()), Regime::SobolevAlgebra);
        assert_eq!(fredholm_theory(&SpaceSpec::hardy(1.0).unwrap()), FredholmTheory::SufficiencyOnly);
        assert_eq!(fredholm_theory(&SpaceSpec::bergman_sobolev(1.0, 0.0, 3.0).unwrap()), FredholmTheory::SufficiencyOnly);
    }

    #[test]
    fn multiplier_examples() {
        let z = parse_symbol("z").unwrap();
        let r = is_multiplier(&SpaceSpec::bloch(0.5).unwrap(), &z, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.criterion, "bloch_little_alpha");
        let r = is_multiplier(&SpaceSpec::bloch(1.0).unwrap(), &z, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        // x log(e/x) is increasing on (0, 1], so the max is 1 at r = 0
        let top = r.witnesses.iter().map(|w| w.1).fold(0.0, f64::max);
        assert!((top - 1.0).abs() < 1e-15 && r.witnesses[0] == (0.0, 1.0));
        let r = is_multiplier(&SpaceSpec::bergman_sobolev(2.0, 0.0, 0.75).unwrap(), &z, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);
        assert_eq!(r.criterion, "uncovered_band");
        for s in [SpaceSpec::growth(0.5).unwrap(), SpaceSpec::bergman_sobolev(2.0, 0.0, 2.0).unwrap(), SpaceSpec::hardy_sobolev(1.0).unwrap()] {
            let r = is_multiplier(&s, &parse_symbol("B(0.5)*(z+3)").unwrap(), &tol()).unwrap();
            assert_eq!(r.verdict, Verdict::Yes, "{s}: {r:?}");
        }
    }

    #[test]
    fn profile_verdicts() {
        let radii = sup_grid_radii(14);
        let growing: Vec<(f64, f64)> = radii.iter().map(|&r| (r, 1.0 / (1.0 - r).max(1e-300))).collect();
        assert_eq!(profile_verdict(&growing).0, Verdict::No);
        let slow: Vec<(f64, f64)> = radii.iter().map(|&r| (r, (1.0 - r).powf(-0.05))).collect();
        assert_eq!(profile_verdict(&slow).0, Verdict::Indeterminate);
        let settling: Vec<(f64, f64)> = radii.iter().map(|&r| (r, 2.0 - (1.0 - r))).collect();
        assert_eq!(profile_verdict(&settling).0, Verdict::Yes);
    }

    #[test]
    fn invertibility_examples() {
        let r = is_invertible(&parse_symbol("z-2").unwrap(), &tol()).unwrap();
        assert!(r.invertible && (r.inf_modulus - 1.0).abs() < 1e-12);
        assert!(!is_invertible(&parse_symbol("z").unwrap(), &tol()).unwrap().invertible);
        let r = is_invertible(&parse_symbol("(1+z)/2").unwrap(), &tol()).unwrap();
        assert!(!r.invertible && r.inf_modulus == 0.0);
        assert!((r.witness.unwrap()[0] + 1.0).norm() < 1e-6);
    }

    #[test]
    fn invertibility_on_the_ball() {
        let r = is_invertible(&parse_symbol("z1*z2+2").unwrap(), &tol()).unwrap();
        assert!(r.invertible && (r.inf_modulus - 1.5).abs() < 1e-3, "{r:?}");
        let r = is_invertible(&parse_symbol("z1+z2/2-0.3").unwrap(), &tol()).unwrap();
        assert!(!r.invertible);
        let w = r.witness.unwrap();
        assert!((w[0] + w[1] / 2.0 - 0.3).norm() < 1e-9);
    }

    #[test]
    fn fredholm_examples() {
        let bloch = SpaceSpec::bloch(0.5).unwrap();
        let r = fredholm_analysis(&parse_symbol("z").unwrap(), ZERO, &bloch, &tol()).unwrap();
        assert!(r.fredholm);
        assert_eq!(r.index, Some(-1));
        assert_eq!(r.kernel_dimension, Some(0));
        let zs = r.zeros.unwrap();
        assert_eq!(zs.zeros.len(), 1);
        assert!(zs.zeros[0].location.norm() < 1e-14);
        let r = fredholm_analysis(&parse_symbol("z").unwrap(), Complex64::from_polar(1.0, PI / 4.0), &bloch, &tol()).unwrap();
        assert!(!r.fredholm && r.index.is_none());
        assert_eq!(r.conclusion, "not_fredholm");
        let r = fredholm_analysis(&parse_symbol("z^2").unwrap(), ZERO, &bloch, &tol()).unwrap();
        // |u| is constant on the circle, so refinement stops at the depth limit
        assert!(r.fredholm && r.boundary_delta <= 1.0 && r.boundary_delta > 0.999, "{r:?}");
        assert!((r.annulus_radius.unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(r.index, Some(-2));
        let r = fredholm_analysis(&parse_symbol("(z-0.5)*(z-2)").unwrap(), ZERO, &bloch, &tol()).unwrap();
        assert_eq!(r.index, Some(-1));
        assert!(r.annulus_radius.unwrap() > 0.5);
        // the zero of u − 0.5 near 0.22 lies between sampled rings
        let r = fredholm_analysis(&parse_symbol("(z-0.5)*(z-2)").unwrap(), c(0.5, 0.0), &bloch, &tol()).unwrap();
        let zero = r.zeros.as_ref().unwrap().zeros[0].location.norm();
        assert!(r.annulus_radius.unwrap() > zero, "{r:?}");
    }

    #[test]
    fn sufficiency_only_spaces_do_not_conclude() {
        let s = SpaceSpec::bergman_sobolev(2.0, 0.0, 0.75).unwrap();
        let r = fredholm_analysis(&parse_symbol("z").unwrap(), ONE_ON_CIRCLE, &s, &tol()).unwrap();
        assert!(!r.fredholm);
        assert_eq!(r.theory, "sufficiency_only");
        assert_eq!(r.conclusion, "no conclusion from implemented theory");
    }

    const ONE_ON_CIRCLE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn fredholm_in_several_variables_matches_spectrum() {
        let s = SpaceSpec::bloch(0.5).unwrap().with_dimension(2).unwrap();
        let u = parse_symbol("z1").unwrap();
        let u2 = Symbol::parse_in("z1", 2).unwrap();
        assert_eq!(u.dim(), 1);
        assert!(!fredholm_analysis(&u2, c(0.5, 0.0), &s, &tol()).unwrap().fredholm);
        let r = fredholm_analysis(&u2, c(1.5, 0.0), &s, &tol()).unwrap();
        assert!(r.fredholm && r.index == Some(0));
    }

    #[test]
    fn peak_scan_examples() {
        let grid = [8, 32, 128, 512];
        let one = parse_symbol("1").unwrap();
        for s in [SpaceSpec::bloch(0.5).unwrap(), SpaceSpec::hardy_sobolev(1.0).unwrap()] {
            for row in peak_refutation_scan(&one, c(1.0, 0.0), &s, &grid, &tol()).unwrap() {
                assert!((row.value - 1.0).abs() < 1e-9, "{s}: {row:?}");
            }
        }
        let u = parse_symbol("(1+z)/2").unwrap();
        let rows = peak_refutation_scan(&u, c(-1.0, 0.0), &SpaceSpec::bloch(0.5).unwrap(), &grid, &tol()).unwrap();
        assert!(rows.windows(2).all(|w| w[1].value < w[0].value), "{rows:?}");
        let rows = peak_refutation_scan(&parse_symbol("z").unwrap(), c(1.0, 0.0), &SpaceSpec::hardy_sobolev(1.0).unwrap(), &grid, &tol()).unwrap();
        assert!(rows.iter().all(|r| r.value > 0.2), "{rows:?}");
        assert!(peak_refutation_scan(&u, c(0.5, 0.0), &SpaceSpec::bloch(0.5).unwrap(), &grid, &tol()).is_err());
        assert!(matches!(
            peak_refutation_scan(&u, c(1.0, 0.0), &SpaceSpec::growth(0.5).unwrap(), &grid, &tol()),
            Err(Error::OutsideHypotheses { .. })
        ));
        assert_eq!(scan_csv(&rows).lines().count(), grid.len() + 1);
    }
}
