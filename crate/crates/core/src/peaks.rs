//! Peak functions f_{ξ,k} = ((1 + ξ̄z)/2)^k, their norms, and numerical
//! checks of the identities and asymptotics governing them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    circle_mean, disk_integral_power, fit_loglog_slope, ln_binomial, log_gamma, ring_values, CompensatedSum,
    QuadratureRule, ToleranceConfig,
};
use crate::series::PowerSeries;
use crate::spaces::{bergman_power_integral, norm, sup_grid_radii, Space, SpaceSpec, SUP_GRID_ANGLES};

const UNIMODULAR_TOL: f64 = 1e-12;
const MAX_IDENTITY_ORDER: u32 = 60;

pub(crate) fn check_unimodular(xi: Complex64) -> Result<()> {
    if (xi.norm() - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::Domain(format!("peak point {xi} must lie on the unit circle")));
    }
    Ok(())
}

/// Coefficients C(k,n) ξ̄ⁿ / 2^k, formed in log space for large k.
pub fn peak_function(xi: Complex64, k: u32) -> Result<PowerSeries> {
    check_unimodular(xi)?;
    let kf = k as f64;
    let coeffs: Vec<Complex64> = (0..=k)
        .map(|n| {
            // C(k,n) is an exact integer in f64 up to k = 50
            let modulus = if k <= 50 {
                crate::numerics::binomial(k as u64, n as u64) * 0.5f64.powi(k as i32)
            } else {
                (ln_binomial(kf, n as f64) - kf * std::f64::consts::LN_2).exp()
            };
            xi.conj().powu(n) * modulus
        })
        .collect();
    Ok(PowerSeries::polynomial(coeffs))
}

/// Powers of two from 8 to 4096.
pub fn default_k_grid() -> Vec<u32> {
    (3..=12).map(|j| 1 << j).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakFamily {
    pub xi: Complex64,
    pub k_grid: Vec<u32>,
    pub space: SpaceSpec,
}

impl PeakFamily {
    pub fn new(xi: Complex64, k_grid: Vec<u32>, space: SpaceSpec) -> Result<Self> {
        check_unimodular(xi)?;
        if k_grid.is_empty() || k_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("k grid must be nonempty and strictly increasing".into()));
        }
        Ok(Self { xi, k_grid, space })
    }
}

/// ‖f_{ξ,k}‖ in H²_β from the coefficients (independent of ξ).
pub fn peak_norm_exact_h2beta(k: u32, beta: f64) -> f64 {
    let kf = k as f64;
    let sum: CompensatedSum = (0..=k)
        .map(|n| {
            let nf = n as f64;
            (2.0 * beta * (1.0 + nf).ln() + 2.0 * ln_binomial(kf, nf) - kf * 4f64.ln()).exp()
        })
        .collect();
    sum.value().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalCheck {
    /// ∫₀^{2π} |1 + re^{it}|^{2K} dt by the trapezoid rule.
    pub quadrature: f64,
    /// 2π Σ C(K,n)² r^{2n}
    pub coefficient_sum: f64,
}

impl ParsevalCheck {
    pub fn rel_diff(&self) -> f64 {
        (self.quadrature - self.coefficient_sum).abs() / self.coefficient_sum.abs()
    }
}

pub fn parseval_check(order: u32, r: f64) -> Result<ParsevalCheck> {
    if order > MAX_IDENTITY_ORDER {
        return Err(Error::Argument(format!("order {order} exceeds {MAX_IDENTITY_ORDER}")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} must lie in [0, 1)")));
    }
    let count = (4 * order as usize + 4).max(16);
    let mean = circle_mean(|t| (Complex64::new(1.0, 0.0) + Complex64::from_polar(r, t)).norm_sqr().powi(order as i32), count)?;
    let kf = order as f64;
    let sum: CompensatedSum = (0..=order)
        .map(|n| {
            let nf = n as f64;
            let power = if r == 0.0 { if n == 0 { 1.0 } else { 0.0 } } else { (2.0 * nf * r.ln()).exp() };
            (2.0 * ln_binomial(kf, nf)).exp() * power
        })
        .collect();
    Ok(ParsevalCheck { quadrature: 2.0 * PI * mean, coefficient_sum: 2.0 * PI * sum.value() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChuVandermondeCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl ChuVandermondeCheck {
    pub fn rel_diff(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs()
    }
}

/// Σ C(K,n)² Γ(γ+1)Γ(n+1)/Γ(n+γ+2) against Γ(γ+1)Γ(2K+γ+2)/Γ(K+γ+2)².
pub fn chu_vandermonde_check(order: u32, gamma: f64) -> Result<ChuVandermondeCheck> {
    if !(gamma > -1.0) {
        return Err(Error::Domain(format!("gamma must exceed -1, got {gamma}")));
    }
    if order > MAX_IDENTITY_ORDER {
        return Err(Error::Argument(format!("order {order} exceeds {MAX_IDENTITY_ORDER}")));
    }
    let kf = order as f64;
    let lg1 = log_gamma(gamma + 1.0)?;
    let mut lhs = CompensatedSum::default();
    for n in 0..=order {
        let nf = n as f64;
        lhs.add((2.0 * ln_binomial(kf, nf) + lg1 + log_gamma(nf + 1.0)? - log_gamma(nf + gamma + 2.0)?).exp());
    }
    let rhs = (lg1 + log_gamma(2.0 * kf + gamma + 2.0)? - 2.0 * log_gamma(kf + gamma + 2.0)?).exp();
    Ok(ChuVandermondeCheck { lhs: lhs.value(), rhs })
}

/// Growth exponent of ‖f_{ξ,k}‖ in k: (−α + βp − 3/2)/p on the Sobolev
/// scale and 1 − α for Bloch-type spaces.
pub fn predicted_norm_exponent(space: &SpaceSpec) -> Result<f64> {
    match space.space {
        Space::Bloch { alpha } => Ok(1.0 - alpha),
        _ => {
            let (p, alpha, beta) = space
                .sobolev_parameters()
                .ok_or_else(|| Error::Space(format!("no peak-norm exponent is known for {space}")))?;
            Ok((-alpha + beta * p - 1.5) / p)
        }
    }
}

/// ‖f_{ξ,k}‖ in `space`, using the coefficient formula where exact.
pub fn peak_norm(space: &SpaceSpec, xi: Complex64, k: u32, tol: &ToleranceConfig) -> Result<f64> {
    if let Space::HardySobolev { beta } = space.space {
        check_unimodular(xi)?;
        return Ok(peak_norm_exact_h2beta(k, beta));
    }
    Ok(norm(space, &peak_function(xi, k)?, tol)?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    pub difference: f64,
    /// (k, ‖f_{ξ,k}‖)
    pub norms: Vec<(u32, f64)>,
}

pub fn peak_norm_exponent(family: &PeakFamily, tol: &ToleranceConfig) -> Result<ExponentFit> {
    let predicted_slope = predicted_norm_exponent(&family.space)?;
    let norms: Vec<(u32, f64)> = family
        .k_grid
        .par_iter()
        .map(|&k| peak_norm(&family.space, family.xi, k, tol).map(|v| (k, v)))
        .collect::<Result<_>>()?;
    let fit = fit_loglog_slope(&norms.iter().map(|&(k, v)| (k as f64 + 1.0, v)).collect::<Vec<_>>())?;
    Ok(ExponentFit { fitted_slope: fit.slope, predicted_slope, difference: (fit.slope - predicted_slope).abs(), norms })
}

/// Γ(γ+2) 2^{2γ+5/2−jp} / (√π p^{γ+3/2}) · (k+1)^{jp−(γ+3/2)}
pub fn asymptotic_derivative_norm_power(p: u32, gamma: f64, j: u32, k: u32) -> Result<f64> {
    let (pf, jf) = (p as f64, j as f64);
    let ln_const = log_gamma(gamma + 2.0)? + (2.0 * gamma + 2.5 - jf * pf) * std::f64::consts::LN_2
        - 0.5 * PI.ln()
        - (gamma + 1.5) * pf.ln();
    Ok((ln_const + (jf * pf - gamma - 1.5) * (k as f64 + 1.0).ln()).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoteCheck {
    /// (k, computed ‖D^j f_{1,k}‖^p / asymptotic formula)
    pub ratios: Vec<(u32, f64)>,
}

/// Quadrature value of ‖D^j f_{1,k}‖^p in A^p_γ against its asymptotic
/// formula, for integer p.
pub fn exact_asymptote_check(p: u32, gamma: f64, j: u32, k_grid: &[u32]) -> Result<AsymptoteCheck> {
    if p == 0 {
        return Err(Error::Argument("the exact asymptote needs a positive integer p".into()));
    }
    if !(gamma > -1.0) {
        return Err(Error::Domain(format!("gamma must exceed -1, got {gamma}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let ratios = k_grid
        .par_iter()
        .map(|&k| {
            let g = peak_function(one, k)?.nth_derivative(j as usize);
            let computed = if p == 2 {
                disk_integral_power(g.coeffs(), 2.0, &QuadratureRule::for_degree(g.truncation_degree(), gamma)?)?
            } else {
                bergman_power_integral(&g, p as f64, gamma)?.0
            };
            Ok((k, computed / asymptotic_derivative_norm_power(p, gamma, j, k)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoteCheck { ratios })
}

/// sup over a polar grid of A_δ = {z ∈ 𝔻 : |z − ξ| ≥ δ} of |R^m g_{ξ,k}|,
/// with g_{ξ,k} = f_{ξ,k}/‖f_{ξ,k}‖ in the family's space.
pub fn uniform_decay_check(family: &PeakFamily, delta: f64, m: u32, tol: &ToleranceConfig) -> Result<Vec<(u32, f64)>> {
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 2), got {delta}")));
    }
    let radii: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).chain(sup_grid_radii(tol.boundary_refine_depth)).collect();
    family
        .k_grid
        .par_iter()
        .map(|&k| {
            let f = peak_function(family.xi, k)?;
            let scale = peak_norm(&family.space, family.xi, k, tol)?;
            // m = 0 is the function itself, not R⁰ (which drops the constant)
            let g = if m == 0 { f } else { f.radial_derivative(m as f64) };
            let mut sup: f64 = 0.0;
            for &r in &radii {
                for (i, v) in ring_values(g.coeffs(), r, SUP_GRID_ANGLES).iter().enumerate() {
                    let z = Complex64::from_polar(r, 2.0 * PI * i as f64 / SUP_GRID_ANGLES as f64);
                    if (z - family.xi).norm() >= delta {
                        sup = sup.max(v.norm());
                    }
                }
            }
            Ok((k, sup / scale))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivideBoundCheck {
    /// sup over T of (1−|z|²)^α |D^N (f/(z−z₀))|
    pub measured: f64,
    pub proof_bound: f64,
}

/// Compares the weighted size of D^N(f/(z−z₀)) near the boundary with the
/// bound obtained from f and its derivatives, on T = {|z| > (1+|z₀|)/2}.
pub fn bloch_divide_bound_check(f: &PowerSeries, z0: Complex64, order: u32, alpha: f64, tol: &ToleranceConfig) -> Result<DivideBoundCheck> {
    if alpha < 0.0 {
        return Err(Error::Domain(format!("weight exponent must be nonnegative, got {alpha}")));
    }
    let g = f.divide_by_root(z0, tol.rel_tol.max(1e-12))?;
    let n = order as usize;
    let dg = g.nth_derivative(n);
    let df = f.nth_derivative(n);
    let rho = 0.5 * (1.0 + z0.norm());
    let radii: Vec<f64> = (0..=tol.boundary_refine_depth).map(|j| 1.0 - (1.0 - rho) * 2f64.powi(-(j as i32))).collect();
    let weight = |r: f64| (1.0 - r * r).powf(alpha);
    let ring_sup = |s: &PowerSeries| -> f64 {
        radii
            .iter()
            .map(|&r| weight(r) * ring_values(s.coeffs(), r, SUP_GRID_ANGLES).iter().map(|v| v.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    };
    let measured = ring_sup(&dg);
    // v is radial and decreasing, so its sup over T sits on the inner circle
    let mut head = 0.0;
    let mut factorial = 1.0;
    for j in 0..n {
        if j > 0 {
            factorial *= j as f64;
        }
        head += factorial * f.coeff(j).norm();
    }
    let big_m = ring_sup(&df) + weight(rho) * head;
    let n_fact: f64 = (1..=n).map(|i| i as f64).product();
    let gap = 1.0 - z0.norm();
    let series: f64 = (0..=n).map(|k| n_fact * (2.0 / gap).powi((n - k + 1) as i32)).sum();
    Ok(DivideBoundCheck { measured, proof_bound: big_m * series })
}

/// CSV table of (k, norm, fitted norm) rows.
pub fn exponent_csv(fit: &ExponentFit) -> String {
    let pairs: Vec<(f64, f64)> = fit.norms.iter().map(|&(k, v)| (k as f64 + 1.0, v)).collect();
    let intercept = fit_loglog_slope(&pairs).map(|f| f.intercept).unwrap_or(0.0);
    let mut out = String::from("k,norm,fitted\n");
    for &(k, v) in &fit.norms {
        let fitted = (intercept + fit.fitted_slope * (k as f64 + 1.0).ln()).exp();
        out.push_str(&format!("{k},{v:.16e},{fitted:.16e}\n"));
    }
    out
}
