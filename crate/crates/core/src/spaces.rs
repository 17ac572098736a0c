//! Function-space descriptors (Bloch-type, growth, Bergman–Sobolev,
//! Hardy–Sobolev, Hardy) and their norms on power series and symbols.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{disk_integral_power, ring_values, CompensatedSum, QuadratureRule, ToleranceConfig};
use crate::series::PowerSeries;
use crate::symbols::Symbol;

/// Angles per ring in the weighted-supremum grid.
pub const SUP_GRID_ANGLES: usize = 512;
/// Largest truncation used when expanding a rational symbol.
const MAX_SYMBOL_TRUNCATION: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space {
    /// 𝓑_α: |f(0)| + sup (1−|z|²)^α |f′|
    Bloch { alpha: f64 },
    /// H^∞_α: sup (1−|z|²)^α |f|
    Growth { alpha: f64 },
    /// A^p_{α,β}: ‖(I+R)^β f‖ in L^p(dA_α)
    BergmanSobolev { p: f64, alpha: f64, beta: f64 },
    /// H²_β: (Σ (1+k)^{2β} |a_k|²)^{1/2}; the p = 2, α = −1 end of the scale.
    HardySobolev { beta: f64 },
    Hardy { p: f64 },
}

/// A space together with the ambient dimension n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpaceSpec", into = "RawSpaceSpec")]
pub struct SpaceSpec {
    pub space: Space,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Variant {
    Bloch,
    Growth,
    BergmanSobolev,
    HardySobolev,
    Hardy,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpaceSpec {
    variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

impl TryFrom<RawSpaceSpec> for SpaceSpec {
    type Error = Error;

    fn try_from(raw: RawSpaceSpec) -> Result<Self> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::Space(format!("missing parameter '{name}'")));
        let forbid = |v: Option<f64>, name: &str| match v {
            Some(_) => Err(Error::Space(format!("parameter '{name}' does not apply to this variant"))),
            None => Ok(()),
        };
        let space = match raw.variant {
            Variant::Bloch | Variant::Growth => {
                forbid(raw.p, "p")?;
                forbid(raw.beta, "beta")?;
                let alpha = need(raw.alpha, "alpha")?;
                if raw.variant == Variant::Bloch {
                    Space::Bloch { alpha }
                } else {
                    Space::Growth { alpha }
                }
            }
            Variant::BergmanSobolev => Space::BergmanSobolev {
                p: need(raw.p, "p")?,
                alpha: need(raw.alpha, "alpha")?,
                beta: raw.beta.unwrap_or(0.0),
            },
            Variant::HardySobolev => {
                if raw.p.is_some_and(|p| p != 2.0) || raw.alpha.is_some_and(|a| a != -1.0) {
                    return Err(Error::Space("the Hardy–Sobolev scale fixes p = 2 and alpha = -1".into()));
                }
                Space::HardySobolev { beta: raw.beta.unwrap_or(0.0) }
            }
            Variant::Hardy => {
                forbid(raw.alpha, "alpha")?;
                forbid(raw.beta, "beta")?;
                Space::Hardy { p: need(raw.p, "p")? }
            }
        };
        SpaceSpec::new(space, raw.n.unwrap_or(1))
    }
}

impl From<SpaceSpec> for RawSpaceSpec {
    fn from(s: SpaceSpec) -> Self {
        let (variant, p, alpha, beta) = match s.space {
            Space::Bloch { alpha } => (Variant::Bloch, None, Some(alpha), None),
            Space::Growth { alpha } => (Variant::Growth, None, Some(alpha), None),
            Space::BergmanSobolev { p, alpha, beta } => (Variant::BergmanSobolev, Some(p), Some(alpha), Some(beta)),
            Space::HardySobolev { beta } => (Variant::HardySobolev, Some(2.0), Some(-1.0), Some(beta)),
            Space::Hardy { p } => (Variant::Hardy, Some(p), None, None),
        };
        RawSpaceSpec { variant, p, alpha, beta, n: Some(s.n) }
    }
}

impl SpaceSpec {
    pub fn new(space: Space, n: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::Space(msg));
        if !(1..=3).contains(&n) {
            return bad(format!("dimension n must be 1, 2 or 3, got {n}"));
        }
        match space {
            Space::Bloch { alpha } | Space::Growth { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                return bad(format!("alpha must be positive, got {alpha}"));
            }
            Space::BergmanSobolev { p, alpha, beta } => {
                if !(p >= 1.0 && p.is_finite()) {
                    return bad(format!("p must be at least 1, got {p}"));
                }
                if !(alpha > -1.0 && alpha.is_finite()) {
                    return bad(format!("alpha must exceed -1, got {alpha}"));
                }
                if !(beta >= 0.0 && beta.is_finite()) {
                    return bad(format!("beta must be nonnegative, got {beta}"));
                }
            }
            Space::HardySobolev { beta } if !(beta >= 0.0 && beta.is_finite()) => {
                return bad(format!("beta must be nonnegative, got {beta}"));
            }
            Space::Hardy { p } if !(p >= 1.0 && p.is_finite()) => {
                return bad(format!("p must be at least 1, got {p}"));
            }
            _ => {}
        }
        Ok(Self { space, n })
    }

    pub fn bloch(alpha: f64) -> Result<Self> {
        Self::new(Space::Bloch { alpha }, 1)
    }

    pub fn growth(alpha: f64) -> Result<Self> {
        Self::new(Space::Growth { alpha }, 1)
    }

    pub fn bergman_sobolev(p: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Space::BergmanSobolev { p, alpha, beta }, 1)
    }

    pub fn hardy_sobolev(beta: f64) -> Result<Self> {
        Self::new(Space::HardySobolev { beta }, 1)
    }

    pub fn hardy(p: f64) -> Result<Self> {
        Self::new(Space::Hardy { p }, 1)
    }

    pub fn with_dimension(self, n: usize) -> Result<Self> {
        Self::new(self.space, n)
    }

    /// (p, α, β) on the Sobolev scale, counting H²_β as p = 2, α = −1.
    pub fn sobolev_parameters(&self) -> Option<(f64, f64, f64)> {
        match self.space {
            Space::BergmanSobolev { p, alpha, beta } => Some((p, alpha, beta)),
            Space::HardySobolev { beta } => Some((2.0, -1.0, beta)),
            _ => None,
        }
    }

    /// Order N of the derivative in the auxiliary Y-space: the least
    /// integer N ≥ 1 with N > β − (α + 1/2)/p.
    pub fn y_space_order(&self) -> Result<u32> {
        let (p, alpha, beta) = self
            .sobolev_parameters()
            .ok_or_else(|| Error::Space("the Y-space order is defined on the Sobolev scale only".into()))?;
        let threshold = beta - (alpha + 0.5) / p;
        let n = (threshold.floor() + 1.0).max(1.0);
        Ok(n as u32)
    }

    /// The isomorphic space on the same scale with smoothness `new_beta`:
    /// α₂ = α − p(β − β′).
    pub fn shift_parameters(&self, new_beta: f64) -> Result<SpaceSpec> {
        let (p, alpha, beta) = self
            .sobolev_parameters()
            .ok_or_else(|| Error::Space("parameter shifts apply to the Sobolev scale only".into()))?;
        if !(new_beta >= 0.0 && new_beta.is_finite()) {
            return Err(Error::Space(format!("beta must be nonnegative, got {new_beta}")));
        }
        let alpha2 = alpha - p * (beta - new_beta);
        if p == 2.0 && (alpha2 + 1.0).abs() <= 1e-12 {
            return SpaceSpec::new(Space::HardySobolev { beta: new_beta }, self.n);
        }
        if alpha2 <= -1.0 {
            return Err(Error::Space(format!("shift leaves the admissible scale: alpha would be {alpha2}")));
        }
        SpaceSpec::new(Space::BergmanSobolev { p, alpha: alpha2, beta: new_beta }, self.n)
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.space {
            Space::Bloch { alpha } => write!(f, "Bloch(alpha={alpha})"),
            Space::Growth { alpha } => write!(f, "Growth(alpha={alpha})"),
            Space::BergmanSobolev { p, alpha, beta } => write!(f, "BergmanSobolev(p={p}, alpha={alpha}, beta={beta})"),
            Space::HardySobolev { beta } => write!(f, "HardySobolev(beta={beta})"),
            Space::Hardy { p } => write!(f, "Hardy(p={p})"),
        }
    }
}

/// A norm value with a bracket [low, high] for the exact norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub low: f64,
    pub high: f64,
    pub method: String,
    /// (radius, max of the weighted quantity on that circle) for
    /// supremum-type norms.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub profile: Vec<(f64, f64)>,
}

impl NormEstimate {
    fn exact(value: f64, method: &str) -> Self {
        Self { value, low: value, high: value, method: method.into(), profile: Vec::new() }
    }
}

fn method_label(base: &str, exact: bool) -> String {
    if exact {
        base.to_string()
    } else {
        format!("{base} (truncated estimate)")
    }
}

/// The radial grid 0, 1 − 2^{−j} for j = 1..depth.
pub fn sup_grid_radii(depth: u32) -> Vec<f64> {
    std::iter::once(0.0).chain((1..=depth).map(|j| 1.0 - 2f64.powi(-(j as i32)))).collect()
}

/// Evaluation access for the function g inside a weighted supremum.
pub(crate) trait RingSource: Sync {
    /// g and g′ on |z| = r at m equispaced angles.
    fn ring(&self, r: f64, m: usize) -> (Vec<Complex64>, Vec<Complex64>);
    fn point(&self, z: Complex64) -> Complex64;
    /// Upper bound for sup |g| on the closed disk, if known.
    fn boundary_bound(&self) -> Option<f64>;
}

struct SeriesSource {
    g: PowerSeries,
    dg: PowerSeries,
}

impl RingSource for SeriesSource {
    fn ring(&self, r: f64, m: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        (ring_values(self.g.coeffs(), r, m), ring_values(self.dg.coeffs(), r, m))
    }
    fn point(&self, z: Complex64) -> Complex64 {
        self.g.evaluate(z)
    }
    fn boundary_bound(&self) -> Option<f64> {
        self.g.is_exact().then(|| self.g.coeffs().iter().map(|c| c.norm()).sum())
    }
}

struct SymbolSource {
    g: Symbol,
    bound: f64,
}

impl RingSource for SymbolSource {
    fn ring(&self, r: f64, m: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        (0..m)
            .into_par_iter()
            .map(|j| self.g.value_and_derivative(Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64)))
            .unzip()
    }
    fn point(&self, z: Complex64) -> Complex64 {
        self.g.value(z)
    }
    fn boundary_bound(&self) -> Option<f64> {
        Some(self.bound)
    }
}

/// Estimate of sup over the disk of (1 − |z|²)^α |g(z)|.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct WeightedSup {
    pub value: f64,
    pub high: f64,
    pub witness: Complex64,
    pub profile: Vec<(f64, f64)>,
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid supremum over radii 1 − 2^{−j} and `SUP_GRID_ANGLES` angles,
/// refined locally around the best node. `high` adds a first-order
/// Lipschitz slack per ring and the weight at the last radius times a
/// bound on |g|.
pub(crate) fn weighted_sup(src: &dyn RingSource, alpha: f64, depth: u32) -> WeightedSup {
    let radii = sup_grid_radii(depth);
    let m = SUP_GRID_ANGLES;
    let dt = 2.0 * PI / m as f64;
    let weight = |r: f64| (1.0 - r * r).powf(alpha);
    let rings: Vec<(f64, usize, f64)> = radii
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let (g, dg) = src.ring(r, m);
            let w = weight(r);
            let (j, gmax) = g.iter().map(|v| v.norm()).enumerate().fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            let dmax = dg.iter().map(|v| v.norm()).fold(0.0, f64::max);
            // neighbouring radii bracket the radial direction
            let dr = if i + 1 < radii.len() { radii[i + 1] - r } else { 1.0 - r };
            let radial = dmax * w + if r > 0.0 { 2.0 * alpha * r * w / (1.0 - r * r) * gmax } else { 0.0 };
            let slack = 0.5 * dt * r * w * dmax + 0.5 * dr * radial;
            (w * gmax, j, slack)
        })
        .collect();
    let (best, _) = rings.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, x)| if x.0 > acc.1 { (i, x.0) } else { acc });
    let profile: Vec<(f64, f64)> = radii.iter().zip(&rings).map(|(&r, x)| (r, x.0)).collect();

    // local refinement in (r, θ)
    let q = |r: f64, t: f64| weight(r) * src.point(Complex64::from_polar(r, t)).norm();
    let mut r = radii[best];
    let mut t = dt * rings[best].1 as f64;
    let mut value = rings[best].0;
    let r_lo = if best > 0 { radii[best - 1] } else { 0.0 };
    let r_hi = if best + 1 < radii.len() { radii[best + 1] } else { 1.0 };
    for _ in 0..3 {
        let (rr, vr) = golden_max(|x| q(x, t), r_lo, r_hi, 60);
        if vr > value {
            r = rr;
            value = vr;
        }
        let (tt, vt) = golden_max(|x| q(r, x), t - dt, t + dt, 60);
        if vt > value {
            t = tt;
            value = vt;
        }
    }
    let grid_high = rings.iter().map(|x| x.0 + x.2).fold(0.0, f64::max);
    let tail = src.boundary_bound().map_or(f64::INFINITY, |b| weight(radii[radii.len() - 1]) * b);
    WeightedSup { value, high: grid_high.max(tail).max(value), witness: Complex64::from_polar(r, t), profile }
}

/// Truncation degree for expanding a symbol so the dropped tail is
/// below ~1e−13 on the closed disk.
pub fn symbol_truncation(u: &Symbol) -> Result<usize> {
    let r = u.rational()?;
    if r.den.truncation_degree() == 0 {
        return Ok(r.num.truncation_degree());
    }
    let nearest = crate::roots::all_roots(r.den.coeffs()).iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let k = (30.0 / nearest.ln()).ceil();
    Ok(if k.is_finite() { (k as usize).clamp(256, MAX_SYMBOL_TRUNCATION) } else { MAX_SYMBOL_TRUNCATION })
}

fn require_one_variable(space: &SpaceSpec) -> Result<()> {
    if space.n == 1 {
        Ok(())
    } else {
        Err(Error::Argument("norms are computed for functions of one variable".into()))
    }
}

/// ∫|g|^p dA_α with a bracket from a second, coarser rule.
pub(crate) fn bergman_power_integral(g: &PowerSeries, p: f64, alpha: f64) -> Result<(f64, f64)> {
    let degree = g.truncation_degree();
    if p == 2.0 {
        let rule = QuadratureRule::for_degree(degree, alpha)?;
        let v = disk_integral_power(g.coeffs(), p, &rule)?;
        return Ok((v, 0.0));
    }
    let angular = (4 * (degree + 1)).max(64).next_power_of_two();
    let radial = (degree + 1).max(32);
    let fine = disk_integral_power(g.coeffs(), p, &QuadratureRule::new(radial, angular, alpha)?)?;
    let coarse = disk_integral_power(g.coeffs(), p, &QuadratureRule::new(radial / 2 + 1, angular / 2, alpha)?)?;
    Ok((fine, (fine - coarse).abs()))
}

fn lp_bracket(integral: f64, err: f64, p: f64, method: String) -> NormEstimate {
    let root = |x: f64| x.max(0.0).powf(1.0 / p);
    NormEstimate { value: root(integral), low: root(integral - err), high: root(integral + err), method, profile: Vec::new() }
}

fn hardy_p(f: &PowerSeries, p: f64) -> Result<NormEstimate> {
    let exact = f.is_exact();
    if p == 2.0 {
        let sum: CompensatedSum = f.coeffs().iter().map(|c| c.norm_sqr()).collect();
        return Ok(NormEstimate::exact(sum.value().sqrt(), &method_label("coefficient_sum", exact)));
    }
    let mean = |m: usize| -> f64 {
        let vals = ring_values(f.coeffs(), 1.0, m);
        vals.iter().map(|v| v.norm().powf(p)).collect::<CompensatedSum>().value() / m as f64
    };
    let m = (8 * (f.truncation_degree() + 1)).max(1024).next_power_of_two();
    let fine = mean(m);
    let coarse = mean(m / 2);
    Ok(lp_bracket(fine, (fine - coarse).abs(), p, method_label("circle_mean", exact)))
}

/// ‖f‖ in `space` (one variable).
pub fn norm(space: &SpaceSpec, f: &PowerSeries, tol: &ToleranceConfig) -> Result<NormEstimate> {
    require_one_variable(space)?;
    let exact = f.is_exact();
    match space.space {
        Space::Bloch { alpha } => {
            let df = f.derivative();
            let src = SeriesSource { dg: df.derivative(), g: df };
            let s = weighted_sup(&src, alpha, tol.boundary_refine_depth);
            let f0 = f.coeff(0).norm();
            Ok(NormEstimate {
                value: f0 + s.value,
                low: f0 + s.value,
                high: f0 + s.high,
                method: method_label("grid_sup", exact),
                profile: s.profile,
            })
        }
        Space::Growth { alpha } => {
            let src = SeriesSource { dg: f.derivative(), g: f.clone() };
            let s = weighted_sup(&src, alpha, tol.boundary_refine_depth);
            Ok(NormEstimate { value: s.value, low: s.value, high: s.high, method: method_label("grid_sup", exact), profile: s.profile })
        }
        Space::BergmanSobolev { p, alpha, beta } => {
            let g = f.shifted_radial_derivative(beta);
            let (integral, err) = bergman_power_integral(&g, p, alpha)?;
            Ok(lp_bracket(integral, err, p, method_label("quadrature", exact)))
        }
        Space::HardySobolev { beta } => {
            let sum: CompensatedSum = f
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm_sqr() * (2.0 * beta * ((1 + k) as f64).ln()).exp())
                .collect();
            Ok(NormEstimate::exact(sum.value().sqrt(), &method_label("coefficient_sum", exact)))
        }
        Space::Hardy { p } => hardy_p(f, p),
    }
}

/// ‖u‖ in `space` for a closed-form symbol. Supremum norms evaluate u
/// directly; integral norms expand u into a series first.
pub fn norm_of_symbol(space: &SpaceSpec, u: &Symbol, tol: &ToleranceConfig) -> Result<NormEstimate> {
    require_one_variable(space)?;
    if u.dim() != 1 {
        return Err(Error::Argument("norms are computed for symbols of one variable".into()));
    }
    match space.space {
        Space::Bloch { alpha } => {
            let du = u.derivative()?;
            let bound = du.boundary_max_modulus(tol)?.upper_bound;
            let s = weighted_sup(&SymbolSource { g: du, bound }, alpha, tol.boundary_refine_depth);
            let u0 = u.value(Complex64::new(0.0, 0.0)).norm();
            Ok(NormEstimate { value: u0 + s.value, low: u0 + s.value, high: u0 + s.high, method: "grid_sup".into(), profile: s.profile })
        }
        Space::Growth { alpha } => {
            let bound = u.boundary_max_modulus(tol)?.upper_bound;
            let s = weighted_sup(&SymbolSource { g: u.clone(), bound }, alpha, tol.boundary_refine_depth);
            Ok(NormEstimate { value: s.value, low: s.value, high: s.high, method: "grid_sup".into(), profile: s.profile })
        }
        _ => {
            let series = u.to_series(symbol_truncation(u)?)?;
            let mut e = norm(space, &series, tol)?;
            e.method = e.method.replace(" (truncated estimate)", "");
            Ok(e)
        }
    }
}

/// |f(0)| + ‖R^β f‖ on the Sobolev scale.
pub fn equivalent_norm_r(space: &SpaceSpec, f: &PowerSeries) -> Result<f64> {
    require_one_variable(space)?;
    let (p, alpha, beta) = space
        .sobolev_parameters()
        .ok_or_else(|| Error::Space("the radial-derivative norm is defined on the Sobolev scale only".into()))?;
    let g = f.radial_derivative(beta);
    let rest = if alpha == -1.0 {
        g.coeffs().iter().map(|c| c.norm_sqr()).collect::<CompensatedSum>().value().sqrt()
    } else {
        bergman_power_integral(&g, p, alpha)?.0.powf(1.0 / p)
    };
    Ok(f.coeff(0).norm() + rest)
}

/// Σ_{j<N} |D^j f(0)| + ‖D^N f‖_{A^p_α} for integer β = N ≥ 1.
pub fn equivalent_norm_d(space: &SpaceSpec, f: &PowerSeries) -> Result<f64> {
    require_one_variable(space)?;
    let Space::BergmanSobolev { p, alpha, beta } = space.space else {
        return Err(Error::Space("the derivative norm is defined for Bergman–Sobolev spaces".into()));
    };
    if beta < 1.0 || beta.fract() != 0.0 {
        return Err(Error::Space(format!("the derivative norm needs a positive integer beta, got {beta}")));
    }
    let n = beta as usize;
    let mut head = 0.0;
    let mut factorial = 1.0;
    for j in 0..n {
        if j > 0 {
            factorial *= j as f64;
        }
        head += factorial * f.coeff(j).norm();
    }
    let g = f.nth_derivative(n);
    Ok(head + bergman_power_integral(&g, p, alpha)?.0.powf(1.0 / p))
}
