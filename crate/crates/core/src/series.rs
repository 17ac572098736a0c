//! Truncated power series in one complex variable and multivariate
//! polynomials, with the radial-derivative family acting on homogeneous
//! blocks.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::binomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default truncation degree for series expansions of closed-form symbols.
pub const DEFAULT_TRUNCATION: usize = 256;

/// k^β with the branch fixed through exp(β ln k).
fn power_weight(k: usize, beta: f64) -> f64 {
    if beta == 0.0 {
        1.0
    } else {
        (beta * (k as f64).ln()).exp()
    }
}

/// Coefficients a₀..a_K of a power series. An exact series is a polynomial
/// whose higher coefficients are known to vanish; otherwise coefficients
/// past K are unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    exact: bool,
}

impl PowerSeries {
    /// Exact polynomial. An empty slice is the zero polynomial.
    pub fn polynomial(coeffs: impl Into<Vec<Complex64>>) -> Self {
        let mut coeffs = coeffs.into();
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs, exact: true }
    }

    /// Series known through degree `coeffs.len() - 1`.
    pub fn truncated(coeffs: impl Into<Vec<Complex64>>) -> Self {
        let mut s = Self::polynomial(coeffs);
        s.exact = false;
        s
    }

    pub fn real_polynomial(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect::<Vec<_>>())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    /// c·z^k
    pub fn monomial(k: usize, c: Complex64) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::polynomial(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn truncation_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Finite truncation budget, `None` for exact polynomials.
    fn budget(&self) -> Option<usize> {
        (!self.exact).then(|| self.truncation_degree())
    }

    fn with_budget(mut coeffs: Vec<Complex64>, budget: Option<usize>) -> Self {
        match budget {
            Some(k) => {
                coeffs.resize(k + 1, ZERO);
                Self { coeffs, exact: false }
            }
            None => Self::polynomial(coeffs),
        }
    }

    fn joint_budget(&self, other: &Self) -> Option<usize> {
        match (self.budget(), other.budget()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Restrict to degrees ≤ k, marking the result as truncated.
    pub fn truncate(&self, k: usize) -> Self {
        Self::with_budget(self.coeffs.iter().take(k + 1).copied().collect(), Some(k))
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect(), exact: self.exact }
    }

    fn map_blocks(&self, weight: impl Fn(usize) -> f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().enumerate().map(|(k, a)| a * weight(k)).collect(),
            exact: self.exact,
        }
    }

    /// R^β: the degree-k block is multiplied by k^β and the constant term dropped.
    pub fn radial_derivative(&self, beta: f64) -> Self {
        self.map_blocks(|k| if k == 0 { 0.0 } else { power_weight(k, beta) })
    }

    /// (I+R)^β: the degree-k block is multiplied by (1+k)^β.
    pub fn shifted_radial_derivative(&self, beta: f64) -> Self {
        self.map_blocks(|k| power_weight(k + 1, beta))
    }

    /// Complex derivative D.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self { coeffs: vec![ZERO], exact: self.exact };
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect();
        Self { coeffs, exact: self.exact }
    }

    /// D^j
    pub fn nth_derivative(&self, j: usize) -> Self {
        (0..j).fold(self.clone(), |acc, _| acc.derivative())
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut acc = Self::constant(ONE);
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    /// Synthetic division by (z − z₀) at a zero of the series.
    pub fn divide_by_root(&self, z0: Complex64, rel_tol: f64) -> Result<Self> {
        if z0.norm() >= 1.0 {
            return Err(Error::Domain(format!("root {z0} must lie in the open unit disk")));
        }
        let residual = self.evaluate(z0).norm();
        if residual > rel_tol * self.max_coeff() {
            return Err(Error::NotAZero { point: z0, residual });
        }
        let k = self.truncation_degree();
        if k == 0 {
            // the zero constant
            return Ok(Self { coeffs: vec![ZERO], exact: self.exact });
        }
        let mut quotient = vec![ZERO; k];
        quotient[k - 1] = self.coeffs[k];
        for j in (1..k).rev() {
            quotient[j - 1] = self.coeffs[j] + z0 * quotient[j];
        }
        Ok(Self { coeffs: quotient, exact: self.exact })
    }

    /// Long division self/den truncated at degree k; `den(0)` must be nonzero.
    pub fn divide(&self, den: &Self, k: usize) -> Result<Self> {
        let d0 = den.coeff(0);
        if d0 == ZERO {
            return Err(Error::Domain("series division needs a nonzero constant term".into()));
        }
        let mut q = vec![ZERO; k + 1];
        for n in 0..=k {
            let mut acc = self.coeff(n);
            for j in 1..=n.min(den.truncation_degree()) {
                acc -= den.coeffs[j] * q[n - j];
            }
            q[n] = acc / d0;
        }
        Ok(Self::truncated(q))
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let budget = self.joint_budget(rhs);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect::<Vec<_>>();
        let coeffs = match budget {
            Some(b) => coeffs.into_iter().take(b + 1).collect(),
            None => coeffs,
        };
        PowerSeries::with_budget(coeffs, budget)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(-ONE)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self + &(-rhs)
    }
}

/// Cauchy product; truncated at the smaller finite budget.
impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let budget = self.joint_budget(rhs);
        let full = self.truncation_degree() + rhs.truncation_degree();
        let top = budget.map_or(full, |b| b.min(full));
        let mut coeffs = vec![ZERO; top + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(top + 1) {
            if *a == ZERO {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(top + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries::with_budget(coeffs, budget)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for PowerSeries {
            type Output = PowerSeries;
            fn $method(self, rhs: PowerSeries) -> PowerSeries {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Ok(Self::polynomial(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect::<Vec<_>>()))
    }
}

/// R^N(f/u) at each sample point, through the expansion
/// (−1)^N u^{−N−1} Σ_{k=0}^{N} (−1)^k C(N+1,k) u^k R^N(u^{N−k} f).
///
/// The identity needs N ≥ 1 and u bounded away from zero at the points.
pub fn quotient_radial_derivative(
    f: &PowerSeries,
    u: &PowerSeries,
    order: u32,
    points: &[Complex64],
    rel_tol: f64,
) -> Result<Vec<Complex64>> {
    if order == 0 {
        return Err(Error::Argument("the quotient expansion holds only for N ≥ 1".into()));
    }
    let n = order as usize;
    let u_values: Vec<Complex64> = points.iter().map(|&z| u.evaluate(z)).collect();
    if let Some((z, v)) = points.iter().zip(&u_values).find(|(_, v)| v.norm() <= rel_tol) {
        return Err(Error::LowerBoundViolated { point: *z, modulus: v.norm() });
    }
    // R^N(u^{N-k} f) for k = 0..N
    let mut power = f.clone();
    let mut terms = vec![PowerSeries::zero(); n + 1];
    for k in (0..=n).rev() {
        terms[k] = power.radial_derivative(order as f64);
        if k > 0 {
            power = &power * u;
        }
    }
    let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(points
        .iter()
        .zip(&u_values)
        .map(|(&z, &uz)| {
            let mut acc = ZERO;
            let mut uk = ONE;
            for (k, term) in terms.iter().enumerate() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc += uk * term.evaluate(z) * (sign * binomial(n as u64 + 1, k as u64));
                uk *= uz;
            }
            acc * sign_n / uz.powu(order + 1)
        })
        .collect())
}

// ---------------------------------------------------------------------------

/// Polynomial in n ∈ {2, 3} complex variables, keyed by multi-index.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.insert(vec![0; dim], c);
        p
    }

    /// The coordinate function z_j, 1-based.
    pub fn coordinate(dim: usize, j: usize) -> Result<Self> {
        if j == 0 || j > dim {
            return Err(Error::Argument(format!("coordinate z{j} does not exist in dimension {dim}")));
        }
        let mut index = vec![0; dim];
        index[j - 1] = 1;
        let mut p = Self::zero(dim);
        p.insert(index, ONE);
        Ok(p)
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (k, c) in terms {
            if k.len() != dim {
                return Err(Error::Argument(format!("multi-index {k:?} has length ≠ {dim}")));
            }
            p.insert(k, c);
        }
        Ok(p)
    }

    fn insert(&mut self, index: Vec<u32>, c: Complex64) {
        let entry = self.terms.entry(index).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            let key: Vec<u32> = self.terms.iter().find(|(_, v)| **v == ZERO).map(|(k, _)| k.clone()).unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|k| degree(k)).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| k.iter().zip(point).fold(*c, |acc, (&e, &z)| acc * z.powu(e)))
            .sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut p = Self::zero(self.dim);
        for (k, v) in &self.terms {
            p.insert(k.clone(), v * c);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (k, v) in &other.terms {
            p.insert(k.clone(), *v);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.dim);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let k: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                p.insert(k, x * y);
            }
        }
        p
    }

    pub fn pow(&self, m: u32) -> Self {
        (0..m).fold(Self::constant(self.dim, ONE), |acc, _| acc.mul(self))
    }

    fn map_blocks(&self, weight: impl Fn(usize) -> f64) -> Self {
        let mut p = Self::zero(self.dim);
        for (k, v) in &self.terms {
            let w = weight(degree(k));
            if w != 0.0 {
                p.insert(k.clone(), v * w);
            }
        }
        p
    }

    /// R^β: each homogeneous block of degree |k| ≥ 1 scaled by |k|^β.
    pub fn radial_derivative(&self, beta: f64) -> Self {
        self.map_blocks(|d| if d == 0 { 0.0 } else { power_weight(d, beta) })
    }

    pub fn shifted_radial_derivative(&self, beta: f64) -> Self {
        self.map_blocks(|d| power_weight(d + 1, beta))
    }

    /// Homogeneous expansion: (degree, block) pairs in ascending degree.
    pub fn homogeneous_parts(&self) -> Vec<(usize, MultiPoly)> {
        let mut parts: BTreeMap<usize, MultiPoly> = BTreeMap::new();
        for (k, v) in &self.terms {
            parts.entry(degree(k)).or_insert_with(|| Self::zero(self.dim)).insert(k.clone(), *v);
        }
        parts.into_iter().collect()
    }

    /// The one-variable polynomial ζ ↦ p(ζ w).
    pub fn slice(&self, direction: &[Complex64]) -> PowerSeries {
        let mut coeffs = vec![ZERO; self.total_degree() + 1];
        for (k, c) in &self.terms {
            let w = k.iter().zip(direction).fold(*c, |acc, (&e, &z)| acc * z.powu(e));
            coeffs[degree(k)] += w;
        }
        PowerSeries::polynomial(coeffs)
    }
}

fn degree(k: &[u32]) -> usize {
    k.iter().map(|&e| e as usize).sum()
}
