//! Simultaneous polynomial root finding (Aberth–Ehrlich) with multiplicity
//! clustering.

use num_complex::Complex64;
use serde::Serialize;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
}

/// Horner evaluation of p and p' for coefficients in ascending order.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// Drops negligible leading (highest-degree) coefficients; they only move
/// roots towards infinity.
pub fn trim_leading(coeffs: &[Complex64], rel: f64) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1].norm() <= rel * scale {
        end -= 1;
    }
    coeffs[..end].to_vec()
}

/// All complex roots, unclustered. Exact zero coefficients at the low end
/// are factored out as roots at the origin.
pub fn all_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let coeffs = trim_leading(coeffs, 1e-14);
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let zeros_at_origin = coeffs.iter().take_while(|c| **c == ZERO).count();
    let reduced = &coeffs[zeros_at_origin..];
    let mut roots = vec![ZERO; zeros_at_origin];
    roots.extend(aberth(reduced));
    roots
}

fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    if degree == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let lead = coeffs[degree];
    // geometric mean of root moduli as the starting radius
    let radius = (coeffs[0].norm() / lead.norm()).powf(1.0 / degree as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4))
        .collect();
    let mut done = vec![false; degree];
    for _ in 0..800 {
        let mut all_done = true;
        for k in 0..degree {
            if done[k] {
                continue;
            }
            let (p, dp) = eval_with_derivative(coeffs, z[k]);
            if p == ZERO {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// Roots grouped into distinct locations with multiplicities.
///
/// Roots closer than `cluster_tol` are merged. Wider groups (up to 1e-3) are
/// merged when the polynomial's Taylor coefficients at the group centroid
/// vanish to the corresponding order.
pub fn clustered_roots(coeffs: &[Complex64], cluster_tol: f64) -> Vec<Root> {
    let coeffs = trim_leading(coeffs, 1e-14);
    let roots = all_roots(&coeffs);
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);

    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut group = vec![roots[i]];
        // single-linkage growth at the loose radius
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..roots.len() {
                if !used[j] && group.iter().any(|g| (g - roots[j]).norm() < 1e-3 * (1.0 + g.norm())) {
                    used[j] = true;
                    group.push(roots[j]);
                    grew = true;
                }
            }
        }
        groups.push(group);
    }

    let mut out = Vec::new();
    for group in groups {
        let m = group.len();
        let centroid = group.iter().sum::<Complex64>() / m as f64;
        let diameter = group
            .iter()
            .flat_map(|a| group.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        if m == 1 || diameter < cluster_tol || is_multiple_root(&coeffs, centroid, m, scale) {
            out.push(Root { location: centroid, multiplicity: m });
        } else {
            // genuinely distinct nearby roots: only merge the tight sub-clusters
            out.extend(tight_clusters(&group, cluster_tol));
        }
    }
    out
}

fn tight_clusters(group: &[Complex64], tol: f64) -> Vec<Root> {
    let mut out: Vec<Root> = Vec::new();
    for &r in group {
        if let Some(existing) = out.iter_mut().find(|e| (e.location - r).norm() < tol) {
            let m = existing.multiplicity as f64;
            existing.location = (existing.location * m + r) / (m + 1.0);
            existing.multiplicity += 1;
        } else {
            out.push(Root { location: r, multiplicity: 1 });
        }
    }
    out
}

/// Taylor test: the first `m` Taylor coefficients at `c` are negligible
/// relative to the m-th.
fn is_multiple_root(coeffs: &[Complex64], c: Complex64, m: usize, scale: f64) -> bool {
    let taylor = taylor_shift(coeffs, c);
    if taylor.len() <= m {
        return false;
    }
    let lead = taylor[m].norm();
    if lead == 0.0 {
        return false;
    }
    // tolerate the rounding level of an m-fold root, ~eps^{1/m}
    let radius = (1e-14 * scale / lead).powf(1.0 / m as f64).max(1e-12);
    (0..m).all(|j| taylor[j].norm() * radius.powi(j as i32) <= 1e3 * lead * radius.powi(m as i32) + 1e-13 * scale)
}

/// Coefficients of p(c + w) in w.
pub fn taylor_shift(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut t = coeffs.to_vec();
    let n = t.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = t[j + 1];
            t[j] += c * next;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for &r in roots {
            let mut q = vec![ZERO; p.len() + 1];
            for (i, &a) in p.iter().enumerate() {
                q[i + 1] += a;
                q[i] -= a * r;
            }
            p = q;
        }
        p
    }

    #[test]
    fn finds_simple_roots() {
        let want = [c(0.5, 0.0), c(2.0, 0.0), c(-0.3, 0.7), c(0.1, -0.9)];
        let roots = clustered_roots(&poly_from_roots(&want), 1e-7);
        assert_eq!(roots.len(), 4);
        for w in want {
            assert!(roots.iter().any(|r| (r.location - w).norm() < 1e-12 && r.multiplicity == 1));
        }
    }

    #[test]
    fn multiplicities_at_origin_are_exact() {
        let roots = clustered_roots(&[ZERO, ZERO, ZERO, c(1.0, 0.0)], 1e-7);
        assert_eq!(roots, vec![Root { location: ZERO, multiplicity: 3 }]);
    }

    #[test]
    fn clusters_multiple_roots_away_from_origin() {
        let a = c(0.5, 0.2);
        let b = c(-0.4, 0.0);
        let roots = clustered_roots(&poly_from_roots(&[a, a, a, b, b]), 1e-7);
        assert_eq!(roots.len(), 2, "{roots:?}");
        let ra = roots.iter().find(|r| (r.location - a).norm() < 1e-4).unwrap();
        let rb = roots.iter().find(|r| (r.location - b).norm() < 1e-4).unwrap();
        assert_eq!(ra.multiplicity, 3);
        assert_eq!(rb.multiplicity, 2);
    }

    #[test]
    fn keeps_close_distinct_roots_apart() {
        let roots = clustered_roots(&poly_from_roots(&[c(0.3, 0.0), c(0.3001, 0.0)]), 1e-7);
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn taylor_shift_recenters() {
        // (1+w)^2 = 1 + 2w + w^2 from z^2 at c = 1
        let t = taylor_shift(&[ZERO, ZERO, c(1.0, 0.0)], c(1.0, 0.0));
        assert_eq!(t, vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    }
}
