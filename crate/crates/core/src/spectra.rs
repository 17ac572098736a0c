//! Spectrum and essential spectrum of M_u as explicit planar sets.
//!
//! In one variable the spectrum is the closed region bounded by u(∂𝔻),
//! stored as the curve plus a winding test. The essential spectrum is the
//! curve itself, or for H^∞-type spaces optionally the intersection of the
//! closures of u(𝔻 ∖ r𝔻) on an occupancy grid. In several variables both
//! sets are cl u(𝔹ₙ) and are stored as an occupancy grid.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multipliers::{fredholm_theory, FredholmTheory};
use crate::numerics::{polyline_distance, ring_values, winding_number, ToleranceConfig, Winding};
use crate::spaces::{sup_grid_radii, SpaceSpec};
use crate::symbols::{sphere_direction, sphere_grid, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Spectrum,
    Essential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipMode {
    Winding,
    CurveDistance,
    GridOccupancy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumOptions {
    /// Points on ∂𝔻 for the boundary curve (at least 4096 are used).
    pub boundary_samples: usize,
    /// Cells per side of the occupancy grid.
    pub occupancy_cells: usize,
    /// Essential spectrum as an intersection over annuli (n = 1).
    pub annulus: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { boundary_samples: 4096, occupancy_cells: 64, annulus: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolution {
    pub boundary_samples: usize,
    /// Width of the band around the set boundary reported as `boundary`.
    pub band: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annulus_levels: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sphere_spacing: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    pub origin: Complex64,
    pub cell: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    pub kind: Kind,
    pub membership_mode: MembershipMode,
    pub curves: Vec<Vec<Complex64>>,
    pub cloud: Vec<Complex64>,
    pub radius: f64,
    /// A point of the set with modulus `radius`.
    pub radius_witness: Complex64,
    /// A point z of the closed ball with u(z) = radius_witness.
    pub radius_preimage: Vec<Complex64>,
    pub resolution: Resolution,
    pub theory: String,
    #[serde(skip)]
    occupancy: Option<Occupancy>,
}

// ---------------------------------------------------------------------------
// Occupancy grids

#[derive(Debug, Clone, PartialEq)]
struct Occupancy {
    origin: Complex64,
    cell: f64,
    cells: usize,
    hit: Vec<bool>,
}

impl Occupancy {
    /// Square grid covering `points` with a one-cell margin.
    fn covering(points: &[Complex64], cells: usize) -> Self {
        let (mut lo, mut hi) = (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let centre = (lo + hi) / 2.0;
        let extent = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9 * (1.0 + centre.norm()));
        let cell = extent / (cells - 2) as f64;
        let half = cell * cells as f64 / 2.0;
        Occupancy { origin: centre - Complex64::new(half, half), cell, cells, hit: vec![false; cells * cells] }
    }

    fn empty_like(&self) -> Self {
        Occupancy { hit: vec![false; self.hit.len()], ..*self }
    }

    fn locate(&self, p: Complex64) -> Option<(usize, usize)> {
        let x = ((p.re - self.origin.re) / self.cell).floor();
        let y = ((p.im - self.origin.im) / self.cell).floor();
        let n = self.cells as f64;
        (x >= 0.0 && y >= 0.0 && x < n && y < n).then_some((x as usize, y as usize))
    }

    fn get(&self, i: isize, j: isize) -> bool {
        let n = self.cells as isize;
        i >= 0 && j >= 0 && i < n && j < n && self.hit[j as usize * self.cells + i as usize]
    }

    fn mark(&mut self, p: Complex64) {
        if let Some((i, j)) = self.locate(p) {
            self.hit[j * self.cells + i] = true;
        }
    }

    /// Marks the polyline through `points` at steps of half a cell.
    fn mark_polyline(&mut self, points: &[Complex64], closed: bool) {
        let n = points.len();
        let segments = if closed { n } else { n.saturating_sub(1) };
        self.mark(points[0]);
        for s in 0..segments {
            let (a, b) = (points[s], points[(s + 1) % n]);
            let steps = ((b - a).norm() / (0.5 * self.cell)).ceil().max(1.0) as usize;
            for t in 1..=steps {
                self.mark(a + (b - a) * (t as f64 / steps as f64));
            }
        }
    }

    fn centre(&self, i: usize, j: usize) -> Complex64 {
        self.origin + Complex64::new((i as f64 + 0.5) * self.cell, (j as f64 + 0.5) * self.cell)
    }

    fn occupied_centres(&self) -> Vec<Complex64> {
        (0..self.cells * self.cells).filter(|&k| self.hit[k]).map(|k| self.centre(k % self.cells, k / self.cells)).collect()
    }

    /// Components of the occupied set after dilation by one cell (8-neighbour).
    fn components(&self) -> usize {
        let n = self.cells as isize;
        let mut dilated = vec![false; self.hit.len()];
        for j in 0..n {
            for i in 0..n {
                dilated[(j * n + i) as usize] = (-1..=1).any(|dj| (-1..=1).any(|di| self.get(i + di, j + dj)));
            }
        }
        let mut seen = vec![false; dilated.len()];
        let mut count = 0;
        for start in 0..dilated.len() {
            if !dilated[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(k) = queue.pop_front() {
                let (i, j) = ((k % self.cells) as isize, (k / self.cells) as isize);
                for dj in -1..=1 {
                    for di in -1..=1 {
                        let (a, b) = (i + di, j + dj);
                        if a < 0 || b < 0 || a >= n || b >= n {
                            continue;
                        }
                        let q = (b * n + a) as usize;
                        if dilated[q] && !seen[q] {
                            seen[q] = true;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        count
    }

    fn info(&self) -> GridInfo {
        GridInfo { origin: self.origin, cell: self.cell, cells: self.cells }
    }
}

// ---------------------------------------------------------------------------
// Construction

fn boundary_band(u: &Symbol, samples: usize) -> f64 {
    let dmax = (0..samples)
        .into_par_iter()
        .map(|j| u.value_and_derivative(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / samples as f64)).1.norm())
        .reduce(|| 0.0, f64::max);
    2.0 * PI * dmax / samples as f64
}

fn curve_estimate(u: &Symbol, kind: Kind, opts: &SpectrumOptions, tol: &ToleranceConfig, theory: &str) -> Result<SpectrumEstimate> {
    let samples = opts.boundary_samples.max(4096);
    let curve = u.boundary_samples(samples);
    let band = boundary_band(u, samples);
    // the supremum over the closed disk is attained on the circle
    let top = u.boundary_max_modulus(tol)?;
    let at = Complex64::from_polar(1.0, top.argmax_angle);
    Ok(SpectrumEstimate {
        kind,
        membership_mode: if kind == Kind::Spectrum { MembershipMode::Winding } else { MembershipMode::CurveDistance },
        curves: vec![curve],
        cloud: Vec::new(),
        radius: top.max,
        radius_witness: u.value(at),
        radius_preimage: vec![at],
        resolution: Resolution { boundary_samples: samples, band, grid: None, annulus_levels: None, sphere_spacing: None },
        theory: theory.to_string(),
        occupancy: None,
    })
}

/// σ(M_u) = cl u(𝔹ₙ).
pub fn spectrum(u: &Symbol, opts: &SpectrumOptions, tol: &ToleranceConfig) -> Result<SpectrumEstimate> {
    if u.dim() > 1 {
        return ball_estimate(u, Kind::Spectrum, opts, tol);
    }
    curve_estimate(u, Kind::Spectrum, opts, tol, "closure_of_range")
}

/// σ_e(M_u) on `space`; OutsideHypotheses when no characterization applies.
pub fn essential_spectrum(u: &Symbol, space: &SpaceSpec, opts: &SpectrumOptions, tol: &ToleranceConfig) -> Result<SpectrumEstimate> {
    if u.dim() > 1 {
        // σ_e = σ in several variables
        return ball_estimate(u, Kind::Essential, opts, tol);
    }
    let label = match fredholm_theory(space) {
        FredholmTheory::Characterized(label) => label,
        FredholmTheory::SufficiencyOnly => {
            return Err(Error::OutsideHypotheses {
                theorem: format!("essential spectrum is characterized only for bounded-multiplier and disk-algebra multiplier spaces; {space} is neither"),
            })
        }
    };
    if opts.annulus {
        annulus_estimate(u, opts, tol, label)
    } else {
        curve_estimate(u, Kind::Essential, opts, tol, label)
    }
}

/// Intersection of the occupancy masks of u(𝔻 ∖ r_j𝔻), r_j = 1 − 2^{−j}.
fn annulus_estimate(u: &Symbol, opts: &SpectrumOptions, tol: &ToleranceConfig, label: &str) -> Result<SpectrumEstimate> {
    let base = curve_estimate(u, Kind::Essential, opts, tol, label)?;
    let template = Occupancy::covering(&base.curves[0], opts.occupancy_cells.max(8));
    let dmax = base.resolution.band * base.resolution.boundary_samples as f64 / (2.0 * PI);
    let step = 0.5 * template.cell;
    let angles = ((2.0 * PI * dmax / step).ceil() as usize).clamp(64, 1 << 15);
    let depth = tol.boundary_refine_depth;
    let radii = sup_grid_radii(depth);
    let masks: Vec<Occupancy> = radii[1..]
        .par_iter()
        .map(|&r0| {
            let mut mask = template.empty_like();
            let rings = ((dmax * (1.0 - r0) / step).ceil() as usize).clamp(1, 1024);
            for t in 0..=rings {
                let r = r0 + (1.0 - r0) * t as f64 / rings as f64;
                let ring: Vec<Complex64> = (0..angles).map(|j| u.value(Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64))).collect();
                mask.mark_polyline(&ring, true);
            }
            mask
        })
        .collect();
    let mut occ = template.empty_like();
    for k in 0..occ.hit.len() {
        occ.hit[k] = masks.iter().all(|m| m.hit[k]);
    }
    let band = occ.cell * std::f64::consts::SQRT_2;
    Ok(SpectrumEstimate {
        membership_mode: MembershipMode::GridOccupancy,
        curves: Vec::new(),
        cloud: occ.occupied_centres(),
        resolution: Resolution { band, grid: Some(occ.info()), annulus_levels: Some(depth), ..base.resolution },
        occupancy: Some(occ),
        ..base
    })
}

/// cl u(𝔹ₙ) for n > 1. Level sets of u − c through the ball reach the
/// sphere, so u(𝕊) already fills the set; sphere slices ζ ↦ ζw supply the
/// samples.
fn ball_estimate(u: &Symbol, kind: Kind, opts: &SpectrumOptions, tol: &ToleranceConfig) -> Result<SpectrumEstimate> {
    let p = u.multi().ok_or_else(|| Error::Argument("several-variable symbols must be polynomials".into()))?;
    let dim = u.dim();
    let (grid, spacing) = sphere_grid(dim);
    let m = (8 * (p.total_degree() + 1)).next_power_of_two().max(32);
    let rings: Vec<Vec<Complex64>> = grid
        .par_iter()
        .map(|angles| ring_values(p.slice(&sphere_direction(dim, angles)).coeffs(), 1.0, m))
        .collect();
    let all: Vec<Complex64> = rings.iter().flatten().copied().collect();
    let mut occ = Occupancy::covering(&all, opts.occupancy_cells.max(8));
    for ring in &rings {
        occ.mark_polyline(ring, true);
    }
    let sup = u.sup_norm(tol)?;
    let band = occ.cell * std::f64::consts::SQRT_2;
    Ok(SpectrumEstimate {
        kind,
        membership_mode: MembershipMode::GridOccupancy,
        curves: Vec::new(),
        cloud: occ.occupied_centres(),
        radius: sup.value,
        radius_witness: u.eval(&sup.witness)?,
        radius_preimage: sup.witness,
        resolution: Resolution { boundary_samples: m, band, grid: Some(occ.info()), annulus_levels: None, sphere_spacing: Some(spacing) },
        theory: "several_variables".into(),
        occupancy: Some(occ),
    })
}

// ---------------------------------------------------------------------------
// Queries

/// Classifies λ against the estimate; `resolution.band` is the width of
/// the boundary band.
pub fn membership(est: &SpectrumEstimate, lambda: Complex64) -> Membership {
    match (est.membership_mode, &est.occupancy) {
        (MembershipMode::GridOccupancy, Some(occ)) => {
            let Some((i, j)) = occ.locate(lambda) else { return Membership::Outside };
            let (i, j) = (i as isize, j as isize);
            let hits = (-1..=1).flat_map(|dj| (-1..=1).map(move |di| (di, dj))).filter(|&(di, dj)| occ.get(i + di, j + dj)).count();
            match (occ.get(i, j), hits) {
                (true, 9) => Membership::Inside,
                (_, 0) => Membership::Outside,
                _ => Membership::Boundary,
            }
        }
        _ => {
            let curve = &est.curves[0];
            let slack = 1e-12 * (1.0 + lambda.norm());
            if polyline_distance(curve, lambda) <= est.resolution.band + slack {
                return Membership::Boundary;
            }
            if est.membership_mode == MembershipMode::CurveDistance {
                return Membership::Outside;
            }
            match winding_number(curve, lambda, 0.0) {
                Winding::Around(w) if w >= 1 => Membership::Inside,
                Winding::OnBoundary => Membership::Boundary,
                _ => Membership::Outside,
            }
        }
    }
}

/// The represented set has one component after a one-cell dilation.
pub fn connectedness_check(est: &SpectrumEstimate) -> bool {
    match &est.occupancy {
        Some(occ) => occ.components() == 1,
        None => {
            // a filled region is connected when its boundary curve is
            let mut occ = Occupancy::covering(&est.curves[0], 256);
            occ.mark_polyline(&est.curves[0], true);
            occ.components() == 1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusReport {
    pub sup_spectrum: f64,
    pub sup_essential: f64,
    pub sup_norm_u: f64,
    pub spectrum_witness: Complex64,
    pub essential_witness: Complex64,
    pub sup_norm_witness: Vec<Complex64>,
}

/// max |σ|, max |σ_e| and ‖u‖_∞, each with an attaining point.
pub fn spectral_radius_report(u: &Symbol, space: &SpaceSpec, tol: &ToleranceConfig) -> Result<RadiusReport> {
    let opts = SpectrumOptions::default();
    let ess = essential_spectrum(u, space, &opts, tol)?;
    let spec = spectrum(u, &opts, tol)?;
    let sup = u.sup_norm(tol)?;
    Ok(RadiusReport {
        sup_spectrum: spec.radius,
        sup_essential: ess.radius,
        sup_norm_u: sup.value,
        spectrum_witness: spec.radius_witness,
        essential_witness: ess.radius_witness,
        sup_norm_witness: sup.witness,
    })
}

/// 800×800 rendering: curves stroked, cloud as dots, dashed unit circle.
pub fn to_svg(est: &SpectrumEstimate) -> String {
    const SIZE: f64 = 800.0;
    let mut pts: Vec<Complex64> = est.curves.iter().flatten().chain(est.cloud.iter()).copied().collect();
    pts.extend([Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0)]);
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im) * 1.1;
    let centre = (lo + hi) / 2.0;
    let scale = SIZE / span;
    let map = |z: Complex64| ((z.re - centre.re) * scale + SIZE / 2.0, (centre.im - z.im) * scale + SIZE / 2.0);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 800" width="800" height="800">"#);
    let _ = writeln!(out, r#"<rect width="800" height="800" fill="white"/>"#);
    let (cx, cy) = map(Complex64::new(0.0, 0.0));
    let _ = writeln!(out, r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="#888" stroke-width="1" stroke-dasharray="6 4"/>"##, scale);
    for curve in &est.curves {
        let path: Vec<String> = curve.iter().map(|&z| {
            let (x, y) = map(z);
            format!("{x:.3},{y:.3}")
        }).collect();
        let _ = writeln!(out, r##"<polygon points="{}" fill="none" stroke="#1f4e9c" stroke-width="1"/>"##, path.join(" "));
    }
    let dot = est.resolution.grid.map(|g| (g.cell * scale / 2.0).max(0.75)).unwrap_or(1.0);
    for &z in &est.cloud {
        let (x, y) = map(z);
        let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="{dot:.3}" fill="#c0392b"/>"##);
    }
    out.push_str("</svg>\n");
    out
}
