//! Intersections ℋ(S₁) ∩ ℋ(S₂) of tangent hypersurfaces of two round spheres.
//!
//! S₁ has radius r₁ and centre 0, S₂ radius r₂ ≤ r₁ and centre (0, 0, l).
//! Lines are parametrized by the polar angle φ and azimuth θ of their direction.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Vector2, Vector3, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::exec::{map_indices, Exec};
use crate::line_space::{line_to_points, metric_field_l, OrientedLine};
use crate::tensor::{pullback_metric, SmoothMap};

/// Relative width of the band treated as an exact case boundary.
pub const CASE_BAND: f64 = 1e-12;
/// Unit-modulus and coincidence tolerance of the brute-force root test.
pub const ROOT_TOL: f64 = 1e-7;
const POLE_PHI: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntersectionConfig {
    pub r1: f64,
    pub r2: f64,
    pub l: f64,
}

impl IntersectionConfig {
    pub fn new(r1: f64, r2: f64, l: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite() && l.is_finite()) {
            return Err(GeomError::Input("non-finite configuration".into()));
        }
        if !(r2 > 0.0 && r1 >= r2 && l >= 0.0) {
            return Err(GeomError::Input(format!("need r₁ ≥ r₂ > 0 and l ≥ 0, got ({r1}, {r2}, {l})")));
        }
        if l == 0.0 && r1 == r2 {
            return Err(GeomError::Input("identical spheres".into()));
        }
        Ok(Self { r1, r2, l })
    }

    fn band(&self) -> f64 {
        CASE_BAND * (self.r1 + self.r2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionCase {
    Empty,
    Circle,
    Torus,
    TwoTori,
}

pub fn classify(cfg: &IntersectionConfig) -> IntersectionCase {
    let (d, s, l, b) = (cfg.r1 - cfg.r2, cfg.r1 + cfg.r2, cfg.l, cfg.band());
    if (l - d).abs() <= b {
        IntersectionCase::Circle
    } else if l < d {
        IntersectionCase::Empty
    } else if l <= s + b {
        IntersectionCase::Torus
    } else {
        IntersectionCase::TwoTori
    }
}

/// K = (r₁² − r₂² + l²sin²φ)/(2lr₁ sin φ).
pub fn k_of_phi(cfg: &IntersectionConfig, phi: f64) -> Result<f64> {
    let s = phi.sin();
    if cfg.l == 0.0 || !(phi > 0.0 && phi < PI) || s == 0.0 {
        return Err(GeomError::Domain(format!("K undefined for l = {}, φ = {phi}", cfg.l)));
    }
    let (r1, r2, l) = (cfg.r1, cfg.r2, cfg.l);
    Ok((r1 * r1 - r2 * r2 + l * l * s * s) / (2.0 * l * r1 * s))
}

/// r₁ − r₂ ≤ l sin φ ≤ r₁ + r₂.
pub fn in_existence_region(cfg: &IntersectionConfig, phi: f64) -> bool {
    let ls = cfg.l * phi.sin();
    cfg.r1 - cfg.r2 <= ls && ls <= cfg.r1 + cfg.r2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TorusSample {
    pub phi: f64,
    pub theta: f64,
    pub branch: Branch,
    pub line: OrientedLine,
    /// Phase ψ of η.
    pub eta_phase: f64,
}

fn line_from_phase(cfg: &IntersectionConfig, phi: f64, theta: f64, w: Complex64) -> OrientedLine {
    let rr = (phi / 2.0).tan();
    let e = Complex64::from_polar(1.0, theta);
    OrientedLine { xi: e * rr, eta: w * e * (0.5 * (1.0 + rr * rr) * cfg.r1) }
}

/// ξ = tan(φ/2)e^{iθ}, η = ½(1 + R²)r₁(−K ± i√(1 − K²))e^{iθ}.
pub fn torus_point(cfg: &IntersectionConfig, phi: f64, theta: f64, branch: Branch) -> Result<TorusSample> {
    let k = k_of_phi(cfg, phi)?;
    if k.abs() > 1.0 + 1e-12 {
        return Err(GeomError::Existence(format!("|K| = {k} > 1 at φ = {phi}")));
    }
    let k = k.clamp(-1.0, 1.0);
    let w = Complex64::new(-k, branch.sign() * (1.0 - k * k).sqrt());
    let line = line_from_phase(cfg, phi, theta, w);
    Ok(TorusSample { phi, theta, branch, line, eta_phase: line.eta.arg() })
}

/// 2|η|/(1+ξξ̄) − r₁ and 2|η + lξ|/(1+ξξ̄) − r₂.
pub fn tangency_residuals(cfg: &IntersectionConfig, line: &OrientedLine) -> (f64, f64) {
    let d = 1.0 + line.xi.norm_sqr();
    (2.0 * line.eta.norm() / d - cfg.r1, 2.0 * (line.eta + line.xi * cfg.l).norm() / d - cfg.r2)
}

/// Distances in R³ from both centres to the line.
pub fn centre_distances(cfg: &IntersectionConfig, line: &OrientedLine) -> (f64, f64) {
    let p0 = line_to_points(line, 0.0);
    let dir = line_to_points(line, 1.0) - p0;
    let dist = |c: Vector3<f64>| {
        let v = c - p0;
        (v - dir * v.dot(&dir)).norm()
    };
    (dist(Vector3::zeros()), dist(Vector3::new(0.0, 0.0, cfg.l)))
}

/// (|σ|², λ) on the strict interior of the existence region.
pub fn sigma_lambda(cfg: &IntersectionConfig, phi: f64) -> Result<(f64, f64)> {
    let (r1, r2, l) = (cfg.r1, cfg.r2, cfg.l);
    let x = (l * phi.sin()).powi(2);
    let f1 = x - (r1 - r2).powi(2);
    let f2 = (r1 + r2).powi(2) - x;
    let scale = (r1 + r2).powi(2);
    if !(f1 > 1e-14 * scale && f2 > 1e-14 * scale) {
        return Err(GeomError::Pole(format!("φ = {phi} on or outside the existence boundary")));
    }
    let c = (FRAC_PI_2 - phi).sin();
    let p = f1 * f2;
    let sigma_sq = r1 * r1 * r2 * r2 * l * l * c * c / p;
    let lambda = -l * (x - r1 * r1 - r2 * r2) * c / (2.0 * p.sqrt());
    Ok((sigma_sq, lambda))
}

/// −¼l²cos²φ.
pub fn torus_det_closed(cfg: &IntersectionConfig, phi: f64) -> f64 {
    -0.25 * cfg.l * cfg.l * (FRAC_PI_2 - phi).sin().powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TorusMetricCheck {
    pub det_closed: f64,
    pub det_numeric: f64,
    pub complex_point: bool,
}

/// Chart map (φ, θ) ↦ line coordinates on one branch.
pub fn torus_map(cfg: &IntersectionConfig, branch: Branch) -> SmoothMap<2, 4> {
    let cfg = *cfg;
    SmoothMap::new(move |p: &Vector2<f64>| match torus_point(&cfg, p[0], p[1], branch) {
        Ok(s) => s.line.to_chart(),
        Err(_) => Vector4::from_element(f64::NAN),
    })
}

/// Compares −¼l²cos²φ with the differenced pullback determinant, normalized by sin²φ.
pub fn torus_metric_check(cfg: &IntersectionConfig, phi: f64, theta: f64, branch: Branch) -> Result<TorusMetricCheck> {
    torus_point(cfg, phi, theta, branch)?;
    let g = pullback_metric(&torus_map(cfg, branch), &metric_field_l(), &Vector2::new(phi, theta), 1e-5)?;
    let det_numeric = g.determinant() / phi.sin().powi(2);
    let complex_point = match sigma_lambda(cfg, phi) {
        Ok((s2, _)) => s2.sqrt() <= 1e-8,
        Err(_) => false,
    };
    Ok(TorusMetricCheck { det_closed: torus_det_closed(cfg, phi), det_numeric, complex_point })
}

/// Roots of a w² + b w + c = 0.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> Result<[Complex64; 2]> {
    if a.norm() == 0.0 {
        return Err(GeomError::Degenerate("leading coefficient vanishes".into()));
    }
    let disc = (b * b - a * c * 4.0).sqrt();
    // Pair the root of larger magnitude with the stable sign choice.
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
    if q.norm() == 0.0 {
        return Ok([Complex64::new(0.0, 0.0); 2]);
    }
    Ok([q / a, c / q])
}

/// Unit roots w = e^{i(ψ−θ)} of lr₁ sinφ w² + (l²sin²φ + r₁² − r₂²) w + lr₁ sinφ = 0, Im w descending.
fn unit_roots(cfg: &IntersectionConfig, phi: f64) -> Option<[Complex64; 2]> {
    let s = phi.sin();
    let a = Complex64::new(cfg.l * cfg.r1 * s, 0.0);
    let b = Complex64::new(cfg.l * cfg.l * s * s + cfg.r1 * cfg.r1 - cfg.r2 * cfg.r2, 0.0);
    let mut roots = quadratic_roots(a, b, a).ok()?;
    if roots.iter().any(|w| (w.norm() - 1.0).abs() > ROOT_TOL) {
        return None;
    }
    if roots[0].im < roots[1].im {
        roots.swap(0, 1);
    }
    Some(roots)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceResult {
    /// None when the component structure matches no case.
    pub case: Option<IntersectionCase>,
    pub components: usize,
    /// φ rows solved, including boundary rows added by bisection.
    pub rows: Vec<f64>,
    pub points: Vec<TorusSample>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Grid scan of the tangency quadratic with union-find component counting.
///
/// Rows are φ = kπ/grid_n (so φ = π/2 is a row); where solvability changes
/// between neighbouring rows the boundary is located by bisection and added
/// as a row, since the two branches join there.
pub fn brute_force_intersection(cfg: &IntersectionConfig, grid_n: usize, exec: Exec) -> Result<BruteForceResult> {
    if grid_n < 64 {
        return Err(GeomError::Input(format!("grid_n = {grid_n} must be at least 64")));
    }
    let n_phi = grid_n + grid_n % 2;
    let n_theta = n_phi;
    let base: Vec<f64> = (1..n_phi).map(|k| PI * k as f64 / n_phi as f64).collect();
    let solvable = |phi: f64| cfg.l > 0.0 && unit_roots(cfg, phi).is_some();
    let flags = map_indices(base.len(), exec, |i| solvable(base[i]));
    let mut rows = Vec::with_capacity(base.len() + 8);
    for i in 0..base.len() {
        if flags[i] {
            rows.push(base[i]);
        }
        if i + 1 < base.len() && flags[i] != flags[i + 1] {
            let (mut inside, mut outside) = if flags[i] { (base[i], base[i + 1]) } else { (base[i + 1], base[i]) };
            for _ in 0..200 {
                let mid = 0.5 * (inside + outside);
                if mid == inside || mid == outside {
                    break;
                }
                if solvable(mid) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            rows.push(inside);
        }
    }
    rows.sort_by(|a, b| a.partial_cmp(b).expect("finite rows"));
    rows.dedup();

    let roots: Vec<[Complex64; 2]> = map_indices(rows.len(), exec, |i| unit_roots(cfg, rows[i]).expect("row is solvable"));
    let nodes = rows.len() * n_theta * 2;
    let id = |i: usize, j: usize, b: usize| (i * n_theta + j) * 2 + b;
    let mut uf = UnionFind::new(nodes);
    let mut all_coincident = true;
    for (i, r) in roots.iter().enumerate() {
        let coincident = (r[0] - r[1]).norm() <= 4.0 * ROOT_TOL;
        all_coincident &= coincident;
        for j in 0..n_theta {
            for b in 0..2 {
                uf.union(id(i, j, b), id(i, (j + 1) % n_theta, b));
            }
            if coincident {
                uf.union(id(i, j, 0), id(i, j, 1));
            }
        }
    }
    // Consecutive rows are adjacent unless an unsolvable scan row separates them.
    let gaps: Vec<f64> = base.iter().zip(&flags).filter(|(_, &f)| !f).map(|(&p, _)| p).collect();
    for i in 0..rows.len().saturating_sub(1) {
        let (a, b) = (rows[i], rows[i + 1]);
        if !gaps.iter().any(|&g| a < g && g < b) {
            for j in 0..n_theta {
                for br in 0..2 {
                    uf.union(id(i, j, br), id(i + 1, j, br));
                }
            }
        }
    }
    // Near an axis direction (θ, +) and (θ + π, −) tend to the same line.
    let last = base.len() - 1;
    for (pole, row, base_row) in [(POLE_PHI, 0, 0), (PI - POLE_PHI, rows.len().wrapping_sub(1), last)] {
        if !rows.is_empty() && flags[base_row] && rows[row] == base[base_row] && solvable(pole) {
            for j in 0..n_theta {
                uf.union(id(row, j, 0), id(row, (j + n_theta / 2) % n_theta, 1));
            }
        }
    }
    let mut reps: Vec<usize> = (0..nodes).map(|k| uf.find(k)).collect();
    reps.sort_unstable();
    reps.dedup();
    let components = reps.len();
    let case = match components {
        0 => Some(IntersectionCase::Empty),
        1 if all_coincident => Some(IntersectionCase::Circle),
        1 => Some(IntersectionCase::Torus),
        2 if !all_coincident => Some(IntersectionCase::TwoTori),
        _ => None,
    };
    let mut points = Vec::with_capacity(nodes);
    for (i, r) in roots.iter().enumerate() {
        for j in 0..n_theta {
            let theta = TAU * j as f64 / n_theta as f64;
            for (b, branch) in [Branch::Plus, Branch::Minus].into_iter().enumerate() {
                let line = line_from_phase(cfg, rows[i], theta, r[b]);
                points.push(TorusSample { phi: rows[i], theta, branch, line, eta_phase: line.eta.arg() });
            }
        }
    }
    Ok(BruteForceResult { case, components, rows, points })
}

/// Range of K over the existence region, sampled on the scan rows.
pub fn k_range(cfg: &IntersectionConfig, rows: &[f64]) -> Option<(f64, f64)> {
    let ks: Vec<f64> = rows.iter().filter_map(|&p| k_of_phi(cfg, p).ok()).collect();
    if ks.is_empty() {
        return None;
    }
    Some((ks.iter().cloned().fold(f64::INFINITY, f64::min), ks.iter().cloned().fold(f64::NEG_INFINITY, f64::max)))
}

/// Common normal lines of the two spheres inside the chart: the centre axis, directed up.
pub fn normal_congruence_intersection(cfg: &IntersectionConfig) -> Vec<OrientedLine> {
    if cfg.l == 0.0 {
        return vec![];
    }
    vec![OrientedLine { xi: Complex64::new(0.0, 0.0), eta: Complex64::new(0.0, 0.0) }]
}

/// Mean perpendicular distance from the centre of lines meeting a sphere of radius ρ at angle 2 arctan ε
/// to its normal, with the largest deviation from the mean.
pub fn constant_angle_effective_radius(rho: f64, eps: f64, samples: usize) -> Result<(f64, f64)> {
    use crate::line_space::{hypersurface::tangent_hypersurface_point, perpendicular_distance, SupportSurface};
    let s = SupportSurface::round_sphere(rho, Vector3::zeros());
    let n = samples.max(4);
    let mut vals = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let nu = Complex64::from_polar(0.2 + 1.5 * i as f64 / n as f64, TAU * k as f64 / n as f64);
            let jet = s.jet(nu)?;
            let a = FRAC_PI_2 * (k as f64 + i as f64 * 0.37);
            vals.push(perpendicular_distance(&tangent_hypersurface_point(&jet, a, Some(eps))?));
        }
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let dev = vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    Ok((mean, dev))
}
