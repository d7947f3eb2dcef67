//! Conformal compactification of R^{2,2} into the ball of radius π/2.
//!
//! A point x is written in double polar form x¹+ix² = R₁e^{iθ₁},
//! x³+ix⁴ = R₂e^{iθ₂}, and sent to (p, q) with tan p = R₁+R₂,
//! tan q = R₁−R₂. The image metric is
//! dp dq + ¼ sin²(p+q) dθ₁² − ¼ sin²(p−q) dθ₂².

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Matrix4, SMatrix, Vector3, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::exec::{map_indices, Exec};
use crate::tensor::{
    flat_neutral, pullback_metric, ChartMetricField, MetricField, NeutralVec4, NullPlaneKind, OneFormField, SmoothMap, TangentPlane,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DoublePolarPoint {
    pub r1: f64,
    pub r2: f64,
    pub theta1: f64,
    pub theta2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompactChartPoint {
    pub p: f64,
    pub q: f64,
    pub theta1: f64,
    pub theta2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallPoint {
    pub z1: Complex64,
    pub z2: Complex64,
    pub psi: f64,
}

impl BallPoint {
    pub fn to_r4(&self) -> Vector4<f64> {
        Vector4::new(self.z1.re, self.z1.im, self.z2.re, self.z2.im)
    }

    pub fn radius(&self) -> f64 {
        (self.z1.norm_sqr() + self.z2.norm_sqr()).sqrt()
    }
}

impl CompactChartPoint {
    pub fn new(p: f64, q: f64, theta1: f64, theta2: f64) -> Result<Self> {
        let ok = [p, q, theta1, theta2].iter().all(|v| v.is_finite()) && (-1e-15..=FRAC_PI_2 + 1e-15).contains(&p) && q.abs() <= p + 1e-15;
        if !ok {
            return Err(GeomError::Domain(format!("compact chart point ({p}, {q})")));
        }
        Ok(Self { p, q, theta1, theta2 })
    }

    pub fn as_vec(&self) -> Vector4<f64> {
        Vector4::new(self.p, self.q, self.theta1, self.theta2)
    }

    pub fn on_boundary(&self) -> bool {
        (self.p - FRAC_PI_2).abs() <= 1e-12
    }
}

fn angle(y: f64, x: f64) -> f64 {
    if x == 0.0 && y == 0.0 {
        return 0.0;
    }
    let a = y.atan2(x);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

pub fn double_polar(x: &NeutralVec4) -> DoublePolarPoint {
    DoublePolarPoint { r1: x[0].hypot(x[1]), r2: x[2].hypot(x[3]), theta1: angle(x[1], x[0]), theta2: angle(x[3], x[2]) }
}

pub fn to_compact(x: &NeutralVec4) -> CompactChartPoint {
    let d = double_polar(x);
    CompactChartPoint { p: (d.r1 + d.r2).atan(), q: (d.r1 - d.r2).atan(), theta1: d.theta1, theta2: d.theta2 }
}

/// Inverse of [`to_compact`] on the open ball.
pub fn from_compact(c: &CompactChartPoint) -> Result<NeutralVec4> {
    if c.p >= FRAC_PI_2 {
        return Err(GeomError::Domain("boundary point has no preimage".into()));
    }
    let (tp, tq) = (c.p.tan(), c.q.tan());
    let r1 = 0.5 * (tp + tq);
    let r2 = 0.5 * (tp - tq);
    Ok(Vector4::new(r1 * c.theta1.cos(), r1 * c.theta1.sin(), r2 * c.theta2.cos(), r2 * c.theta2.sin()))
}

pub fn to_ball(c: &CompactChartPoint) -> BallPoint {
    let psi = if c.p == 0.0 { FRAC_PI_2 } else { (c.q / c.p).clamp(-1.0, 1.0).acos() };
    BallPoint {
        z1: Complex64::from_polar(c.p * (0.5 * psi).sin(), c.theta1),
        z2: Complex64::from_polar(c.p * (0.5 * psi).cos(), c.theta2),
        psi,
    }
}

/// Ω = cos p cos q, so that the pullback of the image metric is Ω² times the flat one.
pub fn conformal_factor(c: &CompactChartPoint) -> f64 {
    c.p.cos() * c.q.cos()
}

pub fn einstein_static_metric() -> ChartMetricField {
    MetricField::new("einstein-static", |x: &Vector4<f64>| {
        let (p, q) = (x[0], x[1]);
        let mut m = Matrix4::zeros();
        m[(0, 1)] = 0.5;
        m[(1, 0)] = 0.5;
        m[(2, 2)] = 0.25 * (p + q).sin().powi(2);
        m[(3, 3)] = -0.25 * (p - q).sin().powi(2);
        m
    })
}

/// x ↦ (p, q, θ₁, θ₂) with its closed-form Jacobian (requires R₁, R₂ > 0).
pub fn compact_chart_map() -> SmoothMap<4, 4> {
    SmoothMap::new(|x: &Vector4<f64>| to_compact(x).as_vec()).with_jacobian(|x: &Vector4<f64>| {
        let d = double_polar(x);
        let s = d.r1 + d.r2;
        let t = d.r1 - d.r2;
        let dr1 = [x[0] / d.r1, x[1] / d.r1, 0.0, 0.0];
        let dr2 = [0.0, 0.0, x[2] / d.r2, x[3] / d.r2];
        let mut j = SMatrix::<f64, 4, 4>::zeros();
        for k in 0..4 {
            j[(0, k)] = (dr1[k] + dr2[k]) / (1.0 + s * s);
            j[(1, k)] = (dr1[k] - dr2[k]) / (1.0 + t * t);
        }
        let a = d.r1 * d.r1;
        let b = d.r2 * d.r2;
        j[(2, 0)] = -x[1] / a;
        j[(2, 1)] = x[0] / a;
        j[(3, 2)] = -x[3] / b;
        j[(3, 3)] = x[2] / b;
        j
    })
}

/// Same map with angles continued smoothly around `x0`; lets the
/// differencer run without hitting the angular branch cut.
pub fn compact_chart_map_near(x0: NeutralVec4) -> SmoothMap<4, 4> {
    let c0 = to_compact(&x0);
    let w1 = Complex64::new(x0[0], x0[1]).conj();
    let w2 = Complex64::new(x0[2], x0[3]).conj();
    SmoothMap::new(move |x: &Vector4<f64>| {
        let c = to_compact(x);
        let a1 = (Complex64::new(x[0], x[1]) * w1).arg();
        let a2 = (Complex64::new(x[2], x[3]) * w2).arg();
        Vector4::new(c.p, c.q, c0.theta1 + a1, c0.theta2 + a2)
    })
}

/// Largest relative deviation ‖C*g − Ω²η‖/‖Ω²η‖ of the pulled-back
/// Einstein static metric over `points`, differenced at step `h`.
pub fn conformality_sweep(points: &[NeutralVec4], h: f64, exec: Exec) -> Result<f64> {
    let g = einstein_static_metric();
    let flat = flat_neutral();
    let errs = map_indices(points.len(), exec, |i| -> Result<f64> {
        let x = points[i];
        let want = flat.at(&x)? * conformal_factor(&to_compact(&x)).powi(2);
        let got = pullback_metric(&compact_chart_map_near(x), &g, &x, h)?;
        Ok((got - want).norm() / want.norm())
    });
    errs.into_iter().try_fold(0.0f64, |m, e| Ok(m.max(e?)))
}

/// Euclidean norm of the components of dΩ at a boundary point.
pub fn grad_omega_boundary_locus(c: &CompactChartPoint) -> Result<f64> {
    if !c.on_boundary() {
        return Err(GeomError::Domain(format!("p = {} is not on the boundary", c.p)));
    }
    let dp = -c.p.sin() * c.q.cos();
    let dq = -c.p.cos() * c.q.sin();
    Ok(dp.hypot(dq))
}

/// Membership in the zero locus of dΩ on the boundary.
pub fn on_hopf_link(c: &CompactChartPoint) -> bool {
    c.on_boundary() && c.q.cos().abs() <= 1e-9
}

/// Degenerate metric ¼cos²q (dθ₁² − dθ₂²) in the boundary chart (q, θ₁, θ₂).
pub fn boundary_metric() -> MetricField<3> {
    MetricField::new("boundary", |x: &Vector3<f64>| {
        let c = 0.25 * x[0].cos().powi(2);
        SMatrix::<f64, 3, 3>::from_diagonal(&Vector3::new(0.0, c, -c))
    })
    .allow_degenerate()
}

/// (q, θ₁, θ₂) ↦ (π/2, q, θ₁, θ₂).
pub fn boundary_inclusion() -> SmoothMap<3, 4> {
    SmoothMap::new(|x: &Vector3<f64>| Vector4::new(FRAC_PI_2, x[0], x[1], x[2])).with_jacobian(|_| {
        let mut j = SMatrix::<f64, 4, 3>::zeros();
        j[(1, 0)] = 1.0;
        j[(2, 1)] = 1.0;
        j[(3, 2)] = 1.0;
        j
    })
}

#[derive(Clone)]
pub struct BoundaryNullPlane {
    pub kind: NullPlaneKind,
    /// Plane in the (p, q, θ₁, θ₂) chart, based at the boundary point.
    pub plane: TangentPlane,
    /// Annihilating form in the boundary chart (q, θ₁, θ₂).
    pub form: OneFormField<3>,
    /// Direction (a, b) the plane cuts out on the torus q = const.
    pub torus_direction: (i32, i32),
}

/// The α-plane span{∂_q, ∂_θ₁+∂_θ₂} with ω = dθ₁ − dθ₂, and the β-plane
/// span{∂_q, ∂_θ₁−∂_θ₂} with ω = dθ₁ + dθ₂.
pub fn boundary_null_planes(q: f64, theta1: f64, theta2: f64) -> Result<[BoundaryNullPlane; 2]> {
    if !(q.abs() < FRAC_PI_2) {
        return Err(GeomError::Domain(format!("|q| = {} must be < π/2", q.abs())));
    }
    let base = Vector4::new(FRAC_PI_2, q, theta1, theta2);
    let dq = Vector4::new(0.0, 1.0, 0.0, 0.0);
    let alpha = TangentPlane::new(base, dq, Vector4::new(0.0, 0.0, 1.0, 1.0))?;
    let beta = TangentPlane::new(base, dq, Vector4::new(0.0, 0.0, 1.0, -1.0))?;
    Ok([
        BoundaryNullPlane {
            kind: NullPlaneKind::Alpha,
            plane: alpha,
            form: OneFormField::constant(Vector3::new(0.0, 1.0, -1.0)),
            torus_direction: (1, 1),
        },
        BoundaryNullPlane {
            kind: NullPlaneKind::Beta,
            plane: beta,
            form: OneFormField::constant(Vector3::new(0.0, 1.0, 1.0)),
            torus_direction: (1, -1),
        },
    ])
}

/// Point of the Hopf-link circle ψ = 0 (`first = true`) or ψ = π, as a point of R⁴.
pub fn hopf_circle(first: bool, t: f64) -> Vector4<f64> {
    let q = if first { FRAC_PI_2 } else { -FRAC_PI_2 };
    let (a, b) = if first { (0.0, t) } else { (t, 0.0) };
    to_ball(&CompactChartPoint { p: FRAC_PI_2, q, theta1: a, theta2: b }).to_r4()
}

/// Stereographic projection of the sphere of radius `rho` from `pole`.
pub fn stereographic(x: &Vector4<f64>, pole: &Vector4<f64>, rho: f64) -> Vector3<f64> {
    let n = pole.normalize();
    let mut basis: Vec<Vector4<f64>> = Vec::with_capacity(3);
    for k in 0..4 {
        let mut e = Vector4::zeros();
        e[k] = 1.0;
        let mut v = e - n * n.dot(&e);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-6 && basis.len() < 3 {
            basis.push(v.normalize());
        }
    }
    let y = x / rho;
    let s = (y - n * n.dot(&y)) / (1.0 - n.dot(&y));
    Vector3::new(basis[0].dot(&s), basis[1].dot(&s), basis[2].dot(&s))
}

/// Gauss linking integral of the two boundary circles where dΩ vanishes.
///
/// The circles are oriented by increasing θ₂ (ψ = 0) and decreasing θ₁
/// (ψ = π) and projected to R³ from a pole that lies on neither; with this
/// orientation the Hopf link has linking number +1.
pub fn hopf_linking_number(n: usize) -> f64 {
    let pole = Vector4::new(1.0, 0.0, 1.0, 0.0) * (FRAC_PI_2 / 2f64.sqrt());
    let curve = |first: bool, t: f64| {
        let t = if first { t } else { -t };
        stereographic(&hopf_circle(first, t), &pole, FRAC_PI_2)
    };
    let h = 1e-5;
    let tangent = |first: bool, t: f64| crate::tensor::richardson(|s| curve(first, t + s), h);
    let dt = TAU / n as f64;
    let a: Vec<_> = (0..n).map(|i| (curve(true, i as f64 * dt), tangent(true, i as f64 * dt))).collect();
    let b: Vec<_> = (0..n).map(|i| (curve(false, i as f64 * dt), tangent(false, i as f64 * dt))).collect();
    let mut s = 0.0;
    for (x, dx) in &a {
        for (y, dy) in &b {
            let r = x - y;
            s += dx.cross(dy).dot(&r) / r.norm().powi(3);
        }
    }
    s * dt * dt / (4.0 * PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Admits,
    Obstructed,
}

/// Necessary condition χ ± τ ≡ 0 (mod 4) for a compact neutral 4-manifold.
pub fn neutral_existence_parity(chi: i64, tau: i64) -> Parity {
    if (chi + tau).rem_euclid(4) == 0 && (chi - tau).rem_euclid(4) == 0 {
        Parity::Admits
    } else {
        Parity::Obstructed
    }
}
