//! Convex surfaces given by their support function on the direction sphere.

use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use super::{direction, line_to_points, ser_complex, OrientedLine};
use crate::dual2::Dual2;
use crate::error::{GeomError, Result};

/// Support value with first and second partials in ν = x + iy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportDerivs {
    pub r: f64,
    pub rx: f64,
    pub ry: f64,
    pub rxx: f64,
    pub rxy: f64,
    pub ryy: f64,
}

type SupportFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;
type DerivFn = Arc<dyn Fn(Complex64) -> SupportDerivs + Send + Sync>;

#[derive(Clone)]
pub struct SupportSurface {
    label: String,
    r0: SupportFn,
    derivs: Option<DerivFn>,
    domain_radius: f64,
    fd_step: f64,
}

/// Pointwise data of the normal congruence at ν.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceJet {
    #[serde(serialize_with = "ser_complex")]
    pub nu: Complex64,
    pub r0: f64,
    #[serde(serialize_with = "ser_complex")]
    pub eta0: Complex64,
    /// Mean radius of curvature (r₁ + r₂)/2.
    pub psi0: f64,
    /// |σ₀| = (r₁ − r₂)/2.
    #[serde(serialize_with = "ser_complex")]
    pub sigma0: Complex64,
}

impl SurfaceJet {
    /// Builds a jet from raw values, checking strict convexity.
    pub fn new(nu: Complex64, r0: f64, eta0: Complex64, psi0: f64, sigma0: Complex64) -> Result<Self> {
        let j = Self { nu, r0, eta0, psi0, sigma0 };
        if !(j.convexity() > 0.0 && psi0 > 0.0) {
            return Err(GeomError::Convexity(format!("ψ₀² − |σ₀|² = {:e} at ν = {nu}", j.convexity())));
        }
        Ok(j)
    }

    pub fn convexity(&self) -> f64 {
        self.psi0 * self.psi0 - self.sigma0.norm_sqr()
    }

    pub fn d(&self) -> f64 {
        1.0 + self.nu.norm_sqr()
    }

    /// Principal radii (r₁ ≥ r₂).
    pub fn radii(&self) -> (f64, f64) {
        (self.psi0 + self.sigma0.norm(), self.psi0 - self.sigma0.norm())
    }

    pub fn normal_line(&self) -> OrientedLine {
        OrientedLine { xi: self.nu, eta: self.eta0 }
    }

    pub fn surface_point(&self) -> Vector3<f64> {
        line_to_points(&self.normal_line(), self.r0)
    }

    pub fn normal(&self) -> Vector3<f64> {
        direction(self.nu)
    }
}

/// Unit normal (2x, 2y, 1 − x² − y²)/(1 + x² + y²) in dual arithmetic.
pub fn dual_normal(x: Dual2, y: Dual2) -> [Dual2; 3] {
    let q = x * x + y * y;
    let d = (q + 1.0).recip();
    [x * d * 2.0, y * d * 2.0, (1.0 - q) * d]
}

impl SupportSurface {
    /// Support function without derivatives; jets use central differences.
    pub fn from_fn<F>(label: &str, r0: F, domain_radius: f64) -> Self
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        Self { label: label.to_string(), r0: Arc::new(r0), derivs: None, domain_radius, fd_step: 1e-5 }
    }

    /// Support function written once in dual arithmetic of (Re ν, Im ν).
    pub fn from_dual<F>(label: &str, f: F, domain_radius: f64) -> Self
    where
        F: Fn(Dual2, Dual2) -> Dual2 + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let g = f.clone();
        let mut s = Self::from_fn(label, move |nu| g(Dual2::constant(nu.re), Dual2::constant(nu.im)).v, domain_radius);
        s.derivs = Some(Arc::new(move |nu: Complex64| {
            let v = f(Dual2::var_x(nu.re), Dual2::var_y(nu.im));
            SupportDerivs { r: v.v, rx: v.d[0], ry: v.d[1], rxx: v.h[0], rxy: v.h[1], ryy: v.h[2] }
        }));
        s
    }

    pub fn with_derivs<F>(mut self, d: F) -> Self
    where
        F: Fn(Complex64) -> SupportDerivs + Send + Sync + 'static,
    {
        self.derivs = Some(Arc::new(d));
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    /// Sphere of radius ρ centred at `c`: r₀ = ρ + c·n.
    pub fn round_sphere(rho: f64, c: Vector3<f64>) -> Self {
        Self::from_dual(
            "round sphere",
            move |x, y| {
                let n = dual_normal(x, y);
                n[0] * c[0] + n[1] * c[1] + n[2] * c[2] + rho
            },
            1e3,
        )
    }

    /// Ellipsoid with semi-axes (a, b, c): r₀ = √(a²n₁² + b²n₂² + c²n₃²).
    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Self {
        Self::from_dual(
            "ellipsoid",
            move |x, y| {
                let n = dual_normal(x, y);
                (n[0] * n[0] * (a * a) + n[1] * n[1] * (b * b) + n[2] * n[2] * (c * c)).sqrt()
            },
            1e3,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    pub fn has_analytic_derivs(&self) -> bool {
        self.derivs.is_some()
    }

    fn check(&self, nu: Complex64) -> Result<()> {
        if !(nu.re.is_finite() && nu.im.is_finite()) || nu.norm() > self.domain_radius {
            return Err(GeomError::Domain(format!("ν = {nu} outside |ν| ≤ {}", self.domain_radius)));
        }
        Ok(())
    }

    pub fn support(&self, nu: Complex64) -> Result<f64> {
        self.check(nu)?;
        Ok((self.r0)(nu))
    }

    pub fn derivs(&self, nu: Complex64) -> Result<SupportDerivs> {
        self.check(nu)?;
        let d = match &self.derivs {
            Some(d) => d(nu),
            None => {
                let h = self.fd_step;
                let f = |dx: f64, dy: f64| (self.r0)(nu + Complex64::new(dx, dy));
                let r = f(0.0, 0.0);
                SupportDerivs {
                    r,
                    rx: (f(h, 0.0) - f(-h, 0.0)) / (2.0 * h),
                    ry: (f(0.0, h) - f(0.0, -h)) / (2.0 * h),
                    rxx: (f(h, 0.0) - 2.0 * r + f(-h, 0.0)) / (h * h),
                    ryy: (f(0.0, h) - 2.0 * r + f(0.0, -h)) / (h * h),
                    rxy: (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h),
                }
            }
        };
        let all = [d.r, d.rx, d.ry, d.rxx, d.rxy, d.ryy];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::Numerical(format!("non-finite support derivatives at ν = {nu}")));
        }
        Ok(d)
    }

    /// η₀ = ½(1+νν̄)²∂_ν̄ r₀, ψ₀ = r₀ + ½(1+νν̄)²∂_ν∂_ν̄ r₀, σ₀ = −∂_ν η̄₀.
    pub fn jet(&self, nu: Complex64) -> Result<SurfaceJet> {
        let s = self.derivs(nu)?;
        let d = 1.0 + nu.norm_sqr();
        let dr = Complex64::new(0.5 * s.rx, -0.5 * s.ry);
        let ddr = Complex64::new(0.25 * (s.rxx - s.ryy), -0.5 * s.rxy);
        let eta0 = dr.conj() * (0.5 * d * d);
        let psi0 = s.r + d * d * (s.rxx + s.ryy) / 8.0;
        let sigma0 = -(nu.conj() * dr * d + ddr * (0.5 * d * d));
        SurfaceJet::new(nu, s.r, eta0, psi0, sigma0)
    }

    pub fn surface_point(&self, nu: Complex64) -> Result<Vector3<f64>> {
        Ok(self.jet(nu)?.surface_point())
    }

    /// Strict convexity on a polar grid of the disc |ν| ≤ min(radius, domain).
    pub fn validate_convexity(&self, radius: f64, n: usize) -> Result<()> {
        let rad = radius.min(self.domain_radius);
        for i in 0..=n {
            let r = rad * i as f64 / n as f64;
            for k in 0..(4 * n).max(1) {
                let t = std::f64::consts::TAU * k as f64 / (4 * n).max(1) as f64;
                self.jet(Complex64::from_polar(r, t))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_space::{incidence_eta, translate};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_support() {
        let s = SupportSurface::from_fn("unit", |_| 1.0, 10.0);
        let j = s.jet(c(0.3, -0.2)).unwrap();
        assert!(j.eta0.norm() < 1e-12 && (j.psi0 - 1.0).abs() < 1e-6 && j.sigma0.norm() < 1e-6);
        let s = SupportSurface::from_dual("unit", |_, _| Dual2::constant(1.0), 10.0);
        let j = s.jet(c(0.3, -0.2)).unwrap();
        assert_eq!((j.eta0.norm(), j.psi0, j.sigma0.norm()), (0.0, 1.0, 0.0));
    }

    #[test]
    fn translated_sphere() {
        let centre = Vector3::new(0.4, -0.3, 0.7);
        let rho = 1.5;
        let s = SupportSurface::round_sphere(rho, centre);
        let fd = SupportSurface::from_fn("fd", move |nu| rho + direction(nu).dot(&centre), 10.0);
        for &nu in &[c(0.0, 0.0), c(0.5, 0.2), c(-1.3, 2.0)] {
            let j = s.jet(nu).unwrap();
            assert!((j.psi0 - rho).abs() < 1e-12 && j.sigma0.norm() < 1e-12);
            // Translation acts on the normal line by η ↦ η + incidence(ξ, c).
            let moved = translate(&OrientedLine { xi: nu, eta: c(0.0, 0.0) }, &centre);
            assert!((moved.eta - j.eta0).norm() < 1e-12);
            assert!(((j.surface_point() - centre).norm() - rho).abs() < 1e-12);
            let k = fd.jet(nu).unwrap();
            assert!((k.eta0 - j.eta0).norm() < 1e-8 && (k.psi0 - rho).abs() < 1e-4);
            assert!(k.sigma0.norm() < 1e-4);
        }
    }

    #[test]
    fn ellipsoid_pole_radii() {
        let e = SupportSurface::ellipsoid(2.0, 1.5, 1.0);
        let j = e.jet(c(0.0, 0.0)).unwrap();
        assert!((j.psi0 - 3.125).abs() < 1e-12);
        assert!((j.sigma0 - c(-0.875, 0.0)).norm() < 1e-12);
        let (r1, r2) = j.radii();
        assert!((r1 - 4.0).abs() < 1e-12 && (r2 - 2.25).abs() < 1e-12);
    }

    #[test]
    fn support_point_on_ellipsoid() {
        let (a, b, cc) = (2.0, 1.5, 1.0);
        let e = SupportSurface::ellipsoid(a, b, cc);
        for &nu in &[c(0.2, 0.1), c(-0.7, 0.9), c(1.5, -0.4)] {
            let j = e.jet(nu).unwrap();
            let p = j.surface_point();
            let lhs = (p[0] / a).powi(2) + (p[1] / b).powi(2) + (p[2] / cc).powi(2);
            assert!((lhs - 1.0).abs() < 1e-12);
            let g = Vector3::new(p[0] / (a * a), p[1] / (b * b), p[2] / (cc * cc)).normalize();
            assert!((g - j.normal()).norm() < 1e-12);
            assert!((incidence_eta(nu, &p) - j.eta0).norm() < 1e-12);
            assert!(j.psi0 >= j.sigma0.norm());
        }
    }

    #[test]
    fn convexity_errors() {
        let s = SupportSurface::from_dual("saddle", |x, y| x * x - y * y + 0.01, 5.0);
        assert!(matches!(s.jet(c(0.0, 0.0)), Err(GeomError::Convexity(_))));
        assert!(matches!(s.jet(c(9.0, 0.0)), Err(GeomError::Domain(_))));
        assert!(SupportSurface::ellipsoid(2.0, 1.5, 1.0).validate_convexity(3.0, 8).is_ok());
    }
}
