//! Hypersurfaces of lines built from a convex support surface, in the real chart (x, y, A).

use nalgebra::{Matrix3, Matrix4x3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use super::support::{SupportSurface, SurfaceJet};
use super::OrientedLine;
use crate::error::{GeomError, Result};
use crate::tensor::{OneFormField, Point, SmoothMap};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Line through the point of S with normal ν, at angle A in the tangent plane.
///
/// With `eps = Some(ε)` the line meets the normal at angle 2 arctan ε instead
/// (ε = 0 is the normal line itself, ε = 1 the tangent line).
pub fn tangent_hypersurface_point(jet: &SurfaceJet, a: f64, eps: Option<f64>) -> Result<OrientedLine> {
    let e = eps.unwrap_or(1.0);
    if !(e.is_finite() && e >= 0.0) {
        return Err(GeomError::Input(format!("ε = {e} must be finite and non-negative")));
    }
    let SurfaceJet { nu, r0, eta0, .. } = *jet;
    let w = Complex64::from_polar(e, a);
    let den = 1.0 - nu.conj() * w;
    if den.norm() < 1e-9 {
        return Err(GeomError::Chart("line direction at the chart pole".into()));
    }
    let d = jet.d();
    let xi = (nu + w) / den;
    let eta = (eta0 - w * w * eta0.conj() - w * (d * r0)) / (den * den);
    OrientedLine::new(xi, eta)
}

/// Chart map (x, y, A) ↦ (Re ξ, Im ξ, Re η, Im η); failures evaluate to NaN.
pub fn hypersurface_map(surface: &SupportSurface, eps: Option<f64>) -> SmoothMap<3, 4> {
    let s = surface.clone();
    SmoothMap::new(move |p: &Point<3>| {
        s.jet(Complex64::new(p[0], p[1]))
            .and_then(|j| tangent_hypersurface_point(&j, p[2], eps))
            .map(|l| l.to_chart())
            .unwrap_or_else(|_| Point::<4>::from_element(f64::NAN))
    })
}

/// Jacobian of (x, y, A) ↦ (Re ξ, Im ξ, Re η, Im η) for the tangent line, by the chain rule
/// through ∂_ν η₀ = 2ν̄η₀/(1+νν̄) + ψ₀ − r₀ and ∂_ν̄ η₀ = −σ̄₀.
pub fn tangent_hypersurface_jacobian(jet: &SurfaceJet, a: f64) -> Result<Matrix4x3<f64>> {
    let SurfaceJet { nu, r0, eta0, psi0, sigma0 } = *jet;
    let w = Complex64::from_polar(1.0, a);
    let den = 1.0 - nu.conj() * w;
    if den.norm() < 1e-9 {
        return Err(GeomError::Chart("line direction at the chart pole".into()));
    }
    let d = jet.d();
    let deta = 2.0 * nu.conj() * eta0 / d + psi0 - r0;
    let n = eta0 - w * w * eta0.conj() - w * (d * r0);
    let n_nu = deta + w * w * sigma0 - w * (nu.conj() * r0 + 2.0 * eta0.conj() / d);
    let n_bar = -sigma0.conj() - w * w * deta.conj() - w * (nu * r0 + 2.0 * eta0 / d);
    let n_a = -2.0 * I * w * w * eta0.conj() - I * w * (d * r0);
    let den2 = den * den;
    let den3 = den2 * den;
    // (∂_ν, ∂_ν̄, ∂_A) of ξ and η.
    let xi = [1.0 / den, (nu + w) * w / den2, I * w * d / den2];
    let eta = [n_nu / den2, n_bar / den2 + 2.0 * n * w / den3, n_a / den2 + 2.0 * n * I * nu.conj() * w / den3];
    let cols = |f: [Complex64; 3]| [f[0] + f[1], I * (f[0] - f[1]), f[2]];
    let (cx, ce) = (cols(xi), cols(eta));
    Ok(Matrix4x3::from_fn(|r, c| match r {
        0 => cx[c].re,
        1 => cx[c].im,
        2 => ce[c].re,
        _ => ce[c].im,
    }))
}

/// `hypersurface_map` for tangent lines with the analytic Jacobian attached.
pub fn hypersurface_map_exact(surface: &SupportSurface) -> SmoothMap<3, 4> {
    let s = surface.clone();
    hypersurface_map(surface, None).with_jacobian(move |p: &Point<3>| {
        s.jet(Complex64::new(p[0], p[1]))
            .and_then(|j| tangent_hypersurface_jacobian(&j, p[2]))
            .unwrap_or_else(|_| Matrix4x3::from_element(f64::NAN))
    })
}

/// Induced (degenerate) metric on H(S) in the chart (x, y, A).
pub fn induced_metric_h(jet: &SurfaceJet, a: f64) -> Matrix3<f64> {
    let d2 = jet.d() * jet.d();
    let c = jet.sigma0 + jet.psi0 * Complex64::from_polar(1.0, -2.0 * a);
    let s2 = (jet.sigma0 * Complex64::from_polar(1.0, 2.0 * a)).im;
    let gxx = -2.0 * (c.im + s2) / d2;
    let gxy = -2.0 * c.re / d2;
    let gyy = -2.0 * (s2 - c.im) / d2;
    Matrix3::new(gxx, gxy, 0.0, gxy, gyy, 0.0, 0.0, 0.0, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NullAngles {
    pub alpha: f64,
    pub beta: f64,
}

/// Null directions of H(S): B_α = A + (1/2i) ln[(ψ + σ̄e^{−2iA})/(ψ + σe^{2iA})], B_β = A + π/2.
pub fn null_direction_angles(jet: &SurfaceJet, a: f64) -> NullAngles {
    let w = jet.psi0 + jet.sigma0 * Complex64::from_polar(1.0, 2.0 * a);
    let ratio = w.conj() / w;
    let b_alpha = a + (ratio.ln() / (2.0 * I)).re;
    let tau = std::f64::consts::TAU;
    NullAngles { alpha: b_alpha.rem_euclid(tau), beta: (a + std::f64::consts::FRAC_PI_2).rem_euclid(tau) }
}

/// Tangent vector a∂_A + b(e^{iB}∂_ν + e^{−iB}∂_ν̄) in the chart (x, y, A).
pub fn null_vector(b_angle: f64, a: f64, b: f64) -> Vector3<f64> {
    Vector3::new(b * b_angle.cos(), b * b_angle.sin(), a)
}

/// Angles B ∈ [0, 2π) where the induced metric changes sign on e^{iB}∂_ν + e^{−iB}∂_ν̄,
/// located on `grid` equal cells and reported at the cell midpoint.
pub fn null_direction_scan(jet: &SurfaceJet, a: f64, grid: usize) -> Vec<f64> {
    let g = induced_metric_h(jet, a);
    let q = |t: f64| {
        let v = null_vector(t, 0.0, 1.0);
        v.dot(&(g * v))
    };
    let tau = std::f64::consts::TAU;
    let step = tau / grid as f64;
    (0..grid)
        .filter_map(|k| {
            let (t0, t1) = (step * k as f64, step * (k + 1) as f64);
            let (q0, q1) = (q(t0), q(t1));
            (q0 * q1 < 0.0 || q1 == 0.0).then_some(t0 + 0.5 * step)
        })
        .collect()
}

/// Contact forms ω± on H(S) and their Frobenius coefficients.
///
/// Defects are ω∧dω against dν∧dν̄∧dA read as a real coefficient, which is
/// half the coefficient against dx∧dy∧dA.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContactForms {
    pub omega_plus: [f64; 3],
    pub omega_minus: [f64; 3],
    pub defect_plus: f64,
    pub defect_minus: f64,
}

/// ω⁺ = −Im[(e^{−iA}ψ + e^{iA}σ) dν]·2/(1+νν̄), ω⁻ = 2 Re(e^{−iA} dν).
pub fn contact_forms_h(jet: &SurfaceJet, a: f64) -> ContactForms {
    let d = jet.d();
    let f = (Complex64::from_polar(jet.psi0, -a) + Complex64::from_polar(1.0, a) * jet.sigma0) / d;
    ContactForms {
        omega_plus: [-2.0 * f.im, -2.0 * f.re, 0.0],
        omega_minus: [2.0 * a.cos(), 2.0 * a.sin(), 0.0],
        defect_plus: -2.0 * jet.convexity() / (d * d),
        defect_minus: -2.0,
    }
}

/// ω⁺ as a field on the chart (x, y, A).
pub fn omega_plus_field(surface: &SupportSurface) -> OneFormField<3> {
    let s = surface.clone();
    OneFormField::new(move |p: &Point<3>| match s.jet(Complex64::new(p[0], p[1])) {
        Ok(j) => Vector3::from(contact_forms_h(&j, p[2]).omega_plus),
        Err(_) => Vector3::from_element(f64::NAN),
    })
}

pub fn omega_minus_field() -> OneFormField<3> {
    OneFormField::new(|p: &Point<3>| Vector3::new(2.0 * p[2].cos(), 2.0 * p[2].sin(), 0.0))
}

/// det of the induced metric on the constant-angle hypersurface H_ε(S), for 0 < ε < 1.
pub fn constant_angle_nullity(jet: &SurfaceJet, a: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GeomError::Input(format!("ε = {eps} must lie in (0, 1)")));
    }
    let e2 = eps * eps;
    let d = jet.d();
    let s2 = (jet.sigma0 * Complex64::from_polar(1.0, 2.0 * a)).im;
    Ok(-16.0 * e2 * (1.0 - e2).powi(2) * s2 * jet.convexity() / ((1.0 + e2).powi(4) * d.powi(4)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_space::{direction, line_to_points, metric_field_l, support::SupportSurface};
    use crate::tensor::{frobenius_defect, pullback_metric};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn analytic_jacobian_matches_differences() {
        let s = SupportSurface::ellipsoid(2.0, 1.5, 1.0);
        let fd = hypersurface_map(&s, None);
        let exact = hypersurface_map_exact(&s);
        for (k, nu) in [c(0.0, 0.0), c(0.3, -0.2), c(-0.9, 0.7), c(1.2, 0.4)].into_iter().enumerate() {
            let p = Point::<3>::new(nu.re, nu.im, 0.4 + 1.3 * k as f64);
            let a = exact.jacobian(&p, 1e-4).unwrap();
            let b = fd.jacobian(&p, 1e-4).unwrap();
            assert!((a - b).abs().max() < 1e-7 * (1.0 + a.abs().max()), "{a} {b}");
            let g = pullback_metric(&exact, &metric_field_l(), &p, 1e-4).unwrap();
            let jet = s.jet(nu).unwrap();
            assert!((g - induced_metric_h(&jet, p[2])).abs().max() < 1e-12);
            assert!(g.determinant().abs() < 1e-13);
        }
    }

    fn ellipsoid() -> SupportSurface {
        SupportSurface::ellipsoid(2.0, 1.5, 1.0)
    }

    #[test]
    fn lines_touch_surface() {
        let s = ellipsoid();
        let j = s.jet(c(0.3, -0.4)).unwrap();
        let p = j.surface_point();
        let n = j.normal();
        for &a in &[0.0, 0.7, 2.9, 5.1] {
            let l = tangent_hypersurface_point(&j, a, None).unwrap();
            let d = direction(l.xi);
            assert!(d.dot(&n).abs() < 1e-12, "tangent line orthogonal to normal");
            let r = p.dot(&d);
            assert!((line_to_points(&l, r) - p).norm() < 1e-12);
            let l0 = tangent_hypersurface_point(&j, a, Some(0.0)).unwrap();
            assert_eq!(l0, j.normal_line());
            let le = tangent_hypersurface_point(&j, a, Some(0.5)).unwrap();
            let de = direction(le.xi);
            assert!((de.dot(&n) - 0.6).abs() < 1e-12, "cos of angle arctan ε");
            assert!((line_to_points(&le, p.dot(&de)) - p).norm() < 1e-12);
        }
    }

    #[test]
    fn induced_metric_matches_pullback() {
        let s = ellipsoid();
        let map = hypersurface_map(&s, None);
        let g = metric_field_l();
        for (nu, a) in [(c(0.3, -0.4), 0.8), (c(-1.1, 0.2), 2.5), (c(0.0, 0.0), 4.0)] {
            let j = s.jet(nu).unwrap();
            let num = pullback_metric(&map, &g, &Point::<3>::new(nu.re, nu.im, a), 1e-4).unwrap();
            let closed = induced_metric_h(&j, a);
            assert!((num - closed).abs().max() < 1e-7, "{num} vs {closed}");
        }
    }

    #[test]
    fn null_directions() {
        let s = ellipsoid();
        let j = s.jet(c(0.5, 0.25)).unwrap();
        let a = 1.1;
        let g = induced_metric_h(&j, a);
        let angles = null_direction_angles(&j, a);
        for b in [angles.alpha, angles.beta] {
            let v = null_vector(b, 0.7, 1.3);
            assert!(v.dot(&(g * v)).abs() < 1e-12);
        }
        // Independent scan: sign changes of the quadratic form on the unit circle.
        let q = |t: f64| {
            let v = null_vector(t, 0.0, 1.0);
            v.dot(&(g * v))
        };
        let n = 20000;
        let mut roots = vec![];
        for k in 0..n {
            let (t0, t1) = (std::f64::consts::PI * k as f64 / n as f64, std::f64::consts::PI * (k + 1) as f64 / n as f64);
            if q(t0) * q(t1) < 0.0 {
                roots.push(0.5 * (t0 + t1));
            }
        }
        assert_eq!(roots.len(), 2);
        let pi = std::f64::consts::PI;
        for b in [angles.alpha, angles.beta] {
            assert!(roots.iter().any(|r| ((r - b).rem_euclid(pi)).min(pi - (r - b).rem_euclid(pi)) < 1e-3));
        }
    }

    #[test]
    fn contact_defects() {
        let s = ellipsoid();
        let wp = omega_plus_field(&s);
        let wm = omega_minus_field();
        for (nu, a) in [(c(0.3, -0.4), 0.8), (c(-1.1, 0.2), 2.5)] {
            let j = s.jet(nu).unwrap();
            let cf = contact_forms_h(&j, a);
            let p = Point::<3>::new(nu.re, nu.im, a);
            let dp = frobenius_defect(&wp, &p, 1e-3).unwrap() / 2.0;
            let dm = frobenius_defect(&wm, &p, 1e-3).unwrap() / 2.0;
            assert!((dp - cf.defect_plus).abs() < 1e-8, "{dp} vs {}", cf.defect_plus);
            assert!((dm - cf.defect_minus).abs() < 1e-9);
            // ω⁺ kills the α null direction, ω⁻ the β one.
            let na = null_direction_angles(&j, a);
            assert!(Vector3::from(cf.omega_plus).dot(&null_vector(na.alpha, 0.0, 1.0)).abs() < 1e-12);
            assert!(Vector3::from(cf.omega_minus).dot(&null_vector(na.beta, 0.0, 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_angle_example() {
        let j = SurfaceJet::new(c(0.0, 0.0), 1.0, c(0.0, 0.0), 2.0, c(1.0, 0.0)).unwrap();
        let v = constant_angle_nullity(&j, std::f64::consts::FRAC_PI_4, 0.5).unwrap();
        assert!((v + 2.7648).abs() < 1e-12, "{v}");
        assert!(constant_angle_nullity(&j, 0.0, 1.0).is_err());
    }

    #[test]
    fn constant_angle_matches_pullback() {
        let s = ellipsoid();
        let g = metric_field_l();
        for (nu, a, eps) in [(c(0.3, -0.4), 0.8, 0.5), (c(-0.6, 0.9), 2.2, 0.3), (c(0.1, 0.1), 5.5, 0.8)] {
            let map = hypersurface_map(&s, Some(eps));
            let m = pullback_metric(&map, &g, &Point::<3>::new(nu.re, nu.im, a), 1e-4).unwrap();
            let want = constant_angle_nullity(&s.jet(nu).unwrap(), a, eps).unwrap();
            assert!((m.determinant() - want).abs() < 1e-6 * (1.0 + want.abs()), "{} vs {want}", m.determinant());
        }
    }
}
