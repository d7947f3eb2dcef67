//! Legendrian curves in H(S) and their geometric meaning on S.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use super::hypersurface::{contact_forms_h, tangent_hypersurface_point};
use super::support::SupportSurface;
use super::{direction, ser_complex};
use crate::error::{GeomError, Result};
use crate::tensor::richardson;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KnotSample {
    pub u: f64,
    #[serde(serialize_with = "ser_complex")]
    pub nu: Complex64,
    pub a: f64,
}

/// Sampled curve u ↦ (ν(u), A(u)) in H(S).
///
/// A closed knot repeats its first point as the last sample.
#[derive(Clone, Debug, PartialEq)]
pub struct LineKnot {
    samples: Vec<KnotSample>,
    closed: bool,
}

fn angle_diff(a: f64, b: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    (a - b + std::f64::consts::PI).rem_euclid(tau) - std::f64::consts::PI
}

impl LineKnot {
    pub fn new(samples: Vec<KnotSample>, closed: bool) -> Result<Self> {
        let min = if closed { 4 } else { 3 };
        if samples.len() < min {
            return Err(GeomError::Input(format!("knot needs at least {min} samples")));
        }
        for s in &samples {
            if !(s.u.is_finite() && s.nu.re.is_finite() && s.nu.im.is_finite() && s.a.is_finite()) {
                return Err(GeomError::Input("non-finite knot sample".into()));
            }
        }
        for w in samples.windows(2) {
            if w[1].u <= w[0].u {
                return Err(GeomError::Input("knot parameter must increase strictly".into()));
            }
            if (w[1].nu - w[0].nu).norm() + angle_diff(w[1].a, w[0].a).abs() < 1e-14 {
                return Err(GeomError::Input(format!("repeated knot sample at u = {}", w[1].u)));
            }
        }
        if closed {
            let (f, l) = (samples[0], samples[samples.len() - 1]);
            if (f.nu - l.nu).norm() > 1e-9 || angle_diff(f.a, l.a).abs() > 1e-9 {
                return Err(GeomError::Input("closed knot must end at its first sample".into()));
            }
        }
        Ok(Self { samples, closed })
    }

    pub fn samples(&self) -> &[KnotSample] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Distinct points (the closing duplicate dropped).
    fn points(&self) -> &[KnotSample] {
        if self.closed {
            &self.samples[..self.samples.len() - 1]
        } else {
            &self.samples
        }
    }

    /// Parameter values and neighbour indices for the three-point stencil at `i`.
    fn stencil(&self, i: usize) -> ([f64; 3], [usize; 3], usize) {
        let pts = self.points();
        let n = pts.len();
        if self.closed {
            let period = self.samples[self.samples.len() - 1].u - self.samples[0].u;
            let (im, ip) = ((i + n - 1) % n, (i + 1) % n);
            let um = if i == 0 { pts[im].u - period } else { pts[im].u };
            let up = if i + 1 == n { pts[ip].u + period } else { pts[ip].u };
            ([um, pts[i].u, up], [im, i, ip], 1)
        } else if i == 0 {
            ([pts[0].u, pts[1].u, pts[2].u], [0, 1, 2], 0)
        } else if i + 1 == n {
            ([pts[n - 3].u, pts[n - 2].u, pts[n - 1].u], [n - 3, n - 2, n - 1], 2)
        } else {
            ([pts[i - 1].u, pts[i].u, pts[i + 1].u], [i - 1, i, i + 1], 1)
        }
    }
}

/// Derivative at node `at` of the quadratic through (u_k, f_k).
pub(crate) fn lagrange_derivative<T>(u: [f64; 3], f: [T; 3], at: usize) -> T
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let x = u[at];
    let w = |k: usize| {
        let (a, b) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let num = if k == at {
            (x - u[a]) + (x - u[b])
        } else {
            let other = if a == at { b } else { a };
            x - u[other]
        };
        num / ((u[k] - u[a]) * (u[k] - u[b]))
    };
    f[0] * w(0) + f[1] * w(1) + f[2] * w(2)
}

/// Per-knot verdicts; each holds when it holds at every sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LegendrianFlags {
    pub alpha: bool,
    pub beta: bool,
    pub tangent_to_c: bool,
    pub normal_to_c: bool,
    pub curvature_line_or_umbilic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
struct PointFlags {
    alpha: bool,
    beta: bool,
    tangent: bool,
    normal: bool,
    curvature: bool,
}

/// Classifies a knot in H(S); `tol` bounds the normalized residual of each test.
///
/// Returns a consistency error when a sample satisfies exactly two of
/// {β-Legendrian, normal to c, along a curvature line}, or when the
/// α-Legendrian and tangent tests disagree.
pub fn legendrian_classify(knot: &LineKnot, surface: &SupportSurface, tol: f64) -> Result<LegendrianFlags> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(GeomError::Input(format!("tolerance {tol} must be positive")));
    }
    let pts = knot.points();
    let jets = pts.iter().map(|s| surface.jet(s.nu)).collect::<Result<Vec<_>>>()?;
    let cs: Vec<Vector3<f64>> = jets.iter().map(|j| j.surface_point()).collect();
    let ns: Vec<Vector3<f64>> = jets.iter().map(|j| j.normal()).collect();
    let mut out = LegendrianFlags { alpha: true, beta: true, tangent_to_c: true, normal_to_c: true, curvature_line_or_umbilic: true };
    for i in 0..pts.len() {
        let (u, idx, at) = knot.stencil(i);
        let dnu = lagrange_derivative(u, idx.map(|k| pts[k].nu), at);
        let base = pts[idx[at]].a;
        let da = lagrange_derivative(u, idx.map(|k| angle_diff(pts[k].a, base)), at);
        let dc = lagrange_derivative(u, idx.map(|k| cs[k]), at);
        let dn = lagrange_derivative(u, idx.map(|k| ns[k]), at);
        let tangent = Vector3::new(dnu.re, dnu.im, da);
        if dc.norm() < 1e-12 * (1.0 + tangent.norm()) {
            return Err(GeomError::Input(format!("curve on S is stationary at u = {}", pts[i].u)));
        }
        let jet = &jets[i];
        let line = tangent_hypersurface_point(jet, pts[i].a, None)?;
        let d = direction(line.xi);
        let forms = contact_forms_h(jet, pts[i].a);
        let wp = Vector3::from(forms.omega_plus);
        let wm = Vector3::from(forms.omega_minus);
        let chat = dc.normalize();
        let f = PointFlags {
            alpha: wp.dot(&tangent).abs() <= tol * wp.norm() * tangent.norm(),
            beta: wm.dot(&tangent).abs() <= tol * wm.norm() * tangent.norm(),
            tangent: d.cross(&chat).norm() <= tol,
            normal: d.dot(&chat).abs() <= tol,
            curvature: dn.cross(&dc).norm() <= tol * dn.norm().max(1e-300) * dc.norm() || dn.norm() <= tol * dc.norm(),
        };
        let count = [f.beta, f.normal, f.curvature].iter().filter(|b| **b).count();
        if count == 2 {
            return Err(GeomError::Consistency(format!(
                "at u = {}: β {} normal {} curvature line {}",
                pts[i].u, f.beta, f.normal, f.curvature
            )));
        }
        if f.alpha != f.tangent {
            return Err(GeomError::Consistency(format!("at u = {}: α-Legendrian {} but tangent {}", pts[i].u, f.alpha, f.tangent)));
        }
        out.alpha &= f.alpha;
        out.beta &= f.beta;
        out.tangent_to_c &= f.tangent;
        out.normal_to_c &= f.normal;
        out.curvature_line_or_umbilic &= f.curvature;
    }
    Ok(out)
}

/// How a demo knot picks the line at each point of its curve on S.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineChoice {
    /// Tangent to the curve.
    Tangent,
    /// In the tangent plane, perpendicular to the curve.
    Normal,
    /// Tangent direction turned by a fixed angle.
    Rotated(f64),
    /// Kernel of ω⁻ along the curve.
    BetaLegendrian,
}

/// Angle A at which the line of H(S) over ν points along `v` (projected to T S).
pub fn angle_of_direction(surface: &SupportSurface, nu: Complex64, v: &Vector3<f64>) -> Result<f64> {
    let jet = surface.jet(nu)?;
    let u0 = direction(tangent_hypersurface_point(&jet, 0.0, None)?.xi);
    let u1 = direction(tangent_hypersurface_point(&jet, std::f64::consts::FRAC_PI_2, None)?.xi);
    Ok(v.dot(&u1).atan2(v.dot(&u0)).rem_euclid(std::f64::consts::TAU))
}

/// Samples the knot over the curve ν(u), u ∈ [u0, u1], with `n` intervals.
pub fn build_knot<F>(surface: &SupportSurface, curve: F, u0: f64, u1: f64, n: usize, closed: bool, choice: LineChoice) -> Result<LineKnot>
where
    F: Fn(f64) -> Complex64,
{
    if n < 3 || u1 <= u0 {
        return Err(GeomError::Input("knot needs n ≥ 3 and u1 > u0".into()));
    }
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let u = u0 + (u1 - u0) * k as f64 / n as f64;
        let nu = curve(if closed && k == n { u0 } else { u });
        let dnu = richardson(|t| curve(u + t), 1e-4);
        let dc = richardson(|t| surface.surface_point(curve(u + t)).unwrap_or_else(|_| Vector3::from_element(f64::NAN)), 1e-4);
        let that = angle_of_direction(surface, nu, &dc)?;
        let a = match choice {
            LineChoice::Tangent => that,
            LineChoice::Normal => that + std::f64::consts::FRAC_PI_2,
            LineChoice::Rotated(t) => that + t,
            LineChoice::BetaLegendrian => dnu.arg() - std::f64::consts::FRAC_PI_2,
        };
        samples.push(KnotSample { u, nu, a: a.rem_euclid(std::f64::consts::TAU) });
    }
    if closed {
        let first = samples[0];
        let last = samples.last_mut().expect("non-empty");
        last.nu = first.nu;
        last.a = first.a;
    }
    LineKnot::new(samples, closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, TAU};

    fn flags(a: bool, b: bool, t: bool, n: bool, c: bool) -> LegendrianFlags {
        LegendrianFlags { alpha: a, beta: b, tangent_to_c: t, normal_to_c: n, curvature_line_or_umbilic: c }
    }

    #[test]
    fn lagrange_weights() {
        let u = [0.0, 0.3, 1.0];
        let f = u.map(|x| x * x);
        for at in 0..3 {
            assert!((lagrange_derivative(u, f, at) - 2.0 * u[at]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_knots() {
        let s = |u: f64| KnotSample { u, nu: Complex64::new(u, 0.0), a: 0.0 };
        assert!(LineKnot::new(vec![s(0.0), s(1.0)], false).is_err());
        assert!(LineKnot::new(vec![s(0.0), s(1.0), s(1.0)], false).is_err());
        let mut dup = vec![s(0.0), s(1.0), s(2.0)];
        dup[2].nu = dup[1].nu;
        assert!(LineKnot::new(dup, false).is_err());
        assert!(LineKnot::new(vec![s(0.0), s(1.0), s(2.0), s(3.0)], true).is_err());
    }

    #[test]
    fn ellipsoid_principal_section() {
        let e = SupportSurface::ellipsoid(2.0, 1.5, 1.0);
        // Sections by the coordinate planes y = 0 and x = 0, kept inside |ν| < 1.
        let sections: [fn(f64) -> Complex64; 2] = [|u| Complex64::new(u, 0.0), |u| Complex64::new(0.0, u)];
        let cases = [
            (LineChoice::Tangent, flags(true, false, true, false, true)),
            (LineChoice::Normal, flags(false, true, false, true, true)),
            (LineChoice::Rotated(FRAC_PI_4), flags(false, false, false, false, true)),
            (LineChoice::BetaLegendrian, flags(false, true, false, true, true)),
        ];
        for curve in sections {
            for (choice, want) in cases {
                let k = build_knot(&e, curve, -0.8, 0.8, 400, false, choice).unwrap();
                assert_eq!(legendrian_classify(&k, &e, 1e-4).unwrap(), want, "{choice:?}");
            }
        }
    }

    #[test]
    fn ellipsoid_generic_curve() {
        let e = SupportSurface::ellipsoid(2.0, 1.5, 1.0);
        let curve = |u: f64| Complex64::new(0.3, 0.0) + Complex64::from_polar(0.2, u);
        let cases = [
            (LineChoice::Tangent, flags(true, false, true, false, false)),
            (LineChoice::Normal, flags(false, false, false, true, false)),
            (LineChoice::BetaLegendrian, flags(false, true, false, false, false)),
        ];
        for (choice, want) in cases {
            let k = build_knot(&e, curve, 0.0, TAU, 400, true, choice).unwrap();
            assert_eq!(legendrian_classify(&k, &e, 1e-4).unwrap(), want, "{choice:?}");
        }
    }

    #[test]
    fn sphere_latitude() {
        let s = SupportSurface::round_sphere(1.3, Vector3::new(0.2, 0.0, -0.1));
        let curve = |u: f64| Complex64::from_polar(0.6, u);
        let k = build_knot(&s, curve, 0.0, TAU, 300, true, LineChoice::Normal).unwrap();
        assert_eq!(legendrian_classify(&k, &s, 1e-4).unwrap(), flags(false, true, false, true, true));
        let k = build_knot(&s, curve, 0.0, TAU, 300, true, LineChoice::Tangent).unwrap();
        assert_eq!(legendrian_classify(&k, &s, 1e-4).unwrap(), flags(true, false, true, false, true));
    }

    #[test]
    fn open_knot_endpoints() {
        let e = SupportSurface::ellipsoid(2.0, 1.5, 1.0);
        let curve = |u: f64| Complex64::new(0.1 * u, 0.2 - 0.05 * u * u);
        let k = build_knot(&e, curve, -1.0, 1.0, 300, false, LineChoice::Tangent).unwrap();
        let f = legendrian_classify(&k, &e, 1e-4).unwrap();
        assert!(f.alpha && f.tangent_to_c && !f.beta);
    }

    #[test]
    fn inconsistent_input_alarms() {
        // A knot built for one surface but classified against another.
        let e = SupportSurface::ellipsoid(2.0, 1.5, 1.0);
        let curve = |u: f64| Complex64::new(0.3, 0.0) + Complex64::from_polar(0.2, u);
        let k = build_knot(&e, curve, 0.0, TAU, 200, true, LineChoice::Tangent).unwrap();
        let other = SupportSurface::ellipsoid(1.0, 2.5, 0.7);
        let r = legendrian_classify(&k, &other, 1e-4);
        assert!(matches!(r, Err(GeomError::Consistency(_))) || r.map(|f| !f.alpha).unwrap_or(false));
    }
}
