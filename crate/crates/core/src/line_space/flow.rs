//! Geodesic and Reeb flows on the tangent hypersurface H(S).

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use super::hypersurface::{omega_plus_field, tangent_hypersurface_point};
use super::support::{SupportSurface, SurfaceJet};
use super::{direction, ser_complex};
use crate::error::{GeomError, Result};
use crate::tensor::{richardson, try_richardson, Point};

/// Drift allowed per unit time between a trajectory and its half-step rerun.
pub const FLOW_TOL: f64 = 1e-7;
const MAX_REFINE: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowState {
    #[serde(serialize_with = "ser_complex")]
    pub nu: Complex64,
    pub a: f64,
}

impl FlowState {
    pub fn new(nu: Complex64, a: f64) -> Self {
        Self { nu, a }
    }

    pub fn as_point(&self) -> Point<3> {
        Point::<3>::new(self.nu.re, self.nu.im, self.a)
    }

    pub fn from_point(p: &Point<3>) -> Self {
        Self { nu: Complex64::new(p[0], p[1]), a: p[2] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    #[serde(serialize_with = "ser_complex")]
    pub nu: Complex64,
    pub a: f64,
}

/// Field on H(S) in the chart (x, y, A).
pub type HField = fn(&SurfaceJet, f64) -> Vector3<f64>;

/// Geodesic flow: the tangency point moves along the line.
pub fn geodesic_field(jet: &SurfaceJet, a: f64) -> Vector3<f64> {
    let (nu, psi, sigma) = (jet.nu, jet.psi0, jet.sigma0);
    let delta = jet.convexity();
    let e = Complex64::from_polar(1.0, a);
    let dnu = (e * psi + sigma.conj() * e.conj()) * (jet.d() / (2.0 * delta));
    let da = ((nu.conj() * psi - sigma * nu) * e).im / delta;
    Vector3::new(dnu.re, dnu.im, da)
}

/// Reeb field of ω⁺: ω⁺(X) = 1 and ι_X dω⁺ = 0.
pub fn reeb_field_flat(jet: &SurfaceJet, a: f64) -> Vector3<f64> {
    let (nu, psi, sigma) = (jet.nu, jet.psi0, jet.sigma0);
    let delta = jet.convexity();
    let e = Complex64::from_polar(1.0, a);
    let dnu = (e * psi - sigma.conj() * e.conj()) * Complex64::new(0.0, -jet.d() / (2.0 * delta));
    let da = -((nu.conj() * psi - sigma * nu) * e).re / delta;
    Vector3::new(dnu.re, dnu.im, da)
}

fn eval(surface: &SupportSurface, field: HField, p: &Point<3>) -> Result<Vector3<f64>> {
    let jet = surface.jet(Complex64::new(p[0], p[1]))?;
    Ok(field(&jet, p[2]))
}

fn rk4_run(surface: &SupportSurface, field: HField, p0: Point<3>, dt: f64, steps: usize, sub: usize) -> Result<Vec<Point<3>>> {
    let h = dt / sub as f64;
    let mut p = p0;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(p);
    for _ in 0..steps {
        for _ in 0..sub {
            let k1 = eval(surface, field, &p)?;
            let k2 = eval(surface, field, &(p + k1 * (h / 2.0)))?;
            let k3 = eval(surface, field, &(p + k2 * (h / 2.0)))?;
            let k4 = eval(surface, field, &(p + k3 * h))?;
            p += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::Numerical("flow left finite values".into()));
        }
        out.push(p);
    }
    Ok(out)
}

/// RK4 with step doubling until the drift estimate is below [`FLOW_TOL`] per unit time.
pub fn integrate(surface: &SupportSurface, field: HField, init: FlowState, dt: f64, steps: usize) -> Result<Vec<FlowSample>> {
    if !(dt.is_finite() && dt != 0.0) {
        return Err(GeomError::Input(format!("time step {dt} must be finite and non-zero")));
    }
    let p0 = init.as_point();
    let horizon = (dt.abs() * steps as f64).max(1.0);
    let mut sub = 1;
    let mut coarse = rk4_run(surface, field, p0, dt, steps, sub)?;
    for _ in 0..MAX_REFINE {
        let fine = rk4_run(surface, field, p0, dt, steps, 2 * sub)?;
        let drift = coarse.iter().zip(&fine).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if drift <= FLOW_TOL * horizon {
            return Ok(fine
                .iter()
                .enumerate()
                .map(|(k, p)| FlowSample { t: dt * k as f64, nu: Complex64::new(p[0], p[1]), a: p[2] })
                .collect());
        }
        sub *= 2;
        coarse = fine;
    }
    Err(GeomError::Numerical("flow step refinement did not converge".into()))
}

pub fn geodesic_flow(surface: &SupportSurface, init: FlowState, dt: f64, steps: usize) -> Result<Vec<FlowSample>> {
    integrate(surface, geodesic_field, init, dt, steps)
}

pub fn reeb_flow(surface: &SupportSurface, init: FlowState, dt: f64, steps: usize) -> Result<Vec<FlowSample>> {
    integrate(surface, reeb_field_flat, init, dt, steps)
}

/// ω⁺(X) and max |ι_X dω⁺| at a state, with dω⁺ differenced at step `h`.
pub fn reeb_contract(surface: &SupportSurface, state: FlowState, h: f64) -> Result<(f64, f64)> {
    let p = state.as_point();
    let x = eval(surface, reeb_field_flat, &p)?;
    let omega = omega_plus_field(surface);
    let w = omega.at(&p)?;
    let dw = omega.exterior_derivative(&p, h)?;
    let contraction = dw.transpose() * x;
    Ok((w.dot(&x), contraction.amax()))
}

/// Velocity of the tangency point c(ν(t)) along the field.
pub fn surface_velocity(surface: &SupportSurface, field: HField, state: FlowState) -> Result<Vector3<f64>> {
    let v = eval(surface, field, &state.as_point())?;
    let dnu = Complex64::new(v[0], v[1]);
    try_richardson(|t| surface.surface_point(state.nu + dnu * t), 1e-4)
}

/// Direction of the line at a state of H(S).
pub fn line_direction(surface: &SupportSurface, state: FlowState) -> Result<Vector3<f64>> {
    let jet = surface.jet(state.nu)?;
    Ok(direction(tangent_hypersurface_point(&jet, state.a, None)?.xi))
}

/// Tangential part of the curvature vector of the traced curve on S.
pub fn geodesic_defect(surface: &SupportSurface, field: HField, state: FlowState, h: f64) -> Result<f64> {
    let v = eval(surface, field, &state.as_point())?;
    let unit = |t: f64| -> Vector3<f64> {
        let s = FlowState::from_point(&(state.as_point() + v * t));
        match surface_velocity(surface, field, s) {
            Ok(u) => u.normalize(),
            Err(_) => Vector3::from_element(f64::NAN),
        }
    };
    let speed = surface_velocity(surface, field, state)?.norm();
    if speed < 1e-12 {
        return Err(GeomError::IllConditioned("traced curve is stationary".into()));
    }
    let k = richardson(unit, h) / speed;
    let n = surface.jet(state.nu)?.normal();
    let tang = k - n * k.dot(&n);
    if !tang.norm().is_finite() {
        return Err(GeomError::Numerical("non-finite curvature".into()));
    }
    Ok(tang.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ellipsoid() -> SupportSurface {
        SupportSurface::ellipsoid(2.0, 1.5, 1.0)
    }

    #[test]
    fn reeb_contract_conditions() {
        let s = ellipsoid();
        for st in [FlowState::new(c(0.3, -0.4), 0.8), FlowState::new(c(-1.1, 0.2), 2.5), FlowState::new(c(0.0, 0.0), 4.0)] {
            let (w, d) = reeb_contract(&s, st, 1e-3).unwrap();
            assert!((w - 1.0).abs() < 1e-12, "ω(X) = {w}");
            assert!(d < 1e-8, "ι_X dω = {d}");
        }
    }

    #[test]
    fn reeb_is_rotated_geodesic() {
        let s = ellipsoid();
        for st in [FlowState::new(c(0.3, -0.4), 0.8), FlowState::new(c(1.4, 0.7), 3.3)] {
            let j = s.jet(st.nu).unwrap();
            let r = reeb_field_flat(&j, st.a);
            let g = geodesic_field(&j, st.a - std::f64::consts::FRAC_PI_2);
            assert!((r - g).norm() < 1e-12);
        }
    }

    #[test]
    fn geodesic_flow_tracks_lines() {
        let s = ellipsoid();
        let traj = geodesic_flow(&s, FlowState::new(c(0.3, -0.2), 0.6), 0.05, 40).unwrap();
        for smp in traj.iter().step_by(8) {
            let st = FlowState::new(smp.nu, smp.a);
            let u = surface_velocity(&s, geodesic_field, st).unwrap().normalize();
            let d = line_direction(&s, st).unwrap();
            assert!(u.cross(&d).norm() < 1e-8, "point moves along the line");
            assert!(geodesic_defect(&s, geodesic_field, st, 1e-3).unwrap() < 1e-6);
        }
    }

    #[test]
    fn reeb_flow_normal_geodesics() {
        let s = ellipsoid();
        let traj = reeb_flow(&s, FlowState::new(c(-0.2, 0.5), 1.9), 0.05, 40).unwrap();
        for smp in traj.iter().step_by(8) {
            let st = FlowState::new(smp.nu, smp.a);
            let u = surface_velocity(&s, reeb_field_flat, st).unwrap().normalize();
            let d = line_direction(&s, st).unwrap();
            assert!(u.dot(&d).abs() < 1e-8, "line normal to the traced curve");
            assert!(geodesic_defect(&s, reeb_field_flat, st, 1e-3).unwrap() < 1e-6);
        }
    }

    #[test]
    fn great_circle_on_sphere() {
        let s = SupportSurface::round_sphere(2.0, Vector3::new(0.1, 0.2, -0.3));
        let traj = geodesic_flow(&s, FlowState::new(c(0.2, 0.1), 0.4), 0.1, 30).unwrap();
        let centre = Vector3::new(0.1, 0.2, -0.3);
        let p0 = s.surface_point(traj[0].nu).unwrap() - centre;
        let p1 = s.surface_point(traj[5].nu).unwrap() - centre;
        let plane = p0.cross(&p1).normalize();
        for smp in &traj {
            let p = s.surface_point(smp.nu).unwrap() - centre;
            assert!(p.dot(&plane).abs() < 1e-6);
        }
    }

    #[test]
    fn convexity_loss_aborts() {
        let s = SupportSurface::from_dual("lens", |x, y| 1.0 - (x * x + y * y) * 0.3, 10.0);
        let r = geodesic_flow(&s, FlowState::new(c(0.0, 0.0), 0.0), 0.2, 200);
        assert!(matches!(r, Err(GeomError::Convexity(_))), "{r:?}");
    }
}
