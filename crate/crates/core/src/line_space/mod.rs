//! The space of oriented lines L(R³) ≅ TS² in the chart (ξ, η).
//!
//! ξ is the stereographic coordinate of the direction (from the south
//! pole), η the fibre coordinate. Real charts are ordered
//! (Re ξ, Im ξ, Re η, Im η).

pub mod flow;
pub mod hypersurface;
pub mod legendrian;
pub mod support;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::tensor::{richardson, ChartMetricField, MetricField};

pub use flow::{geodesic_field, geodesic_flow, reeb_field_flat, reeb_flow, FlowSample, FlowState};
pub use hypersurface::{
    constant_angle_nullity, contact_forms_h, induced_metric_h, null_direction_angles, tangent_hypersurface_point, ContactForms, NullAngles,
};
pub use legendrian::{legendrian_classify, KnotSample, LegendrianFlags, LineKnot};
pub use support::{SupportDerivs, SupportSurface, SurfaceJet};

/// Chart bound on |ξ|.
pub const XI_MAX: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrientedLine {
    #[serde(serialize_with = "ser_complex")]
    pub xi: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub eta: Complex64,
}

pub(crate) fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl OrientedLine {
    pub fn new(xi: Complex64, eta: Complex64) -> Result<Self> {
        if !(xi.re.is_finite() && xi.im.is_finite() && eta.re.is_finite() && eta.im.is_finite()) {
            return Err(GeomError::Input("non-finite line coordinates".into()));
        }
        if xi.norm() >= XI_MAX {
            return Err(GeomError::Chart(format!("|ξ| = {:e} outside chart", xi.norm())));
        }
        Ok(Self { xi, eta })
    }

    pub fn to_chart(&self) -> Vector4<f64> {
        Vector4::new(self.xi.re, self.xi.im, self.eta.re, self.eta.im)
    }

    pub fn from_chart(v: &Vector4<f64>) -> Result<Self> {
        Self::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
    }
}

/// Unit direction of lines with coordinate ξ.
pub fn direction(xi: Complex64) -> Vector3<f64> {
    let d = 1.0 + xi.norm_sqr();
    Vector3::new(2.0 * xi.re / d, 2.0 * xi.im / d, (1.0 - xi.norm_sqr()) / d)
}

/// Inverse of [`direction`].
pub fn direction_to_xi(d: &Vector3<f64>) -> Result<Complex64> {
    let n = d.normalize();
    if 1.0 + n[2] < 1e-12 {
        return Err(GeomError::Chart("direction at the south pole".into()));
    }
    Ok(Complex64::new(n[0], n[1]) / (1.0 + n[2]))
}

/// Point at parameter `r` along the line; r = 0 is the foot of the perpendicular from the origin.
pub fn line_to_points(line: &OrientedLine, r: f64) -> Vector3<f64> {
    let OrientedLine { xi, eta } = *line;
    let d = 1.0 + xi.norm_sqr();
    let z = (eta - xi * xi * eta.conj()) * (2.0 / (d * d)) + xi * (2.0 * r / d);
    let x3 = -2.0 * (eta * xi.conj() + eta.conj() * xi).re / (d * d) + (1.0 - xi.norm_sqr()) * r / d;
    Vector3::new(z.re, z.im, x3)
}

/// Fibre coordinate of the line with direction ξ through `p`.
pub fn incidence_eta(xi: Complex64, p: &Vector3<f64>) -> Complex64 {
    let w = Complex64::new(p[0], p[1]);
    (w - xi * (2.0 * p[2]) - w.conj() * xi * xi) * 0.5
}

/// Distance from the origin, 2|η|/(1+ξξ̄).
pub fn perpendicular_distance(line: &OrientedLine) -> f64 {
    2.0 * line.eta.norm() / (1.0 + line.xi.norm_sqr())
}

/// The same line with the opposite orientation.
pub fn reverse_orientation(line: &OrientedLine) -> Result<OrientedLine> {
    if line.xi.norm() < 1.0 / XI_MAX {
        return Err(GeomError::Chart("reversed direction is the south pole".into()));
    }
    let xb = line.xi.conj();
    OrientedLine::new(-1.0 / xb, -line.eta.conj() / (xb * xb))
}

pub fn translate(line: &OrientedLine, c: &Vector3<f64>) -> OrientedLine {
    OrientedLine { xi: line.xi, eta: line.eta + incidence_eta(line.xi, c) }
}

/// Image of the line under a rotation `rot` of R³.
pub fn rotate(line: &OrientedLine, rot: &Matrix3<f64>) -> Result<OrientedLine> {
    let foot = line_to_points(line, 0.0);
    let xi = direction_to_xi(&(rot * direction(line.xi)))?;
    OrientedLine::new(xi, incidence_eta(xi, &(rot * foot)))
}

/// Neutral metric 4(1+ξξ̄)⁻² Im(dη̄ dξ + 2ξ̄η/(1+ξξ̄) dξ dξ̄) as a real 4×4 matrix.
pub fn neutral_metric_l(line: &OrientedLine) -> Matrix4<f64> {
    let d = 1.0 + line.xi.norm_sqr();
    let k = 4.0 / (d * d);
    let m = 2.0 * (line.xi.conj() * line.eta).im / d;
    Matrix4::new(
        m, 0.0, 0.0, -0.5, //
        0.0, m, 0.5, 0.0, //
        0.0, 0.5, 0.0, 0.0, //
        -0.5, 0.0, 0.0, 0.0,
    ) * k
}

pub fn metric_field_l() -> ChartMetricField {
    MetricField::new("line-space", |v: &Vector4<f64>| {
        neutral_metric_l(&OrientedLine { xi: Complex64::new(v[0], v[1]), eta: Complex64::new(v[2], v[3]) })
    })
}

/// Multiplication by i on both ξ and η.
pub fn jplus_l() -> Matrix4<f64> {
    Matrix4::new(
        0.0, -1.0, 0.0, 0.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0,
    )
}

/// Ω = 2(1+ξξ̄)⁻² Re(dη̄∧dξ − 2ξ̄η/(1+ξξ̄) dξ∧dξ̄), so that Ω(u, w) = uᵀ W w = G(u, J⁺w).
pub fn symplectic_form_l(line: &OrientedLine) -> Matrix4<f64> {
    let d = 1.0 + line.xi.norm_sqr();
    let k = 2.0 / (d * d);
    let m = 2.0 * (line.xi.conj() * line.eta).im / d;
    let mut w = Matrix4::zeros();
    w[(2, 0)] = k;
    w[(0, 2)] = -k;
    w[(3, 1)] = k;
    w[(1, 3)] = -k;
    w[(0, 1)] = -2.0 * k * m;
    w[(1, 0)] = 2.0 * k * m;
    w
}

/// λ with Ω|_Σ = λ · 4(1+νν̄)⁻² dx∧dy for the section ν ↦ (ν, η(ν)).
pub fn lagrangian_defect<F>(section: F, nu: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let chart = |x: f64, y: f64| {
        let z = Complex64::new(x, y);
        let e = section(z);
        Vector4::new(x, y, e.re, e.im)
    };
    let jx = richardson(|t| chart(nu.re + t, nu.im), h);
    let jy = richardson(|t| chart(nu.re, nu.im + t), h);
    if jx.iter().chain(jy.iter()).any(|v| !v.is_finite()) {
        return Err(GeomError::Numerical("non-finite section derivative".into()));
    }
    let line = OrientedLine::new(nu, section(nu))?;
    let w = symplectic_form_l(&line);
    let d = 1.0 + nu.norm_sqr();
    Ok(jx.dot(&(w * jy)) * d * d / 4.0)
}

#[cfg(test)]
fn chart_jacobian<const M: usize, F>(f: F, p: &nalgebra::SMatrix<f64, M, 1>, h: f64) -> nalgebra::SMatrix<f64, 4, M>
where
    F: Fn(&nalgebra::SMatrix<f64, M, 1>) -> Vector4<f64>,
{
    let mut j = nalgebra::SMatrix::<f64, 4, M>::zeros();
    for c in 0..M {
        let mut e = nalgebra::SMatrix::<f64, M, 1>::zeros();
        e[c] = 1.0;
        j.set_column(c, &richardson(|t| f(&(p + e * t)), h));
    }
    j
}
