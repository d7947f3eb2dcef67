//! Oriented geodesics of the space forms S³_ε (ε = ±1) as decomposable bivectors.
//!
//! R⁴_ε carries ⟨a, b⟩_ε = ε(a₁b₁ + a₂b₂ + a₃b₃) + a₄b₄ and S³_ε = {⟨x, x⟩_ε = 1}.
//! The geodesic through x with unit tangent y is x∧y.

use nalgebra::{Matrix2, Matrix3, Matrix4, SMatrix, SVector, Vector2, Vector3, Vector4};
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::tensor::{frobenius_defect, richardson, OneFormField, Point};

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
/// Tolerance on flag and frame normalizations.
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SpaceFormSign {
    eps: i8,
}

impl SpaceFormSign {
    pub const SPHERE: Self = Self { eps: 1 };
    pub const HYPERBOLIC: Self = Self { eps: -1 };

    pub fn new(eps: i64) -> Result<Self> {
        match eps {
            1 => Ok(Self::SPHERE),
            -1 => Ok(Self::HYPERBOLIC),
            _ => Err(GeomError::Input(format!("space-form sign must be ±1, got {eps}"))),
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps as f64
    }

    fn diag(&self) -> [f64; 4] {
        let e = self.eps();
        [e, e, e, 1.0]
    }
}

pub fn inner4(a: &Vector4<f64>, b: &Vector4<f64>, sign: SpaceFormSign) -> f64 {
    let g = sign.diag();
    (0..4).map(|i| g[i] * a[i] * b[i]).sum()
}

/// Raises the index of a covector (g is its own inverse).
fn raise(c: &Vector4<f64>, sign: SpaceFormSign) -> Vector4<f64> {
    let g = sign.diag();
    Vector4::new(g[0] * c[0], g[1] * c[1], g[2] * c[2], g[3] * c[3])
}

/// Components in the basis e₁∧e₂, e₁∧e₃, e₁∧e₄, e₂∧e₃, e₂∧e₄, e₃∧e₄.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bivector(pub [f64; 6]);

impl Bivector {
    pub fn zero() -> Self {
        Self([0.0; 6])
    }

    pub fn from_matrix(m: &Matrix4<f64>) -> Self {
        Self(PAIRS.map(|(i, j)| m[(i, j)]))
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            m[(i, j)] = self.0[k];
            m[(j, i)] = -self.0[k];
        }
        m
    }

    pub fn as_vector(&self) -> SVector<f64, 6> {
        SVector::<f64, 6>::from(self.0)
    }

    pub fn from_vector(v: &SVector<f64, 6>) -> Self {
        Self([v[0], v[1], v[2], v[3], v[4], v[5]])
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().norm()
    }

    /// B g z for the bivector as a matrix: (x∧y) ⌟ z = x⟨y, z⟩ − y⟨x, z⟩.
    pub fn contract(&self, z: &Vector4<f64>, sign: SpaceFormSign) -> Vector4<f64> {
        self.to_matrix() * raise(z, sign)
    }
}

impl std::ops::Add for Bivector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_vector(&(self.as_vector() + o.as_vector()))
    }
}

impl std::ops::Sub for Bivector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::from_vector(&(self.as_vector() - o.as_vector()))
    }
}

impl std::ops::Neg for Bivector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl std::ops::Mul<f64> for Bivector {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self(self.0.map(|v| v * c))
    }
}

pub fn wedge(x: &Vector4<f64>, y: &Vector4<f64>) -> Bivector {
    Bivector(PAIRS.map(|(i, j)| x[i] * y[j] - x[j] * y[i]))
}

/// ⟨⟨x₁∧y₁, x₂∧y₂⟩⟩_ε = ⟨x₁,x₂⟩⟨y₁,y₂⟩ − ⟨x₁,y₂⟩⟨y₁,x₂⟩, extended bilinearly.
pub fn inner_eps(a: &Bivector, b: &Bivector, sign: SpaceFormSign) -> f64 {
    let g = sign.diag();
    PAIRS.iter().enumerate().map(|(k, &(i, j))| g[i] * g[j] * a.0[k] * b.0[k]).sum()
}

fn ser_vec4<S: serde::Serializer>(v: &Vector4<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(4)?;
    for c in v.iter() {
        t.serialize_element(c)?;
    }
    t.end()
}

/// Oriented geodesic x∧y: ⟨x,x⟩ = 1, ⟨y,y⟩ = ε, ⟨x,y⟩ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceFormFlag {
    #[serde(serialize_with = "ser_vec4")]
    pub x: Vector4<f64>,
    #[serde(serialize_with = "ser_vec4")]
    pub y: Vector4<f64>,
    pub sign: SpaceFormSign,
}

impl SpaceFormFlag {
    pub fn new(x: Vector4<f64>, y: Vector4<f64>, sign: SpaceFormSign) -> Result<Self> {
        let e = sign.eps();
        let errs = [(inner4(&x, &x, sign) - 1.0).abs(), (inner4(&y, &y, sign) - e).abs(), inner4(&x, &y, sign).abs()];
        if errs.iter().any(|v| !(*v <= FRAME_TOL)) {
            return Err(GeomError::Input(format!("invalid flag: normalization residuals {errs:?}")));
        }
        Ok(Self { x, y, sign })
    }

    pub fn bivector(&self) -> Bivector {
        wedge(&self.x, &self.y)
    }

    fn check_orthogonal(&self, v: &Vector4<f64>) -> Result<()> {
        let scale = 1.0 + v.norm();
        let r = inner4(&self.x, v, self.sign).abs().max(inner4(&self.y, v, self.sign).abs());
        if !(r <= 1e-8 * scale) {
            return Err(GeomError::Input(format!("vector not orthogonal to the flag (residual {r:e})")));
        }
        Ok(())
    }

    /// Writes a tangent bivector as x∧X + y∧Y with X, Y ⊥ x, y.
    pub fn decompose(&self, u: &Bivector) -> Result<(Vector4<f64>, Vector4<f64>)> {
        let xv = -u.contract(&self.x, self.sign);
        let yv = -u.contract(&self.y, self.sign) * self.sign.eps();
        let back = wedge(&self.x, &xv) + wedge(&self.y, &yv);
        let r = (back - *u).norm();
        if !(r <= 1e-8 * (1.0 + u.norm())) {
            return Err(GeomError::Input(format!("bivector not tangent at the flag (residual {r:e})")));
        }
        Ok((xv, yv))
    }

    /// 𝕁(x∧X + y∧Y) = y∧X − εx∧Y.
    pub fn j(&self, u: &Bivector) -> Result<Bivector> {
        let (xv, yv) = self.decompose(u)?;
        Ok(wedge(&self.y, &xv) - wedge(&self.x, &yv) * self.sign.eps())
    }

    /// Rotation J′ of the plane (x∧y)^⊥ by a right angle: J′X = −ε g⁻¹ det[x, y, X, ·].
    pub fn jprime_vec(&self, v: &Vector4<f64>) -> Result<Vector4<f64>> {
        self.check_orthogonal(v)?;
        let mut c = Vector4::zeros();
        for i in 0..4 {
            let mut e = Vector4::zeros();
            e[i] = 1.0;
            c[i] = Matrix4::from_columns(&[self.x, self.y, *v, e]).determinant();
        }
        Ok(raise(&c, self.sign) * -self.sign.eps())
    }

    /// 𝕁′(x∧X + y∧Y) = x∧J′X + y∧J′Y.
    pub fn jprime(&self, u: &Bivector) -> Result<Bivector> {
        let (xv, yv) = self.decompose(u)?;
        Ok(wedge(&self.x, &self.jprime_vec(&xv)?) + wedge(&self.y, &self.jprime_vec(&yv)?))
    }

    /// 𝔾_ε(U, V) = −⟨⟨U, 𝕁𝕁′V⟩⟩_ε.
    pub fn g_eps(&self, u: &Bivector, v: &Bivector) -> Result<f64> {
        self.decompose(u)?;
        let jv = self.j(&self.jprime(v)?)?;
        Ok(-inner_eps(u, &jv, self.sign))
    }

    /// Two vectors spanning (x∧y)^⊥.
    pub fn normal_pair(&self) -> Result<[Vector4<f64>; 2]> {
        let mut out: Vec<Vector4<f64>> = Vec::with_capacity(2);
        let basis = [self.x, self.y];
        for i in 0..4 {
            let mut v = Vector4::zeros();
            v[i] = 1.0;
            // Gram-Schmidt in ⟨,⟩_ε; all vectors involved are non-null.
            for b in basis.iter().chain(out.iter()) {
                let bb = inner4(b, b, self.sign);
                v -= b * (inner4(b, &v, self.sign) / bb);
            }
            let vv = inner4(&v, &v, self.sign);
            if vv.abs() > 1e-6 {
                out.push(v / vv.abs().sqrt());
                if out.len() == 2 {
                    return Ok([out[0], out[1]]);
                }
            }
        }
        Err(GeomError::Degenerate("could not complete the flag".into()))
    }

    /// Basis x∧X₁, x∧X₂, y∧X₁, y∧X₂ of the tangent space at the flag.
    pub fn tangent_basis(&self) -> Result<[Bivector; 4]> {
        let [a, b] = self.normal_pair()?;
        Ok([wedge(&self.x, &a), wedge(&self.x, &b), wedge(&self.y, &a), wedge(&self.y, &b)])
    }

    pub fn gram(&self, vs: &[Bivector; 4]) -> Result<Matrix4<f64>> {
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for k in 0..4 {
                m[(i, k)] = self.g_eps(&vs[i], &vs[k])?;
            }
        }
        Ok(m)
    }
}

/// Images of x∧X + y∧Y under 𝕁 and 𝕁′.
pub fn structures_j(flag: &SpaceFormFlag, xv: &Vector4<f64>, yv: &Vector4<f64>) -> Result<(Bivector, Bivector)> {
    flag.check_orthogonal(xv)?;
    flag.check_orthogonal(yv)?;
    let u = wedge(&flag.x, xv) + wedge(&flag.y, yv);
    Ok((flag.j(&u)?, flag.jprime(&u)?))
}

/// Adapted frame of a surface in S³_ε with principal curvatures and connection data.
///
/// k_i = ε⟨D_{e_i}e_i, N⟩ and ∇_{e_i}e₁ = v_i e₂.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceFramePoint {
    #[serde(serialize_with = "ser_vec4")]
    pub phi: Vector4<f64>,
    #[serde(serialize_with = "ser_vec4")]
    pub e1: Vector4<f64>,
    #[serde(serialize_with = "ser_vec4")]
    pub e2: Vector4<f64>,
    #[serde(serialize_with = "ser_vec4")]
    pub n: Vector4<f64>,
    pub k1: f64,
    pub k2: f64,
    pub v1: f64,
    pub v2: f64,
    pub sign: SpaceFormSign,
}

impl SurfaceFramePoint {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        phi: Vector4<f64>,
        e1: Vector4<f64>,
        e2: Vector4<f64>,
        n: Vector4<f64>,
        k: (f64, f64),
        v: (f64, f64),
        sign: SpaceFormSign,
    ) -> Result<Self> {
        let e = sign.eps();
        let vs = [phi, e1, e2, n];
        for i in 0..4 {
            for k2 in i..4 {
                let want = if i != k2 {
                    0.0
                } else if i == 0 {
                    1.0
                } else {
                    e
                };
                let r = (inner4(&vs[i], &vs[k2], sign) - want).abs();
                if !(r <= FRAME_TOL) {
                    return Err(GeomError::Input(format!("frame not orthonormal: residual {r:e} at ({i},{k2})")));
                }
            }
        }
        if Matrix4::from_columns(&vs).determinant() <= 0.0 {
            return Err(GeomError::Input("frame (φ, e₁, e₂, N) is negatively oriented".into()));
        }
        if ![k.0, k.1, v.0, v.1].iter().all(|c| c.is_finite()) {
            return Err(GeomError::Input("non-finite curvature data".into()));
        }
        Ok(Self { phi, e1, e2, n, k1: k.0, k2: k.1, v1: v.0, v2: v.1, sign })
    }

    pub fn v(&self, theta: f64) -> Vector4<f64> {
        self.e1 * theta.cos() + self.e2 * theta.sin()
    }

    pub fn v_perp(&self, theta: f64) -> Vector4<f64> {
        -self.e1 * theta.sin() + self.e2 * theta.cos()
    }

    pub fn flag(&self, theta: f64) -> Result<SpaceFormFlag> {
        SpaceFormFlag::new(self.phi, self.v(theta), self.sign)
    }

    /// k₁cos²θ + k₂sin²θ.
    pub fn normal_curvature(&self, theta: f64) -> f64 {
        self.k1 * theta.cos().powi(2) + self.k2 * theta.sin().powi(2)
    }

    fn require_convex(&self) -> Result<()> {
        if !(self.k1 * self.k2 > 1e-12) {
            return Err(GeomError::Convexity(format!("k₁k₂ = {:e} is not positive", self.k1 * self.k2)));
        }
        Ok(())
    }
}

/// dφ̄(e₁), dφ̄(e₂), dφ̄(∂_θ) for the immersion (x, θ) ↦ φ∧v.
pub fn tangent_hyp_frame(fr: &SurfaceFramePoint, theta: f64) -> [Bivector; 3] {
    let (s, c) = theta.sin_cos();
    let (v, vp) = (fr.v(theta), fr.v_perp(theta));
    let pvp = wedge(&fr.phi, &vp);
    let pn = wedge(&fr.phi, &fr.n);
    let vvp = wedge(&v, &vp);
    [pvp * fr.v1 + pn * (fr.k1 * c) + vvp * s, pvp * fr.v2 + pn * (fr.k2 * s) - vvp * c, pvp]
}

/// Π₊ = span{φ∧v⊥, φ∧N}, Π₋ = span{φ∧v⊥, v∧v⊥}.
pub fn null_planes_spaceform(fr: &SurfaceFramePoint, theta: f64) -> ([Bivector; 2], [Bivector; 2]) {
    let (v, vp) = (fr.v(theta), fr.v_perp(theta));
    let pvp = wedge(&fr.phi, &vp);
    ([pvp, wedge(&fr.phi, &fr.n)], [pvp, wedge(&v, &vp)])
}

/// The second vector ρ₂ whose sum and difference with dφ̄(e₁) are null.
pub fn rho2(fr: &SurfaceFramePoint, theta: f64) -> Result<Bivector> {
    let (s, c) = theta.sin_cos();
    let kk = fr.normal_curvature(theta);
    if kk.abs() < 1e-14 {
        return Err(GeomError::Convexity("k₁cos²θ + k₂sin²θ vanishes".into()));
    }
    let (v, vp) = (fr.v(theta), fr.v_perp(theta));
    let coef = (2.0 * fr.k1 * fr.v2 * c * s + (fr.k1 * c * c - fr.k2 * s * s) * fr.v1) / kk;
    Ok(wedge(&fr.phi, &vp) * coef + wedge(&fr.phi, &fr.n) * (fr.k1 * c) - wedge(&v, &vp) * s)
}

/// Coefficients of `targets` in the span of `basis` (least squares), with the worst residual.
fn solve_in_span<const K: usize>(basis: &[Bivector; 3], targets: &[Bivector; K]) -> Result<(SMatrix<f64, 3, K>, f64)> {
    let a = SMatrix::<f64, 6, 3>::from_columns(&basis.map(|b| b.as_vector()));
    let t = SMatrix::<f64, 6, K>::from_columns(&targets.map(|b| b.as_vector()));
    let svd = a.svd(true, true);
    if svd.singular_values.min() < 1e-12 * svd.singular_values.max().max(1.0) {
        return Err(GeomError::Degenerate("tangent frame of H(S) is degenerate".into()));
    }
    let qr = a.qr();
    let x = qr.r().solve_upper_triangular(&(qr.q().transpose() * t)).ok_or_else(|| GeomError::Numerical("singular R factor".into()))?;
    let resid = (a * x - t).abs().max();
    Ok((x, resid))
}

/// Dual coframe η¹, η², η³ of η₁ = φ∧v⊥, η₂ = φ∧N, η₃ = v∧v⊥, as rows in the basis (e¹, e², dθ).
///
/// The η_j are expressed through the tangent frame by least squares, so this
/// also checks that they are tangent to H(S).
pub fn dual_coframe(fr: &SurfaceFramePoint, theta: f64) -> Result<Matrix3<f64>> {
    let frame = tangent_hyp_frame(fr, theta);
    let (v, vp) = (fr.v(theta), fr.v_perp(theta));
    let etas = [wedge(&fr.phi, &vp), wedge(&fr.phi, &fr.n), wedge(&v, &vp)];
    let (m, resid) = solve_in_span(&frame, &etas)?;
    if resid > 1e-9 * (1.0 + m.abs().max()) {
        return Err(GeomError::Consistency(format!("η_j not tangent to H(S): residual {resid:e}")));
    }
    m.try_inverse().ok_or_else(|| GeomError::Convexity("η_j are dependent (k₁cos²θ + k₂sin²θ = 0)".into()))
}

/// The same coframe from the closed expressions of η₁, η₂, η₃ in terms of (e₁, e₂, ∂_θ).
pub fn dual_coframe_closed(fr: &SurfaceFramePoint, theta: f64) -> Result<Matrix3<f64>> {
    let (s, c) = theta.sin_cos();
    let kk = fr.normal_curvature(theta);
    let (k1, k2, v1, v2) = (fr.k1, fr.k2, fr.v1, fr.v2);
    let m = Matrix3::new(
        0.0,
        c / kk,
        k2 * s / kk, //
        0.0,
        s / kk,
        -k1 * c / kk, //
        1.0,
        -(v1 * c + v2 * s) / kk,
        -(v1 * k2 * s - v2 * k1 * c) / kk,
    );
    m.try_inverse().ok_or_else(|| GeomError::Convexity("k₁cos²θ + k₂sin²θ vanishes".into()))
}

/// A coordinate patch s = (s¹, s²) of a surface in S³_ε with an adapted frame.
pub trait SurfacePatch: Send + Sync {
    fn sign(&self) -> SpaceFormSign;
    fn point(&self, s: &Vector2<f64>) -> Vector4<f64>;
    fn frame(&self, s: &Vector2<f64>) -> Result<SurfaceFramePoint>;
    /// Rows e¹, e² in terms of ds¹, ds².
    fn coframe(&self, s: &Vector2<f64>) -> Result<Matrix2<f64>>;
}

fn coframe_row_field<P: SurfacePatch + Clone + 'static>(patch: &P, row: usize) -> OneFormField<3> {
    let p = patch.clone();
    OneFormField::new(move |q: &Point<3>| {
        let s = Vector2::new(q[0], q[1]);
        let go = || -> Result<Vector3<f64>> {
            let fr = p.frame(&s)?;
            let co = dual_coframe(&fr, q[2])?;
            let e = p.coframe(&s)?;
            let ab = e.transpose() * Vector2::new(co[(row, 0)], co[(row, 1)]);
            Ok(Vector3::new(ab[0], ab[1], co[(row, 2)]))
        };
        go().unwrap_or_else(|_| Vector3::from_element(f64::NAN))
    })
}

/// η³∧dη³ and η²∧dη² against e¹∧e²∧dθ, by differencing the dual coframe at step `h`.
pub fn contact_defects_spaceform<P: SurfacePatch + Clone + 'static>(patch: &P, s: &Vector2<f64>, theta: f64, h: f64) -> Result<(f64, f64)> {
    patch.frame(s)?.require_convex()?;
    let vol = patch.coframe(s)?.determinant();
    let q = Point::<3>::new(s[0], s[1], theta);
    let d3 = frobenius_defect(&coframe_row_field(patch, 2), &q, h)? / vol;
    let d2 = frobenius_defect(&coframe_row_field(patch, 1), &q, h)? / vol;
    Ok((d3, d2))
}

/// Closed forms of the two defects: η³∧dη³ = −e¹∧e²∧dθ and η²∧dη² = −k₁k₂ e¹∧e²∧dθ.
pub fn contact_defects_closed(fr: &SurfaceFramePoint) -> Result<(f64, f64)> {
    fr.require_convex()?;
    Ok((-1.0, -fr.k1 * fr.k2))
}

/// 𝔾(N̄_a, N̄_a) = (k₂ − k₁)cos²a sin 2θ for the constant-angle hypersurface, 0 < a < π/2.
pub fn constant_angle_nullity_spaceform(fr: &SurfaceFramePoint, theta: f64, a: f64) -> Result<f64> {
    if !(a > 0.0 && a < std::f64::consts::FRAC_PI_2) {
        return Err(GeomError::Input(format!("angle {a} must lie in (0, π/2)")));
    }
    Ok((fr.k2 - fr.k1) * a.cos().powi(2) * (2.0 * theta).sin())
}

/// Determinant of the metric induced on H_a(S) = {φ∧(cos a N + sin a v)} in the chart (s¹, s², θ).
pub fn constant_angle_induced_det<P: SurfacePatch>(patch: &P, s: &Vector2<f64>, theta: f64, a: f64, h: f64) -> Result<f64> {
    let line = |q: &Point<3>| -> Result<SpaceFormFlag> {
        let fr = patch.frame(&Vector2::new(q[0], q[1]))?;
        SpaceFormFlag::new(fr.phi, fr.n * a.cos() + fr.v(q[2]) * a.sin(), fr.sign)
    };
    let q = Point::<3>::new(s[0], s[1], theta);
    let flag = line(&q)?;
    let mut cols = [Bivector::zero(); 3];
    for (k, col) in cols.iter_mut().enumerate() {
        let mut e = Point::<3>::zeros();
        e[k] = 1.0;
        let d = richardson(
            |t| line(&(q + e * t)).map(|f| f.bivector().as_vector()).unwrap_or_else(|_| SVector::<f64, 6>::from_element(f64::NAN)),
            h,
        );
        *col = Bivector::from_vector(&d);
    }
    let mut g = Matrix3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            g[(i, k)] = flag.g_eps(&cols[i], &cols[k])?;
        }
    }
    Ok(g.determinant())
}

/// Reeb field of η³: X = (k₁ − k₂)cosθ sinθ φ∧N + v∧v⊥.
pub fn reeb_field_spaceform(fr: &SurfaceFramePoint, theta: f64) -> Result<Bivector> {
    fr.require_convex()?;
    let (s, c) = theta.sin_cos();
    Ok(wedge(&fr.phi, &fr.n) * ((fr.k1 - fr.k2) * c * s) + wedge(&fr.v(theta), &fr.v_perp(theta)))
}

/// Chart components (ds¹, ds², dθ) of a tangent bivector of H(S).
pub fn bivector_to_chart<P: SurfacePatch>(patch: &P, s: &Vector2<f64>, theta: f64, x: &Bivector) -> Result<Vector3<f64>> {
    let fr = patch.frame(s)?;
    let frame = tangent_hyp_frame(&fr, theta);
    let (m, resid) = solve_in_span(&frame, &[*x])?;
    if resid > 1e-9 * (1.0 + x.norm()) {
        return Err(GeomError::Input(format!("bivector not tangent to H(S): residual {resid:e}")));
    }
    let e = patch.coframe(s)?;
    let einv = e.try_inverse().ok_or_else(|| GeomError::Degenerate("singular coframe".into()))?;
    let ds = einv * Vector2::new(m[0], m[1]);
    Ok(Vector3::new(ds[0], ds[1], m[2]))
}

/// η³(X) and max |ι_X dη³| for a tangent field X of H(S) at (s, θ).
pub fn reeb_contract_spaceform<P: SurfacePatch + Clone + 'static>(
    patch: &P,
    s: &Vector2<f64>,
    theta: f64,
    x: &Bivector,
    h: f64,
) -> Result<(f64, f64)> {
    let xc = bivector_to_chart(patch, s, theta, x)?;
    let omega = coframe_row_field(patch, 2);
    let q = Point::<3>::new(s[0], s[1], theta);
    let w = omega.at(&q)?;
    let d = omega.exterior_derivative(&q, h)?;
    Ok((w.dot(&xc), (d.transpose() * xc).amax()))
}

/// Latitude sphere {x⁴ = cos ρ} of S³ (ε = 1) or {x⁴ = cosh ρ} of H³ (ε = −1), in polar coordinates (α, β).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LatitudeSphere {
    pub sign: SpaceFormSign,
    pub rho: f64,
}

impl LatitudeSphere {
    pub fn new(sign: SpaceFormSign, rho: f64) -> Result<Self> {
        let ok = rho > 0.0 && rho.is_finite() && (sign.eps() < 0.0 || rho < std::f64::consts::PI);
        if !ok {
            return Err(GeomError::Input(format!("latitude radius {rho} out of range")));
        }
        Ok(Self { sign, rho })
    }

    fn radial(&self) -> (f64, f64) {
        if self.sign.eps() > 0.0 {
            self.rho.sin_cos()
        } else {
            (self.rho.sinh(), self.rho.cosh())
        }
    }

    /// k₁ = k₂ = cot ρ (ε = 1) or coth ρ (ε = −1).
    pub fn curvature(&self) -> f64 {
        let (s, c) = self.radial();
        c / s
    }

    /// Unit normal at a point of the sphere.
    pub fn normal_at(&self, p: &Vector4<f64>) -> Vector4<f64> {
        let (s, c) = self.radial();
        let u = Vector3::new(p[0], p[1], p[2]) / s;
        if self.sign.eps() > 0.0 {
            Vector4::new(-c * u[0], -c * u[1], -c * u[2], s)
        } else {
            -Vector4::new(c * u[0], c * u[1], c * u[2], s)
        }
    }
}

impl SurfacePatch for LatitudeSphere {
    fn sign(&self) -> SpaceFormSign {
        self.sign
    }

    fn point(&self, q: &Vector2<f64>) -> Vector4<f64> {
        let (s, c) = self.radial();
        let (sa, ca) = q[0].sin_cos();
        let (sb, cb) = q[1].sin_cos();
        Vector4::new(s * sa * cb, s * sa * sb, s * ca, c)
    }

    fn frame(&self, q: &Vector2<f64>) -> Result<SurfaceFramePoint> {
        let (sa, ca) = q[0].sin_cos();
        let (sb, cb) = q[1].sin_cos();
        if sa.abs() < 1e-6 {
            return Err(GeomError::Chart("polar frame singular at α ∈ {0, π}".into()));
        }
        let (s, _) = self.radial();
        let phi = self.point(q);
        let e1 = Vector4::new(ca * cb, ca * sb, -sa, 0.0);
        let e2 = Vector4::new(-sb, cb, 0.0, 0.0);
        let k = self.curvature();
        SurfaceFramePoint::new(phi, e1, e2, self.normal_at(&phi), (k, k), (0.0, ca / (sa * s)), self.sign)
    }

    fn coframe(&self, q: &Vector2<f64>) -> Result<Matrix2<f64>> {
        let (s, _) = self.radial();
        Ok(Matrix2::new(s, 0.0, 0.0, s * q[0].sin()))
    }
}

/// Clifford torus (cos r e^{is¹}, sin r e^{is²}) in S³; principal curvatures tan r and −cot r.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CliffordTorus {
    pub r: f64,
}

impl CliffordTorus {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < std::f64::consts::FRAC_PI_2) {
            return Err(GeomError::Input(format!("torus radius {r} must lie in (0, π/2)")));
        }
        Ok(Self { r })
    }
}

impl SurfacePatch for CliffordTorus {
    fn sign(&self) -> SpaceFormSign {
        SpaceFormSign::SPHERE
    }

    fn point(&self, q: &Vector2<f64>) -> Vector4<f64> {
        let (sr, cr) = self.r.sin_cos();
        Vector4::new(cr * q[0].cos(), cr * q[0].sin(), sr * q[1].cos(), sr * q[1].sin())
    }

    fn frame(&self, q: &Vector2<f64>) -> Result<SurfaceFramePoint> {
        let (sr, cr) = self.r.sin_cos();
        let (s1, c1) = q[0].sin_cos();
        let (s2, c2) = q[1].sin_cos();
        let phi = self.point(q);
        let e1 = Vector4::new(-s1, c1, 0.0, 0.0);
        let e2 = Vector4::new(0.0, 0.0, -s2, c2);
        let mut n = Vector4::new(-sr * c1, -sr * s1, cr * c2, cr * s2);
        let mut k = (sr / cr, -cr / sr);
        if Matrix4::from_columns(&[phi, e1, e2, n]).determinant() < 0.0 {
            n = -n;
            k = (-k.0, -k.1);
        }
        SurfaceFramePoint::new(phi, e1, e2, n, k, (0.0, 0.0), SpaceFormSign::SPHERE)
    }

    fn coframe(&self, _: &Vector2<f64>) -> Result<Matrix2<f64>> {
        let (sr, cr) = self.r.sin_cos();
        Ok(Matrix2::new(cr, 0.0, 0.0, sr))
    }
}

/// State of the contact curve: point φ on S and the unit tangent v of the line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceFormFlowSample {
    pub t: f64,
    #[serde(serialize_with = "ser_vec4")]
    pub phi: Vector4<f64>,
    #[serde(serialize_with = "ser_vec4")]
    pub v: Vector4<f64>,
}

/// v⊥ = −ε g⁻¹ det[φ, v, N, ·].
pub fn v_perp_ambient(phi: &Vector4<f64>, v: &Vector4<f64>, n: &Vector4<f64>, sign: SpaceFormSign) -> Vector4<f64> {
    let mut c = Vector4::zeros();
    for i in 0..4 {
        let mut e = Vector4::zeros();
        e[i] = 1.0;
        c[i] = Matrix4::from_columns(&[*phi, *v, *n, e]).determinant();
    }
    raise(&c, sign) * -sign.eps()
}

impl LatitudeSphere {
    /// Reeb flow of η³ in R⁴_ε: φ̇ = −v⊥, v̇ = (k₁ − k₂)cosθ sinθ N, which vanishes on an umbilic sphere.
    fn reeb_rhs(&self, state: &SVector<f64, 8>) -> SVector<f64, 8> {
        let phi = state.fixed_rows::<4>(0).into_owned();
        let v = state.fixed_rows::<4>(4).into_owned();
        let n = self.normal_at(&phi);
        let vp = v_perp_ambient(&phi, &v, &n, self.sign);
        let mut out = SVector::<f64, 8>::zeros();
        out.fixed_rows_mut::<4>(0).copy_from(&(-vp));
        out
    }

    /// Integrates the Reeb flow with RK4 from a flag tangent to the sphere.
    pub fn reeb_flow(&self, phi0: Vector4<f64>, v0: Vector4<f64>, dt: f64, steps: usize) -> Result<Vec<SpaceFormFlowSample>> {
        let n0 = self.normal_at(&phi0);
        SpaceFormFlag::new(phi0, v0, self.sign)?;
        if inner4(&v0, &n0, self.sign).abs() > 1e-10 {
            return Err(GeomError::Input("initial direction not tangent to the sphere".into()));
        }
        let mut y = SVector::<f64, 8>::zeros();
        y.fixed_rows_mut::<4>(0).copy_from(&phi0);
        y.fixed_rows_mut::<4>(4).copy_from(&v0);
        let mut out = vec![SpaceFormFlowSample { t: 0.0, phi: phi0, v: v0 }];
        for k in 1..=steps {
            let k1 = self.reeb_rhs(&y);
            let k2 = self.reeb_rhs(&(y + k1 * (dt / 2.0)));
            let k3 = self.reeb_rhs(&(y + k2 * (dt / 2.0)));
            let k4 = self.reeb_rhs(&(y + k3 * dt));
            y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            let phi = y.fixed_rows::<4>(0).into_owned();
            let v = y.fixed_rows::<4>(4).into_owned();
            let drift = (inner4(&phi, &phi, self.sign) - 1.0).abs();
            if !(drift <= 1e-9) {
                return Err(GeomError::Numerical(format!("flow left S³_ε (drift {drift:e})")));
            }
            out.push(SpaceFormFlowSample { t: dt * k as f64, phi, v });
        }
        Ok(out)
    }

    /// Tangential part of φ̈ along the Reeb flow at a state.
    pub fn reeb_geodesic_defect(&self, phi: &Vector4<f64>, v: &Vector4<f64>, h: f64) -> f64 {
        let mut y = SVector::<f64, 8>::zeros();
        y.fixed_rows_mut::<4>(0).copy_from(phi);
        y.fixed_rows_mut::<4>(4).copy_from(v);
        let f = self.reeb_rhs(&y);
        let acc = richardson(|t| self.reeb_rhs(&(y + f * t)).fixed_rows::<4>(0).into_owned(), h);
        let n = self.normal_at(phi);
        let e = self.sign.eps();
        let tang = acc - phi * inner4(&acc, phi, self.sign) - n * (e * inner4(&acc, &n, self.sign));
        tang.norm()
    }
}

/// One sample of a curve t ↦ φ(t)∧v(t) in H(S), with the surface frame at φ(t).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceFormKnotSample {
    pub t: f64,
    #[serde(serialize_with = "ser_vec4")]
    pub v: Vector4<f64>,
    pub frame: SurfaceFramePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceFormLegendrianFlags {
    pub alpha: bool,
    pub beta: bool,
    pub normal_to_c: bool,
    pub curvature_line_or_umbilic: bool,
}

/// Distance from `x` to the span of `plane`.
pub fn span_residual(plane: &[Bivector; 2], x: &Bivector) -> f64 {
    let a = SMatrix::<f64, 6, 2>::from_columns(&[plane[0].as_vector(), plane[1].as_vector()]);
    let b = x.as_vector();
    match (a.transpose() * a).try_inverse() {
        Some(inv) => (a * (inv * (a.transpose() * b)) - b).norm(),
        None => f64::INFINITY,
    }
}

/// Classifies a sampled curve in H(S) ⊂ L(S³_ε); the contact curve must be unit speed.
pub fn legendrian_classify_spaceform(curve: &[SpaceFormKnotSample], tol: f64) -> Result<SpaceFormLegendrianFlags> {
    if curve.len() < 3 {
        return Err(GeomError::Input("curve needs at least 3 samples".into()));
    }
    if !(tol > 0.0) {
        return Err(GeomError::Input("tolerance must be positive".into()));
    }
    let mut out = SpaceFormLegendrianFlags { alpha: true, beta: true, normal_to_c: true, curvature_line_or_umbilic: true };
    let n = curve.len();
    for i in 0..n {
        let idx = if i == 0 {
            [0, 1, 2]
        } else if i + 1 == n {
            [n - 3, n - 2, n - 1]
        } else {
            [i - 1, i, i + 1]
        };
        let at = idx.iter().position(|&k| k == i).expect("stencil contains i");
        let u = idx.map(|k| curve[k].t);
        if u[1] <= u[0] || u[2] <= u[1] {
            return Err(GeomError::Input("curve parameter must increase strictly".into()));
        }
        let smp = &curve[i];
        let fr = &smp.frame;
        let sign = fr.sign;
        SpaceFormFlag::new(fr.phi, smp.v, sign)?;
        let dphi = crate::line_space::legendrian::lagrange_derivative(u, idx.map(|k| curve[k].frame.phi), at);
        let dc = crate::line_space::legendrian::lagrange_derivative(u, idx.map(|k| wedge(&curve[k].frame.phi, &curve[k].v)), at);
        let speed = inner4(&dphi, &dphi, sign);
        if !((speed - sign.eps()).abs() <= tol) {
            return Err(GeomError::Input(format!("contact curve not unit speed at t = {}: ⟨φ̇,φ̇⟩ = {speed}", smp.t)));
        }
        // v must be tangent to S at φ.
        if inner4(&smp.v, &fr.n, sign).abs() > 1e-8 {
            return Err(GeomError::Input(format!("line not tangent to S at t = {}", smp.t)));
        }
        let theta = (sign.eps() * inner4(&smp.v, &fr.e2, sign)).atan2(sign.eps() * inner4(&smp.v, &fr.e1, sign));
        let (pp, pm) = null_planes_spaceform(fr, theta);
        let scale = dc.norm();
        if scale < 1e-8 {
            return Err(GeomError::Input(format!("curve is stationary in the line space at t = {}", smp.t)));
        }
        let a = sign.eps() * inner4(&dphi, &fr.e1, sign);
        let b = sign.eps() * inner4(&dphi, &fr.e2, sign);
        let kscale = fr.k1.abs() + fr.k2.abs();
        let flags = SpaceFormLegendrianFlags {
            alpha: span_residual(&pp, &dc) <= tol * scale,
            beta: span_residual(&pm, &dc) <= tol * scale,
            normal_to_c: inner4(&dphi, &smp.v, sign).abs() <= tol,
            curvature_line_or_umbilic: ((fr.k1 - fr.k2) * a * b).abs() <= tol * kscale.max(1e-300),
        };
        let tangent = (smp.v - dphi).norm().min((smp.v + dphi).norm()) <= 10.0 * tol;
        if flags.alpha != tangent {
            return Err(GeomError::Consistency(format!("at t = {}: α {} but v = ±φ̇ {}", smp.t, flags.alpha, tangent)));
        }
        let count = [flags.beta, flags.normal_to_c, flags.curvature_line_or_umbilic].iter().filter(|b| **b).count();
        if count == 2 {
            return Err(GeomError::Consistency(format!("at t = {}: {flags:?} breaks the triangle", smp.t)));
        }
        out.alpha &= flags.alpha;
        out.beta &= flags.beta;
        out.normal_to_c &= flags.normal_to_c;
        out.curvature_line_or_umbilic &= flags.curvature_line_or_umbilic;
    }
    Ok(out)
}

/// How a demo curve picks the line direction v in T_φS.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpaceLineChoice {
    /// v at a fixed angle from φ̇ (0 is the tangent line).
    Offset(f64),
    /// v orthogonal to the shape-operator image of φ̇.
    Conjugate,
}

/// Samples φ(t)∧v(t) along a curve given in patch coordinates, which must be unit speed.
pub fn patch_knot<P, F>(patch: &P, curve: F, t0: f64, t1: f64, n: usize, choice: SpaceLineChoice) -> Result<Vec<SpaceFormKnotSample>>
where
    P: SurfacePatch,
    F: Fn(f64) -> Vector2<f64>,
{
    if n < 3 || t1 <= t0 {
        return Err(GeomError::Input("curve needs n ≥ 3 and t1 > t0".into()));
    }
    let sign = patch.sign();
    let e = sign.eps();
    (0..=n)
        .map(|k| {
            let t = t0 + (t1 - t0) * k as f64 / n as f64;
            let frame = patch.frame(&curve(t))?;
            let dphi = richardson(|h| patch.point(&curve(t + h)), 1e-4);
            let (a, b) = (e * inner4(&dphi, &frame.e1, sign), e * inner4(&dphi, &frame.e2, sign));
            let theta = match choice {
                SpaceLineChoice::Offset(o) => b.atan2(a) + o,
                SpaceLineChoice::Conjugate => (frame.k1 * a).atan2(-frame.k2 * b),
            };
            Ok(SpaceFormKnotSample { t, v: frame.v(theta), frame })
        })
        .collect()
}
