//! Chart-based pseudo-Riemannian calculus.
//!
//! Metric fields are callbacks from chart points to symmetric matrices.
//! Connections and curvature come from central differences with one
//! Richardson step, so a step `h` gives O(h^4) truncation error.

use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix, SVector, Vector4};

use crate::error::{GeomError, Result};

pub type NeutralVec4 = Vector4<f64>;
pub type Point<const N: usize> = SVector<f64, N>;

/// Default absolute tolerance for predicates on normalized inputs.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Zero band used when counting eigenvalue signs.
pub const SIGNATURE_BAND: f64 = 1e-10;
/// Default step for curvature differencing.
pub const CURVATURE_STEP: f64 = 1e-3;

type PointFn<const N: usize, T> = Arc<dyn Fn(&Point<N>) -> T + Send + Sync>;

#[derive(Clone)]
pub enum Domain<const N: usize> {
    Everywhere,
    Box { lo: [f64; N], hi: [f64; N] },
    Predicate(PointFn<N, bool>),
}

impl<const N: usize> Domain<N> {
    pub fn contains(&self, p: &Point<N>) -> bool {
        if p.iter().any(|c| !c.is_finite()) {
            return false;
        }
        match self {
            Domain::Everywhere => true,
            Domain::Box { lo, hi } => (0..N).all(|i| p[i] >= lo[i] && p[i] <= hi[i]),
            Domain::Predicate(f) => f(p),
        }
    }

    /// True when every axis offset of size `m` around `p` stays inside.
    pub fn contains_with_margin(&self, p: &Point<N>, m: f64) -> bool {
        match self {
            Domain::Everywhere => self.contains(p),
            Domain::Box { lo, hi } => self.contains(p) && (0..N).all(|i| p[i] - m >= lo[i] && p[i] + m <= hi[i]),
            Domain::Predicate(_) => {
                self.contains(p)
                    && (0..N).all(|i| {
                        let mut a = *p;
                        let mut b = *p;
                        a[i] += m;
                        b[i] -= m;
                        self.contains(&a) && self.contains(&b)
                    })
            }
        }
    }
}

/// Metric components as a function of chart position.
#[derive(Clone)]
pub struct MetricField<const N: usize> {
    name: String,
    domain: Domain<N>,
    eval: PointFn<N, SMatrix<f64, N, N>>,
    degenerate_allowed: bool,
}

pub type ChartMetricField = MetricField<4>;

impl<const N: usize> MetricField<N> {
    pub fn new<F>(name: &str, f: F) -> Self
    where
        F: Fn(&Point<N>) -> SMatrix<f64, N, N> + Send + Sync + 'static,
    {
        Self { name: name.to_string(), domain: Domain::Everywhere, eval: Arc::new(f), degenerate_allowed: false }
    }

    pub fn with_domain(mut self, domain: Domain<N>) -> Self {
        self.domain = domain;
        self
    }

    pub fn allow_degenerate(mut self) -> Self {
        self.degenerate_allowed = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain<N> {
        &self.domain
    }

    pub fn degenerate_allowed(&self) -> bool {
        self.degenerate_allowed
    }

    /// Metric matrix at `p`, after domain, finiteness and symmetry checks.
    pub fn at(&self, p: &Point<N>) -> Result<SMatrix<f64, N, N>> {
        if !self.domain.contains(p) {
            return Err(GeomError::Domain(format!("{} at {:?}", self.name, p.as_slice())));
        }
        self.eval_raw(p)
    }

    fn eval_raw(&self, p: &Point<N>) -> Result<SMatrix<f64, N, N>> {
        let m = (self.eval)(p);
        if m.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::Numerical(format!("{}: non-finite metric", self.name)));
        }
        let asym = (m - m.transpose()).abs().max();
        if asym > 1e-12 * m.abs().max().max(1.0) {
            return Err(GeomError::Numerical(format!("{}: metric not symmetric ({asym:e})", self.name)));
        }
        Ok((m + m.transpose()) * 0.5)
    }

    /// Checks the (2,2) signature unless the field is flagged degenerate-allowed.
    pub fn validate_signature(&self, p: &Point<N>) -> Result<()> {
        let m = self.at(p)?;
        if self.degenerate_allowed {
            return Ok(());
        }
        let s = signature(&m, SIGNATURE_BAND);
        if N == 4 && (s.positive != 2 || s.negative != 2) {
            return Err(GeomError::Degenerate(format!("{}: signature ({},{},{})", self.name, s.positive, s.negative, s.zero)));
        }
        Ok(())
    }
}

/// The flat neutral metric diag(1, 1, -1, -1).
pub fn flat_neutral() -> ChartMetricField {
    MetricField::new("flat", |_| Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0)))
}

pub fn metric_value<const N: usize>(field: &MetricField<N>, p: &Point<N>, u: &Point<N>, v: &Point<N>) -> Result<f64> {
    let m = field.at(p)?;
    Ok(u.dot(&(m * v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Eigenvalue sign counts; the zero band scales with the largest eigenvalue.
pub fn signature<const N: usize>(m: &SMatrix<f64, N, N>, band: f64) -> Signature {
    let d = DMatrix::from_fn(N, N, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let eig = d.symmetric_eigen().eigenvalues;
    let scale = eig.iter().fold(1.0f64, |a, e| a.max(e.abs()));
    let cut = band * scale;
    let mut s = Signature { positive: 0, negative: 0, zero: 0 };
    for e in eig.iter() {
        if *e > cut {
            s.positive += 1;
        } else if *e < -cut {
            s.negative += 1;
        } else {
            s.zero += 1;
        }
    }
    s
}

pub fn rank<const R: usize, const C: usize>(m: &SMatrix<f64, R, C>, rel: f64) -> usize {
    let d = DMatrix::from_fn(R, C, |i, j| m[(i, j)]);
    let sv = d.svd(false, false).singular_values;
    let top = sv.iter().fold(0.0f64, |a, s| a.max(*s));
    sv.iter().filter(|s| **s > rel * top.max(1e-300)).count()
}

fn axis<const N: usize>(i: usize) -> Point<N> {
    let mut e = Point::<N>::zeros();
    e[i] = 1.0;
    e
}

/// Central difference along `dir` with one Richardson step.
pub fn richardson<T, F>(f: F, h: f64) -> T
where
    F: Fn(f64) -> T,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + Clone,
{
    let d1 = (f(h) - f(-h)) * (0.5 / h);
    let d2 = (f(0.5 * h) - f(-0.5 * h)) * (1.0 / h);
    (d2 * 4.0 - d1) * (1.0 / 3.0)
}

/// Fallible variant of [`richardson`].
pub fn try_richardson<T, F>(f: F, h: f64) -> Result<T>
where
    F: Fn(f64) -> Result<T>,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + Clone,
{
    let a = f(h)?;
    let b = f(-h)?;
    let c = f(0.5 * h)?;
    let d = f(-0.5 * h)?;
    let d1 = (a - b) * (0.5 / h);
    let d2 = (c - d) * (1.0 / h);
    Ok((d2 * 4.0 - d1) * (1.0 / 3.0))
}

/// Γ^i_{jk}, stored as `g[i][j][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel<const N: usize> {
    pub g: [[[f64; N]; N]; N],
}

impl<const N: usize> Christoffel<N> {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.g[i][j][k]
    }

    pub fn max_abs(&self) -> f64 {
        self.g.iter().flatten().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    fn sub(&self, o: &Self) -> Self {
        let mut g = self.g;
        for (i, gi) in g.iter_mut().enumerate() {
            for (j, gij) in gi.iter_mut().enumerate() {
                for (k, v) in gij.iter_mut().enumerate() {
                    *v -= o.g[i][j][k];
                }
            }
        }
        Self { g }
    }

    fn scale(&self, s: f64) -> Self {
        let mut g = self.g;
        g.iter_mut().flatten().flatten().for_each(|v| *v *= s);
        Self { g }
    }
}

impl<const N: usize> std::ops::Sub for Christoffel<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Christoffel::sub(&self, &o)
    }
}

impl<const N: usize> std::ops::Mul<f64> for Christoffel<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

fn inverse_checked<const N: usize>(m: &SMatrix<f64, N, N>, name: &str) -> Result<SMatrix<f64, N, N>> {
    let d = DMatrix::from_fn(N, N, |i, j| m[(i, j)]);
    let sv = d.svd(false, false).singular_values;
    let top = sv.iter().fold(0.0f64, |a, s| a.max(*s));
    let low = sv.iter().fold(f64::INFINITY, |a, s| a.min(*s));
    if !(low > 1e-12 * top) {
        return Err(GeomError::Degenerate(format!("{name}: singular metric")));
    }
    m.try_inverse().ok_or_else(|| GeomError::Degenerate(format!("{name}: singular metric")))
}

pub fn christoffel<const N: usize>(field: &MetricField<N>, p: &Point<N>, h: f64) -> Result<Christoffel<N>> {
    if !field.domain.contains_with_margin(p, 2.0 * h) {
        return Err(GeomError::Domain(format!("{}: margin 2h violated", field.name)));
    }
    christoffel_inner(field, p, h)
}

fn christoffel_inner<const N: usize>(field: &MetricField<N>, p: &Point<N>, h: f64) -> Result<Christoffel<N>> {
    let g = field.eval_raw(p)?;
    let ginv = inverse_checked(&g, &field.name)?;
    let mut dg = [SMatrix::<f64, N, N>::zeros(); N];
    for (k, slot) in dg.iter_mut().enumerate() {
        let e = axis::<N>(k);
        *slot = try_richardson(|t| field.eval_raw(&(p + e * t)), h)?;
    }
    let mut out = [[[0.0; N]; N]; N];
    for (i, oi) in out.iter_mut().enumerate() {
        for j in 0..N {
            for k in j..N {
                let mut s = 0.0;
                for l in 0..N {
                    s += ginv[(i, l)] * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]);
                }
                oi[j][k] = 0.5 * s;
                oi[k][j] = 0.5 * s;
            }
        }
    }
    Ok(Christoffel { g: out })
}

pub fn ricci<const N: usize>(field: &MetricField<N>, p: &Point<N>, h: f64) -> Result<SMatrix<f64, N, N>> {
    if !field.domain.contains_with_margin(p, 4.0 * h) {
        return Err(GeomError::Domain(format!("{}: margin 4h violated", field.name)));
    }
    let gam = christoffel_inner(field, p, h)?;
    // dgam[l] = ∂_l Γ
    let mut dgam = Vec::with_capacity(N);
    for l in 0..N {
        let e = axis::<N>(l);
        dgam.push(try_richardson(|t| christoffel_inner(field, &(p + e * t), h), h)?);
    }
    let mut r = SMatrix::<f64, N, N>::zeros();
    for j in 0..N {
        for k in j..N {
            let mut s = 0.0;
            for i in 0..N {
                s += dgam[i].g[i][j][k] - dgam[k].g[i][j][i];
                for q in 0..N {
                    s += gam.g[i][i][q] * gam.g[q][j][k] - gam.g[i][k][q] * gam.g[q][j][i];
                }
            }
            r[(j, k)] = s;
            r[(k, j)] = s;
        }
    }
    Ok(r)
}

pub fn scalar_curvature<const N: usize>(field: &MetricField<N>, p: &Point<N>, h: f64) -> Result<f64> {
    let r = ricci(field, p, h)?;
    let ginv = inverse_checked(&field.at(p)?, &field.name)?;
    Ok((ginv.component_mul(&r)).sum())
}

/// Smooth map between charts with an optional analytic Jacobian.
#[derive(Clone)]
pub struct SmoothMap<const M: usize, const N: usize> {
    eval: PointFn<M, Point<N>>,
    jac: Option<PointFn<M, SMatrix<f64, N, M>>>,
}

impl<const M: usize, const N: usize> SmoothMap<M, N> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&Point<M>) -> Point<N> + Send + Sync + 'static,
    {
        Self { eval: Arc::new(f), jac: None }
    }

    pub fn with_jacobian<J>(mut self, j: J) -> Self
    where
        J: Fn(&Point<M>) -> SMatrix<f64, N, M> + Send + Sync + 'static,
    {
        self.jac = Some(Arc::new(j));
        self
    }

    pub fn apply(&self, p: &Point<M>) -> Point<N> {
        (self.eval)(p)
    }

    pub fn jacobian(&self, p: &Point<M>, h: f64) -> Result<SMatrix<f64, N, M>> {
        let j = match &self.jac {
            Some(j) => j(p),
            None => {
                let mut j = SMatrix::<f64, N, M>::zeros();
                for c in 0..M {
                    let e = axis::<M>(c);
                    let col = richardson(|t| (self.eval)(&(p + e * t)), h);
                    j.set_column(c, &col);
                }
                j
            }
        };
        if j.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::Numerical("non-finite Jacobian".into()));
        }
        Ok(j)
    }

    /// `other ∘ self`; the Jacobian is differenced unless both are analytic.
    pub fn then<const K: usize>(&self, other: &SmoothMap<N, K>) -> SmoothMap<M, K> {
        let f = self.eval.clone();
        let g = other.eval.clone();
        let mut out = SmoothMap::new(move |p: &Point<M>| g(&f(p)));
        if let (Some(jf), Some(jg)) = (self.jac.clone(), other.jac.clone()) {
            let f = self.eval.clone();
            out = out.with_jacobian(move |p: &Point<M>| jg(&f(p)) * jf(p));
        }
        out
    }
}

pub fn pullback_metric<const M: usize, const N: usize>(
    map: &SmoothMap<M, N>,
    ambient: &MetricField<N>,
    p: &Point<M>,
    h: f64,
) -> Result<SMatrix<f64, M, M>> {
    let j = map.jacobian(p, h)?;
    let g = ambient.at(&map.apply(p))?;
    let m = j.transpose() * g * j;
    Ok((m + m.transpose()) * 0.5)
}

/// Pullback as a metric field in its own right (degenerate-allowed).
pub fn pullback_field<const M: usize, const N: usize>(map: &SmoothMap<M, N>, ambient: &MetricField<N>, h: f64) -> MetricField<M> {
    let map = map.clone();
    let amb = ambient.clone();
    let name = format!("pullback of {}", ambient.name);
    MetricField::new(&name, move |p: &Point<M>| pullback_metric(&map, &amb, p, h).unwrap_or_else(|_| SMatrix::from_element(f64::NAN)))
        .allow_degenerate()
}

/// Covector field on an `N`-dimensional chart.
#[derive(Clone)]
pub struct OneFormField<const N: usize> {
    eval: PointFn<N, Point<N>>,
}

impl<const N: usize> OneFormField<N> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&Point<N>) -> Point<N> + Send + Sync + 'static,
    {
        Self { eval: Arc::new(f) }
    }

    pub fn constant(c: Point<N>) -> Self {
        Self::new(move |_| c)
    }

    pub fn at(&self, p: &Point<N>) -> Result<Point<N>> {
        let w = (self.eval)(p);
        if w.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::Numerical("non-finite one-form".into()));
        }
        Ok(w)
    }

    /// Matrix D with dω(u, w) = uᵀ D w, D_ij = ∂_i ω_j − ∂_j ω_i.
    pub fn exterior_derivative(&self, p: &Point<N>, h: f64) -> Result<SMatrix<f64, N, N>> {
        let mut jac = SMatrix::<f64, N, N>::zeros();
        for i in 0..N {
            let e = axis::<N>(i);
            let row = try_richardson(|t| self.at(&(p + e * t)), h)?;
            jac.set_row(i, &row.transpose());
        }
        Ok(jac - jac.transpose())
    }
}

/// Coefficient of ω∧dω against dx¹∧dx²∧dx³.
pub fn frobenius_defect(omega: &OneFormField<3>, p: &Point<3>, h: f64) -> Result<f64> {
    let w = omega.at(p)?;
    if w.norm() < 1e-12 {
        return Err(GeomError::IllConditioned("one-form vanishes at point".into()));
    }
    let d = omega.exterior_derivative(p, h)?;
    Ok(w[0] * d[(1, 2)] - w[1] * d[(0, 2)] + w[2] * d[(0, 1)])
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentPlane {
    pub base: NeutralVec4,
    pub span: [NeutralVec4; 2],
}

impl TangentPlane {
    pub fn new(base: NeutralVec4, u: NeutralVec4, v: NeutralVec4) -> Result<Self> {
        if base.iter().chain(u.iter()).chain(v.iter()).any(|c| !c.is_finite()) {
            return Err(GeomError::Input("non-finite plane data".into()));
        }
        let gram = u.norm_squared() * v.norm_squared() - u.dot(&v).powi(2);
        if !(gram > 1e-20 * u.norm_squared() * v.norm_squared()) || u.norm() == 0.0 {
            return Err(GeomError::Input("span vectors are dependent".into()));
        }
        Ok(Self { base, span: [u, v] })
    }

    /// Same plane with basis `(a u + b v, c u + d v)` for `m = [[a, b], [c, d]]`.
    pub fn recombine(&self, m: &Matrix2<f64>) -> Result<Self> {
        let [u, v] = self.span;
        Self::new(self.base, u * m[(0, 0)] + v * m[(0, 1)], u * m[(1, 0)] + v * m[(1, 1)])
    }

    fn orthonormal(&self) -> [NeutralVec4; 2] {
        let a = self.span[0].normalize();
        let b = self.span[1] - a * a.dot(&self.span[1]);
        [a, b.normalize()]
    }

    fn invariant_under(&self, j: &Matrix4<f64>, tol: f64) -> bool {
        let [a, b] = self.orthonormal();
        [a, b].iter().all(|s| {
            let js = j * s;
            let r = js - a * a.dot(&js) - b * b.dot(&js);
            r.norm() <= tol * js.norm().max(1e-300)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NullPlaneKind {
    Alpha,
    Beta,
    NotTotallyNull,
}

pub fn jplus_flat() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

pub fn jminus_flat() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0,
    )
}

pub fn classify_null_plane(
    plane: &TangentPlane,
    metric: &ChartMetricField,
    jplus: &Matrix4<f64>,
    jminus: &Matrix4<f64>,
    tol: f64,
) -> Result<NullPlaneKind> {
    let g = metric.at(&plane.base)?;
    let [a, b] = plane.orthonormal();
    let scale = g.abs().max().max(1e-300);
    let gram = [a.dot(&(g * a)), a.dot(&(g * b)), b.dot(&(g * b))];
    if gram.iter().any(|x| x.abs() > tol * scale) {
        return Ok(NullPlaneKind::NotTotallyNull);
    }
    let plus = plane.invariant_under(jplus, tol);
    let minus = plane.invariant_under(jminus, tol);
    match (plus, minus) {
        (true, false) => Ok(NullPlaneKind::Alpha),
        (false, true) => Ok(NullPlaneKind::Beta),
        (true, true) => Err(GeomError::Consistency("totally null plane invariant under both structures".into())),
        (false, false) => Err(GeomError::Consistency("totally null plane invariant under neither structure".into())),
    }
}

/// Point (a cos θ₁, a sin θ₁, a cos θ₂, a sin θ₂) of the flat null cone.
pub fn null_cone_point(a: f64, theta1: f64, theta2: f64) -> NeutralVec4 {
    Vector4::new(a * theta1.cos(), a * theta1.sin(), a * theta2.cos(), a * theta2.sin())
}
