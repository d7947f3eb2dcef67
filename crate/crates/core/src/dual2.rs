//! Second-order forward-mode dual numbers in two real variables.
//!
//! Carries a value, gradient and Hessian through arithmetic, so support
//! functions written once give exact derivatives up to order two.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    /// [∂x, ∂y]
    pub d: [f64; 2],
    /// [∂xx, ∂xy, ∂yy]
    pub h: [f64; 3],
}

impl Dual2 {
    pub fn constant(c: f64) -> Self {
        Self { v: c, d: [0.0; 2], h: [0.0; 3] }
    }

    pub fn var_x(x: f64) -> Self {
        Self { v: x, d: [1.0, 0.0], h: [0.0; 3] }
    }

    pub fn var_y(y: f64) -> Self {
        Self { v: y, d: [0.0, 1.0], h: [0.0; 3] }
    }

    /// g(self) given g, g', g'' at the value.
    pub fn chain(self, g0: f64, g1: f64, g2: f64) -> Self {
        let [ux, uy] = self.d;
        Self {
            v: g0,
            d: [g1 * ux, g1 * uy],
            h: [g1 * self.h[0] + g2 * ux * ux, g1 * self.h[1] + g2 * ux * uy, g1 * self.h[2] + g2 * uy * uy],
        }
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn powi(self, n: i32) -> Self {
        let nf = n as f64;
        self.chain(self.v.powi(n), nf * self.v.powi(n - 1), nf * (nf - 1.0) * self.v.powi(n - 2))
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1]],
            h: [self.h[0] + o.h[0], self.h[1] + o.h[1], self.h[2] + o.h[2]],
        }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self {
            v: a.v * b.v,
            d: [a.v * b.d[0] + b.v * a.d[0], a.v * b.d[1] + b.v * a.d[1]],
            h: [
                a.h[0] * b.v + 2.0 * a.d[0] * b.d[0] + a.v * b.h[0],
                a.h[1] * b.v + a.d[0] * b.d[1] + a.d[1] * b.d[0] + a.v * b.h[1],
                a.h[2] * b.v + 2.0 * a.d[1] * b.d[1] + a.v * b.h[2],
            ],
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Add<f64> for Dual2 {
    type Output = Self;
    fn add(mut self, c: f64) -> Self {
        self.v += c;
        self
    }
}

impl Sub<f64> for Dual2 {
    type Output = Self;
    fn sub(mut self, c: f64) -> Self {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Dual2 {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self { v: self.v * c, d: [self.d[0] * c, self.d[1] * c], h: [self.h[0] * c, self.h[1] * c, self.h[2] * c] }
    }
}

impl Div<f64> for Dual2 {
    type Output = Self;
    fn div(self, c: f64) -> Self {
        self * (1.0 / c)
    }
}

impl Add<Dual2> for f64 {
    type Output = Dual2;
    fn add(self, d: Dual2) -> Dual2 {
        d + self
    }
}

impl Sub<Dual2> for f64 {
    type Output = Dual2;
    fn sub(self, d: Dual2) -> Dual2 {
        -d + self
    }
}

impl Mul<Dual2> for f64 {
    type Output = Dual2;
    fn mul(self, d: Dual2) -> Dual2 {
        d * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64, f64) -> f64, x: f64, y: f64) -> ([f64; 2], [f64; 3]) {
        let h = 1e-4;
        let fx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
        let fy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
        let fxx = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
        let fyy = (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
        let fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
        ([fx, fy], [fxx, fxy, fyy])
    }

    #[test]
    fn matches_differences() {
        let g = |x: Dual2, y: Dual2| ((x * x * 3.0 + y * x + 2.0).sqrt() / (1.0 + y * y)).sin() + (x * 0.5).exp() * y.cos();
        let gf = |x: f64, y: f64| ((3.0 * x * x + y * x + 2.0).sqrt() / (1.0 + y * y)).sin() + (0.5 * x).exp() * y.cos();
        let (x, y) = (0.3, -0.7);
        let d = g(Dual2::var_x(x), Dual2::var_y(y));
        let (grad, hess) = fd(gf, x, y);
        assert!((d.v - gf(x, y)).abs() < 1e-15);
        for (a, b) in d.d.iter().zip(&grad) {
            assert!((a - b).abs() < 1e-7);
        }
        for (a, b) in d.h.iter().zip(&hess) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn powers() {
        let x = Dual2::var_x(1.5);
        let p = x.powi(3);
        assert_eq!(p.v, 3.375);
        assert_eq!(p.d[0], 6.75);
        assert_eq!(p.h[0], 9.0);
        let q = 2.0 - x / 3.0;
        assert!((q.v - 1.5).abs() < 1e-15 && (q.d[0] + 1.0 / 3.0).abs() < 1e-15);
    }
}
