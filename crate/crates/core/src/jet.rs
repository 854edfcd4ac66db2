//! Fourth-order derivative jets.
//!
//! A [`Jet`] holds a value together with its first four derivatives with
//! respect to one real variable. Jets compose exactly through the chain rule
//! (Faà di Bruno up to order four) and the Leibniz rule, so closed-form
//! functions built from them carry exact derivatives up to rounding.

use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl Jet {
    pub const fn new(value: f64, d1: f64, d2: f64, d3: f64, d4: f64) -> Self {
        Jet {
            value,
            d1,
            d2,
            d3,
            d4,
        }
    }

    pub const fn constant(c: f64) -> Self {
        Jet::new(c, 0.0, 0.0, 0.0, 0.0)
    }

    /// The identity map evaluated at `t`.
    pub const fn variable(t: f64) -> Self {
        Jet::new(t, 1.0, 0.0, 0.0, 0.0)
    }

    /// The affine map `s -> scale * s + offset` evaluated at `t`.
    pub fn affine(t: f64, scale: f64, offset: f64) -> Self {
        Jet::new(scale * t + offset, scale, 0.0, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Jet::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.value, self.d1, self.d2, self.d3, self.d4]
    }

    /// Derivative of order `k` (0 is the value).
    pub fn derivative(&self, k: usize) -> f64 {
        self.to_array()[k]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Jet of `g(t) = f(k t)` given the jet of `f` at `k t`.
    pub fn rescale_argument(self, k: f64) -> Self {
        let k2 = k * k;
        Jet::new(self.value, k * self.d1, k2 * self.d2, k2 * k * self.d3, k2 * k2 * self.d4)
    }

    /// Chain rule: `outer` holds `g, g', g'', g''', g''''` evaluated at `self.value`.
    pub fn compose(self, outer: [f64; 5]) -> Self {
        let [g0, g1, g2, g3, g4] = outer;
        let (u1, u2, u3, u4) = (self.d1, self.d2, self.d3, self.d4);
        Jet::new(
            g0,
            g1 * u1,
            g2 * u1 * u1 + g1 * u2,
            g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3,
            g4 * u1.powi(4)
                + 6.0 * g3 * u1 * u1 * u2
                + g2 * (3.0 * u2 * u2 + 4.0 * u1 * u3)
                + g1 * u4,
        )
    }

    pub fn powf(self, p: f64) -> Self {
        let u = self.value;
        let v = u.powf(p);
        let mut outer = [v; 5];
        let mut coef = 1.0;
        let mut upow = v;
        for (k, slot) in outer.iter_mut().enumerate().skip(1) {
            coef *= p - (k as f64 - 1.0);
            upow /= u;
            *slot = coef * upow;
        }
        self.compose(outer)
    }

    pub fn powi(self, n: i32) -> Self {
        let mut acc = Jet::constant(1.0);
        for _ in 0..n.unsigned_abs() {
            acc = acc * self;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn recip(self) -> Self {
        let u = self.value;
        let r = 1.0 / u;
        let r2 = r * r;
        self.compose([r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2, 24.0 * r2 * r2 * r])
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose([e; 5])
    }

    pub fn ln(self) -> Self {
        let u = self.value;
        let r = 1.0 / u;
        self.compose([u.ln(), r, -r * r, 2.0 * r * r * r, -6.0 * r.powi(4)])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose([c, -s, -c, s, c])
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose([s, c, -s, -c, s])
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose([c, s, c, s, c])
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose([s, c, s, c, s])
    }

    pub fn scale(self, k: f64) -> Self {
        Jet::new(k * self.value, k * self.d1, k * self.d2, k * self.d3, k * self.d4)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(
            self.value + o.value,
            self.d1 + o.d1,
            self.d2 + o.d2,
            self.d3 + o.d3,
            self.d4 + o.d4,
        )
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.value += c;
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let (a, b) = (self.to_array(), o.to_array());
        Jet::new(
            a[0] * b[0],
            a[1] * b[0] + a[0] * b[1],
            a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2],
            a[3] * b[0] + 3.0 * a[2] * b[1] + 3.0 * a[1] * b[2] + a[0] * b[3],
            a[4] * b[0]
                + 4.0 * a[3] * b[1]
                + 6.0 * a[2] * b[2]
                + 4.0 * a[1] * b[3]
                + a[0] * b[4],
        )
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.scale(k)
    }
}
