//! Truncated Taylor series in one variable.
//!
//! A [`Jet`] stores `f(t0 + h) = c0 + c1 h + c2 h^2 + ...` up to a fixed
//! length. Arithmetic propagates the coefficients exactly, so a quantity built
//! from jets of the curve's derivatives carries its own derivatives along.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::lorentz::MVec3;

pub const JET_CAPACITY: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; JET_CAPACITY],
    len: usize,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Jet {
    pub fn constant(v: f64, len: usize) -> Jet {
        let mut c = [0.0; JET_CAPACITY];
        c[0] = v;
        Jet {
            c,
            len: len.clamp(1, JET_CAPACITY),
        }
    }

    /// Builds a jet from a value followed by its derivatives.
    pub fn from_derivatives(d: &[f64]) -> Jet {
        let len = d.len().clamp(1, JET_CAPACITY);
        let mut c = [0.0; JET_CAPACITY];
        for (k, slot) in c.iter_mut().enumerate().take(len) {
            *slot = d[k] / factorial(k);
        }
        Jet { c, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        assert!(k < self.len, "jet of length {} has no derivative {k}", self.len);
        self.c[k] * factorial(k)
    }

    /// The jet of the derivative; one coefficient shorter.
    pub fn deriv(&self) -> Jet {
        assert!(self.len > 1, "cannot differentiate a jet of length 1");
        let mut c = [0.0; JET_CAPACITY];
        for k in 0..self.len - 1 {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Jet {
            c,
            len: self.len - 1,
        }
    }

    /// `self^p` for a real exponent; needs a nonzero value when `p` is not a
    /// nonnegative integer.
    pub fn powf(&self, p: f64) -> Jet {
        let f = &self.c;
        let mut y = [0.0; JET_CAPACITY];
        y[0] = f[0].powf(p);
        for k in 1..self.len {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((p + 1.0) * j as f64 - k as f64) * f[j] * y[k - j];
            }
            y[k] = acc / (k as f64 * f[0]);
        }
        Jet { c: y, len: self.len }
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Jet {
        self.powf(-1.0)
    }

    /// `|self|`, differentiated on the side of the current sign.
    pub fn abs(&self) -> Jet {
        if self.c[0] < 0.0 {
            -*self
        } else {
            *self
        }
    }

    pub fn scale(&self, k: f64) -> Jet {
        let mut out = *self;
        for v in out.c.iter_mut().take(self.len) {
            *v *= k;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let len = self.len.min(o.len);
        let mut c = [0.0; JET_CAPACITY];
        for k in 0..len {
            c[k] = self.c[k] + o.c[k];
        }
        Jet { c, len }
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
        let len = self.len.min(o.len);
        let mut c = [0.0; JET_CAPACITY];
        for (k, slot) in c.iter_mut().enumerate().take(len) {
            *slot = (0..=k).map(|j| self.c[j] * o.c[k - j]).sum();
        }
        Jet { c, len }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

/// A vector whose components are jets.
#[derive(Clone, Copy, Debug)]
pub struct JetVec(pub [Jet; 3]);

impl JetVec {
    pub fn value(&self) -> MVec3 {
        MVec3::new(self.0[0].value(), self.0[1].value(), self.0[2].value())
    }

    pub fn deriv(&self) -> JetVec {
        JetVec(self.0.map(|j| j.deriv()))
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(Jet::len).min().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Minkowski inner product.
    pub fn dot(&self, o: &JetVec) -> Jet {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        a1 * b1 + a2 * b2 - a3 * b3
    }

    pub fn norm_sq(&self) -> Jet {
        self.dot(self)
    }

    /// Lorentzian cross product.
    pub fn cross(&self, o: &JetVec) -> JetVec {
        let [u1, u2, u3] = self.0;
        let [v1, v2, v3] = o.0;
        JetVec([u2 * v3 - u3 * v2, u3 * v1 - u1 * v3, -(u1 * v2 - u2 * v1)])
    }

    pub fn scale(&self, k: Jet) -> JetVec {
        JetVec(self.0.map(|c| c * k))
    }

    pub fn time_reflect(&self) -> JetVec {
        JetVec([self.0[0], self.0[1], -self.0[2]])
    }
}

impl Add for JetVec {
    type Output = JetVec;
    fn add(self, o: JetVec) -> JetVec {
        JetVec([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for JetVec {
    type Output = JetVec;
    fn sub(self, o: JetVec) -> JetVec {
        JetVec([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

/// Determinant of the matrix with rows `u`, `v`, `w`.
pub fn det3(u: &JetVec, v: &JetVec, w: &JetVec) -> Jet {
    u.cross(v).dot(w)
}
