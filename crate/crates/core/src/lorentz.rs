//! Linear algebra of Minkowski 3-space with signature `(+, +, -)`.
//!
//! The third coordinate is the timelike one. Everything here is a plain
//! value type; all operations are pure.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// A vector of Minkowski 3-space. `x3` is the timelike coordinate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl MVec3 {
    pub const ZERO: MVec3 = MVec3::new(0.0, 0.0, 0.0);
    pub const E1: MVec3 = MVec3::new(1.0, 0.0, 0.0);
    pub const E2: MVec3 = MVec3::new(0.0, 1.0, 0.0);
    pub const E3: MVec3 = MVec3::new(0.0, 0.0, 1.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        MVec3 { x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        MVec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Minkowski inner product `x1*y1 + x2*y2 - x3*y3`.
    pub fn dot(self, other: MVec3) -> f64 {
        minkowski_inner(self, other)
    }

    /// `<v, v>`; negative for timelike vectors.
    pub fn norm_sq(self) -> f64 {
        minkowski_inner(self, self)
    }

    /// `sqrt(|<v, v>|)`.
    pub fn norm(self) -> f64 {
        self.norm_sq().abs().sqrt()
    }

    pub fn euclid_norm_sq(self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn cross(self, other: MVec3) -> MVec3 {
        lorentz_cross(self, other)
    }

    /// Flips the timelike coordinate. `<v.time_reflect(), v>` is the
    /// Euclidean squared norm of `v`, which is never zero for `v != 0`.
    pub fn time_reflect(self) -> MVec3 {
        MVec3::new(self.x1, self.x2, -self.x3)
    }

    pub fn max_abs_diff(self, other: MVec3) -> f64 {
        (self.x1 - other.x1)
            .abs()
            .max((self.x2 - other.x2).abs())
            .max((self.x3 - other.x3).abs())
    }
}

impl fmt::Display for MVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, self.x3)
    }
}

impl Add for MVec3 {
    type Output = MVec3;
    fn add(self, o: MVec3) -> MVec3 {
        MVec3::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for MVec3 {
    fn add_assign(&mut self, o: MVec3) {
        *self = *self + o;
    }
}

impl Sub for MVec3 {
    type Output = MVec3;
    fn sub(self, o: MVec3) -> MVec3 {
        MVec3::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl SubAssign for MVec3 {
    fn sub_assign(&mut self, o: MVec3) {
        *self = *self - o;
    }
}

impl Neg for MVec3 {
    type Output = MVec3;
    fn neg(self) -> MVec3 {
        MVec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for MVec3 {
    type Output = MVec3;
    fn mul(self, k: f64) -> MVec3 {
        MVec3::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Mul<MVec3> for f64 {
    type Output = MVec3;
    fn mul(self, v: MVec3) -> MVec3 {
        v * self
    }
}

impl Index<usize> for MVec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x1,
            1 => &self.x2,
            2 => &self.x3,
            _ => panic!("MVec3 index out of range: {i}"),
        }
    }
}

/// Causal character of a vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
}

pub fn minkowski_inner(u: MVec3, v: MVec3) -> f64 {
    u.x1 * v.x1 + u.x2 * v.x2 - u.x3 * v.x3
}

/// Classifies `v`. A vector counts as lightlike when
/// `|<v,v>| <= tol * (1 + |v|^2_euclid)`; the zero vector is spacelike.
pub fn causal_class(v: MVec3, tol: f64) -> CausalClass {
    if v == MVec3::ZERO {
        return CausalClass::Spacelike;
    }
    let q = v.norm_sq();
    let threshold = tol * (1.0 + v.euclid_norm_sq());
    if q.abs() <= threshold {
        CausalClass::Lightlike
    } else if q > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

/// The Lorentzian cross product: the unique `w` with `<w, z> = det(u, v, z)`
/// for every `z`.
pub fn lorentz_cross(u: MVec3, v: MVec3) -> MVec3 {
    MVec3::new(
        u.x2 * v.x3 - u.x3 * v.x2,
        u.x3 * v.x1 - u.x1 * v.x3,
        -(u.x1 * v.x2 - u.x2 * v.x1),
    )
}

/// Euclidean determinant of the matrix with rows `u`, `v`, `w`.
pub fn det3(u: MVec3, v: MVec3, w: MVec3) -> f64 {
    u.x1 * (v.x2 * w.x3 - v.x3 * w.x2) - u.x2 * (v.x1 * w.x3 - v.x3 * w.x1)
        + u.x3 * (v.x1 * w.x2 - v.x2 * w.x1)
}

/// Matrix of pairwise inner products in the order `(T, N, B)`.
pub fn frame_gram(t: MVec3, n: MVec3, b: MVec3) -> [[f64; 3]; 3] {
    let f = [t, n, b];
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = minkowski_inner(f[i], f[j]);
        }
    }
    g
}

/// Expected Gram matrix of a frame class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GramSignature {
    pub expected: [[f64; 3]; 3],
}

impl GramSignature {
    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        GramSignature {
            expected: [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]],
        }
    }

    /// Largest entrywise deviation of `gram` from the expected matrix.
    pub fn deviation(&self, gram: &[[f64; 3]; 3]) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((gram[i][j] - self.expected[i][j]).abs());
            }
        }
        worst
    }

    pub fn frame_deviation(&self, t: MVec3, n: MVec3, b: MVec3) -> f64 {
        self.deviation(&frame_gram(t, n, b))
    }

    /// Coefficients `(a, b, c)` of `v = a T + b N + c B` for a frame with this
    /// Gram matrix. The expected matrices are their own inverses.
    pub fn coefficients(&self, v: MVec3, t: MVec3, n: MVec3, b: MVec3) -> [f64; 3] {
        let p = [v.dot(t), v.dot(n), v.dot(b)];
        let g = &self.expected;
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = g[i][0] * p[0] + g[i][1] * p[1] + g[i][2] * p[2];
        }
        out
    }

    /// `sum_ij g_ij a_i a_j`, i.e. `<v, v>` written in frame coefficients.
    pub fn quadratic_form(&self, a: [f64; 3]) -> f64 {
        let g = &self.expected;
        let mut q = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                q += g[i][j] * a[i] * a[j];
            }
        }
        q
    }
}

/// A linear map of Minkowski space, stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearMap {
    pub m: [[f64; 3]; 3],
}

impl LinearMap {
    pub const IDENTITY: LinearMap = LinearMap {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Boost mixing `x1` with the time axis.
    pub fn boost_x1(rapidity: f64) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        LinearMap {
            m: [[ch, 0.0, sh], [0.0, 1.0, 0.0], [sh, 0.0, ch]],
        }
    }

    /// Boost mixing `x2` with the time axis.
    pub fn boost_x2(rapidity: f64) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        LinearMap {
            m: [[1.0, 0.0, 0.0], [0.0, ch, sh], [0.0, sh, ch]],
        }
    }

    /// Rotation in the spacelike `x1 x2` plane.
    pub fn rotation_x3(angle: f64) -> Self {
        let (c, s) = (angle.cos(), angle.sin());
        LinearMap {
            m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Reflection `x1 -> -x1`; an isometry with determinant -1.
    pub fn reflect_x1() -> Self {
        LinearMap {
            m: [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn apply(&self, v: MVec3) -> MVec3 {
        let m = &self.m;
        MVec3::new(
            m[0][0] * v.x1 + m[0][1] * v.x2 + m[0][2] * v.x3,
            m[1][0] * v.x1 + m[1][1] * v.x2 + m[1][2] * v.x3,
            m[2][0] * v.x1 + m[2][1] * v.x2 + m[2][2] * v.x3,
        )
    }

    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        LinearMap { m }
    }

    pub fn determinant(&self) -> f64 {
        let r = |i: usize| MVec3::from_array(self.m[i]);
        det3(r(0), r(1), r(2))
    }

    /// Largest deviation of `<Ae_i, Ae_j>` from `<e_i, e_j>`.
    pub fn isometry_defect(&self) -> f64 {
        let cols: Vec<MVec3> = [MVec3::E1, MVec3::E2, MVec3::E3]
            .iter()
            .map(|&e| self.apply(e))
            .collect();
        GramSignature::diag(1.0, 1.0, -1.0).frame_deviation(cols[0], cols[1], cols[2])
    }
}
