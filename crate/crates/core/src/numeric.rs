//! Small numerical kernels on uniform grids: differentiation, interpolation,
//! quadrature, statistics and a two-dimensional simplex minimizer.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Values that can be combined linearly: `f64` and `MVec3`.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Linear for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

pub const FD_MIN_POINTS: usize = 5;

fn combo<T: Linear>(f: &[T], w: [f64; 5]) -> T {
    let mut acc = f[0] * w[0];
    for k in 1..5 {
        acc = acc + f[k] * w[k];
    }
    acc
}

/// Fourth-order first derivative of samples on a uniform grid of spacing `h`.
/// Interior points use the centered five-point stencil, the two points at
/// each end one-sided stencils of the same order.
pub fn derivative_uniform<T: Linear>(f: &[T], h: f64) -> Result<Vec<T>> {
    let n = f.len();
    if n < FD_MIN_POINTS {
        return Err(Error::TooFewPoints {
            needed: FD_MIN_POINTS,
            got: n,
        });
    }
    let inv = 1.0 / (12.0 * h);
    const EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
    const EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
    const MID: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
    let mirror = |w: [f64; 5]| [-w[4], -w[3], -w[2], -w[1], -w[0]];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = match i {
            0 => combo(&f[0..5], EDGE0),
            1 => combo(&f[0..5], EDGE1),
            i if i == n - 2 => combo(&f[n - 5..n], mirror(EDGE1)),
            i if i == n - 1 => combo(&f[n - 5..n], mirror(EDGE0)),
            i => combo(&f[i - 2..i + 3], MID),
        };
        out.push(d * inv);
    }
    Ok(out)
}

/// Lagrange interpolation through six consecutive nodes of a uniform grid
/// starting at `x0` with spacing `h`. The stencil is centred on `x` and
/// shifted inwards near the ends.
pub fn lagrange6<T: Linear>(values: &[T], x0: f64, h: f64, x: f64) -> T {
    let n = values.len();
    assert!(n >= 6, "six-point interpolation needs six nodes");
    let u = (x - x0) / h;
    let start = (u.floor() as i64 - 2).clamp(0, n as i64 - 6) as usize;
    let mut acc: Option<T> = None;
    for j in 0..6 {
        let mut w = 1.0;
        let xj = (start + j) as f64;
        for m in 0..6 {
            if m != j {
                let xm = (start + m) as f64;
                w *= (u - xm) / (xj - xm);
            }
        }
        let term = values[start + j] * w;
        acc = Some(match acc {
            None => term,
            Some(a) => a + term,
        });
    }
    acc.expect("six terms")
}

/// Three-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre3(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let off = half * (0.6f64).sqrt();
    half * (5.0 * f(mid - off) + 8.0 * f(mid) + 5.0 * f(mid + off)) / 9.0
}

/// Simpson's rule on a single interval.
pub fn simpson(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width * (fa + 4.0 * fm + fb) / 6.0
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance, computed around the mean.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

pub fn stdev(xs: &[f64]) -> f64 {
    variance(xs).sqrt()
}

/// Least-squares line `y = slope * x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Uniform grid of `n` points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * h })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Stop once the spread of objective values across the simplex falls
    /// below this fraction of their magnitude.
    pub rel_tol: f64,
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iter: 200,
            rel_tol: 1e-14,
            initial_step: 0.1,
        }
    }
}

/// Nelder-Mead minimization in the plane.
pub fn nelder_mead_2d(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    opts: SimplexOptions,
) -> ([f64; 2], f64) {
    let mut pts = [
        start,
        [start[0] + opts.initial_step, start[1]],
        [start[0], start[1] + opts.initial_step],
    ];
    let mut vals = pts.map(&f);
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..opts.max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);
        let spread = vals[2] - vals[0];
        if spread <= opts.rel_tol * (vals[0].abs() + vals[2].abs()) || spread == 0.0 {
            break;
        }
        let centroid = lerp(pts[0], pts[1], 0.5);
        let reflected = lerp(centroid, pts[2], -1.0);
        let fr = f(reflected);
        if fr < vals[0] {
            let expanded = lerp(centroid, pts[2], -2.0);
            let fe = f(expanded);
            if fe < fr {
                pts[2] = expanded;
                vals[2] = fe;
            } else {
                pts[2] = reflected;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = reflected;
            vals[2] = fr;
        } else {
            let (target, ft) = if fr < vals[2] {
                (lerp(centroid, reflected, 0.5), None)
            } else {
                (lerp(centroid, pts[2], 0.5), Some(vals[2]))
            };
            let fc = f(target);
            let limit = ft.unwrap_or(fr);
            if fc < limit {
                pts[2] = target;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    pts[k] = lerp(pts[0], pts[k], 0.5);
                    vals[k] = f(pts[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
    (pts[best], vals[best])
}
