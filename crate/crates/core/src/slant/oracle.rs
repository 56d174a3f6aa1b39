use std::cmp::Ordering;

use super::axis::{n_variance, AxisCandidate, Construction};
use crate::error::{Error, Result};
use crate::frenet::FrenetApparatus;
use crate::lorentz::MVec3;
use crate::numeric::{mean, nelder_mead_2d, SimplexOptions};

pub const ORACLE_MIN_SAMPLES: usize = 64;
const GRID_POLAR: usize = 20;
const GRID_AZIMUTH: usize = 40;

/// Covariance matrix of `w(s) = (<N(s),T0>, <N(s),N0>, <N(s),B0>)`, so that
/// the variance of `<N(s), u1 T0 + u2 N0 + u3 B0>` is `u^T C u`.
fn covariance(app: &FrenetApparatus) -> [[f64; 3]; 3] {
    let f0 = app.samples[0].frame();
    let w: Vec<[f64; 3]> = app
        .samples
        .iter()
        .map(|p| [p.n.dot(f0[0]), p.n.dot(f0[1]), p.n.dot(f0[2])])
        .collect();
    let mu: Vec<f64> = (0..3)
        .map(|i| mean(&w.iter().map(|x| x[i]).collect::<Vec<_>>()))
        .collect();
    let mut c = [[0.0; 3]; 3];
    for x in &w {
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] += (x[i] - mu[i]) * (x[j] - mu[j]);
            }
        }
    }
    let n = w.len() as f64;
    c.map(|row| row.map(|v| v / n))
}

fn sphere(p: [f64; 2]) -> [f64; 3] {
    let (st, ct) = p[0].sin_cos();
    let (sp, cp) = p[1].sin_cos();
    [st * cp, st * sp, ct]
}

/// Flips `u` so that its first component of magnitude above `1e-12` is
/// positive.
pub fn canonical_sign(u: [f64; 3]) -> [f64; 3] {
    match u.iter().find(|x| x.abs() > 1e-12) {
        Some(&x) if x < 0.0 => u.map(|v| -v),
        _ => u,
    }
}

fn quad(c: &[[f64; 3]; 3], u: [f64; 3]) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += u[i] * c[i][j] * u[j];
        }
    }
    acc
}

/// Result of the sphere search in coefficient space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleSearch {
    /// Unit coefficients `(u1, u2, u3)` on the initial frame `(T0, N0, B0)`.
    pub coefficients: [f64; 3],
    /// The minimized objective `u^T C u`.
    pub objective: f64,
}

/// Minimizes the variance of `<N(s), U>` over unit coefficient vectors by
/// Nelder-Mead from every node of a 20 x 40 polar grid. The best start wins,
/// ties going to the lexicographically smallest coefficients.
pub fn search_axis(app: &FrenetApparatus) -> Result<OracleSearch> {
    if app.len() < ORACLE_MIN_SAMPLES {
        return Err(Error::TooFewPoints {
            needed: ORACLE_MIN_SAMPLES,
            got: app.len(),
        });
    }
    let c = covariance(app);
    let f = |p: [f64; 2]| quad(&c, sphere(p));
    let opts = SimplexOptions {
        initial_step: std::f64::consts::PI / GRID_AZIMUTH as f64,
        ..SimplexOptions::default()
    };
    let mut best: Option<OracleSearch> = None;
    for i in 0..GRID_POLAR {
        let theta = (i as f64 + 0.5) * std::f64::consts::PI / GRID_POLAR as f64;
        for j in 0..GRID_AZIMUTH {
            let phi = j as f64 * std::f64::consts::TAU / GRID_AZIMUTH as f64;
            let (p, v) = nelder_mead_2d(f, [theta, phi], opts);
            let cand = OracleSearch {
                coefficients: canonical_sign(sphere(p)),
                objective: v.max(0.0),
            };
            best = Some(match best {
                None => cand,
                Some(b) => match cand.objective.total_cmp(&b.objective) {
                    Ordering::Less => cand,
                    Ordering::Equal if lex_less(cand.coefficients, b.coefficients) => cand,
                    _ => b,
                },
            });
        }
    }
    Ok(best.expect("grid is nonempty"))
}

fn lex_less(a: [f64; 3], b: [f64; 3]) -> bool {
    for k in 0..3 {
        match a[k].total_cmp(&b[k]) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    false
}

/// The direction whose inner product with the principal normal varies
/// least, found by direct search. Its `n_variance` is recomputed from the
/// samples rather than taken from the optimizer.
pub fn brute_force_axis(app: &FrenetApparatus) -> Result<AxisCandidate> {
    let found = search_axis(app)?;
    let [t0, n0, b0] = app.samples[0].frame();
    let [u1, u2, u3] = found.coefficients;
    let u: MVec3 = t0 * u1 + n0 * u2 + b0 * u3;
    let dots: Vec<f64> = app.samples.iter().map(|p| p.n.dot(u)).collect();
    Ok(AxisCandidate {
        u,
        c_value: mean(&dots),
        construction: Construction::BruteForce,
        drift: 0.0,
        n_variance: n_variance(app, u, 0..app.len()),
    })
}
