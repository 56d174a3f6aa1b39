use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::fit_line;

/// Parameters of `tau(s) = a / (b s + c)^2`, normalized so that
/// `b^2 + c^2 = 1` with the leading nonzero of `(b, c)` positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LightlikeFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// RMS relative error of the fitted torsion.
    pub residual: f64,
}

impl LightlikeFit {
    pub fn tau(&self, s: f64) -> f64 {
        let l = self.b * s + self.c;
        self.a / (l * l)
    }
}

/// Slopes below this are treated as exactly zero, so that constant torsion
/// yields `b = 0`.
const ZERO_SLOPE: f64 = 1e-12;

/// Fits `tau(s) = a/(bs+c)^2` by least squares on `1/sqrt|tau|`, which is
/// affine in `s` for an exact fit.
pub fn fit_lightlike_torsion(tau_samples: &[(f64, f64)]) -> Result<LightlikeFit> {
    if tau_samples.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: tau_samples.len(),
        });
    }
    let sign = tau_samples[0].1.signum();
    for w in tau_samples.windows(2) {
        if w[1].1.signum() != sign || w[1].1 == 0.0 {
            return Err(Error::SignChange {
                from: w[0].0,
                to: w[1].0,
            });
        }
    }
    if tau_samples[0].1 == 0.0 {
        return Err(Error::SignChange {
            from: tau_samples[0].0,
            to: tau_samples[0].0,
        });
    }
    let xs: Vec<f64> = tau_samples.iter().map(|p| p.0).collect();
    let gs: Vec<f64> = tau_samples.iter().map(|p| 1.0 / p.1.abs().sqrt()).collect();
    let (mut m, mut q) = fit_line(&xs, &gs);
    let scale = gs.iter().fold(0.0f64, |a, &g| a.max(g.abs()));
    if m.abs() <= ZERO_SLOPE * scale {
        m = 0.0;
    }
    let lambda = m.hypot(q);
    if lambda == 0.0 {
        return Err(Error::DegenerateCurve {
            reason: "torsion fit collapsed".into(),
            at: xs[0],
        });
    }
    (m, q) = (m / lambda, q / lambda);
    if m < 0.0 || (m == 0.0 && q < 0.0) {
        (m, q) = (-m, -q);
    }
    let (s0, s1) = (xs[0], xs[xs.len() - 1]);
    if m != 0.0 {
        let root = -q / m;
        if root >= s0.min(s1) && root <= s0.max(s1) {
            return Err(Error::PoleInDomain { at: root });
        }
    }
    let mut fit = LightlikeFit {
        a: sign / (lambda * lambda),
        b: m,
        c: q,
        residual: 0.0,
    };
    let sq: f64 = tau_samples
        .iter()
        .map(|&(s, t)| {
            let r = (t - fit.tau(s)) / t;
            r * r
        })
        .sum();
    fit.residual = (sq / tau_samples.len() as f64).sqrt();
    Ok(fit)
}
