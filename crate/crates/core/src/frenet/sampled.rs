use std::io::Read;

use super::classify::classify_points;
use super::{null_partner, CurveClass, FrameSample, FrenetApparatus, Source};
use crate::error::{Error, Result};
use crate::lorentz::{det3, MVec3};
use crate::numeric::{derivative_uniform, gauss_legendre3, lagrange6, linspace};

/// Null tolerance for curves known only through samples. Differentiating
/// data costs several digits, so it is looser than the analytic one.
pub const SAMPLED_NULL_TOL: f64 = 1e-6;

/// A curve given by positions on a uniform parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    pub t: Vec<f64>,
    pub points: Vec<MVec3>,
}

impl SampledCurve {
    pub fn new(t: Vec<f64>, points: Vec<MVec3>) -> Result<Self> {
        if t.len() != points.len() {
            return Err(Error::InvalidInput("parameter and position counts differ".into()));
        }
        if t.len() < FrenetApparatus::MIN_SAMPLES {
            return Err(Error::TooFewPoints {
                needed: FrenetApparatus::MIN_SAMPLES,
                got: t.len(),
            });
        }
        let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::InvalidInput("parameter must increase".into()));
        }
        for (i, w) in t.windows(2).enumerate() {
            if ((w[1] - w[0]) - h).abs() > 1e-6 * h {
                return Err(Error::InvalidInput(format!(
                    "parameter grid is not uniform at row {}",
                    i + 2
                )));
            }
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite position at row {}", i + 1)));
        }
        Ok(SampledCurve { t, points })
    }

    fn step(&self) -> f64 {
        (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64
    }
}

/// Reads CSV with header `t,x,y,z` (or `s,x,y,z`, as written by synthesis).
pub fn read_sampled_csv<R: Read>(input: R) -> Result<SampledCurve> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if !(header == ["t", "x", "y", "z"] || header == ["s", "x", "y", "z"]) {
        return Err(Error::InvalidInput(format!(
            "expected header `t,x,y,z` or `s,x,y,z`, found `{}`",
            header.join(",")
        )));
    }
    let mut t = Vec::new();
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut v = [0.0; 4];
        for (k, slot) in v.iter_mut().enumerate() {
            let field = rec.get(k).unwrap_or("");
            *slot = field.parse().map_err(|_| {
                Error::InvalidInput(format!("row {}: `{field}` is not a number", i + 2))
            })?;
        }
        t.push(v[0]);
        points.push(MVec3::new(v[1], v[2], v[3]));
    }
    SampledCurve::new(t, points)
}

/// Resampled points dropped at each end, where nested one-sided differences
/// lose several digits in the torsion derivative.
pub const EDGE_TRIM: usize = 8;

/// Frenet apparatus of a sampled curve on `samples` uniform arc-length
/// points. Positions are resampled by six-point interpolation; every
/// derivative is a fourth-order finite difference. The grid covers the
/// curve minus [`EDGE_TRIM`] grid steps at each end; `s` is arc length from
/// the first input point.
pub fn sampled_apparatus(curve: &SampledCurve, samples: usize) -> Result<FrenetApparatus> {
    let full = samples + 2 * EDGE_TRIM;
    let h = curve.step();
    let t0 = curve.t[0];
    let d1 = derivative_uniform(&curve.points, h)?;
    let d2 = derivative_uniform(&d1, h)?;
    let class = classify_points(
        curve.t.iter().zip(d1.iter().zip(&d2)).map(|(&t, (&a, &b))| (t, a, b)),
        SAMPLED_NULL_TOL,
    )?;

    let speed: Vec<f64> = match class {
        CurveClass::Lightlike => d2.iter().map(|v| v.norm_sq().abs().powf(0.25)).collect(),
        _ => d1.iter().map(|v| v.norm()).collect(),
    };
    if let Some(i) = speed.iter().position(|&v| !(v > 1e-10)) {
        return Err(Error::DegenerateCurve {
            reason: "arc-length integrand vanishes".into(),
            at: curve.t[i],
        });
    }
    let v_at = |x: f64| lagrange6(&speed, t0, h, x);
    let mut cum = vec![0.0];
    for w in curve.t.windows(2) {
        let last = cum[cum.len() - 1];
        cum.push(last + gauss_legendre3(w[0], w[1], v_at));
    }
    let total = cum[cum.len() - 1];

    let mut pos = Vec::with_capacity(full);
    let s_grid = linspace(0.0, total, full);
    for &s in &s_grid {
        let i = cum.partition_point(|&x| x <= s).saturating_sub(1).min(cum.len() - 2);
        let (lo, hi) = (curve.t[i], curve.t[i + 1]);
        let mut t = lo + (s - cum[i]) / (cum[i + 1] - cum[i]) * (hi - lo);
        for _ in 0..50 {
            let f = cum[i] + gauss_legendre3(lo, t, v_at) - s;
            let next = (t - f / v_at(t)).clamp(lo, hi);
            let done = (next - t).abs() <= 1e-15 * (1.0 + t.abs());
            t = next;
            if done {
                break;
            }
        }
        pos.push(lagrange6(&curve.points, t0, h, t));
    }

    let hs = total / (full - 1) as f64;
    let a1 = derivative_uniform(&pos, hs)?;
    let a2 = derivative_uniform(&a1, hs)?;
    let a3 = derivative_uniform(&a2, hs)?;
    let mut kappa = Vec::with_capacity(full);
    let mut tau = Vec::with_capacity(full);
    let mut frames = Vec::with_capacity(full);
    for k in 0..full {
        let (t, n, b, kap, ta) = match class.signs() {
            Some((eps_t, eps_n)) => {
                let t = a1[k] * (1.0 / a1[k].norm());
                let nv = a2[k] - t * (eps_t * a2[k].dot(t));
                let kap = nv.norm();
                let n = nv * (1.0 / kap);
                let b = t.cross(n) * (-eps_t);
                let ta = eps_n * det3(t, nv, a3[k]) / (kap * kap);
                (t, n, b, kap, ta)
            }
            None if class == CurveClass::SpacelikeNullN => {
                let t = a1[k] * (1.0 / a1[k].norm());
                let n = a2[k] - t * a2[k].dot(t);
                let b = null_partner(n, t);
                (t, n, b, 1.0, a3[k].dot(b))
            }
            None => {
                let t = a1[k];
                let n = a2[k];
                let b = null_partner(t, n * (1.0 / n.norm()));
                (t, n, b, 1.0, a3[k].dot(b))
            }
        };
        frames.push((t, n, b));
        kappa.push(kap);
        tau.push(ta);
    }
    let dkappa = if class.is_null_frame() {
        vec![0.0; full]
    } else {
        derivative_uniform(&kappa, hs)?
    };
    let dtau = derivative_uniform(&tau, hs)?;
    let out = (EDGE_TRIM..EDGE_TRIM + samples)
        .map(|k| FrameSample {
            s: s_grid[k],
            t: frames[k].0,
            n: frames[k].1,
            b: frames[k].2,
            kappa: kappa[k],
            tau: tau[k],
            dkappa: dkappa[k],
            dtau: dtau[k],
        })
        .collect();
    let app = FrenetApparatus::new(class, out, Source::Sampled)?;
    app.check_closure()?;
    app.check_nondegenerate()?;
    Ok(app)
}
