use std::ops::Range;

use serde::Serialize;

use super::lightlike::LightlikeFit;
use super::sigma::Branch;
use crate::error::{Error, Result};
use crate::frenet::{CurveClass, FrenetApparatus};
use crate::lorentz::MVec3;
use crate::numeric::variance;

/// How an axis was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Construction {
    /// Coefficients from curvature and torsion on a defined branch.
    ClosedForm,
    /// `T +- B` for curves with `tau = +-kappa`.
    DegenerateTPlusB,
    /// `exp(-int tau) N` for spacelike curves with null normal.
    NullNormal,
    /// From the fitted lightlike torsion parameters.
    LightlikeFit,
    /// From the variance-minimizing search.
    BruteForce,
}

/// A candidate fixed direction `U` with constant `<N, U>`, and how well it
/// does.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisCandidate {
    pub u: MVec3,
    /// The value of `<N, U>`.
    pub c_value: f64,
    pub construction: Construction,
    /// `max |U(s) - U(s0)|` (Euclidean) when `U(s)` is rebuilt at every
    /// sample from the local frame.
    pub drift: f64,
    /// Variance of `<N(s), U>` with `U` held fixed.
    pub n_variance: f64,
}

/// Signs applied to `(tau/D, c, kappa/D)` to form the axis coefficients on
/// `branch`, or `None` if the branch does not apply to the class.
fn branch_signs(class: CurveClass, branch: Branch) -> Option<[f64; 3]> {
    match (class, branch) {
        (CurveClass::Timelike, Branch::TauMinusKappa) => Some([1.0, 1.0, 1.0]),
        (CurveClass::Timelike, Branch::KappaMinusTau) => Some([-1.0, 1.0, -1.0]),
        (CurveClass::SpacelikeSpacelikeN, Branch::TauMinusKappa) => Some([-1.0, 1.0, 1.0]),
        (CurveClass::SpacelikeSpacelikeN, Branch::KappaMinusTau) => Some([1.0, 1.0, -1.0]),
        (CurveClass::SpacelikeTimelikeN, Branch::TauPlusKappa) => Some([1.0, -1.0, -1.0]),
        _ => None,
    }
}

/// Frame coefficients `(a1, a2, a3)` of the axis, `U = a1 T + a2 N + a3 B`,
/// for the non-null classes on a given branch with `<N, U> = c`. `None` where
/// the branch is undefined or does not apply to the class.
pub fn frame_coefficients(class: CurveClass, branch: Branch, c: f64, kappa: f64, tau: f64) -> Option<[f64; 3]> {
    let sg = branch_signs(class, branch)?;
    if !branch.is_defined(kappa, tau) {
        return None;
    }
    let d = branch.discriminant(kappa, tau).sqrt();
    Some([sg[0] * tau / d, sg[1] * c, sg[2] * kappa / d])
}

/// Expands the fixed vector `u` in the frame at every sample.
pub fn frame_expansion(app: &FrenetApparatus, u: MVec3) -> Vec<[f64; 3]> {
    let g = app.class.gram();
    app.samples
        .iter()
        .map(|p| g.coefficients(u, p.t, p.n, p.b))
        .collect()
}

/// Variance of `<N(s), u>` over the samples in `range`.
pub fn n_variance(app: &FrenetApparatus, u: MVec3, range: Range<usize>) -> f64 {
    let xs: Vec<f64> = app.samples[range].iter().map(|p| p.n.dot(u)).collect();
    variance(&xs)
}

/// Builds the candidate from per-sample reconstructions `U(s)`: the first is
/// the axis, the spread is the drift.
fn from_local(app: &FrenetApparatus, range: Range<usize>, local: &[MVec3], c: f64, construction: Construction) -> Result<AxisCandidate> {
    let u = local[0];
    if !(u.euclid_norm() > 0.0) || !u.is_finite() {
        return Err(Error::DegenerateCurve {
            reason: "reconstructed axis vanishes".into(),
            at: app.samples[range.start].s,
        });
    }
    let drift = local
        .iter()
        .map(|v| (*v - u).euclid_norm())
        .fold(0.0, f64::max);
    Ok(AxisCandidate {
        u,
        c_value: c,
        construction,
        drift,
        n_variance: n_variance(app, u, range),
    })
}

/// Axis of a non-null curve from the closed-form coefficients on `branch`,
/// restricted to the samples in `range`.
pub fn reconstruct_axis_on(app: &FrenetApparatus, range: Range<usize>, c: f64, branch: Branch) -> Result<AxisCandidate> {
    if range.is_empty() {
        return Err(Error::InvalidInput("empty sample range".into()));
    }
    if branch_signs(app.class, branch).is_none() {
        return Err(Error::InvalidInput(format!(
            "branch {} does not apply to {} curves",
            branch.name(),
            app.class
        )));
    }
    let mut local = Vec::with_capacity(range.len());
    for k in range.clone() {
        let p = &app.samples[k];
        match frame_coefficients(app.class, branch, c, p.kappa, p.tau) {
            Some([a1, a2, a3]) => local.push(p.t * a1 + p.n * a2 + p.b * a3),
            None => {
                return Err(Error::BranchUndefined {
                    from: app.samples[k.saturating_sub(1).max(range.start)].s,
                    to: p.s,
                })
            }
        }
    }
    from_local(app, range, &local, c, Construction::ClosedForm)
}

/// Axis of a non-null curve whose characterization function on `branch` is
/// the constant `sigma_constant` over the whole domain.
pub fn reconstruct_axis(app: &FrenetApparatus, sigma_constant: f64, branch: Branch) -> Result<AxisCandidate> {
    match app.class {
        CurveClass::SpacelikeNullN => null_normal_axis(app),
        CurveClass::Lightlike => Err(Error::InvalidInput(
            "lightlike axes come from a torsion fit".into(),
        )),
        _ => reconstruct_axis_on(app, 0..app.len(), sigma_constant, branch),
    }
}

/// `U = T + B` or `T - B` for non-null curves with `tau^2 = kappa^2`.
pub fn degenerate_axis(app: &FrenetApparatus) -> Result<AxisCandidate> {
    let flip = match app.class {
        CurveClass::Timelike => 1.0,
        CurveClass::SpacelikeSpacelikeN => -1.0,
        _ => {
            return Err(Error::InvalidInput(format!(
                "no degenerate axis for {} curves",
                app.class
            )))
        }
    };
    let sign = flip * app.samples[0].tau.signum();
    let local: Vec<MVec3> = app.samples.iter().map(|p| p.t + p.b * sign).collect();
    from_local(app, 0..app.len(), &local, 0.0, Construction::DegenerateTPlusB)
}

/// `U = a2 N` with `a2 = exp(-int tau)` for spacelike curves with null
/// normal. The integral uses the end-corrected trapezoid rule, which is
/// fourth order given the torsion slopes.
pub fn null_normal_axis(app: &FrenetApparatus) -> Result<AxisCandidate> {
    if app.class != CurveClass::SpacelikeNullN {
        return Err(Error::InvalidInput(format!("no null-normal axis for {} curves", app.class)));
    }
    let h = app.step();
    let mut integral = 0.0;
    let mut local = Vec::with_capacity(app.len());
    local.push(app.samples[0].n);
    for w in app.samples.windows(2) {
        integral += 0.5 * h * (w[0].tau + w[1].tau) + h * h / 12.0 * (w[0].dtau - w[1].dtau);
        local.push(w[1].n * (-integral).exp());
    }
    from_local(app, 0..app.len(), &local, 0.0, Construction::NullNormal)
}

/// `U = a/(bs+c) T + b N + (bs+c) B` from a lightlike torsion fit.
pub fn lightlike_axis(app: &FrenetApparatus, fit: &LightlikeFit) -> Result<AxisCandidate> {
    if app.class != CurveClass::Lightlike {
        return Err(Error::InvalidInput(format!("no lightlike axis for {} curves", app.class)));
    }
    let local: Vec<MVec3> = app
        .samples
        .iter()
        .map(|p| {
            let l = fit.b * p.s + fit.c;
            p.t * (fit.a / l) + p.n * fit.b + p.b * l
        })
        .collect();
    from_local(app, 0..app.len(), &local, fit.b, Construction::LightlikeFit)
}
