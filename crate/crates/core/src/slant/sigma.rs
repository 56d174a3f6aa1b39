use serde::Serialize;

use crate::error::{Error, Result};
use crate::frenet::{CurveClass, FrenetApparatus};
use crate::numeric::{mean, stdev};

/// Relative margin (against `kappa^2`) by which a branch discriminant must
/// clear zero for the branch to be defined.
pub const BRANCH_EPS: f64 = 1e-9;

/// Which characterization function a profile evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// `kappa^2 / (tau^2 - kappa^2)^(3/2) (tau/kappa)'`
    TauMinusKappa,
    /// `kappa^2 / (kappa^2 - tau^2)^(3/2) (tau/kappa)'`
    KappaMinusTau,
    /// `kappa^2 / (tau^2 + kappa^2)^(3/2) (tau/kappa)'`
    TauPlusKappa,
    /// The Euclidean slant-helix function; numerically the same expression as
    /// `TauPlusKappa`, kept apart as a comparator.
    Euclidean,
}

impl Branch {
    pub fn discriminant(self, kappa: f64, tau: f64) -> f64 {
        match self {
            Branch::TauMinusKappa => tau * tau - kappa * kappa,
            Branch::KappaMinusTau => kappa * kappa - tau * tau,
            Branch::TauPlusKappa | Branch::Euclidean => tau * tau + kappa * kappa,
        }
    }

    pub fn is_defined(self, kappa: f64, tau: f64) -> bool {
        self.discriminant(kappa, tau) > BRANCH_EPS * kappa * kappa
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::TauMinusKappa => "TauMinusKappa",
            Branch::KappaMinusTau => "KappaMinusTau",
            Branch::TauPlusKappa => "TauPlusKappa",
            Branch::Euclidean => "Euclidean",
        }
    }
}

/// `(tau/kappa)'` from the invariants and their slopes.
pub fn ratio_slope(kappa: f64, tau: f64, dkappa: f64, dtau: f64) -> f64 {
    (dtau * kappa - tau * dkappa) / (kappa * kappa)
}

/// The branch's characterization function at one point; `None` where the
/// branch is undefined.
pub fn sigma_value(branch: Branch, kappa: f64, tau: f64, dkappa: f64, dtau: f64) -> Option<f64> {
    if !branch.is_defined(kappa, tau) {
        return None;
    }
    let d = branch.discriminant(kappa, tau);
    Some(kappa * kappa * ratio_slope(kappa, tau, dkappa, dtau) / d.powf(1.5))
}

/// Samples of one characterization function. Invalid points carry `NaN`.
#[derive(Clone, Debug)]
pub struct SigmaProfile {
    pub branch: Branch,
    pub points: Vec<(f64, f64)>,
    pub valid: Vec<bool>,
}

impl SigmaProfile {
    pub fn compute(app: &FrenetApparatus, branch: Branch) -> SigmaProfile {
        let mut points = Vec::with_capacity(app.len());
        let mut valid = Vec::with_capacity(app.len());
        for p in &app.samples {
            let v = sigma_value(branch, p.kappa, p.tau, p.dkappa, p.dtau);
            points.push((p.s, v.unwrap_or(f64::NAN)));
            valid.push(v.is_some());
        }
        SigmaProfile {
            branch,
            points,
            valid,
        }
    }

    pub fn valid_values(&self) -> Vec<f64> {
        self.points
            .iter()
            .zip(&self.valid)
            .filter(|(_, &ok)| ok)
            .map(|(p, _)| p.1)
            .collect()
    }
}

/// The characterization functions that apply to the apparatus's class. The
/// null-frame classes have none.
pub fn sigma_profile(app: &FrenetApparatus) -> Vec<SigmaProfile> {
    let branches: &[Branch] = match app.class {
        CurveClass::Timelike | CurveClass::SpacelikeSpacelikeN => {
            &[Branch::TauMinusKappa, Branch::KappaMinusTau]
        }
        CurveClass::SpacelikeTimelikeN => &[Branch::TauPlusKappa],
        CurveClass::SpacelikeNullN | CurveClass::Lightlike => &[],
    };
    branches
        .iter()
        .map(|&b| SigmaProfile::compute(app, b))
        .collect()
}

/// Outcome of a constancy test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constancy {
    pub is_constant: bool,
    pub estimate: f64,
    pub stdev: f64,
}

pub const MIN_CONSTANCY_POINTS: usize = 8;

/// Constant iff `stdev / (1 + |mean|) <= tol` over the valid points.
pub fn detect_constant(values: &[(f64, f64)], mask: &[bool], tol: f64) -> Result<Constancy> {
    let xs: Vec<f64> = values
        .iter()
        .zip(mask)
        .filter(|(_, &ok)| ok)
        .map(|(p, _)| p.1)
        .collect();
    if xs.len() < MIN_CONSTANCY_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_CONSTANCY_POINTS,
            got: xs.len(),
        });
    }
    let m = mean(&xs);
    let sd = stdev(&xs);
    Ok(Constancy {
        is_constant: sd / (1.0 + m.abs()) <= tol,
        estimate: m,
        stdev: sd,
    })
}
