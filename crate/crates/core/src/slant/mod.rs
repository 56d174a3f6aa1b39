//! Slant helix detection: characterization functions, axis reconstruction,
//! the lightlike torsion fit and a brute-force axis search used as an
//! independent check.

mod axis;
mod lightlike;
mod oracle;
mod report;
mod sigma;

use std::ops::Range;

use serde::Serialize;

pub use axis::{
    degenerate_axis, frame_coefficients, frame_expansion, lightlike_axis, n_variance,
    null_normal_axis, reconstruct_axis, reconstruct_axis_on, AxisCandidate, Construction,
};
pub use lightlike::{fit_lightlike_torsion, LightlikeFit};
pub use oracle::{brute_force_axis, canonical_sign, search_axis, OracleSearch, ORACLE_MIN_SAMPLES};
pub use report::{
    json_string, to_json_string, write_json, write_n_dot_u_csv, write_profiles_csv, write_sigma_csv,
};
pub use sigma::{
    detect_constant, ratio_slope, sigma_profile, sigma_value, Branch, Constancy, SigmaProfile,
    BRANCH_EPS, MIN_CONSTANCY_POINTS,
};

use crate::error::{Error, Result};
use crate::frenet::{CurveClass, FrenetApparatus, Source};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const SAMPLED_TOL: f64 = 1e-4;

/// Default constancy tolerance for an apparatus of the given origin.
pub fn default_tol(source: Source) -> f64 {
    match source {
        Source::Sampled => SAMPLED_TOL,
        _ => DEFAULT_TOL,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Slant,
    NotSlant,
    /// The characterization function is constant on some of the intervals
    /// between zeros of `tau^2 - kappa^2`, but no single axis serves them all.
    SlantOnSubintervals,
    /// `tau = +-kappa` throughout, so `T +- B` is constant.
    DegenerateAlwaysSlant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntervalVerdict {
    Slant,
    NotSlant,
    /// Too few samples to test.
    Indeterminate,
}

/// A maximal run of samples on which one branch is defined.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalReport {
    pub from: f64,
    pub to: f64,
    pub samples: Range<usize>,
    pub branch: Option<Branch>,
    pub verdict: IntervalVerdict,
    pub sigma: Option<f64>,
    pub stdev: Option<f64>,
}

/// Mean and spread of one characterization function over its valid points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaSummary {
    pub branch: Branch,
    pub constant: Option<f64>,
    pub stdev: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SlantReport {
    pub class: CurveClass,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub profiles: Vec<SigmaProfile>,
    pub sigma: Vec<SigmaSummary>,
    pub axis: Option<AxisCandidate>,
    pub intervals: Vec<IntervalReport>,
    pub lightlike_fit: Option<LightlikeFit>,
    /// Brute-force search result; absent below [`ORACLE_MIN_SAMPLES`].
    pub oracle: Option<AxisCandidate>,
}

impl SlantReport {
    /// Slant on the whole domain.
    pub fn is_slant(&self) -> bool {
        matches!(self.verdict, Verdict::Slant | Verdict::DegenerateAlwaysSlant)
    }

    /// Whether the oracle's verdict (variance at most `tol^2`) matches.
    pub fn agrees(&self) -> Option<bool> {
        self.oracle
            .as_ref()
            .map(|o| self.is_slant() == (o.n_variance <= self.tolerance * self.tolerance))
    }
}

fn summarize(p: &SigmaProfile) -> SigmaSummary {
    match detect_constant(&p.points, &p.valid, f64::INFINITY) {
        Ok(c) => SigmaSummary {
            branch: p.branch,
            constant: Some(c.estimate),
            stdev: Some(c.stdev),
        },
        Err(_) => SigmaSummary {
            branch: p.branch,
            constant: None,
            stdev: None,
        },
    }
}

fn whole(app: &FrenetApparatus, branch: Option<Branch>, verdict: IntervalVerdict) -> IntervalReport {
    IntervalReport {
        from: app.samples[0].s,
        to: app.samples[app.len() - 1].s,
        samples: 0..app.len(),
        branch,
        verdict,
        sigma: None,
        stdev: None,
    }
}

/// Maximal runs of consecutive samples sharing the same defined branch.
fn branch_runs(app: &FrenetApparatus) -> Vec<(Branch, Range<usize>)> {
    let pick = |k: f64, t: f64| match app.class {
        CurveClass::SpacelikeTimelikeN => Some(Branch::TauPlusKappa),
        _ if Branch::TauMinusKappa.is_defined(k, t) => Some(Branch::TauMinusKappa),
        _ if Branch::KappaMinusTau.is_defined(k, t) => Some(Branch::KappaMinusTau),
        _ => None,
    };
    let mut runs: Vec<(Branch, Range<usize>)> = Vec::new();
    for (i, p) in app.samples.iter().enumerate() {
        let Some(b) = pick(p.kappa, p.tau) else { continue };
        match runs.last_mut() {
            Some((last, r)) if *last == b && r.end == i => r.end = i + 1,
            _ => runs.push((b, i..i + 1)),
        }
    }
    runs
}

/// Decides whether the curve is a slant helix and reconstructs its axis.
pub fn analyze(app: &FrenetApparatus, tol: f64) -> Result<SlantReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let profiles = sigma_profile(app);
    let sigma = profiles.iter().map(summarize).collect();
    let oracle = if app.len() >= ORACLE_MIN_SAMPLES {
        Some(brute_force_axis(app)?)
    } else {
        None
    };
    let mut report = SlantReport {
        class: app.class,
        verdict: Verdict::NotSlant,
        tolerance: tol,
        profiles,
        sigma,
        axis: None,
        intervals: Vec::new(),
        lightlike_fit: None,
        oracle,
    };
    match app.class {
        CurveClass::SpacelikeNullN => {
            report.verdict = Verdict::Slant;
            report.axis = Some(null_normal_axis(app)?);
            report.intervals.push(whole(app, None, IntervalVerdict::Slant));
        }
        CurveClass::Lightlike => {
            let taus: Vec<(f64, f64)> = app.samples.iter().map(|p| (p.s, p.tau)).collect();
            match fit_lightlike_torsion(&taus) {
                Ok(fit) => {
                    let ok = fit.residual <= tol;
                    report.lightlike_fit = Some(fit);
                    if ok {
                        report.verdict = Verdict::Slant;
                        report.axis = Some(lightlike_axis(app, &fit)?);
                    }
                }
                Err(Error::SignChange { .. } | Error::PoleInDomain { .. }) => {}
                Err(e) => return Err(e),
            }
            let v = if report.verdict == Verdict::Slant {
                IntervalVerdict::Slant
            } else {
                IntervalVerdict::NotSlant
            };
            report.intervals.push(whole(app, None, v));
        }
        _ => analyze_non_null(app, tol, &mut report)?,
    }
    Ok(report)
}

fn analyze_non_null(app: &FrenetApparatus, tol: f64, report: &mut SlantReport) -> Result<()> {
    if app.class != CurveClass::SpacelikeTimelikeN {
        let max_rel = app
            .samples
            .iter()
            .map(|p| ((p.tau * p.tau - p.kappa * p.kappa) / (p.kappa * p.kappa)).abs())
            .fold(0.0, f64::max);
        if max_rel <= tol {
            report.verdict = Verdict::DegenerateAlwaysSlant;
            report.axis = Some(degenerate_axis(app)?);
            report.intervals.push(whole(app, None, IntervalVerdict::Slant));
            return Ok(());
        }
    }

    for (branch, range) in branch_runs(app) {
        let profile = report
            .profiles
            .iter()
            .find(|p| p.branch == branch)
            .expect("profile exists for every defined branch");
        let mut iv = IntervalReport {
            from: app.samples[range.start].s,
            to: app.samples[range.end - 1].s,
            samples: range.clone(),
            branch: Some(branch),
            verdict: IntervalVerdict::Indeterminate,
            sigma: None,
            stdev: None,
        };
        if range.len() >= MIN_CONSTANCY_POINTS {
            let c = detect_constant(&profile.points[range.clone()], &profile.valid[range], tol)?;
            iv.sigma = Some(c.estimate);
            iv.stdev = Some(c.stdev);
            iv.verdict = if c.is_constant {
                IntervalVerdict::Slant
            } else {
                IntervalVerdict::NotSlant
            };
        }
        report.intervals.push(iv);
    }

    let Some(first) = report
        .intervals
        .iter()
        .find(|iv| iv.verdict == IntervalVerdict::Slant)
        .cloned()
    else {
        report.verdict = Verdict::NotSlant;
        return Ok(());
    };
    let branch = first.branch.expect("non-null intervals carry a branch");
    let mut axis = reconstruct_axis_on(app, first.samples.clone(), first.sigma.unwrap_or(0.0), branch)?;
    let covered: usize = report.intervals.iter().map(|iv| iv.samples.len()).sum();
    let all_slant = covered == app.len()
        && report
            .intervals
            .iter()
            .all(|iv| iv.verdict == IntervalVerdict::Slant);
    if all_slant {
        let global = n_variance(app, axis.u, 0..app.len());
        if global <= tol * tol * axis.u.euclid_norm_sq() {
            axis.n_variance = global;
            report.verdict = Verdict::Slant;
            report.axis = Some(axis);
        } else if report.intervals.len() > 1 {
            report.verdict = Verdict::SlantOnSubintervals;
            report.axis = Some(axis);
        } else {
            report.verdict = Verdict::NotSlant;
        }
    } else {
        report.verdict = Verdict::SlantOnSubintervals;
        report.axis = Some(axis);
    }
    Ok(())
}
