//! Curves from prescribed curvature and torsion, by integrating the Frenet
//! system of the chosen class.

use std::io::Write;

use crate::error::{Error, Result};
use crate::frenet::{fmt_float, CurveClass, FrameSample, FrenetApparatus, Source};
use crate::lorentz::{frame_gram, MVec3};
use crate::scalar::ScalarFn;
use crate::slant::Branch;

/// Restart with a halved step once the frame Gram matrix drifts this far.
pub const DRIFT_RESTART: f64 = 1e-9;
/// Results drifting more than this are rejected.
pub const DRIFT_REJECT: f64 = 1e-8;
/// Largest admitted Gram error of a caller-provided initial frame.
pub const INITIAL_FRAME_TOL: f64 = 1e-10;

/// Canonical initial frame `(T, N, B)` for each class.
pub fn initial_frame(class: CurveClass) -> [MVec3; 3] {
    let e = |a, b, c| MVec3::new(a, b, c);
    match class {
        CurveClass::Timelike => [e(0.0, 0.0, 1.0), e(1.0, 0.0, 0.0), e(0.0, 1.0, 0.0)],
        CurveClass::SpacelikeSpacelikeN => [e(1.0, 0.0, 0.0), e(0.0, 1.0, 0.0), e(0.0, 0.0, 1.0)],
        CurveClass::SpacelikeTimelikeN => [e(1.0, 0.0, 0.0), e(0.0, 0.0, 1.0), e(0.0, 1.0, 0.0)],
        CurveClass::SpacelikeNullN => [e(1.0, 0.0, 0.0), e(0.0, 1.0, 1.0), e(0.0, 0.5, -0.5)],
        CurveClass::Lightlike => [e(0.0, 1.0, 1.0), e(1.0, 0.0, 0.0), e(0.0, 0.5, -0.5)],
    }
}

#[derive(Clone, Debug)]
pub struct SynthRequest {
    pub class: CurveClass,
    /// Ignored for the null-frame classes, whose systems have unit entries.
    pub kappa: ScalarFn,
    pub tau: ScalarFn,
    pub s_range: (f64, f64),
    /// Output spacing; the range is divided into `round(length/step)` steps.
    pub step: f64,
    pub initial_frame: Option<[MVec3; 3]>,
    pub initial_point: MVec3,
}

impl SynthRequest {
    pub fn new(class: CurveClass, kappa: ScalarFn, tau: ScalarFn, s_range: (f64, f64), step: f64) -> Self {
        SynthRequest {
            class,
            kappa,
            tau,
            s_range,
            step,
            initial_frame: None,
            initial_point: MVec3::ZERO,
        }
    }

    fn length(&self) -> f64 {
        self.s_range.1 - self.s_range.0
    }

    fn intervals(&self) -> usize {
        (self.length() / self.step).round().max(1.0) as usize
    }

    fn validate(&self) -> Result<[MVec3; 3]> {
        let len = self.length();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::InvalidInput(format!(
                "empty range [{}, {}]",
                self.s_range.0, self.s_range.1
            )));
        }
        if !(self.step > 0.0) || self.step > len / 64.0 {
            return Err(Error::InvalidInput(format!(
                "step must lie in (0, {}], got {}",
                len / 64.0,
                self.step
            )));
        }
        let frame = self.initial_frame.unwrap_or_else(|| initial_frame(self.class));
        let dev = self.class.gram().frame_deviation(frame[0], frame[1], frame[2]);
        if !(dev <= INITIAL_FRAME_TOL) {
            return Err(Error::InvalidInput(format!(
                "initial frame violates the {} Gram signature by {dev:e}",
                self.class
            )));
        }
        Ok(frame)
    }

    fn coefficients(&self, s: f64) -> Result<[[f64; 3]; 3]> {
        let kappa = if self.class.is_null_frame() {
            1.0
        } else {
            self.kappa.eval(s)?
        };
        Ok(self.class.frenet_matrix(kappa, self.tau.eval(s)?))
    }
}

/// Position followed by the frame.
type State = [MVec3; 4];

fn rhs(m: &[[f64; 3]; 3], y: &State) -> State {
    let f = [y[1], y[2], y[3]];
    let row = |r: [f64; 3]| f[0] * r[0] + f[1] * r[1] + f[2] * r[2];
    [y[1], row(m[0]), row(m[1]), row(m[2])]
}

fn axpy(y: &State, h: f64, k: &State) -> State {
    [y[0] + k[0] * h, y[1] + k[1] * h, y[2] + k[2] * h, y[3] + k[3] * h]
}

/// Positions and frames at the output grid, with the largest Gram drift seen.
#[derive(Clone, Debug)]
pub struct Propagation {
    pub s: Vec<f64>,
    pub states: Vec<State>,
    pub max_gram_drift: f64,
}

/// Classical fourth-order Runge-Kutta with `substeps` steps per output
/// interval and no step control. Drift is measured against the initial
/// frame's Gram matrix at every output point.
pub fn propagate(req: &SynthRequest, substeps: usize) -> Result<Propagation> {
    let frame = req.validate()?;
    let n = req.intervals();
    let (a, b) = req.s_range;
    let h_out = (b - a) / n as f64;
    let h = h_out / substeps.max(1) as f64;
    let g0 = frame_gram(frame[0], frame[1], frame[2]);
    let mut y: State = [req.initial_point, frame[0], frame[1], frame[2]];
    let mut s_out = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    s_out.push(a);
    states.push(y);
    let mut drift = 0.0f64;
    let mut m0 = req.coefficients(a)?;
    for i in 0..n {
        let base = a + i as f64 * h_out;
        for j in 0..substeps.max(1) {
            let s = base + j as f64 * h;
            let m_half = req.coefficients(s + 0.5 * h)?;
            let m1 = req.coefficients(s + h)?;
            let k1 = rhs(&m0, &y);
            let k2 = rhs(&m_half, &axpy(&y, 0.5 * h, &k1));
            let k3 = rhs(&m_half, &axpy(&y, 0.5 * h, &k2));
            let k4 = rhs(&m1, &axpy(&y, h, &k3));
            for c in 0..4 {
                y[c] = y[c] + (k1[c] + k2[c] * 2.0 + k3[c] * 2.0 + k4[c]) * (h / 6.0);
            }
            m0 = m1;
        }
        let g = frame_gram(y[1], y[2], y[3]);
        for r in 0..3 {
            for c in 0..3 {
                drift = drift.max((g[r][c] - g0[r][c]).abs());
            }
        }
        s_out.push(if i + 1 == n { b } else { a + (i + 1) as f64 * h_out });
        states.push(y);
    }
    Ok(Propagation {
        s: s_out,
        states,
        max_gram_drift: drift,
    })
}

#[derive(Clone, Debug)]
pub struct SynthResult {
    /// `(s, position)` on the output grid.
    pub points: Vec<(f64, MVec3)>,
    pub apparatus: FrenetApparatus,
    pub max_gram_drift: f64,
    /// Integration steps per output interval after halving.
    pub substeps: usize,
}

impl SynthResult {
    /// CSV with header `s,x,y,z`.
    pub fn write_curve_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "s,x,y,z")?;
        for (s, p) in &self.points {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_float(*s),
                fmt_float(p.x1),
                fmt_float(p.x2),
                fmt_float(p.x3)
            )?;
        }
        Ok(())
    }
}

/// Integrates the Frenet system of `req.class`, halving the step until the
/// Gram drift stays within [`DRIFT_RESTART`].
pub fn synth_curve(req: &SynthRequest) -> Result<SynthResult> {
    let h_out = req.length() / req.intervals() as f64;
    let mut substeps = 1usize;
    let prop = loop {
        let prop = propagate(req, substeps)?;
        if prop.max_gram_drift <= DRIFT_RESTART {
            break prop;
        }
        substeps *= 2;
        let h = h_out / substeps as f64;
        if h < 1e-12 * req.length() {
            return Err(Error::StepUnderflow { step: h });
        }
    };
    if !(prop.max_gram_drift < DRIFT_REJECT) {
        return Err(Error::FrameClosure {
            deviation: prop.max_gram_drift,
            at: req.s_range.1,
        });
    }
    let mut samples = Vec::with_capacity(prop.s.len());
    for (&s, y) in prop.s.iter().zip(&prop.states) {
        let (kappa, dkappa) = if req.class.is_null_frame() {
            (1.0, 0.0)
        } else {
            (req.kappa.eval(s)?, req.kappa.deriv(s)?)
        };
        samples.push(FrameSample {
            s,
            t: y[1],
            n: y[2],
            b: y[3],
            kappa,
            tau: req.tau.eval(s)?,
            dkappa,
            dtau: req.tau.deriv(s)?,
        });
    }
    let apparatus = FrenetApparatus::new(req.class, samples, Source::Synthesized)?;
    Ok(SynthResult {
        points: prop.s.iter().zip(&prop.states).map(|(&s, y)| (s, y[0])).collect(),
        apparatus,
        max_gram_drift: prop.max_gram_drift,
        substeps,
    })
}

pub const SLANT_TORSION_INTERVALS: usize = 4096;

/// Torsion whose characterization function on `branch` is the constant
/// `sigma_const`, found by integrating `(tau/kappa)' = sigma D^(3/2) / kappa^2`
/// (`D` the branch discriminant) from `tau(anchor.0) = anchor.1` with RK4 on
/// a uniform grid of `intervals` steps over `s_range`. The anchor may lie
/// anywhere in the range.
pub fn generate_slant_torsion(
    sigma_const: f64,
    kappa: &ScalarFn,
    anchor: (f64, f64),
    s_range: (f64, f64),
    branch: Branch,
    intervals: usize,
) -> Result<ScalarFn> {
    if branch == Branch::Euclidean {
        return Err(Error::InvalidInput(
            "the Euclidean comparator does not generate Minkowski torsion".into(),
        ));
    }
    let (a, b) = s_range;
    if !(b > a) || intervals < 8 {
        return Err(Error::InvalidInput("empty range or too few intervals".into()));
    }
    if anchor.0 < a || anchor.0 > b {
        return Err(Error::InvalidInput(format!("anchor {} lies outside [{a}, {b}]", anchor.0)));
    }
    let rate = |s: f64, rho: f64| -> Result<f64> {
        let k = kappa.eval(s)?;
        if !rho.is_finite() {
            return Err(Error::Domain {
                what: "generated torsion diverges".into(),
                at: s,
            });
        }
        let d = branch.discriminant(k, k * rho);
        if !(d > 1e-9 * k * k) {
            return Err(Error::BranchExit { reached: s });
        }
        Ok(sigma_const * d.powf(1.5) / (k * k))
    };
    let rk4 = |s: f64, rho: f64, h: f64| -> Result<f64> {
        let k1 = rate(s, rho)?;
        let k2 = rate(s + 0.5 * h, rho + 0.5 * h * k1)?;
        let k3 = rate(s + 0.5 * h, rho + 0.5 * h * k2)?;
        let k4 = rate(s + h, rho + h * k3)?;
        Ok(rho + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    };
    let h = (b - a) / intervals as f64;
    let mut rho = anchor.1 / kappa.eval(anchor.0)?;
    rate(anchor.0, rho)?;
    let back = ((anchor.0 - a) / h).ceil() as usize;
    if back > 0 {
        let hb = (a - anchor.0) / back as f64;
        for i in 0..back {
            rho = rk4(anchor.0 + i as f64 * hb, rho, hb)?;
        }
    }
    let mut values = Vec::with_capacity(intervals + 1);
    values.push(rho * kappa.eval(a)?);
    for i in 0..intervals {
        let s = a + i as f64 * h;
        rho = rk4(s, rho, h)?;
        values.push(rho * kappa.eval(s + h)?);
    }
    ScalarFn::table(a, h, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frenet::{sampled_apparatus, SampledCurve};

    fn c(x: f64) -> ScalarFn {
        ScalarFn::Const(x)
    }

    #[test]
    fn initial_frames_satisfy_their_signatures() {
        for class in CurveClass::ALL {
            let [t, n, b] = initial_frame(class);
            assert_eq!(class.gram().frame_deviation(t, n, b), 0.0, "{class}");
        }
    }

    fn resampled(out: &SynthResult) -> FrenetApparatus {
        let t = out.points.iter().map(|p| p.0).collect();
        let pts = out.points.iter().map(|p| p.1).collect();
        sampled_apparatus(&SampledCurve::new(t, pts).unwrap(), 1001).unwrap()
    }

    #[test]
    fn helix_round_trip() {
        let req = SynthRequest::new(CurveClass::Timelike, c(1.0), c(2f64.sqrt()), (0.0, 6.283), 1e-3);
        let out = synth_curve(&req).unwrap();
        assert_eq!(out.points.len(), 6284);
        assert!(out.max_gram_drift < 1e-8);
        let app = resampled(&out);
        assert_eq!(app.class, CurveClass::Timelike);
        for p in &app.samples {
            assert!((p.kappa - 1.0).abs() < 1e-6, "{}", p.kappa);
            assert!((p.tau / 2f64.sqrt() - 1.0).abs() < 1e-6, "{}", p.tau);
        }
    }

    #[test]
    fn lightlike_round_trip() {
        let req = SynthRequest::new(CurveClass::Lightlike, c(1.0), c(-0.5), (0.0, 6.283), 1e-3);
        let app = resampled(&synth_curve(&req).unwrap());
        assert_eq!(app.class, CurveClass::Lightlike);
        for p in &app.samples {
            assert!((p.tau + 0.5).abs() < 1e-6, "{}", p.tau);
        }
    }

    #[test]
    fn rejects_coarse_steps_and_bad_frames() {
        let mut req = SynthRequest::new(CurveClass::Timelike, c(1.0), c(1.0), (0.0, 1.0), 0.1);
        assert!(matches!(synth_curve(&req), Err(Error::InvalidInput(_))));
        req.step = 0.01;
        req.initial_frame = Some(initial_frame(CurveClass::SpacelikeSpacelikeN));
        assert!(matches!(synth_curve(&req), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn slant_torsion_closed_forms() {
        let tau = generate_slant_torsion(
            -1.0,
            &c(1.0),
            (1.5, 1.5 / 1.25f64.sqrt()),
            (1.5, 3.0),
            Branch::TauMinusKappa,
            SLANT_TORSION_INTERVALS,
        )
        .unwrap();
        for s in [1.5, 1.9, 2.4, 3.0] {
            let want = s / (s * s - 1.0f64).sqrt();
            assert!((tau.eval(s).unwrap() - want).abs() < 1e-8);
        }
        let flat = generate_slant_torsion(0.0, &c(1.0), (0.0, 2f64.sqrt()), (0.0, 1.0), Branch::TauMinusKappa, 64).unwrap();
        assert!((flat.eval(0.7).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let tau = generate_slant_torsion(1.0, &c(1.0), (0.0, 0.0), (-0.8, 0.8), Branch::TauPlusKappa, SLANT_TORSION_INTERVALS).unwrap();
        for s in [-0.8f64, -0.3, 0.0, 0.5, 0.8] {
            let want = s / (1.0 - s * s).sqrt();
            assert!((tau.eval(s).unwrap() - want).abs() < 1e-8);
        }
    }

    #[test]
    fn branch_exit_is_reported() {
        // With kappa = 1 the flow gives rho/sqrt(rho^2 - 1) = w0 + s, so the
        // discriminant 1/(w^2 - 1) reaches 1e-9 at s = sqrt(1e9 + 1) - w0.
        let w0 = 1.5 / 1.25f64.sqrt();
        let err = generate_slant_torsion(-1.0, &c(1.0), (0.0, 1.5), (0.0, 40000.0), Branch::TauMinusKappa, 400_000)
            .unwrap_err();
        let want = (1e9f64 + 1.0).sqrt() - w0;
        match err {
            Error::BranchExit { reached } => assert!((reached - want).abs() < 1e-3 * want, "{reached}"),
            e => panic!("{e}"),
        }
        let err = generate_slant_torsion(1.0, &c(1.0), (0.0, 1.5), (0.0, 2.0), Branch::TauMinusKappa, 4096).unwrap_err();
        assert!(matches!(err, Error::Domain { .. } | Error::BranchExit { .. }), "{err}");
    }

    #[test]
    fn gram_drift_converges_at_fifth_order() {
        // The RK4 stability function loses |R(ih)|^2 - 1 = O(h^6) per step on a
        // form-preserving linear system, so drift over a fixed span is O(h^5).
        let req = SynthRequest::new(CurveClass::SpacelikeSpacelikeN, c(1.0), c(0.5), (0.0, 4.0), 4.0 / 64.0);
        let d: Vec<f64> = [1, 2, 4].iter().map(|&k| propagate(&req, k).unwrap().max_gram_drift).collect();
        for w in d.windows(2) {
            let ratio = w[0] / w[1];
            assert!((28.0..36.0).contains(&ratio), "{ratio}");
        }
    }
}
