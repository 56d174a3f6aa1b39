#![allow(dead_code)]
pub mod exprs;

use helixlab_core::dsl::CurveSpec;
use helixlab_core::frenet::{analyze_curve, CurveClass, FrenetApparatus};
use helixlab_core::lorentz::LinearMap;
use helixlab_core::scalar::ScalarFn;
use helixlab_core::slant::Branch;
use helixlab_core::synth::{
    generate_slant_torsion, initial_frame, synth_curve, SynthRequest, SLANT_TORSION_INTERVALS,
};

pub enum Origin {
    Analytic(CurveSpec),
    Synthesized(SynthRequest),
}

pub struct CorpusCurve {
    pub name: &'static str,
    pub class: CurveClass,
    /// Whether the curve is a slant helix on its whole domain.
    pub slant: bool,
    pub origin: Origin,
}

impl CorpusCurve {
    pub fn apparatus(&self) -> FrenetApparatus {
        self.transformed(&LinearMap::IDENTITY)
    }

    /// The apparatus of the image of the curve under `map`.
    pub fn transformed(&self, map: &LinearMap) -> FrenetApparatus {
        match &self.origin {
            Origin::Analytic(spec) => analyze_curve(&spec.transformed(map))
                .unwrap_or_else(|e| panic!("{}: {e}", self.name)),
            Origin::Synthesized(req) => {
                let mut req = req.clone();
                let f = req.initial_frame.unwrap_or_else(|| initial_frame(req.class));
                req.initial_frame = Some(f.map(|v| map.apply(v)));
                req.initial_point = map.apply(req.initial_point);
                synth_curve(&req)
                    .unwrap_or_else(|e| panic!("{}: {e}", self.name))
                    .apparatus
            }
        }
    }
}

pub fn c(x: f64) -> ScalarFn {
    ScalarFn::Const(x)
}

pub fn f(text: &str) -> ScalarFn {
    ScalarFn::parse(text).unwrap()
}

/// `tau0` and range for a timelike constant-sigma curve on the
/// tau^2 > kappa^2 branch with kappa = 1, chosen so that the flow moves away
/// from the branch boundary.
pub fn slant_seed(sigma: f64) -> f64 {
    -sigma.signum() * 1.5 / 1.25f64.sqrt()
}

pub fn slant_request(class: CurveClass, sigma: f64, tau0: f64, range: (f64, f64), branch: Branch, step: f64) -> SynthRequest {
    let tau = generate_slant_torsion(sigma, &c(1.0), (range.0, tau0), range, branch, SLANT_TORSION_INTERVALS)
        .unwrap_or_else(|e| panic!("sigma {sigma}: {e}"));
    SynthRequest::new(class, c(1.0), tau, range, step)
}

pub fn timelike_slant(sigma: f64) -> SynthRequest {
    slant_request(CurveClass::Timelike, sigma, slant_seed(sigma), (0.0, 1.5), Branch::TauMinusKappa, 1e-3)
}

fn analytic(name: &'static str, class: CurveClass, slant: bool, x: &str, y: &str, z: &str, dom: (f64, f64)) -> CorpusCurve {
    CorpusCurve {
        name,
        class,
        slant,
        origin: Origin::Analytic(CurveSpec::new("t", x, y, z, dom).unwrap()),
    }
}

fn synth(name: &'static str, class: CurveClass, slant: bool, req: SynthRequest) -> CorpusCurve {
    CorpusCurve {
        name,
        class,
        slant,
        origin: Origin::Synthesized(req),
    }
}

fn plain(class: CurveClass, kappa: ScalarFn, tau: ScalarFn, range: (f64, f64)) -> SynthRequest {
    SynthRequest::new(class, kappa, tau, range, (range.1 - range.0) / 1000.0)
}

/// Thirty curves across all five classes, slant and not.
pub fn corpus() -> Vec<CorpusCurve> {
    use CurveClass::*;
    let mut v = vec![
        analytic("timelike helix", Timelike, true, "cos(t)", "sin(t)", "sqrt(2)*t", (0.0, 6.283)),
        analytic("hyperbolic timelike helix", Timelike, true, "t/2", "cosh(t)", "sinh(t)", (0.0, 2.0)),
        analytic("accelerating timelike", Timelike, false, "cos(t)", "sin(t)", "sqrt(2)*t + 0.3*t^2", (0.0, 3.0)),
        analytic("spacelike helix", SpacelikeSpacelikeN, true, "cos(t)", "sin(t)", "t/2", (0.0, 6.283)),
        analytic("twisted cubic", SpacelikeSpacelikeN, false, "t", "t^2/2", "t^3/6", (0.0, 0.9)),
        analytic("hyperbolic spacelike helix", SpacelikeTimelikeN, true, "t/2", "sinh(t)", "cosh(t)", (0.0, 2.0)),
        analytic("drifting hyperbola", SpacelikeTimelikeN, false, "0.3*t^2", "sinh(t)", "cosh(t)", (0.0, 2.0)),
        analytic("null normal exponential", SpacelikeNullN, true, "t", "exp(t)", "exp(t)", (0.0, 1.0)),
        analytic("lightlike helix", Lightlike, true, "cos(t)", "sin(t)", "t", (0.0, 6.283)),
    ];
    for sigma in [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
        let name: &'static str = Box::leak(format!("timelike sigma {sigma}").into_boxed_str());
        v.push(synth(name, Timelike, true, timelike_slant(sigma)));
    }
    v.extend([
        synth(
            "timelike kappa > tau slant",
            Timelike,
            true,
            slant_request(Timelike, 0.8, 0.3, (0.0, 1.5), Branch::KappaMinusTau, 1e-3),
        ),
        synth("timelike degenerate", Timelike, true, plain(Timelike, c(1.0), c(1.0), (0.0, 2.0))),
        synth("timelike quadratic torsion", Timelike, false, plain(Timelike, c(1.0), f("1 + s^2"), (0.0, 1.0))),
        synth("timelike crossing", Timelike, false, plain(Timelike, c(1.0), f("0.5 + s"), (0.0, 1.5))),
        synth(
            "spacelike slant",
            SpacelikeSpacelikeN,
            true,
            slant_request(SpacelikeSpacelikeN, 0.7, -1.5, (0.0, 1.5), Branch::TauMinusKappa, 1e-3),
        ),
        synth(
            "spacelike kappa > tau slant",
            SpacelikeSpacelikeN,
            true,
            slant_request(SpacelikeSpacelikeN, -0.6, -0.4, (0.0, 1.5), Branch::KappaMinusTau, 1e-3),
        ),
        synth(
            "spacelike varying",
            SpacelikeSpacelikeN,
            false,
            plain(SpacelikeSpacelikeN, f("1 + 0.3*s"), f("2 + sin(s)"), (0.0, 2.0)),
        ),
        synth(
            "timelike-normal slant",
            SpacelikeTimelikeN,
            true,
            SynthRequest::new(
                SpacelikeTimelikeN,
                c(1.0),
                generate_slant_torsion(1.0, &c(1.0), (0.0, 0.0), (-0.8, 0.8), Branch::TauPlusKappa, SLANT_TORSION_INTERVALS)
                    .unwrap(),
                (-0.8, 0.8),
                1e-3,
            ),
        ),
        synth(
            "timelike-normal varying",
            SpacelikeTimelikeN,
            false,
            plain(SpacelikeTimelikeN, c(1.0), f("0.5 + s^2"), (0.0, 1.5)),
        ),
        synth(
            "timelike-normal varying curvature",
            SpacelikeTimelikeN,
            false,
            plain(SpacelikeTimelikeN, f("1 + s"), c(0.7), (0.0, 1.0)),
        ),
        synth("null normal quadratic", SpacelikeNullN, true, plain(SpacelikeNullN, c(1.0), f("1 + s^2"), (0.0, 1.0))),
        synth("null normal oscillating", SpacelikeNullN, true, plain(SpacelikeNullN, c(1.0), f("2 + cos(3*s)"), (0.0, 2.0))),
        synth("lightlike inverse square", Lightlike, true, plain(Lightlike, c(1.0), f("1/(s + 2)^2"), (0.0, 1.0))),
        synth("lightlike negative inverse square", Lightlike, true, plain(Lightlike, c(1.0), f("-3/(2*s + 1)^2"), (0.0, 2.0))),
        synth("lightlike exponential", Lightlike, false, plain(Lightlike, c(1.0), f("exp(s)"), (0.0, 1.0))),
    ]);
    v
}
