//! Causal classification of curves, (pseudo) arc-length reparametrization
//! and the Frenet apparatus for each of the five frame classes.

mod analytic;
mod arclength;
mod classify;
mod sampled;

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, JetVec};
use crate::lorentz::{GramSignature, MVec3};

pub use analytic::{analyze_curve, frenet_apparatus};
pub use arclength::{reparametrize, unit_speed_residual, Reparametrization};
pub use classify::{classify_curve, CLASSIFY_NULL_TOL};
pub use sampled::{read_sampled_csv, sampled_apparatus, SampledCurve, EDGE_TRIM, SAMPLED_NULL_TOL};

/// Largest admitted deviation of a computed frame from its Gram signature.
pub const FRAME_CLOSURE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveClass {
    Timelike,
    /// Spacelike tangent, spacelike normal.
    SpacelikeSpacelikeN,
    /// Spacelike tangent, timelike normal.
    SpacelikeTimelikeN,
    /// Spacelike tangent, null normal.
    SpacelikeNullN,
    Lightlike,
}

impl CurveClass {
    pub const ALL: [CurveClass; 5] = [
        CurveClass::Timelike,
        CurveClass::SpacelikeSpacelikeN,
        CurveClass::SpacelikeTimelikeN,
        CurveClass::SpacelikeNullN,
        CurveClass::Lightlike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveClass::Timelike => "Timelike",
            CurveClass::SpacelikeSpacelikeN => "SpacelikeSpacelikeN",
            CurveClass::SpacelikeTimelikeN => "SpacelikeTimelikeN",
            CurveClass::SpacelikeNullN => "SpacelikeNullN",
            CurveClass::Lightlike => "Lightlike",
        }
    }

    /// Frames whose normal or tangent is null. Their systems carry a unit
    /// entry where the curvature would sit.
    pub fn is_null_frame(self) -> bool {
        matches!(self, CurveClass::SpacelikeNullN | CurveClass::Lightlike)
    }

    /// `(<T,T>, <N,N>)` for the classes with unit tangent and normal.
    pub fn signs(self) -> Option<(f64, f64)> {
        match self {
            CurveClass::Timelike => Some((-1.0, 1.0)),
            CurveClass::SpacelikeSpacelikeN => Some((1.0, 1.0)),
            CurveClass::SpacelikeTimelikeN => Some((1.0, -1.0)),
            _ => None,
        }
    }

    pub fn gram(self) -> GramSignature {
        match self {
            CurveClass::Timelike => GramSignature::diag(-1.0, 1.0, 1.0),
            CurveClass::SpacelikeSpacelikeN => GramSignature::diag(1.0, 1.0, -1.0),
            CurveClass::SpacelikeTimelikeN => GramSignature::diag(1.0, -1.0, 1.0),
            CurveClass::SpacelikeNullN => GramSignature {
                expected: [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
            },
            CurveClass::Lightlike => GramSignature {
                expected: [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]],
            },
        }
    }

    /// Rows give `T'`, `N'`, `B'` as coefficients on `(T, N, B)`.
    /// `kappa` is ignored for the null-frame classes.
    pub fn frenet_matrix(self, kappa: f64, tau: f64) -> [[f64; 3]; 3] {
        let k = kappa;
        let t = tau;
        match self {
            CurveClass::Timelike => [[0.0, k, 0.0], [k, 0.0, t], [0.0, -t, 0.0]],
            CurveClass::SpacelikeSpacelikeN => [[0.0, k, 0.0], [-k, 0.0, t], [0.0, t, 0.0]],
            CurveClass::SpacelikeTimelikeN => [[0.0, k, 0.0], [k, 0.0, t], [0.0, t, 0.0]],
            CurveClass::SpacelikeNullN => [[0.0, 1.0, 0.0], [0.0, t, 0.0], [-1.0, 0.0, -t]],
            CurveClass::Lightlike => [[0.0, 1.0, 0.0], [t, 0.0, -1.0], [0.0, -t, 0.0]],
        }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Analytic,
    Sampled,
    Synthesized,
}

/// Frame and invariants at one parameter value, with the arc-length
/// derivatives of curvature and torsion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameSample {
    pub s: f64,
    pub t: MVec3,
    pub n: MVec3,
    pub b: MVec3,
    pub kappa: f64,
    pub tau: f64,
    pub dkappa: f64,
    pub dtau: f64,
}

impl FrameSample {
    pub fn frame(&self) -> [MVec3; 3] {
        [self.t, self.n, self.b]
    }
}

#[derive(Clone, Debug)]
pub struct FrenetApparatus {
    pub class: CurveClass,
    pub samples: Vec<FrameSample>,
    pub source: Source,
}

impl FrenetApparatus {
    pub const MIN_SAMPLES: usize = 16;

    /// Checks the grid is uniform and long enough.
    pub fn new(class: CurveClass, samples: Vec<FrameSample>, source: Source) -> Result<Self> {
        if samples.len() < Self::MIN_SAMPLES {
            return Err(Error::TooFewPoints {
                needed: Self::MIN_SAMPLES,
                got: samples.len(),
            });
        }
        let h = (samples[samples.len() - 1].s - samples[0].s) / (samples.len() - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::InvalidInput("arc-length grid must increase".into()));
        }
        for (i, w) in samples.windows(2).enumerate() {
            let step = w[1].s - w[0].s;
            if (step - h).abs() > 1e-9 * h {
                return Err(Error::InvalidInput(format!(
                    "arc-length grid is not uniform at sample {}",
                    i + 1
                )));
            }
        }
        Ok(FrenetApparatus {
            class,
            samples,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn step(&self) -> f64 {
        let n = self.samples.len();
        (self.samples[n - 1].s - self.samples[0].s) / (n - 1) as f64
    }

    pub fn s_values(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    pub fn kappa(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.kappa).collect()
    }

    pub fn tau(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.tau).collect()
    }

    /// Largest deviation of any frame from the class's Gram signature.
    pub fn max_gram_deviation(&self) -> f64 {
        let g = self.class.gram();
        self.samples
            .iter()
            .map(|p| g.frame_deviation(p.t, p.n, p.b))
            .fold(0.0, f64::max)
    }

    /// Writes `s,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "s", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau",
        ])?;
        for p in &self.samples {
            let mut row = vec![fmt_float(p.s)];
            for v in [p.t, p.n, p.b] {
                row.extend(v.to_array().map(fmt_float));
            }
            row.push(fmt_float(p.kappa));
            row.push(fmt_float(p.tau));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    fn check_closure(&self) -> Result<()> {
        let g = self.class.gram();
        for p in &self.samples {
            let dev = g.frame_deviation(p.t, p.n, p.b);
            if !(dev <= FRAME_CLOSURE_TOL) {
                return Err(Error::FrameClosure {
                    deviation: dev,
                    at: p.s,
                });
            }
        }
        Ok(())
    }

    /// Enforces nonvanishing curvature and torsion. Torsion may touch zero at
    /// isolated samples.
    fn check_nondegenerate(&self) -> Result<()> {
        let mut prev_flat = false;
        for p in &self.samples {
            if !self.class.is_null_frame() && !(p.kappa > 1e-10) {
                return Err(Error::DegenerateCurve {
                    reason: "curvature vanishes".into(),
                    at: p.s,
                });
            }
            let flat = p.tau.abs() <= 1e-12;
            if flat && prev_flat {
                return Err(Error::DegenerateCurve {
                    reason: "torsion vanishes on a subinterval".into(),
                    at: p.s,
                });
            }
            prev_flat = flat;
        }
        Ok(())
    }
}

/// Floats in CSV and JSON output: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// The null vector `B` with `<B,L> = 1`, `<B,B> = 0` and `<B,W> = 0`, for a
/// null `L` and a unit spacelike `W` orthogonal to it.
pub fn null_partner(l: MVec3, w: MVec3) -> MVec3 {
    let r = l.time_reflect();
    let x = r - w * r.dot(w);
    let k = x.dot(l);
    (x - l * (x.norm_sq() / (2.0 * k))) * (1.0 / k)
}

fn null_partner_jet(l: &JetVec, w: &JetVec) -> JetVec {
    let r = l.time_reflect();
    let x = r - w.scale(r.dot(w));
    let k = x.dot(l);
    let half = Jet::constant(0.5, k.len());
    (x - l.scale(x.norm_sq() * half / k)).scale(k.recip())
}

/// Frame, curvature and torsion from the first three arc-length derivatives
/// of the curve, as jets so that the invariants come with their
/// derivatives. For the lightlike class `d1`, `d2`, `d3` are `T`, `T'`, `T''`
/// with respect to pseudo arc length.
pub(crate) fn frame_from_jets(
    class: CurveClass,
    s: f64,
    d1: &JetVec,
    d2: &JetVec,
    d3: &JetVec,
) -> FrameSample {
    let (t, n, b, kappa, tau) = match class.signs() {
        Some((eps_t, eps_n)) => {
            let kappa = d2.norm_sq().abs().sqrt();
            let n = d2.scale(kappa.recip());
            let b = d1.cross(&n).scale(Jet::constant(-eps_t, n.len()));
            let tau = crate::jet::det3(d1, d2, d3) * (kappa * kappa).recip();
            let tau = tau.scale(eps_n);
            (d1.value(), n.value(), b.value(), kappa, tau)
        }
        None => {
            let b = match class {
                CurveClass::SpacelikeNullN => null_partner_jet(d2, d1),
                _ => null_partner_jet(d1, d2),
            };
            let tau = d3.dot(&b);
            let one = Jet::constant(1.0, 2);
            (d1.value(), d2.value(), b.value(), one, tau)
        }
    };
    let slope = |j: Jet| if j.len() > 1 { j.derivative(1) } else { 0.0 };
    FrameSample {
        s,
        t,
        n,
        b,
        kappa: kappa.value(),
        tau: tau.value(),
        dkappa: if class.is_null_frame() { 0.0 } else { slope(kappa) },
        dtau: slope(tau),
    }
}
