use super::arclength::reparametrize;
use super::classify::{classify_curve, towers, vector_derivs};
use super::{frame_from_jets, CurveClass, FrenetApparatus, Source};
use crate::dsl::CurveSpec;
use crate::error::Result;
use crate::jet::{Jet, JetVec};
use crate::numeric::linspace;

/// Simpson cells per output sample when tabulating arc length.
const CELLS_PER_SAMPLE: usize = 8;

/// Frenet apparatus of an analytic curve on a uniform arc-length grid of
/// `curve.samples` points.
///
/// Derivatives with respect to arc length come from the symbolic derivatives
/// of the components through the chain rule `d/ds = (1/v) d/dt`, carried out
/// on Taylor jets, so curvature, torsion and their slopes are exact up to
/// rounding.
pub fn frenet_apparatus(curve: &CurveSpec, class: CurveClass) -> Result<FrenetApparatus> {
    let order = match class {
        CurveClass::Lightlike => 5,
        _ => 4,
    };
    let tw = towers(curve, order);
    let rep = reparametrize(curve, class, (CELLS_PER_SAMPLE * (curve.samples - 1)).max(2000))?;
    let mut samples = Vec::with_capacity(curve.samples);
    for s in linspace(0.0, rep.total(), curve.samples) {
        let t = rep.t_at(s)?;
        let d = vector_derivs(&tw, t)?;
        let comp = |c: usize| Jet::from_derivatives(&d.iter().map(|v| v[c]).collect::<Vec<_>>());
        let alpha = JetVec([comp(0), comp(1), comp(2)]);
        let at = alpha.deriv();
        let v = match class {
            CurveClass::Lightlike => {
                let att = at.deriv();
                att.norm_sq().abs().powf(0.25)
            }
            _ => at.norm_sq().abs().sqrt(),
        };
        let inv_v = v.recip();
        let ds = |f: &JetVec| f.deriv().scale(inv_v);
        let d1 = at.scale(inv_v);
        let d2 = ds(&d1);
        let d3 = ds(&d2);
        samples.push(frame_from_jets(class, s, &d1, &d2, &d3));
    }
    let app = FrenetApparatus::new(class, samples, Source::Analytic)?;
    app.check_closure()?;
    app.check_nondegenerate()?;
    Ok(app)
}

/// Classifies `curve` and computes its Frenet apparatus.
pub fn analyze_curve(curve: &CurveSpec) -> Result<FrenetApparatus> {
    let class = classify_curve(curve, curve.samples)?;
    frenet_apparatus(curve, class)
}
