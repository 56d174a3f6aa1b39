use super::CurveClass;
use crate::dsl::{CurveSpec, DerivativeTower};
use crate::error::{Error, Result};
use crate::lorentz::{causal_class, CausalClass, MVec3};
use crate::numeric::linspace;

/// Relative tolerance below which `<a', a'>` counts as zero.
pub const CLASSIFY_NULL_TOL: f64 = 1e-9;

pub(crate) fn towers(curve: &CurveSpec, order: usize) -> [DerivativeTower; 3] {
    curve.components().map(|e| DerivativeTower::new(e, order))
}

/// The `k`-th parametric derivative of the curve at `t`.
pub(crate) fn vector_derivs(towers: &[DerivativeTower; 3], t: f64) -> Result<Vec<MVec3>> {
    let order = towers[0].order();
    let mut out = vec![MVec3::ZERO; order + 1];
    let mut buf = vec![0.0; order + 1];
    for (c, tw) in towers.iter().enumerate() {
        tw.eval_into(t, &mut buf)?;
        for k in 0..=order {
            match c {
                0 => out[k].x1 = buf[k],
                1 => out[k].x2 = buf[k],
                _ => out[k].x3 = buf[k],
            }
        }
    }
    Ok(out)
}

/// Causal class of the normal direction of a spacelike curve: `a''` with its
/// tangential part removed. `None` when that component vanishes.
pub(crate) fn normal_class(d1: MVec3, d2: MVec3, tol: f64) -> Option<CausalClass> {
    let n = d2 - d1 * (d2.dot(d1) / d1.dot(d1));
    let scale = n.euclid_norm_sq();
    if scale <= 1e-24 * (1.0 + d2.euclid_norm_sq()) {
        return None;
    }
    let q = n.norm_sq();
    Some(if q.abs() <= tol * scale {
        CausalClass::Lightlike
    } else if q > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    })
}

/// Shared classification over per-point derivative pairs `(t, a', a'')`.
pub(crate) fn classify_points(
    points: impl IntoIterator<Item = (f64, MVec3, MVec3)>,
    tol: f64,
) -> Result<CurveClass> {
    let mut tangent: Option<(f64, CausalClass)> = None;
    let mut normal: Option<(f64, CausalClass)> = None;
    let mut last_degenerate: Option<f64> = None;
    for (t, d1, d2) in points {
        if d1.euclid_norm() == 0.0 {
            return Err(Error::DegenerateCurve {
                reason: "tangent vanishes".into(),
                at: t,
            });
        }
        let c = causal_class(d1, tol);
        match tangent {
            None => tangent = Some((t, c)),
            Some((_, prev)) if prev != c => {
                return Err(Error::MixedCausalType {
                    from: tangent.map(|p| p.0).unwrap_or(t),
                    to: t,
                })
            }
            Some(_) => tangent = Some((t, c)),
        }
        let nc = match c {
            CausalClass::Spacelike => normal_class(d1, d2, tol),
            // the normal of a timelike curve is spacelike; of a lightlike
            // curve, a'' is spacelike whenever it is nonzero
            _ if d2.euclid_norm_sq() <= 1e-24 * (1.0 + d1.euclid_norm_sq()) => None,
            _ => Some(CausalClass::Spacelike),
        };
        match nc {
            None => {
                if last_degenerate.is_some() {
                    return Err(Error::DegenerateCurve {
                        reason: "second derivative vanishes on a subinterval".into(),
                        at: t,
                    });
                }
                last_degenerate = Some(t);
            }
            Some(nc) => {
                last_degenerate = None;
                match normal {
                    Some((t0, prev)) if prev != nc => {
                        return Err(Error::MixedCausalType { from: t0, to: t })
                    }
                    _ => normal = Some((t, nc)),
                }
            }
        }
    }
    let tangent = tangent.map(|p| p.1).ok_or(Error::TooFewPoints { needed: 1, got: 0 })?;
    let normal = normal.map(|p| p.1).ok_or_else(|| Error::DegenerateCurve {
        reason: "second derivative vanishes everywhere".into(),
        at: f64::NAN,
    })?;
    Ok(match (tangent, normal) {
        (CausalClass::Timelike, _) => CurveClass::Timelike,
        (CausalClass::Lightlike, _) => CurveClass::Lightlike,
        (CausalClass::Spacelike, CausalClass::Spacelike) => CurveClass::SpacelikeSpacelikeN,
        (CausalClass::Spacelike, CausalClass::Timelike) => CurveClass::SpacelikeTimelikeN,
        (CausalClass::Spacelike, CausalClass::Lightlike) => CurveClass::SpacelikeNullN,
    })
}

/// Determines the frame class of an analytic curve from `grid` evaluation
/// points spread over its domain.
pub fn classify_curve(curve: &CurveSpec, grid: usize) -> Result<CurveClass> {
    let tw = towers(curve, 2);
    let ts = linspace(curve.domain.0, curve.domain.1, grid.max(2));
    let mut pts = Vec::with_capacity(ts.len());
    for t in ts {
        let d = vector_derivs(&tw, t)?;
        pts.push((t, d[1], d[2]));
    }
    classify_points(pts, CLASSIFY_NULL_TOL)
}
