use super::classify::{towers, vector_derivs};
use super::CurveClass;
use crate::dsl::{CurveSpec, DerivativeTower};
use crate::error::{Error, Result};
use crate::lorentz::MVec3;
use crate::numeric::{derivative_uniform, linspace, simpson};

/// Arc length (pseudo arc length for lightlike curves) as a tabulated
/// function of the curve parameter, with its inverse.
#[derive(Clone, Debug)]
pub struct Reparametrization {
    class: CurveClass,
    towers: [DerivativeTower; 3],
    /// Parameter grid.
    pub t: Vec<f64>,
    /// `s(t)` on the grid, starting at zero.
    pub s: Vec<f64>,
}

impl Reparametrization {
    /// `ds/dt`: `|a'|` for non-null curves, `<a'', a''>^(1/4)` for lightlike
    /// ones.
    pub fn speed(&self, t: f64) -> Result<f64> {
        speed(self.class, &self.towers, t)
    }

    pub fn total(&self) -> f64 {
        self.s[self.s.len() - 1]
    }

    fn interval(&self, i: usize, t: f64) -> Result<f64> {
        let a = self.t[i];
        let fa = self.speed(a)?;
        let fm = self.speed(0.5 * (a + t))?;
        let fb = self.speed(t)?;
        Ok(simpson(fa, fm, fb, t - a))
    }

    pub fn s_at(&self, t: f64) -> Result<f64> {
        let i = match self.t.partition_point(|&x| x <= t) {
            0 => 0,
            k => (k - 1).min(self.t.len() - 2),
        };
        Ok(self.s[i] + self.interval(i, t)?)
    }

    /// Inverts `s(t)` by Newton iteration inside the bracketing grid cell.
    pub fn t_at(&self, s: f64) -> Result<f64> {
        let last = self.s.len() - 1;
        if s <= 0.0 {
            return Ok(self.t[0]);
        }
        if s >= self.s[last] {
            return Ok(self.t[last]);
        }
        let i = self.s.partition_point(|&x| x <= s).saturating_sub(1).min(last - 1);
        let (lo, hi) = (self.t[i], self.t[i + 1]);
        let frac = (s - self.s[i]) / (self.s[i + 1] - self.s[i]);
        let mut t = lo + frac * (hi - lo);
        for _ in 0..50 {
            let f = self.s[i] + self.interval(i, t)? - s;
            let step = f / self.speed(t)?;
            let next = (t - step).clamp(lo, hi);
            let done = (next - t).abs() <= 1e-15 * (1.0 + t.abs());
            t = next;
            if done {
                break;
            }
        }
        Ok(t)
    }
}

fn speed(class: CurveClass, towers: &[DerivativeTower; 3], t: f64) -> Result<f64> {
    let d = vector_derivs(towers, t)?;
    Ok(match class {
        CurveClass::Lightlike => d[2].norm_sq().abs().powf(0.25),
        _ => d[1].norm(),
    })
}

/// Tabulates `s(t)` over the curve's domain with composite Simpson on `grid`
/// cells.
pub fn reparametrize(curve: &CurveSpec, class: CurveClass, grid: usize) -> Result<Reparametrization> {
    let grid = grid.max(2);
    let tw = towers(curve, 2);
    let t = linspace(curve.domain.0, curve.domain.1, grid + 1);
    let mut fs = Vec::with_capacity(t.len());
    for &ti in &t {
        let v = speed(class, &tw, ti)?;
        if !(v > 1e-10) {
            return Err(Error::DegenerateCurve {
                reason: "arc-length integrand vanishes".into(),
                at: ti,
            });
        }
        fs.push(v);
    }
    let mut s = Vec::with_capacity(t.len());
    s.push(0.0);
    for i in 0..grid {
        let fm = speed(class, &tw, 0.5 * (t[i] + t[i + 1]))?;
        let next = s[i] + simpson(fs[i], fm, fs[i + 1], t[i + 1] - t[i]);
        s.push(next);
    }
    Ok(Reparametrization {
        class,
        towers: tw,
        t,
        s,
    })
}

/// Largest deviation from unit speed on `n` uniformly resampled points:
/// `|a_s| - 1` for non-null curves, `|a_ss| - 1` for lightlike ones, with
/// derivatives taken by finite differences of the positions.
pub fn unit_speed_residual(curve: &CurveSpec, rep: &Reparametrization, n: usize) -> Result<f64> {
    let total = rep.total();
    let h = total / (n - 1) as f64;
    let mut pos = Vec::with_capacity(n);
    for s in linspace(0.0, total, n) {
        pos.push(curve.position(rep.t_at(s)?)?);
    }
    let d1: Vec<MVec3> = derivative_uniform(&pos, h)?;
    let probe = match rep.class {
        CurveClass::Lightlike => derivative_uniform(&d1, h)?,
        _ => d1,
    };
    Ok(probe
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max))
}
