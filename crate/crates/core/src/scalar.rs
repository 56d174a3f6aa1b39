//! Scalar functions of arc length, as used for prescribed curvature and
//! torsion.

use crate::dsl::{parse_expr, Expr};
use crate::error::{Error, Result};
use crate::numeric::{derivative_uniform, lagrange6};

/// A function `s -> f(s)` together with its first derivative.
#[derive(Clone, Debug)]
pub enum ScalarFn {
    Const(f64),
    Expr { f: Expr, df: Expr },
    /// Samples on a uniform grid; evaluated by six-point interpolation.
    Table {
        s0: f64,
        h: f64,
        values: Vec<f64>,
        slopes: Vec<f64>,
    },
}

impl ScalarFn {
    pub fn from_expr(f: Expr) -> ScalarFn {
        if !f.contains_var() {
            if let Ok(c) = f.eval(0.0) {
                return ScalarFn::Const(c);
            }
        }
        ScalarFn::Expr {
            df: f.derivative(),
            f,
        }
    }

    /// Parses `text` as an expression in `s`.
    pub fn parse(text: &str) -> Result<ScalarFn> {
        Ok(ScalarFn::from_expr(parse_expr(text, "s")?))
    }

    /// Tabulated function on the grid `s0 + i h`. Slopes come from
    /// fourth-order differences of the table.
    pub fn table(s0: f64, h: f64, values: Vec<f64>) -> Result<ScalarFn> {
        if values.len() < 6 {
            return Err(Error::TooFewPoints {
                needed: 6,
                got: values.len(),
            });
        }
        let slopes = derivative_uniform(&values, h)?;
        Ok(ScalarFn::Table {
            s0,
            h,
            values,
            slopes,
        })
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        match self {
            ScalarFn::Const(c) => Ok(*c),
            ScalarFn::Expr { f, .. } => f.eval(s),
            ScalarFn::Table { s0, h, values, .. } => {
                self.check_range(s)?;
                Ok(lagrange6(values, *s0, *h, s))
            }
        }
    }

    pub fn deriv(&self, s: f64) -> Result<f64> {
        match self {
            ScalarFn::Const(_) => Ok(0.0),
            ScalarFn::Expr { df, .. } => df.eval(s),
            ScalarFn::Table { s0, h, slopes, .. } => {
                self.check_range(s)?;
                Ok(lagrange6(slopes, *s0, *h, s))
            }
        }
    }

    fn check_range(&self, s: f64) -> Result<()> {
        if let ScalarFn::Table { s0, h, values, .. } = self {
            let end = s0 + h * (values.len() - 1) as f64;
            let slack = 1e-9 * h;
            if s < s0 - slack || s > end + slack {
                return Err(Error::Domain {
                    what: format!("table defined on [{s0}, {end}]"),
                    at: s,
                });
            }
        }
        Ok(())
    }
}
