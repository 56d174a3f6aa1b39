//! Line-oriented `key = value` documents describing curves and scalar functions.
//!
//! ```text
//! # timelike helix
//! param  = t
//! x      = cos(t)
//! y      = sin(t)
//! z      = sqrt(2)*t
//! domain = [0, 2*pi]
//! samples = 2001
//! ```

use std::collections::HashMap;

use super::expr::{add, constant, mul, Expr};
use super::parser::{parse_constant, parse_expr};
use crate::error::{Error, Result};
use crate::lorentz::{LinearMap, MVec3};

pub const DEFAULT_SAMPLES: usize = 1001;
pub const MIN_SAMPLES: usize = 16;

/// Analytic curve `t -> (x(t), y(t), z(t))` on a closed domain.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub param: String,
    pub x: Expr,
    pub y: Expr,
    pub z: Expr,
    pub domain: (f64, f64),
    pub samples: usize,
}

impl CurveSpec {
    pub fn new(param: &str, x: &str, y: &str, z: &str, domain: (f64, f64)) -> Result<Self> {
        let spec = CurveSpec {
            param: param.to_string(),
            x: parse_expr(x, param)?,
            y: parse_expr(y, param)?,
            z: parse_expr(z, param)?,
            domain,
            samples: DEFAULT_SAMPLES,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self> {
        self.samples = samples;
        self.validate()?;
        Ok(self)
    }

    pub fn position(&self, t: f64) -> Result<MVec3> {
        Ok(MVec3::new(self.x.eval(t)?, self.y.eval(t)?, self.z.eval(t)?))
    }

    pub fn components(&self) -> [&Expr; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// The image curve `t -> map(alpha(t))`.
    pub fn transformed(&self, map: &LinearMap) -> CurveSpec {
        let comps = self.components();
        let row = |i: usize| {
            (0..3).fold(constant(0.0), |acc, j| {
                add(acc, mul(constant(map.m[i][j]), comps[j].clone()))
            })
        };
        CurveSpec {
            param: self.param.clone(),
            x: row(0),
            y: row(1),
            z: row(2),
            domain: self.domain,
            samples: self.samples,
        }
    }

    fn validate(&self) -> Result<()> {
        check_domain(self.domain)?;
        check_samples(self.samples)
    }
}

/// Scalar function of one variable on a closed domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarSpec {
    pub param: String,
    pub f: Expr,
    pub domain: (f64, f64),
    pub samples: usize,
}

fn check_domain((a, b): (f64, f64)) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidInput(format!(
            "domain [{a}, {b}] must be finite with a < b"
        )));
    }
    Ok(())
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "samples = {n} is below the minimum of {MIN_SAMPLES}"
        )));
    }
    Ok(())
}

struct Fields {
    map: HashMap<String, (usize, String)>,
}

impl Fields {
    fn parse(text: &str, allowed: &[&str]) -> Result<Fields> {
        let mut map = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Document {
                    line,
                    message: format!("expected `key = value`, found `{content}`"),
                });
            };
            let key = key.trim();
            if !allowed.contains(&key) {
                return Err(Error::Document {
                    line,
                    message: format!("unknown key `{key}` (expected one of {})", allowed.join(", ")),
                });
            }
            if map
                .insert(key.to_string(), (line, value.trim().to_string()))
                .is_some()
            {
                return Err(Error::Document {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Fields { map })
    }

    fn get(&self, key: &str) -> Option<&(usize, String)> {
        self.map.get(key)
    }

    fn required(&self, key: &str) -> Result<&(usize, String)> {
        self.get(key).ok_or_else(|| Error::MissingField(key.to_string()))
    }

    fn param(&self, default: &str) -> Result<String> {
        match self.get("param") {
            None => Ok(default.to_string()),
            Some((line, name)) => {
                let ok = name
                    .chars()
                    .next()
                    .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if ok {
                    Ok(name.clone())
                } else {
                    Err(Error::Document {
                        line: *line,
                        message: format!("`{name}` is not a valid parameter name"),
                    })
                }
            }
        }
    }

    fn expr(&self, key: &str, param: &str) -> Result<Expr> {
        let (line, text) = self.required(key)?;
        parse_expr(text, param).map_err(|source| Error::Expression {
            field: key.to_string(),
            line: *line,
            source,
        })
    }

    fn domain(&self) -> Result<(f64, f64)> {
        let (line, text) = self.required("domain")?;
        let bad = |message: String| Error::Document {
            line: *line,
            message,
        };
        let inner = text
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad(format!("domain must look like `[a, b]`, found `{text}`")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| bad("domain needs two comma-separated endpoints".into()))?;
        let end = |s: &str| parse_constant(s).map_err(|e| bad(format!("domain endpoint: {e}")));
        let domain = (end(a)?, end(b)?);
        check_domain(domain).map_err(|e| bad(e.to_string()))?;
        Ok(domain)
    }

    fn samples(&self) -> Result<usize> {
        match self.get("samples") {
            None => Ok(DEFAULT_SAMPLES),
            Some((line, text)) => {
                let n: usize = text.parse().map_err(|_| Error::Document {
                    line: *line,
                    message: format!("samples must be a positive integer, found `{text}`"),
                })?;
                check_samples(n).map_err(|e| Error::Document {
                    line: *line,
                    message: e.to_string(),
                })?;
                Ok(n)
            }
        }
    }
}

/// Parses a `.curve` document. The parameter defaults to `t`.
pub fn parse_curve_document(text: &str) -> Result<CurveSpec> {
    let fields = Fields::parse(text, &["param", "x", "y", "z", "domain", "samples"])?;
    let param = fields.param("t")?;
    Ok(CurveSpec {
        x: fields.expr("x", &param)?,
        y: fields.expr("y", &param)?,
        z: fields.expr("z", &param)?,
        domain: fields.domain()?,
        samples: fields.samples()?,
        param,
    })
}

/// Parses a `.fn` document. The parameter defaults to `s`.
pub fn parse_scalar_document(text: &str) -> Result<ScalarSpec> {
    let fields = Fields::parse(text, &["param", "f", "domain", "samples"])?;
    let param = fields.param("s")?;
    Ok(ScalarSpec {
        f: fields.expr("f", &param)?,
        domain: fields.domain()?,
        samples: fields.samples()?,
        param,
    })
}
