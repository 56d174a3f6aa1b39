use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use super::{AxisCandidate, Branch, Construction, IntervalVerdict, LightlikeFit, SigmaProfile, SlantReport, Verdict};
use crate::error::Result;
use crate::frenet::{fmt_float, FrenetApparatus};
use crate::lorentz::{causal_class, CausalClass, MVec3};

/// Pretty-printed JSON with every float in `{:.16e}` (17 significant
/// digits) and non-finite values as `null`.
struct FloatFormatter(PrettyFormatter<'static>);

impl Formatter for FloatFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

#[derive(Serialize)]
struct JsonSigma {
    branch: Branch,
    constant: Option<f64>,
    stdev: Option<f64>,
}

#[derive(Serialize)]
struct JsonAxis {
    #[serde(rename = "U")]
    u: [f64; 3],
    c: f64,
    drift: f64,
    n_variance: f64,
    construction: Construction,
    causal_class: CausalClass,
}

#[derive(Serialize)]
struct JsonInterval {
    from: f64,
    to: f64,
    branch: Option<Branch>,
    verdict: IntervalVerdict,
    sigma: Option<f64>,
    stdev: Option<f64>,
}

#[derive(Serialize)]
struct JsonOracle {
    #[serde(rename = "U")]
    u: [f64; 3],
    n_variance: f64,
}

#[derive(Serialize)]
struct JsonReport {
    class: &'static str,
    verdict: Verdict,
    tolerance: f64,
    sigma: Vec<JsonSigma>,
    axis: Option<JsonAxis>,
    intervals: Vec<JsonInterval>,
    lightlike_fit: Option<LightlikeFit>,
    oracle: Option<JsonOracle>,
    agrees: Option<bool>,
}

fn axis_json(a: &AxisCandidate) -> JsonAxis {
    JsonAxis {
        u: a.u.to_array(),
        c: a.c_value,
        drift: a.drift,
        n_variance: a.n_variance,
        construction: a.construction,
        causal_class: causal_class(a.u, 1e-9),
    }
}

impl From<&SlantReport> for JsonReport {
    fn from(r: &SlantReport) -> Self {
        JsonReport {
            class: r.class.name(),
            verdict: r.verdict,
            tolerance: r.tolerance,
            sigma: r
                .sigma
                .iter()
                .map(|s| JsonSigma {
                    branch: s.branch,
                    constant: s.constant,
                    stdev: s.stdev,
                })
                .collect(),
            axis: r.axis.as_ref().map(axis_json),
            intervals: r
                .intervals
                .iter()
                .map(|iv| JsonInterval {
                    from: iv.from,
                    to: iv.to,
                    branch: iv.branch,
                    verdict: iv.verdict,
                    sigma: iv.sigma,
                    stdev: iv.stdev,
                })
                .collect(),
            lightlike_fit: r.lightlike_fit,
            oracle: r.oracle.as_ref().map(|o| JsonOracle {
                u: o.u.to_array(),
                n_variance: o.n_variance,
            }),
            agrees: r.agrees(),
        }
    }
}

/// Pretty JSON in the report float format, with a trailing newline.
pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FloatFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Writes the report as JSON with a fixed key order.
pub fn write_json<W: Write>(report: &SlantReport, mut out: W) -> Result<()> {
    out.write_all(to_json_string(report).as_bytes())?;
    Ok(())
}

pub fn to_json_string(report: &SlantReport) -> String {
    json_string(&JsonReport::from(report))
}

/// `s,branch,sigma` rows for every valid point of every profile.
pub fn write_sigma_csv<W: Write>(report: &SlantReport, out: W) -> Result<()> {
    write_profiles_csv(&report.profiles, out)
}

pub fn write_profiles_csv<W: Write>(profiles: &[SigmaProfile], mut out: W) -> Result<()> {
    writeln!(out, "s,branch,sigma")?;
    for p in profiles {
        for (&(s, v), &ok) in p.points.iter().zip(&p.valid) {
            if ok {
                writeln!(out, "{},{},{}", fmt_float(s), p.branch.name(), fmt_float(v))?;
            }
        }
    }
    Ok(())
}

/// `s,value` rows of `<N(s), U>` for the given axis.
pub fn write_n_dot_u_csv<W: Write>(app: &FrenetApparatus, u: MVec3, mut out: W) -> Result<()> {
    writeln!(out, "s,value")?;
    for p in &app.samples {
        writeln!(out, "{},{}", fmt_float(p.s), fmt_float(p.n.dot(u)))?;
    }
    Ok(())
}
