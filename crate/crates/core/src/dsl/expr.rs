use std::fmt;

use crate::error::{Error, Result};

/// Highest derivative order the evaluator hands out. Third derivatives feed
/// the Frenet apparatus; lightlike curves need two more because the pseudo
/// arc-length speed already involves the second derivative.
pub const MAX_DERIVATIVE_ORDER: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tan,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Tan,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tan => "tan",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> std::result::Result<f64, &'static str> {
        let y = match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tan => x.tan(),
            Func::Tanh => x.tanh(),
            Func::Exp => x.exp(),
            Func::Log if x <= 0.0 => return Err("log of a non-positive value"),
            Func::Log => x.ln(),
            Func::Sqrt if x < 0.0 => return Err("sqrt of a negative value"),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        };
        Ok(y)
    }
}

/// Expression tree in a single variable.
///
/// `Pow` carries its exponent as a number: the grammar only admits constant
/// exponents, which keeps every derivative closed-form.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

// Simplifying constructors. They only fold constants and drop 0/1 identities.

pub fn constant(c: f64) -> Expr {
    Expr::Const(c)
}

pub fn var() -> Expr {
    Expr::Var
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (Expr::Const(0.0), b) => b,
        (a, Expr::Const(0.0)) => a,
        (a, Expr::Neg(b)) => sub(a, *b),
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (a, Expr::Const(0.0)) => a,
        (Expr::Const(0.0), b) => neg(b),
        (a, Expr::Neg(b)) => add(a, *b),
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (Expr::Const(z), _) | (_, Expr::Const(z)) if z == 0.0 => Expr::Const(0.0),
        (Expr::Const(1.0), b) => b,
        (a, Expr::Const(1.0)) => a,
        (Expr::Const(-1.0), b) => neg(b),
        (a, Expr::Const(-1.0)) => neg(a),
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) if y != 0.0 => Expr::Const(x / y),
        (Expr::Const(z), b) if z == 0.0 && !matches!(b, Expr::Const(_)) => Expr::Const(0.0),
        (a, Expr::Const(1.0)) => a,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub fn pow(base: Expr, k: f64) -> Expr {
    if k == 0.0 {
        return Expr::Const(1.0);
    }
    if k == 1.0 {
        return base;
    }
    if let Expr::Const(c) = base {
        let v = c.powf(k);
        if v.is_finite() {
            return Expr::Const(v);
        }
    }
    Expr::Pow(Box::new(base), k)
}

pub fn call(f: Func, arg: Expr) -> Expr {
    if let Expr::Const(c) = arg {
        if let Ok(v) = f.apply(c) {
            if v.is_finite() {
                return Expr::Const(v);
            }
        }
    }
    Expr::Call(f, Box::new(arg))
}

fn domain_err(what: impl Into<String>, at: f64) -> Error {
    Error::Domain {
        what: what.into(),
        at,
    }
}

impl Expr {
    pub fn is_const(&self) -> bool {
        matches!(self, Expr::Const(_))
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.contains_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_var() || b.contains_var()
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    /// Evaluates at `t`. Fails on log/sqrt outside their domain, division by
    /// zero, and any non-finite intermediate.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Expr::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Expr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Expr::Div(a, b) => {
                let den = b.eval(t)?;
                if den == 0.0 {
                    return Err(domain_err("division by zero", t));
                }
                a.eval(t)? / den
            }
            Expr::Pow(a, k) => {
                let base = a.eval(t)?;
                if base == 0.0 && *k < 0.0 {
                    return Err(domain_err("zero raised to a negative power", t));
                }
                if k.fract() == 0.0 && k.abs() < i32::MAX as f64 {
                    base.powi(*k as i32)
                } else if base < 0.0 {
                    return Err(domain_err("negative base with fractional exponent", t));
                } else {
                    base.powf(*k)
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(t)?).map_err(|w| domain_err(w, t))?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain_err("non-finite value", t))
        }
    }

    /// Symbolic derivative with respect to the variable.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => constant(0.0),
            Expr::Var => constant(1.0),
            Expr::Neg(a) => neg(a.derivative()),
            Expr::Add(a, b) => add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, b) => sub(
                div(a.derivative(), (**b).clone()),
                div(mul((**a).clone(), b.derivative()), pow((**b).clone(), 2.0)),
            ),
            Expr::Pow(a, k) => mul(
                mul(constant(*k), pow((**a).clone(), k - 1.0)),
                a.derivative(),
            ),
            Expr::Call(f, a) => {
                let u = (**a).clone();
                let du = a.derivative();
                let outer = match f {
                    Func::Sin => call(Func::Cos, u),
                    Func::Cos => neg(call(Func::Sin, u)),
                    Func::Sinh => call(Func::Cosh, u),
                    Func::Cosh => call(Func::Sinh, u),
                    Func::Tan => div(constant(1.0), pow(call(Func::Cos, u), 2.0)),
                    Func::Tanh => sub(constant(1.0), pow(call(Func::Tanh, u), 2.0)),
                    Func::Exp => call(Func::Exp, u),
                    Func::Log => div(constant(1.0), u),
                    Func::Sqrt => div(constant(0.5), call(Func::Sqrt, u)),
                    Func::Abs => div(u.clone(), call(Func::Abs, u)),
                };
                mul(outer, du)
            }
        }
    }

    /// Renders with `param` as the variable name. The output reparses to the
    /// same tree.
    pub fn display<'a>(&'a self, param: &'a str) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, param }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    param: &'a str,
}

impl ExprDisplay<'_> {
    fn child<'b>(&'b self, e: &'b Expr) -> ExprDisplay<'b> {
        ExprDisplay {
            expr: e,
            param: self.param,
        }
    }

    fn wrapped(&self, f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({})", self.child(e))
        } else {
            write!(f, "{}", self.child(e))
        }
    }

    fn binary(&self, f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr) -> fmt::Result {
        let p = self.expr.precedence();
        self.wrapped(f, a, a.precedence() < p)?;
        f.write_str(op)?;
        self.wrapped(f, b, b.precedence() <= p)
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str(self.param),
            Expr::Neg(a) => {
                f.write_str("-")?;
                self.wrapped(f, a, a.precedence() < 3)
            }
            Expr::Add(a, b) => self.binary(f, a, " + ", b),
            Expr::Sub(a, b) => self.binary(f, a, " - ", b),
            Expr::Mul(a, b) => self.binary(f, a, "*", b),
            Expr::Div(a, b) => self.binary(f, a, "/", b),
            Expr::Pow(a, k) => {
                self.wrapped(f, a, a.precedence() <= 4)?;
                write!(f, "^{k}")
            }
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), self.child(a)),
        }
    }
}

/// An expression together with its symbolic derivatives.
#[derive(Clone, Debug)]
pub struct DerivativeTower {
    derivs: Vec<Expr>,
}

impl DerivativeTower {
    pub fn new(e: &Expr, order: usize) -> Self {
        let mut derivs = Vec::with_capacity(order + 1);
        derivs.push(e.clone());
        for k in 0..order {
            let next = derivs[k].derivative();
            derivs.push(next);
        }
        DerivativeTower { derivs }
    }

    pub fn order(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn expr(&self, k: usize) -> &Expr {
        &self.derivs[k]
    }

    /// Value followed by the derivatives, written into `out`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        for (slot, e) in out.iter_mut().zip(&self.derivs) {
            *slot = e.eval(t)?;
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        self.derivs.iter().map(|e| e.eval(t)).collect()
    }
}

/// Value of `e` at `t` followed by its first `order` derivatives.
pub fn eval_with_derivatives(e: &Expr, t: f64, order: usize) -> Result<Vec<f64>> {
    if order > MAX_DERIVATIVE_ORDER {
        return Err(Error::InvalidInput(format!(
            "derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}"
        )));
    }
    DerivativeTower::new(e, order).eval(t)
}
