//! Expression language for analytic curves and scalar functions.

mod document;
mod expr;
mod parser;

pub use document::{parse_curve_document, parse_scalar_document, CurveSpec, ScalarSpec};
pub use expr::{
    add, call, constant, div, eval_with_derivatives, mul, neg, pow, sub, var, DerivativeTower,
    Expr, ExprDisplay, Func, MAX_DERIVATIVE_ORDER,
};
pub use parser::{parse_constant, parse_expr, ParseError};
