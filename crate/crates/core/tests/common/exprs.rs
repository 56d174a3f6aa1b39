use helixlab_core::dsl::{Expr, Func};
use rand::Rng;

/// Random expression in one variable that is finite and smooth on [-1, 1]:
/// square roots and logarithms only see arguments bounded away from zero and
/// divisions only positive denominators.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.2);
    if leaf {
        return if rng.gen_bool(0.6) {
            Expr::Var
        } else {
            Expr::Const((rng.gen_range(-30..=30) as f64) / 10.0)
        };
    }
    let b = |e: Expr| Box::new(e);
    let sub = |rng: &mut R| random_expr(rng, depth - 1);
    match rng.gen_range(0..9) {
        0 => Expr::Add(b(sub(rng)), b(sub(rng))),
        1 => Expr::Sub(b(sub(rng)), b(sub(rng))),
        2 => Expr::Mul(b(sub(rng)), b(sub(rng))),
        3 => {
            let den = Expr::Add(b(Expr::Const(1.5)), b(Expr::Call(Func::Sin, b(sub(rng)))));
            Expr::Div(b(sub(rng)), b(den))
        }
        4 => Expr::Neg(b(sub(rng))),
        5 => Expr::Pow(b(sub(rng)), rng.gen_range(2..=3) as f64),
        6 => {
            let f = [Func::Sin, Func::Cos, Func::Tanh][rng.gen_range(0..3)];
            Expr::Call(f, b(sub(rng)))
        }
        7 => {
            let f = [Func::Exp, Func::Sinh, Func::Cosh][rng.gen_range(0..3)];
            let bounded = Expr::Call(Func::Sin, b(sub(rng)));
            Expr::Call(f, b(bounded))
        }
        _ => {
            let f = [Func::Sqrt, Func::Log][rng.gen_range(0..2)];
            let inner = sub(rng);
            let positive = Expr::Add(b(Expr::Const(1.0)), b(Expr::Pow(b(inner), 2.0)));
            Expr::Call(f, b(positive))
        }
    }
}

/// Fourth-order central difference.
pub fn central_difference(e: &Expr, t: f64, h: f64) -> f64 {
    let f = |x: f64| e.eval(x).unwrap();
    (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
}

/// `(input, parameter, rendering or error message)`.
pub const PARSER_GOLDEN: [(&str, &str, &str); 20] = [
    ("2.5e-3*s", "s", "0.0025*s"),
    ("2*s^2 + cosh(s)", "s", "2*s^2 + cosh(s)"),
    ("-s^2", "s", "-s^2"),
    ("(-s)^2", "s", "(-s)^2"),
    ("2^3^2", "s", "2^9"),
    ("1 - (2 - s)", "s", "1 - (2 - s)"),
    ("(1 - 2) - s", "s", "1 - 2 - s"),
    ("s/(2*s)", "s", "s/(2*s)"),
    ("sqrt(2)*t", "t", "sqrt(2)*t"),
    ("exp(-s)", "s", "exp(-s)"),
    ("s^-1", "s", "s^-1"),
    ("sin(", "s", "syntax error at byte 4: expected number, identifier, '(' or '-', found end of input"),
    ("sin s", "s", "syntax error at byte 4: expected '(', found identifier `s`"),
    ("t^t", "t", "exponent at byte 2 depends on the variable"),
    ("x + 1", "s", "unknown identifier `x` at byte 0"),
    ("   ", "s", "empty expression"),
    ("2 * * s", "s", "syntax error at byte 4: expected number, identifier, '(' or '-', found '*'"),
    ("s + 1)", "s", "syntax error at byte 5: expected operator or end of input, found ')'"),
    ("s $ 2", "s", "syntax error at byte 2: expected operator or end of input, found `$`"),
    ("(s + 1", "s", "syntax error at byte 6: expected operator or ')', found end of input"),
];

pub fn render(input: &str, param: &str) -> String {
    match helixlab_core::dsl::parse_expr(input, param) {
        Ok(e) => e.display(param).to_string(),
        Err(err) => err.to_string(),
    }
}
