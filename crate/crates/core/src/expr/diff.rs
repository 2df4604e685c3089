use super::{add, div, mul, neg, pow, sub, unary, BinaryOp, Expr, UnaryOp};

/// Symbolic `∂e/∂x_a`, simplified by constant folding and 0/1 identities.
pub fn differentiate(e: &Expr, a: usize) -> Expr {
    match e {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var(b) => Expr::Const(if *b == a { 1.0 } else { 0.0 }),
        Expr::Unary(op, u) => {
            let du = differentiate(u, a);
            if du.is_const(0.0) {
                return Expr::Const(0.0);
            }
            let u = (**u).clone();
            match op {
                UnaryOp::Neg => neg(du),
                UnaryOp::Sin => mul(unary(UnaryOp::Cos, u), du),
                UnaryOp::Cos => neg(mul(unary(UnaryOp::Sin, u), du)),
                UnaryOp::Exp => mul(unary(UnaryOp::Exp, u), du),
                UnaryOp::Sqrt => div(du, mul(Expr::Const(2.0), unary(UnaryOp::Sqrt, u))),
            }
        }
        Expr::Binary(op, l, r) => {
            let (dl, dr) = (differentiate(l, a), differentiate(r, a));
            let (l, r) = ((**l).clone(), (**r).clone());
            match op {
                BinaryOp::Add => add(dl, dr),
                BinaryOp::Sub => sub(dl, dr),
                BinaryOp::Mul => add(mul(dl, r), mul(l, dr)),
                BinaryOp::Div => {
                    if dr.is_const(0.0) {
                        div(dl, r)
                    } else {
                        div(sub(mul(dl, r.clone()), mul(l, dr)), pow(r, 2))
                    }
                }
            }
        }
        Expr::Pow(u, k) => {
            let du = differentiate(u, a);
            if du.is_const(0.0) {
                return Expr::Const(0.0);
            }
            mul(mul(Expr::constant(*k as f64), pow((**u).clone(), k - 1)), du)
        }
    }
}

/// All `dimension` partial derivatives.
pub fn gradient(e: &Expr, dimension: usize) -> Vec<Expr> {
    (0..dimension).map(|a| differentiate(e, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn d(s: &str, a: usize) -> String {
        differentiate(&parse(s, 8).unwrap(), a).to_string()
    }

    #[test]
    fn rule_examples() {
        assert_eq!(d("0.5*x0^2", 0), "x0");
        assert_eq!(d("sin(x0*x1)", 0), "cos(x0 * x1) * x1");
        assert_eq!(d("x0^2", 3), "0");
    }

    #[test]
    fn gradient_examples() {
        let half_sq = parse("0.5*(x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2)", 8).unwrap();
        let g: Vec<_> = gradient(&half_sq, 8).iter().map(|e| e.to_string()).collect();
        assert_eq!(g, (0..8).map(|a| format!("x{a}")).collect::<Vec<_>>());

        let c = parse("3.5", 8).unwrap();
        assert!(gradient(&c, 8).iter().all(|e| *e == Expr::Const(0.0)));

        let prod = parse("x0*x4", 8).unwrap();
        let g: Vec<_> = gradient(&prod, 8).iter().map(|e| e.to_string()).collect();
        assert_eq!(g, ["x4", "0", "0", "0", "x0", "0", "0", "0"]);
    }

    #[test]
    fn other_rules() {
        assert_eq!(d("-x1", 1), "-1");
        assert_eq!(d("exp(2*x0)", 0), "2 * exp(2 * x0)");
        assert_eq!(d("cos(x0)", 0), "-sin(x0)");
        assert_eq!(d("sqrt(x0)", 0), "1 / (2 * sqrt(x0))");
        assert_eq!(d("x0/x1", 0), "1 / x1");
        assert_eq!(d("1/x1", 1), "(-1) / x1^2");
        assert_eq!(d("x0^-1", 0), "(-1) * x0^-2");
        assert_eq!(d("x0^3", 0), "3 * x0^2");
    }
}
