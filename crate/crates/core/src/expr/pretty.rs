use super::Expr;
use crate::real::NNReal;

const ADDITIVE: u8 = 1;
const MULTIPLICATIVE: u8 = 2;
const ATOM: u8 = 3;

impl Expr {
    /// Renders the expression in the parser's grammar with the minimal
    /// parenthesization that re-parses to the same tree.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        write_expr(self, &mut out);
        out
    }
}

fn level(e: &Expr) -> u8 {
    match e {
        Expr::OPlus(..) | Expr::OMinus(..) => ADDITIVE,
        Expr::ODot(..) | Expr::OSlash(..) => MULTIPLICATIVE,
        _ => ATOM,
    }
}

fn write_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Const(c) => out.push_str(&render_const(*c)),
        Expr::Var(name) => out.push_str(name),
        Expr::OPlus(l, r) => write_binary(l, "(+)", r, ADDITIVE, out),
        Expr::OMinus(l, r) => write_binary(l, "(-)", r, ADDITIVE, out),
        Expr::ODot(l, r) => write_binary(l, "(*)", r, MULTIPLICATIVE, out),
        Expr::OSlash(l, r) => write_binary(l, "(/)", r, MULTIPLICATIVE, out),
        Expr::NNPow(b, n) => {
            out.push_str("npow(");
            write_expr(b, out);
            out.push_str(&format!(", {n})"));
        }
        Expr::ExpOf(u) => write_call("exp", u, out),
        Expr::LnOf(u) => write_call("ln", u, out),
        Expr::CosE(u) => write_call("cose", u, out),
        Expr::SinE(u) => write_call("sine", u, out),
    }
}

fn write_call(name: &str, arg: &Expr, out: &mut String) {
    out.push_str(name);
    out.push('(');
    write_expr(arg, out);
    out.push(')');
}

fn write_binary(l: &Expr, op: &str, r: &Expr, prec: u8, out: &mut String) {
    write_operand(l, level(l) < prec, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_operand(r, level(r) <= prec, out);
}

fn write_operand(e: &Expr, paren: bool, out: &mut String) {
    if paren {
        out.push('(');
        write_expr(e, out);
        out.push(')');
    } else {
        write_expr(e, out);
    }
}

/// `1`, `e`, a short decimal when it round-trips bit-exactly, else `e^<log>`.
fn render_const(c: NNReal) -> String {
    if c.log() == 1.0 {
        return "e".into();
    }
    let value = c.value();
    if value.is_finite() && value > 0.0 {
        for digits in 0..9 {
            let Ok(rounded) = format!("{value:.digits$e}").parse::<f64>() else {
                continue;
            };
            let s = format!("{rounded}");
            if s.len() <= 10 && !s.contains('e') && s.parse::<f64>().map(f64::ln) == Ok(c.log()) {
                return s;
            }
        }
    }
    c.to_log_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn renders_examples() {
        assert_eq!(Expr::x().oplus(Expr::Const(NNReal::ONE)).pretty(), "x (+) e");
        assert_eq!(Expr::x().sin_e().pretty(), "sine(x)");
        assert_eq!(Expr::Const(NNReal::ZERO).ominus(Expr::x()).pretty(), "1 (-) x");
        assert_eq!(
            Expr::Const(NNReal::from_log(0.5).unwrap()).odot(Expr::x()).pretty(),
            "e^0.5 (*) x"
        );
        assert_eq!(Expr::x().npow(-3).pretty(), "npow(x, -3)");
    }

    #[test]
    fn parenthesizes_minimally() {
        for text in [
            "x (-) (e (-) x)",
            "(x (+) e) (*) x",
            "x (/) (x (*) e)",
            "x (+) e (*) x",
            "exp(x (+) e)",
            "2 (*) npow(x (+) 3, 2)",
        ] {
            assert_eq!(parse(text).unwrap().pretty(), text);
        }
    }
}
