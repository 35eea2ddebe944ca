//! Shared oracles for the integration tests: a classical evaluator with
//! forward-mode derivatives, a Gauss–Legendre rule and expression
//! generators.
#![allow(dead_code)]

use nncalc::{Expr, NNReal};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ex(l: f64) -> NNReal {
    NNReal::from_log(l).unwrap()
}

/// Value and `d/du` of a classical quantity along `x = eᵘ`.
#[derive(Clone, Copy)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
    fn div(self, o: Dual) -> Dual {
        Dual { v: self.v / o.v, d: (self.d * o.v - self.v * o.d) / (o.v * o.v) }
    }
    fn ln(self) -> Dual {
        Dual { v: self.v.ln(), d: self.d / self.v }
    }
    fn exp(self) -> Dual {
        let e = self.v.exp();
        Dual { v: e, d: e * self.d }
    }
}

/// Evaluates `e` with ordinary arithmetic on positive values: `⊕` is the
/// product, `⊙` is `a^{ln b}`, and so on.
pub fn classical(e: &Expr, x: Dual) -> Dual {
    match e {
        Expr::Const(c) => Dual { v: c.value(), d: 0.0 },
        Expr::Var(_) => x,
        Expr::OPlus(l, r) => classical(l, x).mul(classical(r, x)),
        Expr::OMinus(l, r) => classical(l, x).div(classical(r, x)),
        Expr::ODot(l, r) => classical(l, x).ln().mul(classical(r, x).ln()).exp(),
        Expr::OSlash(l, r) => classical(l, x).ln().div(classical(r, x).ln()).exp(),
        Expr::NNPow(b, n) => {
            let lb = classical(b, x).ln();
            let mut p = Dual { v: 1.0, d: 0.0 };
            for _ in 0..n.unsigned_abs() {
                p = p.mul(lb);
            }
            if *n < 0 {
                p = Dual { v: 1.0, d: 0.0 }.div(p);
            }
            p.exp()
        }
        Expr::ExpOf(v) => classical(v, x).exp(),
        Expr::LnOf(v) => classical(v, x).ln(),
        Expr::CosE(v) => {
            let t = classical(v, x).ln();
            Dual { v: t.v.cos(), d: -t.v.sin() * t.d }.exp()
        }
        Expr::SinE(v) => {
            let t = classical(v, x).ln();
            Dual { v: t.v.sin(), d: t.v.cos() * t.d }.exp()
        }
    }
}

/// `(F(u), F′(u))` with `F = ln f(eᵘ)` from the classical evaluator.
pub fn oracle(e: &Expr, u: f64) -> (f64, f64) {
    let x = Dual { v: u.exp(), d: u.exp() };
    let f = classical(e, x).ln();
    (f.v, f.d)
}

/// Random expressions that are defined and pole-free for every `x`:
/// divisors and negative powers only act on `exp(..)`, whose log is
/// positive, and `ln` only sees arguments above 1.
pub fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) {
            Expr::x()
        } else {
            Expr::constant(ex(rng.gen_range(-1.0..1.0)))
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_expr(rng, depth - 1);
    match rng.gen_range(0..10) {
        0 => sub(rng).oplus(sub(rng)),
        1 => sub(rng).ominus(sub(rng)),
        2 => sub(rng).odot(sub(rng)),
        3 => sub(rng).oslash(sub(rng).exp_of()),
        4 => sub(rng).npow(rng.gen_range(0..=3)),
        5 => sub(rng).exp_of().npow(rng.gen_range(-2..=-1)),
        6 => sub(rng).exp_of(),
        7 => sub(rng)
            .exp_of()
            .oplus(Expr::constant(ex(rng.gen_range(0.1..1.0))))
            .ln_of(),
        8 => sub(rng).cos_e(),
        _ => sub(rng).sin_e(),
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Composite five-point Gauss–Legendre rule.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            NODES
                .iter()
                .zip(WEIGHTS)
                .map(|(t, w)| w * f(mid + 0.5 * h * t))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}


/// True when `F` and `F′` stay moderate on a grid over `[lo, hi]`.
pub fn tame(e: &Expr, lo: f64, hi: f64) -> bool {
    (0..=64).all(|i| {
        let (f, d) = oracle(e, lo + (hi - lo) * i as f64 / 64.0);
        f.is_finite() && d.is_finite() && f.abs() <= 50.0 && d.abs() <= 1e3
    })
}

fn constant() -> impl Strategy<Value = Expr> {
    (-1.0f64..1.0).prop_map(|l| Expr::constant(ex(l)))
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![3 => Just(Expr::x()), 2 => constant()]
}

/// Proptest counterpart of [`random_expr`]: defined for every `x > 0`.
pub fn safe_expr(depth: u32) -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.oplus(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.ominus(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.odot(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.oslash(r.exp_of())),
            (inner.clone(), 0i32..=3).prop_map(|(b, n)| b.npow(n)),
            (inner.clone(), -2i32..=-1).prop_map(|(b, n)| b.exp_of().npow(n)),
            inner.clone().prop_map(Expr::exp_of),
            (inner.clone(), 0.1f64..1.0)
                .prop_map(|(v, c)| v.exp_of().oplus(Expr::constant(ex(c))).ln_of()),
            inner.clone().prop_map(Expr::cos_e),
            inner.prop_map(Expr::sin_e),
        ]
    })
}

/// Any tree over `x`, including ones with restricted domains.
pub fn any_expr(depth: u32) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![3 => Just(Expr::x()), 2 => (-5.0f64..5.0).prop_map(|l| Expr::constant(ex(l)))];
    leaf.prop_recursive(depth, 96, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.oplus(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.ominus(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.odot(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.oslash(r)),
            (inner.clone(), -4i32..=4).prop_map(|(b, n)| b.npow(n)),
            inner.clone().prop_map(Expr::exp_of),
            inner.clone().prop_map(Expr::ln_of),
            inner.clone().prop_map(Expr::cos_e),
            inner.prop_map(Expr::sin_e),
        ]
    })
}

/// `c₀ ⊕ c₁⊙x ⊕ c₂⊙x^{{2}} ⊕ c₃⊙sin_e(x) ⊕ c₄⊙eˣ` with random constants.
pub fn random_smooth(rng: &mut ChaCha8Rng) -> Expr {
    let c = |rng: &mut ChaCha8Rng| Expr::constant(ex(rng.gen_range(-1.0..1.0)));
    c(rng)
        .oplus(c(rng).odot(Expr::x()))
        .oplus(c(rng).odot(Expr::x().npow(2)))
        .oplus(c(rng).odot(Expr::x().sin_e()))
        .oplus(c(rng).odot(Expr::x().exp_of()))
}
