//! The exp-generated field `(ℝ⁺, ⊕, ⊙)`.
//!
//! With generator `α = exp` the arithmetic on positive reals is
//!
//! ```text
//! x ⊕ y = x·y        x ⊖ y = x/y
//! x ⊙ y = x^{ln y}   x ⊘ y = x^{1/ln y}   (y ≠ 1)
//! ```
//!
//! The value `1` is the additive identity (the NN zero) and `e` the
//! multiplicative one. [`NNReal`] stores the natural logarithm of the value,
//! so `⊕` is addition of logs and `⊙` multiplication of logs, and numbers
//! such as `e^{e²}` stay representable.

use std::fmt;
use std::str::FromStr;

use crate::error::{NNError, Result};

/// A strictly positive real number, stored as its natural logarithm.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct NNReal {
    log: f64,
}

impl NNReal {
    /// The NN zero, the value `1`.
    pub const ZERO: NNReal = NNReal { log: 0.0 };
    /// The NN one, the value `e`.
    pub const ONE: NNReal = NNReal { log: 1.0 };

    /// Builds a value from its natural logarithm.
    pub fn from_log(log: f64) -> Result<Self> {
        if log.is_finite() {
            Ok(NNReal { log })
        } else {
            Err(NNError::Range(format!("log-value {log} is not finite")))
        }
    }

    /// Builds a value from a plain positive real.
    pub fn from_value(value: f64) -> Result<Self> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(NNError::Domain(format!(
                "{value} is not a finite positive real"
            )));
        }
        Ok(NNReal { log: value.ln() })
    }

    /// `e^c`, the embedding of a classical real into the NN field.
    pub fn exp_of(c: f64) -> Result<Self> {
        Self::from_log(c)
    }

    #[inline]
    pub fn log(self) -> f64 {
        self.log
    }

    /// The represented value; may overflow to `inf` or underflow to `0`
    /// for extreme log-values.
    #[inline]
    pub fn value(self) -> f64 {
        self.log.exp()
    }

    pub fn is_nn_zero(self) -> bool {
        self.log == 0.0
    }

    /// `x ⊕ y = x·y`.
    pub fn oplus(self, rhs: NNReal) -> Result<NNReal> {
        Self::checked(self.log + rhs.log, "⊕")
    }

    /// `x ⊖ y = x/y`.
    pub fn ominus(self, rhs: NNReal) -> Result<NNReal> {
        Self::checked(self.log - rhs.log, "⊖")
    }

    /// `x ⊙ y = x^{ln y}`.
    pub fn odot(self, rhs: NNReal) -> Result<NNReal> {
        Self::checked(self.log * rhs.log, "⊙")
    }

    /// `x ⊘ y = x^{1/ln y}`, undefined for `y = 1`.
    pub fn oslash(self, rhs: NNReal) -> Result<NNReal> {
        if rhs.log == 0.0 {
            return Err(NNError::DivisionByOne);
        }
        Self::checked(self.log / rhs.log, "⊘")
    }

    /// NN absolute value `[[x]]`: `x` when `x ≥ 1`, `1 ⊖ x` otherwise.
    pub fn abs(self) -> NNReal {
        NNReal {
            log: self.log.abs(),
        }
    }

    /// NN metric `d(x, y) = [[x ⊖ y]]`.
    pub fn dist(self, other: NNReal) -> NNReal {
        NNReal {
            log: (self.log - other.log).abs(),
        }
    }

    /// NN power `x^{{n}}`: the n-fold `⊙` product, `x^{{0}} = e`, and
    /// negative exponents through [`NNReal::inv`].
    pub fn pow(self, n: i32) -> Result<NNReal> {
        if n < 0 && self.log == 0.0 {
            return Err(NNError::DivisionByOne);
        }
        Self::checked(self.log.powi(n), "NN power")
    }

    /// NN reciprocal `a^{{-1}} = e ⊘ a`.
    pub fn inv(self) -> Result<NNReal> {
        NNReal::ONE.oslash(self)
    }

    /// `e^c ⊙ x = x^c`. Realizes real coefficients such as `e^{1/k!}`.
    pub fn scale(self, c: f64) -> Result<NNReal> {
        Self::checked(c * self.log, "scale")
    }

    /// Approximate equality in log space.
    pub fn approx_eq(self, other: NNReal, tol: f64) -> bool {
        (self.log - other.log).abs() <= tol
    }

    /// Canonical, round-trippable rendering `e^<log>`.
    pub fn to_log_string(self) -> String {
        format!("e^{}", self.log)
    }

    fn checked(log: f64, op: &str) -> Result<NNReal> {
        if log.is_finite() {
            Ok(NNReal { log })
        } else {
            Err(NNError::Range(format!("{op} overflowed the log range")))
        }
    }
}

/// NN sum `a₀ ⊕ ⋯ ⊕ aₙ`; the empty sum is `1`.
pub fn nn_sum<I: IntoIterator<Item = NNReal>>(terms: I) -> Result<NNReal> {
    terms
        .into_iter()
        .try_fold(NNReal::ZERO, |acc, t| acc.oplus(t))
}

impl fmt::Display for NNReal {
    /// Plain decimal value; use `{:#}` for the canonical log form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            write!(f, "{}", self.to_log_string())
        } else {
            write!(f, "{}", self.value())
        }
    }
}

impl FromStr for NNReal {
    type Err = NNError;

    /// Accepts `1.5`, `e` and `e^2.5` (signed exponent).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || NNError::Syntax {
            offset: 0,
            message: format!("`{s}` is not a positive real literal"),
        };
        if s == "e" {
            return Ok(NNReal::ONE);
        }
        if let Some(rest) = s.strip_prefix("e^") {
            let log: f64 = rest.trim().parse().map_err(|_| bad())?;
            return NNReal::from_log(log);
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        if !(v > 0.0) {
            return Err(bad());
        }
        NNReal::from_value(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: f64) -> NNReal {
        NNReal::from_value(x).unwrap()
    }
    fn ex(l: f64) -> NNReal {
        NNReal::from_log(l).unwrap()
    }
    fn close(a: NNReal, b: NNReal) -> bool {
        a.approx_eq(b, 1e-12)
    }

    #[test]
    fn oplus_examples() {
        assert!(close(v(2.0).oplus(v(3.0)).unwrap(), v(6.0)));
        assert_eq!(v(2.5).oplus(NNReal::ZERO).unwrap(), v(2.5));
        assert_eq!(NNReal::ONE.oplus(NNReal::ONE).unwrap(), ex(2.0));
    }

    #[test]
    fn ominus_examples() {
        assert!(close(v(6.0).ominus(v(3.0)).unwrap(), v(2.0)));
        assert_eq!(v(4.2).ominus(v(4.2)).unwrap(), NNReal::ZERO);
        assert_eq!(NNReal::ZERO.ominus(NNReal::ONE).unwrap(), ex(-1.0));
    }

    #[test]
    fn odot_examples() {
        assert_eq!(v(2.0).odot(NNReal::ONE).unwrap(), v(2.0));
        assert_eq!(ex(2.0).odot(ex(3.0)).unwrap(), ex(6.0));
        // exp((ln 2)^2)
        let got = v(2.0).odot(v(2.0)).unwrap().value();
        assert!((got - 1.616_806_672_241_674_5).abs() < 1e-12, "{got}");
    }

    #[test]
    fn oslash_examples() {
        assert!(close(v(8.0).oslash(NNReal::ONE).unwrap(), v(8.0)));
        assert_eq!(ex(6.0).oslash(ex(3.0)).unwrap(), ex(2.0));
        assert_eq!(v(3.0).oslash(NNReal::ZERO), Err(NNError::DivisionByOne));
    }

    #[test]
    fn abs_and_dist() {
        assert!(close(v(3.0).abs(), v(3.0)));
        assert!(close(v(0.5).abs(), v(2.0)));
        assert_eq!(NNReal::ZERO.abs(), NNReal::ZERO);
        assert_eq!(v(2.0).dist(v(2.0)), NNReal::ZERO);
        assert_eq!(ex(2.0).dist(NNReal::ONE), NNReal::ONE);
        assert!(close(v(0.5).dist(v(2.0)), v(4.0)));
    }

    #[test]
    fn powers_and_inverse() {
        assert_eq!(v(7.0).pow(0).unwrap(), NNReal::ONE);
        assert_eq!(NNReal::ZERO.pow(0).unwrap(), NNReal::ONE);
        assert!((v(2.0).pow(2).unwrap().value() - 1.616_806_672_241_674_5).abs() < 1e-12);
        assert!(close(ex(3.0).pow(-1).unwrap(), ex(1.0 / 3.0)));
        assert_eq!(NNReal::ZERO.pow(-2), Err(NNError::DivisionByOne));
        assert!(close(ex(2.0).inv().unwrap(), ex(0.5)));
        assert!(close(v(5.0).odot(v(5.0).inv().unwrap()).unwrap(), NNReal::ONE));
        assert!(close(v(3.0).inv().unwrap().inv().unwrap(), v(3.0)));
        assert_eq!(NNReal::ZERO.inv(), Err(NNError::DivisionByOne));
    }

    #[test]
    fn scale_and_sum() {
        assert_eq!(NNReal::ONE.scale(2.0).unwrap(), ex(2.0));
        assert_eq!(v(9.0).scale(0.0).unwrap(), NNReal::ZERO);
        assert_eq!(ex(4.0).scale(0.5).unwrap(), ex(2.0));
        assert_eq!(nn_sum([]).unwrap(), NNReal::ZERO);
        assert!(close(nn_sum([v(2.0), v(3.0), v(4.0)]).unwrap(), v(24.0)));
        let a = v(3.7);
        let neg = NNReal::ZERO.ominus(a).unwrap();
        assert!(close(nn_sum([a, neg]).unwrap(), NNReal::ZERO));
    }

    #[test]
    fn overflow_is_range_error() {
        let big = ex(1e308);
        assert!(matches!(big.oplus(big), Err(NNError::Range(_))));
        assert!(matches!(big.odot(big), Err(NNError::Range(_))));
        assert!(matches!(NNReal::from_log(f64::NAN), Err(NNError::Range(_))));
    }

    #[test]
    fn parse_and_render() {
        assert_eq!("e".parse::<NNReal>().unwrap(), NNReal::ONE);
        assert_eq!("e^2.5".parse::<NNReal>().unwrap(), ex(2.5));
        assert_eq!("e^-1".parse::<NNReal>().unwrap(), ex(-1.0));
        assert_eq!("1.5".parse::<NNReal>().unwrap(), v(1.5));
        assert!("0".parse::<NNReal>().is_err());
        assert!("-2".parse::<NNReal>().is_err());
        assert!("e^".parse::<NNReal>().is_err());
        assert_eq!(format!("{:#}", ex(0.25)), "e^0.25");
        assert_eq!(format!("{}", v(2.0)), "2");
    }

    #[test]
    fn triangle_inequality_counterexample_for_additive_form() {
        // d(e², 1) = e² exceeds d(e², e) + d(e, 1) = 2e, but not their ⊕.
        let (x, y, z) = (ex(2.0), NNReal::ONE, NNReal::ZERO);
        assert!(x.dist(z).value() > x.dist(y).value() + y.dist(z).value());
        assert!(x.dist(z) <= x.dist(y).oplus(y.dist(z)).unwrap());
    }

    proptest! {
        #[test]
        fn log_string_round_trips(l in -1e6f64..1e6) {
            let x = ex(l);
            prop_assert_eq!(x.to_log_string().parse::<NNReal>().unwrap(), x);
        }

        #[test]
        fn value_round_trip(l in -300f64..300.0) {
            let x = ex(l);
            let back = NNReal::from_value(x.value()).unwrap();
            prop_assert!((back.log() - l).abs() <= 4.0 * f64::EPSILON * l.abs().max(1.0));
        }

        #[test]
        fn pow_matches_repeated_odot(l in -3f64..3.0, n in 0i32..=6) {
            let x = ex(l);
            let mut folded = NNReal::ONE;
            for _ in 0..n {
                folded = folded.odot(x).unwrap();
            }
            prop_assert!(x.pow(n).unwrap().approx_eq(folded, 1e-12 * folded.log().abs().max(1.0)));
        }
    }
}
