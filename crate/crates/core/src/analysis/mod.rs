//! Derivatives, integrals, antiderivatives and Taylor polynomials.

pub mod antideriv;
pub mod deriv;
pub mod integral;
pub(crate) mod quad;
pub mod taylor;

pub use antideriv::{nn_antideriv_symbolic, Antiderivative};
pub use deriv::{
    default_limit_steps, nn_deriv_conj, nn_deriv_limit, nn_deriv_n, nn_deriv_symbolic,
    DerivMethod, DerivativeResult, DEFAULT_DERIV_TOL, DEFAULT_H_LOG,
};
pub use integral::{ftc_check, ftc_second_check, ibp_check, nn_integral, nn_integral_detailed};
pub use quad::{QuadResult, DEFAULT_QUAD_TOL};
pub use taylor::{
    cos_e_series, exp_series, taylor_eval, taylor_poly, taylor_remainder_bound, TaylorPolynomial,
};
