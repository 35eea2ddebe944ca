//! Calculus of variations in the NN field.
//!
//! A problem asks for a positive `y` on `[a, b]` with fixed end values that
//! makes `ℱ[y] = ∫̃ₐᵇ L(x, y, ỹ) d̃x` stationary. Extremals satisfy
//! `L̃_y = d̃/d̃x L̃_ỹ`, which in conjugate coordinates is the classical
//! Euler–Lagrange equation of `Λ(u, Y, P) = ln L(eᵘ, e^Y, e^P)`.

mod functional;
mod lagrangian;
mod problem;
mod solve;
mod variation;

pub use functional::{
    el_reduced_form, el_residual, el_residual_profile, first_variation, functional_eval,
    write_solution_csv, ReducedForm,
};
pub use lagrangian::{nn_partial, nn_partial_numeric, Arg, Hessian, Lagrangian};
pub use problem::{Curve, Path, VariationalProblem};
pub use solve::{
    solve_direct, solve_el_bvp, solve_el_bvp_with, BvpOptions, DirectOptions, Solution,
    SolveMethod,
};
pub use variation::{
    bump, fundamental_lemma_probe, make_variation, Perturb, ProbeVerdict, Variation,
};

/// `√e ⊙ (ỹ^{{2}} ⊖ y^{{2}})`, whose conjugate action is `½(P² − Y²)` and whose
/// extremals satisfy `ỹ⁽²⁾ ⊕ y = 1`.
pub const HARMONIC_LAGRANGIAN: &str = "e^0.5 (*) (npow(yd, 2) (-) npow(y, 2))";
