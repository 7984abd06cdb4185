//! Arithmetic, calculus and Fourier analysis conjugated through a
//! bijection f: X -> R, with exact digit-level Cantor-set bijections.
//!
//! The crate keeps every algebraic value by its lower coordinate f(X)
//! as an exact rational; the element X itself is recovered on demand
//! through the bijection. Fourier coefficients, derivatives and
//! integrals of a conjugated function A = f^-1 . a . f reduce to the
//! ordinary ones of a.

pub mod arithmetic;
pub mod calculus;
pub mod complex;
pub mod digits;
pub mod dyadic;
pub mod error;
pub mod fourier;
pub mod quadrature;
pub mod rational;
pub mod sawtooth;

pub use arithmetic::{
    factorial_prime, nat, one_prime, zero_prime, ArithmeticContext, BijectionKind, NDNumber,
};
pub use calculus::{derivative, derivative_by_limit, integral, laplacian, NDFunction};
pub use complex::{cexp_i, i_prime, nd_cos, nd_exp, nd_sin, taylor_partial, NDComplex, TaylorKind};
pub use digits::{
    classify_cantor, double_digits, from_digits, halve_digits, map_digits, middle_third_forward,
    middle_third_inverse, quaternary_forward, quaternary_inverse, repeating_form,
    ternary_line_forward, ternary_line_inverse, to_digits, Branch, Membership, RepeatingDigits,
};
pub use error::{Error, Result};
pub use fourier::{
    analyze, basis_fn, parseval_check, reconstruct, reconstruct_lower_f64, scalar_product,
    spectrum_n_prime, BasisIndex, BasisKind, ComplexNDFunction, FourierSeries,
};
pub use quadrature::QuadratureSpec;
pub use sawtooth::{figure_data, gibbs_overshoot, sawtooth_nd, FigureKind, FigurePoint};
