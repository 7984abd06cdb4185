use num::BigRational;
use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{value} is not an element of the Cantor set (digit {digit} in base {base})")]
    NotInCantorSet {
        value: BigRational,
        base: u32,
        digit: u32,
    },
    #[error("operands belong to different arithmetic contexts")]
    ContextMismatch,
    #[error("division by 0' (divisor has lower coordinate 0)")]
    DivisionByZeroPrime,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("difference quotients did not converge (last correction {last_correction})")]
    NonConvergent { last_correction: f64 },
    #[error("derivative extrapolation diverged (residual {residual})")]
    NonDifferentiable { residual: f64 },
    #[error("quadrature failed to stabilize at tolerance {tol} after {panels} panels")]
    QuadratureNonConvergent { tol: f64, panels: usize },
    #[error("operation not supported for this context: {0}")]
    UnsupportedContext(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
