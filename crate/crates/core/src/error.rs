use thiserror::Error;

/// Errors raised by the algebra, circuit and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible ring elements: {0} vs {1}")]
    IncompatibleRing(String, String),

    #[error("value {0} has no image in {1}")]
    NotRepresentable(String, String),

    #[error("variable index {index} out of range for {n} variables")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("polynomials over different variable counts: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} = {value} exceeds the limit {limit}")]
    SizeGuard {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("coefficient of {monomial} raised to the {m}-th power is {value}, not 0 or 1")]
    InvalidPde {
        monomial: String,
        m: u32,
        value: String,
    },

    #[error("expansion produced the non-multilinear monomial {0}")]
    NonMultilinear(String),

    #[error("numeric method did not converge: residual {0:e}")]
    NoConvergence(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: &'static str, value: u128, limit: u128) -> Result<()> {
    if value > limit {
        Err(Error::SizeGuard { what, value, limit })
    } else {
        Ok(())
    }
}
