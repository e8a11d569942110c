//! Arithmetic in Q_p at finite precision and exact linear algebra over it.

mod matrix;
mod number;

pub use matrix::PAdicMatrix;
pub use number::{
    factorial_valuation, power_of_prime, valuation_of_integer, Digit, Norm, PAdic,
    PrecisionPolicy, Prime,
};
