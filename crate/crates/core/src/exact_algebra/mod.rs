//! Exact linear algebra over Z, Q and the cyclotomic fields Q(ζ_d).
//!
//! Signatures are computed by congruence diagonalization; the sign of each
//! pivot is certified by interval evaluation at ζ_d = e^{2πi/d}, refined until
//! the enclosure excludes zero.

mod cyclotomic;
mod hermitian;
mod interval;
mod matrix;
mod root;
mod snf;

pub use cyclotomic::{cyclotomic_arith, cyclotomic_polynomial, euler_phi, ArithOp, CyclotomicScalar};
pub use hermitian::{
    hermitian_signature, hermitian_signature_with, rank_over_cyclotomic, HermitianForm, SignatureResult,
};
pub use interval::{certified_sign, certified_sign_with, DEFAULT_PRECISION_BITS};
pub use matrix::{CycloMatrix, IntegerMatrix, Matrix};
pub use root::{prime_power_base, ParseRootError, RootOfUnity};
pub use snf::{smith_normal_form, SmithNormalForm};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar is not in the maximal real subfield")]
    NotReal,
    #[error("matrix is not Hermitian at entry ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}
