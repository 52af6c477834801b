//! Exact spectral theory of `n`-periodic strictly triangular difference
//! operators `L = T^{-k-1} + sum_j a_i^j T^{-j}`.
//!
//! The crate is generic over the coefficient field through [`Scalar`];
//! exact work (characteristic polynomials, divisions, commuting pairs) runs
//! over [`Rational`], while the polygon-lift sampler produces [`OperatorF64`].

pub mod bloch;
pub mod commuting;
pub mod error;
pub mod generators;
pub mod json;
pub mod matrix;
pub mod operator;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod spectral;
pub mod superperiodic;

pub use bloch::BlochSequence;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use operator::{DifferenceOperator, PeriodicSequence, TriangularShape};
pub use poly::{BivariatePolynomial, Polynomial};
pub use scalar::{ExactField, Scalar};

pub use commuting::{
    action_on_solutions, bc_curve, normalize_to_superperiodic, recover_e_q, scramble, BCCurve, DecompositionData,
    Normalization, Recovery, ScaledPair, ScalingConstant,
};
pub use generators::{generate_superperiodic, GeneratedOperator, GeneratorSource};
pub use operator::commutator;
pub use series::{bloch_multiplier, expand_infinity, expand_zero, verify_curve_series, SeriesCheck};
pub use spectral::{char_poly, char_poly_monodromy, char_poly_solution_space, monodromy_matrix, newton_report};
pub use superperiodic::{
    admissible, bloch_space_test, certify, divide, dual_pair, is_superperiodic, kernel_basis, matrix_duality_check,
    AdmissiblePair, DivisionResult, GaleDualPair, KernelBasis, Side,
};

/// Exact rational scalar used throughout the exact pipeline.
pub type Rational = num_rational::BigRational;
/// Arbitrary precision integer backing [`Rational`].
pub type Integer = num_bigint::BigInt;

pub type Operator = DifferenceOperator<Rational>;
pub type OperatorF64 = DifferenceOperator<f64>;
pub type Sequence = PeriodicSequence<Rational>;
pub type Bloch = BlochSequence<Rational>;
pub type Poly = Polynomial<Rational>;
pub type BiPoly = BivariatePolynomial<Rational>;

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(Integer::from(v))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}
