//! Alexander polynomial of colored MOY graph diagrams.
//!
//! Two independent engines compute the bracket `<D|δ>`: an enumeration of
//! Kauffman states and a determinant of the Alexander matrix. A third pipeline
//! evaluates the invariant through the MOY relations. The normalized invariant
//! is positive on planar graphs, so a negative coefficient certifies that a
//! spatial graph diagram is not planar.
//!
//! Arithmetic is generic over the integer coefficient type; the aliases below
//! fix it to arbitrary precision, which is what every engine uses.

pub mod builder;
pub mod color;
pub mod diagram;
pub mod file;
pub mod fixtures;
pub mod laurent;
pub mod matrix;
pub mod normalize;
pub mod rewrite;
pub mod statesum;
pub mod verify;
pub mod weights;

pub use num_bigint::BigInt;

/// Laurent polynomial in `q = t^{1/4}` with arbitrary-precision coefficients.
pub type Laurent = laurent::LaurentPoly<BigInt>;
/// Quotient of two [`Laurent`] polynomials in lowest terms.
pub type Rational = laurent::RationalFunc<BigInt>;
/// Machine-word coefficients, for callers that know their values stay small.
pub type Laurent64 = laurent::LaurentPoly<i64>;

pub use diagram::{Diagram, DiagramError, Sign};
pub use laurent::{brace_int, quantum_int, LaurentError};

/// `[k]` with big-integer coefficients.
pub fn qint(k: i64) -> Laurent {
    quantum_int(k)
}

/// `{k}` with big-integer coefficients.
pub fn brace(k: i64) -> Laurent {
    brace_int(k)
}

/// `t^{num/2}`.
pub fn t_half(num: i64) -> Laurent {
    Laurent::t_half(num)
}
