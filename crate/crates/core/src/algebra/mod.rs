//! Coefficient fields, monomials, polynomials and graded matrices.

pub mod field;
pub mod matrix;
pub mod monomial;
pub mod polynomial;
pub mod text;

pub use field::{F32003, Field, FieldTag, Fp, Rational};
pub use matrix::Matrix;
pub use monomial::{monomial_cmp, Monomial, TermOrder};
pub use polynomial::{default_names, poly_combine, CombineOp, Homogeneity, Polynomial};
pub use text::{parse_polynomial, TextError};
