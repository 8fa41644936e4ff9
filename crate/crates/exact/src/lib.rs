//! Exact arithmetic for cylindrical algebraic decomposition: rationals,
//! sparse multivariate polynomials, gcds and coprime bases, resultants,
//! real root isolation and real algebraic numbers.

pub mod algebraic;
pub mod gcd;
pub mod interval;
pub mod poly;
pub mod rational;
pub mod resultant;
pub mod roots;
pub mod sign;
pub mod upoly;

pub use algebraic::{AlgebraicNumber, ExtendedReal};
pub use gcd::{poly_gcd, squarefree_basis, squarefree_part};
pub use interval::Interval;
pub use poly::{poly_arith, ArithOp, Polynomial};
pub use rational::Rational;
pub use resultant::{discriminant, psc, resultant, resultant_last};
pub use roots::{isolate_real_roots, isolate_roots_at};
pub use sign::sign_at;
pub use upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("degenerate family: every input polynomial is zero")]
    DegenerateFamily,
    #[error("resultant of two zero polynomials")]
    ZeroResultant,
    #[error("curtain fibre: polynomial vanishes identically over the point")]
    CurtainFibre,
    #[error("norm of polynomial over algebraic point vanishes identically")]
    NormDegenerate,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
}
