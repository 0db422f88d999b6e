//! Exact symbolic expressions over jet coordinates.
//!
//! Every [`Expr`] is kept in a unique normal form (sorted monomials with
//! nonzero exact rational coefficients), so equality checks are structural.

mod atom;
mod parse;
mod poly;
mod print;
mod tree;

use thiserror::Error;

pub use atom::{Atom, Dependent, Dir, MultiIndex, OpaqueFn};
pub use parse::{atom_by_name, parse, parse_atom, parse_raw, parse_with};
pub use poly::{Exponent, Expr, Monomial};
pub use print::{from_json, print, to_json, to_latex, to_raw, to_text, Format, JsonExpr};
pub use tree::{normalize, RawExpr};

pub(crate) use poly::big;

/// Highest jet order allowed unless a caller overrides it.
pub const DEFAULT_MAX_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("unknown identifier '{name}' at offset {position}")]
    UnknownIdentifier { position: usize, name: String },
    #[error("jet coordinate {atom} has order {order}, above the maximum {max_order}")]
    JetOrderTooHigh {
        atom: String,
        order: usize,
        max_order: usize,
    },
    #[error("exponent is not a rational constant")]
    NonRationalExponent,
    #[error("exponent {exponent} is not allowed on {atom}")]
    DisallowedExponent { atom: String, exponent: String },
    #[error("cannot substitute a non-atomic expression into {atom}^{exponent}")]
    RationalPowerSubstitution { atom: String, exponent: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a sum is not a polynomial operation")]
    NonPolynomialDivision,
    #[error("invalid expression JSON: {0}")]
    Json(String),
}
