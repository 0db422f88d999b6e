use num_rational::BigRational;
use num_traits::Zero;

use super::atom::Atom;
use super::poly::{small, Expr};
use super::ExprError;

/// An unnormalized expression tree, as produced by the parser or built by
/// hand.
#[derive(Debug, Clone, PartialEq)]
pub enum RawExpr {
    Num(BigRational),
    Atom(Atom),
    Add(Vec<RawExpr>),
    Mul(Vec<RawExpr>),
    Neg(Box<RawExpr>),
    Sub(Box<RawExpr>, Box<RawExpr>),
    Div(Box<RawExpr>, Box<RawExpr>),
    Pow(Box<RawExpr>, Box<RawExpr>),
}

impl RawExpr {
    pub fn int(n: i64) -> Self {
        RawExpr::Num(BigRational::from_integer(n.into()))
    }

    pub fn pow(base: RawExpr, exp: RawExpr) -> Self {
        RawExpr::Pow(Box::new(base), Box::new(exp))
    }
}

/// Brings a tree into canonical form.
pub fn normalize(raw: &RawExpr) -> Result<Expr, ExprError> {
    Ok(match raw {
        RawExpr::Num(c) => Expr::constant(c.clone()),
        RawExpr::Atom(a) => Expr::atom(*a),
        RawExpr::Add(items) => {
            let mut acc = Expr::zero();
            for item in items {
                acc += normalize(item)?;
            }
            acc
        }
        RawExpr::Mul(items) => {
            let mut acc = Expr::one();
            for item in items {
                acc = acc * normalize(item)?;
            }
            acc
        }
        RawExpr::Neg(inner) => -normalize(inner)?,
        RawExpr::Sub(a, b) => normalize(a)? - normalize(b)?,
        RawExpr::Div(a, b) => {
            let num = normalize(a)?;
            let den = normalize(b)?;
            match den.as_constant() {
                Some(c) if c.is_zero() => return Err(ExprError::DivisionByZero),
                Some(c) => num.scale(&c.recip()),
                None if den.len() == 1 => {
                    num * den.pow_rational(num_rational::Rational64::from_integer(-1))?
                }
                None => return Err(ExprError::NonPolynomialDivision),
            }
        }
        RawExpr::Pow(base, exp) => {
            let b = normalize(base)?;
            let e = normalize(exp)?;
            let e = e.as_constant().ok_or(ExprError::NonRationalExponent)?;
            let e = small(&e).ok_or(ExprError::NonRationalExponent)?;
            b.pow_rational(e)?
        }
    })
}
