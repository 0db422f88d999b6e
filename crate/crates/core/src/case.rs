//! The nonlinearities `f(u)` for which the symmetry algebra is known.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::{big, Atom, Expr, OpaqueFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaseError {
    #[error("power:{p} is a special case; use --case {route}")]
    SpecialExponent { p: String, route: &'static str },
    #[error("unknown case selector '{0}' (arbitrary|zero|linear|power:<p>|exp|cubic)")]
    UnknownSelector(String),
    #[error("bad exponent '{0}' in power selector")]
    BadExponent(String),
}

/// `f(u)` in `Δ_H u + f(u) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NonlinearityCase {
    /// Opaque `f = F'`.
    Arbitrary,
    Zero,
    /// `f(u) = u`.
    Linear,
    /// `f(u) = u^p` with `p ∉ {0, 1, 3}`.
    Power(Rational64),
    /// `f(u) = e^u`.
    Exponential,
    /// The critical exponent `f(u) = u³`.
    Cubic,
}

impl NonlinearityCase {
    pub fn power(p: Rational64) -> Result<Self, CaseError> {
        let route = if p.is_zero() {
            Some("zero")
        } else if p.is_one() {
            Some("linear")
        } else if p == Rational64::from_integer(3) {
            Some("cubic")
        } else {
            None
        };
        match route {
            Some(route) => Err(CaseError::SpecialExponent {
                p: p.to_string(),
                route,
            }),
            None => Ok(NonlinearityCase::Power(p)),
        }
    }

    /// Cases with a fixed catalog, in a stable order; `Power` is represented
    /// by the given sample exponents.
    pub fn standard(power_samples: &[i64]) -> Vec<Self> {
        let mut out = vec![
            NonlinearityCase::Arbitrary,
            NonlinearityCase::Zero,
            NonlinearityCase::Linear,
        ];
        for &p in power_samples {
            out.push(NonlinearityCase::Power(Rational64::from_integer(p)));
        }
        out.push(NonlinearityCase::Exponential);
        out.push(NonlinearityCase::Cubic);
        out
    }

    /// `F` with `F' = f`.
    pub fn antiderivative(&self) -> Expr {
        match self {
            NonlinearityCase::Arbitrary => Expr::atom(Atom::Opaque(OpaqueFn::Antiderivative)),
            NonlinearityCase::Zero => Expr::zero(),
            NonlinearityCase::Linear => Expr::rational(1, 2) * Expr::u().pow(2),
            NonlinearityCase::Power(p) => {
                let q = *p + Rational64::one();
                if q.is_zero() {
                    Expr::atom(Atom::Opaque(OpaqueFn::Log))
                } else {
                    Expr::u_pow(q).scale(&big(q.recip()))
                }
            }
            NonlinearityCase::Exponential => Expr::atom(Atom::Opaque(OpaqueFn::Exp)),
            NonlinearityCase::Cubic => Expr::rational(1, 4) * Expr::u().pow(4),
        }
    }

    pub fn nonlinearity(&self) -> Expr {
        match self {
            NonlinearityCase::Arbitrary => Expr::atom(Atom::Opaque(OpaqueFn::Derivative(0))),
            NonlinearityCase::Zero => Expr::zero(),
            NonlinearityCase::Linear => Expr::u(),
            NonlinearityCase::Power(p) => Expr::u_pow(*p),
            NonlinearityCase::Exponential => Expr::atom(Atom::Opaque(OpaqueFn::Exp)),
            NonlinearityCase::Cubic => Expr::u().pow(3),
        }
    }

    /// `k` in the constraint `Δ_H β + kβ = 0` carried by `W_β`, in the cases
    /// that admit that family.
    pub fn beta_constraint(&self) -> Option<i64> {
        match self {
            NonlinearityCase::Zero => Some(0),
            NonlinearityCase::Linear => Some(1),
            _ => None,
        }
    }

    /// CLI selector string.
    pub fn selector(&self) -> String {
        match self {
            NonlinearityCase::Arbitrary => "arbitrary".into(),
            NonlinearityCase::Zero => "zero".into(),
            NonlinearityCase::Linear => "linear".into(),
            NonlinearityCase::Power(p) => format!("power:{p}"),
            NonlinearityCase::Exponential => "exp".into(),
            NonlinearityCase::Cubic => "cubic".into(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            NonlinearityCase::Arbitrary => "f(u) arbitrary".into(),
            NonlinearityCase::Zero => "f(u) = 0".into(),
            NonlinearityCase::Linear => "f(u) = u".into(),
            NonlinearityCase::Power(p) => format!("f(u) = u^({p})"),
            NonlinearityCase::Exponential => "f(u) = e^u".into(),
            NonlinearityCase::Cubic => "f(u) = u^3".into(),
        }
    }
}

impl fmt::Display for NonlinearityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.selector())
    }
}

impl FromStr for NonlinearityCase {
    type Err = CaseError;
    fn from_str(s: &str) -> Result<Self, CaseError> {
        match s {
            "arbitrary" => Ok(NonlinearityCase::Arbitrary),
            "zero" => Ok(NonlinearityCase::Zero),
            "linear" => Ok(NonlinearityCase::Linear),
            "exp" | "exponential" => Ok(NonlinearityCase::Exponential),
            "cubic" => Ok(NonlinearityCase::Cubic),
            other => {
                let Some(p) = other.strip_prefix("power:") else {
                    return Err(CaseError::UnknownSelector(other.to_string()));
                };
                let p: Rational64 = p
                    .trim()
                    .parse()
                    .map_err(|_| CaseError::BadExponent(p.to_string()))?;
                NonlinearityCase::power(p)
            }
        }
    }
}
