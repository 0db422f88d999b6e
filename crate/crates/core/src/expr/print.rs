//! Text, LaTeX and JSON renderings of [`Expr`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::atom::Atom;
use super::parse::parse_atom;
use super::poly::{big, small, Exponent, Monomial};
use super::tree::RawExpr;
use super::{Expr, ExprError};

/// Output format selector shared by the printers and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (text|latex|json)")),
        }
    }
}

pub fn print(e: &Expr, fmt: Format) -> String {
    match fmt {
        Format::Text => to_text(e),
        Format::Latex => to_latex(e),
        Format::Json => serde_json::to_string(&to_json(e)).expect("serializable"),
    }
}

fn text_exponent(e: &Exponent) -> String {
    if e.is_integer() && *e.numer() > 0 {
        e.numer().to_string()
    } else {
        format!("({e})")
    }
}

fn text_monomial(m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(a, e)| {
            if e.is_one() {
                a.text_name()
            } else {
                format!("{}^{}", a.text_name(), text_exponent(e))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Flat, fully expanded rendering accepted back by the parser.
pub fn to_text(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&text_monomial(m));
        } else {
            out.push_str(&format!("{}*{}", mag, text_monomial(m)));
        }
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_text(self))
    }
}

fn latex_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn latex_monomial(m: &Monomial) -> String {
    let mut out = String::new();
    for (a, e) in m.factors() {
        let name = a.latex_name();
        if e.is_one() {
            out.push_str(&name);
            continue;
        }
        let exp = latex_rational(&big(*e));
        match a {
            Atom::Opaque(_) => out.push_str(&format!("\\left({name}\\right)^{{{exp}}}")),
            _ => out.push_str(&format!("{name}^{{{exp}}}")),
        }
    }
    out
}

/// Renders `c·m` with an explicit leading sign character.
fn latex_signed_term(c: &BigRational, m: &Monomial, first: bool) -> String {
    let sign = if c.is_negative() {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    let mag = c.abs();
    let body = if m.is_one() {
        latex_rational(&mag)
    } else if mag.is_one() {
        latex_monomial(m)
    } else {
        format!("{}{}", latex_rational(&mag), latex_monomial(m))
    };
    format!("{sign}{body}")
}

fn content(poly: &Expr) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in poly.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    let g = BigRational::new(num, den);
    match poly.terms().next() {
        Some((_, c)) if c.is_negative() => -g,
        _ => g,
    }
}

/// LaTeX rendering that factors the polynomial coefficient of each distinct
/// jet part, e.g. `4(x^{2}+y^{2})u_{tt}`.
pub fn to_latex(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (rest, poly) in e.group_by_nonbase() {
        if rest.is_one() || poly.len() == 1 {
            for (m, c) in poly.terms() {
                out.push_str(&latex_signed_term(c, &m.mul(&rest), first));
                first = false;
            }
            continue;
        }
        let g = content(&poly);
        let inner = poly.scale(&g.recip());
        let mut inner_s = String::new();
        for (i, (m, c)) in inner.terms().enumerate() {
            inner_s.push_str(&latex_signed_term(c, m, i == 0));
        }
        let sign = if g.is_negative() {
            "-"
        } else if first {
            ""
        } else {
            "+"
        };
        let mag = g.abs();
        let lead = if mag.is_one() {
            String::new()
        } else {
            latex_rational(&mag)
        };
        out.push_str(&format!("{sign}{lead}({inner_s}){}", latex_monomial(&rest)));
        first = false;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonFactor {
    pub atom: String,
    pub pow: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub factors: Vec<JsonFactor>,
}

/// Wire form `{"terms":[{"coeff":"p/q","factors":[{"atom":"u_xt","pow":"1"}]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonExpr {
    pub terms: Vec<JsonTerm>,
}

pub fn to_json(e: &Expr) -> JsonExpr {
    JsonExpr {
        terms: e
            .terms()
            .map(|(m, c)| JsonTerm {
                coeff: c.to_string(),
                factors: m
                    .factors()
                    .iter()
                    .map(|(a, p)| JsonFactor {
                        atom: a.text_name(),
                        pow: p.to_string(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn from_json(j: &JsonExpr) -> Result<Expr, ExprError> {
    let mut out = Expr::zero();
    for term in &j.terms {
        let coeff: BigRational = term
            .coeff
            .parse()
            .map_err(|_| ExprError::Json(format!("bad coefficient '{}'", term.coeff)))?;
        let mut factors = Vec::with_capacity(term.factors.len());
        for f in &term.factors {
            let atom = parse_atom(&f.atom)
                .ok_or_else(|| ExprError::Json(format!("unknown atom '{}'", f.atom)))?;
            let pow: BigRational = f
                .pow
                .parse()
                .map_err(|_| ExprError::Json(format!("bad exponent '{}'", f.pow)))?;
            let pow = small(&pow).ok_or_else(|| ExprError::Json("exponent overflow".into()))?;
            factors.push((atom, pow));
        }
        out.add_term(Monomial::from_factors(factors)?, coeff);
    }
    Ok(out)
}

/// The tree `Σ c·Π a^e` of a normal form; `normalize` maps it back to `e`.
pub fn to_raw(e: &Expr) -> RawExpr {
    RawExpr::Add(
        e.terms()
            .map(|(m, c)| {
                let mut items = vec![RawExpr::Num(c.clone())];
                for (a, p) in m.factors() {
                    items.push(RawExpr::pow(RawExpr::Atom(*a), RawExpr::Num(big(*p))));
                }
                RawExpr::Mul(items)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn latex_factors_polynomial_coefficients() {
        let e = parse("4*(x^2+y^2)*u_tt").unwrap();
        assert_eq!(to_latex(&e), "4(x^{2}+y^{2})u_{tt}");
    }

    #[test]
    fn latex_single_terms_and_fractions() {
        let e = parse("1/2*u_x^2 - 2*x*u_y*u_t - F(u)").unwrap();
        assert_eq!(to_latex(&e), "\\frac{1}{2}u_{x}^{2}-2xu_{y}u_{t}-F(u)");
        assert_eq!(
            to_latex(&parse("-x*b_x - y*b_x").unwrap()),
            "-(x+y)\\beta_{x}"
        );
        assert_eq!(to_latex(&Expr::zero()), "0");
    }

    #[test]
    fn text_round_trips_through_parser() {
        for src in [
            "0",
            "-1/2*u_x^2 + 2*y*u_x*u_t - F(u)",
            "u^(1/2) - u^(-1) + 3*f2(u)*b_xt",
            "x^3*y - 7/3",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&to_text(&e)).unwrap(), e, "{src}");
        }
    }

    #[test]
    fn json_wire_shape() {
        let e = parse("2/3*u_xt").unwrap();
        let s = print(&e, Format::Json);
        assert_eq!(
            s,
            r#"{"terms":[{"coeff":"2/3","factors":[{"atom":"u_xt","pow":"1"}]}]}"#
        );
        let back: JsonExpr = serde_json::from_str(&s).unwrap();
        assert_eq!(from_json(&back).unwrap(), e);
        let bad = JsonExpr {
            terms: vec![JsonTerm {
                coeff: "1".into(),
                factors: vec![JsonFactor {
                    atom: "w".into(),
                    pow: "1".into(),
                }],
            }],
        };
        assert!(from_json(&bad).is_err());
    }
}
