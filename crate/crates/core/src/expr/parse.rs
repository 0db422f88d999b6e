//! Text grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := integer | ident | func '(' 'u' ')' | '(' expr ')'
//! ident   := x | y | t | u | b | β | u_J | b_J | β_J      (J over {x,y,t})
//! func    := F | f | f<k> | E | exp | ln
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::atom::{Atom, Dependent, MultiIndex, OpaqueFn};
use super::tree::{normalize, RawExpr};
use super::{Expr, ExprError, DEFAULT_MAX_ORDER};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push((pos, Tok::Int(s.parse().expect("digits"))));
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push((pos, Tok::Ident(s)));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push((pos, tok));
                i += 1;
            }
            other => {
                return Err(ExprError::Syntax {
                    position: pos,
                    expected: "a number, identifier, operator or parenthesis".into(),
                    found: format!("character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    max_order: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn error(&self, expected: &str) -> ExprError {
        ExprError::Syntax {
            position: self.offset(),
            expected: expected.to_string(),
            found: self
                .peek()
                .map(Tok::describe)
                .unwrap_or_else(|| "end of input".into()),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RawExpr, ExprError> {
        let mut items = vec![self.term()?];
        loop {
            if self.eat(&Tok::Plus) {
                items.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                items.push(RawExpr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            RawExpr::Add(items)
        })
    }

    fn term(&mut self) -> Result<RawExpr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = RawExpr::Mul(vec![acc, self.unary()?]);
            } else if self.eat(&Tok::Slash) {
                acc = RawExpr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RawExpr, ExprError> {
        if self.eat(&Tok::Minus) {
            return Ok(RawExpr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RawExpr, ExprError> {
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            let exp = self.unary()?;
            return Ok(RawExpr::pow(base, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RawExpr, ExprError> {
        let start = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RawExpr::Num(BigRational::from_integer(n)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("')'"));
                }
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(func) = opaque_by_name(&name) {
                    if !self.eat(&Tok::LParen) {
                        return Err(self.error("'(' after function name"));
                    }
                    match self.peek() {
                        Some(Tok::Ident(arg)) if arg == "u" => self.pos += 1,
                        _ => return Err(self.error("argument 'u'")),
                    }
                    if !self.eat(&Tok::RParen) {
                        return Err(self.error("')'"));
                    }
                    return Ok(RawExpr::Atom(Atom::Opaque(func)));
                }
                let atom = atom_by_name(&name).ok_or(ExprError::UnknownIdentifier {
                    position: start,
                    name: name.clone(),
                })?;
                if atom.jet_order() > self.max_order {
                    return Err(ExprError::JetOrderTooHigh {
                        atom: name,
                        order: atom.jet_order(),
                        max_order: self.max_order,
                    });
                }
                Ok(RawExpr::Atom(atom))
            }
            _ => Err(self.error("a number, identifier or '('")),
        }
    }
}

fn opaque_by_name(name: &str) -> Option<OpaqueFn> {
    match name {
        "F" => Some(OpaqueFn::Antiderivative),
        "f" => Some(OpaqueFn::Derivative(0)),
        "E" | "exp" => Some(OpaqueFn::Exp),
        "ln" => Some(OpaqueFn::Log),
        _ => {
            let k = name.strip_prefix('f')?;
            if k.is_empty() || !k.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            k.parse().ok().map(OpaqueFn::Derivative)
        }
    }
}

/// Resolves a bare identifier (`x`, `u`, `u_xt`, `b_y`, `β`) to an atom.
pub fn atom_by_name(name: &str) -> Option<Atom> {
    match name {
        "x" => return Some(Atom::X),
        "y" => return Some(Atom::Y),
        "t" => return Some(Atom::T),
        _ => {}
    }
    let (head, suffix) = match name.split_once('_') {
        Some((h, s)) if !s.is_empty() => (h, Some(s)),
        Some(_) => return None,
        None => (name, None),
    };
    let dep = match head {
        "u" => Dependent::U,
        "b" | "β" | "beta" => Dependent::Beta,
        _ => return None,
    };
    let idx = match suffix {
        Some(s) => MultiIndex::parse(s)?,
        None => MultiIndex::EMPTY,
    };
    Some(Atom::Jet(dep, idx))
}

/// Resolves any atom name accepted by the grammar, including opaque
/// functions such as `F(u)`.
pub fn parse_atom(name: &str) -> Option<Atom> {
    if let Some(head) = name.strip_suffix("(u)") {
        return opaque_by_name(head).map(Atom::Opaque);
    }
    atom_by_name(name)
}

pub fn parse_raw(text: &str, max_order: usize) -> Result<RawExpr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        max_order,
    };
    let raw = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("an operator or end of input"));
    }
    Ok(raw)
}

pub fn parse_with(text: &str, max_order: usize) -> Result<Expr, ExprError> {
    normalize(&parse_raw(text, max_order)?)
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    parse_with(text, DEFAULT_MAX_ORDER)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_term_lagrangian_fragment() {
        let e = parse("1/2*u_x^2 + 2*y*u_x*u_t").unwrap();
        let want = Expr::rational(1, 2) * Expr::u_jet("x").pow(2)
            + Expr::int(2) * Expr::y() * Expr::u_jet("x") * Expr::u_jet("t");
        assert_eq!(e, want);
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn mixed_partial_spellings_agree() {
        assert_eq!(parse("u_tx").unwrap(), parse("u_xt").unwrap());
    }

    #[test]
    fn functions_and_beta() {
        let e = parse("F(u) - f(u) + f2(u) + E(u) + β_x + b_x").unwrap();
        assert_eq!(e.len(), 5);
        assert_eq!(
            parse("ln(u)").unwrap().as_atom(),
            Some(Atom::Opaque(OpaqueFn::Log))
        );
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse("-x^2").unwrap(), -Expr::x().pow(2));
        assert_eq!(parse("2^-1*x").unwrap(), Expr::rational(1, 2) * Expr::x());
        assert_eq!(parse("u^(1/2)*u^(1/2)").unwrap(), Expr::u());
    }

    #[test]
    fn syntax_errors_carry_position_and_expectation() {
        match parse("x + * y") {
            Err(ExprError::Syntax {
                position,
                expected,
                found,
            }) => {
                assert_eq!(position, 4);
                assert!(expected.contains("identifier"));
                assert_eq!(found, "'*'");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("(x + y"),
            Err(ExprError::Syntax { position: 6, .. })
        ));
        assert!(matches!(
            parse("x y"),
            Err(ExprError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse("x # y"),
            Err(ExprError::Syntax { position: 2, .. })
        ));
    }

    #[test]
    fn unknown_identifiers_and_order_overflow() {
        assert!(matches!(
            parse("x + w"),
            Err(ExprError::UnknownIdentifier { position: 4, .. })
        ));
        assert!(matches!(
            parse("u_xq"),
            Err(ExprError::UnknownIdentifier { .. })
        ));
        assert!(matches!(
            parse("u_xxxxx"),
            Err(ExprError::JetOrderTooHigh {
                order: 5,
                max_order: 4,
                ..
            })
        ));
        assert!(parse_with("u_xxxxx", 5).is_ok());
    }

    #[test]
    fn function_argument_must_be_u() {
        assert!(matches!(parse("F(x)"), Err(ExprError::Syntax { .. })));
    }
}
