//! Canonical sums of rational multiples of atom products.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::convert::Infallible;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::atom::{Atom, Dependent};
use super::ExprError;

/// Exponent of an atom inside a monomial.
pub type Exponent = Rational64;

pub(crate) fn exponent_allowed(atom: &Atom, e: &Exponent) -> bool {
    atom.is_u() || (e.is_integer() && *e.numer() > 0)
}

pub(crate) fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub(crate) fn small(r: &BigRational) -> Option<Rational64> {
    Some(Rational64::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

/// A product of atoms with nonzero exponents, sorted by atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Atom, Exponent)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            factors: Vec::new(),
        }
    }

    pub fn atom(a: Atom) -> Self {
        Monomial {
            factors: vec![(a, Exponent::one())],
        }
    }

    /// Builds a monomial from arbitrary factors, merging repeated atoms.
    pub fn from_factors<I>(factors: I) -> Result<Self, ExprError>
    where
        I: IntoIterator<Item = (Atom, Exponent)>,
    {
        let mut map: BTreeMap<Atom, Exponent> = BTreeMap::new();
        for (a, e) in factors {
            *map.entry(a).or_insert_with(Exponent::zero) += e;
        }
        let mut out = Vec::with_capacity(map.len());
        for (a, e) in map {
            if e.is_zero() {
                continue;
            }
            if !exponent_allowed(&a, &e) {
                return Err(ExprError::DisallowedExponent {
                    atom: a.text_name(),
                    exponent: e.to_string(),
                });
            }
            out.push((a, e));
        }
        Ok(Monomial { factors: out })
    }

    pub fn factors(&self) -> &[(Atom, Exponent)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, a: &Atom) -> Exponent {
        self.factors
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|i| self.factors[i].1)
            .unwrap_or_else(|_| Exponent::zero())
    }

    fn checked_mul(&self, other: &Monomial) -> Result<Monomial, ExprError> {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if !e.is_zero() {
                    if !exponent_allowed(&a[i].0, &e) {
                        return Err(ExprError::DisallowedExponent {
                            atom: a[i].0.text_name(),
                            exponent: e.to_string(),
                        });
                    }
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(Monomial { factors: out })
    }

    /// Product of two monomials. Only `u` may carry negative or fractional
    /// exponents, which never cancels into an invalid exponent elsewhere.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other)
            .expect("product of valid monomials is valid")
    }

    /// Monomial raised to a rational power, if every resulting exponent is
    /// permitted.
    pub fn pow(&self, e: Exponent) -> Result<Monomial, ExprError> {
        Monomial::from_factors(self.factors.iter().map(|(a, k)| (*a, *k * e)))
    }

    /// The monomial with the factor `a` removed entirely.
    pub fn without(&self, a: &Atom) -> Monomial {
        Monomial {
            factors: self
                .factors
                .iter()
                .filter(|(b, _)| b != a)
                .copied()
                .collect(),
        }
    }

    fn with_exponent(&self, idx: usize, e: Exponent) -> Monomial {
        let mut factors = self.factors.clone();
        if e.is_zero() {
            factors.remove(idx);
        } else {
            factors[idx].1 = e;
        }
        Monomial { factors }
    }

    /// Split into the part made of base variables and the rest.
    pub fn split_base(&self) -> (Monomial, Monomial) {
        let (base, rest): (Vec<_>, Vec<_>) = self
            .factors
            .iter()
            .partition(|(a, _)| matches!(a, Atom::Base(_)));
        (Monomial { factors: base }, Monomial { factors: rest })
    }

    /// Total degree over base variables.
    pub fn base_degree(&self) -> i64 {
        self.factors
            .iter()
            .filter(|(a, _)| matches!(a, Atom::Base(_)))
            .map(|(_, e)| e.to_integer())
            .sum()
    }
}

/// A canonical exact expression: a finite sum of rational multiples of
/// distinct monomials, with no zero coefficients.
///
/// Structural equality of two `Expr` values is mathematical equality in the
/// term algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Expr::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(BigRational::from_integer(n.into()))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Expr::constant(BigRational::new(n.into(), d.into()))
    }

    pub fn atom(a: Atom) -> Self {
        Expr::term(Monomial::atom(a), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn x() -> Self {
        Expr::atom(Atom::X)
    }

    pub fn y() -> Self {
        Expr::atom(Atom::Y)
    }

    pub fn t() -> Self {
        Expr::atom(Atom::T)
    }

    pub fn u() -> Self {
        Expr::atom(Atom::U)
    }

    pub fn u_jet(suffix: &str) -> Self {
        Expr::atom(Atom::u_jet(suffix))
    }

    pub fn beta() -> Self {
        Expr::atom(Atom::BETA)
    }

    pub fn beta_jet(suffix: &str) -> Self {
        Expr::atom(Atom::beta_jet(suffix))
    }

    /// `u` raised to a rational power.
    pub fn u_pow(e: Exponent) -> Self {
        if e.is_zero() {
            return Expr::one();
        }
        Expr::term(
            Monomial {
                factors: vec![(Atom::U, e)],
            },
            BigRational::one(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The value of a constant expression.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The single atom this expression consists of, if it is exactly `a`.
    pub fn as_atom(&self) -> Option<Atom> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        match m.factors() {
            [(a, e)] if e.is_one() && c.is_one() => Some(*a),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Expr {
        let mut out = Expr::zero();
        for (n, k) in &self.terms {
            out.add_term(n.mul(m), k * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Rational power. Integer exponents `≥ 0` always succeed; anything else
    /// needs a single-term expression whose factors admit the exponent.
    pub fn pow_rational(&self, e: Exponent) -> Result<Expr, ExprError> {
        if e.is_integer() && *e.numer() >= 0 {
            return Ok(self.pow(*e.numer() as u32));
        }
        if self.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if self.terms.len() != 1 {
            return Err(ExprError::DisallowedExponent {
                atom: "(sum)".to_string(),
                exponent: e.to_string(),
            });
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let coeff = if c.is_one() {
            BigRational::one()
        } else if e.is_integer() {
            let k = e.numer().unsigned_abs() as usize;
            num_traits::pow(c.clone(), k).recip()
        } else {
            return Err(ExprError::DisallowedExponent {
                atom: "(coefficient)".to_string(),
                exponent: e.to_string(),
            });
        };
        Ok(Expr::term(m.pow(e)?, coeff))
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(a, _)| *a))
            .collect()
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| !m.exponent_of(a).is_zero())
    }

    pub fn contains_dependent(&self, dep: Dependent) -> bool {
        self.atoms().iter().any(|a| a.dependent() == Some(dep))
    }

    /// Highest jet order of the dependent symbol in any atom.
    pub fn jet_order(&self, dep: Dependent) -> usize {
        self.atoms()
            .iter()
            .filter(|a| a.dependent() == Some(dep))
            .map(|a| a.jet_order())
            .max()
            .unwrap_or(0)
    }

    /// Applies the derivation determined by values on atoms.
    ///
    /// `d(a)` gives the image of atom `a`, `None` meaning zero; the result is
    /// extended by the Leibniz rule including rational powers.
    pub fn try_derivation<E, F>(&self, mut d: F) -> Result<Expr, E>
    where
        F: FnMut(&Atom) -> Result<Option<Expr>, E>,
    {
        let mut cache: HashMap<Atom, Option<Expr>> = HashMap::new();
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            for (i, (a, k)) in m.factors().iter().enumerate() {
                let da = match cache.get(a) {
                    Some(v) => v.clone(),
                    None => {
                        let v = d(a)?.filter(|e| !e.is_zero());
                        cache.insert(*a, v.clone());
                        v
                    }
                };
                let Some(da) = da else { continue };
                let rest = m.with_exponent(i, *k - Exponent::one());
                let scale = c * big(*k);
                for (n, kn) in &da.terms {
                    out.add_term(rest.mul(n), &scale * kn);
                }
            }
        }
        Ok(out)
    }

    pub fn derivation<F>(&self, mut d: F) -> Expr
    where
        F: FnMut(&Atom) -> Option<Expr>,
    {
        self.try_derivation::<Infallible, _>(|a| Ok(d(a)))
            .unwrap_or_else(|e| match e {})
    }

    /// Formal partial derivative treating every atom as independent.
    pub fn partial(&self, a: &Atom) -> Expr {
        self.derivation(|b| (b == a).then(Expr::one))
    }

    /// Replaces every occurrence of `a` by `v`.
    ///
    /// Only nonnegative integer powers of `a` expand; other powers (of `u`)
    /// require `v` to be a single atom.
    pub fn substitute(&self, a: &Atom, v: &Expr) -> Result<Expr, ExprError> {
        let mut powers: HashMap<Exponent, Expr> = HashMap::new();
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let k = m.exponent_of(a);
            if k.is_zero() {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let rest = m.without(a);
            let vk = match powers.get(&k) {
                Some(p) => p.clone(),
                None => {
                    let p = if k.is_integer() && *k.numer() > 0 {
                        v.pow(*k.numer() as u32)
                    } else {
                        match v.as_atom() {
                            Some(b) => {
                                Expr::term(Monomial::from_factors([(b, k)])?, BigRational::one())
                            }
                            None => {
                                return Err(ExprError::RationalPowerSubstitution {
                                    atom: a.text_name(),
                                    exponent: k.to_string(),
                                })
                            }
                        }
                    };
                    powers.insert(k, p.clone());
                    p
                }
            };
            for (n, kn) in &vk.terms {
                out.add_term(rest.checked_mul(n)?, c * kn);
            }
        }
        Ok(out)
    }

    /// Groups terms by their non-base part, returning for each such part the
    /// polynomial coefficient in `x, y, t`.
    pub fn group_by_nonbase(&self) -> BTreeMap<Monomial, Expr> {
        let mut out: BTreeMap<Monomial, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (base, rest) = m.split_base();
            out.entry(rest).or_default().add_term(base, c.clone());
        }
        out
    }

    /// Maximum absolute numerator over all coefficients; a size diagnostic.
    pub fn max_coefficient(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs())
            .max()
            .unwrap_or_default()
    }
}

impl From<Atom> for Expr {
    fn from(a: Atom) -> Self {
        Expr::atom(a)
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Expr> for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl SubAssign<Expr> for Expr {
    fn sub_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            for (n, k) in &rhs.terms {
                out.add_term(m.mul(n), c * k);
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                (&self).$method(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut acc = Expr::zero();
        for e in iter {
            acc += e;
        }
        acc
    }
}
