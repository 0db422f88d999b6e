use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::expr::{parse, Atom, Dependent, Dir, Expr, MultiIndex};
use crate::jet::{opaque_derivative, JetError, JetSpace};

use super::SymmetryError;

/// `ξ¹∂_x + ξ²∂_y + ξ³∂_t + η∂_u` with coefficients in `x, y, t, u` (and
/// `β`-jets for the `W_β` family).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointVectorField {
    pub name: String,
    pub xi: [Expr; 3],
    pub eta: Expr,
}

impl PointVectorField {
    pub fn new(name: impl Into<String>, xi: [Expr; 3], eta: Expr) -> Self {
        PointVectorField {
            name: name.into(),
            xi,
            eta,
        }
    }

    /// Builds a field from text coefficients. Panics on malformed input, so
    /// only use it with literals.
    pub fn from_text(name: &str, xi: [&str; 3], eta: &str) -> Self {
        let p = |s: &str| parse(s).unwrap_or_else(|e| panic!("coefficient '{s}': {e}"));
        PointVectorField::new(name, [p(xi[0]), p(xi[1]), p(xi[2])], p(eta))
    }

    pub fn zero(name: impl Into<String>) -> Self {
        PointVectorField::new(
            name,
            [Expr::zero(), Expr::zero(), Expr::zero()],
            Expr::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().all(Expr::is_zero) && self.eta.is_zero()
    }

    /// The four coefficients `(ξ¹, ξ², ξ³, η)`.
    pub fn components(&self) -> [&Expr; 4] {
        [&self.xi[0], &self.xi[1], &self.xi[2], &self.eta]
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn add(&self, other: &PointVectorField) -> PointVectorField {
        PointVectorField::new(
            format!("{}+{}", self.name, other.name),
            [
                &self.xi[0] + &other.xi[0],
                &self.xi[1] + &other.xi[1],
                &self.xi[2] + &other.xi[2],
            ],
            &self.eta + &other.eta,
        )
    }

    pub fn scale(&self, c: &BigRational) -> PointVectorField {
        PointVectorField::new(
            self.name.clone(),
            [
                self.xi[0].scale(c),
                self.xi[1].scale(c),
                self.xi[2].scale(c),
            ],
            self.eta.scale(c),
        )
    }

    /// Characteristic `Q = η − ξʲu_j`.
    pub fn characteristic(&self) -> Expr {
        let mut q = self.eta.clone();
        for d in Dir::ALL {
            q -= &self.xi[d.index()]
                * Expr::atom(Atom::Jet(Dependent::U, MultiIndex::EMPTY.with(d)));
        }
        q
    }

    /// Total divergence `D_iξⁱ` of the base coefficients.
    pub fn base_divergence(&self, jets: &JetSpace) -> Result<Expr, JetError> {
        jets.divergence(&self.xi)
    }

    /// The field as a derivation on functions of `(x, y, t, u)` and of the
    /// `β`-jets, which depend on the base point only.
    pub fn act(&self, e: &Expr, jets: &JetSpace) -> Result<Expr, JetError> {
        e.try_derivation(|a| {
            Ok(match a {
                Atom::Base(d) => Some(self.xi[d.index()].clone()),
                a if a.is_u() => Some(self.eta.clone()),
                Atom::Opaque(g) => Some(&self.eta * opaque_derivative(*g)),
                Atom::Jet(Dependent::Beta, idx) => {
                    let mut acc = Expr::zero();
                    for d in Dir::ALL {
                        if self.xi[d.index()].is_zero() {
                            continue;
                        }
                        let next = idx.with(d);
                        if next.order() > jets.max_order {
                            return Err(JetError::OrderOverflow {
                                order: next.order(),
                                max_order: jets.max_order,
                            });
                        }
                        acc += &self.xi[d.index()] * Expr::atom(Atom::Jet(Dependent::Beta, next));
                    }
                    Some(acc)
                }
                Atom::Jet(Dependent::U, _) => None,
            })
        })
    }

    /// `[self, other]` as first-order operators.
    pub fn bracket(
        &self,
        other: &PointVectorField,
        jets: &JetSpace,
    ) -> Result<PointVectorField, JetError> {
        let comp = |i: usize| -> Result<Expr, JetError> {
            let (a, b) = (self.components()[i], other.components()[i]);
            Ok(self.act(b, jets)? - other.act(a, jets)?)
        };
        Ok(PointVectorField::new(
            format!("[{},{}]", self.name, other.name),
            [comp(0)?, comp(1)?, comp(2)?],
            comp(3)?,
        ))
    }

    /// Prolongation to first or second order jets.
    pub fn prolong(&self, order: usize, jets: &JetSpace) -> Result<ProlongedField, SymmetryError> {
        if !(1..=2).contains(&order) {
            return Err(SymmetryError::ProlongationOrder(order));
        }
        let u_i = |d: Dir| Expr::atom(Atom::Jet(Dependent::U, MultiIndex::EMPTY.with(d)));
        let mut coeffs = BTreeMap::new();
        let mut dxi: [[Expr; 3]; 3] = Default::default();
        for i in Dir::ALL {
            for j in Dir::ALL {
                dxi[i.index()][j.index()] = jets.total_derivative(&self.xi[j.index()], i)?;
            }
        }
        for i in Dir::ALL {
            let mut c = jets.total_derivative(&self.eta, i)?;
            for j in Dir::ALL {
                c -= &dxi[i.index()][j.index()] * u_i(j);
            }
            coeffs.insert(MultiIndex::EMPTY.with(i), c);
        }
        if order == 2 {
            for idx in MultiIndex::all_of_order(2) {
                let dirs = idx.dirs();
                let (i, j) = (dirs[0], dirs[1]);
                let first = &coeffs[&MultiIndex::EMPTY.with(i)];
                let mut c = jets.total_derivative(first, j)?;
                for l in Dir::ALL {
                    let u_il =
                        Expr::atom(Atom::Jet(Dependent::U, MultiIndex::EMPTY.with(i).with(l)));
                    c -= &dxi[j.index()][l.index()] * u_il;
                }
                coeffs.insert(idx, c);
            }
        }
        Ok(ProlongedField {
            base: self.clone(),
            order,
            coeffs,
        })
    }
}

/// A point field lifted to jet space, carrying `η^J` for every `1 ≤ |J| ≤ order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProlongedField {
    pub base: PointVectorField,
    pub order: usize,
    pub coeffs: BTreeMap<MultiIndex, Expr>,
}

impl ProlongedField {
    pub fn coeff(&self, suffix: &str) -> &Expr {
        &self.coeffs[&MultiIndex::parse(suffix).expect("jet suffix")]
    }

    /// Applies the prolonged field as a first-order differential operator.
    ///
    /// `β`-jets are parameters and are not acted on.
    pub fn apply(&self, e: &Expr) -> Result<Expr, SymmetryError> {
        let needed = e.jet_order(Dependent::U);
        if needed > self.order {
            return Err(SymmetryError::ProlongationTooShort {
                have: self.order,
                needed,
            });
        }
        Ok(e.derivation(|a| match a {
            Atom::Base(d) => Some(self.base.xi[d.index()].clone()),
            a if a.is_u() => Some(self.base.eta.clone()),
            Atom::Opaque(g) => Some(&self.base.eta * opaque_derivative(*g)),
            Atom::Jet(Dependent::U, idx) => self.coeffs.get(idx).cloned(),
            Atom::Jet(Dependent::Beta, _) => None,
        }))
    }

    pub fn add(&self, other: &ProlongedField) -> ProlongedField {
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            *coeffs.entry(*k).or_default() += v;
        }
        ProlongedField {
            base: self.base.add(&other.base),
            order: self.order.min(other.order),
            coeffs,
        }
    }
}
