//! Differential algebra on jet space: total derivatives, divergence, the
//! Euler operator and reduction modulo the Kohn-Laplace equation.

mod ideal;

use thiserror::Error;

use crate::expr::{Atom, Dependent, Dir, Expr, MultiIndex, OpaqueFn, DEFAULT_MAX_ORDER};

pub use ideal::{kohn_laplace, PdeIdeal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("jet order {order} exceeds the configured maximum {max_order}")]
    OrderOverflow { order: usize, max_order: usize },
    #[error("Euler operator needs jet order at most 2, got {0}")]
    EulerOrder(usize),
}

/// The `u`-derivative of an opaque function of `u`.
pub fn opaque_derivative(g: OpaqueFn) -> Expr {
    match g {
        OpaqueFn::Antiderivative => Expr::atom(Atom::Opaque(OpaqueFn::Derivative(0))),
        OpaqueFn::Derivative(k) => Expr::atom(Atom::Opaque(OpaqueFn::Derivative(k + 1))),
        OpaqueFn::Exp => Expr::atom(Atom::Opaque(OpaqueFn::Exp)),
        OpaqueFn::Log => Expr::u_pow((-1).into()),
    }
}

/// `∂e/∂u` including the chain rule through `F(u)`, `f⁽ᵏ⁾(u)`, `e^u`, `ln u`.
pub fn u_partial(e: &Expr) -> Expr {
    e.derivation(|a| match a {
        a if a.is_u() => Some(Expr::one()),
        Atom::Opaque(g) => Some(opaque_derivative(*g)),
        _ => None,
    })
}

/// Partial derivative with respect to a jet coordinate; the zeroth-order `u`
/// coordinate sees through opaque functions.
pub fn jet_partial(e: &Expr, dep: Dependent, idx: MultiIndex) -> Expr {
    if dep == Dependent::U && idx.order() == 0 {
        u_partial(e)
    } else {
        e.partial(&Atom::Jet(dep, idx))
    }
}

/// Jet space with a bound on the order of coordinates that may be created.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetSpace {
    pub max_order: usize,
}

impl Default for JetSpace {
    fn default() -> Self {
        JetSpace {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl JetSpace {
    pub fn new(max_order: usize) -> Self {
        JetSpace { max_order }
    }

    /// `D_dir e`.
    pub fn total_derivative(&self, e: &Expr, dir: Dir) -> Result<Expr, JetError> {
        e.try_derivation(|a| {
            Ok(match a {
                Atom::Base(d) => (*d == dir).then(Expr::one),
                Atom::Jet(dep, idx) => {
                    let next = idx.with(dir);
                    if next.order() > self.max_order {
                        return Err(JetError::OrderOverflow {
                            order: next.order(),
                            max_order: self.max_order,
                        });
                    }
                    Some(Expr::atom(Atom::Jet(*dep, next)))
                }
                Atom::Opaque(g) => Some(
                    opaque_derivative(*g)
                        * Expr::atom(Atom::Jet(Dependent::U, MultiIndex::EMPTY.with(dir))),
                ),
            })
        })
    }

    /// `D_J e` for a multi-index `J`.
    pub fn total_derivative_multi(&self, e: &Expr, idx: MultiIndex) -> Result<Expr, JetError> {
        let mut acc = e.clone();
        for d in idx.dirs() {
            if acc.is_zero() {
                break;
            }
            acc = self.total_derivative(&acc, d)?;
        }
        Ok(acc)
    }

    /// `D_x v¹ + D_y v² + D_t v³`.
    pub fn divergence(&self, v: &[Expr; 3]) -> Result<Expr, JetError> {
        let mut acc = Expr::zero();
        for d in Dir::ALL {
            acc += self.total_derivative(&v[d.index()], d)?;
        }
        Ok(acc)
    }

    /// Variational derivative `Σ_J (−D)_J ∂e/∂v_J` over unordered
    /// multi-indices `|J| ≤ 2`.
    pub fn euler_operator(&self, e: &Expr, wrt: Dependent) -> Result<Expr, JetError> {
        let order = e.jet_order(Dependent::U).max(e.jet_order(Dependent::Beta));
        if order > 2 {
            return Err(JetError::EulerOrder(order));
        }
        let mut acc = Expr::zero();
        for k in 0..=2 {
            for idx in MultiIndex::all_of_order(k) {
                let p = jet_partial(e, wrt, idx);
                if p.is_zero() {
                    continue;
                }
                let term = self.total_derivative_multi(&p, idx)?;
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
        }
        Ok(acc)
    }

    /// Decides whether `e` is a total divergence with `u` and `β` treated as
    /// free dependent variables, via the kernel of the Euler operator.
    pub fn is_total_divergence(&self, e: &Expr) -> Result<DivergenceTest, JetError> {
        let wu = self.euler_operator(e, Dependent::U)?;
        if !wu.is_zero() {
            return Ok(DivergenceTest::No { witness: wu });
        }
        if e.contains_dependent(Dependent::Beta) {
            let wb = self.euler_operator(e, Dependent::Beta)?;
            if !wb.is_zero() {
                return Ok(DivergenceTest::No { witness: wb });
            }
        }
        Ok(DivergenceTest::Yes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivergenceTest {
    Yes,
    No { witness: Expr },
}

impl DivergenceTest {
    pub fn is_yes(&self) -> bool {
        matches!(self, DivergenceTest::Yes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::NonlinearityCase;
    use crate::expr::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn total_derivative_basics() {
        let j = JetSpace::default();
        assert_eq!(j.total_derivative(&Expr::u(), Dir::X).unwrap(), p("u_x"));
        assert_eq!(
            j.total_derivative(&p("2*y*u_x*u_t"), Dir::T).unwrap(),
            p("2*y*u_xt*u_t + 2*y*u_x*u_tt")
        );
        assert_eq!(
            j.total_derivative(&p("F(u)"), Dir::Y).unwrap(),
            p("f(u)*u_y")
        );
        assert_eq!(
            j.total_derivative(&p("f(u)"), Dir::X).unwrap(),
            p("f1(u)*u_x")
        );
        assert_eq!(
            j.total_derivative(&p("E(u)"), Dir::T).unwrap(),
            p("E(u)*u_t")
        );
        assert_eq!(
            j.total_derivative(&p("ln(u)"), Dir::X).unwrap(),
            p("u^(-1)*u_x")
        );
        assert_eq!(j.total_derivative(&p("b"), Dir::X).unwrap(), p("b_x"));
        assert_eq!(
            j.total_derivative(&p("u^(1/2)"), Dir::X).unwrap(),
            p("1/2*u^(-1/2)*u_x")
        );
    }

    #[test]
    fn order_overflow_is_an_error() {
        let j = JetSpace::default();
        assert_eq!(
            j.total_derivative(&p("u_xxyt"), Dir::T),
            Err(JetError::OrderOverflow {
                order: 5,
                max_order: 4
            })
        );
        assert!(JetSpace::new(5)
            .total_derivative(&p("u_xxyt"), Dir::T)
            .is_ok());
    }

    #[test]
    fn divergence_examples() {
        let j = JetSpace::default();
        assert_eq!(
            j.divergence(&[Expr::u(), Expr::zero(), Expr::zero()])
                .unwrap(),
            p("u_x")
        );
        assert_eq!(
            j.divergence(&[p("y*u"), p("-x*u"), Expr::zero()]).unwrap(),
            p("y*u_x - x*u_y")
        );
    }

    #[test]
    fn divergence_of_time_translation_vector() {
        // hand expansion: Div τ = −u_t (Δ_H u + f)
        let j = JetSpace::default();
        let tau = [
            p("-2*y*u_t^2 - u_x*u_t"),
            p("2*x*u_t^2 - u_y*u_t"),
            p("1/2*u_x^2 + 1/2*u_y^2 - 2*(x^2+y^2)*u_t^2 - F(u)"),
        ];
        let want = p("-u_t*(u_xx + u_yy + 4*(x^2+y^2)*u_tt + 4*y*u_xt - 4*x*u_yt + f(u))");
        assert_eq!(j.divergence(&tau).unwrap(), want);
    }

    #[test]
    fn euler_operator_examples() {
        let j = JetSpace::default();
        assert_eq!(
            j.euler_operator(&p("u_x^2 + u_y^2"), Dependent::U).unwrap(),
            p("-2*u_xx - 2*u_yy")
        );
        let l = p("1/2*u_x^2 + 1/2*u_y^2 + 2*(x^2+y^2)*u_t^2 + 2*y*u_x*u_t - 2*x*u_y*u_t - F(u)");
        assert_eq!(
            j.euler_operator(&l, Dependent::U).unwrap(),
            p("-(u_xx + u_yy + 4*(x^2+y^2)*u_tt + 4*y*u_xt - 4*x*u_yt) - f(u)")
        );
        assert_eq!(
            j.euler_operator(&p("u_xxx"), Dependent::U),
            Err(JetError::EulerOrder(3))
        );
    }

    #[test]
    fn euler_kills_a_divergence() {
        let j = JetSpace::default();
        let v = [p("x*u*u_y + F(u)"), p("t^2*u_x*u_t"), p("y*u^2*u_t")];
        let d = j.divergence(&v).unwrap();
        assert!(j.euler_operator(&d, Dependent::U).unwrap().is_zero());
    }

    #[test]
    fn divergence_test_examples() {
        let j = JetSpace::default();
        assert!(j.is_total_divergence(&p("u_x")).unwrap().is_yes());
        let l0 = p("1/2*u_x^2 + 1/2*u_y^2 + 2*(x^2+y^2)*u_t^2 + 2*y*u_x*u_t - 2*x*u_y*u_t");
        match j.is_total_divergence(&(Expr::int(2) * &l0)).unwrap() {
            DivergenceTest::No { witness } => {
                assert_eq!(witness, Expr::int(-2) * kohn_laplace(Dependent::U));
            }
            DivergenceTest::Yes => panic!("2L is not a divergence"),
        }
        let defect = p("u_x^2 + u_y^2 + 4*(x^2+y^2)*u_t^2 + 4*y*u_x*u_t - 4*x*u_y*u_t - 2*E(u)");
        assert!(!j.is_total_divergence(&defect).unwrap().is_yes());
        // β as a free variable: β·u_x is D_x(βu) − β_x u, not a divergence
        assert!(!j.is_total_divergence(&p("b*u_x")).unwrap().is_yes());
        assert!(j.is_total_divergence(&p("b*u_x + b_x*u")).unwrap().is_yes());
    }

    #[test]
    fn euler_of_every_lagrangian() {
        let j = JetSpace::default();
        for case in NonlinearityCase::standard(&[-1, 2, 5]) {
            let l = p("1/2*u_x^2 + 1/2*u_y^2 + 2*(x^2+y^2)*u_t^2 + 2*y*u_x*u_t - 2*x*u_y*u_t")
                - case.antiderivative();
            let want = -(kohn_laplace(Dependent::U) + case.nonlinearity());
            assert_eq!(j.euler_operator(&l, Dependent::U).unwrap(), want, "{case}");
        }
    }
}
