use std::collections::HashMap;

use crate::case::NonlinearityCase;
use crate::expr::{Atom, Dependent, Dir, Expr, Monomial, MultiIndex};

use super::{JetError, JetSpace};

/// `Δ_H v = v_xx + v_yy + 4(x²+y²)v_tt + 4y v_xt − 4x v_yt` for a dependent
/// symbol `v`.
pub fn kohn_laplace(dep: Dependent) -> Expr {
    let v = |s: &str| Expr::atom(Atom::Jet(dep, MultiIndex::parse(s).unwrap()));
    let r2 = Expr::x().pow(2) + Expr::y().pow(2);
    v("xx") + v("yy") + Expr::int(4) * r2 * v("tt") + Expr::int(4) * Expr::y() * v("xt")
        - Expr::int(4) * Expr::x() * v("yt")
}

/// The differential ideal generated by the equation (leading derivative
/// `u_xx`) and, where the case carries one, by the constraint on `β`
/// (leading derivative `β_xx`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdeIdeal {
    nonlinearity: Expr,
    reduce_u: bool,
    beta_k: Option<i64>,
}

impl PdeIdeal {
    /// Equation plus the `β` constraint of the case.
    pub fn for_case(case: &NonlinearityCase) -> Self {
        PdeIdeal {
            nonlinearity: case.nonlinearity(),
            reduce_u: true,
            beta_k: case.beta_constraint(),
        }
    }

    /// Only the `β` constraint; `u` stays a free dependent variable.
    pub fn beta_only(case: &NonlinearityCase) -> Self {
        PdeIdeal {
            nonlinearity: case.nonlinearity(),
            reduce_u: false,
            beta_k: case.beta_constraint(),
        }
    }

    pub fn reduces_u(&self) -> bool {
        self.reduce_u
    }

    pub fn beta_k(&self) -> Option<i64> {
        self.beta_k
    }

    /// Right-hand side of the leading rewrite `v_xx → …` for `v`.
    pub fn leading_rhs(&self, dep: Dependent) -> Option<Expr> {
        let lap = kohn_laplace(dep);
        let vxx = Expr::atom(Atom::Jet(dep, MultiIndex::parse("xx").unwrap()));
        match dep {
            Dependent::U if self.reduce_u => Some(vxx - lap - &self.nonlinearity),
            Dependent::Beta => {
                let k = self.beta_k?;
                Some(vxx - lap - Expr::int(k) * Expr::beta())
            }
            _ => None,
        }
    }

    /// The generator itself, `Δ_H v + (…)` whose reduction is zero.
    pub fn generator(&self, dep: Dependent) -> Option<Expr> {
        let vxx = Expr::atom(Atom::Jet(dep, MultiIndex::parse("xx").unwrap()));
        self.leading_rhs(dep).map(|rhs| vxx - rhs)
    }

    fn is_leading(&self, a: &Atom) -> bool {
        match a {
            Atom::Jet(Dependent::U, idx) => self.reduce_u && idx.count(Dir::X) >= 2,
            Atom::Jet(Dependent::Beta, idx) => self.beta_k.is_some() && idx.count(Dir::X) >= 2,
            _ => false,
        }
    }

    /// Rewrites until no `u_J` or `β_J` with `J ⊇ {x, x}` remains.
    pub fn reduce(&self, e: &Expr, jets: &JetSpace) -> Result<Expr, JetError> {
        let mut memo = HashMap::new();
        self.reduce_memo(e, jets, &mut memo)
    }

    fn reduce_memo(
        &self,
        e: &Expr,
        jets: &JetSpace,
        memo: &mut HashMap<Atom, Expr>,
    ) -> Result<Expr, JetError> {
        if !e.atoms().iter().any(|a| self.is_leading(a)) {
            return Ok(e.clone());
        }
        let mut out = Expr::zero();
        for (m, c) in e.terms() {
            let mut plain = Vec::new();
            let mut product = Expr::one();
            for (a, k) in m.factors() {
                if self.is_leading(a) {
                    let r = self.reduce_atom(a, jets, memo)?;
                    product = product * r.pow(k.to_integer() as u32);
                } else {
                    plain.push((*a, *k));
                }
            }
            let plain = Monomial::from_factors(plain).expect("factors of a valid monomial");
            out += product.mul_monomial(&plain, c);
        }
        Ok(out)
    }

    fn reduce_atom(
        &self,
        a: &Atom,
        jets: &JetSpace,
        memo: &mut HashMap<Atom, Expr>,
    ) -> Result<Expr, JetError> {
        if let Some(r) = memo.get(a) {
            return Ok(r.clone());
        }
        let Atom::Jet(dep, idx) = a else {
            unreachable!("only jets lead")
        };
        let rest = idx
            .without(Dir::X)
            .and_then(|i| i.without(Dir::X))
            .expect("xx ⊆ J");
        let rhs = self.leading_rhs(*dep).expect("leading atom has a rule");
        let lifted = jets.total_derivative_multi(&rhs, rest)?;
        let r = self.reduce_memo(&lifted, jets, memo)?;
        memo.insert(*a, r.clone());
        Ok(r)
    }
}

impl PdeIdeal {
    /// True when `e` reduces to zero.
    pub fn contains(&self, e: &Expr, jets: &JetSpace) -> Result<bool, JetError> {
        Ok(self.reduce(e, jets)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn leading_rule_reproduces_the_equation() {
        let ideal = PdeIdeal::for_case(&NonlinearityCase::Arbitrary);
        let g = ideal.generator(Dependent::U).unwrap();
        assert_eq!(
            g,
            p("u_xx + u_yy + 4*(x^2+y^2)*u_tt + 4*y*u_xt - 4*x*u_yt + f(u)")
        );
        assert!(ideal.contains(&g, &JetSpace::default()).unwrap());
    }

    #[test]
    fn prolonged_rule_matches_total_derivative_of_the_rewrite() {
        // oracle: D_t of u_xx = −u_yy − 4(x²+y²)u_tt − 4y u_xt + 4x u_yt − f(u)
        let jets = JetSpace::default();
        let ideal = PdeIdeal::for_case(&NonlinearityCase::Arbitrary);
        let got = ideal.reduce(&p("u_xxt"), &jets).unwrap();
        let want = p("-u_yyt - 4*(x^2+y^2)*u_ttt - 4*y*u_xtt + 4*x*u_ytt - f1(u)*u_t");
        assert_eq!(got, want);
        // D_x once more pulls u_xxt back in through the 4y u_xt term
        let got = ideal.reduce(&p("u_xxx"), &jets).unwrap();
        let reduced_uxt = ideal.reduce(&p("u_xxt"), &jets).unwrap();
        let want = p("-u_xyy - 8*x*u_tt - 4*(x^2+y^2)*u_xtt + 4*u_yt + 4*x*u_xyt - f1(u)*u_x")
            + Expr::int(-4) * Expr::y() * reduced_uxt;
        assert_eq!(got, want);
    }

    #[test]
    fn beta_constraint_only_where_imposed() {
        let jets = JetSpace::default();
        let lap_b = kohn_laplace(Dependent::Beta);
        let lin = PdeIdeal::for_case(&NonlinearityCase::Linear);
        assert!(lin
            .contains(&(lap_b.clone() + Expr::beta()), &jets)
            .unwrap());
        let zero = PdeIdeal::for_case(&NonlinearityCase::Zero);
        assert!(zero.contains(&lap_b, &jets).unwrap());
        let arb = PdeIdeal::for_case(&NonlinearityCase::Arbitrary);
        assert_eq!(arb.reduce(&lap_b, &jets).unwrap(), lap_b);
    }

    #[test]
    fn beta_only_leaves_u_alone() {
        let jets = JetSpace::default();
        let ideal = PdeIdeal::beta_only(&NonlinearityCase::Zero);
        let e = p("u_xx + b_xx*u");
        let want = p("u_xx") - kohn_laplace(Dependent::Beta) * Expr::u() + p("b_xx*u");
        assert_eq!(ideal.reduce(&e, &jets).unwrap(), want);
    }

    #[test]
    fn reduction_is_idempotent_on_powers() {
        let jets = JetSpace::default();
        let ideal = PdeIdeal::for_case(&NonlinearityCase::Linear);
        let e = p("x*u_xx^2*u_xy + u_xxyt");
        let once = ideal.reduce(&e, &jets).unwrap();
        assert_eq!(ideal.reduce(&once, &jets).unwrap(), once);
        assert!(!once
            .atoms()
            .iter()
            .any(|a| matches!(a, Atom::Jet(_, i) if i.count(Dir::X) >= 2)));
    }
}
