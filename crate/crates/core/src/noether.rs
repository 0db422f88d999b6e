//! Variational symmetries: the Noether defect, its Euler-kernel test and
//! the reconstruction of a potential `φ` with `D_iφⁱ = defect`.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::case::NonlinearityCase;
use crate::expr::{parse, to_json, to_text, Atom, Dependent, Dir, Expr, Monomial, MultiIndex};
use crate::jet::{JetError, JetSpace, PdeIdeal};
use crate::linsolve::{solve_by_blocks, Equation};
use crate::symmetry::{catalog, PointVectorField, SymmetryError};

/// Default total degree in `(x, y, t)` of the reconstruction basis.
pub const DEFAULT_BASIS_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NoetherError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// `½u_x² + ½u_y² + 2(x²+y²)u_t² + 2y u_x u_t − 2x u_y u_t − F(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lagrangian {
    pub case: NonlinearityCase,
    pub expr: Expr,
}

impl Lagrangian {
    pub fn for_case(case: &NonlinearityCase) -> Self {
        let kinetic =
            parse("1/2*u_x^2 + 1/2*u_y^2 + 2*(x^2+y^2)*u_t^2 + 2*y*u_x*u_t - 2*x*u_y*u_t")
                .expect("kinetic part");
        Lagrangian {
            case: *case,
            expr: kinetic - case.antiderivative(),
        }
    }

    /// `∂L/∂u_i`.
    pub fn momentum(&self, d: Dir) -> Expr {
        self.expr
            .partial(&Atom::Jet(Dependent::U, MultiIndex::EMPTY.with(d)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoetherOptions {
    pub jets: JetSpace,
    pub degree: usize,
}

impl Default for NoetherOptions {
    fn default() -> Self {
        NoetherOptions {
            jets: JetSpace::default(),
            degree: DEFAULT_BASIS_DEGREE,
        }
    }
}

/// `pr¹S(L) + L·D_iξⁱ`.
pub fn noether_defect(
    field: &PointVectorField,
    case: &NonlinearityCase,
    jets: &JetSpace,
) -> Result<Expr, NoetherError> {
    let l = Lagrangian::for_case(case).expr;
    let pr = field.prolong(1, jets)?;
    Ok(pr.apply(&l)? + &l * field.base_divergence(jets)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted {
        phi: [Expr; 3],
        gauge_note: Option<String>,
    },
    Rejected {
        witness: Expr,
    },
    /// Passes the Euler test but the basis could not produce `φ`.
    Pending {
        diagnostic: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoetherCertificate {
    pub symmetry: String,
    pub case: NonlinearityCase,
    pub defect: Expr,
    pub verdict: Verdict,
}

impl NoetherCertificate {
    /// Accepted, possibly with the potential still pending.
    pub fn is_noether(&self) -> bool {
        !matches!(self.verdict, Verdict::Rejected { .. })
    }

    pub fn phi(&self) -> Option<&[Expr; 3]> {
        match &self.verdict {
            Verdict::Accepted { phi, .. } => Some(phi),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Expr> {
        match &self.verdict {
            Verdict::Rejected { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::Accepted { .. } => "accepted",
            Verdict::Rejected { .. } => "rejected",
            Verdict::Pending { .. } => "pending",
        }
    }

    pub fn to_json(&self) -> Value {
        let ex = |e: &Expr| serde_json::to_value(to_json(e)).expect("expression json");
        let mut v = json!({
            "symmetry": self.symmetry,
            "case": self.case.selector(),
            "verdict": self.verdict_name(),
            "defect": ex(&self.defect),
            "gauge_note": Value::Null,
        });
        match &self.verdict {
            Verdict::Accepted { phi, gauge_note } => {
                v["phi"] = phi.iter().map(ex).collect::<Vec<_>>().into();
                v["gauge_note"] = json!(gauge_note);
            }
            Verdict::Rejected { witness } => v["witness"] = ex(witness),
            Verdict::Pending { diagnostic } => v["diagnostic"] = json!(diagnostic),
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} [{}]: {}\n  defect = {}\n",
            self.symmetry,
            self.case.selector(),
            self.verdict_name(),
            to_text(&self.defect)
        );
        match &self.verdict {
            Verdict::Accepted { phi, gauge_note } => {
                for (i, c) in phi.iter().enumerate() {
                    out.push_str(&format!("  phi{} = {}\n", i + 1, to_text(c)));
                }
                if let Some(n) = gauge_note {
                    out.push_str(&format!("  note: {n}\n"));
                }
            }
            Verdict::Rejected { witness } => {
                out.push_str(&format!("  witness E(defect) = {}\n", to_text(witness)))
            }
            Verdict::Pending { diagnostic } => {
                out.push_str(&format!("  potential pending: {diagnostic}\n"))
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    pub phi: [Expr; 3],
    pub unknowns: usize,
    pub rank: usize,
    /// Basis coefficients left free and set to zero.
    pub free: usize,
    /// Coefficients in blocks of the system that the defect does not reach.
    pub uncoupled: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "no potential of degree ≤ {degree} ({unknowns} unknowns, rank {rank}, {equations} equations)"
)]
pub struct NotFound {
    pub degree: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub equations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error(transparent)]
    NotFound(#[from] NotFound),
    #[error(transparent)]
    Jet(#[from] JetError),
}

fn multipliers(with_beta: bool) -> Vec<Expr> {
    let u = Expr::u();
    let mut out = vec![Expr::one(), u.clone(), u.pow(2)];
    if with_beta {
        let betas: Vec<Expr> = std::iter::once(MultiIndex::EMPTY)
            .chain(MultiIndex::all_of_order(1))
            .map(|i| Expr::atom(Atom::Jet(Dependent::Beta, i)))
            .collect();
        out.extend(betas.iter().map(|b| &u * b));
        for (i, a) in betas.iter().enumerate() {
            for b in &betas[i..] {
                out.push(a * b);
            }
        }
    }
    out
}

fn base_monomials(degree: usize) -> Vec<Expr> {
    let mut out = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                out.push(
                    Expr::x().pow(a as u32) * Expr::y().pow(b as u32) * Expr::t().pow(c as u32),
                );
            }
        }
    }
    out
}

/// Solves `D_iφⁱ = defect` exactly over `x^a y^b t^c · m` with
/// `a+b+c ≤ degree`, modulo the case's constraint on `β`.
pub fn reconstruct_potential(
    defect: &Expr,
    case: &NonlinearityCase,
    degree: usize,
    jets: &JetSpace,
) -> Result<Potential, ReconstructError> {
    if defect.is_zero() {
        return Ok(Potential {
            phi: [Expr::zero(), Expr::zero(), Expr::zero()],
            unknowns: 0,
            rank: 0,
            free: 0,
            uncoupled: 0,
        });
    }
    let ideal = PdeIdeal::beta_only(case);
    let terms: Vec<Expr> = base_monomials(degree)
        .iter()
        .flat_map(|p| {
            multipliers(defect.contains_dependent(Dependent::Beta))
                .into_iter()
                .map(move |m| p * m)
        })
        .collect();
    let mut unknowns: Vec<(Dir, &Expr)> = Vec::new();
    let mut eqs: BTreeMap<Monomial, Equation> = BTreeMap::new();
    for d in Dir::ALL {
        for term in &terms {
            let image = ideal.reduce(&jets.total_derivative(term, d)?, jets)?;
            if image.is_zero() {
                continue;
            }
            let j = unknowns.len();
            unknowns.push((d, term));
            for (m, c) in image.terms() {
                eqs.entry(m.clone())
                    .or_default()
                    .coeffs
                    .insert(j, c.clone());
            }
        }
    }
    for (m, c) in ideal.reduce(defect, jets)?.terms() {
        eqs.entry(m.clone()).or_default().rhs = c.clone();
    }
    let n = unknowns.len();
    let equations = eqs.len();
    let sol = solve_by_blocks(eqs.into_values().collect(), n).map_err(|e| NotFound {
        degree,
        unknowns: n,
        rank: e.rank,
        equations,
    })?;
    let mut phi = [Expr::zero(), Expr::zero(), Expr::zero()];
    for ((d, term), c) in unknowns.iter().zip(&sol.values) {
        phi[d.index()] += term.scale(c);
    }
    Ok(Potential {
        phi,
        unknowns: n,
        rank: sol.rank,
        free: sol.free.len(),
        uncoupled: sol.skipped,
    })
}

/// Decides whether `field` is a Noether symmetry of the case's Lagrangian.
///
/// The defect is a divergence iff its `u`-Euler derivative vanishes; when
/// `β` is constrained the derivative is reduced by that constraint first.
pub fn is_noether(
    field: &PointVectorField,
    case: &NonlinearityCase,
    opts: &NoetherOptions,
) -> Result<NoetherCertificate, NoetherError> {
    let jets = &opts.jets;
    let defect = noether_defect(field, case, jets)?;
    let cert = |verdict| NoetherCertificate {
        symmetry: field.name.clone(),
        case: *case,
        defect: defect.clone(),
        verdict,
    };
    let witness = jets.euler_operator(&defect, Dependent::U)?;
    if !PdeIdeal::beta_only(case).reduce(&witness, jets)?.is_zero() {
        return Ok(cert(Verdict::Rejected { witness }));
    }
    Ok(match reconstruct_potential(&defect, case, opts.degree, jets) {
        Ok(p) => cert(Verdict::Accepted {
            gauge_note: (p.free + p.uncoupled > 0).then(|| {
                format!(
                    "phi is fixed up to a divergence-free term; of {} basis coefficients, {} were free and {} were uncoupled from the defect, all set to 0",
                    p.unknowns, p.free, p.uncoupled
                )
            }),
            phi: p.phi,
        }),
        Err(ReconstructError::NotFound(nf)) => cert(Verdict::Pending {
            diagnostic: nf.to_string(),
        }),
        Err(ReconstructError::Jet(e)) => return Err(e.into()),
    })
}

/// Certificates for every generator of the case's catalog.
pub fn classify_case(
    case: &NonlinearityCase,
    opts: &NoetherOptions,
) -> Result<Vec<NoetherCertificate>, NoetherError> {
    catalog(case)
        .iter()
        .map(|g| is_noether(g, case, opts))
        .collect()
}

/// Names accepted by [`classify_case`].
pub fn accepted_names(certs: &[NoetherCertificate]) -> Vec<String> {
    certs
        .iter()
        .filter(|c| c.is_noether())
        .map(|c| c.symmetry.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{dilation, generator};
    use num_rational::Rational64;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn defect(id: &str, case: NonlinearityCase) -> Expr {
        noether_defect(&generator(id), &case, &JetSpace::default()).unwrap()
    }

    #[test]
    fn base_group_defects_vanish() {
        for id in ["T", "R", "Xt", "Yt"] {
            assert!(defect(id, NonlinearityCase::Arbitrary).is_zero(), "{id}");
        }
    }

    #[test]
    fn displayed_defects() {
        let lz = Lagrangian::for_case(&NonlinearityCase::Zero).expr;
        assert_eq!(defect("Z", NonlinearityCase::Zero), Expr::int(2) * lz);
        let ll = Lagrangian::for_case(&NonlinearityCase::Linear).expr;
        assert_eq!(defect("U", NonlinearityCase::Linear), Expr::int(2) * ll);
        assert_eq!(
            defect("E", NonlinearityCase::Exponential),
            p("u_x^2 + u_y^2 + 4*(x^2+y^2)*u_t^2 + 4*y*u_x*u_t - 4*x*u_y*u_t - 2*E(u)")
        );
    }

    #[test]
    fn dilation_defect_closed_form() {
        // (2c+2)L0 − (c(p+1)+4)F with c = 2/(1−p), L0 the kinetic part
        let jets = JetSpace::default();
        for pv in [-1i64, 2, 4, 5] {
            let pr = Rational64::from_integer(pv);
            let case = NonlinearityCase::power(pr).unwrap();
            let c = Rational64::from_integer(2) / (Rational64::from_integer(1) - pr);
            let f = case.antiderivative();
            let l0 = Lagrangian::for_case(&case).expr + &f;
            let k1 = c * 2 + 2;
            let want = l0.scale(&crate::expr::big(k1));
            let got = noether_defect(&dilation(pr), &case, &jets).unwrap();
            if pv == -1 {
                // F = ln u: D_p(ln u) = c, so the F-part is the constant −c − 4 ln u
                let lnu = Expr::atom(Atom::Opaque(crate::expr::OpaqueFn::Log));
                let rest = Expr::constant(crate::expr::big(-c)) - Expr::int(4) * lnu;
                assert_eq!(got, want + rest);
            } else {
                let k2 = c * (pr + 1) + 4;
                assert_eq!(got, want - f.scale(&crate::expr::big(k2)));
            }
        }
    }

    #[test]
    fn euler_test_decisions() {
        let opts = NoetherOptions::default();
        let xt = is_noether(&generator("Xt"), &NonlinearityCase::Arbitrary, &opts).unwrap();
        assert_eq!(
            xt.phi().unwrap(),
            &[Expr::zero(), Expr::zero(), Expr::zero()]
        );
        let e = is_noether(&generator("E"), &NonlinearityCase::Exponential, &opts).unwrap();
        assert!(!e.witness().unwrap().is_zero());
        let two = NonlinearityCase::Power(Rational64::from_integer(2));
        assert!(
            !is_noether(&dilation(Rational64::from_integer(2)), &two, &opts)
                .unwrap()
                .is_noether()
        );
        let d3 = is_noether(&generator("D3"), &NonlinearityCase::Cubic, &opts).unwrap();
        assert!(d3.defect.is_zero() && d3.is_noether());
    }

    #[test]
    fn w_beta_potential_is_the_displayed_one() {
        let opts = NoetherOptions::default();
        let want = [
            p("(b_x + 2*y*b_t)*u"),
            p("(b_y - 2*x*b_t)*u"),
            p("(2*y*b_x - 2*x*b_y + 4*(x^2+y^2)*b_t)*u"),
        ];
        for case in [NonlinearityCase::Linear, NonlinearityCase::Zero] {
            let c = is_noether(&generator("W"), &case, &opts).unwrap();
            assert_eq!(c.phi().unwrap(), &want, "{case}");
        }
    }

    #[test]
    fn v1_potential() {
        let opts = NoetherOptions::default();
        let c = is_noether(&generator("V1"), &NonlinearityCase::Zero, &opts).unwrap();
        let phi = c.phi().unwrap();
        assert_eq!(phi, &[p("-y*u^2"), p("x*u^2"), p("-2*(x^2+y^2)*u^2")]);
        let div = opts.jets.divergence(phi).unwrap();
        assert_eq!(div, c.defect);
    }

    #[test]
    fn reconstruction_reports_a_too_small_basis() {
        let jets = JetSpace::default();
        let d = defect("V1", NonlinearityCase::Zero);
        let r = reconstruct_potential(&d, &NonlinearityCase::Zero, 0, &jets);
        assert!(matches!(r, Err(ReconstructError::NotFound(_))));
    }

    #[test]
    fn classification_sets() {
        let opts = NoetherOptions::default();
        let names = |c| accepted_names(&classify_case(&c, &opts).unwrap());
        assert_eq!(names(NonlinearityCase::Exponential), ["T", "R", "Xt", "Yt"]);
        assert_eq!(names(NonlinearityCase::Linear), ["T", "R", "Xt", "Yt", "W"]);
        assert_eq!(
            names(NonlinearityCase::Zero),
            ["T", "R", "Xt", "Yt", "W", "V1", "V2", "V3"]
        );
        assert_eq!(names(NonlinearityCase::Cubic).len(), 8);
    }

    #[test]
    fn certificate_json_shape() {
        let opts = NoetherOptions::default();
        let c = is_noether(&generator("Z"), &NonlinearityCase::Zero, &opts).unwrap();
        let j = c.to_json();
        assert_eq!(j["verdict"], "rejected");
        assert!(j.get("witness").is_some() && j.get("phi").is_none());
    }
}
