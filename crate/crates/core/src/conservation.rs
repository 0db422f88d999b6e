//! Conserved vectors `Cⁱ = ξⁱL + Q·∂L/∂u_i − φⁱ`, their verification and
//! the comparison with published vectors.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::case::NonlinearityCase;
use crate::expr::{
    parse, to_json, to_text, Atom, Dependent, Dir, Expr, ExprError, Monomial, OpaqueFn,
};
use crate::jet::{JetError, JetSpace, PdeIdeal};
use crate::noether::{is_noether, Lagrangian, NoetherCertificate, NoetherError, NoetherOptions};
use crate::reference::{published_vector_set, PublishedVector};
use crate::symmetry::{equation, find, PointVectorField, SymmetryError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Derived,
    Published,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservedVector {
    pub symmetry: String,
    pub case: NonlinearityCase,
    pub components: [Expr; 3],
    pub provenance: Provenance,
    /// `Q = η − ξʲu_j` of the generating field.
    pub characteristic: Expr,
    /// Published symbol (`tau`, `A`, ...), if any.
    pub label: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConservationError {
    #[error("{symmetry} is not an accepted Noether symmetry in case {case} ({verdict})")]
    NotAccepted {
        symmetry: String,
        case: String,
        verdict: &'static str,
        witness: Option<Expr>,
    },
    #[error("internal error: Div C - Q(Δu+f) = {residual} for {symmetry}")]
    Identity { symmetry: String, residual: String },
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Noether(#[from] NoetherError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// `Div C − Q(Δ_H u + f)`, reduced only by the constraint on `β`.
pub fn master_identity_residual(v: &ConservedVector, jets: &JetSpace) -> Result<Expr, JetError> {
    let lhs = jets.divergence(&v.components)?;
    let rhs = &v.characteristic * equation(&v.case);
    PdeIdeal::beta_only(&v.case).reduce(&(lhs - rhs), jets)
}

/// Builds the conserved vector from an accepted certificate of `field`.
pub fn conserved_vector(
    field: &PointVectorField,
    cert: &NoetherCertificate,
    jets: &JetSpace,
) -> Result<ConservedVector, ConservationError> {
    let Some(phi) = cert.phi() else {
        return Err(ConservationError::NotAccepted {
            symmetry: cert.symmetry.clone(),
            case: cert.case.selector(),
            verdict: cert.verdict_name(),
            witness: cert.witness().cloned(),
        });
    };
    let lag = Lagrangian::for_case(&cert.case);
    let q = field.characteristic();
    let components =
        Dir::ALL.map(|d| &field.xi[d.index()] * &lag.expr + &q * lag.momentum(d) - &phi[d.index()]);
    let v = ConservedVector {
        symmetry: field.name.clone(),
        case: cert.case,
        components,
        provenance: Provenance::Derived,
        characteristic: q,
        label: None,
        notes: Vec::new(),
    };
    let residual = master_identity_residual(&v, jets)?;
    if !residual.is_zero() {
        return Err(ConservationError::Identity {
            symmetry: v.symmetry,
            residual: to_text(&residual),
        });
    }
    Ok(v)
}

/// Runs the Noether test for the named symmetry and builds its vector.
pub fn derive(
    name: &str,
    case: &NonlinearityCase,
    opts: &NoetherOptions,
) -> Result<ConservedVector, ConservationError> {
    let field = find(case, name)?;
    derive_for(&field, case, opts)
}

pub fn derive_for(
    field: &PointVectorField,
    case: &NonlinearityCase,
    opts: &NoetherOptions,
) -> Result<ConservedVector, ConservationError> {
    let cert = is_noether(field, case, opts)?;
    conserved_vector(field, &cert, &opts.jets)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConservationCheck {
    Ok,
    Fail { residual: Expr },
}

impl ConservationCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, ConservationCheck::Ok)
    }
}

/// `Div C` vanishes modulo the equation (and the `β` constraint).
pub fn verify_conservation(
    v: &ConservedVector,
    jets: &JetSpace,
) -> Result<ConservationCheck, JetError> {
    let div = jets.divergence(&v.components)?;
    let residual = PdeIdeal::for_case(&v.case).reduce(&div, jets)?;
    Ok(if residual.is_zero() {
        ConservationCheck::Ok
    } else {
        ConservationCheck::Fail { residual }
    })
}

fn specialize(e: Expr, case: &NonlinearityCase) -> Result<Expr, ExprError> {
    match case {
        NonlinearityCase::Arbitrary => Ok(e),
        _ => e.substitute(
            &Atom::Opaque(OpaqueFn::Antiderivative),
            &case.antiderivative(),
        ),
    }
}

/// A published vector with `F` replaced by the case's antiderivative.
pub fn published_vector(
    p: &PublishedVector,
    case: &NonlinearityCase,
    use_alternative: bool,
) -> Result<ConservedVector, ConservationError> {
    let field = find(case, p.symmetry)?;
    let mut components: [Expr; 3] = Default::default();
    let mut notes = Vec::new();
    for i in 0..3 {
        let text = match (use_alternative, p.alternatives[i]) {
            (true, Some(alt)) => alt,
            _ => p.components[i],
        };
        components[i] = specialize(parse(text)?, case)?;
        if let Some(n) = p.notes[i] {
            notes.push(format!("{}{}: {n}", p.label, i + 1));
        }
    }
    Ok(ConservedVector {
        symmetry: p.symmetry.to_string(),
        case: *case,
        components,
        provenance: Provenance::Published,
        characteristic: field.characteristic(),
        label: Some(p.label.to_string()),
        notes,
    })
}

/// Published vectors that apply to the case, in their printed reading.
pub fn published_vectors(
    case: &NonlinearityCase,
) -> Result<Vec<ConservedVector>, ConservationError> {
    published_vector_set(case)
        .iter()
        .map(|p| published_vector(p, case, false))
        .collect()
}

/// One differing term, as `coefficient*monomial` text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDiff {
    pub component: usize,
    pub published: Option<String>,
    pub derived: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub symmetry: String,
    pub case: NonlinearityCase,
    /// Terms printed but not derived.
    pub only_published: Vec<TermDiff>,
    /// Terms derived but not printed.
    pub only_derived: Vec<TermDiff>,
    /// Same monomial, different coefficient.
    pub mismatched: Vec<TermDiff>,
}

impl DiscrepancyReport {
    pub fn is_empty(&self) -> bool {
        self.only_published.is_empty() && self.only_derived.is_empty() && self.mismatched.is_empty()
    }

    pub fn items(&self) -> impl Iterator<Item = &TermDiff> {
        self.only_published
            .iter()
            .chain(&self.only_derived)
            .chain(&self.mismatched)
    }

    /// Components (1-based) that differ.
    pub fn components(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.items().map(|d| d.component).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "symmetry": self.symmetry,
            "case": self.case.selector(),
            "empty": self.is_empty(),
            "only_published": self.only_published,
            "only_derived": self.only_derived,
            "mismatched": self.mismatched,
        })
    }

    pub fn to_text(&self) -> String {
        if self.is_empty() {
            return format!(
                "{} [{}]: published and derived vectors agree\n",
                self.symmetry,
                self.case.selector()
            );
        }
        let mut out = format!(
            "{} [{}]: components {:?} differ\n",
            self.symmetry,
            self.case.selector(),
            self.components()
        );
        let show = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
        for d in self.items() {
            out.push_str(&format!(
                "  C{}: published {} | derived {}\n",
                d.component,
                show(&d.published),
                show(&d.derived)
            ));
        }
        out
    }
}

fn term_text(m: &Monomial, c: &BigRational) -> String {
    to_text(&Expr::term(m.clone(), c.clone()))
}

/// Term-by-term difference of the normalized components.
pub fn compare(published: &ConservedVector, derived: &ConservedVector) -> DiscrepancyReport {
    let mut report = DiscrepancyReport {
        symmetry: derived.symmetry.clone(),
        case: derived.case,
        only_published: Vec::new(),
        only_derived: Vec::new(),
        mismatched: Vec::new(),
    };
    for i in 0..3 {
        let (p, d) = (&published.components[i], &derived.components[i]);
        for (m, c) in p.terms() {
            let dc = d.coefficient(m);
            if dc.is_zero() {
                report.only_published.push(TermDiff {
                    component: i + 1,
                    published: Some(term_text(m, c)),
                    derived: None,
                });
            } else if &dc != c {
                report.mismatched.push(TermDiff {
                    component: i + 1,
                    published: Some(term_text(m, c)),
                    derived: Some(term_text(m, &dc)),
                });
            }
        }
        for (m, c) in d.terms() {
            if p.coefficient(m).is_zero() {
                report.only_derived.push(TermDiff {
                    component: i + 1,
                    published: None,
                    derived: Some(term_text(m, c)),
                });
            }
        }
    }
    report
}

/// A documented published-versus-derived difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub symmetry: String,
    pub case: String,
    pub component: usize,
    pub paper_monomial: Option<String>,
    pub derived_monomial: Option<String>,
    pub note: String,
    /// `printed`, or `alternative` for a second reading of an ambiguous display.
    #[serde(default = "printed", skip_serializing_if = "is_printed")]
    pub reading: String,
}

fn printed() -> String {
    "printed".into()
}

fn is_printed(s: &String) -> bool {
    s == "printed"
}

const LEDGER_JSON: &str = include_str!("../data/discrepancy_ledger.json");

/// The repository's discrepancy ledger.
pub fn discrepancy_ledger() -> Vec<LedgerEntry> {
    serde_json::from_str(LEDGER_JSON).expect("embedded ledger is valid json")
}

/// Report items without a matching ledger entry for the given reading.
pub fn uncovered<'a>(
    report: &'a DiscrepancyReport,
    ledger: &[LedgerEntry],
    reading: &str,
) -> Vec<&'a TermDiff> {
    report
        .items()
        .filter(|d| {
            !ledger.iter().any(|e| {
                e.symmetry == report.symmetry
                    && e.reading == reading
                    && e.case == report.case.selector()
                    && e.component == d.component
                    && e.paper_monomial == d.published
                    && e.derived_monomial == d.derived
            })
        })
        .collect()
}

/// Ledger entries for a report, for `claw compare` output.
pub fn ledger_for<'a>(
    report: &DiscrepancyReport,
    ledger: &'a [LedgerEntry],
) -> Vec<&'a LedgerEntry> {
    ledger
        .iter()
        .filter(|e| e.symmetry == report.symmetry && e.case == report.case.selector())
        .collect()
}

/// Markdown table of the ledger.
pub fn ledger_markdown(ledger: &[LedgerEntry]) -> String {
    let mut out = String::from(
        "# Discrepancy ledger\n\n\
         Differences between the published conserved vectors and the derived ones.\n\
         Every derived vector here satisfies `Div C = Q(Δ_H u + f)` exactly, so the\n\
         derived column is authoritative. Generated from `crates/core/data/discrepancy_ledger.json`.\n\n\
         | symmetry | case | component | reading | published term | derived term | note |\n\
         |---|---|---|---|---|---|---|\n",
    );
    let cell = |o: &Option<String>| {
        o.as_ref()
            .map(|s| format!("`{s}`"))
            .unwrap_or_else(|| "(absent)".into())
    };
    for e in ledger {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            e.symmetry,
            e.case,
            e.component,
            e.reading,
            cell(&e.paper_monomial),
            cell(&e.derived_monomial),
            e.note
        ));
    }
    out
}

impl ConservedVector {
    pub fn to_json(&self) -> Value {
        json!({
            "symmetry": self.symmetry,
            "case": self.case.selector(),
            "provenance": self.provenance,
            "label": self.label,
            "characteristic": serde_json::to_value(to_json(&self.characteristic)).unwrap(),
            "components": self.components.iter().map(|c| serde_json::to_value(to_json(c)).unwrap()).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} [{}] ({:?}), Q = {}\n",
            self.symmetry,
            self.case.selector(),
            self.provenance,
            to_text(&self.characteristic)
        );
        for (i, c) in self.components.iter().enumerate() {
            out.push_str(&format!("  C{} = {}\n", i + 1, to_text(c)));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }

    /// Substitutes a concrete `β(x, y, t)` for the symbolic one.
    pub fn with_beta(
        &self,
        beta: &Expr,
        jets: &JetSpace,
    ) -> Result<ConservedVector, ConservationError> {
        let mut out = self.clone();
        for c in out
            .components
            .iter_mut()
            .chain(std::iter::once(&mut out.characteristic))
        {
            *c = substitute_beta(c, beta, jets)?;
        }
        Ok(out)
    }
}

/// Replaces every `β_J` by `D_J β`.
pub fn substitute_beta(e: &Expr, beta: &Expr, jets: &JetSpace) -> Result<Expr, ConservationError> {
    let mut out = e.clone();
    for a in e.atoms() {
        if let Atom::Jet(Dependent::Beta, idx) = a {
            let v = jets.total_derivative_multi(beta, idx)?;
            out = out.substitute(&a, &v)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn tau_from_translation() {
        let v = derive(
            "T",
            &NonlinearityCase::Arbitrary,
            &NoetherOptions::default(),
        )
        .unwrap();
        assert_eq!(
            v.components[2],
            p("1/2*u_x^2 + 1/2*u_y^2 - 2*(x^2+y^2)*u_t^2 - F(u)")
        );
        assert_eq!(v.characteristic, p("-u_t"));
        // hand expansion: Div τ = −u_t (Δ_H u + f)
        let div = JetSpace::default().divergence(&v.components).unwrap();
        assert_eq!(div, p("-u_t") * equation(&NonlinearityCase::Arbitrary));
    }

    #[test]
    fn verify_detects_non_conservation() {
        let v = ConservedVector {
            symmetry: "none".into(),
            case: NonlinearityCase::Zero,
            components: [Expr::u(), Expr::zero(), Expr::zero()],
            provenance: Provenance::Derived,
            characteristic: Expr::zero(),
            label: None,
            notes: vec![],
        };
        assert_eq!(
            verify_conservation(&v, &JetSpace::default()).unwrap(),
            ConservationCheck::Fail { residual: p("u_x") }
        );
    }

    #[test]
    fn rejected_symmetries_have_no_vector() {
        let e = derive(
            "E",
            &NonlinearityCase::Exponential,
            &NoetherOptions::default(),
        );
        assert!(matches!(
            e,
            Err(ConservationError::NotAccepted {
                witness: Some(_),
                ..
            })
        ));
    }

    #[test]
    fn w_vector_in_the_linear_case() {
        let jets = JetSpace::default();
        let v = derive("W", &NonlinearityCase::Linear, &NoetherOptions::default()).unwrap();
        assert_eq!(v.components[0], p("b*(u_x+2*y*u_t) - u*(b_x+2*y*b_t)"));
        assert!(verify_conservation(&v, &jets).unwrap().is_ok());
    }

    #[test]
    fn compare_self_is_empty() {
        let v = derive(
            "R",
            &NonlinearityCase::Arbitrary,
            &NoetherOptions::default(),
        )
        .unwrap();
        assert!(compare(&v, &v).is_empty());
        let mut w = v.clone();
        w.components[1] += p("x*u");
        let r = compare(&w, &v);
        assert_eq!(
            r.only_published,
            vec![TermDiff {
                component: 2,
                published: Some("x*u".into()),
                derived: None
            }]
        );
    }

    #[test]
    fn concrete_beta_substitution() {
        // β = x y is a solution of Δ_H β = 0
        let jets = JetSpace::default();
        let v = derive("W", &NonlinearityCase::Zero, &NoetherOptions::default()).unwrap();
        let c = v.with_beta(&p("x*y"), &jets).unwrap();
        assert!(!c
            .components
            .iter()
            .any(|e| e.contains_dependent(Dependent::Beta)));
        assert!(verify_conservation(&c, &jets).unwrap().is_ok());
        assert_eq!(c.characteristic, p("x*y"));
    }
}
