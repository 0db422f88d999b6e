use kohn_noether::conservation::ConservedVector;
use kohn_noether::expr::{to_json, to_latex, to_text, Expr};
use kohn_noether::noether::{NoetherCertificate, Verdict};
use kohn_noether::symmetry::{display_name, latex_name, PointVectorField};
use num_rational::BigRational;
use serde_json::Value;

pub fn expr_json(e: &Expr) -> Value {
    serde_json::to_value(to_json(e)).expect("expression json")
}

fn operator(field: &PointVectorField, show: fn(&Expr) -> String, partials: [&str; 4]) -> String {
    let mut out = String::new();
    for (c, d) in field.components().into_iter().zip(partials) {
        if c.is_zero() {
            continue;
        }
        let mut s = show(c);
        let negative = s.starts_with('-');
        if negative && c.len() == 1 {
            s.remove(0);
        }
        let term = if s == "1" {
            d.to_string()
        } else if c.len() == 1 {
            format!("{s} {d}")
        } else {
            format!("({s}) {d}")
        };
        match (out.is_empty(), negative && c.len() == 1) {
            (true, true) => out.push_str(&format!("-{term}")),
            (true, false) => out.push_str(&term),
            (false, true) => out.push_str(&format!(" - {term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn field_text(field: &PointVectorField) -> String {
    let body = operator(field, to_text, ["∂x", "∂y", "∂t", "∂u"]);
    format!("{} = {body}", display_name(&field.name))
}

pub fn field_latex(field: &PointVectorField) -> String {
    let partials = ["\\partial_x", "\\partial_y", "\\partial_t", "\\partial_u"];
    let body = operator(field, to_latex, partials);
    format!("{} = {body}", latex_name(&field.name))
}

pub fn field_json(field: &PointVectorField) -> Value {
    serde_json::json!({
        "name": field.name,
        "display": display_name(&field.name),
        "xi": field.xi.iter().map(expr_json).collect::<Vec<_>>(),
        "eta": expr_json(&field.eta),
    })
}

/// `c` with `defect = c·L`, when the defect is a multiple of the Lagrangian.
pub fn lagrangian_multiple(defect: &Expr, lagrangian: &Expr) -> Option<BigRational> {
    let (m, c) = lagrangian.terms().next()?;
    let ratio = defect.coefficient(m) / c;
    (lagrangian.scale(&ratio) == *defect).then_some(ratio)
}

pub fn certificate_latex(cert: &NoetherCertificate) -> String {
    let mut out = format!(
        "{}:\\ \\text{{{}}},\\quad \\text{{defect}} = {}",
        latex_name(&cert.symmetry),
        cert.verdict_name(),
        to_latex(&cert.defect)
    );
    match &cert.verdict {
        Verdict::Accepted { phi, .. } => {
            for (i, c) in phi.iter().enumerate() {
                out.push_str(&format!(",\\quad \\phi^{} = {}", i + 1, to_latex(c)));
            }
        }
        Verdict::Rejected { witness } => {
            out.push_str(&format!(",\\quad E_u = {}", to_latex(witness)))
        }
        Verdict::Pending { .. } => {}
    }
    out
}

pub fn vector_latex(v: &ConservedVector) -> String {
    let name = match v.label.as_deref() {
        Some(l @ ("tau" | "sigma" | "chi" | "upsilon")) => format!("\\{l}"),
        Some(l) => l.to_string(),
        None => latex_name(&v.symmetry),
    };
    let mut out = String::new();
    for (i, c) in v.components.iter().enumerate() {
        out.push_str(&format!("{name}^{} &= {} \\\\\n", i + 1, to_latex(c)));
    }
    out
}
