//! Commutator tables with every entry decomposed over the catalog.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::case::NonlinearityCase;
use crate::expr::{to_json, to_latex, to_text, Atom, Expr, Monomial};
use crate::jet::JetSpace;
use crate::linsolve::{rank, solve, Equation};

use super::catalog::{catalog, display_name, latex_name};
use super::{PointVectorField, SymmetryError};

/// A classified commutator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketEntry {
    Zero,
    /// Exact rational combination of catalog generators, in catalog order.
    Combination(Vec<(String, BigRational)>),
    /// A member `W_{β'}` of the infinite family, with its computed argument.
    WFamily {
        beta: Expr,
    },
    Unclassified {
        residual: PointVectorField,
    },
}

impl BracketEntry {
    pub fn is_classified(&self) -> bool {
        !matches!(self, BracketEntry::Unclassified { .. })
    }

    /// Coefficients by generator identifier.
    pub fn coefficients(&self) -> BTreeMap<String, BigRational> {
        match self {
            BracketEntry::Combination(terms) => terms.iter().cloned().collect(),
            _ => BTreeMap::new(),
        }
    }

    pub fn label(&self) -> String {
        self.render(display_name, to_text)
    }

    pub fn latex_label(&self) -> String {
        self.render(latex_name, to_latex)
    }

    fn render(&self, name: fn(&str) -> String, expr: impl Fn(&Expr) -> String) -> String {
        match self {
            BracketEntry::Zero => "0".into(),
            BracketEntry::WFamily { beta } => format!("W[{}]", expr(beta)),
            BracketEntry::Unclassified { .. } => "UNCLASSIFIED".into(),
            BracketEntry::Combination(terms) => {
                let mut terms = terms.clone();
                // the combination Z − U recurs often enough to get its own name
                let z = terms.iter().position(|(n, _)| n == "Z");
                let u = terms.iter().position(|(n, _)| n == "U");
                if let (Some(zi), Some(ui)) = (z, u) {
                    if terms[zi].1 == -terms[ui].1.clone() {
                        let c = terms[zi].1.clone();
                        terms.retain(|(n, _)| n != "Z" && n != "U");
                        terms.push(("V".into(), c));
                    }
                }
                let mut out = String::new();
                for (i, (n, c)) in terms.iter().enumerate() {
                    let mag = c.abs();
                    let sign = if c.is_negative() { "-" } else { "" };
                    let head = if i == 0 {
                        sign.to_string()
                    } else if c.is_negative() {
                        " - ".into()
                    } else {
                        " + ".into()
                    };
                    let coeff = if mag.is_one() {
                        String::new()
                    } else {
                        mag.to_string()
                    };
                    let id = if n == "V" { "V".to_string() } else { name(n) };
                    out.push_str(&format!("{head}{coeff}{id}"));
                }
                out
            }
        }
    }
}

type Column = (usize, Monomial);

/// Character count without combining diacritics, so `X̃` is one column.
fn display_width(s: &str) -> usize {
    s.chars()
        .filter(|c| !('\u{300}'..='\u{36f}').contains(c))
        .count()
}

/// Sparse coordinate vector of a field over (component, monomial).
fn coordinates(f: &PointVectorField) -> Vec<(Column, BigRational)> {
    let mut out = Vec::new();
    for (i, comp) in f.components().iter().enumerate() {
        for (m, c) in comp.terms() {
            out.push(((i, m.clone()), c.clone()));
        }
    }
    out
}

fn is_w_family(f: &PointVectorField) -> bool {
    f.xi.iter().all(Expr::is_zero)
        && !f.eta.is_zero()
        && !f
            .eta
            .atoms()
            .iter()
            .any(|a| a.is_u() || matches!(a, Atom::Opaque(_)))
}

/// Rank of the non-`W` generators as coefficient vectors.
pub fn generator_rank(gens: &[PointVectorField]) -> usize {
    let mut columns: BTreeMap<Column, usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for g in gens {
        let mut row = BTreeMap::new();
        for (col, c) in coordinates(g) {
            let n = columns.len();
            let j = *columns.entry(col).or_insert(n);
            row.insert(j, c);
        }
        rows.push(row);
    }
    rank(rows, columns.len())
}

/// Decomposes `f` over the generators. `W`-shaped results are reported
/// structurally when the family is part of the catalog.
pub fn classify(f: &PointVectorField, gens: &[PointVectorField]) -> BracketEntry {
    if f.is_zero() {
        return BracketEntry::Zero;
    }
    let has_w = gens.iter().any(|g| g.name == "W");
    if has_w && is_w_family(f) {
        return BracketEntry::WFamily {
            beta: f.eta.clone(),
        };
    }
    let basis: Vec<&PointVectorField> = gens.iter().filter(|g| g.name != "W").collect();
    let mut eqs: BTreeMap<Column, Equation> = BTreeMap::new();
    for (j, g) in basis.iter().enumerate() {
        for (col, c) in coordinates(g) {
            eqs.entry(col).or_default().coeffs.insert(j, c);
        }
    }
    for (col, c) in coordinates(f) {
        eqs.entry(col).or_default().rhs = c;
    }
    match solve(eqs.into_values().collect(), basis.len()) {
        Ok(sol) => BracketEntry::Combination(
            basis
                .iter()
                .zip(sol.values)
                .filter(|(_, c)| !c.is_zero())
                .map(|(g, c)| (g.name.clone(), c))
                .collect(),
        ),
        Err(_) => BracketEntry::Unclassified {
            residual: f.clone(),
        },
    }
}

#[derive(Debug, Clone)]
pub struct BracketTable {
    pub case: NonlinearityCase,
    pub names: Vec<String>,
    /// `entries[i][j] = [g_i, g_j]`.
    pub entries: Vec<Vec<BracketEntry>>,
    pub brackets: Vec<Vec<PointVectorField>>,
}

impl BracketTable {
    pub fn entry(&self, row: &str, col: &str) -> Option<&BracketEntry> {
        let i = self.names.iter().position(|n| n == row)?;
        let j = self.names.iter().position(|n| n == col)?;
        Some(&self.entries[i][j])
    }

    pub fn unclassified(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_classified() {
                    out.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let header: Vec<String> = self.names.iter().map(|n| display_name(n)).collect();
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(BracketEntry::label).collect())
            .collect();
        let len = |s: &String| display_width(s);
        let first = header.iter().map(len).max().unwrap_or(1) + 2;
        let widths: Vec<usize> = (0..header.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| len(&r[j]))
                    .chain([len(&header[j])])
                    .max()
                    .unwrap_or(1)
                    + 2
            })
            .collect();
        let pad =
            |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(display_width(s))));
        let mut out = format!("Lie brackets [row, col], {}\n", self.case.describe());
        out.push_str(&pad("", first));
        for (h, w) in header.iter().zip(&widths) {
            out.push_str(&pad(h, *w));
        }
        out.push('\n');
        for (h, row) in header.iter().zip(&cells) {
            out.push_str(&pad(h, first));
            for (c, w) in row.iter().zip(&widths) {
                out.push_str(&pad(c, *w));
            }
            let trimmed = out.trim_end().len();
            out.truncate(trimmed);
            out.push('\n');
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let n = self.names.len();
        let mut out = format!("\\begin{{tabular}}[c]{{|{}}}\\hline\n", "c|".repeat(n + 1));
        let header: Vec<String> = self
            .names
            .iter()
            .map(|s| format!("${}$", latex_name(s)))
            .collect();
        out.push_str(&format!(" & {}\\\\\\hline\n", header.join(" & ")));
        for (i, row) in self.entries.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .map(|e| format!("${}$", e.latex_label()))
                .collect();
            out.push_str(&format!(
                "{} & {}\\\\\\hline\n",
                header[i],
                cells.join(" & ")
            ));
        }
        out.push_str("\\end{tabular}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Vec<Value>> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, e)| {
                        let mut v = json!({
                            "row": self.names[i],
                            "col": self.names[j],
                            "label": e.label(),
                        });
                        match e {
                            BracketEntry::Zero => v["kind"] = json!("zero"),
                            BracketEntry::Combination(terms) => {
                                v["kind"] = json!("combination");
                                v["terms"] = terms
                                    .iter()
                                    .map(|(n, c)| (n.clone(), json!(c.to_string())))
                                    .collect::<serde_json::Map<_, _>>()
                                    .into();
                            }
                            BracketEntry::WFamily { beta } => {
                                v["kind"] = json!("w");
                                v["beta"] = serde_json::to_value(to_json(beta)).unwrap();
                            }
                            BracketEntry::Unclassified { residual } => {
                                v["kind"] = json!("unclassified");
                                v["residual"] = json!(residual
                                    .components()
                                    .iter()
                                    .map(|c| to_text(c))
                                    .collect::<Vec<_>>());
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        json!({
            "case": self.case.selector(),
            "rows": self.names,
            "cols": self.names,
            "entries": entries,
        })
    }
}

/// Full commutator table of the case's catalog.
pub fn bracket_table(
    case: &NonlinearityCase,
    jets: &JetSpace,
) -> Result<BracketTable, SymmetryError> {
    let gens = catalog(case);
    let basis: Vec<PointVectorField> = gens.iter().filter(|g| g.name != "W").cloned().collect();
    let r = generator_rank(&basis);
    if r != basis.len() {
        return Err(SymmetryError::DependentGenerators {
            rank: r,
            count: basis.len(),
        });
    }
    let mut entries = Vec::with_capacity(gens.len());
    let mut brackets = Vec::with_capacity(gens.len());
    for a in &gens {
        let mut row = Vec::with_capacity(gens.len());
        let mut raw = Vec::with_capacity(gens.len());
        for b in &gens {
            let br = a.bracket(b, jets)?;
            row.push(classify(&br, &gens));
            raw.push(br);
        }
        entries.push(row);
        brackets.push(raw);
    }
    Ok(BracketTable {
        case: *case,
        names: gens.iter().map(|g| g.name.clone()).collect(),
        entries,
        brackets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::catalog::generator;
    use num_rational::Rational64;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn heisenberg_relations_of_the_base_group() {
        let jets = JetSpace::default();
        let gens = catalog(&NonlinearityCase::Arbitrary);
        let xy = generator("Xt").bracket(&generator("Yt"), &jets).unwrap();
        assert_eq!(
            classify(&xy, &gens),
            BracketEntry::Combination(vec![("T".into(), q(4))])
        );
        let rx = generator("R").bracket(&generator("Xt"), &jets).unwrap();
        assert_eq!(
            classify(&rx, &gens),
            BracketEntry::Combination(vec![("Yt".into(), q(1))])
        );
        let tt = generator("T").bracket(&generator("T"), &jets).unwrap();
        assert_eq!(classify(&tt, &gens), BracketEntry::Zero);
    }

    #[test]
    fn t_with_v1_is_z_minus_u() {
        let jets = JetSpace::default();
        let gens = catalog(&NonlinearityCase::Zero);
        let b = generator("T").bracket(&generator("V1"), &jets).unwrap();
        let e = classify(&b, &gens);
        assert_eq!(
            e.coefficients(),
            [("U".to_string(), q(-1)), ("Z".to_string(), q(1))].into()
        );
        assert_eq!(e.label(), "V");
    }

    #[test]
    fn w_entries_are_structural() {
        let jets = JetSpace::default();
        let gens = catalog(&NonlinearityCase::Zero);
        let b = generator("T").bracket(&generator("W"), &jets).unwrap();
        assert_eq!(
            classify(&b, &gens),
            BracketEntry::WFamily {
                beta: Expr::beta_jet("t")
            }
        );
        assert_eq!(classify(&b, &gens).label(), "W[b_t]");
    }

    #[test]
    fn out_of_span_is_unclassified() {
        let gens = catalog(&NonlinearityCase::Arbitrary);
        let stray = PointVectorField::from_text("S", ["x^5", "0", "0"], "0");
        assert!(!classify(&stray, &gens).is_classified());
    }

    #[test]
    fn dilation_row_of_power_table() {
        let jets = JetSpace::default();
        let case = NonlinearityCase::Power(Rational64::from_integer(5));
        let table = bracket_table(&case, &jets).unwrap();
        assert_eq!(table.entry("D", "T").unwrap().label(), "-2T");
        assert!(table.unclassified().is_empty());
    }

    #[test]
    fn table_emitters() {
        let jets = JetSpace::default();
        let table = bracket_table(&NonlinearityCase::Linear, &jets).unwrap();
        let j = table.to_json();
        assert_eq!(j["rows"].as_array().unwrap().len(), 6);
        assert_eq!(j["entries"][0][5]["label"], "W[b_t]");
        assert_eq!(j["entries"][0][5]["kind"], "w");
        assert!(table.to_latex().contains("\\tilde{X}"));
        assert!(table.to_text().contains("4T"));
    }
}
