//! Published results used as fixtures: bracket tables, the Noether
//! classification and the explicit conserved vectors.
//!
//! Everything here is transcribed as printed. Where a display has no
//! operator between two lines a `+` is assumed and a note is attached.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::case::NonlinearityCase;
use crate::symmetry::{BracketEntry, BracketTable, BASE_GROUP};

/// One published bracket table. Labels use catalog identifiers (`Xt`, `V1`,
/// `D`), `V` for `Z − U` and `W[...]` for a member of the `W_β` family.
#[derive(Debug, Clone, Copy)]
pub struct PublishedTable {
    pub id: &'static str,
    pub caption: &'static str,
    pub names: &'static [&'static str],
    pub rows: &'static [&'static [&'static str]],
}

const G4: &[&str] = &["T", "R", "Xt", "Yt"];

pub const TABLE_ARBITRARY: PublishedTable = PublishedTable {
    id: "published table, f arbitrary",
    caption: "f(u) arbitrary",
    names: G4,
    rows: &[
        &["0", "0", "0", "0"],
        &["0", "0", "Yt", "-Xt"],
        &["0", "-Yt", "0", "4T"],
        &["0", "Xt", "-4T", "0"],
    ],
};

pub const TABLE_ZERO: PublishedTable = PublishedTable {
    id: "published table, f = 0",
    caption: "f(u) = 0, V := Z - U",
    names: &["T", "R", "Xt", "Yt", "U", "W", "V1", "V2", "V3", "Z"],
    rows: &[
        &["0", "0", "0", "0", "0", "W[Tb]", "V", "Xt", "Yt", "2T"],
        &["0", "0", "Yt", "-Xt", "0", "W[Rb]", "0", "V3", "-V2", "0"],
        &[
            "0", "-Yt", "0", "4T", "0", "W[Xtb]", "V2", "-6R", "2V", "Xt",
        ],
        &[
            "0", "Xt", "-4T", "0", "0", "W[Ytb]", "V3", "-2V", "-6R", "Yt",
        ],
        &["0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
        &[
            "-W[Tb]", "-W[Rb]", "-W[Xtb]", "-W[Ytb]", "0", "0", "W[V1b]", "W[V2b]", "W[V3b]",
            "W[Zb]",
        ],
        &[
            "-V", "0", "-V2", "-V3", "0", "-W[V1b]", "0", "0", "0", "-2V1",
        ],
        &[
            "-Xt", "-V3", "6R", "2V", "0", "-W[V2b]", "0", "0", "4V1", "-V2",
        ],
        &[
            "-Yt", "V2", "-2V", "6R", "0", "-W[V3b]", "0", "-4V1", "0", "-V3",
        ],
        &[
            "-2T", "0", "-Xt", "-Yt", "0", "-W[Zb]", "2V1", "V2", "V3", "0",
        ],
    ],
};

pub const TABLE_LINEAR: PublishedTable = PublishedTable {
    id: "published table, f = u",
    caption: "f(u) = u",
    names: &["T", "R", "Xt", "Yt", "U", "W"],
    rows: &[
        &["0", "0", "0", "0", "0", "W[Tb]"],
        &["0", "0", "Yt", "-Xt", "0", "W[Rb]"],
        &["0", "-Yt", "0", "4T", "0", "W[Xtb]"],
        &["0", "Xt", "4T", "0", "0", "W[Ytb]"],
        &["0", "0", "0", "0", "0", "0"],
        &["-W[Tb]", "-W[Rb]", "-W[Xtb]", "-W[Ytb]", "0", "0"],
    ],
};

pub const TABLE_POWER: PublishedTable = PublishedTable {
    id: "published table, f = u^p",
    caption: "f(u) = u^p, p not 0, 1, 3",
    names: &["T", "R", "Xt", "Yt", "D"],
    rows: &[
        &["0", "0", "0", "0", "2T"],
        &["0", "0", "Yt", "-Xt", "0"],
        &["0", "-Yt", "0", "4T", "Xt"],
        &["0", "Xt", "-4T", "0", "Yt"],
        &["-2T", "0", "-Xt", "-Yt", "0"],
    ],
};

pub const TABLE_EXPONENTIAL: PublishedTable = PublishedTable {
    id: "published table, f = e^u",
    caption: "f(u) = e^u",
    names: &["T", "R", "Xt", "Yt", "E"],
    rows: &[
        &["0", "0", "0", "0", "2T"],
        &["0", "0", "Yt", "-Xt", "0"],
        &["0", "-Yt", "0", "4T", "Xt"],
        &["0", "Xt", "-4T", "0", "Yt"],
        &["-2T", "0", "-Xt", "-Yt", "0"],
    ],
};

/// The published table for a case, if one is printed.
pub fn published_table(case: &NonlinearityCase) -> Option<PublishedTable> {
    match case {
        NonlinearityCase::Arbitrary => Some(TABLE_ARBITRARY),
        NonlinearityCase::Zero => Some(TABLE_ZERO),
        NonlinearityCase::Linear => Some(TABLE_LINEAR),
        NonlinearityCase::Power(_) => Some(TABLE_POWER),
        NonlinearityCase::Exponential => Some(TABLE_EXPONENTIAL),
        NonlinearityCase::Cubic => None,
    }
}

/// A parsed table label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PublishedEntry {
    Combination(BTreeMap<String, BigRational>),
    WFamily,
}

/// Parses `0`, `[-][n]Id`, `[-][n]V` and `[-]W[...]`.
pub fn parse_label(label: &str) -> Option<PublishedEntry> {
    let label = label.trim();
    if label == "0" {
        return Some(PublishedEntry::Combination(BTreeMap::new()));
    }
    let (neg, rest) = match label.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, label),
    };
    if rest.starts_with("W[") && rest.ends_with(']') {
        return Some(PublishedEntry::WFamily);
    }
    let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
    let id = &rest[digits.len()..];
    let mut c = if digits.is_empty() {
        BigRational::one()
    } else {
        BigRational::from_integer(digits.parse::<i64>().ok()?.into())
    };
    if neg {
        c = -c;
    }
    let mut out = BTreeMap::new();
    match id {
        "V" => {
            out.insert("Z".to_string(), c.clone());
            out.insert("U".to_string(), -c);
        }
        "T" | "R" | "Xt" | "Yt" | "U" | "Z" | "V1" | "V2" | "V3" | "D" | "E" | "D3" => {
            out.insert(id.to_string(), c);
        }
        _ => return None,
    }
    Some(PublishedEntry::Combination(out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellStatus {
    /// Non-`W` entry equal to the computed combination.
    Match,
    /// Non-`W` entry that differs from the computed combination.
    Mismatch,
    /// `W` row or column, computed entry lies in the family.
    Structural,
    /// `W` row or column whose computed entry is not in the family.
    StructuralFailure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComparison {
    pub row: String,
    pub col: String,
    pub published: String,
    pub computed: String,
    pub status: CellStatus,
    /// Set on `W` cells whose printed label and computed value disagree
    /// beyond the structural check.
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct TableComparison {
    pub table: &'static str,
    pub cells: Vec<CellComparison>,
}

impl TableComparison {
    pub fn passes(&self) -> bool {
        self.cells
            .iter()
            .all(|c| matches!(c.status, CellStatus::Match | CellStatus::Structural))
    }

    pub fn failures(&self) -> Vec<&CellComparison> {
        self.cells
            .iter()
            .filter(|c| {
                matches!(
                    c.status,
                    CellStatus::Mismatch | CellStatus::StructuralFailure
                )
            })
            .collect()
    }

    pub fn notes(&self) -> Vec<&CellComparison> {
        self.cells.iter().filter(|c| c.note.is_some()).collect()
    }
}

/// Cell-by-cell comparison against a published table with the same labels.
pub fn compare_table(computed: &BracketTable, published: &PublishedTable) -> TableComparison {
    let mut cells = Vec::new();
    for (i, row) in published.names.iter().enumerate() {
        for (j, col) in published.names.iter().enumerate() {
            let label = published.rows[i][j];
            let entry = computed.entry(row, col);
            let computed_label = entry
                .map(BracketEntry::label)
                .unwrap_or_else(|| "MISSING".into());
            let w_cell = *row == "W" || *col == "W";
            let expected = parse_label(label);
            let (status, note) = match (w_cell, entry, &expected) {
                (true, Some(BracketEntry::WFamily { .. } | BracketEntry::Zero), Some(p)) => {
                    let printed_zero = matches!(p, PublishedEntry::Combination(m) if m.is_empty());
                    let got_zero = matches!(entry, Some(BracketEntry::Zero));
                    let note = (printed_zero != got_zero)
                        .then(|| format!("printed {label}, computed {computed_label}"))
                        .or_else(|| sign_note(label, entry.unwrap(), row, col));
                    (CellStatus::Structural, note)
                }
                (true, _, _) => (CellStatus::StructuralFailure, None),
                (false, Some(e), Some(PublishedEntry::Combination(m))) if e.is_classified() => {
                    if e.coefficients() == *m {
                        (CellStatus::Match, None)
                    } else {
                        (CellStatus::Mismatch, None)
                    }
                }
                _ => (CellStatus::Mismatch, None),
            };
            cells.push(CellComparison {
                row: row.to_string(),
                col: col.to_string(),
                published: label.to_string(),
                computed: computed_label,
                status,
                note,
            });
        }
    }
    TableComparison {
        table: published.id,
        cells,
    }
}

/// With `[S, W_β] = W_{Sβ}`, the printed sign of a `W` cell has to be `+`
/// in the `W` column and `−` in the `W` row, so `[S, W]` and `[W, S]`
/// become negatives of each other.
fn sign_note(label: &str, entry: &BracketEntry, row: &str, col: &str) -> Option<String> {
    if !matches!(entry, BracketEntry::WFamily { .. })
        || !label.trim_start_matches('-').starts_with("W[")
    {
        return None;
    }
    let printed_negative = label.starts_with('-');
    let expected_negative = row == "W" && col != "W";
    (printed_negative != expected_negative).then(|| {
        format!("printed {label}; antisymmetry with the W column requires the opposite sign")
    })
}

/// Accepted Noether symmetries per case as stated in the published
/// classification.
pub fn published_noether_set(case: &NonlinearityCase) -> Vec<&'static str> {
    let mut out = BASE_GROUP.to_vec();
    match case {
        NonlinearityCase::Zero => out.extend(["W", "V1", "V2", "V3"]),
        NonlinearityCase::Linear => out.push("W"),
        NonlinearityCase::Cubic => out.extend(["V1", "V2", "V3", "D3"]),
        _ => {}
    }
    out
}

/// A published conserved vector as parser text.
#[derive(Debug, Clone, Copy)]
pub struct PublishedVector {
    pub symmetry: &'static str,
    pub label: &'static str,
    pub components: [&'static str; 3],
    /// Per component: how a typographically ambiguous display was read.
    pub notes: [Option<&'static str>; 3],
    /// A second reading of a component, where the display allows one.
    pub alternatives: [Option<&'static str>; 3],
}

const NONE3: [Option<&str>; 3] = [None, None, None];

pub const TAU: PublishedVector = PublishedVector {
    symmetry: "T",
    label: "tau",
    components: [
        "-2*y*u_t^2 - u_x*u_t",
        "2*x*u_t^2 - u_y*u_t",
        "1/2*u_x^2 + 1/2*u_y^2 - 2*(x^2+y^2)*u_t^2 - F(u)",
    ],
    notes: NONE3,
    alternatives: NONE3,
};

pub const SIGMA: PublishedVector = PublishedVector {
    symmetry: "R",
    label: "sigma",
    components: [
        "-1/2*y*u_x^2 + 1/2*y*u_y^2 + 2*y*(x^2+y^2)*u_t^2 + x*u_x*u_y - y*F(u)",
        "-1/2*x*u_x^2 - 1/2*x*u_y^2 - 2*x*(x^2+y^2)*u_t^2 - y*u_x*u_y + x*F(u)",
        "-2*y^2*u_x^2 - 2*x^2*u_y^2 + 4*x*y*u_x*u_y - 4*y*(x^2+y^2)*u_x*u_t + 4*x*(x^2+y^2)*u_y*u_t",
    ],
    notes: NONE3,
    alternatives: NONE3,
};

pub const CHI: PublishedVector = PublishedVector {
    symmetry: "Xt",
    label: "chi",
    components: [
        "-1/2*u_x^2 + 1/2*u_y^2 + 2*(x^2+3*y^2)*u_t^2 + 2*y*u_x*u_t - 2*x*u_y*u_t - F(u)",
        "-4*x*y*u_t^2 - u_x*u_y + 2*x*u_x*u_t + 2*y*u_y*u_t",
        "-3*y*u_x^2 - y*u_y^2 + 4*y*(x^2+y^2)*u_t^2 + 2*x*u_x*u_y - 4*(x^2+y^2)*u_x*u_t + 2*y*F(u)",
    ],
    notes: NONE3,
    alternatives: NONE3,
};

pub const UPSILON: PublishedVector = PublishedVector {
    symmetry: "Yt",
    label: "upsilon",
    components: [
        "-4*x*y*u_t^2 - u_x*u_y - 2*x*u_x*u_t - 2*y*u_y*u_t",
        "1/2*u_x^2 - 1/2*u_y^2 + 2*(3*x^2+y^2)*u_t^2 + 2*y*u_x*u_t - 2*x*u_y*u_t - F(u)",
        "x*u_x^2 + 3*x*u_y^2 - 4*x*(x^2+y^2)*u_t^2 - 2*y*u_x*u_y - 4*(x^2+y^2)*u_y*u_t - 2*x*F(u)",
    ],
    notes: NONE3,
    alternatives: NONE3,
};

pub const A_V1: PublishedVector = PublishedVector {
    symmetry: "V1",
    label: "A",
    components: [
        "-1/2*(t*x-x^2*y-y^3)*u_x^2 + 1/2*(t*x-x^2*y-y^3)*u_y^2 + 2*t*(x^3+x*y^2-t*y)*u_t^2 \
         - (x^3+x*y^2+t*y)*u_x*u_y - (t^2-(x^2+y^2)^2)*u_x*u_t - 2*t*(x^2+y^2)*u_y*u_t \
         - t*u*u_x - 2*t*y*u*u_t + y*u^2",
        "1/2*(x^3+t*y+x*y^2)*u_x^2 - 1/2*(x^3+t*y+x*y^2)*u_y^2 + 2*t*(x^2*y+y^3+t*x)*u_t^2 \
         - (t*x-x^2*y-y^3)*u_x*u_y + 2*t*(x^2+y^2)*u_x*u_t - (t^2-(x^2+y^2)^2)*u_y*u_t \
         - t*u*u_y + 2*t*x*u*u_t - x*u^2",
        "1/2*(t^2-x^4-4*t*x*y+2*x^2*y^2+3*y^4)*u_x^2 + 1/2*(t^2+3*x^4+4*t*x*y+2*x^2*y^2-y^4)*u_y^2 \
         - 2*(x^2+y^2)*(t^2-(x^2+y^2)^2)*u_t^2 + 2*(t*(x^2-y^2)-2*x*y*(x^2+y^2))*u_x*u_y \
         - 4*(x^2+y^2)*(t*x-x^2*y-y^3)*u_x*u_t - 4*(x^2+y^2)*(x^3+t*y+x*y^2)*u_y*u_t \
         - 2*t*y*u*u_x + 2*t*x*u*u_y - 4*t*(x^2+y^2)*u*u_t + 2*(x^2+y^2)*u^2",
    ],
    notes: NONE3,
    alternatives: NONE3,
};

pub const B_V2: PublishedVector = PublishedVector {
    symmetry: "V2",
    label: "B",
    components: [
        "-1/2*(t-4*x*y)*u_x^2 + 1/2*(t-4*x*y)*u_y^2 + (2*t*(x^2+3*y^2)-4*x*y*(x^2+y^2))*u_t^2 \
         - (3*x^2-y^2)*u_x*u_y + 2*(x^3+t*y+x*y^2)*u_x*u_t - 2*(t*x-x^2*y-y^3)*u_y*u_t \
         + 2*y*u*u_x + 4*y^2*u*u_t",
        "1/2*(3*x^2-y^2)*u_x^2 - 1/2*(3*x^2-y^2)*u_y^2 + 2*(x^4-2*t*x*y-y^4)*u_t^2 - (t-4*x*y)*u_x*u_y \
         + 2*(t*x-x^2*y-y^3)*u_x*u_t + 2*(x^3+t*y+x*y^2)*u_y*u_t + 2*y*u*u_y - 4*x*y*u*u_t - u^2",
        "(7*x*y^2-x^3-3*t*y)*u_x^2 + (5*x^3-3*x*y^2-t*y)*u_y^2 + 4*(x^2+y^2)*(x^3+t*y+x*y^2)*u_t^2 \
         + 2*(t*x-7*x^2*y+y^3)*u_x*u_y - 4*(t-4*x*y)*(x^2+y^2)*u_x*u_t - 4*(3*x^4+2*x^2*y^2-y^4)*u_y*u_t \
         + 2*x*u^2 + 4*y^2*u*u_x - 4*x*y*u*u_y + 8*y*(x^2+y^2)*u*u_t",
    ],
    notes: NONE3,
    alternatives: NONE3,
};

pub const C_V3: PublishedVector = PublishedVector {
    symmetry: "V3",
    label: "C",
    components: [
        "-1/2*(x^2-3*y^2)*u_x^2 + 1/2*(x^2-3*y^2)*u_y^2 + (2*x^4-4*t*x*y-2*y^4)*u_t^2 \
         - (t+4*x*y)*u_x*u_y + (2*t*x-2*x^2*y+2*y^3)*u_x*u_t - (2*x^3+2*t*y+2*x*y^2)*u_y*u_t \
         - 4*x*y*u*u_t - 2*x*u*u_x + u^2",
        "1/2*(t+4*x*y)*u_x^2 - 1/2*(t+4*x*y)*u_y^2 + (6*t*x^2+4*x^3*y+2*t*y^2+4*x*y^3)*u_t^2 \
         - (x^2-3*y^2)*u_x*u_y + 2*(x^3+t*y+x*y^2)*u_x*u_t - 2*(t*x-x^2*y-y^3)*u_y*u_t \
         + 2*x*u_y*u + 4*x^2*u_t*u",
        "(t*x-3*x^2*y+5*y^3)*u_x^2 + (3*t*x+7*x^2*y-y^3)*u_y^2 \
         + (-4*t*x^3+4*x^4*y-4*t*x*y^2+8*x^2*y^3+y^5)*u_t^2 + 2*(x^3-t*y-7*x*y^2)*u_x*u_y \
         - 2*(2*x^4-4*x^2*y^2-6*y^4)*u_x*u_t - 4*(x^2+y^2)*(t+4*x*y)*u_y*u_t \
         - 8*x^3*u*u_t - 8*x*y^2*u*u_t - 4*x^2*u*u_y - 8*x*y*u*u_x + 2*y*u^2",
    ],
    notes: [
        None,
        Some("the last displayed line starts without an operator; '+' assumed before 2x u_y u"),
        Some("the second displayed line starts without an operator; '+' assumed before the u_t^2 term"),
    ],
    alternatives: NONE3,
};

pub const W_BETA: PublishedVector = PublishedVector {
    symmetry: "W",
    label: "W",
    components: [
        "b*(u_x+2*y*u_t) - u*(b_x+2*y*b_t)",
        "b*(u_y-2*x*u_t) - u*(b_y-2*x*b_t)",
        "b*(-2*x*u_y+2*y*u_x+4*(x^2+y^2)*u_t) + 2*u*(x*b_y-y*b_x-2*(x^2+y^2)*b_t)",
    ],
    notes: [
        None,
        None,
        Some("the bracket opened after beta is never closed; it is read as closing before '+2u'"),
    ],
    alternatives: [
        None,
        None,
        Some("b*(-2*x*u_y+2*y*u_x+4*(x^2+y^2)*u_t + 2*u*(x*b_y-y*b_x-2*(x^2+y^2)*b_t))"),
    ],
};

/// Vectors printed for all `f`, with `F` left opaque.
pub const GENERAL_VECTORS: [PublishedVector; 4] = [TAU, SIGMA, CHI, UPSILON];

/// Vectors printed for `f = 0` beyond the general ones.
pub const ZERO_VECTORS: [PublishedVector; 4] = [A_V1, B_V2, C_V3, W_BETA];

/// Published vectors applicable to a case: the general four (specialized
/// through `F`) plus the case's own.
pub fn published_vector_set(case: &NonlinearityCase) -> Vec<PublishedVector> {
    let mut out = GENERAL_VECTORS.to_vec();
    match case {
        NonlinearityCase::Zero => out.extend(ZERO_VECTORS),
        NonlinearityCase::Linear => out.push(W_BETA),
        NonlinearityCase::Arbitrary => {}
        _ => out.clear(),
    }
    out
}

impl PublishedEntry {
    pub fn is_zero(&self) -> bool {
        matches!(self, PublishedEntry::Combination(m) if m.values().all(Zero::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn labels() {
        assert!(parse_label("0").unwrap().is_zero());
        assert_eq!(
            parse_label("-6R"),
            Some(PublishedEntry::Combination(
                [("R".to_string(), q(-6))].into()
            ))
        );
        assert_eq!(
            parse_label("2V"),
            Some(PublishedEntry::Combination(
                [("Z".to_string(), q(2)), ("U".to_string(), q(-2))].into()
            ))
        );
        assert_eq!(parse_label("-W[V1b]"), Some(PublishedEntry::WFamily));
        assert_eq!(parse_label("Q"), None);
    }

    #[test]
    fn tables_are_square_and_parse() {
        for t in [
            TABLE_ARBITRARY,
            TABLE_ZERO,
            TABLE_LINEAR,
            TABLE_POWER,
            TABLE_EXPONENTIAL,
        ] {
            assert_eq!(t.rows.len(), t.names.len(), "{}", t.id);
            for row in t.rows {
                assert_eq!(row.len(), t.names.len(), "{}", t.id);
                for l in *row {
                    assert!(parse_label(l).is_some(), "{} {l}", t.id);
                }
            }
        }
    }

    #[test]
    fn vectors_parse() {
        for v in GENERAL_VECTORS.iter().chain(ZERO_VECTORS.iter()) {
            for c in v.components.iter().chain(v.alternatives.iter().flatten()) {
                parse(c).unwrap_or_else(|e| panic!("{}: {e}", v.label));
            }
        }
    }

    #[test]
    fn noether_sets() {
        assert_eq!(
            published_noether_set(&NonlinearityCase::Exponential),
            BASE_GROUP
        );
        assert_eq!(published_noether_set(&NonlinearityCase::Zero).len(), 8);
    }
}
