//! Lie point symmetries of `Δ_H u + f(u) = 0` for each nonlinearity.

use num_rational::Rational64;
use num_traits::One;

use crate::case::NonlinearityCase;
use crate::expr::{big, Expr};

use super::{PointVectorField, SymmetryError};

/// A generator by identifier. Panics on an unknown identifier; `D` needs an
/// exponent and is built by [`dilation`].
pub fn generator(id: &str) -> PointVectorField {
    let f = PointVectorField::from_text;
    match id {
        "T" => f("T", ["0", "0", "1"], "0"),
        "R" => f("R", ["y", "-x", "0"], "0"),
        "Xt" => f("Xt", ["1", "0", "-2*y"], "0"),
        "Yt" => f("Yt", ["0", "1", "2*x"], "0"),
        "V1" => f(
            "V1",
            [
                "x*t - x^2*y - y^3",
                "y*t + x^3 + x*y^2",
                "t^2 - (x^2+y^2)^2",
            ],
            "-t*u",
        ),
        "V2" => f(
            "V2",
            ["t - 4*x*y", "3*x^2 - y^2", "-(2*y*t + 2*x^3 + 2*x*y^2)"],
            "2*y*u",
        ),
        "V3" => f(
            "V3",
            ["x^2 - 3*y^2", "t + 4*x*y", "2*x*t - 2*x^2*y - 2*y^3"],
            "-2*x*u",
        ),
        "Z" => f("Z", ["x", "y", "2*t"], "0"),
        "U" => f("U", ["0", "0", "0"], "u"),
        "W" => f("W", ["0", "0", "0"], "b"),
        "E" => f("E", ["x", "y", "2*t"], "-2"),
        "D3" => dilation(Rational64::from_integer(3)).renamed("D3"),
        other => panic!("unknown generator '{other}'"),
    }
}

/// `D_p = x∂_x + y∂_y + 2t∂_t + 2/(1−p) u∂_u`, for `p ≠ 1`.
pub fn dilation(p: Rational64) -> PointVectorField {
    let c = Rational64::from_integer(2) / (Rational64::one() - p);
    PointVectorField::new(
        "D",
        [Expr::x(), Expr::y(), Expr::int(2) * Expr::t()],
        Expr::u().scale(&big(c)),
    )
}

/// `W_β` for a concrete `β(x, y, t)`.
pub fn w_beta_with(beta: &Expr, name: &str) -> PointVectorField {
    PointVectorField::new(
        name,
        [Expr::zero(), Expr::zero(), Expr::zero()],
        beta.clone(),
    )
}

/// The symmetry algebra of each case, in the order of its bracket table.
pub fn catalog(case: &NonlinearityCase) -> Vec<PointVectorField> {
    let ids: &[&str] = match case {
        NonlinearityCase::Arbitrary => &["T", "R", "Xt", "Yt"],
        NonlinearityCase::Zero => &["T", "R", "Xt", "Yt", "U", "W", "V1", "V2", "V3", "Z"],
        NonlinearityCase::Linear => &["T", "R", "Xt", "Yt", "U", "W"],
        NonlinearityCase::Power(_) => &["T", "R", "Xt", "Yt"],
        NonlinearityCase::Exponential => &["T", "R", "Xt", "Yt", "E"],
        NonlinearityCase::Cubic => &["T", "R", "Xt", "Yt", "V1", "V2", "V3", "D3"],
    };
    let mut out: Vec<PointVectorField> = ids.iter().map(|id| generator(id)).collect();
    if let NonlinearityCase::Power(p) = case {
        out.push(dilation(*p));
    }
    out
}

/// The identifiers of the subgroup `G_f = {T, R, X̃, Ỹ}` present for every `f`.
pub const BASE_GROUP: [&str; 4] = ["T", "R", "Xt", "Yt"];

/// Canonical identifier for user-facing spellings (`X~`, `X̃`, `W_β`, ...).
pub fn canonical_id(name: &str) -> Option<&'static str> {
    Some(match name {
        "T" => "T",
        "R" => "R",
        "Xt" | "X~" | "X̃" | "Xtilde" => "Xt",
        "Yt" | "Y~" | "Ỹ" | "Ytilde" => "Yt",
        "V1" | "V₁" => "V1",
        "V2" | "V₂" => "V2",
        "V3" | "V₃" => "V3",
        "Z" => "Z",
        "U" => "U",
        "W" | "Wb" | "W_b" | "W_β" | "Wβ" => "W",
        "E" => "E",
        "D" | "Dp" | "D_p" => "D",
        "D3" | "D_3" | "D₃" => "D3",
        _ => return None,
    })
}

pub fn find(case: &NonlinearityCase, name: &str) -> Result<PointVectorField, SymmetryError> {
    let id = canonical_id(name).unwrap_or(name);
    catalog(case)
        .into_iter()
        .find(|g| g.name == id)
        .ok_or_else(|| SymmetryError::UnknownSymmetry {
            name: name.to_string(),
            case: case.selector(),
        })
}

pub fn display_name(id: &str) -> String {
    match id {
        "Xt" => "X̃".into(),
        "Yt" => "Ỹ".into(),
        "W" => "W_β".into(),
        "D" => "D_p".into(),
        "D3" => "D_3".into(),
        other => other.into(),
    }
}

pub fn latex_name(id: &str) -> String {
    match id {
        "Xt" => "\\tilde{X}".into(),
        "Yt" => "\\tilde{Y}".into(),
        "W" => "W_{\\beta}".into(),
        "D" => "D_{p}".into(),
        "D3" => "D_{3}".into(),
        "V1" | "V2" | "V3" => format!("V_{{{}}}", &id[1..]),
        other => other.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn catalog_sizes() {
        let sizes: Vec<usize> = NonlinearityCase::standard(&[2])
            .iter()
            .map(|c| catalog(c).len())
            .collect();
        assert_eq!(sizes, [4, 10, 6, 5, 5, 8]);
    }

    #[test]
    fn displayed_coefficients() {
        let xt = find(&NonlinearityCase::Arbitrary, "X~").unwrap();
        assert_eq!(xt.xi[0], Expr::one());
        assert_eq!(xt.xi[2], parse("-2*y").unwrap());
        let v2 = find(&NonlinearityCase::Zero, "V2").unwrap();
        assert_eq!(v2.xi[0], parse("t - 4*x*y").unwrap());
        assert_eq!(v2.eta, parse("2*y*u").unwrap());
    }

    #[test]
    fn dilation_weight_at_p_two() {
        let d = find(&NonlinearityCase::Power(Rational64::from_integer(2)), "D_p").unwrap();
        assert_eq!(d.eta, parse("-2*u").unwrap());
        let d3 = find(&NonlinearityCase::Cubic, "D3").unwrap();
        assert_eq!(d3.eta, parse("-u").unwrap());
    }

    #[test]
    fn unknown_names_are_errors() {
        assert!(matches!(
            find(&NonlinearityCase::Arbitrary, "V1"),
            Err(SymmetryError::UnknownSymmetry { .. })
        ));
    }
}
