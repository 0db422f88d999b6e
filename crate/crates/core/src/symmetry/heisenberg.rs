//! The group law of `H¹` and the operators built from its vector fields.

use crate::expr::{Atom, Dependent, Dir, Expr, MultiIndex};
use crate::jet::{kohn_laplace, JetError, JetSpace};

use super::PointVectorField;

pub type Point = [Expr; 3];

/// `(x,y,t)·(x₀,y₀,t₀) = (x+x₀, y+y₀, t+t₀+2(xy₀−yx₀))`.
pub fn compose(a: &Point, b: &Point) -> Point {
    [
        &a[0] + &b[0],
        &a[1] + &b[1],
        &a[2] + &b[2] + Expr::int(2) * (&a[0] * &b[1] - &a[1] * &b[0]),
    ]
}

pub fn inverse(a: &Point) -> Point {
    [-&a[0], -&a[1], -&a[2]]
}

fn base_point() -> Point {
    [Expr::x(), Expr::y(), Expr::t()]
}

/// `d/ds (p·γ(s))` at `s = 0` for the coordinate curve `γ(s) = s·e_dir`.
///
/// The composition is affine in `s`, which is checked by comparing two
/// successive differences.
fn curve_velocity(dir: Dir) -> [Expr; 3] {
    let p = base_point();
    let at = |s: i64| {
        let mut q: Point = [Expr::zero(), Expr::zero(), Expr::zero()];
        q[dir.index()] = Expr::int(s);
        compose(&p, &q)
    };
    let (c0, c1, c2) = (at(0), at(1), at(2));
    std::array::from_fn(|i| {
        let d = &c1[i] - &c0[i];
        assert_eq!(
            &c2[i] - &c1[i],
            d,
            "group law is not affine along the curve"
        );
        d
    })
}

/// `X`, `Y`, `Z` obtained from right translation by the coordinate curves.
pub fn left_invariant_fields() -> [PointVectorField; 3] {
    let names = ["X", "Y", "Z"];
    Dir::ALL.map(|d| PointVectorField::new(names[d.index()], curve_velocity(d), Expr::zero()))
}

/// The fields as they are displayed in the reference text.
pub fn displayed_fields() -> [PointVectorField; 3] {
    [
        PointVectorField::from_text("X", ["1", "0", "2*y"], "0"),
        PointVectorField::from_text("Y", ["0", "1", "2*x"], "0"),
        PointVectorField::from_text("Z", ["0", "0", "1"], "0"),
    ]
}

/// Applies `ξⁱD_i` to a jet expression.
fn apply_operator(f: &PointVectorField, e: &Expr, jets: &JetSpace) -> Result<Expr, JetError> {
    let mut out = Expr::zero();
    for d in Dir::ALL {
        if !f.xi[d.index()].is_zero() {
            out += &f.xi[d.index()] * jets.total_derivative(e, d)?;
        }
    }
    Ok(out)
}

/// `(A² + B²)u` as a second-order operator.
pub fn sum_of_squares(
    a: &PointVectorField,
    b: &PointVectorField,
    jets: &JetSpace,
) -> Result<Expr, JetError> {
    let u = Expr::atom(Atom::Jet(Dependent::U, MultiIndex::EMPTY));
    let aa = apply_operator(a, &apply_operator(a, &u, jets)?, jets)?;
    let bb = apply_operator(b, &apply_operator(b, &u, jets)?, jets)?;
    Ok(aa + bb)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplacianCheck {
    pub label: &'static str,
    pub fields: [PointVectorField; 2],
    pub operator: Expr,
    /// `operator − Δ_H u`.
    pub difference: Expr,
}

impl LaplacianCheck {
    pub fn matches(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Compares `X² + Y²` with the displayed `Δ_H` for the derived fields, the
/// displayed fields, and the conjugate pair `∂x + 2y∂t, ∂y − 2x∂t`.
pub fn laplacian_checks(jets: &JetSpace) -> Result<Vec<LaplacianCheck>, JetError> {
    let [dx, dy, _] = left_invariant_fields();
    let [px, py, _] = displayed_fields();
    let conj = [
        PointVectorField::from_text("X", ["1", "0", "2*y"], "0"),
        PointVectorField::from_text("Y", ["0", "1", "-2*x"], "0"),
    ];
    let lap = kohn_laplace(Dependent::U);
    [
        ("group law", [dx, dy]),
        ("displayed", [px, py]),
        ("conjugate", conj),
    ]
    .into_iter()
    .map(|(label, [a, b])| {
        let operator = sum_of_squares(&a, &b, jets)?;
        Ok(LaplacianCheck {
            label,
            difference: &operator - &lap,
            operator,
            fields: [a, b],
        })
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn pt(a: &str, b: &str, c: &str) -> Point {
        [parse(a).unwrap(), parse(b).unwrap(), parse(c).unwrap()]
    }

    #[test]
    fn compose_examples() {
        let z = Expr::zero();
        let p = base_point();
        let s = pt("0", "0", "x*y");
        assert_eq!(compose(&p, &s), pt("x", "y", "t + x*y"));
        let a = pt("1", "0", "0");
        let b = pt("0", "1", "0");
        assert_eq!(compose(&a, &b), pt("1", "1", "2"));
        assert_eq!(compose(&p, &[z.clone(), z.clone(), z]), p);
    }

    #[test]
    fn associativity_and_inverse() {
        let a = pt("x", "y", "t");
        let b = pt("x^2", "t", "y");
        let c = pt("3", "-x*y", "t^2");
        assert_eq!(compose(&compose(&a, &b), &c), compose(&a, &compose(&b, &c)));
        assert!(compose(&a, &inverse(&a)).iter().all(Expr::is_zero));
    }

    #[test]
    fn derived_fields_and_bracket() {
        let jets = JetSpace::default();
        let [x, y, z] = left_invariant_fields();
        assert_eq!(x.xi, pt("1", "0", "-2*y"));
        assert_eq!(y.xi, pt("0", "1", "2*x"));
        assert_eq!(z.xi, pt("0", "0", "1"));
        let xy = x.bracket(&y, &jets).unwrap();
        assert_eq!(xy.xi, pt("0", "0", "4"));
        assert!(x.bracket(&z, &jets).unwrap().is_zero());
    }

    #[test]
    fn only_the_conjugate_pair_squares_to_the_displayed_operator() {
        let checks = laplacian_checks(&JetSpace::default()).unwrap();
        let got: Vec<(&str, bool)> = checks.iter().map(|c| (c.label, c.matches())).collect();
        assert_eq!(
            got,
            [
                ("group law", false),
                ("displayed", false),
                ("conjugate", true)
            ]
        );
        assert_eq!(checks[0].difference, parse("-8*y*u_xt + 8*x*u_yt").unwrap());
        assert_eq!(checks[1].difference, parse("8*x*u_yt").unwrap());
    }
}
