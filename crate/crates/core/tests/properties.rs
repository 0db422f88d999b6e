use kohn_noether::case::NonlinearityCase;
use kohn_noether::expr::{from_json, parse, parse_atom, to_json, to_text, Dir, Expr, JsonExpr};
use kohn_noether::jet::JetSpace;
use kohn_noether::noether::noether_defect;
use kohn_noether::symmetry::{compose, PointVectorField};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const ATOMS: [&str; 12] = [
    "x", "y", "t", "u", "u_x", "u_y", "u_t", "u_xy", "u_tt", "b", "b_x", "F(u)",
];

fn monomial_text() -> impl Strategy<Value = String> {
    (
        -6i64..=6,
        prop::collection::vec((0..ATOMS.len(), 1u32..=2), 0..3),
    )
        .prop_map(|(c, factors)| {
            let mut s = format!("({c})");
            for (i, e) in factors {
                s.push_str(&format!("*{}^{e}", ATOMS[i]));
            }
            s
        })
}

fn expr_text() -> impl Strategy<Value = String> {
    prop::collection::vec(monomial_text(), 1..4).prop_map(|ms| ms.join(" + "))
}

fn point_text() -> impl Strategy<Value = String> {
    let atoms = ["x", "y", "t", "u"];
    prop::collection::vec(
        (
            -3i64..=3,
            prop::collection::vec((0..4usize, 1u32..=2), 0..3),
        ),
        1..3,
    )
    .prop_map(move |ms| {
        ms.into_iter()
            .map(|(c, fs)| {
                let mut s = format!("({c})");
                for (i, e) in fs {
                    s.push_str(&format!("*{}^{e}", atoms[i]));
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn field() -> impl Strategy<Value = PointVectorField> {
    (point_text(), point_text(), point_text(), point_text())
        .prop_map(|(a, b, c, d)| PointVectorField::from_text("S", [&a, &b, &c], &d))
}

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

fn cases() -> Vec<NonlinearityCase> {
    vec![
        NonlinearityCase::Arbitrary,
        NonlinearityCase::Linear,
        NonlinearityCase::Exponential,
        NonlinearityCase::Cubic,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_commute(a in expr_text(), b in expr_text()) {
        prop_assert_eq!(p(&format!("({a})*({b})")), p(&format!("({b})*({a})")));
    }

    #[test]
    fn products_distribute(a in expr_text(), b in expr_text(), c in expr_text()) {
        prop_assert_eq!(
            p(&format!("({a})*(({b})+({c}))")),
            p(&format!("({a})*({b}) + ({a})*({c})"))
        );
    }

    #[test]
    fn parsing_matches_arithmetic(a in expr_text(), b in expr_text()) {
        let (ea, eb) = (p(&a), p(&b));
        prop_assert_eq!(p(&format!("({a}) - ({b})")), &ea - &eb);
        prop_assert_eq!(p(&format!("({a})*({b})")), &ea * &eb);
    }

    #[test]
    fn text_round_trips(a in expr_text()) {
        let e = p(&a);
        prop_assert_eq!(parse(&to_text(&e)).unwrap(), e);
    }

    #[test]
    fn json_round_trips(a in expr_text()) {
        let e = p(&a);
        let back: JsonExpr =
            serde_json::from_str(&serde_json::to_string(&to_json(&e)).unwrap()).unwrap();
        prop_assert_eq!(from_json(&back).unwrap(), e);
    }

    #[test]
    fn partials_commute(a in expr_text(), i in 0..ATOMS.len(), j in 0..ATOMS.len()) {
        let e = p(&a);
        let (ai, aj) = (parse_atom(ATOMS[i]).unwrap(), parse_atom(ATOMS[j]).unwrap());
        prop_assert_eq!(e.partial(&ai).partial(&aj), e.partial(&aj).partial(&ai));
    }

    #[test]
    fn substituting_an_atom_for_itself_is_identity(a in expr_text(), i in 0..ATOMS.len()) {
        let e = p(&a);
        let atom = parse_atom(ATOMS[i]).unwrap();
        prop_assert_eq!(e.substitute(&atom, &Expr::atom(atom)).unwrap(), e);
    }

    #[test]
    fn total_derivatives_commute(a in expr_text(), i in 0..3usize, j in 0..3usize) {
        let jets = JetSpace::new(4);
        let (di, dj) = (Dir::ALL[i], Dir::ALL[j]);
        let e = p(&a);
        let lhs = jets.total_derivative(&jets.total_derivative(&e, di).unwrap(), dj).unwrap();
        let rhs = jets.total_derivative(&jets.total_derivative(&e, dj).unwrap(), di).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prolongation_is_linear(s in field(), r in field(), c in -4i64..=4, a in expr_text()) {
        let jets = JetSpace::new(4);
        let k = BigRational::from_integer(BigInt::from(c));
        let combined = s.add(&r.scale(&k));
        let e = p(&a);
        let lhs = combined.prolong(2, &jets).unwrap().apply(&e).unwrap();
        let rhs = s.prolong(2, &jets).unwrap().apply(&e).unwrap()
            + r.prolong(2, &jets).unwrap().apply(&e).unwrap().scale(&k);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn noether_defect_is_linear(s in field(), r in field(), c in -4i64..=4, ci in 0..4usize) {
        let jets = JetSpace::new(4);
        let case = &cases()[ci];
        let k = BigRational::from_integer(BigInt::from(c));
        let lhs = noether_defect(&s.add(&r.scale(&k)), case, &jets).unwrap();
        let rhs = noether_defect(&s, case, &jets).unwrap()
            + noether_defect(&r, case, &jets).unwrap().scale(&k);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_law_is_associative(a in point_text(), b in point_text(), c in point_text(), d in point_text()) {
        let pa = [p(&a), p(&b), p(&c)];
        let pb = [p(&d), p(&a), Expr::x()];
        let pc = [p(&c), Expr::t(), p(&b)];
        prop_assert_eq!(compose(&compose(&pa, &pb), &pc), compose(&pa, &compose(&pb, &pc)));
    }
}
