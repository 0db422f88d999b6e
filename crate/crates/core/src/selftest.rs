//! The acceptance suite, runnable from tests and from the command line.

use std::time::Instant;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::case::NonlinearityCase;
use crate::conservation::{
    compare, derive, derive_for, discrepancy_ledger, master_identity_residual, published_vector,
    uncovered, verify_conservation, ConservedVector,
};
use crate::expr::{parse, to_text, Atom, Dependent, Dir, Expr, Monomial, MultiIndex, OpaqueFn};
use crate::jet::{kohn_laplace, JetSpace, PdeIdeal};
use crate::noether::{classify_case, noether_defect, Lagrangian, NoetherOptions};
use crate::reference::{
    compare_table, published_noether_set, published_table, GENERAL_VECTORS, W_BETA, ZERO_VECTORS,
};
use crate::symmetry::{
    bracket_table, catalog, check_lie_symmetry, equation, generator, w_beta_with,
};

/// Exponents used wherever the power family is sampled.
pub const POWER_SWEEP: [(i64, i64); 5] = [(-1, 1), (1, 2), (2, 1), (4, 1), (5, 1)];

const SEED: u64 = 0x4b6f686e;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub cases: Vec<&'static str>,
    pub passed: bool,
    pub details: Vec<String>,
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2}: {} {} ({} ms)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.millis
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub results: Vec<CriterionResult>,
    pub millis: u128,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&r.line());
            out.push('\n');
            for d in &r.details {
                out.push_str(&format!("    {d}\n"));
            }
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        out.push_str(&format!(
            "{passed}/{} criteria passed in {} ms\n",
            self.results.len(),
            self.millis
        ));
        out
    }
}

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    /// Case kinds the criterion exercises (`power` covers every exponent).
    pub cases: &'static [&'static str],
    run: fn(&mut Vec<String>) -> bool,
}

const ALL: &[&str] = &["arbitrary", "zero", "linear", "power", "exp", "cubic"];

pub const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        title: "Euler-Lagrange expression of L is -(Δ_H u + f)",
        cases: ALL,
        run: c1_euler_lagrange,
    },
    Criterion {
        id: 2,
        title: "bracket table for arbitrary f",
        cases: &["arbitrary"],
        run: c2_table_arbitrary,
    },
    Criterion {
        id: 3,
        title: "bracket tables for f = u, u^p, e^u",
        cases: &["linear", "power", "exp"],
        run: c3_tables,
    },
    Criterion {
        id: 4,
        title: "bracket table for f = 0",
        cases: &["zero"],
        run: c4_table_zero,
    },
    Criterion {
        id: 5,
        title: "every catalog field is a Lie point symmetry",
        cases: ALL,
        run: c5_lie,
    },
    Criterion {
        id: 6,
        title: "Noether classification per case",
        cases: ALL,
        run: c6_classification,
    },
    Criterion {
        id: 7,
        title: "Noether defects of T, R, X~, Y~, Z, E, U",
        cases: &["arbitrary", "zero", "linear", "exp"],
        run: c7_defects,
    },
    Criterion {
        id: 8,
        title: "general conserved vectors tau, sigma, chi, upsilon",
        cases: &["arbitrary"],
        run: c8_general_vectors,
    },
    Criterion {
        id: 9,
        title: "conserved vectors for f = u",
        cases: &["linear"],
        run: c9_linear_vectors,
    },
    Criterion {
        id: 10,
        title: "conserved vectors for f = 0",
        cases: &["zero"],
        run: c10_zero_vectors,
    },
    Criterion {
        id: 11,
        title: "property suites",
        cases: ALL,
        run: c11_properties,
    },
];

/// Case kind used for filtering.
pub fn case_kind(case: &NonlinearityCase) -> &'static str {
    match case {
        NonlinearityCase::Arbitrary => "arbitrary",
        NonlinearityCase::Zero => "zero",
        NonlinearityCase::Linear => "linear",
        NonlinearityCase::Power(_) => "power",
        NonlinearityCase::Exponential => "exp",
        NonlinearityCase::Cubic => "cubic",
    }
}

pub fn run_criterion(id: u8) -> CriterionResult {
    let c = CRITERIA
        .iter()
        .find(|c| c.id == id)
        .expect("criterion id in 1..=11");
    let start = Instant::now();
    let mut details = Vec::new();
    let passed = (c.run)(&mut details);
    CriterionResult {
        id: c.id,
        title: c.title,
        cases: c.cases.to_vec(),
        passed,
        details,
        millis: start.elapsed().as_millis(),
    }
}

/// Criteria touching the case's kind, or all of them.
pub fn selected(filter: Option<&NonlinearityCase>) -> Vec<&'static Criterion> {
    CRITERIA
        .iter()
        .filter(|c| filter.is_none_or(|f| c.cases.contains(&case_kind(f))))
        .collect()
}

pub fn run_all(filter: Option<&NonlinearityCase>) -> SelftestReport {
    let start = Instant::now();
    let results = selected(filter)
        .iter()
        .map(|c| run_criterion(c.id))
        .collect();
    SelftestReport {
        results,
        millis: start.elapsed().as_millis(),
    }
}

fn power_cases() -> Vec<NonlinearityCase> {
    POWER_SWEEP
        .iter()
        .map(|&(n, d)| NonlinearityCase::Power(Rational64::new(n, d)))
        .collect()
}

fn all_cases() -> Vec<NonlinearityCase> {
    let mut out = vec![
        NonlinearityCase::Arbitrary,
        NonlinearityCase::Zero,
        NonlinearityCase::Linear,
    ];
    out.extend(power_cases());
    out.extend([NonlinearityCase::Exponential, NonlinearityCase::Cubic]);
    out
}

/// Records a failed check and returns its outcome.
fn check(details: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) -> bool {
    if !ok {
        details.push(what());
    }
    ok
}

macro_rules! attempt {
    ($details:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                $details.push(format!("error: {err}"));
                return false;
            }
        }
    };
}

fn c1_euler_lagrange(details: &mut Vec<String>) -> bool {
    let jets = JetSpace::default();
    let mut ok = true;
    for case in all_cases() {
        let l = Lagrangian::for_case(&case).expr;
        let e = attempt!(details, jets.euler_operator(&l, Dependent::U));
        let want = -equation(&case);
        ok &= check(details, e == want, || {
            format!("{case}: E(L) = {}", to_text(&e))
        });
    }
    ok
}

fn table_criterion(details: &mut Vec<String>, cases: &[NonlinearityCase]) -> bool {
    let jets = JetSpace::default();
    let mut ok = true;
    for case in cases {
        let table = attempt!(details, bracket_table(case, &jets));
        let published = published_table(case).expect("case has a printed table");
        let cmp = compare_table(&table, &published);
        for f in cmp.failures() {
            details.push(format!(
                "{case}: [{}, {}] printed {}, computed {}",
                f.row, f.col, f.published, f.computed
            ));
        }
        for n in cmp.notes() {
            details.push(format!(
                "{case}: note [{}, {}]: {}",
                n.row,
                n.col,
                n.note.as_deref().unwrap_or_default()
            ));
        }
        ok &= cmp.passes();
    }
    ok
}

fn c2_table_arbitrary(details: &mut Vec<String>) -> bool {
    table_criterion(details, &[NonlinearityCase::Arbitrary])
}

fn c3_tables(details: &mut Vec<String>) -> bool {
    let mut cases = vec![NonlinearityCase::Linear];
    cases.extend([2, 5, -1].map(|p| NonlinearityCase::Power(Rational64::from_integer(p))));
    cases.push(NonlinearityCase::Exponential);
    table_criterion(details, &cases)
}

fn c4_table_zero(details: &mut Vec<String>) -> bool {
    table_criterion(details, &[NonlinearityCase::Zero])
}

fn c5_lie(details: &mut Vec<String>) -> bool {
    let jets = JetSpace::default();
    let mut ok = true;
    for case in all_cases() {
        for g in catalog(&case) {
            let r = attempt!(details, check_lie_symmetry(&g, &case, &jets));
            ok &= check(details, r.is_yes(), || {
                format!("{} in {case}: {r:?}", g.name)
            });
        }
    }
    ok
}

fn c6_classification(details: &mut Vec<String>) -> bool {
    let opts = NoetherOptions::default();
    let jets = opts.jets;
    let mut ok = true;
    for case in all_cases() {
        let certs = attempt!(details, classify_case(&case, &opts));
        let mut accepted: Vec<&str> = certs
            .iter()
            .filter(|c| c.is_noether())
            .map(|c| c.symmetry.as_str())
            .collect();
        let mut want = published_noether_set(&case);
        accepted.sort_unstable();
        want.sort_unstable();
        ok &= check(details, accepted == want, || {
            format!("{case}: accepted {accepted:?}, expected {want:?}")
        });
        for c in &certs {
            match (c.phi(), c.witness()) {
                (Some(phi), _) => {
                    let div = attempt!(details, jets.divergence(phi));
                    let diff = attempt!(
                        details,
                        PdeIdeal::beta_only(&case).reduce(&(div - &c.defect), &jets)
                    );
                    ok &= check(details, diff.is_zero(), || {
                        format!("{case} {}: Div phi != defect", c.symmetry)
                    });
                }
                (None, Some(w)) => {
                    let e = attempt!(details, jets.euler_operator(&c.defect, Dependent::U));
                    ok &= check(details, !w.is_zero() && *w == e, || {
                        format!("{case} {}: bad witness", c.symmetry)
                    });
                }
                (None, None) => {
                    ok = false;
                    details.push(format!("{case} {}: potential pending", c.symmetry));
                }
            }
        }
    }
    ok
}

fn c7_defects(details: &mut Vec<String>) -> bool {
    let jets = JetSpace::default();
    let mut ok = true;
    let mut expect = |id: &str, case: NonlinearityCase, want: Expr| match noether_defect(
        &generator(id),
        &case,
        &jets,
    ) {
        Ok(d) => {
            ok &= check(details, d == want, || {
                format!("{id} in {case}: defect {}", to_text(&d))
            });
        }
        Err(e) => {
            ok = false;
            details.push(format!("{id}: {e}"));
        }
    };
    for id in ["T", "R", "Xt", "Yt"] {
        expect(id, NonlinearityCase::Arbitrary, Expr::zero());
    }
    let l = |c: NonlinearityCase| Lagrangian::for_case(&c).expr;
    expect(
        "Z",
        NonlinearityCase::Zero,
        Expr::int(2) * l(NonlinearityCase::Zero),
    );
    expect(
        "U",
        NonlinearityCase::Zero,
        Expr::int(2) * l(NonlinearityCase::Zero),
    );
    expect(
        "U",
        NonlinearityCase::Linear,
        Expr::int(2) * l(NonlinearityCase::Linear),
    );
    let ext_e = parse("u_x^2 + u_y^2 + 4*(x^2+y^2)*u_t^2 + 4*y*u_x*u_t - 4*x*u_y*u_t - 2*E(u)")
        .expect("fixture");
    expect("E", NonlinearityCase::Exponential, ext_e);
    ok
}

/// Master identity plus conservation on solutions for a derived vector.
fn derived_checks(details: &mut Vec<String>, v: &ConservedVector) -> bool {
    let jets = JetSpace::default();
    let r = attempt!(details, master_identity_residual(v, &jets));
    let c = attempt!(details, verify_conservation(v, &jets));
    check(details, r.is_zero() && c.is_ok(), || {
        format!(
            "{} [{}]: master identity residual {}",
            v.symmetry,
            v.case,
            to_text(&r)
        )
    })
}

fn c8_general_vectors(details: &mut Vec<String>) -> bool {
    let opts = NoetherOptions::default();
    let case = NonlinearityCase::Arbitrary;
    let mut ok = true;
    for p in GENERAL_VECTORS {
        let derived = attempt!(details, derive(p.symmetry, &case, &opts));
        ok &= derived_checks(details, &derived);
        let published = attempt!(details, published_vector(&p, &case, false));
        let report = compare(&published, &derived);
        for d in report.items() {
            details.push(format!(
                "{} component {}: printed {} | derived {}",
                p.label,
                d.component,
                d.published.as_deref().unwrap_or("-"),
                d.derived.as_deref().unwrap_or("-")
            ));
        }
        ok &= report.is_empty();
    }
    ok
}

/// Published comparisons whose differences must all be in the ledger.
fn ledger_covered(
    details: &mut Vec<String>,
    case: &NonlinearityCase,
    vectors: &[crate::reference::PublishedVector],
) -> bool {
    let opts = NoetherOptions::default();
    let ledger = discrepancy_ledger();
    let mut ok = true;
    for p in vectors {
        let derived = attempt!(details, derive(p.symmetry, case, &opts));
        ok &= derived_checks(details, &derived);
        let published = attempt!(details, published_vector(p, case, false));
        let report = compare(&published, &derived);
        let missing = uncovered(&report, &ledger, "printed");
        if !report.is_empty() {
            details.push(format!(
                "{} [{case}]: {} differing terms in components {:?}, {} not in the ledger",
                p.label,
                report.items().count(),
                report.components(),
                missing.len()
            ));
        }
        ok &= missing.is_empty();
    }
    ok
}

fn c9_linear_vectors(details: &mut Vec<String>) -> bool {
    let opts = NoetherOptions::default();
    let lin = NonlinearityCase::Linear;
    let mut ok = true;
    let f = Atom::Opaque(OpaqueFn::Antiderivative);
    let half_u2 = lin.antiderivative();
    for id in ["T", "R", "Xt", "Yt"] {
        let general = attempt!(details, derive(id, &NonlinearityCase::Arbitrary, &opts));
        let specific = attempt!(details, derive(id, &lin, &opts));
        ok &= derived_checks(details, &specific);
        for i in 0..3 {
            let s = attempt!(details, general.components[i].substitute(&f, &half_u2));
            ok &= check(details, s == specific.components[i], || {
                format!(
                    "{id}: component {} does not specialize under F = u^2/2",
                    i + 1
                )
            });
        }
    }
    let w = attempt!(details, derive("W", &lin, &opts));
    ok &= derived_checks(details, &w);
    let printed = attempt!(details, published_vector(&W_BETA, &lin, false));
    let report = compare(&printed, &w);
    ok &= check(details, report.is_empty(), || {
        format!("W differs: {}", report.to_text())
    });
    ok &= ledger_covered(details, &lin, &GENERAL_VECTORS);
    ok
}

fn c10_zero_vectors(details: &mut Vec<String>) -> bool {
    let zero = NonlinearityCase::Zero;
    let mut vectors = GENERAL_VECTORS.to_vec();
    vectors.extend(ZERO_VECTORS);
    ledger_covered(details, &zero, &vectors)
}

fn random_expr(rng: &mut ChaCha8Rng, atoms: &[Atom], terms: usize, max_exp: i64) -> Expr {
    let mut out = Expr::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let factors: Vec<(Atom, Rational64)> = atoms
            .iter()
            .filter_map(|a| {
                let k = rng.gen_range(0..=max_exp);
                (k > 0 && rng.gen_bool(0.4)).then(|| (*a, Rational64::from_integer(k)))
            })
            .collect();
        let m = Monomial::from_factors(factors).expect("positive integer exponents");
        let c = rng.gen_range(-3..=3i64);
        out += Expr::term(m, crate::expr::big(Rational64::from_integer(c)));
    }
    out
}

fn jets_up_to(order: usize) -> Vec<Atom> {
    let mut out = vec![Atom::X, Atom::Y, Atom::T];
    for k in 0..=order {
        out.extend(
            MultiIndex::all_of_order(k)
                .into_iter()
                .map(|i| Atom::Jet(Dependent::U, i)),
        );
    }
    out
}

fn c11_properties(details: &mut Vec<String>) -> bool {
    let jets = JetSpace::default();
    let mut ok = true;
    let mut cases = all_cases();
    cases.retain(|c| !matches!(c, NonlinearityCase::Power(p) if *p != Rational64::from_integer(2)));
    for case in &cases {
        let gens = catalog(case);
        let n = gens.len();
        let mut br = Vec::with_capacity(n);
        for a in &gens {
            let row: Vec<_> = attempt!(
                details,
                gens.iter()
                    .map(|b| a.bracket(b, &jets))
                    .collect::<Result<Vec<_>, _>>()
            );
            br.push(row);
        }
        for i in 0..n {
            for j in 0..n {
                ok &= check(details, br[i][j].add(&br[j][i]).is_zero(), || {
                    format!(
                        "{case}: [{}, {}] not antisymmetric",
                        gens[i].name, gens[j].name
                    )
                });
            }
        }
        // the Jacobi sum is totally antisymmetric, so unordered triples suffice
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let j1 = attempt!(details, br[i][j].bracket(&gens[k], &jets));
                    let j2 = attempt!(details, br[j][k].bracket(&gens[i], &jets));
                    let j3 = attempt!(details, br[k][i].bracket(&gens[j], &jets));
                    ok &= check(details, j1.add(&j2).add(&j3).is_zero(), || {
                        format!(
                            "{case}: Jacobi fails for {}, {}, {}",
                            gens[i].name, gens[j].name, gens[k].name
                        )
                    });
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let second = jets_up_to(2);
    for _ in 0..50 {
        let e = random_expr(&mut rng, &second, 4, 2);
        for (i, j) in [(Dir::X, Dir::Y), (Dir::X, Dir::T), (Dir::Y, Dir::T)] {
            let a = attempt!(
                details,
                jets.total_derivative(&attempt!(details, jets.total_derivative(&e, i)), j)
            );
            let b = attempt!(
                details,
                jets.total_derivative(&attempt!(details, jets.total_derivative(&e, j)), i)
            );
            ok &= check(details, a == b, || {
                format!(
                    "D{}D{} != D{}D{} on {}",
                    i.letter(),
                    j.letter(),
                    j.letter(),
                    i.letter(),
                    to_text(&e)
                )
            });
        }
    }
    let first = jets_up_to(1);
    for n in 0..100 {
        let v = [0, 1, 2].map(|_| random_expr(&mut rng, &first, 3, 2));
        let div = attempt!(details, jets.divergence(&v));
        let e = attempt!(details, jets.euler_operator(&div, Dependent::U));
        ok &= check(details, e.is_zero(), || {
            format!("Euler operator misses divergence #{n}")
        });
    }
    let third = jets_up_to(3);
    for case in [
        NonlinearityCase::Arbitrary,
        NonlinearityCase::Linear,
        NonlinearityCase::Cubic,
    ] {
        let ideal = PdeIdeal::for_case(&case);
        for _ in 0..20 {
            let e = random_expr(&mut rng, &third, 3, 1);
            let once = attempt!(details, ideal.reduce(&e, &jets));
            let twice = attempt!(details, ideal.reduce(&once, &jets));
            ok &= check(details, once == twice, || {
                format!("{case}: reduction not idempotent on {}", to_text(&e))
            });
        }
    }
    ok &= w_linearity(details);
    ok
}

/// `C[W_{β₁+β₂}] = C[W_{β₁}] + C[W_{β₂}]` for concrete harmonic `β`, and the
/// symbolic vector specialized to each `β` agrees with the concrete one.
fn w_linearity(details: &mut Vec<String>) -> bool {
    let opts = NoetherOptions::default();
    let jets = opts.jets;
    let zero = NonlinearityCase::Zero;
    let betas = ["x*y", "t", "x^2 - y^2", "x*t - 2*x^2*y"].map(|s| parse(s).expect("beta"));
    let mut ok = true;
    for b in &betas {
        let lap = attempt!(details, harmonic_residual(b, &jets));
        ok &= check(details, lap.is_zero(), || {
            format!("beta {} is not harmonic", to_text(b))
        });
    }
    let symbolic = attempt!(details, derive("W", &zero, &opts));
    let concrete: Vec<ConservedVector> = betas
        .iter()
        .map(|b| derive_for(&w_beta_with(b, "W"), &zero, &opts))
        .collect::<Result<_, _>>()
        .unwrap_or_else(|e| {
            details.push(format!("error: {e}"));
            Vec::new()
        });
    if concrete.len() != betas.len() {
        return false;
    }
    for (b, c) in betas.iter().zip(&concrete) {
        let s = attempt!(details, symbolic.with_beta(b, &jets));
        ok &= check(details, s.components == c.components, || {
            format!(
                "symbolic W vector specialized to beta = {} disagrees",
                to_text(b)
            )
        });
    }
    for i in 0..betas.len() {
        for j in i + 1..betas.len() {
            let sum = &betas[i] + &betas[j];
            let c = attempt!(details, derive_for(&w_beta_with(&sum, "W"), &zero, &opts));
            let parts: Vec<Expr> = (0..3)
                .map(|k| &concrete[i].components[k] + &concrete[j].components[k])
                .collect();
            ok &= check(details, c.components.to_vec() == parts, || {
                format!(
                    "W vector not additive in beta for {} and {}",
                    to_text(&betas[i]),
                    to_text(&betas[j])
                )
            });
        }
    }
    ok
}

fn harmonic_residual(b: &Expr, jets: &JetSpace) -> Result<Expr, crate::jet::JetError> {
    let mut out = Expr::zero();
    let lap = kohn_laplace(Dependent::U);
    for (m, c) in lap.terms() {
        let mut rest = Vec::new();
        let mut deriv = None;
        for (a, k) in m.factors() {
            match a {
                Atom::Jet(Dependent::U, idx) => deriv = Some(*idx),
                _ => rest.push((*a, *k)),
            }
        }
        let coeff = Expr::term(
            Monomial::from_factors(rest).expect("base factors"),
            c.clone(),
        );
        out += coeff * jets.total_derivative_multi(b, deriv.expect("second-order term"))?;
    }
    Ok(out)
}
