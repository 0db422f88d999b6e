use std::collections::BTreeSet;

use kohn_noether::case::NonlinearityCase;
use kohn_noether::conservation::{
    compare, derive, discrepancy_ledger, ledger_for, published_vector, substitute_beta, uncovered,
    verify_conservation, ConservationCheck, ConservationError, ConservedVector,
};
use kohn_noether::expr::{
    parse_with, to_latex, to_text, Atom, Dependent, Expr, MultiIndex, DEFAULT_MAX_ORDER,
};
use kohn_noether::jet::{kohn_laplace, JetSpace, PdeIdeal};
use kohn_noether::noether::{
    classify_case, is_noether, Lagrangian, NoetherCertificate, NoetherOptions, DEFAULT_BASIS_DEGREE,
};
use kohn_noether::reference::{
    compare_table, published_noether_set, published_table, published_vector_set, PublishedVector,
};
use kohn_noether::selftest::run_all;
use kohn_noether::symmetry::{
    bracket_table, canonical_id, catalog, display_name, find, laplacian_checks,
};
use serde_json::{json, Value};

use crate::render::{
    certificate_latex, expr_json, field_json, field_latex, field_text, lagrangian_multiple,
    vector_latex,
};
use crate::{ClawAction, Cli, Command, Format, Reading};

pub struct Output {
    pub code: u8,
    pub text: String,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub detail: Option<String>,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
        detail: None,
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    usage(e.to_string())
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

struct Ctx<'a> {
    cli: &'a Cli,
    jets: JetSpace,
    opts: NoetherOptions,
}

impl Ctx<'_> {
    fn case(&self) -> Result<NonlinearityCase, Failure> {
        let s = self.cli.case.as_deref().ok_or_else(|| {
            usage("--case is required (arbitrary|zero|linear|power:<p>|exp|cubic)")
        })?;
        s.parse().map_err(internal)
    }

    fn optional_case(&self) -> Result<Option<NonlinearityCase>, Failure> {
        match self.cli.case {
            Some(_) => self.case().map(Some),
            None => Ok(None),
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let jets = JetSpace::new(cli.max_order.unwrap_or(DEFAULT_MAX_ORDER));
    let opts = NoetherOptions {
        jets,
        degree: cli.degree.unwrap_or(DEFAULT_BASIS_DEGREE),
    };
    let ctx = Ctx { cli, jets, opts };
    match &cli.command {
        Command::Symmetries => symmetries(&ctx),
        Command::Brackets { compare } => brackets(&ctx, *compare),
        Command::Noether { symmetry } => noether(&ctx, symmetry.as_deref()),
        Command::Claw {
            action,
            symmetry,
            beta,
            published,
            reading,
        } => {
            let args = ClawArgs {
                symmetry: symmetry.as_deref(),
                beta: beta.as_deref(),
                published: *published,
                reading: *reading,
            };
            claw(&ctx, *action, &args)
        }
        Command::Eval {
            expr,
            d,
            euler,
            reduce,
        } => eval(&ctx, expr, d.as_deref(), euler.as_deref(), *reduce),
        Command::Heisenberg => heisenberg(&ctx),
        Command::Ledger => Ok(Output {
            code: 0,
            text: kohn_noether::conservation::ledger_markdown(&discrepancy_ledger()),
        }),
        Command::Selftest => selftest(&ctx),
    }
}

fn symmetries(ctx: &Ctx) -> Result<Output, Failure> {
    let case = ctx.case()?;
    let gens = catalog(&case);
    let text = match ctx.cli.format {
        Format::Text => {
            let mut s = format!(
                "{} ({}): {} generators\n",
                case,
                case.describe(),
                gens.len()
            );
            for g in &gens {
                s.push_str(&format!("  {}\n", field_text(g)));
            }
            s
        }
        Format::Latex => {
            let mut s = String::from("\\begin{aligned}\n");
            for g in &gens {
                s.push_str(&format!(
                    "{} \\\\\n",
                    field_latex(g).replacen(" = ", " &= ", 1)
                ));
            }
            s.push_str("\\end{aligned}\n");
            s
        }
        Format::Json => json_text(json!({
            "case": case.selector(),
            "generators": gens.iter().map(field_json).collect::<Vec<_>>(),
        })),
    };
    Ok(Output { code: 0, text })
}

fn brackets(ctx: &Ctx, with_published: bool) -> Result<Output, Failure> {
    let case = ctx.case()?;
    let table = bracket_table(&case, &ctx.jets).map_err(internal)?;
    let unclassified = table.unclassified();
    let comparison = if with_published {
        match published_table(&case) {
            Some(p) => Some(compare_table(&table, &p)),
            None => return Err(usage(format!("no published bracket table for case {case}"))),
        }
    } else {
        None
    };
    let mut code = u8::from(!unclassified.is_empty());
    if comparison.as_ref().is_some_and(|c| !c.passes()) {
        code = 1;
    }
    let text = match ctx.cli.format {
        Format::Text => {
            let mut s = table.to_text();
            for (r, c) in &unclassified {
                s.push_str(&format!(
                    "UNCLASSIFIED [{}, {}]\n",
                    display_name(r),
                    display_name(c)
                ));
            }
            if let Some(cmp) = &comparison {
                let failures = cmp.failures();
                s.push_str(&format!(
                    "\n{}: {} cells, {} differ\n",
                    cmp.table,
                    cmp.cells.len(),
                    failures.len()
                ));
                for f in failures {
                    s.push_str(&format!(
                        "  MISMATCH [{}, {}]: published {}, computed {}\n",
                        display_name(&f.row),
                        display_name(&f.col),
                        f.published,
                        f.computed
                    ));
                }
                for n in cmp.notes() {
                    s.push_str(&format!(
                        "  note [{}, {}]: {}\n",
                        display_name(&n.row),
                        display_name(&n.col),
                        n.note.as_deref().unwrap_or_default()
                    ));
                }
            }
            s
        }
        Format::Latex => table.to_latex(),
        Format::Json => {
            let mut v = table.to_json();
            v["unclassified"] = json!(unclassified);
            if let Some(cmp) = &comparison {
                v["comparison"] = json!({
                    "table": cmp.table,
                    "passes": cmp.passes(),
                    "mismatches": cmp.failures().iter().map(|f| json!({
                        "row": f.row, "col": f.col, "published": f.published, "computed": f.computed,
                    })).collect::<Vec<_>>(),
                    "notes": cmp.notes().iter().map(|n| json!({
                        "row": n.row, "col": n.col, "note": n.note,
                    })).collect::<Vec<_>>(),
                });
            }
            json_text(v)
        }
    };
    Ok(Output { code, text })
}

fn certificate_text(cert: &NoetherCertificate, lagrangian: &Expr) -> String {
    let mut s = cert
        .to_text()
        .replacen(&cert.symmetry, &display_name(&cert.symmetry), 1);
    if let Some(c) = lagrangian_multiple(&cert.defect, lagrangian) {
        if !cert.defect.is_zero() {
            s.push_str(&format!("  defect/L = {c}\n"));
        }
    }
    s
}

fn noether(ctx: &Ctx, symmetry: Option<&str>) -> Result<Output, Failure> {
    let case = ctx.case()?;
    let published_list = published_noether_set(&case);
    let published: BTreeSet<&str> = published_list.iter().copied().collect();
    let certs = match symmetry {
        Some(name) => {
            let field = find(&case, name).map_err(internal)?;
            vec![is_noether(&field, &case, &ctx.opts).map_err(internal)?]
        }
        None => classify_case(&case, &ctx.opts).map_err(internal)?,
    };
    let matches = match symmetry {
        Some(_) => certs
            .iter()
            .all(|c| c.is_noether() == published.contains(c.symmetry.as_str())),
        None => {
            let accepted: BTreeSet<&str> = certs
                .iter()
                .filter(|c| c.is_noether())
                .map(|c| c.symmetry.as_str())
                .collect();
            accepted == published
        }
    };
    let lagrangian = Lagrangian::for_case(&case).expr;
    let accepted: Vec<&str> = certs
        .iter()
        .filter(|c| c.is_noether())
        .map(|c| c.symmetry.as_str())
        .collect();
    let text = match ctx.cli.format {
        Format::Text => {
            let mut s = format!("L = {}\n", to_text(&lagrangian));
            for c in &certs {
                s.push_str(&certificate_text(c, &lagrangian));
            }
            if symmetry.is_none() {
                let names = |v: Vec<&str>| {
                    v.iter()
                        .map(|n| display_name(n))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                s.push_str(&format!(
                    "accepted: {}\npublished: {}\n",
                    names(accepted.clone()),
                    names(published_list.clone())
                ));
            }
            s.push_str(if matches {
                "agrees with the published classification\n"
            } else {
                "DIFFERS from the published classification\n"
            });
            s
        }
        Format::Latex => {
            let mut s = format!("L = {}\n", to_latex(&lagrangian));
            for c in &certs {
                s.push_str(&certificate_latex(c));
                s.push('\n');
            }
            s
        }
        Format::Json => json_text(json!({
            "case": case.selector(),
            "lagrangian": expr_json(&lagrangian),
            "certificates": certs.iter().map(|c| {
                let mut v = c.to_json();
                if let Some(k) = lagrangian_multiple(&c.defect, &lagrangian) {
                    v["defect_over_lagrangian"] = json!(k.to_string());
                }
                v
            }).collect::<Vec<_>>(),
            "accepted": accepted,
            "published": published_list,
            "matches": matches,
        })),
    };
    Ok(Output {
        code: u8::from(!matches),
        text,
    })
}

struct ClawArgs<'a> {
    symmetry: Option<&'a str>,
    beta: Option<&'a str>,
    published: bool,
    reading: Reading,
}

fn not_accepted(e: ConservationError) -> Failure {
    match e {
        ConservationError::NotAccepted { ref witness, .. } => Failure {
            code: 2,
            message: e.to_string(),
            detail: witness
                .as_ref()
                .map(|w| format!("witness E(defect) = {}", to_text(w))),
        },
        other => internal(other),
    }
}

fn published_for(case: &NonlinearityCase, name: &str) -> Option<PublishedVector> {
    let id = canonical_id(name).unwrap_or(name);
    published_vector_set(case)
        .into_iter()
        .find(|p| p.symmetry == id)
}

/// A concrete `β` admitted by the case's constraint.
fn concrete_beta(ctx: &Ctx, case: &NonlinearityCase, text: &str) -> Result<Expr, Failure> {
    let Some(k) = case.beta_constraint() else {
        return Err(usage(format!(
            "--beta needs a case with W_β (zero or linear), not {case}"
        )));
    };
    let max = ctx.jets.max_order;
    let beta = parse_with(text, max).map_err(|e| usage(format!("--beta: {e}")))?;
    if beta.atoms().iter().any(|a| !matches!(a, Atom::Base(_))) {
        return Err(usage("--beta must be a function of x, y, t only"));
    }
    let b = Expr::atom(Atom::Jet(Dependent::Beta, MultiIndex::EMPTY));
    let constraint = kohn_laplace(Dependent::Beta) + Expr::int(k) * b;
    let residual = substitute_beta(&constraint, &beta, &ctx.jets).map_err(internal)?;
    if !residual.is_zero() {
        return Err(usage(format!(
            "β = {} does not satisfy {} = 0 (residual {})",
            to_text(&beta),
            match k {
                0 => "Δ_H β".to_string(),
                1 => "Δ_H β + β".to_string(),
                k => format!("Δ_H β + {k}β"),
            },
            to_text(&residual)
        )));
    }
    Ok(beta)
}

fn vector_output(ctx: &Ctx, v: &ConservedVector) -> (String, Value) {
    let text = match ctx.cli.format {
        Format::Latex => vector_latex(v),
        _ => {
            let mut s = v.to_text();
            if let Some(l) = v.label.as_ref().filter(|l| **l != v.symmetry) {
                s = s.replacen(&v.symmetry, &format!("{} ({l})", v.symmetry), 1);
            }
            s
        }
    };
    (text, v.to_json())
}

fn claw(ctx: &Ctx, action: ClawAction, args: &ClawArgs) -> Result<Output, Failure> {
    let case = ctx.case()?;
    let beta = args
        .beta
        .map(|b| concrete_beta(ctx, &case, b))
        .transpose()?;
    if beta.is_some() && action == ClawAction::Compare {
        return Err(usage("--beta applies to derive and verify"));
    }
    if args.published && action != ClawAction::Verify {
        return Err(usage("--published applies to verify"));
    }
    let names: Vec<String> = match (args.symmetry, action) {
        (Some(s), _) => {
            let field = find(&case, s).map_err(internal)?;
            vec![field.name]
        }
        (None, ClawAction::Compare) => published_vector_set(&case)
            .iter()
            .map(|p| p.symmetry.to_string())
            .collect(),
        (None, _) if args.published => published_vector_set(&case)
            .iter()
            .map(|p| p.symmetry.to_string())
            .collect(),
        (None, _) => classify_case(&case, &ctx.opts)
            .map_err(internal)?
            .into_iter()
            .filter(|c| c.is_noether())
            .map(|c| c.symmetry)
            .collect(),
    };
    if names.is_empty() {
        return Err(usage(format!(
            "no conserved vectors to report for case {case}"
        )));
    }
    let ledger = discrepancy_ledger();
    let reading = match args.reading {
        Reading::Printed => "printed",
        Reading::Alternative => "alternative",
    };
    let mut code = 0u8;
    let mut text = String::new();
    let mut items = Vec::new();
    for name in &names {
        let published = published_for(&case, name);
        let use_alternative = args.reading == Reading::Alternative;
        let mut v = if args.published {
            let p = published
                .ok_or_else(|| usage(format!("no published vector for {name} in case {case}")))?;
            published_vector(&p, &case, use_alternative).map_err(internal)?
        } else {
            let mut v = derive(name, &case, &ctx.opts).map_err(not_accepted)?;
            v.label = published.map(|p| p.label.to_string());
            v
        };
        if let Some(b) = &beta {
            v = v.with_beta(b, &ctx.jets).map_err(internal)?;
        }
        match action {
            ClawAction::Derive => {
                let (t, j) = vector_output(ctx, &v);
                text.push_str(&t);
                items.push(j);
            }
            ClawAction::Verify => {
                let check = verify_conservation(&v, &ctx.jets).map_err(internal)?;
                let label = format!("{} [{}] ({:?})", display_name(name), case, v.provenance);
                match &check {
                    ConservationCheck::Ok => {
                        text.push_str(&format!("{label}: ok\n"));
                        items.push(
                            json!({"symmetry": name, "provenance": v.provenance, "ok": true}),
                        );
                    }
                    ConservationCheck::Fail { residual } => {
                        code = 1;
                        text.push_str(&format!("{label}: FAIL\n  Div C = {}\n", to_text(residual)));
                        items.push(json!({
                            "symmetry": name, "provenance": v.provenance,
                            "ok": false, "residual": expr_json(residual),
                        }));
                    }
                }
            }
            ClawAction::Compare => {
                let p = published.ok_or_else(|| {
                    usage(format!("no published vector for {name} in case {case}"))
                })?;
                let printed = published_vector(&p, &case, use_alternative).map_err(internal)?;
                let report = compare(&printed, &v);
                let missing = uncovered(&report, &ledger, reading);
                let refs: Vec<_> = ledger_for(&report, &ledger)
                    .into_iter()
                    .filter(|e| e.reading == reading)
                    .collect();
                let mut seen = BTreeSet::new();
                if !missing.is_empty() {
                    code = 1;
                }
                text.push_str(&report.to_text());
                for e in refs.iter().filter(|e| seen.insert((e.component, &e.note))) {
                    text.push_str(&format!("  ledger C{}: {}\n", e.component, e.note));
                }
                for n in &printed.notes {
                    text.push_str(&format!("  note: {n}\n"));
                }
                if !report.is_empty() {
                    text.push_str(&if missing.is_empty() {
                        "  every difference is documented in the discrepancy ledger\n".to_string()
                    } else {
                        format!("  {} differences are NOT in the ledger\n", missing.len())
                    });
                }
                let mut j = report.to_json();
                j["reading"] = json!(reading);
                j["ledger"] = json!(refs);
                j["uncovered"] = json!(missing);
                items.push(j);
            }
        }
    }
    if ctx.cli.format == Format::Json {
        text = json_text(json!({"case": case.selector(), "results": items}));
    }
    Ok(Output { code, text })
}

fn eval(
    ctx: &Ctx,
    text: &str,
    d: Option<&str>,
    euler: Option<&str>,
    reduce: bool,
) -> Result<Output, Failure> {
    let jets = &ctx.jets;
    let mut e = parse_with(text, jets.max_order).map_err(internal)?;
    if let Some(d) = d {
        let idx = MultiIndex::parse(d).ok_or_else(|| usage(format!("bad multi-index '{d}'")))?;
        e = jets.total_derivative_multi(&e, idx).map_err(internal)?;
    }
    if let Some(dep) = euler {
        let dep = match dep {
            "u" => Dependent::U,
            "b" | "β" | "beta" => Dependent::Beta,
            other => return Err(usage(format!("--euler takes u or b, not '{other}'"))),
        };
        e = jets.euler_operator(&e, dep).map_err(internal)?;
    }
    if reduce {
        let case = ctx.case()?;
        e = PdeIdeal::for_case(&case)
            .reduce(&e, jets)
            .map_err(internal)?;
    }
    let text = match ctx.cli.format {
        Format::Text => format!("{}\n", to_text(&e)),
        Format::Latex => format!("{}\n", to_latex(&e)),
        Format::Json => json_text(expr_json(&e)),
    };
    Ok(Output { code: 0, text })
}

fn heisenberg(ctx: &Ctx) -> Result<Output, Failure> {
    let checks = laplacian_checks(&ctx.jets).map_err(internal)?;
    let text = match ctx.cli.format {
        Format::Json => json_text(json!(checks
            .iter()
            .map(|c| json!({
                "label": c.label,
                "fields": c.fields.iter().map(field_json).collect::<Vec<_>>(),
                "operator": expr_json(&c.operator),
                "difference": expr_json(&c.difference),
                "matches": c.matches(),
            }))
            .collect::<Vec<_>>())),
        fmt => {
            let show = if fmt == Format::Latex {
                to_latex
            } else {
                to_text
            };
            let mut s = format!("Δ_H u = {}\n", show(&kohn_laplace(Dependent::U)));
            for c in &checks {
                s.push_str(&format!(
                    "{}: {}, {}\n  X² + Y² − Δ_H = {}\n",
                    c.label,
                    field_text(&c.fields[0]),
                    field_text(&c.fields[1]),
                    show(&c.difference)
                ));
            }
            s
        }
    };
    Ok(Output { code: 0, text })
}

fn selftest(ctx: &Ctx) -> Result<Output, Failure> {
    let filter = ctx.optional_case()?;
    let report = run_all(filter.as_ref());
    let text = match ctx.cli.format {
        Format::Json => json_text(json!({
            "passed": report.passed(),
            "millis": report.millis,
            "results": report.results,
        })),
        _ => report.to_text(),
    };
    Ok(Output {
        code: u8::from(!report.passed()),
        text,
    })
}
