//! One pass/fail line per acceptance criterion. Exits nonzero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use fibered_core::atoric::{atoric_part, central_resolution, certify, is_atoric, special_class, Resolution};
use fibered_core::catalog::{catalog, identify};
use fibered_core::group::{build_group, Group};
use fibered_core::idempotents::epsilon_indices;
use fibered_core::mobius::deflation_number;
use fibered_core::report::Report;
use fibered_core::verify;
use fibered_core::{Rational, Result};

const SEED: u64 = 0x5eed;

type Outcome = Result<(bool, String)>;

fn groups(specs: &[&str]) -> Vec<Arc<Group>> {
    specs.iter().map(|s| build_group(s).expect("group spec")).collect()
}

fn merged(name: &str, reports: impl IntoIterator<Item = Result<Report>>) -> Result<Report> {
    let mut all = Report::new(name, "acceptance");
    for r in reports {
        all.merge(r?);
    }
    Ok(all)
}

/// `(passed, summary)` from a merged report.
fn summarize(r: &Report) -> (bool, String) {
    let instances: usize = r.checks.iter().map(|c| c.instances).sum();
    match r.failures().next() {
        None => (true, format!("{} identities, {instances} instances", r.checks.len())),
        Some(c) => (false, format!("{} failed: {}", c.identity, c.witness.clone().unwrap_or_default())),
    }
}

fn mackey() -> Outcome {
    let small = groups(&["1", "C2", "C3", "C4", "C2 x C2"]);
    let exhaustive = verify::verify_mackey(&small, usize::MAX, 0, SEED)?;
    let order8: Vec<_> = catalog(8)?.into_iter().filter(|g| g.order() == 8).collect();
    let sampled = verify::verify_mackey(&order8, 0, 250, SEED)?;
    let n = sampled.checks.iter().map(|c| c.instances).sum::<usize>();
    let r = merged("mackey", [Ok(exhaustive), Ok(sampled)])?;
    let (ok, s) = summarize(&r);
    Ok((ok && n >= 200, format!("{s}; {n} order-8 samples")))
}

const E_TILDE_GROUPS: [&str; 10] = ["C2", "C3", "C4", "C2 x C2", "C8", "C2 x C4", "D8", "Q8", "C9", "C3 x C3"];

fn e_tilde() -> Outcome {
    let r = merged("etilde", groups(&E_TILDE_GROUPS).iter().map(verify::verify_etilde))?;
    Ok(summarize(&r))
}

fn phi() -> Outcome {
    let r = merged(
        "phi",
        groups(&E_TILDE_GROUPS).iter().map(|g| verify::verify_phi(g, ["C4", "D8", "Q8"].contains(&g.name()))),
    )?;
    let required = ["phi.product", "phi.sum", "phi.fast", "phi.left_support", "phi.right_support", "phi_y.formula", "y_phi.formula"];
    let missing: Vec<&str> = required.into_iter().filter(|t| !r.checks.iter().any(|c| c.identity == *t)).collect();
    let (ok, s) = summarize(&r);
    Ok((ok && missing.is_empty(), if missing.is_empty() { s } else { format!("missing {missing:?}") }))
}

fn epsilon() -> Outcome {
    let gs = groups(&["C2", "C3", "C4", "C2 x C2", "C8", "D8", "Q8", "C9"]);
    let r = merged("epsilon", gs.iter().map(verify::verify_epsilon))?;
    let c2 = epsilon_indices(&gs[0])?.len();
    let c4 = epsilon_indices(&gs[2])?.len();
    let (ok, s) = summarize(&r);
    Ok((ok && c2 == 2 && c4 == 5, format!("{s}; |I(C2)| = {c2}, |I(C4)| = {c4}")))
}

fn decomposition() -> Outcome {
    let c2 = fibered_core::functor::decompose(&build_group("C2")?, false)?;
    let dims_ok = c2.dimensions() == vec![2, 1] && c2.total_rank == 3;
    let cat = catalog(8)?;
    let r = merged("decomposition", cat.iter().map(verify::verify_decomposition))?;
    let (ok, s) = summarize(&r);
    Ok((ok && dims_ok, format!("C2 dimensions {:?} of rank {}; {} groups; {s}", c2.dimensions(), c2.total_rank, cat.len())))
}

fn deflation() -> Outcome {
    let mut bad = Vec::new();
    let cat = catalog(16)?;
    for g in &cat {
        let m: Rational = deflation_number(g, &g.trivial())?;
        if m != Rational::from_integer(1.into()) {
            bad.push(format!("m_{{{},1}} = {m}", g.name()));
        }
    }
    for p in [2i64, 3] {
        let cp = build_group(&format!("C{p}"))?;
        let m: Rational = deflation_number(&cp, &cp.whole())?;
        if m != Rational::new((p - 1).into(), p.into()) {
            bad.push(format!("m_{{C{p},C{p}}} = {m}"));
        }
    }
    let klein = build_group("C2 x C2")?;
    for x in 1..4 {
        let m: Rational = deflation_number(&klein, &klein.closure(&[x]))?;
        if m != Rational::from_integer(0.into()) {
            bad.push(format!("m_{{Klein,<{x}>}} = {m}"));
        }
    }
    let r = merged("deflation", cat.iter().map(verify::verify_deflation))?;
    let (ok, s) = summarize(&r);
    Ok((ok && bad.is_empty(), if bad.is_empty() { s } else { bad.join(", ") }))
}

fn blocks() -> Outcome {
    let gs = groups(&["C2", "C4", "C2 x C2", "C8", "D8", "Q8"]);
    let mut reports: Vec<Result<Report>> = gs.iter().map(|p| verify::verify_blocks(p, 100, SEED)).collect();
    reports.push(verify::verify_blocks_cross(&groups(&["C4", "D8", "Q8"]), 100, SEED));
    let r = merged("blocks", reports)?;
    Ok(summarize(&r))
}

fn vertex() -> Outcome {
    let r = merged("vertex", groups(&["C2", "C4", "C2 x C2", "D8", "Q8", "C8"]).iter().map(verify::verify_vertex))?;
    Ok(summarize(&r))
}

fn resolutions() -> Outcome {
    let cat = catalog(32)?;
    let one = build_group("1")?;
    let mut found = 0;
    let mut none = 0;
    let mut bad = Vec::new();
    for l in &cat {
        if !is_atoric(l)? {
            continue;
        }
        let predicted = l.is_cyclic() || special_class(l)?.quasi_extraspecial;
        match central_resolution(&one, l, &cat)? {
            Resolution::Found(w) => {
                found += 1;
                let (_, nonzero) = certify::<Rational>(&one, l, &w)?;
                if !predicted || !nonzero {
                    bad.push(format!("{}: predicted {predicted}, certified {nonzero}", l.name()));
                }
            }
            Resolution::NoneInCatalog { .. } => {
                none += 1;
                if predicted {
                    bad.push(format!("{}: predicted but none in catalog", l.name()));
                }
            }
        }
    }
    let q8 = build_group("Q8")?;
    let q8_ok = match central_resolution(&one, &q8, &cat)? {
        Resolution::Found(w) => identify(&w.q)?.is_some_and(|q| q.name() == "Q8") && w.k == q8.center() && w.s.is_trivial(),
        Resolution::NoneInCatalog { .. } => false,
    };
    if !q8_ok {
        bad.push("Q8 witness is not (Q8, Z, 1)".into());
    }
    let summary = format!("{found} found, {none} none-in-catalog over {} catalog groups", cat.len());
    Ok((bad.is_empty(), if bad.is_empty() { summary } else { bad.join("; ") }))
}

fn examples() -> Outcome {
    let mut bad = Vec::new();
    for s in ["D8", "Q8"] {
        let g = build_group(s)?;
        if !is_atoric(&g)? {
            bad.push(format!("{s} not atoric"));
        }
        let (q, _) = g.quotient(&g.center(), "P/Z")?;
        if atoric_part(&q)?.quotient.order() != 1 {
            bad.push(format!("({s}/Z)^@ is not trivial"));
        }
        let c = special_class(&g)?;
        if !(c.quasi_extraspecial && c.generalized_extraspecial) {
            bad.push(format!("{s}: class {:?}", c.tag));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "D8, Q8 atoric with trivial (P/Z)^@, both extraspecial".into() } else { bad.join("; ") }))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("mackey oracle", mackey),
        ("e-tilde system", e_tilde),
        ("phi system", phi),
        ("epsilon system", epsilon),
        ("decomposition", decomposition),
        ("deflation numbers", deflation),
        ("blocks", blocks),
        ("vertex", vertex),
        ("central resolutions", resolutions),
        ("examples", examples),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match f() {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail} ({:.1}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
