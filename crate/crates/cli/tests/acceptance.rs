//! Acceptance criteria. Each prints one PASS/FAIL line with its time bound.
//!
//! Two statements are red as worded and stay red here; a corrected
//! companion line is reported next to each:
//! - `8b`: the one-parameter substitution sends `R_pq` to `v^-1 * R`, not
//!   `v * R` (`R` the standard R-matrix at `q = v^2`). RTT is blind to the
//!   scalar, so `8a` is unaffected.
//! - `12`: inverses of `T^(+-)` satisfy RTT with `R^+ = P R P`, not with `R`.
//!   Already for `n = 2` the inverse entries obey `a' b' = q^-1 b' a'`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use qgauss_cli::{run, CommandKind, JobSpec};
use qgauss_core::jimbo::{build_glpq2, diagonal_product, SlAlgebra};
use qgauss_core::matrixrep::{calibrate_reference_table, KronOrder};
use qgauss_core::verify::{
    check_gauss, check_inverse_relations, check_qdet_and_diagonal, check_rtt, check_serre_and_qcomm,
    rtt_involved_entries, Group, Perturbation, Subject, VerificationReport,
};
use qgauss_core::{AlgebraElement, LaurentPoly, RMatrix, ScalarMatrix};
use serde_json::Value;

type Outcome = Result<(bool, String), String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    bound: Duration,
    run: fn() -> Outcome,
}

/// Criteria whose literal statement is false; see the module docs.
const KNOWN_RED: &[&str] = &["8b", "12"];

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn sl(n: usize) -> Result<Subject, String> {
    Subject::sl_q(n, &BTreeMap::new()).map_err(e)
}

fn job(command: CommandKind) -> JobSpec {
    JobSpec {
        command: Some(command),
        group: Some(Group::SlQ),
        n: Some(2),
        ..JobSpec::default()
    }
}

fn failure(r: &VerificationReport) -> String {
    match r.first_failure() {
        Some(f) => format!("{} n={} fails at {}: {:?}", r.check, r.n, f.name, f.first_nonzero),
        None => format!("{} n={} ok", r.check, r.n),
    }
}

fn c1_generators() -> Outcome {
    let out = run(&job(CommandKind::Build)).map_err(e)?;
    let d = &out.document;
    let expected = [
        ["[K1^-1 ⊗ K1]", "(f1)*[K1^-1 ⊗ X1+]"],
        ["(g1)*[X1- ⊗ K1]", "(f1*g1)*[X1- ⊗ X1+] + [K1 ⊗ K1^-1]"],
    ];
    let mut ok = d["torus_legend"][0] == "K1 = q^{(1/2)H1}";
    for (i, row) in expected.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            ok &= d["t"]["display"][i][j] == *want;
        }
    }
    let formal = !d["bindings"]
        .as_object()
        .is_some_and(|b| b.keys().any(|k| k.starts_with('f') || k.starts_with('g')));
    Ok((
        ok && formal,
        format!("t = {}, legend {}", d["t"]["display"], d["torus_legend"]),
    ))
}

fn c2_rtt() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let start = Instant::now();
        let r = check_rtt(&sl(n)?).map_err(e)?;
        ok &= r.pass && r.relations.iter().all(|x| x.holds);
        notes.push(format!(
            "n={n} {} ({:.2}s)",
            if r.pass { "zero" } else { "nonzero" },
            start.elapsed().as_secs_f64()
        ));
        if n == 4 && start.elapsed() > secs(300) {
            ok = false;
        }
    }
    Ok((ok, notes.join(", ")))
}

fn c3_qdet() -> Outcome {
    let mut ok = true;
    for n in 2..=3 {
        let r = check_qdet_and_diagonal(&sl(n)?).map_err(e)?;
        ok &= r.relation("qdet").is_some_and(|x| x.holds);
    }
    for n in 2..=4 {
        let s = sl(n)?;
        let one = AlgebraElement::one(s.t.get(0, 0).signature());
        let t = s.triple.as_ref().ok_or("no triple")?;
        ok &= diagonal_product(&t.t_plus).map_err(e)? == one;
        ok &= diagonal_product(&t.t_minus).map_err(e)? == one;
    }
    Ok((ok, "qdet n=2,3; diagonal products n=2,3,4".into()))
}

fn c4_ladder() -> Outcome {
    let mut ok = true;
    for n in 3..=4 {
        let a = SlAlgebra::new(n).map_err(e)?;
        let built = a
            .ladder_reconstruct(&a.delta_generators(), &a.lambda_default())
            .map_err(e)?;
        ok &= built == a.closed_form();
    }
    Ok((ok, "lambda = q - q^-1, n=3,4".into()))
}

fn c5_gauss() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 2..=3 {
        let r = check_gauss(&sl(n)?).map_err(e)?;
        ok &= r.pass && r.relations.iter().all(|x| x.holds) && r.relations.len() == 9;
        notes.push(failure(&r));
    }
    Ok((ok, notes.join("; ")))
}

fn c6_serre() -> Outcome {
    let mut ok = true;
    let mut count = 0;
    for n in 3..=4 {
        let r = check_serre_and_qcomm(&sl(n)?).map_err(e)?;
        ok &= r.pass && r.notes.iter().any(|s| s.starts_with("sign pairing"));
        count += r.relations.iter().filter(|x| !x.informational).count();
    }
    Ok((
        ok,
        format!("{count} relations vanish; sign pairing recorded in the report"),
    ))
}

/// The published 2x2 table, transcribed in `q`.
const TABLE: [[[&str; 4]; 4]; 4] = [
    [
        ["1", "0", "0", "0"],
        ["0", "q", "0", "0"],
        ["0", "0", "q^-1", "0"],
        ["0", "0", "0", "1"],
    ],
    [
        ["0", "0", "1", "0"],
        ["0", "0", "0", "q"],
        ["0", "0", "0", "0"],
        ["0", "0", "0", "0"],
    ],
    [
        ["0", "0", "0", "0"],
        ["1", "0", "0", "0"],
        ["0", "0", "0", "0"],
        ["0", "0", "q^-1", "0"],
    ],
    [
        ["1", "0", "0", "0"],
        ["0", "q^-1", "1", "0"],
        ["0", "0", "q", "0"],
        ["0", "0", "0", "1"],
    ],
];

fn c7_table() -> Outcome {
    let out = run(&JobSpec {
        calibrate: true,
        ..job(CommandKind::Rep)
    })
    .map_err(e)?;
    let cal = calibrate_reference_table().map_err(e)?;
    let vars = SlAlgebra::new(2).map_err(e)?.vars().clone();
    let v2 = LaurentPoly::var_pow(&vars, "v", 2).map_err(e)?;
    let mut ok = out.exit_code == 0 && cal.order == KronOrder::Reversed;
    for (k, table) in TABLE.iter().enumerate() {
        let m = ScalarMatrix::from_fn(&vars, 4, 4, |i, j| {
            LaurentPoly::parse(&vars, table[i][j])
                .unwrap()
                .substitute("q", &v2)
                .unwrap()
        });
        ok &= cal.matrices[k].matrix == m;
    }
    let meta = &out.document["calibration"];
    ok &= meta["order"] == "reversed" && meta["f"] == "v" && meta["g"] == "v^-1" && meta["q"] == "q = v^2";
    Ok((ok, format!("calibration {meta}")))
}

fn glpq_substitution() -> Result<(ScalarMatrix, ScalarMatrix, LaurentPoly), String> {
    let g = build_glpq2().map_err(e)?;
    let vars = g.signature.vars().clone();
    let v = LaurentPoly::var(&vars, "v").map_err(e)?;
    let vi = LaurentPoly::var_pow(&vars, "v", -1).map_err(e)?;
    let v2 = LaurentPoly::var_pow(&vars, "v", 2).map_err(e)?;
    let rpq = RMatrix::two_parameter(&vars).map_err(e)?;
    let sub = rpq
        .matrix
        .map(|x| x.substitute_many(&[("k", &v), ("p", &vi), ("q", &vi)]))
        .map_err(e)?;
    let standard = RMatrix::standard(2, &vars)
        .map_err(e)?
        .matrix
        .map(|x| x.substitute("q", &v2))
        .map_err(e)?;
    Ok((sub, standard, v))
}

fn c8a_glpq_rtt() -> Outcome {
    let r = check_rtt(&Subject::glpq2(&BTreeMap::new()).map_err(e)?).map_err(e)?;
    Ok((r.pass, format!("k, p, q, c+ and c- formal; {}", failure(&r))))
}

fn c8b_substitution_literal() -> Outcome {
    let (sub, standard, v) = glpq_substitution()?;
    let ok = sub == standard.scale(&v);
    Ok((ok, "k -> v, p -> v^-1, q -> v^-1 against v * R(q = v^2)".into()))
}

fn c8b_substitution_corrected() -> Outcome {
    let (sub, standard, v) = glpq_substitution()?;
    Ok((sub.scale(&v) == standard, "v * subst(R_pq) = R(q = v^2) exactly".into()))
}

fn c9_limit() -> Outcome {
    let out = run(&JobSpec {
        f: Some("q^-1*lambda".into()),
        g: Some("-q*lambda".into()),
        ..job(CommandKind::Limit)
    })
    .map_err(e)?;
    let d = &out.document;
    let expected = [
        ["(1/2)*[1 ⊗ H1] + (-1/2)*[H1 ⊗ 1]", "(2)*[1 ⊗ X1+]"],
        ["(-2)*[X1- ⊗ 1]", "(-1/2)*[1 ⊗ H1] + (1/2)*[H1 ⊗ 1]"],
    ];
    let mut ok = out.exit_code == 0;
    for (i, row) in expected.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            ok &= d["m"][i][j] == *want;
        }
    }
    let comms = d["commutators"].as_array().ok_or("no commutators")?;
    ok &= comms.len() == 3 && comms.iter().all(|c| c["holds"] == Value::Bool(true));
    Ok((ok, format!("M = {}", d["m"])))
}

fn c10_dual() -> Outcome {
    let r = check_rtt(&Subject::dual_sl2(&BTreeMap::new()).map_err(e)?).map_err(e)?;
    Ok((r.pass, failure(&r)))
}

fn flip(
    n: usize,
    perturb: &str,
    check: fn(&Subject) -> qgauss_core::Result<VerificationReport>,
    located: impl Fn(&VerificationReport) -> bool,
) -> Result<(bool, String), String> {
    let clean = check(&sl(n)?).map_err(e)?;
    let p: Perturbation = perturb.parse().map_err(e)?;
    let bad = check(&sl(n)?.perturbed(&p).map_err(e)?).map_err(e)?;
    let ok = clean.pass && !bad.pass && located(&bad);
    Ok((ok, format!("{perturb}: {}", failure(&bad))))
}

fn involves(r: &VerificationReport, n: usize, entry: (usize, usize)) -> bool {
    r.first_failure()
        .and_then(|f| f.first_nonzero.as_ref())
        .is_some_and(|loc| rtt_involved_entries(n, loc.row, loc.col).contains(&entry))
}

fn c11_negative_controls() -> Outcome {
    let results = [
        flip(3, "t12:bump", check_rtt, |r| involves(r, 3, (0, 1)))?,
        flip(2, "t11", check_qdet_and_diagonal, |r| {
            r.first_failure().is_some_and(|f| f.name == "qdet")
        })?,
        flip(3, "t12+:shift", check_gauss, |r| involves(r, 3, (0, 1)))?,
        flip(3, "t12+:shift", check_serre_and_qcomm, |r| {
            r.first_failure()
                .is_some_and(|f| f.name.contains("+(1,") || f.name.contains(",1)"))
        })?,
        flip(2, "t12+:shift", check_inverse_relations, |r| involves(r, 2, (0, 1)))?,
    ];
    let ok = results.iter().all(|(b, _)| *b);
    Ok((
        ok,
        results.iter().map(|(_, s)| s.as_str()).collect::<Vec<_>>().join("; "),
    ))
}

fn inverse_relations(name_suffix: &str) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 2..=3 {
        let r = check_inverse_relations(&sl(n)?).map_err(e)?;
        for rel in r.relations.iter().filter(|x| x.name.ends_with(name_suffix)) {
            ok &= rel.holds;
            if let Some(loc) = &rel.first_nonzero {
                notes.push(format!(
                    "n={n} {}: ({}, {}) {}",
                    rel.name, loc.row, loc.col, loc.residual
                ));
            }
        }
    }
    if notes.is_empty() {
        notes.push("all residuals zero for n=2,3".into());
    }
    Ok((ok, notes.join("; ")))
}

fn c12_inverse_same_r() -> Outcome {
    inverse_relations("_same_r")
}

fn c12_inverse_transposed_r() -> Outcome {
    inverse_relations("_transposed_r")
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: "1",
            title: "rank-2 generator matrix in normal form, f and g formal",
            bound: secs(1),
            run: c1_generators,
        },
        Criterion {
            id: "2",
            title: "RTT with zero residual for n = 2, 3, 4",
            bound: secs(300),
            run: c2_rtt,
        },
        Criterion {
            id: "3",
            title: "qdet T = 1 (n = 2, 3) and unit diagonal products (n <= 4)",
            bound: secs(60),
            run: c3_qdet,
        },
        Criterion {
            id: "4",
            title: "commutator ladder equals closed forms for n = 3, 4",
            bound: secs(60),
            run: c4_ladder,
        },
        Criterion {
            id: "5",
            title: "Gauss-generator relations with R and R_d for n = 2, 3",
            bound: secs(120),
            run: c5_gauss,
        },
        Criterion {
            id: "6",
            title: "q-commutation and deformed Serre cubics for n = 3, 4",
            bound: secs(60),
            run: c6_serre,
        },
        Criterion {
            id: "7",
            title: "published 4x4 representation table under calibration",
            bound: secs(1),
            run: c7_table,
        },
        Criterion {
            id: "8a",
            title: "GL_pq(2) passes RTT against R_pq",
            bound: secs(10),
            run: c8a_glpq_rtt,
        },
        Criterion {
            id: "8b",
            title: "one-parameter substitution maps R_pq to v * R",
            bound: secs(10),
            run: c8b_substitution_literal,
        },
        Criterion {
            id: "8b'",
            title: "one-parameter substitution maps R_pq to v^-1 * R",
            bound: secs(10),
            run: c8b_substitution_corrected,
        },
        Criterion {
            id: "9",
            title: "classical limit M and its commutators",
            bound: secs(1),
            run: c9_limit,
        },
        Criterion {
            id: "10",
            title: "three-factor dual realization passes RTT",
            bound: secs(10),
            run: c10_dual,
        },
        Criterion {
            id: "11",
            title: "single-entry perturbations fail with located residuals",
            bound: secs(60),
            run: c11_negative_controls,
        },
        Criterion {
            id: "12",
            title: "inverses of T^(+-) satisfy RTT with the same R",
            bound: secs(60),
            run: c12_inverse_same_r,
        },
        Criterion {
            id: "12'",
            title: "inverses of T^(+-) satisfy RTT with R^+ = P R P",
            bound: secs(60),
            run: c12_inverse_transposed_r,
        },
    ]
}

fn main() {
    let mut unexpected = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok((ok, d)) => (ok && elapsed <= c.bound, d),
            Err(err) => (false, format!("error: {err}")),
        };
        println!(
            "{} [{}] {} ({:.3}s, bound {}s): {}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.bound.as_secs(),
            detail
        );
        if pass == KNOWN_RED.contains(&c.id) {
            unexpected.push(c.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected status: {unexpected:?}");
        std::process::exit(1);
    }
}
