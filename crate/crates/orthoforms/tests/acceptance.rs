//! Runs every acceptance criterion and prints one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use orthoforms::arrangements::{
    a_sequence, build_arrangement, build_arrangement_unchecked, looijenga_check, restrict_norm, Restriction, Verdict,
};
use orthoforms::jacobi::{
    prec_for_qmax, theta_block, theta_product_formula, theta_series, JacobiClass, ThetaBlockSpec,
};
use orthoforms::laurent::ZERO_MONO;
use orthoforms::lifts::{borch, fj_log, fj_symmetry_check, grit, psi_from_block, psi_input, verify_theta_identity};
use orthoforms::tables::{
    enumerate_families, expand_rational, family_entry, generator_weights, hilbert_series, jacobian_weight,
    jacobian_weight_from_generators, minimal_generators, norm2_classification, predicted_families, BigradedAlgebra,
    FamilyTag,
};
use orthoforms::{Lattice, RootLatticeSpec, Q};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn delta_table() -> Outcome {
    let start = Instant::now();
    let printed = [
        ("A1", Q::new(1, 2)),
        ("A2", Q::new(2, 3)),
        ("A3", Q::one()),
        ("A4", Q::new(6, 5)),
        ("A5", Q::new(3, 2)),
        ("A6", Q::new(12, 7)),
        ("A7", Q::from(2)),
        ("A8", Q::new(20, 9)),
        ("D4", Q::one()),
        ("D5", Q::new(5, 4)),
        ("D6", Q::new(3, 2)),
        ("D7", Q::new(7, 4)),
        ("D8", Q::from(2)),
        ("E6", Q::new(4, 3)),
        ("E7", Q::new(3, 2)),
        ("E8", Q::zero()),
    ];
    let bad: Vec<String> = printed
        .iter()
        .filter_map(|(name, d)| {
            let got = Lattice::parse(name).unwrap().delta();
            (got != *d).then(|| format!("{name}: {got} != {d}"))
        })
        .collect();
    let t = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && t < 5.0,
        format!("16 lattices, {} mismatches {:?}, {t:.2}s", bad.len(), bad),
    )
}

fn index_25_block() -> Outcome {
    let spec = ThetaBlockSpec::classical(&[4, 4, 3, 2, 1]);
    let w = spec.weight().unwrap();
    let idx = spec.index().unwrap();
    let q = spec.q_order().unwrap();
    let class = theta_block(&spec, prec_for_qmax(7)).and_then(|e| e.classify());
    let ok =
        w == Q::from(2) && idx == Some(Q::from(25)) && q == Q::one() && matches!(class, Ok(JacobiClass::Holomorphic));
    outcome(
        ok,
        format!(
            "weight {w}, index {:?}, q-order {q}, class {:?}",
            idx.map(|x| x.to_string()),
            class.map(|c| c.to_string())
        ),
    )
}

fn triple_product() -> Outcome {
    let mut bad = Vec::new();
    for (lat, p) in [
        ("A1", vec![1]),
        ("A1", vec![2]),
        ("A2", vec![1, 0]),
        ("D4", vec![0, 1, 0, 0]),
    ] {
        let l = std::sync::Arc::new(Lattice::parse(lat).unwrap());
        let a = theta_series(l.clone(), &p, prec_for_qmax(10)).unwrap();
        let b = theta_product_formula(l, &p, prec_for_qmax(10)).unwrap();
        if a != b {
            bad.push(format!("{lat} {p:?}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("sum vs product to q^10 on 4 vectors, mismatches {bad:?}"),
    )
}

fn theta_identities() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    let specs = (1..=4)
        .map(|m| (format!("D{m}"), ThetaBlockSpec::d_family(m).unwrap()))
        .chain((1..=3).map(|n| (format!("A{n}"), ThetaBlockSpec::a_family(n).unwrap())));
    for (name, spec) in specs {
        match verify_theta_identity(&spec, 3, 3) {
            Ok(r) => {
                ok &= r.equal;
                lines.push(format!("{name}:{}/{}", r.compared - r.mismatches.len(), r.compared));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{name}: {e}"));
            }
        }
    }
    let t = start.elapsed().as_secs_f64();
    outcome(
        ok && t < 300.0,
        format!("coefficients equal {}, {t:.2}s", lines.join(" ")),
    )
}

fn psi_terms() -> Outcome {
    let mut bad = Vec::new();
    for m in 1..=6usize {
        let psi = psi_input(m, 3).unwrap();
        let q0 = psi.poly(0).unwrap();
        let ok_const = q0.coeff(&ZERO_MONO) == Q::from(2 * (12 - m as i64));
        let ok_rest = q0.len() == 2 * m + 1
            && q0
                .iter()
                .all(|(l, c)| *l == ZERO_MONO || (c.is_one() && psi.norm(l) == Q::one()));
        let integral = psi.orders().all(|(_, p)| p.iter().all(|(_, c)| c.is_integer()));
        let c = psi.q0_invariants().unwrap().c;
        if !(ok_const && ok_rest && integral && c == Q::one()) {
            bad.push(m);
        }
    }
    outcome(bad.is_empty(), format!("m = 1..6, failing {bad:?}"))
}

fn a_sequence_check() -> Outcome {
    let expected = [Q::new(1, 4), Q::new(1, 3), Q::new(3, 8), Q::new(2, 5), Q::new(5, 12)];
    let seq_ok = expected.iter().enumerate().all(|(i, e)| a_sequence(i + 1) == *e);
    let restrict_ok =
        (2..=5).all(|k| restrict_norm(&a_sequence(k)).unwrap() == Restriction::Divisor(a_sequence(k - 1)));
    outcome(
        seq_ok && restrict_ok,
        format!(
            "a_1..a_5 = {:?}",
            (1..=5).map(|k| a_sequence(k).to_string()).collect::<Vec<_>>()
        ),
    )
}

fn looijenga_all() -> Outcome {
    let fams = enumerate_families();
    let failing: Vec<String> = fams
        .iter()
        .filter(|e| looijenga_check(&build_arrangement(&e.split).unwrap()).verdict != Verdict::Pass)
        .map(|e| e.split.to_string())
        .collect();
    let koecher = looijenga_check(&build_arrangement_unchecked(&"9A1:A1".parse().unwrap()).unwrap());
    outcome(
        failing.is_empty() && koecher.verdict == Verdict::Fail,
        format!(
            "{}/{} pass, 9A1:A1 {} (bucket sum {}, max codimension {}, bound {})",
            fams.len() - failing.len(),
            fams.len(),
            koecher.verdict,
            koecher.weighted_sum,
            koecher.max_codimension,
            koecher.bound
        ),
    )
}

fn appendix() -> Outcome {
    let fams = enumerate_families();
    let count = |t| fams.iter().filter(|e| e.family == t).count();
    let split = (
        count(FamilyTag::AType),
        count(FamilyTag::AdType),
        count(FamilyTag::AeType),
    );
    let rows = common::appendix_rows();
    let mut computed: Vec<String> = Vec::new();
    let mut bad = Vec::new();
    for row in &rows {
        let e = family_entry(&row.lattice).unwrap();
        computed.push(e.split.to_string());
        let g = generator_weights(&e);
        if e.family.to_string() != row.family
            || g.abelian != row.abelian
            || g.jacobi != row.jacobi
            || g.jacobian_weight != row.jacobian_weight
        {
            bad.push(format!(
                "{} (printed {:?}/{}, computed {:?}/{})",
                row.lattice, row.jacobi, row.jacobian_weight, g.jacobi, g.jacobian_weight
            ));
        }
    }
    let all: BTreeSet<String> = fams
        .iter()
        .chain(&predicted_families())
        .map(|e| e.split.to_string())
        .collect();
    let covered: BTreeSet<String> = computed.into_iter().collect();
    let ok = fams.len() == 147 && split == (97, 45, 5) && rows.len() == 164 && covered == all && bad.is_empty();
    outcome(
        ok,
        format!(
            "{} entries {split:?}, {}/{} rows equal; differing: {}",
            fams.len(),
            rows.len() - bad.len(),
            rows.len(),
            bad.join("; ")
        ),
    )
}

fn jacobian_weights() -> Outcome {
    let mut bad = Vec::new();
    let entries: Vec<_> = enumerate_families().into_iter().chain(predicted_families()).collect();
    for e in &entries {
        if let Err(err) = jacobian_weight(e) {
            bad.push(format!("{}: {err}", e.split));
        }
    }
    let full = jacobian_weight_from_generators(5, &[2, 4, 4, 6, 6, 8, 10, 12]);
    outcome(
        bad.is_empty() && full == 59,
        format!(
            "{}/{} agree, 5A1 full group {full}; {bad:?}",
            entries.len() - bad.len(),
            entries.len()
        ),
    )
}

fn hilbert() -> Outcome {
    let start = Instant::now();
    let items = common::hilbert_items();
    let mut bad = Vec::new();
    for it in &items {
        let got = hilbert_series(&BigradedAlgebra::parse(&it.name).unwrap(), 40).unwrap();
        let printed = expand_rational(&it.numerator, &it.denominator, 40);
        if got != printed {
            let k = (0..=40).find(|&k| got[k] != printed[k]).unwrap();
            bad.push(format!(
                "{} (t^{k}: computed {}, printed {})",
                it.name, got[k], printed[k]
            ));
        }
    }
    let t = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && items.len() == 26 && t < 60.0,
        format!(
            "{}/{} series equal to t^40, {t:.2}s; differing: {}",
            items.len() - bad.len(),
            items.len(),
            bad.join("; ")
        ),
    )
}

fn generators() -> Outcome {
    let mut bad = Vec::new();
    let items = common::hilbert_items();
    for it in &items {
        let g = minimal_generators(&BigradedAlgebra::parse(&it.name).unwrap(), 12).unwrap();
        if g.weights != it.generators {
            bad.push(format!(
                "{} (printed {} weights, computed {})",
                it.name,
                it.generators.len(),
                g.weights.len()
            ));
        }
    }
    for (name, expected) in [
        ("A1(2)", vec![4, 6, 8, 10, 11, 12]),
        ("A1(3)", vec![4, 6, 6, 8, 9, 10, 11, 12]),
    ] {
        let g = minimal_generators(&BigradedAlgebra::parse(name).unwrap(), 12).unwrap();
        if g.weights != expected {
            bad.push(format!("{name} {:?}", g.weights));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{}/{} multisets equal; differing: {}",
            items.len() + 2 - bad.len(),
            items.len() + 2,
            bad.join("; ")
        ),
    )
}

fn norm2() -> Outcome {
    let printed = [
        "A1", "2A1", "3A1", "4A1", "A2", "A3", "A4", "A5", "A6", "A7", "2A1+A2", "2A1+A3", "A1+A2", "A1+2A2", "A1+A3",
        "A1+A4", "A1+A5", "2A2", "3A2", "A2+A3", "A2+A4", "2A3", "D4", "D5", "D6", "D7", "D8", "2D4", "A1+D4", "A1+D5",
        "A1+D6", "2A1+D4", "A2+D4", "A2+D5", "A3+D4", "E6", "E7", "A1+E6", "A2+E6", "A1+E7",
    ];
    let printed: BTreeSet<RootLatticeSpec> = printed
        .iter()
        .map(|s| s.parse::<RootLatticeSpec>().unwrap().sorted())
        .collect();
    let got: BTreeSet<RootLatticeSpec> = norm2_classification().into_iter().map(|s| s.sorted()).collect();
    outcome(
        printed.len() == 40 && got == printed,
        format!("{} computed, {} printed", got.len(), printed.len()),
    )
}

fn property_suites() -> Outcome {
    let mut fails = Vec::new();
    let p = prec_for_qmax(8);
    let blocks = [
        theta_block(&ThetaBlockSpec::d_family(2).unwrap(), p).unwrap(),
        theta_block(&ThetaBlockSpec::a_family(2).unwrap(), p).unwrap(),
        psi_input(3, 8).unwrap(),
    ];
    for (i, b) in blocks.iter().enumerate() {
        for m in [2, 3] {
            let n = common::hecke_oracle_failures(b, m);
            if n > 0 {
                fails.push(format!("hecke block {i} m={m}: {n}"));
            }
        }
        if b.periodicity_witness().unwrap().is_some() {
            fails.push(format!("periodicity block {i}"));
        }
    }
    let psi = psi_input(2, 4).unwrap();
    let b = borch(&psi, 3, 3).unwrap();
    if !common::fj_equal(&borch(&psi.scale(&Q::from(2)), 3, 3).unwrap(), &b.mul(&b).unwrap()) {
        fails.push("borch(2Ψ) != borch(Ψ)²".into());
    }
    let psi2 = psi_from_block(&common::d2_prime_block(), psi.prec()).unwrap();
    let b2 = borch(&psi2, 3, 3).unwrap();
    if !common::fj_equal(&borch(&psi.add(&psi2).unwrap(), 3, 3).unwrap(), &b.mul(&b2).unwrap()) {
        fails.push("borch(Ψ+Ψ') != borch(Ψ)borch(Ψ')".into());
    }
    for m in 1..=4 {
        let psi = psi_input(m, 4).unwrap();
        let b = borch(&psi, 3, 3).unwrap();
        for (j, l) in fj_log(&b).unwrap().iter().enumerate() {
            let s = psi.hecke(j as i64 + 1).unwrap().neg();
            let pr = l.prec().min(s.prec());
            if l.truncate(pr).sorted_terms() != s.truncate(pr).sorted_terms() {
                fails.push(format!("log D{m} ξ^{}", j + 1));
            }
        }
        if !fj_symmetry_check(&b) {
            fails.push(format!("symmetry borch D{m}"));
        }
        let th = theta_block(&ThetaBlockSpec::d_family(m).unwrap(), prec_for_qmax(10)).unwrap();
        if !fj_symmetry_check(&grit(&th, 3, 3).unwrap()) {
            fails.push(format!("symmetry grit D{m}"));
        }
        for k in 2..=3 {
            if th.hecke(k).unwrap().periodicity_witness().unwrap().is_some() {
                fails.push(format!("periodicity D{m}|T({k})"));
            }
        }
    }
    for n in 1..=3 {
        let th = theta_block(&ThetaBlockSpec::a_family(n).unwrap(), prec_for_qmax(10)).unwrap();
        if !fj_symmetry_check(&grit(&th, 3, 3).unwrap()) {
            fails.push(format!("symmetry grit A{n}"));
        }
    }
    outcome(fails.is_empty(), format!("{} failures {fails:?}", fails.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("discriminant minimal norms", delta_table),
        ("weight-2 index-25 theta block", index_25_block),
        ("theta triple product", triple_product),
        ("theta block identities", theta_identities),
        ("Psi_Dm q^0-terms", psi_terms),
        ("a-sequence and restriction", a_sequence_check),
        ("Looijenga certificates", looijenga_all),
        ("generator tables", appendix),
        ("Jacobian weight routes", jacobian_weights),
        ("Hilbert-Poincare series", hilbert),
        ("minimal generators", generators),
        ("Norm2 classification", norm2),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
