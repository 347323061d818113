use std::fmt::Write as _;

use orthoforms::arrangements::{build_arrangement, build_arrangement_unchecked, looijenga_check};
use orthoforms::lifts::{borch_input_prec, psi_from_block};
use orthoforms::tables::{
    enumerate_families, family_entry, hilbert_series, minimal_generators, norm2_classification, predicted_families,
    table_row, TableRow,
};
use orthoforms::{
    prec_for_qmax, verify_theta_identity, BigradedAlgebra, Error, FourierJacobiSeries, Lattice, ThetaBlockSpec, Verdict,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{AlgebraArgs, BlockArgs, BlockFamily, Format};

/// Text to print and the exit code.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::InsufficientPrecision { .. } => 3,
            Error::Disagreement { .. }
            | Error::NonExactDivision { .. }
            | Error::NonIntegralSingularPart { .. }
            | Error::NegativeXiOrder(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

fn ok(text: String) -> Result<Outcome, Failure> {
    Ok(Outcome { text, code: 0 })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn no_csv(f: Format) -> Result<(), Failure> {
    if f == Format::Csv {
        return Err(usage("--format csv is only available for `tables weights`"));
    }
    Ok(())
}

fn join(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn block_spec(b: &BlockArgs) -> Result<ThetaBlockSpec, Failure> {
    match (b.family, b.n, &b.classical) {
        (Some(BlockFamily::D), Some(n), _) => Ok(ThetaBlockSpec::d_family(n)?),
        (Some(BlockFamily::A), Some(n), _) => Ok(ThetaBlockSpec::a_family(n)?),
        (Some(_), None, _) => Err(usage("--family needs --n")),
        (None, _, Some(f)) => Ok(ThetaBlockSpec::classical(f)),
        (None, _, None) => Err(usage("give a theta block with --family and --n, or --classical")),
    }
}

fn check_box(ximax: i64, qmax: i64) -> Result<(), Failure> {
    if ximax < 1 || qmax < 0 {
        return Err(usage("need --ximax >= 1 and --qmax >= 0"));
    }
    Ok(())
}

pub fn lattice_info(spec: &str, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    let lat = Lattice::parse(spec)?;
    let classes = lat.discriminant_classes();
    let roots = lat.roots().len();
    if f == Format::Json {
        let cls: Vec<Value> = classes
            .iter()
            .map(|c| json!({ "representative": c.representative.to_string(), "norm": c.delta }))
            .collect();
        return ok(to_json(&json!({
            "lattice": lat.spec.to_string(),
            "rank": lat.rank(),
            "det": lat.det,
            "elementary_divisors": lat.elementary_divisors(),
            "roots": roots,
            "delta": lat.delta(),
            "classes": cls,
        })));
    }
    let mut s = String::new();
    writeln!(s, "lattice: {}", lat.spec).unwrap();
    writeln!(s, "rank: {}", lat.rank()).unwrap();
    writeln!(s, "det: {}", lat.det).unwrap();
    writeln!(s, "elementary divisors: {}", join(&lat.elementary_divisors())).unwrap();
    writeln!(s, "roots: {roots}").unwrap();
    writeln!(s, "delta: {}", lat.delta()).unwrap();
    writeln!(s, "classes: {}", classes.len()).unwrap();
    for c in &classes {
        writeln!(s, "  {} norm {}", c.representative, c.delta).unwrap();
    }
    ok(s)
}

pub fn theta_block(b: &BlockArgs, qmax: i64, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    if qmax < 0 {
        return Err(usage("need --qmax >= 0"));
    }
    let spec = block_spec(b)?;
    let phi = orthoforms::theta_block(&spec, prec_for_qmax(qmax))?;
    let class = match phi.classify() {
        Err(Error::InsufficientPrecision { needed, .. }) => {
            let prec = (&needed * &orthoforms::Q::from(24)).to_i64().expect("small precision");
            orthoforms::theta_block(&spec, prec)?.classify()?
        }
        r => r?,
    };
    let index = spec.index()?;
    let q_order = spec.q_order()?;
    if f == Format::Json {
        return ok(to_json(&json!({
            "weight": phi.weight,
            "index": index,
            "q_order": q_order,
            "class": class,
            "expansion": phi.export(),
        })));
    }
    let mut s = String::new();
    writeln!(s, "lattice: {}", phi.lattice().spec).unwrap();
    writeln!(s, "weight: {}", phi.weight).unwrap();
    writeln!(
        s,
        "index: {}",
        index
            .map(|i| i.to_string())
            .unwrap_or_else(|| "not a multiple of the form".into())
    )
    .unwrap();
    writeln!(s, "q-order: {q_order}").unwrap();
    writeln!(s, "class: {class}").unwrap();
    writeln!(s, "{phi}").unwrap();
    ok(s)
}

pub fn hecke(b: &BlockArgs, m: i64, qmax: i64, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    if m < 1 || qmax < 0 {
        return Err(usage("need --m >= 1 and --qmax >= 0"));
    }
    let spec = block_spec(b)?;
    let prec = 24 * m * (qmax + 1);
    let phi = orthoforms::theta_block(&spec, prec)?
        .hecke(m)?
        .truncate(prec_for_qmax(qmax));
    if f == Format::Json {
        return ok(to_json(
            &json!({ "m": m, "index": phi.index(), "expansion": phi.export() }),
        ));
    }
    let mut s = String::new();
    writeln!(
        s,
        "T({m}) on {}: weight {}, index {}",
        phi.lattice().spec,
        phi.weight,
        phi.index().map(|i| i.to_string()).unwrap_or_default()
    )
    .unwrap();
    writeln!(s, "{phi}").unwrap();
    ok(s)
}

fn series_output(name: &str, fj: &FourierJacobiSeries, f: Format) -> String {
    if f == Format::Json {
        let terms: Vec<Value> = fj
            .terms
            .iter()
            .map(|(m, t)| json!({ "xi": m, "expansion": t.export() }))
            .collect();
        return to_json(&json!({
            "lift": name,
            "lattice": fj.lattice.spec.to_string(),
            "weight": fj.weight,
            "xi_prec": fj.xi_prec,
            "q_prec": orthoforms::Q::new(fj.q_prec, 24),
            "terms": terms,
        }));
    }
    let mut s = String::new();
    writeln!(s, "{name} on 2U+{}: weight {}", fj.lattice.spec, fj.weight).unwrap();
    for (m, t) in &fj.terms {
        writeln!(s, "xi^{m}: {t}").unwrap();
    }
    writeln!(s, "O(xi^{})", fj.xi_prec).unwrap();
    s
}

pub fn grit(b: &BlockArgs, ximax: i64, qmax: i64, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    check_box(ximax, qmax)?;
    let spec = block_spec(b)?;
    let phi = orthoforms::theta_block(&spec, prec_for_qmax(ximax * qmax))?;
    let g = orthoforms::grit(&phi, ximax, qmax)?;
    ok(series_output("additive lift", &g, f))
}

pub fn borch(b: &BlockArgs, ximax: i64, qmax: i64, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    check_box(ximax, qmax)?;
    let spec = block_spec(b)?;
    let psi = psi_from_block(&spec, borch_input_prec(ximax, qmax))?;
    let p = orthoforms::borch(&psi, ximax, qmax)?;
    ok(series_output("Borcherds product", &p, f))
}

pub fn verify_theta(b: &BlockArgs, ximax: i64, qmax: i64, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    check_box(ximax, qmax)?;
    let spec = block_spec(b)?;
    let r = verify_theta_identity(&spec, ximax, qmax)?;
    let code = if r.equal { 0 } else { 1 };
    if f == Format::Json {
        return Ok(Outcome {
            text: to_json(&r),
            code,
        });
    }
    let mut s = String::new();
    writeln!(s, "lattice: {}", r.lattice).unwrap();
    writeln!(s, "weight: {}", r.weight).unwrap();
    writeln!(s, "box: xi^m, m <= {}; q^n, n <= {}", r.ximax, r.qmax).unwrap();
    writeln!(s, "xi-order C: {}", r.xi_order).unwrap();
    writeln!(s, "sign: {}", r.sign).unwrap();
    writeln!(s, "compared: {}", r.compared).unwrap();
    writeln!(s, "mismatches: {}", r.mismatches.len()).unwrap();
    for m in r.mismatches.iter().take(20) {
        writeln!(
            s,
            "  xi^{} q^{} z[{}]: lift {} product {}",
            m.m, m.n, m.l, m.grit, m.borch
        )
        .unwrap();
    }
    writeln!(s, "verdict: {}", if r.equal { "equal" } else { "different" }).unwrap();
    Ok(Outcome { text: s, code })
}

/// The certificate is always emitted as JSON.
pub fn arrange_check(lattice: &str, allow_nonfamily: bool, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    let split = lattice.parse()?;
    let arr = if allow_nonfamily {
        build_arrangement_unchecked(&split)?
    } else {
        build_arrangement(&split)?
    };
    let cert = looijenga_check(&arr);
    let code = match cert.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 3,
    };
    let mut v = serde_json::to_value(&cert).expect("serializable");
    v["arrangement"] = serde_json::to_value(arr.export()).expect("serializable");
    Ok(Outcome {
        text: to_json(&v),
        code,
    })
}

const CSV_HEADER: [&str; 7] = [
    "lattice",
    "family",
    "eisenstein",
    "abelian",
    "jacobi",
    "jacobian_weight",
    "looijenga",
];

fn weights_csv(rows: &[TableRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.lattice.clone(),
            r.family.to_string(),
            join(&r.eisenstein),
            join(&r.abelian),
            join(&r.jacobi),
            r.jacobian_weight.to_string(),
            r.looijenga.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
}

fn weights_line(r: &TableRow) -> String {
    format!(
        "{} | {} | {} | {} | {} | {} | {}",
        r.lattice,
        r.family,
        join(&r.eisenstein),
        join(&r.abelian),
        join(&r.jacobi),
        r.jacobian_weight,
        r.looijenga
    )
}

pub fn weights(lattice: Option<&str>, all: bool, include_predicted: bool, f: Format) -> Result<Outcome, Failure> {
    let rows: Vec<TableRow> = if all {
        let mut entries = enumerate_families();
        if include_predicted {
            entries.extend(predicted_families());
        }
        entries.iter().map(table_row).collect::<Result<_, _>>()?
    } else {
        let s = lattice.ok_or_else(|| usage("give --lattice or --all"))?;
        vec![table_row(&family_entry(s)?)?]
    };
    let text = match f {
        Format::Csv => weights_csv(&rows),
        Format::Json if all => to_json(&rows),
        Format::Json => to_json(&rows[0]),
        Format::Text if all => {
            let mut s = String::from("lattice | family | eisenstein | abelian | jacobi | jacobian | looijenga\n");
            for r in &rows {
                s.push_str(&weights_line(r));
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let r = &rows[0];
            let mut s = String::new();
            writeln!(s, "lattice: {}", r.lattice).unwrap();
            writeln!(s, "family: {}", r.family).unwrap();
            writeln!(s, "eisenstein: {}", join(&r.eisenstein)).unwrap();
            writeln!(s, "abelian: {}", join(&r.abelian)).unwrap();
            writeln!(s, "jacobi: {}", join(&r.jacobi)).unwrap();
            writeln!(s, "jacobian: {}", r.jacobian_weight).unwrap();
            writeln!(s, "looijenga: {}", r.looijenga).unwrap();
            s
        }
    };
    ok(text)
}

fn algebra(a: &AlgebraArgs) -> Result<(String, BigradedAlgebra), Failure> {
    let name = match (&a.lattice, a.paramodular) {
        (Some(l), _) => l.clone(),
        (None, Some(n)) if n >= 1 => format!("A1({n})"),
        (None, Some(_)) => return Err(usage("--paramodular needs N >= 1")),
        (None, None) => return Err(usage("give --lattice or --paramodular")),
    };
    let alg = BigradedAlgebra::parse(&name)?;
    Ok((name, alg))
}

pub fn hilbert(a: &AlgebraArgs, order: usize, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    let (name, alg) = algebra(a)?;
    let dims = hilbert_series(&alg, order)?;
    if f == Format::Json {
        return ok(to_json(&json!({ "lattice": name, "order": order, "dimensions": dims })));
    }
    let mut s = format!("dim M_k for 2U+{name}, k <= {order}\n");
    for (k, d) in dims.iter().enumerate() {
        if *d != 0 {
            writeln!(s, "{k} {d}").unwrap();
        }
    }
    ok(s)
}

pub fn generators(a: &AlgebraArgs, tmax: i64, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    if tmax < 1 {
        return Err(usage("need --tmax >= 1"));
    }
    let (name, alg) = algebra(a)?;
    let g = minimal_generators(&alg, tmax)?;
    if f == Format::Json {
        return ok(to_json(&json!({
            "lattice": name,
            "weights": g.weights,
            "count": g.weights.len(),
            "tmax": g.tmax,
            "last_index": g.last_index,
            "stabilized": g.stabilized,
        })));
    }
    let mut s = String::new();
    writeln!(s, "lattice: {name}").unwrap();
    writeln!(s, "weights: {}", join(&g.weights)).unwrap();
    writeln!(s, "count: {}", g.weights.len()).unwrap();
    writeln!(s, "last index: {} of {}", g.last_index, g.tmax).unwrap();
    writeln!(s, "stabilized: {}", g.stabilized).unwrap();
    ok(s)
}

pub fn norm2(f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    let names: Vec<String> = norm2_classification().iter().map(|s| s.to_string()).collect();
    if f == Format::Json {
        return ok(to_json(&names));
    }
    let mut s = String::new();
    for n in &names {
        writeln!(s, "{n}").unwrap();
    }
    writeln!(s, "total: {}", names.len()).unwrap();
    ok(s)
}

pub fn principal_part(lattice: &str, f: Format) -> Result<Outcome, Failure> {
    no_csv(f)?;
    let entry = family_entry(lattice)?;
    let p = orthoforms::tables::principal_part(&entry)?;
    if f == Format::Json {
        return ok(to_json(&p));
    }
    let mut s = String::new();
    writeln!(s, "lattice: {}", entry.split).unwrap();
    writeln!(s, "xi-order C: {}", p.xi_order).unwrap();
    writeln!(s, "roots: {}", p.root_count).unwrap();
    writeln!(s, "jacobian weight: {}", p.k).unwrap();
    for m in &p.multiplicities {
        writeln!(
            s,
            "  {}: {} minimal vectors, coefficient {}",
            m.component, m.orbit_size, m.c
        )
        .unwrap();
    }
    ok(s)
}
