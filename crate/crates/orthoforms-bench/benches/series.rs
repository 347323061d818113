use criterion::{black_box, criterion_group, criterion_main, Criterion};
use orthoforms::arrangements::build_arrangement;
use orthoforms::lifts::{borch_input_prec, psi_from_block};
use orthoforms::tables::{hilbert_series, minimal_generators, BigradedAlgebra};
use orthoforms::{grit, looijenga_check, prec_for_qmax, theta_block, SplitSpec, ThetaBlockSpec};

fn expansions(c: &mut Criterion) {
    let d4 = ThetaBlockSpec::d_family(4).unwrap();
    let classical = ThetaBlockSpec::classical(&[4, 4, 3, 2, 1]);
    c.bench_function("theta_block D4 qmax 6", |b| {
        b.iter(|| theta_block(black_box(&d4), prec_for_qmax(6)).unwrap())
    });
    c.bench_function("theta_block classical qmax 10", |b| {
        b.iter(|| theta_block(black_box(&classical), prec_for_qmax(10)).unwrap())
    });
    let phi = theta_block(&d4, prec_for_qmax(8)).unwrap();
    c.bench_function("hecke T(2) D4", |b| b.iter(|| black_box(&phi).hecke(2).unwrap()));
}

fn lifts(c: &mut Criterion) {
    let d3 = ThetaBlockSpec::d_family(3).unwrap();
    let phi = theta_block(&d3, prec_for_qmax(9)).unwrap();
    c.bench_function("grit D3 3x3", |b| b.iter(|| grit(black_box(&phi), 3, 3).unwrap()));
    let psi = psi_from_block(&d3, borch_input_prec(3, 4)).unwrap();
    c.bench_function("borch D3 3x3", |b| {
        b.iter(|| orthoforms::borch(black_box(&psi), 3, 3).unwrap())
    });
}

fn tables(c: &mut Criterion) {
    let alg = BigradedAlgebra::parse("A2+E6").unwrap();
    c.bench_function("hilbert_series A2+E6 to 40", |b| {
        b.iter(|| hilbert_series(black_box(&alg), 40).unwrap())
    });
    let alg = BigradedAlgebra::parse("A1+A4").unwrap();
    c.bench_function("minimal_generators A1+A4", |b| {
        b.iter(|| minimal_generators(black_box(&alg), 12).unwrap())
    });
}

fn arrangements(c: &mut Criterion) {
    for s in ["0:D9", "A6:D4", "A3+A4:A1"] {
        let arr = build_arrangement(&s.parse::<SplitSpec>().unwrap()).unwrap();
        c.bench_function(&format!("looijenga_check {s}"), |b| {
            b.iter(|| looijenga_check(black_box(&arr)))
        });
    }
}

criterion_group!(benches, expansions, lifts, tables, arrangements);
criterion_main!(benches);
