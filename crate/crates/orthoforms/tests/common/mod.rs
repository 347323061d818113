#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use orthoforms::jacobi::{JacobiExpansion, ThetaBlockSpec};
use orthoforms::laurent::{mono_scale, Mono};
use orthoforms::lifts::FourierJacobiSeries;
use orthoforms::{Lattice, Q};

/// `m^{k-1} Σ_{ad=m} d^{-k} Σ_{b mod d} φ((aτ+b)/d, a𝔷)`, expanded term by term.
pub fn hecke_double_coset(phi: &JacobiExpansion, m: i64) -> BTreeMap<(i64, Mono), Q> {
    let k = phi.integral_weight().unwrap();
    let mut out: BTreeMap<(i64, Mono), Q> = BTreeMap::new();
    for a in (1..=m).filter(|a| m % a == 0) {
        let d = m / a;
        let w = Q::from(m).pow((k - 1) as i32) * Q::from(d).pow(-(k as i32)) * Q::from(d);
        for (e, p) in phi.orders() {
            let n = e / 24;
            if n % d != 0 {
                continue;
            }
            for (l, c) in p.iter() {
                let key = (24 * n * a / d, mono_scale(l, a as i32));
                *out.entry(key).or_insert_with(Q::zero) += &w * c;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Number of disagreements between `φ|T(m)` and the double-coset sum.
pub fn hecke_oracle_failures(phi: &JacobiExpansion, m: i64) -> usize {
    let fast = phi.hecke(m).unwrap();
    let oracle = hecke_double_coset(phi, m);
    let prec = fast.prec();
    let mut bad = 0;
    let mut seen: usize = 0;
    for ((e, l), c) in &oracle {
        if *e < prec {
            seen += 1;
            if &fast.coeff(*e, l) != c {
                bad += 1;
            }
        }
    }
    bad + seen.abs_diff(fast.term_count())
}

/// `η¹² ϑ(⟨v₁,𝔷⟩)² ϑ(⟨v₂,𝔷⟩)²` on `D2`, with `v₁, v₂` the halves of the two roots.
pub fn d2_prime_block() -> ThetaBlockSpec {
    let lat = Arc::new(Lattice::parse("D2").unwrap());
    let v1 = lat.from_pairings(&[Q::zero(), Q::one()]);
    let v2 = lat.from_pairings(&[Q::one(), Q::zero()]);
    ThetaBlockSpec::Lattice {
        lattice: lat,
        vectors: vec![v1.clone(), v1, v2.clone(), v2],
    }
}

/// Whether two series agree on their common truncation.
pub fn fj_equal(a: &FourierJacobiSeries, b: &FourierJacobiSeries) -> bool {
    let xi = a.xi_prec.min(b.xi_prec);
    let qp = a.q_prec.min(b.q_prec);
    (0..xi).all(|m| {
        let fa = a.term(m).map(|t| t.truncate(qp).sorted_terms()).unwrap_or_default();
        let fb = b.term(m).map(|t| t.truncate(qp).sorted_terms()).unwrap_or_default();
        fa == fb
    })
}

/// One row of the appendix fixture: `L0:L1|family|abelian|jacobi|wtJ`.
pub struct AppendixRow {
    pub lattice: String,
    pub family: String,
    pub abelian: Vec<i64>,
    pub jacobi: Vec<i64>,
    pub jacobian_weight: i64,
}

fn ints(s: &str) -> Vec<i64> {
    s.split(',')
        .filter(|x| !x.is_empty())
        .map(|x| x.trim().parse().unwrap())
        .collect()
}

pub fn appendix_rows() -> Vec<AppendixRow> {
    include_str!("../data/appendix.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('|').collect();
            AppendixRow {
                lattice: f[0].to_string(),
                family: f[1].to_string(),
                abelian: ints(f[2]),
                jacobi: ints(f[3]),
                jacobian_weight: f[4].parse().unwrap(),
            }
        })
        .collect()
}

/// One item of the Hilbert fixture: `name|generators|numerator|denominator`.
pub struct HilbertItem {
    pub name: String,
    pub generators: Vec<i64>,
    pub numerator: Vec<(i64, i64)>,
    pub denominator: Vec<usize>,
}

pub fn hilbert_items() -> Vec<HilbertItem> {
    include_str!("../data/hilbert.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('|').collect();
            let numerator = f[2]
                .split(',')
                .map(|t| {
                    let (e, c) = t.split_once(':').unwrap();
                    (e.parse().unwrap(), c.parse().unwrap())
                })
                .collect();
            HilbertItem {
                name: f[0].to_string(),
                generators: ints(f[1]),
                numerator,
                denominator: ints(f[3]).into_iter().map(|x| x as usize).collect(),
            }
        })
        .collect()
}
