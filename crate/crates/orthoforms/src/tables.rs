//! Lattice families, generator-weight tables, Jacobian weights, Hilbert
//! series and minimal generators of algebras of modular forms on `2U ⊕ L`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arrangements::{build_arrangement, looijenga_check, ArrangementExport, Verdict};
use crate::error::{Error, Result};
use crate::lattice::{table1_bigradings, Bigrading, Component, Family, Lattice, RootLatticeSpec, SplitSpec};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FamilyTag {
    #[serde(rename = "A")]
    AType,
    #[serde(rename = "AD")]
    AdType,
    #[serde(rename = "AE")]
    AeType,
    #[serde(rename = "predicted")]
    Predicted,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::AType => "A",
            FamilyTag::AdType => "AD",
            FamilyTag::AeType => "AE",
            FamilyTag::Predicted => "predicted",
        })
    }
}

/// A lattice `L0 ⊕ L1` with `L0` a sum of `A_{m_j}` and `L1` irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyEntry {
    pub split: SplitSpec,
    pub family: FamilyTag,
}

impl FamilyEntry {
    pub fn l0_ranks(&self) -> Vec<usize> {
        self.split.l0.components.iter().map(|c| c.rank).collect()
    }

    pub fn l1(&self) -> Component {
        self.split.l1.components[0]
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::build(&self.split.whole())
    }

    /// `K = 12 - Σ (m_j + 1)`.
    pub fn k_shift(&self) -> i64 {
        12 - self.l0_ranks().iter().map(|m| *m as i64 + 1).sum::<i64>()
    }
}

const AE_L0: [(&str, usize); 5] = [("0", 6), ("A1", 6), ("A2", 6), ("0", 7), ("A1", 7)];

const PREDICTED_L0: [(&str, usize); 17] = [
    ("2A1", 6),
    ("3A1", 6),
    ("A1+A2", 6),
    ("A1+A3", 6),
    ("2A2", 6),
    ("A3", 6),
    ("A4", 6),
    ("A5", 6),
    ("2A1", 7),
    ("3A1", 7),
    ("A1+A2", 7),
    ("A1+A3", 7),
    ("A2", 7),
    ("2A2", 7),
    ("A3", 7),
    ("A4", 7),
    ("A5", 7),
];

/// Multisets of `A`-ranks (non-decreasing) with `Σ (m_j + 1) <= budget`.
fn a_multisets(budget: i64) -> Vec<Vec<usize>> {
    fn rec(min: usize, budget: i64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        let mut m = min;
        while (m as i64 + 1) <= budget {
            cur.push(m);
            rec(m, budget - m as i64 - 1, cur, out);
            cur.pop();
            m += 1;
        }
    }
    let mut out = Vec::new();
    rec(1, budget, &mut Vec::new(), &mut out);
    out.sort_by_key(|v| (v.iter().map(|m| m + 1).sum::<usize>(), v.clone()));
    out
}

fn a_spec(ranks: &[usize]) -> RootLatticeSpec {
    RootLatticeSpec::new(ranks.iter().map(|&m| Component::a(m)).collect())
}

fn entry(l0: RootLatticeSpec, l1: Component, family: FamilyTag) -> FamilyEntry {
    FamilyEntry {
        split: SplitSpec {
            l0,
            l1: RootLatticeSpec::new(vec![l1]),
        },
        family,
    }
}

/// The 147 lattices of the `A`, `AD` and `AE` families, ordered by `L1`.
pub fn enumerate_families() -> Vec<FamilyEntry> {
    let mut out = Vec::new();
    for m in 1..=10usize {
        for l0 in a_multisets(11 - (m as i64 + 1)) {
            out.push(entry(a_spec(&l0), Component::a(m), FamilyTag::AType));
        }
    }
    for m in 4..=11usize {
        for l0 in a_multisets(11 - m as i64) {
            out.push(entry(a_spec(&l0), Component::d(m), FamilyTag::AdType));
        }
    }
    for (l0, n) in AE_L0 {
        out.push(entry(
            l0.parse().expect("static spec"),
            Component::e(n),
            FamilyTag::AeType,
        ));
    }
    out
}

/// The 17 lattices with a predicted free algebra.
pub fn predicted_families() -> Vec<FamilyEntry> {
    PREDICTED_L0
        .iter()
        .map(|(l0, n)| entry(l0.parse().expect("static spec"), Component::e(*n), FamilyTag::Predicted))
        .collect()
}

/// Family of a split, with `L0` compared as a multiset.
pub fn family_of(split: &SplitSpec) -> Option<FamilyTag> {
    if split.l1.components.len() != 1 {
        return None;
    }
    let l1 = split.l1.components[0];
    if l1.rescale != 1
        || split
            .l0
            .components
            .iter()
            .any(|c| c.family != Family::A || c.rescale != 1)
    {
        return None;
    }
    let sum: i64 = split.l0.components.iter().map(|c| c.rank as i64 + 1).sum();
    match l1.family {
        Family::A if l1.rank as i64 + 1 + sum <= 11 => Some(FamilyTag::AType),
        Family::D if l1.rank >= 4 && l1.rank as i64 + sum <= 11 => Some(FamilyTag::AdType),
        Family::E => {
            let l0 = split.l0.sorted();
            let hit = |list: &[(&str, usize)]| {
                list.iter().any(|(s, n)| {
                    *n == l1.rank && s.parse::<RootLatticeSpec>().map(|x| x.sorted() == l0).unwrap_or(false)
                })
            };
            if hit(&AE_L0) {
                Some(FamilyTag::AeType)
            } else if hit(&PREDICTED_L0) {
                Some(FamilyTag::Predicted)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Parses `L0:L1` and checks it against the families.
pub fn family_entry(s: &str) -> Result<FamilyEntry> {
    let split: SplitSpec = s.parse()?;
    if split.whole().components.iter().any(|c| c.is_e8()) {
        return Err(Error::E8Rejected);
    }
    let family = family_of(&split).ok_or_else(|| Error::FamilyViolation {
        lattice: split.to_string(),
        reason: "not in the A, AD, AE or predicted families".into(),
    })?;
    Ok(FamilyEntry { split, family })
}

/// Weights of the free generators of `M_*` for one family lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorTable {
    pub eisenstein: Vec<i64>,
    pub abelian: Vec<i64>,
    pub jacobi: Vec<i64>,
    pub jacobian_weight: i64,
}

/// Eisenstein `{4, 6}`; abelian `{m+1} ∪ {m+1-i : 2 <= i <= m}` per `A_m` in
/// `L0`; Jacobi `k_i + t_i K` over the generators of `L1`.
pub fn generator_weights(entry: &FamilyEntry) -> GeneratorTable {
    let mut abelian = Vec::new();
    for m in entry.l0_ranks() {
        let m = m as i64;
        abelian.push(m + 1);
        abelian.extend((2..=m).map(|i| m + 1 - i));
    }
    abelian.sort_unstable();
    let k = entry.k_shift();
    let l1 = entry.l1();
    let mut jacobi: Vec<i64> = table1_bigradings(l1.family, l1.rank)
        .iter()
        .map(|b| b.weight + b.index * k)
        .collect();
    jacobi.sort_unstable();
    let eisenstein = vec![4, 6];
    let rank = entry.split.whole().rank() as i64;
    let jacobian_weight = rank + 2 + eisenstein.iter().chain(&abelian).chain(&jacobi).sum::<i64>();
    GeneratorTable {
        eisenstein,
        abelian,
        jacobi,
        jacobian_weight,
    }
}

/// `rank + 2 + Σ weights`, the weight of the Jacobian of a free algebra.
pub fn jacobian_weight_from_generators(rank: usize, weights: &[i64]) -> i64 {
    rank as i64 + 2 + weights.iter().sum::<i64>()
}

/// The three independently computed Jacobian weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianWeights {
    pub formula: Q,
    pub solver: Q,
    pub sum_rule: Q,
}

/// `12(h+1) - rk(L1) h / 2 - Σ (h - 1 - m_j/2)(m_j + 1)`.
pub fn jacobian_weight_formula(entry: &FamilyEntry) -> Q {
    let l1 = entry.l1();
    let h = Q::from(crate::lattice::component_invariants(l1).coxeter_number);
    let mut k = Q::from(12) * (&h + Q::one()) - Q::new(l1.rank as i64, 2) * &h;
    for m in entry.l0_ranks() {
        let m = m as i64;
        k -= (&h - Q::one() - Q::new(m, 2)) * Q::from(m + 1);
    }
    k
}

/// Multiplicity of the minimal dual vectors of one `A_m` component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentMultiplicity {
    pub component: String,
    /// Number of distinct minimal vectors of `A_m'`.
    pub orbit_size: usize,
    /// Coefficient `c` of each such vector in the `q^0`-term.
    pub c: Q,
}

/// Principal part of the input whose Borcherds product is the Jacobian.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalPart {
    /// `C = h(L1)`.
    pub xi_order: i64,
    pub root_count: i64,
    pub k: Q,
    pub multiplicities: Vec<ComponentMultiplicity>,
}

/// The scalar `λ` with `Σ_v p(v) p(v)ᵀ = λ G`, where `p(v)` are the
/// pairings of `v` with the basis.
fn second_moment(lattice: &Lattice, vectors: &[crate::lattice::DualVector]) -> Result<Q> {
    let n = lattice.rank();
    let mut s = vec![vec![Q::zero(); n]; n];
    for v in vectors {
        let p = lattice.pairings(v);
        for i in 0..n {
            for j in 0..n {
                s[i][j] += &p[i] * &p[j];
            }
        }
    }
    let lambda = &s[0][0] / &Q::from(lattice.gram[0][0]);
    for i in 0..n {
        for j in 0..n {
            if s[i][j] != &lambda * &Q::from(lattice.gram[i][j]) {
                return Err(Error::InvalidInput(
                    "vector system is not a multiple of the Gram form".into(),
                ));
            }
        }
    }
    Ok(lambda)
}

/// Solves the `q^0` balance: per `A_m` component
/// `Σ_roots ⟨r,z⟩² + c Σ_u ⟨u,z⟩² = 2C⟨z,z⟩`, then
/// `24(C + 1) = 2k + #roots + Σ #orbit·c`.
pub fn principal_part(entry: &FamilyEntry) -> Result<PrincipalPart> {
    let l1 = entry.l1();
    let l1_lat = Lattice::build(&RootLatticeSpec::new(vec![l1]))?;
    let l1_roots = l1_lat.roots();
    let c = crate::lattice::component_invariants(l1).coxeter_number;
    let two_c = Q::from(2 * c);
    if second_moment(&l1_lat, &l1_roots)? != two_c {
        return Err(Error::InvalidInput(format!(
            "root system of {l1} does not balance at C = {c}"
        )));
    }
    let mut root_count = l1_roots.len() as i64;
    let mut orbit_total = Q::zero();
    let mut multiplicities = Vec::new();
    for m in entry.l0_ranks() {
        let lat = Lattice::build(&RootLatticeSpec::new(vec![Component::a(m)]))?;
        let roots = lat.roots();
        root_count += roots.len() as i64;
        let min_norm = Q::new(m as i64, m as i64 + 1);
        let minimal: Vec<_> = lat
            .short_vectors(true, &min_norm)
            .into_iter()
            .filter(|v| lat.norm(v) == min_norm)
            .collect();
        let lr = second_moment(&lat, &roots)?;
        let lu = second_moment(&lat, &minimal)?;
        let cm = (&two_c - &lr) / &lu;
        orbit_total += Q::from(minimal.len() as i64) * &cm;
        multiplicities.push(ComponentMultiplicity {
            component: Component::a(m).to_string(),
            orbit_size: minimal.len(),
            c: cm,
        });
    }
    let k = (Q::from(24 * (c + 1)) - Q::from(root_count) - orbit_total) / Q::from(2);
    Ok(PrincipalPart {
        xi_order: c,
        root_count,
        k,
        multiplicities,
    })
}

/// `c_1 = 2(h - 2)`, `c_m = h - (m + 1)`.
pub fn multiplicity_closed_form(h: i64, m: usize) -> i64 {
    if m == 1 {
        2 * (h - 2)
    } else {
        h - (m as i64 + 1)
    }
}

/// Closed formula, linear solve and sum rule; `Disagreement` unless equal.
pub fn jacobian_weight(entry: &FamilyEntry) -> Result<JacobianWeights> {
    let formula = jacobian_weight_formula(entry);
    let solver = principal_part(entry)?.k;
    let sum_rule = Q::from(generator_weights(entry).jacobian_weight);
    if formula != solver || solver != sum_rule {
        return Err(Error::Disagreement {
            formula,
            solver,
            sum_rule,
        });
    }
    Ok(JacobianWeights {
        formula,
        solver,
        sum_rule,
    })
}

/// One row of the generator table, with its arrangement certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub lattice: String,
    pub family: FamilyTag,
    pub eisenstein: Vec<i64>,
    pub abelian: Vec<i64>,
    pub jacobi: Vec<i64>,
    pub jacobian_weight: i64,
    pub arrangement: ArrangementExport,
    pub looijenga: Verdict,
}

pub fn table_row(entry: &FamilyEntry) -> Result<TableRow> {
    let g = generator_weights(entry);
    let arr = build_arrangement(&entry.split)?;
    let cert = looijenga_check(&arr);
    Ok(TableRow {
        lattice: entry.split.to_string(),
        family: entry.family,
        eisenstein: g.eisenstein,
        abelian: g.abelian,
        jacobi: g.jacobi,
        jacobian_weight: g.jacobian_weight,
        arrangement: arr.export(),
        looijenga: cert.verdict,
    })
}

/// Generators of one tensor factor of the weak Jacobi forms, as a free
/// `M_*`-module basis of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub name: String,
    pub generators: Vec<Bigrading>,
    /// Largest allowed exponent of each generator.
    pub caps: Vec<Option<u32>>,
    /// Native index of a monomial of algebra index `t` is `scale·t`.
    pub index_scale: i64,
}

impl Factor {
    pub fn free(name: &str, generators: Vec<Bigrading>) -> Result<Factor> {
        if generators.iter().any(|g| g.index <= 0) {
            return Err(Error::InvalidInput("generator indices must be positive".into()));
        }
        let caps = vec![None; generators.len()];
        Ok(Factor {
            name: name.to_string(),
            generators,
            caps,
            index_scale: 1,
        })
    }

    /// The Weyl-invariant generators of a component.
    pub fn table1(c: Component) -> Result<Factor> {
        if c.is_e8() {
            return Err(Error::E8Rejected);
        }
        if c.rescale != 1 {
            return Factor::paramodular(c.rank, c.family, c.rescale as i64);
        }
        Factor::free(&c.to_string(), table1_bigradings(c.family, c.rank))
    }

    /// `A_1(N)`: monomials in `φ_{0,1}`, `φ_{-2,1}`, `φ_{-1,2}` of index
    /// `N t`, with `φ_{-1,2}` at most linear.
    pub fn paramodular(rank: usize, family: Family, n: i64) -> Result<Factor> {
        if family != Family::A || rank != 1 || n < 1 {
            return Err(Error::InvalidInput(
                "only A1(N) rescalings have tabulated generators".into(),
            ));
        }
        Ok(Factor {
            name: format!("A1({n})"),
            generators: vec![Bigrading::new(0, 1), Bigrading::new(-2, 1), Bigrading::new(-1, 2)],
            caps: vec![None, None, Some(1)],
            index_scale: n,
        })
    }

    /// Minimal weight-to-index ratio over the generators, in algebra units.
    fn min_slope(&self) -> Q {
        self.generators
            .iter()
            .map(|g| Q::new(g.weight * self.index_scale, g.index))
            .min()
            .unwrap_or_else(Q::zero)
    }

    /// Monomials of native index `target`: (weight, exponents).
    fn monomials(&self, target: i64) -> Vec<(i64, Vec<u32>)> {
        fn rec(f: &Factor, i: usize, left: i64, w: i64, exps: &mut Vec<u32>, out: &mut Vec<(i64, Vec<u32>)>) {
            if i == f.generators.len() {
                if left == 0 {
                    out.push((w, exps.clone()));
                }
                return;
            }
            let g = f.generators[i];
            let cap = f.caps[i].map(|c| c as i64).unwrap_or(i64::MAX);
            let mut e = 0i64;
            while e * g.index <= left && e <= cap {
                exps.push(e as u32);
                rec(f, i + 1, left - e * g.index, w + e * g.weight, exps, out);
                exps.pop();
                e += 1;
            }
        }
        let mut out = Vec::new();
        rec(self, 0, target, 0, &mut Vec::new(), &mut out);
        out
    }

    /// Coefficients of `f_t(x)` as a map weight → count.
    fn index_polynomial(&self, t: i64) -> BTreeMap<i64, i64> {
        let mut m = BTreeMap::new();
        for (w, _) in self.monomials(self.index_scale * t) {
            *m.entry(w).or_insert(0) += 1;
        }
        m
    }

    /// Per monomial of algebra index `t`: bitmask of split indices
    /// `s ∈ (0, t)` reachable by a sub-monomial, and weight.
    fn split_masks(&self, t: i64) -> BTreeMap<u64, BTreeMap<i64, i64>> {
        let n = self.index_scale;
        let mut out: BTreeMap<u64, BTreeMap<i64, i64>> = BTreeMap::new();
        for (w, exps) in self.monomials(n * t) {
            let mut reach = vec![false; (n * t + 1) as usize];
            reach[0] = true;
            for (g, &e) in self.generators.iter().zip(&exps) {
                for _ in 0..e {
                    for x in (g.index as usize..reach.len()).rev() {
                        if reach[x - g.index as usize] {
                            reach[x] = true;
                        }
                    }
                }
            }
            let mut mask = 0u64;
            for s in 1..t {
                if reach[(n * s) as usize] {
                    mask |= 1 << s;
                }
            }
            *out.entry(mask).or_default().entry(w).or_insert(0) += 1;
        }
        out
    }
}

/// The bigraded algebra of weak Jacobi forms as a tensor product of factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BigradedAlgebra {
    pub factors: Vec<Factor>,
}

impl BigradedAlgebra {
    pub fn from_spec(spec: &RootLatticeSpec) -> Result<BigradedAlgebra> {
        if spec.is_empty() {
            return Err(Error::InvalidInput("empty lattice".into()));
        }
        Ok(BigradedAlgebra {
            factors: spec
                .components
                .iter()
                .map(|c| Factor::table1(*c))
                .collect::<Result<_>>()?,
        })
    }

    pub fn parse(s: &str) -> Result<BigradedAlgebra> {
        BigradedAlgebra::from_spec(&s.parse()?)
    }

    /// Lower bound `e` with every index-`t` term at exponent `>= e·t`.
    fn growth(&self) -> Result<Q> {
        let g = Q::from(12) + self.factors.iter().map(|f| f.min_slope()).sum::<Q>();
        if !g.is_positive() {
            return Err(Error::Divergent);
        }
        Ok(g)
    }

    /// `Σ_k dim J^w_{k,L,t} x^{k+12t}` summed over `t`, without the
    /// `1/((1-x⁴)(1-x⁶))` factor, to order `n`.
    fn jacobi_numerator(&self, n: usize) -> Result<Vec<i64>> {
        let g = self.growth()?;
        let tmax = (Q::from(n as i64) / g).floor().try_into().unwrap_or(0i64);
        let mut acc = vec![0i64; n + 1];
        for t in 0..=tmax {
            let mut prod: BTreeMap<i64, i64> = BTreeMap::from([(12 * t, 1)]);
            for f in &self.factors {
                let p = f.index_polynomial(t);
                let mut next = BTreeMap::new();
                for (a, x) in &prod {
                    for (b, y) in &p {
                        *next.entry(a + b).or_insert(0) += x * y;
                    }
                }
                prod = next;
            }
            for (e, c) in prod {
                if (0..=n as i64).contains(&e) {
                    acc[e as usize] += c;
                } else if e < 0 && c != 0 {
                    return Err(Error::Divergent);
                }
            }
        }
        Ok(acc)
    }
}

/// Multiplies a series by `1/(1 - x^w)` in place.
fn divide_by_one_minus(s: &mut [i64], w: usize) {
    for i in w..s.len() {
        s[i] += s[i - w];
    }
}

/// `dim M_k` for `k <= n`.
pub fn hilbert_series(alg: &BigradedAlgebra, n: usize) -> Result<Vec<i64>> {
    let mut s = alg.jacobi_numerator(n)?;
    divide_by_one_minus(&mut s, 4);
    divide_by_one_minus(&mut s, 6);
    Ok(s)
}

/// `Σ_t dim J^w_{k-12t,L,t}`, an upper bound for `dim M_k`.
pub fn dim_bound(k: i64, alg: &BigradedAlgebra) -> Result<i64> {
    if k < 0 {
        return Ok(0);
    }
    Ok(hilbert_series(alg, k as usize)?[k as usize])
}

/// Expands `Σ a_e x^e / Π (1 - x^d)` to order `n`.
pub fn expand_rational(numerator: &[(i64, i64)], denominator: &[usize], n: usize) -> Vec<i64> {
    let mut s = vec![0i64; n + 1];
    for &(e, c) in numerator {
        if (0..=n as i64).contains(&e) {
            s[e as usize] += c;
        }
    }
    for &d in denominator {
        divide_by_one_minus(&mut s, d);
    }
    s
}

/// Minimal generator weights with the index range that was searched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalGenerators {
    pub weights: Vec<i64>,
    pub tmax: i64,
    /// Largest index contributing a generator.
    pub last_index: i64,
    /// No generators at the two largest searched indices.
    pub stabilized: bool,
}

/// `{4, 6}` plus `12t + k` for every tuple of per-factor monomials of index
/// `t` with no common split index `s ∈ (0, t)`.
pub fn minimal_generators(alg: &BigradedAlgebra, tmax: i64) -> Result<MinimalGenerators> {
    if !(1..=62).contains(&tmax) {
        return Err(Error::InvalidInput("tmax must lie in 1..=62".into()));
    }
    alg.growth()?;
    let mut weights = vec![4, 6];
    let mut last_index = 0;
    for t in 1..=tmax {
        let full: u64 = (1..t).fold(0, |m, s| m | (1 << s));
        let mut state: BTreeMap<u64, BTreeMap<i64, i64>> = BTreeMap::from([(full, BTreeMap::from([(0, 1)]))]);
        for f in &alg.factors {
            let masks = f.split_masks(t);
            let mut next: BTreeMap<u64, BTreeMap<i64, i64>> = BTreeMap::new();
            for (ma, pa) in &state {
                for (mb, pb) in &masks {
                    let slot = next.entry(ma & mb).or_default();
                    for (a, x) in pa {
                        for (b, y) in pb {
                            *slot.entry(a + b).or_insert(0) += x * y;
                        }
                    }
                }
            }
            state = next;
        }
        if let Some(p) = state.get(&0) {
            for (w, c) in p {
                weights.extend(std::iter::repeat_n(12 * t + w, *c as usize));
            }
            if !p.is_empty() {
                last_index = t;
            }
        }
    }
    weights.sort_unstable();
    Ok(MinimalGenerators {
        weights,
        tmax,
        last_index,
        stabilized: last_index < tmax - 1,
    })
}

/// `δ` of each irreducible root lattice other than `E8` with `δ <= 2`.
fn norm2_irreducibles() -> Vec<(Component, Q)> {
    let mut out = Vec::new();
    let cands = (1..=8usize)
        .map(Component::a)
        .chain((4..=9).map(Component::d))
        .chain([Component::e(6), Component::e(7)]);
    for c in cands {
        let d = Lattice::build(&RootLatticeSpec::new(vec![c]))
            .expect("irreducible")
            .delta();
        if d <= Q::from(2) {
            out.push((c, d));
        }
    }
    out
}

/// Direct sums of irreducible root lattices other than `E8` with `δ_L <= 2`.
pub fn norm2_classification() -> Vec<RootLatticeSpec> {
    fn rec(items: &[(Component, Q)], start: usize, left: &Q, cur: &mut Vec<Component>, out: &mut Vec<RootLatticeSpec>) {
        if !cur.is_empty() {
            out.push(RootLatticeSpec::new(cur.clone()));
        }
        for i in start..items.len() {
            if &items[i].1 <= left {
                cur.push(items[i].0);
                rec(items, i, &(left - &items[i].1), cur, out);
                cur.pop();
            }
        }
    }
    let items = norm2_irreducibles();
    let mut out = Vec::new();
    rec(&items, 0, &Q::from(2), &mut Vec::new(), &mut out);
    out.sort_by_key(|s| (s.components.len(), s.components.clone()));
    out
}
