//! Heegner-divisor arrangements on `2U ⊕ L` and the bucket criterion for
//! the Looijenga condition.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{CosetClass, DualVector, Family, Lattice, SplitSpec};
use crate::rational::Q;
use crate::tables::family_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DivisorTag {
    L0Part,
    L1Part,
    Custom,
}

/// `H(a, γ)`: the orbit of hyperplanes orthogonal to vectors of
/// half-norm `a` in the class `γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeegnerDivisor {
    pub a: Q,
    pub gamma: CosetClass,
    pub tag: DivisorTag,
    /// `H` (primitive vectors) rather than `Ĥ`.
    pub primitive: bool,
}

impl HeegnerDivisor {
    /// Checks `a - ⟨v,v⟩/2 ∈ Z` for the class representative.
    pub fn new(a: Q, gamma: CosetClass, tag: DivisorTag, primitive: bool) -> Result<HeegnerDivisor> {
        if !a.is_positive() {
            return Err(Error::InvalidInput(format!(
                "Heegner discriminant {a} must be positive"
            )));
        }
        if !(&a - &(&gamma.delta / &Q::from(2))).is_integer() {
            return Err(Error::InvalidInput(format!(
                "H({a}, {}) is empty",
                gamma.representative
            )));
        }
        Ok(HeegnerDivisor {
            a,
            gamma,
            tag,
            primitive,
        })
    }
}

impl fmt::Display for HeegnerDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({}, {})", self.a, self.gamma.representative)
    }
}

/// `𝓗_L = 𝓗_{L,0} ∪ 𝓗_{L,1}`, one divisor per `±γ` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arrangement {
    pub split: SplitSpec,
    #[serde(skip)]
    pub lattice: Lattice,
    pub divisors: Vec<HeegnerDivisor>,
    /// `l = rank(L) + 2`.
    pub l: usize,
}

fn neg_key(key: &[Q]) -> Vec<Q> {
    key.iter()
        .map(|x| if x.is_zero() { Q::zero() } else { Q::one() - x })
        .collect()
}

/// Picks the class with the smaller key among `γ` and `-γ`.
fn canonical<'a>(classes: &'a [CosetClass], c: &'a CosetClass) -> &'a CosetClass {
    let nk = neg_key(&c.key);
    if nk < c.key {
        classes
            .iter()
            .find(|x| x.key == nk)
            .expect("classes closed under negation")
    } else {
        c
    }
}

impl Arrangement {
    pub fn h0(&self) -> impl Iterator<Item = &HeegnerDivisor> {
        self.divisors.iter().filter(|d| d.tag == DivisorTag::L0Part)
    }

    pub fn h1(&self) -> impl Iterator<Item = &HeegnerDivisor> {
        self.divisors.iter().filter(|d| d.tag == DivisorTag::L1Part)
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    /// The arrangement with every `γ` replaced by `-γ`, canonicalized.
    pub fn negated(&self) -> Arrangement {
        let classes = self.lattice.discriminant_classes();
        let divisors = self
            .divisors
            .iter()
            .map(|d| {
                let nk = neg_key(&d.gamma.key);
                let neg = classes
                    .iter()
                    .find(|x| x.key == nk)
                    .expect("classes closed under negation");
                HeegnerDivisor {
                    gamma: canonical(&classes, neg).clone(),
                    ..d.clone()
                }
            })
            .collect();
        Arrangement {
            divisors,
            ..self.clone()
        }
    }

    pub fn export(&self) -> ArrangementExport {
        let ex = |d: &HeegnerDivisor| DivisorExport {
            a: d.a.clone(),
            class: d.gamma.representative.to_string(),
            norm: d.gamma.delta.clone(),
        };
        ArrangementExport {
            h0: self.h0().map(ex).collect(),
            h1: self.h1().map(ex).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorExport {
    pub a: Q,
    /// Minimal-norm representative of the class.
    pub class: String,
    pub norm: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrangementExport {
    pub h0: Vec<DivisorExport>,
    pub h1: Vec<DivisorExport>,
}

/// Builds `𝓗_L` for a family lattice `L0 ⊕ L1`.
pub fn build_arrangement(split: &SplitSpec) -> Result<Arrangement> {
    if family_of(split).is_none() {
        return Err(Error::FamilyViolation {
            lattice: split.to_string(),
            reason: "not in the A, AD, AE or predicted families".into(),
        });
    }
    build_arrangement_unchecked(split)
}

/// Builds `𝓗_L` for any split whose `L0` is a sum of `A`-type components.
pub fn build_arrangement_unchecked(split: &SplitSpec) -> Result<Arrangement> {
    if split
        .l0
        .components
        .iter()
        .any(|c| c.family != Family::A || c.rescale != 1)
    {
        return Err(Error::FamilyViolation {
            lattice: split.to_string(),
            reason: "L0 must be a sum of A_m".into(),
        });
    }
    let lattice = Lattice::build(&split.whole())?;
    let classes = lattice.discriminant_classes();
    let mut divisors = Vec::new();
    for (j, c) in split.l0.components.iter().enumerate() {
        let lo = lattice.offsets[j];
        let hi = lo + c.rank;
        let min_norm = Q::new(c.rank as i64, c.rank as i64 + 1);
        let gamma = classes
            .iter()
            .find(|g| {
                g.delta == min_norm
                    && g.key
                        .iter()
                        .enumerate()
                        .all(|(i, x)| (lo..hi).contains(&i) || x.is_zero())
            })
            .expect("A_m has a class of norm m/(m+1)");
        let gamma = canonical(&classes, gamma).clone();
        divisors.push(HeegnerDivisor::new(
            &min_norm / &Q::from(2),
            gamma,
            DivisorTag::L0Part,
            true,
        )?);
    }
    let two = Q::from(2);
    for g in &classes {
        if g.delta > two && canonical(&classes, g).key == g.key {
            divisors.push(HeegnerDivisor::new(
                &g.delta / &two - Q::one(),
                g.clone(),
                DivisorTag::L1Part,
                true,
            )?);
        }
    }
    let l = lattice.rank() + 2;
    Ok(Arrangement {
        split: split.clone(),
        lattice,
        divisors,
        l,
    })
}

/// Outcome of intersecting `H(a, ·)` with a hyperplane of `H(1/4, ·)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Restriction {
    Empty,
    /// The non-primitive divisor of discriminant `1 - 1/(4a)`.
    Divisor(Q),
}

/// `1 - 1/(4a)` for `1/4 < a <= 1/2`; `Empty` for `a <= 1/4`.
pub fn restrict_norm(a: &Q) -> Result<Restriction> {
    if !a.is_positive() || a > &Q::new(1, 2) {
        return Err(Error::InvalidInput(format!(
            "restrict_norm needs 0 < a <= 1/2, got {a}"
        )));
    }
    if a <= &Q::new(1, 4) {
        return Ok(Restriction::Empty);
    }
    Ok(Restriction::Divisor(Q::one() - (Q::from(4) * a).recip()))
}

/// `a_0 = 0`, `a_k = 1/(4 - 4a_{k-1})`.
pub fn a_sequence(k: usize) -> Q {
    let mut a = Q::zero();
    for _ in 0..k {
        a = (Q::from(4) - Q::from(4) * &a).recip();
    }
    a
}

/// Least `k >= 1` with `a <= a_k`, for `0 < a < 1/2`.
pub fn bucket(a: &Q) -> Result<usize> {
    if !a.is_positive() || a >= &Q::new(1, 2) {
        return Err(Error::InvalidInput(format!("bucket needs 0 < a < 1/2, got {a}")));
    }
    let mut k = 1;
    let mut ak = Q::new(1, 4);
    while a > &ak {
        k += 1;
        ak = (Q::from(4) - Q::from(4) * &ak).recip();
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bucket {
    pub k: usize,
    pub a_k: Q,
    pub count: usize,
}

/// Certificate for the Looijenga condition.
///
/// Hyperplanes `v_1^⊥, …, v_t^⊥` meet in dimension `m` iff the `v_i` span a
/// positive-definite lattice of rank `l - m`. Each `v_i` has norm `2a_i` and
/// `⟨v_i, v_j⟩ ≡ ⟨γ_i, γ_j⟩ (mod 1)`, so a search over Gram matrices of that
/// shape bounds the codimension of every nonempty intersection.
/// `weighted_sum` is the coarser bound `Σ k·b_k` from the `a_k` buckets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LooijengaCertificate {
    pub lattice: String,
    pub scope: CheckScope,
    pub buckets: Vec<Bucket>,
    pub weighted_sum: i64,
    /// Largest admissible positive-definite Gram matrix, capped at `bound`.
    pub max_codimension: i64,
    pub bound: i64,
    pub margin: i64,
    /// Divisors with `a >= 1/2`, outside the buckets.
    pub unbucketed: Vec<Q>,
    /// Search nodes visited.
    pub nodes: u64,
    pub verdict: Verdict,
}

/// Which divisors enter the check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckScope {
    /// Every divisor of the arrangement.
    All,
    /// Only `𝓗_{L,1}`. For family lattices an intersection involving a
    /// hyperplane of `𝓗_{L,0}` is the domain of a smaller family lattice,
    /// handled by induction on the rank.
    L1Part,
}

/// Node budget of the Gram search before giving up with `Inconclusive`.
pub const GRAM_SEARCH_BUDGET: u64 = 20_000_000;

fn frac(x: &Q) -> Q {
    x - Q::from_bigints(x.floor(), 1.into())
}

/// Depth-first search for positive-definite Gram matrices, built one row at
/// a time through an `LDLᵀ` factorization.
struct GramSearch {
    norms: Vec<Q>,
    residues: Vec<Vec<Q>>,
    cap: usize,
    budget: u64,
    nodes: u64,
    best: usize,
    chosen: Vec<usize>,
    l_rows: Vec<Vec<Q>>,
    pivots: Vec<Q>,
}

impl GramSearch {
    fn exhausted(&self) -> bool {
        self.best >= self.cap || self.nodes >= self.budget
    }

    fn extend(&mut self, first: usize) {
        let depth = self.chosen.len();
        self.best = self.best.max(depth);
        if self.exhausted() {
            return;
        }
        for d in first..self.norms.len() {
            let mut row = Vec::with_capacity(depth);
            self.row(d, &mut row, self.norms[d].clone());
            if self.exhausted() {
                return;
            }
        }
    }

    /// Chooses `⟨v_new, v_j⟩` for `j = row.len()`, tracking the residual norm.
    fn row(&mut self, d: usize, row: &mut Vec<Q>, residual: Q) {
        self.nodes += 1;
        if self.exhausted() {
            return;
        }
        let j = row.len();
        if j == self.chosen.len() {
            self.chosen.push(d);
            self.l_rows.push(row.clone());
            self.pivots.push(residual);
            self.extend(d);
            self.chosen.pop();
            self.l_rows.pop();
            self.pivots.pop();
            return;
        }
        let e = self.chosen[j];
        let limit = &self.norms[d] * &self.norms[e];
        let reach = Q::from_bigints(limit.ceil(), 1.into()).to_i64().expect("small norms") + 1;
        for n in -reach..=reach {
            let g = &self.residues[d][e] + Q::from(n);
            if &g * &g >= limit {
                continue;
            }
            let mut y = g;
            for i in 0..j {
                y -= &row[i] * &self.l_rows[j][i] * &self.pivots[i];
            }
            let lj = &y / &self.pivots[j];
            let rest = &residual - &lj * &y;
            if !rest.is_positive() {
                continue;
            }
            row.push(lj);
            self.row(d, row, rest);
            row.pop();
            if self.exhausted() {
                return;
            }
        }
    }
}

/// Largest admissible Gram matrix over `divisors`, capped at `cap`, with
/// the number of nodes visited. `None` when the budget runs out first.
pub fn max_codimension(
    lattice: &Lattice,
    divisors: &[&HeegnerDivisor],
    cap: usize,
    budget: u64,
) -> (Option<usize>, u64) {
    let norms: Vec<Q> = divisors.iter().map(|d| Q::from(2) * &d.a).collect();
    let residues = divisors
        .iter()
        .map(|x| {
            divisors
                .iter()
                .map(|y| frac(&lattice.inner(&x.gamma.representative.coords, &y.gamma.representative.coords)))
                .collect()
        })
        .collect();
    let mut s = GramSearch {
        norms,
        residues,
        cap,
        budget,
        nodes: 0,
        best: 0,
        chosen: Vec::new(),
        l_rows: Vec::new(),
        pivots: Vec::new(),
    };
    s.extend(0);
    let done = s.best >= cap || s.nodes < budget;
    (done.then_some(s.best.min(cap)), s.nodes)
}

/// Checks the Looijenga condition, restricted to `𝓗_{L,1}` when `L` is a
/// family lattice.
///
/// `Pass` when no intersection can have dimension below 3, `Fail` when an
/// admissible Gram matrix of rank `l - 2` exists, `Inconclusive` when the
/// search budget runs out.
pub fn looijenga_check(arr: &Arrangement) -> LooijengaCertificate {
    let scope = if family_of(&arr.split).is_some() {
        CheckScope::L1Part
    } else {
        CheckScope::All
    };
    looijenga_check_scoped(arr, scope)
}

/// [`looijenga_check`] with an explicit scope.
pub fn looijenga_check_scoped(arr: &Arrangement, scope: CheckScope) -> LooijengaCertificate {
    let half = Q::new(1, 2);
    let mut counts: Vec<usize> = Vec::new();
    let mut unbucketed = Vec::new();
    let divisors: Vec<&HeegnerDivisor> = arr
        .divisors
        .iter()
        .filter(|d| scope == CheckScope::All || d.tag != DivisorTag::L0Part)
        .collect();
    for d in &divisors {
        if d.a >= half {
            unbucketed.push(d.a.clone());
            continue;
        }
        let k = bucket(&d.a).expect("0 < a < 1/2");
        if counts.len() < k {
            counts.resize(k, 0);
        }
        counts[k - 1] += 1;
    }
    let buckets: Vec<Bucket> = counts
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0)
        .map(|(i, c)| Bucket {
            k: i + 1,
            a_k: a_sequence(i + 1),
            count: *c,
        })
        .collect();
    let weighted_sum = buckets.iter().map(|b| (b.k * b.count) as i64).sum();
    let bound = arr.l as i64 - 2;
    let (found, nodes) = if unbucketed.is_empty() && weighted_sum < bound {
        (Some(weighted_sum as usize), 0)
    } else {
        max_codimension(&arr.lattice, &divisors, bound as usize, GRAM_SEARCH_BUDGET)
    };
    let (max_codimension, verdict) = match found {
        Some(c) if (c as i64) < bound => (c as i64, Verdict::Pass),
        Some(c) => (c as i64, Verdict::Fail),
        None => (bound, Verdict::Inconclusive),
    };
    LooijengaCertificate {
        lattice: arr.split.to_string(),
        scope,
        buckets,
        weighted_sum,
        max_codimension,
        bound,
        margin: bound - max_codimension,
        unbucketed,
        nodes,
        verdict,
    }
}

/// `(δ_L, δ_L < 3)`.
pub fn delta_bound_check(lattice: &Lattice) -> (Q, bool) {
    let d = lattice.delta();
    let ok = d < Q::from(3);
    (d, ok)
}

/// The class of a dual vector, looked up among the discriminant classes.
pub fn class_of(lattice: &Lattice, v: &DualVector) -> Option<CosetClass> {
    let key = lattice.class_key(v);
    lattice.discriminant_classes().into_iter().find(|c| c.key == key)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(s: &str) -> SplitSpec {
        s.parse().unwrap()
    }

    #[test]
    fn d9_arrangement() {
        let arr = build_arrangement(&split("0:D9")).unwrap();
        assert_eq!(arr.h0().count(), 0);
        let h1: Vec<_> = arr.h1().collect();
        assert_eq!(h1.len(), 1);
        assert_eq!(h1[0].a, Q::new(1, 8));
        assert_eq!(h1[0].gamma.delta, Q::new(9, 4));
        let cert = looijenga_check(&arr);
        assert_eq!((cert.weighted_sum, cert.bound, cert.margin), (1, 9, 8));
        assert_eq!(cert.verdict, Verdict::Pass);
    }

    #[test]
    fn a2_a1_arrangement() {
        let arr = build_arrangement(&split("A2:A1")).unwrap();
        let h0: Vec<_> = arr.h0().collect();
        assert_eq!(h0.len(), 1);
        assert_eq!(h0[0].a, Q::new(1, 3));
        assert_eq!(arr.h1().count(), 0);
        assert_eq!(arr.lattice.delta(), Q::new(7, 6));
    }

    #[test]
    fn irreducible_norm2_is_empty() {
        for s in ["0:A7", "0:D8", "0:E6", "0:E7", "0:D4"] {
            assert!(build_arrangement(&split(s)).unwrap().is_empty(), "{s}");
        }
    }

    #[test]
    fn sequence_and_restriction() {
        let expected = [
            Q::zero(),
            Q::new(1, 4),
            Q::new(1, 3),
            Q::new(3, 8),
            Q::new(2, 5),
            Q::new(5, 12),
        ];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(&a_sequence(k), e);
        }
        for k in 2..8 {
            assert_eq!(
                restrict_norm(&a_sequence(k)).unwrap(),
                Restriction::Divisor(a_sequence(k - 1))
            );
        }
        assert_eq!(restrict_norm(&Q::new(1, 5)).unwrap(), Restriction::Empty);
        assert_eq!(
            restrict_norm(&Q::new(1, 3)).unwrap(),
            Restriction::Divisor(Q::new(1, 4))
        );
        assert_eq!(bucket(&Q::new(1, 8)).unwrap(), 1);
        assert_eq!(bucket(&Q::new(3, 8)).unwrap(), 3);
        assert_eq!(bucket(&Q::new(9, 20)).unwrap(), 9);
    }

    #[test]
    fn d_series_codimension() {
        for (s, w) in [("0:D9", 1), ("0:D10", 2), ("0:D11", 3)] {
            assert_eq!(
                looijenga_check(&build_arrangement(&split(s)).unwrap()).weighted_sum,
                w,
                "{s}"
            );
        }
    }

    #[test]
    fn koecher_violation() {
        assert!(build_arrangement(&split("9A1:A1")).is_err());
        let arr = build_arrangement_unchecked(&split("9A1:A1")).unwrap();
        assert_eq!(looijenga_check(&arr).verdict, Verdict::Fail);
    }

    #[test]
    fn gram_search_refines_buckets() {
        for e in crate::tables::enumerate_families() {
            let arr = build_arrangement(&e.split).unwrap();
            let cert = looijenga_check(&arr);
            assert_eq!(cert.scope, CheckScope::L1Part);
            let h1: Vec<_> = arr.h1().collect();
            let (m, _) = max_codimension(&arr.lattice, &h1, 64, GRAM_SEARCH_BUDGET);
            let m = m.unwrap() as i64;
            assert!(m <= cert.weighted_sum && m < cert.bound, "{}", e.split);
        }
    }

    #[test]
    fn small_divisors_are_pairwise_disjoint() {
        let arr = build_arrangement(&split("0:D9")).unwrap();
        let h1: Vec<_> = arr.h1().collect();
        assert_eq!(max_codimension(&arr.lattice, &h1, 64, GRAM_SEARCH_BUDGET).0, Some(1));
        let arr = build_arrangement(&split("4A1:A1")).unwrap();
        let all: Vec<_> = arr.divisors.iter().collect();
        assert_eq!(max_codimension(&arr.lattice, &all, 64, GRAM_SEARCH_BUDGET).0, Some(4));
        let cert = looijenga_check_scoped(&arr, CheckScope::All);
        assert_eq!(
            (cert.weighted_sum, cert.max_codimension, cert.verdict),
            (5, 4, Verdict::Pass)
        );
    }

    #[test]
    fn delta_bounds() {
        for (s, d) in [
            ("D11", Q::new(11, 4)),
            ("A1+A6", Q::new(1, 2) + Q::new(12, 7)),
            ("A8", Q::new(20, 9)),
        ] {
            let (got, ok) = delta_bound_check(&Lattice::parse(s).unwrap());
            assert_eq!(got, d);
            assert!(ok);
        }
    }

    #[test]
    fn negation_stable() {
        for s in ["A1+A2:A4", "0:D11", "A1+A2:D5", "2A1:A6"] {
            let arr = build_arrangement(&split(s)).unwrap();
            assert_eq!(arr.negated(), arr);
        }
    }
}
