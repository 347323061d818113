//! Truncated Fourier expansions of Jacobi forms of lattice index.
//!
//! A term `q^n ζ^ℓ` is keyed by `24n` and by the vector `2⟨ℓ, e_j⟩` of
//! doubled pairings with the lattice basis. Doubling keeps the half-integral
//! exponents of raw `ϑ` factors integral; `ℓ ∈ L'` exactly when every entry
//! is even.
//!
//! The index is tracked as a quadratic form: a factor `ϑ(⟨s, z⟩)` contributes
//! `p pᵀ` with `p = (⟨s, e_j⟩)_j`, and index `t` means the form equals `t·G`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{DualVector, Lattice, RootLatticeSpec};
use crate::laurent::{mono_add, mono_div, mono_from_slice, mono_neg, mono_scale, Mono, Poly, MAX_RANK, ZERO_MONO};
use crate::qseries::{eta_power, q_power, sigma, QSeries};
use crate::rational::Q;

/// Scaled truncation that keeps every `q^n` with `n <= qmax`.
pub fn prec_for_qmax(qmax: i64) -> i64 {
    24 * (qmax + 1)
}

/// A truncated expansion `Σ f(n, ℓ) q^n ζ^ℓ + O(q^{prec/24})`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiExpansion {
    pub weight: Q,
    lattice: Arc<Lattice>,
    index_form: Vec<Vec<Q>>,
    terms: BTreeMap<i64, Poly>,
    prec: i64,
}

/// Coefficient-support class of a Jacobi form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JacobiClass {
    NearlyHolomorphic,
    Weak,
    Holomorphic,
}

impl fmt::Display for JacobiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JacobiClass::NearlyHolomorphic => "nearly-holomorphic",
            JacobiClass::Weak => "weak",
            JacobiClass::Holomorphic => "holomorphic",
        })
    }
}

/// The `q^0` identities of a weight-0 index-1 form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Q0Invariants {
    /// `(1/24)Σ f(0,ℓ) - Σ_{n<0} f(n,ℓ)σ_1(-n)`.
    pub c: Q,
    /// `(1/(2 rk L)) Σ f(0,ℓ)⟨ℓ,ℓ⟩`.
    pub c_from_norms: Q,
    pub vector_system_ok: bool,
    /// `Σ f(0,ℓ) p pᵀ - 2C·G` as a matrix in basis coordinates.
    pub residual: Vec<Vec<Q>>,
}

/// JSON-friendly form of an expansion.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionExport {
    pub lattice: String,
    pub weight: Q,
    pub index: Option<Q>,
    pub half_dual: bool,
    pub prec: Q,
    pub terms: Vec<TermExport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TermExport {
    pub q: Q,
    pub zeta: String,
    pub coeff: Q,
}

fn zero_matrix(r: usize) -> Vec<Vec<Q>> {
    vec![vec![Q::zero(); r]; r]
}

fn add_matrix(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect())
        .collect()
}

fn scale_matrix(a: &[Vec<Q>], c: &Q) -> Vec<Vec<Q>> {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

fn outer(p: &[i64], mult: i64) -> Vec<Vec<Q>> {
    p.iter()
        .map(|a| p.iter().map(|b| Q::from(a * b * mult)).collect())
        .collect()
}

fn same_lattice(a: &Lattice, b: &Lattice) -> Result<()> {
    if a.gram == b.gram {
        Ok(())
    } else {
        Err(Error::LatticeMismatch(format!("{} vs {}", a.spec, b.spec)))
    }
}

impl JacobiExpansion {
    pub fn zero(lattice: Arc<Lattice>, weight: Q, index: &Q, prec: i64) -> Result<JacobiExpansion> {
        if lattice.rank() > MAX_RANK {
            return Err(Error::RankTooLarge(lattice.rank()));
        }
        let g: Vec<Vec<Q>> = lattice
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| Q::from(x)).collect())
            .collect();
        let index_form = scale_matrix(&g, index);
        Ok(JacobiExpansion {
            weight,
            lattice,
            index_form,
            terms: BTreeMap::new(),
            prec,
        })
    }

    /// Builds an expansion from `(24n, doubled pairing vector, coefficient)` terms.
    pub fn from_terms<I>(lattice: Arc<Lattice>, weight: Q, index: &Q, terms: I, prec: i64) -> Result<JacobiExpansion>
    where
        I: IntoIterator<Item = (i64, Mono, Q)>,
    {
        let mut e = JacobiExpansion::zero(lattice, weight, index, prec)?;
        for (n, m, c) in terms {
            e.add_term(n, m, c);
        }
        Ok(e)
    }

    /// An expansion independent of `z` (index 0).
    pub fn from_qseries(lattice: Arc<Lattice>, s: &QSeries, weight: Q) -> Result<JacobiExpansion> {
        JacobiExpansion::from_terms(
            lattice,
            weight,
            &Q::zero(),
            s.terms().map(|(e, c)| (e, ZERO_MONO, c.clone())),
            s.prec(),
        )
    }

    pub fn constant(lattice: Arc<Lattice>, c: Q, prec: i64) -> Result<JacobiExpansion> {
        JacobiExpansion::from_qseries(lattice, &QSeries::monomial(0, c, prec), Q::zero())
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Scaled exclusive q-truncation.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn index_form(&self) -> &[Vec<Q>] {
        &self.index_form
    }

    /// `t` when the index form is `t·G`.
    pub fn index(&self) -> Option<Q> {
        let r = self.rank();
        if r == 0 {
            return Some(Q::zero());
        }
        let t = &self.index_form[0][0] / &Q::from(self.lattice.gram[0][0]);
        for i in 0..r {
            for j in 0..r {
                if self.index_form[i][j] != &t * &Q::from(self.lattice.gram[i][j]) {
                    return None;
                }
            }
        }
        Some(t)
    }

    /// True when some exponent lies in `½L'` but not in `L'`.
    pub fn half_dual(&self) -> bool {
        self.terms
            .values()
            .any(|p| p.iter().any(|(m, _)| m.iter().any(|x| x % 2 != 0)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest scaled q-exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn q_order(&self) -> Option<Q> {
        self.valuation().map(|v| Q::new(v, 24))
    }

    pub fn orders(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.terms.iter().map(|(e, p)| (*e, p))
    }

    pub fn poly(&self, e: i64) -> Option<&Poly> {
        self.terms.get(&e)
    }

    pub fn coeff(&self, e: i64, m: &Mono) -> Q {
        self.terms.get(&e).map(|p| p.coeff(m)).unwrap_or_else(Q::zero)
    }

    pub fn term_count(&self) -> usize {
        self.terms.values().map(Poly::len).sum()
    }

    pub fn add_term(&mut self, e: i64, m: Mono, c: Q) {
        if e >= self.prec || c.is_zero() {
            return;
        }
        let p = self.terms.entry(e).or_default();
        p.add_term(m, c);
        if p.is_empty() {
            self.terms.remove(&e);
        }
    }

    fn add_poly(&mut self, e: i64, p: &Poly) {
        if e >= self.prec || p.is_empty() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        slot.add_assign(p);
        if slot.is_empty() {
            self.terms.remove(&e);
        }
    }

    /// Coordinates of an exponent in the lattice basis.
    pub fn dual_vector(&self, m: &Mono) -> DualVector {
        let r = self.rank();
        let p: Vec<Q> = (0..r).map(|j| Q::new(m[j] as i64, 2)).collect();
        self.lattice.from_pairings(&p)
    }

    /// Stored exponent of a vector of `L ⊗ Q`.
    pub fn mono_of(&self, v: &DualVector) -> Result<Mono> {
        let p = self.lattice.pairings(v);
        let mut out = Vec::with_capacity(p.len());
        for x in p {
            let y = &x * &Q::from(2);
            out.push(
                y.to_i64()
                    .filter(|_| y.is_integer())
                    .ok_or_else(|| Error::InvalidInput(format!("{v} is not in ½L'")))?,
            );
        }
        mono_from_slice(&out)
    }

    /// `⟨ℓ, ℓ⟩` for a stored exponent.
    pub fn norm(&self, m: &Mono) -> Q {
        let r = self.rank();
        let p: Vec<Q> = (0..r).map(|j| Q::new(m[j] as i64, 2)).collect();
        self.lattice.norm_of_pairings(&p)
    }

    pub fn truncate(&self, prec: i64) -> JacobiExpansion {
        let prec = prec.min(self.prec);
        let mut out = self.clone();
        out.prec = prec;
        out.terms = self.terms.range(..prec).map(|(e, p)| (*e, p.clone())).collect();
        out
    }

    pub fn scale(&self, c: &Q) -> JacobiExpansion {
        let mut out = self.clone();
        out.terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(e, p)| (*e, p.scale(c))).collect()
        };
        out
    }

    pub fn neg(&self) -> JacobiExpansion {
        self.scale(&-Q::one())
    }

    /// Sum; weights and indices must agree.
    pub fn add(&self, other: &JacobiExpansion) -> Result<JacobiExpansion> {
        same_lattice(&self.lattice, &other.lattice)?;
        if self.index_form != other.index_form {
            return Err(Error::InvalidInput("cannot add expansions of different index".into()));
        }
        if self.weight != other.weight {
            return Err(Error::InvalidInput("cannot add expansions of different weight".into()));
        }
        let mut out = self.truncate(self.prec.min(other.prec));
        for (e, p) in &other.terms {
            out.add_poly(*e, p);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &JacobiExpansion) -> Result<JacobiExpansion> {
        self.add(&other.neg())
    }

    /// Product; known up to `min(prec_a + v_b, prec_b + v_a)`.
    pub fn mul(&self, other: &JacobiExpansion) -> Result<JacobiExpansion> {
        same_lattice(&self.lattice, &other.lattice)?;
        let prec = match (self.valuation(), other.valuation()) {
            (Some(va), Some(vb)) => (self.prec + vb).min(other.prec + va),
            (Some(va), None) => other.prec + va,
            (None, Some(vb)) => self.prec + vb,
            (None, None) => self.prec.min(other.prec),
        };
        let mut out = JacobiExpansion {
            weight: &self.weight + &other.weight,
            lattice: self.lattice.clone(),
            index_form: add_matrix(&self.index_form, &other.index_form),
            terms: BTreeMap::new(),
            prec,
        };
        let mut acc: BTreeMap<i64, Poly> = BTreeMap::new();
        for (ea, pa) in &self.terms {
            for (eb, pb) in &other.terms {
                let e = ea + eb;
                if e >= prec {
                    break;
                }
                acc.entry(e).or_default().add_product(pa, pb);
            }
        }
        acc.retain(|_, p| !p.is_empty());
        out.terms = acc;
        Ok(out)
    }

    /// Exact quotient, solved order by order in `q`.
    ///
    /// At each order the remainder's lowest coefficient is divided by the
    /// divisor's lowest coefficient in the Laurent ring; a nonzero remainder
    /// of that division is an error.
    pub fn divide_exact(&self, d: &JacobiExpansion) -> Result<JacobiExpansion> {
        same_lattice(&self.lattice, &d.lattice)?;
        let vb = d.valuation().ok_or_else(|| Error::NonExactDivision {
            order: Q::zero(),
            residual: "division by zero".into(),
        })?;
        let lead = &d.terms[&vb];
        let prec = match self.valuation() {
            Some(va) => (self.prec - vb).min(d.prec - vb + (va - vb)),
            None => self.prec - vb,
        };
        let mut out = JacobiExpansion {
            weight: &self.weight - &d.weight,
            lattice: self.lattice.clone(),
            index_form: add_matrix(&self.index_form, &scale_matrix(&d.index_form, &-Q::one())),
            terms: BTreeMap::new(),
            prec,
        };
        let mut rem: BTreeMap<i64, Poly> = self.terms.range(..prec + vb).map(|(e, p)| (*e, p.clone())).collect();
        while let Some((&k, _)) = rem.iter().next() {
            let r = rem.remove(&k).unwrap();
            let e = k - vb;
            let qe = r.divide_exact(lead).map_err(|res| Error::NonExactDivision {
                order: Q::new(e, 24),
                residual: format!("{} terms left", res.len()),
            })?;
            for (eb, pb) in d.terms.range(vb + 1..) {
                let t = e + eb;
                if t >= prec + vb {
                    break;
                }
                let mut prod = Poly::new();
                prod.add_product(&qe, pb);
                let slot = rem.entry(t).or_default();
                slot.add_assign(&prod.neg());
                if slot.is_empty() {
                    rem.remove(&t);
                }
            }
            out.terms.insert(e, qe);
        }
        out.terms.retain(|_, p| !p.is_empty());
        Ok(out)
    }

    /// The integral weight, when there is one.
    pub fn integral_weight(&self) -> Result<i64> {
        if self.weight.is_integer() {
            Ok(self.weight.to_i64().unwrap())
        } else {
            Err(Error::InvalidInput(format!("weight {} is not integral", self.weight)))
        }
    }

    fn require_integral_exponents(&self) -> Result<()> {
        if self.half_dual() {
            return Err(Error::InvalidInput("exponents are not in L'".into()));
        }
        if self.terms.keys().any(|e| e % 24 != 0) {
            return Err(Error::InvalidInput("q-exponents are not integral".into()));
        }
        Ok(())
    }

    /// Scaled truncation of `φ|T₋(m)` for an input truncated at `prec`.
    pub fn hecke_prec(prec: i64, m: i64) -> i64 {
        24 * ((prec - 1).div_euclid(24 * m) + 1)
    }

    /// The index-raising Hecke operator `T₋(m)`:
    /// `f_m(n, ℓ) = Σ_{a | (n, m), ℓ/a ∈ L'} a^{k-1} f(nm/a², ℓ/a)`.
    pub fn hecke(&self, m: i64) -> Result<JacobiExpansion> {
        if m < 1 {
            return Err(Error::InvalidInput("Hecke index must be positive".into()));
        }
        let k = self.integral_weight()?;
        self.require_integral_exponents()?;
        let prec = Self::hecke_prec(self.prec, m);
        let mut out = JacobiExpansion {
            weight: self.weight.clone(),
            lattice: self.lattice.clone(),
            index_form: scale_matrix(&self.index_form, &Q::from(m)),
            terms: BTreeMap::new(),
            prec,
        };
        let divisors: Vec<i64> = (1..=m).filter(|a| m % a == 0).collect();
        for (&e, p) in &self.terms {
            let big_n = e / 24;
            for &a in &divisors {
                let num = big_n * a * a;
                if num % m != 0 {
                    continue;
                }
                let n = num / m;
                if n % a != 0 || 24 * n >= prec {
                    continue;
                }
                let w = Q::from(a).pow((k - 1) as i32);
                let shifted = p.map_monos(|x| mono_scale(x, a as i32));
                let slot = out.terms.entry(24 * n).or_default();
                slot.add_assign(&shifted.scale(&w));
            }
        }
        out.terms.retain(|_, p| !p.is_empty());
        Ok(out)
    }

    /// Certified classification by coefficient support.
    pub fn classify(&self) -> Result<JacobiClass> {
        if self.half_dual() {
            return Err(Error::InvalidInput("expansion has exponents outside L'".into()));
        }
        let t = self
            .index()
            .ok_or_else(|| Error::InvalidInput("index form is not a multiple of the Gram matrix".into()))?;
        if t.is_negative() || !t.is_integer() {
            return Err(Error::InvalidInput(format!("index {t} is not a nonnegative integer")));
        }
        let weak = self.valuation().is_none_or(|v| v >= 0);
        if t.is_zero() {
            if self.prec <= 0 {
                return Err(Error::InsufficientPrecision {
                    needed: Q::one(),
                    have: Q::new(self.prec, 24),
                });
            }
            let constant = self.terms.values().all(|p| p.iter().all(|(m, _)| *m == ZERO_MONO));
            return Ok(match (weak, constant) {
                (false, _) => JacobiClass::NearlyHolomorphic,
                (true, true) => JacobiClass::Holomorphic,
                (true, false) => JacobiClass::Weak,
            });
        }
        let tt = t.to_i64().unwrap() as u32;
        let delta = self.lattice.rescaled(tt)?.delta();
        let half = &delta / &Q::from(2);
        let bound = {
            let c = half.ceil();
            num_traits::ToPrimitive::to_i64(&c).unwrap() - 1
        };
        let needed = 24 * (bound + 1);
        if self.prec < needed {
            return Err(Error::InsufficientPrecision {
                needed: Q::new(needed, 24),
                have: Q::new(self.prec, 24),
            });
        }
        if !weak {
            return Ok(JacobiClass::NearlyHolomorphic);
        }
        for (&e, p) in self.terms.range(..needed) {
            let n = Q::new(e, 24);
            for (m, _) in p.iter() {
                if &Q::from(2) * &n * &t < self.norm(m) {
                    return Ok(JacobiClass::Weak);
                }
            }
        }
        Ok(JacobiClass::Holomorphic)
    }

    /// The identities for `q^0`-terms of weight-0 index-1 forms.
    pub fn q0_invariants(&self) -> Result<Q0Invariants> {
        if !self.weight.is_zero() || self.index() != Some(Q::one()) {
            return Err(Error::InvalidInput("q0 invariants need weight 0 and index 1".into()));
        }
        if self.prec < 24 {
            return Err(Error::InsufficientPrecision {
                needed: Q::one(),
                have: Q::new(self.prec, 24),
            });
        }
        self.require_integral_exponents()?;
        let r = self.rank();
        let mut total = Q::zero();
        let mut norm_sum = Q::zero();
        let mut form = zero_matrix(r);
        if let Some(p) = self.terms.get(&0) {
            for (m, c) in p.iter() {
                total += c;
                norm_sum += c * &self.norm(m);
                for i in 0..r {
                    for j in 0..r {
                        if m[i] != 0 && m[j] != 0 {
                            form[i][j] += c * &Q::new(m[i] as i64 * m[j] as i64, 4);
                        }
                    }
                }
            }
        }
        let mut c = &total / &Q::from(24);
        for (&e, p) in self.terms.range(..0) {
            let n = -e / 24;
            let s: Q = p.iter().map(|(_, x)| x.clone()).sum();
            c -= s * Q::from(sigma(1, n as u64));
        }
        let c_from_norms = if r == 0 {
            Q::zero()
        } else {
            &norm_sum / &Q::from(2 * r as i64)
        };
        let two_c = &c * &Q::from(2);
        let residual: Vec<Vec<Q>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| &form[i][j] - &(&two_c * &Q::from(self.lattice.gram[i][j])))
                    .collect()
            })
            .collect();
        let vector_system_ok = residual.iter().all(|row| row.iter().all(Q::is_zero));
        Ok(Q0Invariants {
            c,
            c_from_norms,
            vector_system_ok,
            residual,
        })
    }

    /// `f(n, ℓ) = (-1)^k f(n, -ℓ)`; returns a violating term if any.
    pub fn parity_witness(&self) -> Option<(i64, Mono)> {
        let k = self.weight.to_i64().filter(|_| self.weight.is_integer())?;
        let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
        for (&e, p) in &self.terms {
            for (m, c) in p.iter() {
                if p.coeff(&mono_neg(m)) != &sign * c {
                    return Some((e, *m));
                }
            }
        }
        None
    }

    /// Checks `f(n₁,ℓ₁) = f(n₂,ℓ₂)` whenever `2n₁t - ⟨ℓ₁,ℓ₁⟩ = 2n₂t - ⟨ℓ₂,ℓ₂⟩`
    /// and `ℓ₁ - ℓ₂ ∈ tL`, for all pairs visible in the truncation that are
    /// related by a single basis translate. Returns a violating pair.
    pub fn periodicity_witness(&self) -> Result<Option<((i64, Mono), (i64, Mono))>> {
        let t = self
            .index()
            .ok_or_else(|| Error::InvalidInput("index form is not a multiple of the Gram matrix".into()))?;
        if !t.is_integer() || !t.is_positive() {
            return Err(Error::InvalidInput(
                "periodicity needs a positive integral index".into(),
            ));
        }
        let ti = t.to_i64().unwrap();
        let r = self.rank();
        for (&e, p) in &self.terms {
            for (m, c) in p.iter() {
                for j in 0..r {
                    for sgn in [1i64, -1] {
                        // ℓ' = ℓ + sgn·t·e_j; stored shift is 2·t·sgn·G[j]
                        let mut shift = ZERO_MONO;
                        for (i, slot) in shift.iter_mut().enumerate().take(r) {
                            *slot = (2 * ti * sgn * self.lattice.gram[j][i]) as i32;
                        }
                        let m2 = mono_add(m, &shift);
                        // 2n't - ⟨ℓ',ℓ'⟩ = 2nt - ⟨ℓ,ℓ⟩
                        let n2 = Q::new(e, 24) + (self.norm(&m2) - self.norm(m)) / Q::from(2 * ti);
                        let e2 = &n2 * &Q::from(24);
                        let e2 = e2.to_i64().filter(|_| e2.is_integer()).expect("scaled exponent");
                        if e2 >= self.prec {
                            continue;
                        }
                        if self.coeff(e2, &m2) != *c {
                            return Ok(Some(((e, *m), (e2, m2))));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Canonical terms: by q-exponent, then by ζ-exponent coordinates.
    pub fn sorted_terms(&self) -> Vec<(i64, DualVector, Q)> {
        let mut out = Vec::with_capacity(self.term_count());
        for (&e, p) in &self.terms {
            let mut row: Vec<(DualVector, Q)> = p.iter().map(|(m, c)| (self.dual_vector(m), c.clone())).collect();
            row.sort_by(|a, b| a.0.cmp(&b.0));
            out.extend(row.into_iter().map(|(v, c)| (e, v, c)));
        }
        out
    }

    pub fn export(&self) -> ExpansionExport {
        ExpansionExport {
            lattice: self.lattice.spec.to_string(),
            weight: self.weight.clone(),
            index: self.index(),
            half_dual: self.half_dual(),
            prec: Q::new(self.prec, 24),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(e, v, c)| TermExport {
                    q: Q::new(e, 24),
                    zeta: v.to_string(),
                    coeff: c,
                })
                .collect(),
        }
    }
}

impl fmt::Display for JacobiExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        let mut groups: Vec<String> = Vec::new();
        let mut i = 0;
        while i < terms.len() {
            let e = terms[i].0;
            let mut parts: Vec<String> = Vec::new();
            while i < terms.len() && terms[i].0 == e {
                let (_, v, c) = &terms[i];
                let s = if v.is_zero() {
                    c.to_string()
                } else if c.is_one() {
                    format!("z[{v}]")
                } else if *c == -Q::one() {
                    format!("-z[{v}]")
                } else {
                    format!("{c}*z[{v}]")
                };
                parts.push(s);
                i += 1;
            }
            let poly = parts.join(" + ").replace("+ -", "- ");
            groups.push(format!("({poly})*{}", q_power(&Q::new(e, 24))));
        }
        groups.push(format!("O({})", q_power(&Q::new(self.prec, 24))));
        write!(f, "{}", groups.join(" + "))
    }
}

/// `η^e` as an expansion of index 0.
pub fn eta_expansion(lattice: Arc<Lattice>, e: i64, prec: i64) -> Result<JacobiExpansion> {
    JacobiExpansion::from_qseries(lattice, &eta_power(e, prec), Q::new(e, 2))
}

/// `ϑ(τ, ⟨s, z⟩)` from `Σ_{r odd} (-1)^{(r-1)/2} q^{r²/8} ζ^{r s/2}`, where `p`
/// holds the pairings `⟨s, e_j⟩`.
pub fn theta_series(lattice: Arc<Lattice>, p: &[i64], prec: i64) -> Result<JacobiExpansion> {
    let pm = mono_from_slice(p)?;
    let mut out = JacobiExpansion::zero(lattice, Q::new(1, 2), &Q::zero(), prec)?;
    out.index_form = outer(p, 1);
    let mut r: i64 = 1;
    while 3 * r * r < prec {
        let sign = if ((r - 1) / 2) % 2 == 0 { Q::one() } else { -Q::one() };
        out.add_term(3 * r * r, mono_scale(&pm, r as i32), sign.clone());
        out.add_term(3 * r * r, mono_scale(&pm, -(r as i32)), -sign);
        r += 2;
    }
    Ok(out)
}

/// `ϑ(τ, ⟨s, z⟩)` from the product `q^{1/8}(ζ^{1/2}-ζ^{-1/2})Π(1-q^nζ)(1-q^nζ^{-1})(1-q^n)`.
pub fn theta_product_formula(lattice: Arc<Lattice>, p: &[i64], prec: i64) -> Result<JacobiExpansion> {
    let pm = mono_from_slice(p)?;
    let two = mono_scale(&pm, 2);
    let mut acc = JacobiExpansion::zero(lattice.clone(), Q::new(1, 2), &Q::zero(), prec)?;
    acc.index_form = outer(p, 1);
    acc.add_term(3, pm, Q::one());
    acc.add_term(3, mono_neg(&pm), -Q::one());
    let mut n = 1;
    while 3 + 24 * n < prec {
        for m in [two, mono_neg(&two), ZERO_MONO] {
            let mut f = JacobiExpansion::zero(lattice.clone(), Q::zero(), &Q::zero(), prec)?;
            f.add_term(0, ZERO_MONO, Q::one());
            f.add_term(24 * n, m, -Q::one());
            acc = acc.mul(&f)?.truncate(prec);
        }
        n += 1;
    }
    Ok(acc)
}

/// `η^{eta} Π ϑ(⟨s_i, z⟩)^{c_i}` with `c_i >= 0`, to scaled precision `prec`.
pub fn theta_product(
    lattice: Arc<Lattice>,
    eta: i64,
    factors: &[(Vec<i64>, i64)],
    prec: i64,
) -> Result<JacobiExpansion> {
    if lattice.rank() > MAX_RANK {
        return Err(Error::RankTooLarge(lattice.rank()));
    }
    let count: i64 = factors.iter().map(|(_, c)| *c).sum();
    let total_val = eta + 3 * count;
    let mut acc = eta_expansion(lattice.clone(), eta, prec - (total_val - eta))?;
    for (p, c) in factors {
        if *c < 0 {
            return Err(Error::InvalidInput("negative exponent in a theta product".into()));
        }
        if *c == 0 {
            continue;
        }
        let th = theta_series(lattice.clone(), p, prec - (total_val - 3))?;
        for _ in 0..*c {
            acc = acc.mul(&th)?;
        }
    }
    Ok(acc.truncate(prec))
}

/// A theta block: classical `Θ_f = η^{f(0)} Π (ϑ_a/η)^{f(a)}` or a lattice
/// block `Θ_s = η^{24-3d} Π ϑ(⟨s_j, z⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaBlockSpec {
    Classical {
        f: Vec<i64>,
    },
    Lattice {
        lattice: Arc<Lattice>,
        vectors: Vec<DualVector>,
    },
}

impl ThetaBlockSpec {
    /// `f = [f(0), f(1), ...]`.
    pub fn classical(f: &[i64]) -> ThetaBlockSpec {
        ThetaBlockSpec::Classical { f: f.to_vec() }
    }

    /// `ϑ_{D_m} = η^{24-3m} Π ϑ(z_j)`.
    pub fn d_family(m: usize) -> Result<ThetaBlockSpec> {
        let lat = Arc::new(Lattice::parse(&format!("D{m}"))?);
        let vectors = (0..m)
            .map(|j| {
                let mut e = vec![Q::zero(); m];
                e[j] = Q::one();
                lat.from_pairings(&lat.ambient_pairings(0, &e).unwrap())
            })
            .collect();
        Ok(ThetaBlockSpec::Lattice { lattice: lat, vectors })
    }

    /// `ϑ_{A_n} = Δ·φ_{-(n+1),A_n,1} = η^{24-3(n+1)} Π ϑ(⟨u_s, z⟩)`.
    pub fn a_family(n: usize) -> Result<ThetaBlockSpec> {
        let lat = Arc::new(Lattice::parse(&format!("A{n}"))?);
        let vectors = (0..=n)
            .map(|s| {
                let mut e = vec![Q::zero(); n + 1];
                e[s] = Q::one();
                lat.from_pairings(&lat.ambient_pairings(0, &e).unwrap())
            })
            .collect();
        Ok(ThetaBlockSpec::Lattice { lattice: lat, vectors })
    }

    pub fn lattice(&self) -> Result<Arc<Lattice>> {
        match self {
            ThetaBlockSpec::Classical { .. } => Ok(Arc::new(Lattice::build(&"A1".parse::<RootLatticeSpec>()?)?)),
            ThetaBlockSpec::Lattice { lattice, .. } => Ok(lattice.clone()),
        }
    }

    fn eta_and_factors(&self) -> Result<(i64, Vec<(Vec<i64>, i64)>)> {
        match self {
            ThetaBlockSpec::Classical { f } => {
                let f0 = f.first().copied().unwrap_or(0);
                let rest: i64 = f.iter().skip(1).sum();
                let factors = f
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, c)| **c != 0)
                    .map(|(a, c)| (vec![a as i64], *c))
                    .collect();
                Ok((f0 - rest, factors))
            }
            ThetaBlockSpec::Lattice { lattice, vectors } => {
                let mut factors = Vec::new();
                for v in vectors {
                    let p = lattice.pairings(v);
                    if !p.iter().all(Q::is_integer) {
                        return Err(Error::InvalidInput(format!("{v} is not in L'")));
                    }
                    factors.push((p.iter().map(|x| x.to_i64().unwrap()).collect(), 1));
                }
                Ok((24 - 3 * vectors.len() as i64, factors))
            }
        }
    }

    pub fn weight(&self) -> Result<Q> {
        let (eta, factors) = self.eta_and_factors()?;
        let n: i64 = factors.iter().map(|(_, c)| c).sum();
        Ok(Q::new(eta + n, 2))
    }

    /// `(Σ c_i)·3 + eta` over 24.
    pub fn q_order(&self) -> Result<Q> {
        let (eta, factors) = self.eta_and_factors()?;
        let n: i64 = factors.iter().map(|(_, c)| c).sum();
        Ok(Q::new(eta + 3 * n, 24))
    }

    /// Index form `Σ c_i p_i p_iᵀ`.
    pub fn index_form(&self) -> Result<Vec<Vec<Q>>> {
        let (_, factors) = self.eta_and_factors()?;
        let r = self.lattice()?.rank();
        let mut m = zero_matrix(r);
        for (p, c) in &factors {
            m = add_matrix(&m, &outer(p, *c));
        }
        Ok(m)
    }

    pub fn index(&self) -> Result<Option<Q>> {
        let lat = self.lattice()?;
        let form = self.index_form()?;
        let e = JacobiExpansion {
            weight: Q::zero(),
            lattice: lat,
            index_form: form,
            terms: BTreeMap::new(),
            prec: 0,
        };
        Ok(e.index())
    }
}

/// Expands a theta block to scaled precision `prec`.
pub fn theta_block(spec: &ThetaBlockSpec, prec: i64) -> Result<JacobiExpansion> {
    let lat = spec.lattice()?;
    if let ThetaBlockSpec::Lattice { lattice, .. } = spec {
        let form = spec.index_form()?;
        let ok = (0..lattice.rank()).all(|i| (0..lattice.rank()).all(|j| form[i][j] == Q::from(lattice.gram[i][j])));
        if !ok {
            return Err(Error::QOrderMismatch(format!(
                "Σ⟨s_j,z⟩² ≠ ⟨z,z⟩ (weight {}, index form {:?}, q-order {})",
                spec.weight()?,
                form,
                spec.q_order()?
            )));
        }
    }
    let (eta, factors) = spec.eta_and_factors()?;
    if factors.iter().any(|(_, c)| *c < 0) {
        return Err(Error::InvalidInput(
            "theta blocks need nonnegative exponents; use theta_quotient".into(),
        ));
    }
    theta_product(lat, eta, &factors, prec)
}

/// `η^{f00} Π_ℓ (ϑ(⟨ℓ, z⟩)/η)^{f(ℓ)}` with exponents of either sign; the
/// denominators are divided out exactly. `factors` holds stored exponents of
/// `ℓ ∈ L'` (doubled pairings).
pub fn theta_quotient(lattice: Arc<Lattice>, f00: i64, factors: &[(Mono, i64)], prec: i64) -> Result<JacobiExpansion> {
    let r = lattice.rank();
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut eta = f00;
    for (m, c) in factors {
        let p = mono_div(m, 2).ok_or_else(|| Error::InvalidInput("theta quotient exponents must lie in L'".into()))?;
        let p: Vec<i64> = p[..r].iter().map(|x| *x as i64).collect();
        eta -= c;
        if *c > 0 {
            num.push((p, *c));
        } else if *c < 0 {
            den.push((p, -*c));
        }
    }
    if den.is_empty() {
        return theta_product(lattice, eta, &num, prec);
    }
    let den_val: i64 = den.iter().map(|(_, c)| 3 * c).sum();
    let num_val: i64 = eta + num.iter().map(|(_, c)| 3 * c).sum::<i64>();
    let d = theta_product(lattice.clone(), 0, &den, prec + 2 * den_val - num_val.min(0))?;
    let n = theta_product(lattice, eta, &num, prec + den_val)?;
    Ok(n.divide_exact(&d)?.truncate(prec))
}
