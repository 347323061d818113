//! Fourier–Jacobi expansions of singular additive lifts and Borcherds
//! products, and the coefficient-wise comparison of the two.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::{prec_for_qmax, theta_block, theta_quotient, JacobiExpansion, ThetaBlockSpec};
use crate::lattice::Lattice;
use crate::laurent::{mono_is_positive, mono_scale, Mono, Poly, ZERO_MONO};
use crate::qseries::{bernoulli, sigma};
use crate::rational::Q;

/// `F = Σ_m f_m ξ^m`, each `f_m` a Jacobi form of index `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierJacobiSeries {
    pub weight: Q,
    pub lattice: Arc<Lattice>,
    /// Coefficients by ξ-power; missing powers are zero.
    pub terms: BTreeMap<i64, JacobiExpansion>,
    /// Every ξ-power below this is known.
    pub xi_prec: i64,
    /// Common scaled q-truncation of all coefficients.
    pub q_prec: i64,
    /// Largest multiple `d` kept in the `q^0` part of the zeroth additive-lift
    /// coefficient, whose `ζ`-series does not terminate.
    pub zeta_truncation: Option<i64>,
}

/// A coefficient `f(n, ℓ, m)` of `q^n ζ^ℓ ξ^m`, with `24n` and the stored ℓ.
pub type Triple = (i64, i64, Mono);

impl FourierJacobiSeries {
    pub fn coeff(&self, m: i64, e: i64, l: &Mono) -> Q {
        self.terms.get(&m).map(|f| f.coeff(e, l)).unwrap_or_else(Q::zero)
    }

    pub fn term(&self, m: i64) -> Option<&JacobiExpansion> {
        self.terms.get(&m)
    }

    /// Product of two series on the common truncation.
    pub fn mul(&self, other: &FourierJacobiSeries) -> Result<FourierJacobiSeries> {
        let xi_prec = self.xi_prec.min(other.xi_prec);
        let q_prec = self.q_prec.min(other.q_prec);
        let mut terms: BTreeMap<i64, JacobiExpansion> = BTreeMap::new();
        for (a, fa) in &self.terms {
            for (b, fb) in &other.terms {
                if a + b >= xi_prec {
                    continue;
                }
                let p = fa.mul(fb)?.truncate(q_prec);
                match terms.remove(&(a + b)) {
                    Some(acc) => {
                        terms.insert(a + b, acc.add(&p)?);
                    }
                    None => {
                        terms.insert(a + b, p);
                    }
                }
            }
        }
        Ok(FourierJacobiSeries {
            weight: &self.weight + &other.weight,
            lattice: self.lattice.clone(),
            terms,
            xi_prec,
            q_prec,
            zeta_truncation: None,
        })
    }

    /// `f(n, ℓ, m) = f(m, ℓ, n)` for every pair visible in the truncation;
    /// returns a violating triple `(m, 24n, ℓ)`.
    pub fn symmetry_witness(&self) -> Option<Triple> {
        for (&m, f) in &self.terms {
            for (e, p) in f.orders() {
                if e % 24 != 0 || e < 0 {
                    return Some((m, e, ZERO_MONO));
                }
                let n = e / 24;
                if n >= self.xi_prec || 24 * m >= self.q_prec {
                    continue;
                }
                for (l, c) in p.iter() {
                    if self.coeff(n, 24 * m, l) != *c {
                        return Some((m, e, *l));
                    }
                }
            }
        }
        None
    }
}

/// `fj_symmetry_check`: true when no violating triple exists.
pub fn fj_symmetry_check(f: &FourierJacobiSeries) -> bool {
    f.symmetry_witness().is_none()
}

fn check_index_one(phi: &JacobiExpansion) -> Result<()> {
    if phi.index() != Some(Q::one()) {
        return Err(Error::InvalidInput("input must have index 1".into()));
    }
    if phi.half_dual() {
        return Err(Error::InvalidInput("input exponents must lie in L'".into()));
    }
    if phi.orders().any(|(e, _)| e % 24 != 0) {
        return Err(Error::InvalidInput("input q-exponents must be integral".into()));
    }
    Ok(())
}

/// `φ|T₋(0)`: `-f(0,0)B_k/2k` (even `k`) plus `Σ_{(n,ℓ)>0} Σ_{d|(n,ℓ)} d^{k-1} f(0,ℓ/d) q^n ζ^ℓ`.
///
/// The `q^0` part `Σ_{ℓ'>0} f(0,ℓ') Σ_d d^{k-1} ζ^{dℓ'}` is kept for `d <= dmax`.
pub fn hecke_zero(phi: &JacobiExpansion, k: i64, prec: i64, dmax: i64) -> Result<JacobiExpansion> {
    let lat = phi.lattice().clone();
    let mut out = JacobiExpansion::zero(lat, Q::from(k), &Q::zero(), prec)?;
    let q0 = phi.poly(0).cloned().unwrap_or_default();
    let f00 = q0.coeff(&ZERO_MONO);
    if k % 2 == 0 {
        out.add_term(0, ZERO_MONO, -(&f00 * &bernoulli(k as usize)) / Q::from(2 * k));
    } else if !f00.is_zero() {
        return Err(Error::InvalidInput("odd weight input has f(0,0) != 0".into()));
    }
    for (l, c) in q0.iter() {
        if mono_is_positive(l) {
            for d in 1..=dmax {
                out.add_term(0, mono_scale(l, d as i32), c * &Q::from(d).pow((k - 1) as i32));
            }
        }
    }
    let mut n = 1;
    while 24 * n < prec {
        for d in (1..=n).filter(|d| n % d == 0) {
            let w = Q::from(d).pow((k - 1) as i32);
            let p = q0.map_monos(|l| mono_scale(l, d as i32)).scale(&w);
            for (l, c) in p.iter() {
                out.add_term(24 * n, *l, c.clone());
            }
        }
        n += 1;
    }
    Ok(out)
}

/// Singular additive lift `Σ_{m>=0} (φ|T₋(m)) ξ^m` for `m <= ximax`, `n <= qmax`.
pub fn grit(phi: &JacobiExpansion, ximax: i64, qmax: i64) -> Result<FourierJacobiSeries> {
    check_index_one(phi)?;
    let k = phi.integral_weight()?;
    if k < 1 {
        return Err(Error::InvalidInput(format!("additive lift needs weight >= 1, got {k}")));
    }
    let target = prec_for_qmax(qmax);
    let needed = 24 * (ximax.max(1) * qmax + 1);
    if phi.prec() < needed {
        return Err(Error::InsufficientPrecision {
            needed: Q::new(needed, 24),
            have: Q::new(phi.prec(), 24),
        });
    }
    let dmax = qmax.max(ximax);
    let mut terms = BTreeMap::new();
    let zero = hecke_zero(phi, k, target, dmax)?;
    if !zero.is_zero() {
        terms.insert(0, zero);
    }
    for m in 1..=ximax {
        let t = phi.hecke(m)?.truncate(target);
        if !t.is_zero() {
            terms.insert(m, t);
        }
    }
    Ok(FourierJacobiSeries {
        weight: Q::from(k),
        lattice: phi.lattice().clone(),
        terms,
        xi_prec: ximax + 1,
        q_prec: target,
        zeta_truncation: Some(dmax),
    })
}

/// Coefficients with `2n - ⟨ℓ,ℓ⟩ <= 0` that are not integers.
pub fn singular_integrality(phi: &JacobiExpansion) -> Result<()> {
    for (e, p) in phi.orders() {
        let n = Q::new(e, 24);
        for (l, c) in p.iter() {
            if &Q::from(2) * &n <= phi.norm(l) && !c.is_integer() {
                return Err(Error::NonIntegralSingularPart {
                    n,
                    l: phi.dual_vector(l).to_string(),
                    coeff: c.clone(),
                });
            }
        }
    }
    Ok(())
}

/// `δ(n, ℓ) = Σ_{d>=1} f(d²n, dℓ)` within the truncation.
pub fn divisor_multiplicity(phi: &JacobiExpansion, e: i64, l: &Mono) -> Q {
    let mut s = Q::zero();
    let mut d = 1i64;
    loop {
        let ed = d * d * e;
        if ed >= phi.prec() || (e == 0 && d > 1) {
            break;
        }
        s += phi.coeff(ed, &mono_scale(l, d as i32));
        d += 1;
        if e < 0 && ed < phi.valuation().unwrap_or(0) {
            break;
        }
    }
    s
}

/// The leading data of a Borcherds product input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorchData {
    pub weight: Q,
    pub c: Q,
}

/// Theta quotient `Θ_{f(0,*)}` of a weight-0 index-1 input, using the
/// exponents `ℓ > 0` (lexicographically positive pairings).
pub fn leading_theta_quotient(phi: &JacobiExpansion, prec: i64) -> Result<JacobiExpansion> {
    let q0 = phi.poly(0).cloned().unwrap_or_default();
    let f00 = q0.coeff(&ZERO_MONO);
    let f00 = f00
        .to_i64()
        .ok_or_else(|| Error::InvalidInput("f(0,0) must be an integer".into()))?;
    let mut factors = Vec::new();
    for (l, c) in q0.sorted() {
        if mono_is_positive(&l) {
            let c = c.to_i64().ok_or_else(|| Error::NonIntegralSingularPart {
                n: Q::zero(),
                l: phi.dual_vector(&l).to_string(),
                coeff: c.clone(),
            })?;
            factors.push((l, c));
        }
    }
    theta_quotient(phi.lattice().clone(), f00, &factors, prec)
}

/// Borcherds product `Θ_{f(0,*)} ξ^C exp(-Σ_{m>=1} (φ|T₋(m)) ξ^m)` for
/// `ξ`-powers `<= ximax` and `n <= qmax`.
pub fn borch(phi: &JacobiExpansion, ximax: i64, qmax: i64) -> Result<FourierJacobiSeries> {
    if !phi.weight.is_zero() {
        return Err(Error::InvalidInput("Borcherds products need a weight-0 input".into()));
    }
    check_index_one(phi)?;
    singular_integrality(phi)?;
    let lat = phi.lattice().clone();
    let target = prec_for_qmax(qmax);
    let inv = phi.q0_invariants()?;
    let c = inv.c;
    if c.is_negative() {
        return Err(Error::NegativeXiOrder(c));
    }
    let c = c
        .to_i64()
        .ok_or_else(|| Error::InvalidInput(format!("xi-order C = {} is not integral", c)))?;
    let weight = &phi.poly(0).map(|p| p.coeff(&ZERO_MONO)).unwrap_or_else(Q::zero) / &Q::from(2);
    let mut out = FourierJacobiSeries {
        weight,
        lattice: lat.clone(),
        terms: BTreeMap::new(),
        xi_prec: ximax + 1,
        q_prec: target,
        zeta_truncation: None,
    };
    if phi.is_zero() {
        out.terms.insert(0, JacobiExpansion::constant(lat, Q::one(), target)?);
        return Ok(out);
    }
    if c > ximax {
        return Ok(out);
    }
    let big_m = ximax - c;
    let vphi = phi.valuation().unwrap_or(0).min(0);
    let theta0 = leading_theta_quotient(phi, target - big_m * vphi)?;
    let vtheta = theta0.valuation().unwrap_or(0);
    let ps = target - vtheta - big_m * vphi;
    let mut s: Vec<JacobiExpansion> = Vec::with_capacity(big_m as usize + 1);
    s.push(JacobiExpansion::zero(lat.clone(), Q::zero(), &Q::zero(), ps)?);
    for m in 1..=big_m {
        let h = phi.hecke(m)?;
        if h.prec() < ps {
            return Err(Error::InsufficientPrecision {
                needed: Q::new(ps, 24),
                have: Q::new(h.prec(), 24),
            });
        }
        s.push(h.truncate(ps));
    }
    let exps = exp_neg(&s, &lat, ps)?;
    for (j, ej) in exps.iter().enumerate() {
        let t = theta0.mul(ej)?.truncate(target);
        if t.prec() < target {
            return Err(Error::InsufficientPrecision {
                needed: Q::new(target, 24),
                have: Q::new(t.prec(), 24),
            });
        }
        if !t.is_zero() {
            out.terms.insert(c + j as i64, t);
        }
    }
    Ok(out)
}

/// `E = exp(-Σ_{m>=1} S_m ξ^m)` via `m E_m = -Σ_{j=1}^{m} j S_j E_{m-j}`.
fn exp_neg(s: &[JacobiExpansion], lat: &Arc<Lattice>, prec: i64) -> Result<Vec<JacobiExpansion>> {
    let big_m = s.len() - 1;
    let mut e: Vec<JacobiExpansion> = vec![JacobiExpansion::constant(lat.clone(), Q::one(), prec)?];
    for m in 1..=big_m {
        let mut acc: Option<JacobiExpansion> = None;
        for j in 1..=m {
            let term = s[j].mul(&e[m - j])?.scale(&Q::from(j as i64)).truncate(prec);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        e.push(acc.unwrap().scale(&Q::new(-1, m as i64)));
    }
    Ok(e)
}

/// `log(F / F_C)` for a series with leading term `F_C ξ^C`: returns
/// `L_1, …` with `F = F_C ξ^C exp(Σ L_m ξ^m)`.
pub fn fj_log(f: &FourierJacobiSeries) -> Result<Vec<JacobiExpansion>> {
    let (&c, lead) = f
        .terms
        .iter()
        .next()
        .ok_or_else(|| Error::InvalidInput("zero series".into()))?;
    let big_m = f.xi_prec - 1 - c;
    let mut e: Vec<JacobiExpansion> = Vec::new();
    for j in 0..=big_m {
        let fj = match f.terms.get(&(c + j)) {
            Some(t) => t.clone(),
            None => JacobiExpansion::zero(f.lattice.clone(), lead.weight.clone(), &(Q::from(c + j)), f.q_prec)?,
        };
        e.push(fj.divide_exact(lead)?);
    }
    let mut l: Vec<JacobiExpansion> = vec![e[0].scale(&Q::zero())];
    for m in 1..=big_m as usize {
        let mut acc = e[m].clone();
        for j in 1..m {
            let t = l[j].mul(&e[m - j])?.scale(&Q::new(j as i64, m as i64));
            acc = acc.truncate(t.prec()).sub(&t)?;
        }
        l.push(acc);
    }
    Ok(l.split_off(1))
}

/// Scaled precision of a weight-0 input that suffices for [`borch`] on the
/// box `ξ^m`, `m <= ximax`, `q^n`, `n <= qmax`.
pub fn borch_input_prec(ximax: i64, qmax: i64) -> i64 {
    24 * ((ximax - 1).max(1) * (qmax - 1).max(0) + 1)
}

/// `Ψ = -(Θ|T₋(2))/Θ`, truncated at scaled `prec`.
pub fn psi_from_block(theta: &ThetaBlockSpec, prec: i64) -> Result<JacobiExpansion> {
    let pt = 2 * prec + 24;
    let th = theta_block(theta, pt)?;
    let psi = th.hecke(2)?.divide_exact(&th)?.neg();
    Ok(psi.truncate(prec))
}

/// `Ψ_{D_m}` with every `q^n`, `n <= qmax`; all coefficients are checked integral.
pub fn psi_input(m: usize, qmax: i64) -> Result<JacobiExpansion> {
    if !(1..=11).contains(&m) {
        return Err(Error::InvalidInput(format!("psi_input needs 1 <= m <= 11, got {m}")));
    }
    let psi = psi_from_block(&ThetaBlockSpec::d_family(m)?, prec_for_qmax(qmax))?;
    for (e, p) in psi.orders() {
        for (l, c) in p.iter() {
            if !c.is_integer() {
                return Err(Error::NonIntegralSingularPart {
                    n: Q::new(e, 24),
                    l: psi.dual_vector(l).to_string(),
                    coeff: c.clone(),
                });
            }
        }
    }
    Ok(psi)
}

/// One disagreeing coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub m: i64,
    pub n: Q,
    pub l: String,
    pub grit: Q,
    pub borch: Q,
}

/// Outcome of comparing `Grit(Θ)` with `Borch(-Θ|T₋(2)/Θ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaIdentityReport {
    pub lattice: String,
    pub weight: Q,
    pub ximax: i64,
    pub qmax: i64,
    /// `C` of the Borcherds input.
    pub xi_order: Q,
    /// Sign `σ` with `Θ_{f(0,*)} = σ·Θ`; it depends on the choice of `ℓ > 0`.
    pub sign: i64,
    pub compared: usize,
    pub mismatches: Vec<Mismatch>,
    pub equal: bool,
}

/// Computes both sides of `Grit(Θ) = Borch(-Θ|T₋(2)/Θ)` and compares every
/// coefficient with `m <= ximax`, `n <= qmax`.
pub fn verify_theta_identity(spec: &ThetaBlockSpec, ximax: i64, qmax: i64) -> Result<ThetaIdentityReport> {
    if spec.q_order()? != Q::one() {
        return Err(Error::InvalidInput(format!(
            "theta block has q-order {}, expected 1",
            spec.q_order()?
        )));
    }
    let w = spec.weight()?;
    if !w.is_positive() {
        return Err(Error::InvalidInput(format!(
            "theta block has weight {w}, expected positive"
        )));
    }
    let target = prec_for_qmax(qmax);
    let psi_prec = borch_input_prec(ximax, qmax);
    let grit_prec = 24 * (ximax.max(1) * qmax + 1);
    let th = theta_block(spec, grit_prec.max(2 * psi_prec + 24))?;
    let psi = th.hecke(2)?.divide_exact(&th)?.neg().truncate(psi_prec);
    let lhs = grit(&th, ximax, qmax)?;
    let rhs = borch(&psi, ximax, qmax)?;
    let inv = psi.q0_invariants()?;
    let sign = leading_sign(&lhs, &rhs);
    let sq = Q::from(sign);
    let mut keys: BTreeMap<(i64, i64), Vec<Mono>> = BTreeMap::new();
    for f in [&lhs, &rhs] {
        for (&mm, t) in &f.terms {
            for (e, p) in t.orders() {
                if e < target {
                    keys.entry((mm, e)).or_default().extend(p.iter().map(|(l, _)| *l));
                }
            }
        }
    }
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for ((mm, e), mut ls) in keys {
        ls.sort();
        ls.dedup();
        for l in ls {
            compared += 1;
            let a = lhs.coeff(mm, e, &l);
            let b = &rhs.coeff(mm, e, &l) * &sq;
            if a != b {
                mismatches.push(Mismatch {
                    m: mm,
                    n: Q::new(e, 24),
                    l: th.dual_vector(&l).to_string(),
                    grit: a,
                    borch: b,
                });
            }
        }
    }
    Ok(ThetaIdentityReport {
        lattice: th.lattice().spec.to_string(),
        weight: w,
        ximax,
        qmax,
        xi_order: inv.c,
        sign,
        compared,
        equal: mismatches.is_empty(),
        mismatches,
    })
}

fn leading_sign(lhs: &FourierJacobiSeries, rhs: &FourierJacobiSeries) -> i64 {
    for (m, t) in &lhs.terms {
        if let Some((e, p)) = t.orders().next() {
            let mut sorted = p.sorted();
            sorted.truncate(1);
            if let Some((l, c)) = sorted.first() {
                let d = rhs.coeff(*m, e, l);
                if d == -c.clone() {
                    return -1;
                }
                return 1;
            }
        }
    }
    1
}

/// Sum of coefficients `Σ_ℓ f(n, ℓ)` of one q-order, as a quick fingerprint.
pub fn order_sum(p: &Poly) -> Q {
    p.iter().map(|(_, c)| c.clone()).sum()
}

/// `σ_1(n)` as a rational, for callers combining it with coefficients.
pub fn sigma1(n: u64) -> Q {
    Q::from(sigma(1, n))
}
