//! Univariate q-series with exponents in `(1/24)Z`.
//!
//! Exponents are stored scaled by 24; `prec` is the first scaled exponent
//! that is not known.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Default truncation: `q^8`.
pub const DEFAULT_PREC: i64 = 8 * 24;

/// A truncated q-series `Σ c_e q^{e/24} + O(q^{prec/24})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: BTreeMap<i64, Q>,
    prec: i64,
}

impl QSeries {
    pub fn zero(prec: i64) -> QSeries {
        QSeries {
            coeffs: BTreeMap::new(),
            prec,
        }
    }

    pub fn one(prec: i64) -> QSeries {
        QSeries::monomial(0, Q::one(), prec)
    }

    pub fn monomial(e: i64, c: Q, prec: i64) -> QSeries {
        let mut s = QSeries::zero(prec);
        s.add_term(e, c);
        s
    }

    /// Builds a series from `(scaled exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(terms: I, prec: i64) -> QSeries {
        let mut s = QSeries::zero(prec);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeff(&self, e: i64) -> Q {
        self.coeffs.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, e: i64, c: Q) {
        if e >= self.prec || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn truncate(&self, prec: i64) -> QSeries {
        let prec = prec.min(self.prec);
        QSeries {
            coeffs: self.coeffs.range(..prec).map(|(e, c)| (*e, c.clone())).collect(),
            prec,
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let mut out = self.truncate(self.prec.min(other.prec));
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> QSeries {
        if c.is_zero() {
            return QSeries::zero(self.prec);
        }
        QSeries {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
            prec: self.prec,
        }
    }

    /// Product; the result is known up to `min(prec_a + v_b, prec_b + v_a)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let (Some(va), Some(vb)) = (self.valuation(), other.valuation()) else {
            let p = match (self.valuation(), other.valuation()) {
                (Some(va), None) => other.prec + va,
                (None, Some(vb)) => self.prec + vb,
                _ => self.prec.min(other.prec),
            };
            return QSeries::zero(p);
        };
        let prec = (self.prec + vb).min(other.prec + va);
        let mut out = QSeries::zero(prec);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                if ea + eb >= prec {
                    break;
                }
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    /// The series with every exponent multiplied by `m`.
    pub fn dilate(&self, m: i64) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * m, c.clone())).collect(),
            prec: self.prec * m,
        }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, abs) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let exp = Q::new(e, 24);
            if exp.is_zero() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", q_power(&exp))?;
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O({})", q_power(&Q::new(self.prec, 24)))
    }
}

/// `q`, `q^3`, `q^-1` or `q^(1/8)`.
pub fn q_power(e: &Q) -> String {
    if e.is_one() {
        "q".to_string()
    } else if e.is_integer() {
        format!("q^{e}")
    } else {
        format!("q^({e})")
    }
}

/// Coefficients of `Π_{n>=1} (1 - q^n)` up to `q^{len-1}` (pentagonal numbers).
pub fn euler_product(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            if (g as usize) < len {
                out[g as usize] = if k % 2 == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    out
}

/// `g = f^e` for a power series with `f_0 = 1`, first `len` coefficients.
pub fn power_series_pow(f: &[Q], e: &Q, len: usize) -> Vec<Q> {
    let mut g = vec![Q::zero(); len];
    if len == 0 {
        return g;
    }
    assert!(f[0].is_one(), "power of a series needs constant term 1");
    g[0] = Q::one();
    let e1 = e + &Q::one();
    for n in 1..len {
        let mut s = Q::zero();
        for k in 1..=n.min(f.len() - 1) {
            if f[k].is_zero() || g[n - k].is_zero() {
                continue;
            }
            let w = &e1 * &Q::from(k as i64) - Q::from(n as i64);
            s += w * &f[k] * &g[n - k];
        }
        g[n] = s / Q::from(n as i64);
    }
    g
}

/// `η^e` up to (scaled) `prec`.
pub fn eta_power(e: i64, prec: i64) -> QSeries {
    let need = prec - e;
    if need <= 0 {
        return QSeries::zero(prec);
    }
    let len = ((need - 1) / 24 + 1) as usize;
    let f: Vec<Q> = euler_product(len).into_iter().map(Q::from).collect();
    let g = power_series_pow(&f, &Q::from(e), len);
    QSeries::from_terms(g.into_iter().enumerate().map(|(n, c)| (e + 24 * n as i64, c)), prec)
}

/// `σ_r(n)`, the sum of `r`-th powers of the positive divisors of `n`.
pub fn sigma(r: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(r);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(r);
            }
        }
        d += 1;
    }
    s
}

/// Bernoulli numbers from `t/(e^t - 1)`, so `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Q {
    let mut b: Vec<Q> = Vec::with_capacity(k + 1);
    for n in 0..=k {
        if n == 0 {
            b.push(Q::one());
            continue;
        }
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0
        let mut s = Q::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            s += Q::from(binom.clone()) * bj;
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / Q::from((n + 1) as i64));
    }
    b.pop().unwrap()
}

/// Normalized Eisenstein series `E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n`.
pub fn eisenstein(k: u32, prec: i64) -> Result<QSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "Eisenstein series needs even weight >= 2, got {k}"
        )));
    }
    let c = -Q::from(2 * k as i64) / bernoulli(k as usize);
    let mut s = QSeries::one(prec);
    let mut n = 1i64;
    while 24 * n < prec {
        s.add_term(24 * n, &c * &Q::from(sigma(k - 1, n as u64)));
        n += 1;
    }
    Ok(s)
}

/// `Δ = η^24`.
pub fn delta(prec: i64) -> QSeries {
    eta_power(24, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(s: &QSeries) -> Vec<(i64, i64)> {
        s.terms().map(|(e, c)| (e / 24, c.to_i64().unwrap())).collect()
    }

    #[test]
    fn delta_coefficients() {
        let d = eta_power(24, 5 * 24);
        assert_eq!(ints(&d), vec![(1, 1), (2, -24), (3, 252), (4, -1472)]);
        assert_eq!(eta_power(0, 100), QSeries::one(100));
        assert_eq!(eta_power(1, 100).valuation(), Some(1));
    }

    #[test]
    fn direct_product_oracle() {
        // expand Π(1-q^n)^24 by repeated multiplication
        let n = 8usize;
        let mut p = vec![0i64; n];
        p[0] = 1;
        for m in 1..n {
            for _ in 0..24 {
                for i in (m..n).rev() {
                    p[i] -= p[i - m];
                }
            }
        }
        let d = eta_power(24, 24 * (n as i64 + 1));
        for (i, c) in p.iter().enumerate() {
            assert_eq!(d.coeff(24 * (i as i64 + 1)), Q::from(*c));
        }
    }

    #[test]
    fn eisenstein_examples() {
        let e4 = eisenstein(4, 3 * 24).unwrap();
        assert_eq!(ints(&e4), vec![(0, 1), (1, 240), (2, 2160)]);
        let e6 = eisenstein(6, 2 * 24).unwrap();
        assert_eq!(ints(&e6), vec![(0, 1), (1, -504)]);
        assert!(eisenstein(5, 24).is_err());
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(sigma(1, 6), BigInt::from(12));
        assert_eq!(sigma(0, 13), BigInt::from(2));
        assert_eq!(bernoulli(4), Q::new(-1, 30));
        assert_eq!(bernoulli(1), Q::new(-1, 2));
        assert_eq!(bernoulli(12), Q::new(-691, 2730));
        assert_eq!(bernoulli(7), Q::zero());
    }

    #[test]
    fn e4_cubed_minus_e6_squared() {
        let p = 10 * 24;
        let e4 = eisenstein(4, p).unwrap();
        let e6 = eisenstein(6, p).unwrap();
        let lhs = e4.mul(&e4).mul(&e4).sub(&e6.mul(&e6));
        assert_eq!(lhs, delta(p).scale(&Q::from(1728)));
    }

    #[test]
    fn delta_inverse() {
        let p = 12 * 24;
        let prod = delta(p).mul(&eta_power(-24, p));
        assert_eq!(prod.truncate(p - 24), QSeries::one(p - 24));
    }

    #[test]
    fn display() {
        let s = QSeries::from_terms([(3, Q::one()), (27, Q::from(-2))], 120);
        assert_eq!(s.to_string(), "q^(1/8) - 2*q^(9/8) + O(q^5)");
    }

    proptest! {
        #[test]
        fn eta_powers_multiply(a in -30i64..=30, b in -30i64..=30) {
            let p = 6 * 24;
            let lhs = eta_power(a, p + 60).mul(&eta_power(b, p + 60)).truncate(p);
            let rhs = eta_power(a + b, p);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
