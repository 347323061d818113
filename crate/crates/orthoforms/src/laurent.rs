//! Sparse multivariate Laurent polynomials with exact rational coefficients.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::rational::Q;

/// Largest lattice rank supported by expansions.
pub const MAX_RANK: usize = 12;

/// An exponent vector; unused trailing slots are zero.
pub type Mono = [i32; MAX_RANK];

pub const ZERO_MONO: Mono = [0; MAX_RANK];

pub fn mono_from_slice(v: &[i64]) -> Result<Mono> {
    if v.len() > MAX_RANK {
        return Err(Error::RankTooLarge(v.len()));
    }
    let mut m = ZERO_MONO;
    for (slot, x) in m.iter_mut().zip(v) {
        *slot = i32::try_from(*x).map_err(|_| Error::InvalidInput("exponent out of range".into()))?;
    }
    Ok(m)
}

pub fn mono_add(a: &Mono, b: &Mono) -> Mono {
    let mut m = *a;
    for (x, y) in m.iter_mut().zip(b) {
        *x += *y;
    }
    m
}

pub fn mono_sub(a: &Mono, b: &Mono) -> Mono {
    let mut m = *a;
    for (x, y) in m.iter_mut().zip(b) {
        *x -= *y;
    }
    m
}

pub fn mono_scale(a: &Mono, k: i32) -> Mono {
    let mut m = *a;
    for x in m.iter_mut() {
        *x *= k;
    }
    m
}

pub fn mono_neg(a: &Mono) -> Mono {
    mono_scale(a, -1)
}

/// Lexicographic positivity: the first nonzero entry is positive.
pub fn mono_is_positive(a: &Mono) -> bool {
    a.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

/// Exact division of every entry by `d`, if possible.
pub fn mono_div(a: &Mono, d: i32) -> Option<Mono> {
    let mut m = *a;
    for x in m.iter_mut() {
        if *x % d != 0 {
            return None;
        }
        *x /= d;
    }
    Some(m)
}

/// A Laurent polynomial `Σ c_m x^m`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    terms: FxHashMap<Mono, Q>,
}

impl Poly {
    pub fn new() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Q) -> Poly {
        Poly::monomial(ZERO_MONO, c)
    }

    pub fn monomial(m: Mono, c: Q) -> Poly {
        let mut p = Poly::new();
        p.add_term(m, c);
        p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn get(&self, m: &Mono) -> Option<&Q> {
        self.terms.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    /// Terms in lexicographic order of exponents.
    pub fn sorted(&self) -> Vec<(Mono, Q)> {
        let mut v: Vec<(Mono, Q)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by_key(|a| a.0);
        v
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn add_term_ref(&mut self, m: Mono, c: &Q) {
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(m, c.clone());
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term_ref(*m, c);
        }
    }

    /// `self += c * x^shift * other`.
    pub fn add_scaled_shifted(&mut self, other: &Poly, c: &Q, shift: &Mono) {
        if c.is_zero() {
            return;
        }
        let one = c.is_one();
        for (m, x) in &other.terms {
            let key = mono_add(m, shift);
            if one {
                self.add_term_ref(key, x);
            } else {
                self.add_term(key, x * c);
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::new();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &Poly, b: &Poly) {
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        for (m, c) in &small.terms {
            self.add_scaled_shifted(large, c, m);
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::new();
        out.add_product(self, other);
        out
    }

    /// Applies `f` to every exponent; terms that collide are summed.
    pub fn map_monos<F: Fn(&Mono) -> Mono>(&self, f: F) -> Poly {
        let mut out = Poly::new();
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    fn lex_max(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().max_by(|a, b| a.0.cmp(b.0))
    }

    fn bounds(&self, rank: usize) -> (Vec<i32>, Vec<i32>) {
        let mut lo = vec![i32::MAX; rank];
        let mut hi = vec![i32::MIN; rank];
        for m in self.terms.keys() {
            for i in 0..rank {
                lo[i] = lo[i].min(m[i]);
                hi[i] = hi[i].max(m[i]);
            }
        }
        (lo, hi)
    }

    /// Exact quotient `self / d` in the Laurent ring.
    ///
    /// Reduces by the lexicographic leading term of `d`. The Newton polytope
    /// of an exact quotient is bounded coordinatewise by those of `self` and
    /// `d`, so any quotient term outside that box proves inexactness.
    pub fn divide_exact(&self, d: &Poly) -> std::result::Result<Poly, Poly> {
        let Some((ld, lc)) = d.lex_max() else {
            return Err(self.clone());
        };
        let (ld, lc) = (*ld, lc.clone());
        if self.is_empty() {
            return Ok(Poly::new());
        }
        let (alo, ahi) = self.bounds(MAX_RANK);
        let (dlo, dhi) = d.bounds(MAX_RANK);
        let mut rem = self.clone();
        let mut quo = Poly::new();
        while let Some((lm, c)) = rem.lex_max() {
            let t = mono_sub(lm, &ld);
            for i in 0..MAX_RANK {
                if t[i] < alo[i] - dlo[i] || t[i] > ahi[i] - dhi[i] {
                    return Err(rem);
                }
            }
            let coef = c / &lc;
            rem.add_scaled_shifted(d, &-coef.clone(), &t);
            quo.add_term(t, coef);
        }
        Ok(quo)
    }
}
