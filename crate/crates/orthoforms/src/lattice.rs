//! Root lattices, their duals and discriminant groups.
//!
//! A lattice is a direct sum of rescaled irreducible root lattices. Each
//! component carries a fixed basis: `A_n` uses `e_j = ε_{j+1} - ε_j` in
//! `Z^{n+1}`, `D_n` is the even-sum sublattice of `Z^n` with simple roots
//! `ε_1-ε_2, …, ε_{n-1}-ε_n, ε_{n-1}+ε_n` (and `2ε_1` for `n = 1`), and
//! `E_6, E_7, E_8` use the Bourbaki Cartan matrices.
//!
//! All computations are exact. Short vectors are enumerated with a rational
//! `U^T D U` decomposition of the quadratic form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Q;

/// Irreducible root-system family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    D,
    E,
}

/// One summand `X_n(N)` of a root lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
    pub rescale: u32,
}

impl Component {
    pub fn new(family: Family, rank: usize) -> Component {
        Component {
            family,
            rank,
            rescale: 1,
        }
    }

    pub fn a(rank: usize) -> Component {
        Component::new(Family::A, rank)
    }

    pub fn d(rank: usize) -> Component {
        Component::new(Family::D, rank)
    }

    pub fn e(rank: usize) -> Component {
        Component::new(Family::E, rank)
    }

    pub fn rescaled(self, n: u32) -> Component {
        Component { rescale: n, ..self }
    }

    pub fn is_e8(&self) -> bool {
        self.family == Family::E && self.rank == 8
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.rank == 0 {
            return Err("rank must be positive".into());
        }
        if self.rescale == 0 {
            return Err("rescale must be positive".into());
        }
        if self.family == Family::E && !(6..=8).contains(&self.rank) {
            return Err(format!("E{} does not exist", self.rank));
        }
        Ok(())
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        write!(f, "{fam}{}", self.rank)?;
        if self.rescale != 1 {
            write!(f, "({})", self.rescale)?;
        }
        Ok(())
    }
}

/// A direct sum of components, in the order given by the user.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct RootLatticeSpec {
    pub components: Vec<Component>,
}

impl RootLatticeSpec {
    pub fn new(components: Vec<Component>) -> RootLatticeSpec {
        RootLatticeSpec { components }
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components sorted by (family, rank, rescale); used for matching tables.
    pub fn sorted(&self) -> RootLatticeSpec {
        let mut c = self.components.clone();
        c.sort();
        RootLatticeSpec { components: c }
    }

    pub fn concat(&self, other: &RootLatticeSpec) -> RootLatticeSpec {
        let mut c = self.components.clone();
        c.extend(other.components.iter().copied());
        RootLatticeSpec { components: c }
    }
}

impl fmt::Display for RootLatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let mut j = i;
            while j < self.components.len() && self.components[j] == c {
                j += 1;
            }
            if j - i > 1 {
                parts.push(format!("{}{}", j - i, c));
            } else {
                parts.push(c.to_string());
            }
            i = j;
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for RootLatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<RootLatticeSpec> {
        let bad = |reason: &str| Error::InvalidSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() || t == "0" {
            return Ok(RootLatticeSpec::default());
        }
        let mut components = Vec::new();
        for term in t.split('+') {
            let bytes = term.as_bytes();
            let mut i = 0;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mult: usize = if i == 0 {
                1
            } else {
                term[..i].parse().map_err(|_| bad("bad multiplicity"))?
            };
            if mult == 0 {
                return Err(bad("zero multiplicity"));
            }
            let family = match bytes.get(i) {
                Some(b'A') => Family::A,
                Some(b'D') => Family::D,
                Some(b'E') => Family::E,
                _ => return Err(bad("expected family letter A, D or E")),
            };
            let rest = &term[i + 1..];
            let (rank_str, rescale) = match rest.split_once('(') {
                Some((r, sc)) => {
                    let sc = sc.strip_suffix(')').ok_or_else(|| bad("unclosed rescale"))?;
                    (r, sc.parse::<u32>().map_err(|_| bad("bad rescale"))?)
                }
                None => (rest, 1),
            };
            let rank: usize = rank_str.parse().map_err(|_| bad("bad rank"))?;
            let c = Component { family, rank, rescale };
            c.validate().map_err(|r| bad(&r))?;
            components.extend(std::iter::repeat_n(c, mult));
        }
        Ok(RootLatticeSpec { components })
    }
}

/// A lattice given as `L0:L1`; `0:L1` means empty `L0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SplitSpec {
    pub l0: RootLatticeSpec,
    pub l1: RootLatticeSpec,
}

impl SplitSpec {
    pub fn whole(&self) -> RootLatticeSpec {
        self.l0.concat(&self.l1)
    }
}

impl fmt::Display for SplitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.l0, self.l1)
    }
}

impl FromStr for SplitSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<SplitSpec> {
        match s.split_once(':') {
            Some((a, b)) => Ok(SplitSpec {
                l0: a.parse()?,
                l1: b.parse()?,
            }),
            None => Ok(SplitSpec {
                l0: RootLatticeSpec::default(),
                l1: s.parse()?,
            }),
        }
    }
}

/// Weight and index of a generator of the Weyl-invariant weak Jacobi forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bigrading {
    pub weight: i64,
    pub index: i64,
    /// The `D_n` generator anti-invariant under the odd sign change.
    pub psi: bool,
}

impl Bigrading {
    pub const fn new(weight: i64, index: i64) -> Bigrading {
        Bigrading {
            weight,
            index,
            psi: false,
        }
    }
}

/// Root-system invariants of one component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    pub component: Component,
    pub coxeter_number: i64,
    pub root_count: i64,
    pub weyl_bigradings: Vec<Bigrading>,
}

/// Weights and indices of the generators of `J^{w,W(R)}_{*,R,*}`.
pub fn table1_bigradings(family: Family, n: usize) -> Vec<Bigrading> {
    let n = n as i64;
    match family {
        Family::A => std::iter::once(Bigrading::new(0, 1))
            .chain((2..=n + 1).map(|s| Bigrading::new(-s, 1)))
            .collect(),
        Family::D => {
            let mut v = vec![Bigrading::new(0, 1), Bigrading::new(-2, 1), Bigrading::new(-4, 1)];
            v.push(Bigrading {
                weight: -n,
                index: 1,
                psi: true,
            });
            v.extend((3..n).map(|s| Bigrading::new(-2 * s, 2)));
            v
        }
        Family::E if n == 6 => [(0, 1), (-2, 1), (-5, 1), (-6, 2), (-8, 2), (-9, 2), (-12, 3)]
            .iter()
            .map(|&(k, m)| Bigrading::new(k, m))
            .collect(),
        Family::E if n == 7 => [
            (0, 1),
            (-2, 1),
            (-6, 2),
            (-8, 2),
            (-10, 2),
            (-12, 3),
            (-14, 3),
            (-18, 4),
        ]
        .iter()
        .map(|&(k, m)| Bigrading::new(k, m))
        .collect(),
        Family::E => Vec::new(),
    }
}

/// Invariants of a component: Coxeter number `h = roots / rank`, root count,
/// and the generator bigradings.
pub fn component_invariants(c: Component) -> ComponentInfo {
    let base = Component { rescale: 1, ..c };
    let gram = component_gram(base);
    let roots = enumerate_quadratic(&to_q_matrix(&gram), &Q::from(2))
        .into_iter()
        .filter(|(_, n)| *n == Q::from(2))
        .count() as i64;
    ComponentInfo {
        component: c,
        coxeter_number: roots / c.rank as i64,
        root_count: roots,
        weyl_bigradings: table1_bigradings(c.family, c.rank),
    }
}

/// Basis rows of a component in its ambient coordinates, when it has one.
pub fn ambient_basis(c: Component) -> Option<Vec<Vec<i64>>> {
    match c.family {
        Family::A => {
            let n = c.rank;
            Some(
                (0..n)
                    .map(|j| {
                        let mut v = vec![0; n + 1];
                        v[j + 1] = 1;
                        v[j] = -1;
                        v
                    })
                    .collect(),
            )
        }
        Family::D => {
            let n = c.rank;
            if n == 1 {
                return Some(vec![vec![2]]);
            }
            let mut rows: Vec<Vec<i64>> = (0..n - 1)
                .map(|j| {
                    let mut v = vec![0; n];
                    v[j] = 1;
                    v[j + 1] = -1;
                    v
                })
                .collect();
            let mut last = vec![0; n];
            last[n - 2] = 1;
            last[n - 1] = 1;
            rows.push(last);
            Some(rows)
        }
        Family::E => None,
    }
}

fn bourbaki_e(n: usize) -> Vec<Vec<i64>> {
    let mut edges = vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)];
    for k in 7..=n {
        edges.push((k - 1, k));
    }
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        g[a - 1][b - 1] = -1;
        g[b - 1][a - 1] = -1;
    }
    g
}

/// Gram matrix of one (rescaled) component in its fixed basis.
pub fn component_gram(c: Component) -> Vec<Vec<i64>> {
    let s = c.rescale as i64;
    let g = match ambient_basis(c) {
        Some(rows) => rows
            .iter()
            .map(|r| rows.iter().map(|t| r.iter().zip(t).map(|(a, b)| a * b).sum()).collect())
            .collect(),
        None => bourbaki_e(c.rank),
    };
    g.into_iter()
        .map(|r: Vec<i64>| r.into_iter().map(|x| x * s).collect())
        .collect()
}

/// An element of `L ⊗ Q` in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DualVector {
    pub coords: Vec<Q>,
}

impl DualVector {
    pub fn zero(rank: usize) -> DualVector {
        DualVector {
            coords: vec![Q::zero(); rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Q::is_zero)
    }

    pub fn neg(&self) -> DualVector {
        DualVector {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A class of `L'/L` with its minimal norm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetClass {
    /// Lexicographically least vector of minimal norm in the class.
    pub representative: DualVector,
    pub delta: Q,
    /// Basis coordinates reduced into `[0, 1)`; identifies the class.
    pub key: Vec<Q>,
}

/// An even positive-definite lattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lattice {
    pub spec: RootLatticeSpec,
    pub gram: Vec<Vec<i64>>,
    pub det: i64,
    pub components: Vec<ComponentInfo>,
    /// First basis index of each component.
    pub offsets: Vec<usize>,
    #[serde(skip)]
    gram_inv: Vec<Vec<Q>>,
}

fn to_q_matrix(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().map(|&x| Q::from(x)).collect()).collect()
}

/// Inverse of a nonsingular rational matrix by Gauss-Jordan elimination.
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Leading principal minors of an integer matrix (fraction-free elimination).
pub fn leading_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            out.push(0);
            out.extend(std::iter::repeat_n(0, n - k - 1));
            return out;
        }
        out.push(a[k][k]);
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    out
}

/// Elementary divisors of an integer matrix (diagonal of its Smith normal form).
pub fn elementary_divisors(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out = Vec::new();
    for t in 0..n {
        loop {
            // pivot: smallest nonzero absolute value in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                out.extend(std::iter::repeat_n(0, n - t));
                return out;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let f = a[i][t] / p;
                if f != 0 {
                    for j in t..n {
                        a[i][j] -= f * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let f = a[t][j] / p;
                if f != 0 {
                    for i in t..n {
                        a[i][j] -= f * a[i][t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // p must divide the rest of the block
            let mut fixed = true;
            'outer: for i in t + 1..n {
                for j in t + 1..n {
                    if a[i][j] % p != 0 {
                        for k in t..n {
                            a[t][k] += a[i][k];
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                out.push(p.abs() as i64);
                break;
            }
        }
    }
    out
}

/// All integer vectors `x` with `x^T M x <= bound`, with their norms.
///
/// `M` must be positive definite. The enumeration is exhaustive and exact.
pub fn enumerate_quadratic(m: &[Vec<Q>], bound: &Q) -> Vec<(Vec<i64>, Q)> {
    let r = m.len();
    if r == 0 {
        return vec![(Vec::new(), Q::zero())];
    }
    if bound.is_negative() {
        return Vec::new();
    }
    // x^T M x = Σ_i d_i (x_i + Σ_{j>i} u_ij x_j)^2
    let mut d = vec![Q::zero(); r];
    let mut u = vec![vec![Q::zero(); r]; r];
    for i in 0..r {
        let mut s = m[i][i].clone();
        for k in 0..i {
            s -= &u[k][i] * &u[k][i] * &d[k];
        }
        d[i] = s;
        for j in i + 1..r {
            let mut s = m[i][j].clone();
            for k in 0..i {
                s -= &u[k][i] * &u[k][j] * &d[k];
            }
            u[i][j] = &s / &d[i];
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; r];
    let fits = |i: usize, xi: i64, center: &Q, rem: &Q| -> Option<Q> {
        let t = Q::from(xi) - center;
        let v = &d[i] * &t * &t;
        if &v <= rem {
            Some(v)
        } else {
            None
        }
    };
    // candidates per level, generated lazily by walking outward from the center
    struct Level {
        center: Q,
        rem: Q,
        start: i64,
        next_up: i64,
        next_down: i64,
        up_done: bool,
        down_done: bool,
        toggle: bool,
    }
    let mk_level = |center: Q, rem: Q| -> Level {
        let start = {
            let f = center.floor();
            let fl: i64 = num_traits::ToPrimitive::to_i64(&f).expect("coordinate overflow");
            // nearest integer
            if (Q::from(fl) - &center).abs() <= (Q::from(fl + 1) - &center).abs() {
                fl
            } else {
                fl + 1
            }
        };
        Level {
            center,
            rem,
            start,
            next_up: start,
            next_down: start - 1,
            up_done: false,
            down_done: false,
            toggle: true,
        }
    };
    let center_of = |i: usize, x: &[i64]| -> Q {
        let mut c = Q::zero();
        for j in i + 1..r {
            if x[j] != 0 {
                c -= &u[i][j] * Q::from(x[j]);
            }
        }
        c
    };
    let mut stack: Vec<Level> = vec![mk_level(Q::zero(), bound.clone())];
    let mut partial: Vec<Q> = vec![Q::zero(); r + 1];
    loop {
        let depth = stack.len();
        let i = r - depth;
        let lvl = stack.last_mut().unwrap();
        let mut chosen: Option<(i64, Q)> = None;
        while !(lvl.up_done && lvl.down_done) {
            let go_up = (lvl.toggle && !lvl.up_done) || lvl.down_done;
            lvl.toggle = !lvl.toggle;
            if go_up {
                let xi = lvl.next_up;
                match fits(i, xi, &lvl.center, &lvl.rem) {
                    Some(v) => {
                        lvl.next_up += 1;
                        chosen = Some((xi, v));
                        break;
                    }
                    None => lvl.up_done = true,
                }
            } else {
                let xi = lvl.next_down;
                match fits(i, xi, &lvl.center, &lvl.rem) {
                    Some(v) => {
                        lvl.next_down -= 1;
                        chosen = Some((xi, v));
                        break;
                    }
                    None => lvl.down_done = true,
                }
            }
        }
        let _ = lvl.start;
        match chosen {
            None => {
                stack.pop();
                if stack.is_empty() {
                    break;
                }
            }
            Some((xi, v)) => {
                x[i] = xi;
                let rem = &stack.last().unwrap().rem - &v;
                partial[i] = &partial[i + 1] + &v;
                if i == 0 {
                    out.push((x.clone(), partial[0].clone()));
                } else {
                    for xj in x.iter_mut().take(i) {
                        *xj = 0;
                    }
                    let c = center_of(i - 1, &x);
                    stack.push(mk_level(c, rem));
                }
            }
        }
    }
    out
}

impl Lattice {
    /// Builds the lattice of a spec from the fixed coordinate models.
    pub fn build(spec: &RootLatticeSpec) -> Result<Lattice> {
        for c in &spec.components {
            c.validate().map_err(|r| Error::InvalidSpec {
                spec: spec.to_string(),
                reason: r,
            })?;
        }
        let n = spec.rank();
        let mut gram = vec![vec![0i64; n]; n];
        let mut offsets = Vec::new();
        let mut off = 0;
        for c in &spec.components {
            offsets.push(off);
            let g = component_gram(*c);
            for i in 0..c.rank {
                for j in 0..c.rank {
                    gram[off + i][off + j] = g[i][j];
                }
            }
            off += c.rank;
        }
        let minors = leading_minors(&gram);
        if minors.iter().any(|&m| m <= 0) {
            return Err(Error::InvalidSpec {
                spec: spec.to_string(),
                reason: "Gram matrix not positive definite".into(),
            });
        }
        let det = minors.last().copied().unwrap_or(1) as i64;
        let gram_inv = invert(&to_q_matrix(&gram)).expect("nonsingular Gram");
        let components = spec.components.iter().map(|c| component_invariants(*c)).collect();
        Ok(Lattice {
            spec: spec.clone(),
            gram,
            det,
            components,
            offsets,
            gram_inv,
        })
    }

    pub fn parse(s: &str) -> Result<Lattice> {
        Lattice::build(&s.parse()?)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram_inverse(&self) -> &[Vec<Q>] {
        &self.gram_inv
    }

    /// The same lattice with its form multiplied by `t`.
    pub fn rescaled(&self, t: u32) -> Result<Lattice> {
        let comps = self.spec.components.iter().map(|c| c.rescaled(c.rescale * t)).collect();
        Lattice::build(&RootLatticeSpec::new(comps))
    }

    /// `⟨x, y⟩` for basis-coordinate vectors.
    pub fn inner(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if self.gram[i][j] != 0 && !yj.is_zero() {
                    s += xi * yj * Q::from(self.gram[i][j]);
                }
            }
        }
        s
    }

    pub fn norm(&self, v: &DualVector) -> Q {
        self.inner(&v.coords, &v.coords)
    }

    /// Pairings `⟨v, e_j⟩` with the basis.
    pub fn pairings(&self, v: &DualVector) -> Vec<Q> {
        (0..self.rank())
            .map(|j| {
                v.coords
                    .iter()
                    .enumerate()
                    .map(|(i, x)| x * Q::from(self.gram[i][j]))
                    .sum()
            })
            .collect()
    }

    /// The vector whose pairings with the basis are `p`.
    pub fn from_pairings(&self, p: &[Q]) -> DualVector {
        DualVector {
            coords: self
                .gram_inv
                .iter()
                .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum())
                .collect(),
        }
    }

    /// Norm of the vector with pairing vector `p`, i.e. `p^T G^{-1} p`.
    pub fn norm_of_pairings(&self, p: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, pi) in p.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, pj) in p.iter().enumerate() {
                if !pj.is_zero() {
                    s += pi * pj * &self.gram_inv[i][j];
                }
            }
        }
        s
    }

    pub fn is_dual(&self, v: &DualVector) -> bool {
        self.pairings(v).iter().all(Q::is_integer)
    }

    /// Pairings with the basis of a vector given in the ambient coordinates
    /// of component `idx` (supported for the `A` and `D` models).
    pub fn ambient_pairings(&self, idx: usize, v: &[Q]) -> Option<Vec<Q>> {
        let c = self.spec.components[idx];
        let rows = ambient_basis(c)?;
        let mut p = vec![Q::zero(); self.rank()];
        let s = Q::from(c.rescale as i64);
        for (j, row) in rows.iter().enumerate() {
            let dot: Q = row.iter().zip(v).map(|(a, b)| Q::from(*a) * b).sum();
            p[self.offsets[idx] + j] = dot * &s;
        }
        Some(p)
    }

    /// Vectors of `L` (or `L'` when `in_dual`) with norm at most `bound`,
    /// sorted by norm and then lexicographically by coordinates.
    pub fn short_vectors(&self, in_dual: bool, bound: &Q) -> Vec<DualVector> {
        let mut out: Vec<(Q, DualVector)> = if in_dual {
            enumerate_quadratic(&self.gram_inv, bound)
                .into_iter()
                .map(|(p, n)| {
                    let p: Vec<Q> = p.into_iter().map(Q::from).collect();
                    (n, self.from_pairings(&p))
                })
                .collect()
        } else {
            enumerate_quadratic(&to_q_matrix(&self.gram), bound)
                .into_iter()
                .map(|(x, n)| {
                    (
                        n,
                        DualVector {
                            coords: x.into_iter().map(Q::from).collect(),
                        },
                    )
                })
                .collect()
        };
        out.sort();
        out.into_iter().map(|(_, v)| v).collect()
    }

    /// Elementary divisors of the Gram matrix; their product is `|L'/L|`.
    pub fn elementary_divisors(&self) -> Vec<i64> {
        elementary_divisors(&self.gram)
    }

    /// All classes of `L'/L` with certified minimal norms.
    ///
    /// Classes of an orthogonal sum are products of component classes, and
    /// minimal norms add, so only the components are enumerated.
    pub fn discriminant_classes(&self) -> Vec<CosetClass> {
        let mut acc: Vec<CosetClass> = vec![CosetClass {
            representative: DualVector::zero(0),
            delta: Q::zero(),
            key: vec![],
        }];
        for c in &self.spec.components {
            let part = component_classes(*c);
            let mut next = Vec::with_capacity(acc.len() * part.len());
            for a in &acc {
                for b in &part {
                    let mut rep = a.representative.coords.clone();
                    rep.extend(b.representative.coords.iter().cloned());
                    let mut key = a.key.clone();
                    key.extend(b.key.iter().cloned());
                    next.push(CosetClass {
                        representative: DualVector { coords: rep },
                        delta: &a.delta + &b.delta,
                        key,
                    });
                }
            }
            acc = next;
        }
        acc.sort_by(|a, b| a.key.cmp(&b.key));
        acc
    }

    /// `δ_L`, the largest minimal norm of a discriminant class.
    pub fn delta(&self) -> Q {
        self.spec.components.iter().map(|c| component_delta(*c)).sum()
    }

    /// The class of a dual vector, as coordinates reduced into `[0, 1)`.
    pub fn class_key(&self, v: &DualVector) -> Vec<Q> {
        v.coords.iter().map(frac).collect()
    }

    /// Roots (norm-2 vectors) of the lattice.
    pub fn roots(&self) -> Vec<DualVector> {
        let two = Q::from(2);
        self.short_vectors(false, &two)
            .into_iter()
            .filter(|v| self.norm(v) == two)
            .collect()
    }
}

fn frac(x: &Q) -> Q {
    x - Q::from(x.floor())
}

fn component_classes(c: Component) -> Vec<CosetClass> {
    let gram = component_gram(c);
    let lat = Lattice {
        spec: RootLatticeSpec::new(vec![c]),
        det: *leading_minors(&gram).last().unwrap() as i64,
        gram_inv: invert(&to_q_matrix(&gram)).unwrap(),
        gram,
        components: Vec::new(),
        offsets: vec![0],
    };
    let target = lat.det as usize;
    let mut bound = Q::from(2);
    loop {
        let mut best: BTreeMap<Vec<Q>, (Q, DualVector)> = BTreeMap::new();
        for (p, n) in enumerate_quadratic(&lat.gram_inv, &bound) {
            let p: Vec<Q> = p.into_iter().map(Q::from).collect();
            let v = lat.from_pairings(&p);
            let key = lat.class_key(&v);
            match best.get(&key) {
                Some((bn, bv)) if (bn, bv) <= (&n, &v) => {}
                _ => {
                    best.insert(key, (n, v));
                }
            }
        }
        if best.len() == target {
            return best
                .into_iter()
                .map(|(key, (delta, representative))| CosetClass {
                    representative,
                    delta,
                    key,
                })
                .collect();
        }
        bound = &bound * &Q::from(2);
    }
}

fn component_delta(c: Component) -> Q {
    component_classes(c)
        .into_iter()
        .map(|k| k.delta)
        .max()
        .unwrap_or_else(Q::zero)
}
