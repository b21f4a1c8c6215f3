//! Exact integer linear algebra: Smith and Hermite normal forms, lattices and their quotients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<Vec<BigInt>>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, e: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.e[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[Vec<i64>]) -> Self {
        assert!(data.len() == rows && data.iter().all(|r| r.len() == cols), "ragged matrix");
        Mat { rows, cols, e: data.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for (i, row) in self.e.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                t.e[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.e[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    if !o.e[k][j].is_zero() {
                        out.e[i][j] += a * &o.e[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        self.e.iter().map(|r| r.iter().zip(x).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// Columns `cols` of `self` followed by those of `o`.
    pub fn hcat(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows, "row mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols + o.cols,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect(),
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.e {
            r.swap(a, b);
        }
    }

    /// `row_i ← row_i − q·row_t`.
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        let (src, dst) = if i < t {
            let (lo, hi) = self.e.split_at_mut(t);
            (&hi[0], &mut lo[i])
        } else {
            let (lo, hi) = self.e.split_at_mut(i);
            (&lo[t], &mut hi[0])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
    }

    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        for r in &mut self.e {
            if !r[t].is_zero() {
                let v = q * &r[t];
                r[j] -= v;
            }
        }
    }
}

/// Determinant by fraction-free elimination.
pub fn det(m: &Mat) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.e.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank by fraction-free elimination.
pub fn rank(m: &Mat) -> usize {
    let mut a = m.e.clone();
    let mut r = 0;
    for c in 0..m.cols {
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        for i in r + 1..m.rows {
            if !a[i][c].is_zero() {
                let (f, g) = (a[r][c].clone(), a[i][c].clone());
                for j in c..m.cols {
                    let v = &a[i][j] * &f - &a[r][j] * &g;
                    a[i][j] = v;
                }
            }
        }
        r += 1;
    }
    r
}

/// `D = U·A·V` with `D` diagonal, nonnegative, each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: Mat,
    pub u: Mat,
    pub v: Mat,
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.e[i][i].clone()).collect()
    }
}

pub fn smith_normal_form(a: &Mat) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = Mat::identity(m);
    let mut v = Mat::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d.e[i][j].is_zero() && best.is_none_or(|(bi, bj)| d.e[i][j].abs() < d.e[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.e.swap(t, pi);
        u.e.swap(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // move the smallest entry of row t / column t to the pivot
            let mut small = (t, t);
            for i in t + 1..m {
                if !d.e[i][t].is_zero() && d.e[i][t].abs() < d.e[small.0][small.1].abs() {
                    small = (i, t);
                }
            }
            for j in t + 1..n {
                if !d.e[t][j].is_zero() && d.e[t][j].abs() < d.e[small.0][small.1].abs() {
                    small = (t, j);
                }
            }
            if small.0 != t {
                d.e.swap(t, small.0);
                u.e.swap(t, small.0);
            } else if small.1 != t {
                d.swap_cols(t, small.1);
                v.swap_cols(t, small.1);
            }
            let p = d.e[t][t].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if !d.e[i][t].is_zero() {
                    let q = &d.e[i][t] / &p;
                    d.row_sub(i, t, &q);
                    u.row_sub(i, t, &q);
                    dirty |= !d.e[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !d.e[t][j].is_zero() {
                    let q = &d.e[t][j] / &p;
                    d.col_sub(j, t, &q);
                    v.col_sub(j, t, &q);
                    dirty |= !d.e[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.e[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.row_sub(t, i, &minus_one);
                    u.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.e[t][t].is_negative() {
            for x in d.e[t].iter_mut().chain(u.e[t].iter_mut()) {
                *x = -&*x;
            }
        }
        t += 1;
    }
    Snf { d, u, v, rank: t }
}

/// Finitely generated abelian group `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k`, `1 < d₁ | d₂ | … | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbGroupPresentation {
    pub rank: usize,
    #[serde(with = "bigints")]
    pub torsion: Vec<BigInt>,
}

mod bigints {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect()
    }
}

impl AbGroupPresentation {
    pub fn zero() -> Self {
        AbGroupPresentation { rank: 0, torsion: vec![] }
    }

    /// The group `ℤ^free ⊕ ⊕ ℤ/dᵢ` for arbitrary `dᵢ`; zeros count as free summands.
    pub fn from_cyclic(free: usize, orders: &[BigInt]) -> Self {
        let mut rank = free;
        let mut diag = Vec::new();
        for d in orders {
            if d.is_zero() {
                rank += 1;
            } else if !d.abs().is_one() {
                diag.push(d.abs());
            }
        }
        let k = diag.len();
        let mut m = Mat::zeros(k, k);
        for (i, d) in diag.into_iter().enumerate() {
            m.e[i][i] = d;
        }
        let torsion = smith_normal_form(&m).diagonal().into_iter().filter(|d| !d.is_one()).collect();
        AbGroupPresentation { rank, torsion }
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let all: Vec<BigInt> = self.torsion.iter().chain(&o.torsion).cloned().collect();
        Self::from_cyclic(self.rank + o.rank, &all)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Row Hermite normal form of the lattice spanned by `gens`: pivots positive, entries above a
/// pivot reduced into `[0, pivot)`, no zero rows.
pub fn hnf(dim: usize, gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    for r in &rows {
        assert_eq!(r.len(), dim, "generator of the wrong length");
    }
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..dim {
        // gcd-combine every remaining row into one pivot row at column c
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(rows.len());
        for r in rows {
            if r[c].is_zero() {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let g = p[c].extended_gcd(&r[c]);
                    let (a, b) = (p[c].clone() / &g.gcd, r[c].clone() / &g.gcd);
                    let np: Vec<BigInt> = p.iter().zip(&r).map(|(x, y)| &g.x * x + &g.y * y).collect();
                    let nr: Vec<BigInt> = p.iter().zip(&r).map(|(x, y)| &a * y - &b * x).collect();
                    if nr.iter().any(|x| !x.is_zero()) {
                        rest.push(nr);
                    }
                    pivot = Some(np);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = pivot {
            if p[c].is_negative() {
                p.iter_mut().for_each(|x| *x = -&*x);
            }
            out.push(p);
        }
    }
    // reduce above pivots
    for i in 0..out.len() {
        let c = out[i].iter().position(|x| !x.is_zero()).expect("nonzero row");
        let p = out[i][c].clone();
        for k in 0..i {
            let q = out[k][c].div_floor(&p);
            if !q.is_zero() {
                let src = out[i].clone();
                for (d, s) in out[k].iter_mut().zip(&src) {
                    *d -= &q * s;
                }
            }
        }
    }
    out
}

/// A subgroup of `ℤ^dim`, stored by its Hermite basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub dim: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn span(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        Lattice { dim, basis: hnf(dim, gens) }
    }

    pub fn full(dim: usize) -> Self {
        Self::scaled(dim, &BigInt::one())
    }

    /// `kℤ^dim`.
    pub fn scaled(dim: usize, k: &BigInt) -> Self {
        let gens: Vec<Vec<BigInt>> =
            (0..dim).map(|i| (0..dim).map(|j| if i == j { k.clone() } else { BigInt::zero() }).collect()).collect();
        Self::span(dim, &gens)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn sum(&self, o: &Lattice) -> Lattice {
        assert_eq!(self.dim, o.dim);
        let gens: Vec<_> = self.basis.iter().chain(&o.basis).cloned().collect();
        Lattice::span(self.dim, &gens)
    }

    pub fn image(&self, m: &Mat) -> Lattice {
        assert_eq!(m.cols, self.dim);
        let gens: Vec<_> = self.basis.iter().map(|b| m.apply(b)).collect();
        Lattice::span(m.rows, &gens)
    }

    /// Coordinates of `x` in the Hermite basis, if `x` lies in the lattice.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut r = x.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let c = b.iter().position(|v| !v.is_zero()).expect("nonzero basis row");
            if r[..c].iter().any(|v| !v.is_zero()) {
                return None;
            }
            let (q, rem) = r[c].div_rem(&b[c]);
            if !rem.is_zero() {
                return None;
            }
            for (d, s) in r.iter_mut().zip(b) {
                *d -= &q * s;
            }
            coords.push(q);
        }
        r.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, o: &Lattice) -> bool {
        o.basis.iter().all(|b| self.coordinates(b).is_some())
    }

    /// `{x : m·x ∈ target}`.
    pub fn preimage(m: &Mat, target: &Lattice) -> Lattice {
        assert_eq!(m.rows, target.dim);
        let n = m.cols;
        // kernel of [m | -Gᵀ]
        let mut g = Mat::zeros(m.rows, target.rank());
        for (j, b) in target.basis.iter().enumerate() {
            for (i, x) in b.iter().enumerate() {
                g.e[i][j] = -x;
            }
        }
        let kernel = kernel_basis(&m.hcat(&g));
        let gens: Vec<Vec<BigInt>> = kernel.into_iter().map(|v| v[..n].to_vec()).collect();
        Lattice::span(n, &gens)
    }

    /// `self ∩ {x : m·x ∈ target}`.
    pub fn restrict_preimage(&self, m: &Mat, target: &Lattice) -> Lattice {
        // parametrize by coordinates in the Hermite basis
        let mut b = Mat::zeros(self.dim, self.rank());
        for (j, row) in self.basis.iter().enumerate() {
            for (i, x) in row.iter().enumerate() {
                b.e[i][j] = x.clone();
            }
        }
        let coords = Lattice::preimage(&m.mul(&b), target);
        coords.image(&b)
    }

    /// `self / sub` for `sub ⊆ self`.
    pub fn quotient(&self, sub: &Lattice) -> Result<AbGroupPresentation> {
        let r = self.rank();
        let mut c = Mat::zeros(sub.rank(), r);
        for (i, b) in sub.basis.iter().enumerate() {
            c.e[i] = self
                .coordinates(b)
                .ok_or_else(|| Error::Validation("quotient of lattices that are not nested".into()))?;
        }
        let snf = smith_normal_form(&c);
        Ok(AbGroupPresentation::from_cyclic(r - snf.rank, &snf.diagonal()))
    }
}

/// A basis of `{x : a·x = 0}`.
pub fn kernel_basis(a: &Mat) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    (snf.rank..a.cols).map(|j| (0..a.cols).map(|i| snf.v.e[i][j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn snf_of_coprime_diagonal_merges_factors() {
        let a = Mat::from_i64(2, 2, &[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![b(1), b(6)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    }

    #[test]
    fn snf_of_empty_and_zero_matrices() {
        assert_eq!(smith_normal_form(&Mat::zeros(0, 3)).rank, 0);
        let s = smith_normal_form(&Mat::zeros(2, 3));
        assert_eq!(s.rank, 0);
        assert!(s.d.is_zero());
    }

    #[test]
    fn presentation_display_and_merge() {
        let g = AbGroupPresentation::from_cyclic(1, &[b(4), b(6), b(1), b(0)]);
        assert_eq!(g.to_string(), "Z^2 ⊕ Z/2 ⊕ Z/12");
        assert_eq!(AbGroupPresentation::zero().to_string(), "0");
        assert_eq!(g.order(), None);
    }

    #[test]
    fn quotient_requires_nesting() {
        let z = Lattice::scaled(2, &b(2));
        let full = Lattice::full(2);
        assert!(z.quotient(&full).is_err());
        assert_eq!(full.quotient(&z).unwrap().to_string(), "Z/2 ⊕ Z/2");
    }

    #[test]
    fn preimage_mod_k() {
        // {x : 2x ∈ 4ℤ} = 2ℤ
        let m = Mat::from_i64(1, 1, &[vec![2]]);
        let p = Lattice::preimage(&m, &Lattice::scaled(1, &b(4)));
        assert_eq!(p, Lattice::scaled(1, &b(2)));
    }

    #[test]
    fn hnf_is_canonical_for_different_generators() {
        let a = Lattice::span(2, &[vec![b(2), b(1)], vec![b(0), b(3)]]);
        let c = Lattice::span(2, &[vec![b(2), b(4)], vec![b(2), b(1)], vec![b(4), b(5)]]);
        assert_eq!(a, c);
    }
}
