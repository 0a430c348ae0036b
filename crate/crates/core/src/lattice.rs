//! Integer lattices in fixed monomial coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

mod checks;

pub use checks::{
    annihilator_check, cor63_check, deformation_bound, eta_bound_check, kernel_model, tau, tau_bound, tau_check,
    zeta_bound_check,
};

pub type Matrix = Vec<Vec<BigInt>>;

/// Reduces `row` at the pivot columns of `rows[start..]`, in increasing order.
fn reduce_row(row: &mut [BigInt], rows: &[Vec<BigInt>], pivots: &[usize], start: usize) {
    for k in start..rows.len() {
        let p = pivots[k];
        if row[p].is_zero() {
            continue;
        }
        let q = row[p].div_floor(&rows[k][p]);
        if q.is_zero() {
            continue;
        }
        for (x, y) in row[p..].iter_mut().zip(&rows[k][p..]) {
            *x -= &q * y;
        }
    }
}

fn make_positive(row: &mut [BigInt], p: usize) {
    if row[p].is_negative() {
        for x in row[p..].iter_mut() {
            *x = -&*x;
        }
    }
}

/// Row-style Hermite normal form: nonzero rows only, pivots strictly
/// increasing and positive, entries above each pivot in `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>], ncols: usize) -> Matrix {
    let mut echelon: Matrix = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for r in rows {
        assert_eq!(r.len(), ncols, "row length must equal the column count");
        let mut v = r.clone();
        loop {
            let Some(p) = v.iter().position(|x| !x.is_zero()) else { break };
            match pivots.binary_search(&p) {
                Err(pos) => {
                    make_positive(&mut v, p);
                    reduce_row(&mut v, &echelon, &pivots, pos);
                    echelon.insert(pos, v);
                    pivots.insert(pos, p);
                    break;
                }
                Ok(k) => {
                    let a = echelon[k][p].clone();
                    let b = v[p].clone();
                    if b.is_multiple_of(&a) {
                        let q = &b / &a;
                        for (x, y) in v[p..].iter_mut().zip(&echelon[k][p..]) {
                            *x -= &q * y;
                        }
                    } else {
                        let e = a.extended_gcd(&b);
                        let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
                        let old = std::mem::take(&mut echelon[k]);
                        let new_row: Vec<BigInt> = old.iter().zip(&v).map(|(r, w)| &e.x * r + &e.y * w).collect();
                        v = old.iter().zip(&v).map(|(r, w)| &ag * w - &bg * r).collect();
                        echelon[k] = new_row;
                        make_positive(&mut echelon[k], p);
                        let mut row = std::mem::take(&mut echelon[k]);
                        reduce_row(&mut row, &echelon, &pivots, k + 1);
                        echelon[k] = row;
                    }
                    reduce_row(&mut v, &echelon, &pivots, k + 1);
                }
            }
        }
    }
    for j in 0..echelon.len() {
        let mut row = std::mem::take(&mut echelon[j]);
        reduce_row(&mut row, &echelon, &pivots, j + 1);
        echelon[j] = row;
    }
    echelon
}

pub fn transpose(m: &[Vec<BigInt>], ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], bcols: usize) -> Matrix {
    a.iter().map(|row| (0..bcols).map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect()).collect()
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            a.swap(piv, k);
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
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// `U · M · V = diag(d)` with `U`, `V` unimodular; `v_inv = V^{-1}`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix,
    pub diag: Vec<BigInt>,
    pub v: Matrix,
    pub v_inv: Matrix,
}

pub fn snf(m: &[Vec<BigInt>], ncols: usize) -> Snf {
    let nrows = m.len();
    let mut a = m.to_vec();
    let mut u = identity(nrows);
    let mut v = identity(ncols);
    let mut vi = identity(ncols);

    fn row_sub(a: &mut Matrix, i: usize, t: usize, q: &BigInt) {
        let (src, dst) = if i < t {
            let (lo, hi) = a.split_at_mut(t);
            (&hi[0], &mut lo[i])
        } else {
            let (lo, hi) = a.split_at_mut(i);
            (&lo[t], &mut hi[0])
        };
        for (x, y) in dst.iter_mut().zip(src.iter()) {
            *x -= q * y;
        }
    }
    // column j -= q column t, mirrored on V and V^{-1}
    let col_sub = |a: &mut Matrix, v: &mut Matrix, vi: &mut Matrix, j: usize, t: usize, q: &BigInt| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            let s = q * &row[t];
            row[j] -= s;
        }
        let add: Vec<BigInt> = vi[j].iter().map(|y| q * y).collect();
        for (x, y) in vi[t].iter_mut().zip(add) {
            *x += y;
        }
    };
    let col_swap = |a: &mut Matrix, v: &mut Matrix, vi: &mut Matrix, i: usize, j: usize| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };

    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        u.swap(t, bi);
        col_swap(&mut a, &mut v, &mut vi, t, bj);

        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, t, &q);
                row_sub(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, &mut v, &mut vi, j, t, &q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..nrows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..ncols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    u.swap(t, best.0);
                } else if best.1 != t {
                    col_swap(&mut a, &mut v, &mut vi, t, best.1);
                }
                continue;
            }
            // divisibility: fold in a row whose entries the pivot does not divide
            let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let m1 = BigInt::from(-1);
                    row_sub(&mut a, t, i, &m1);
                    row_sub(&mut u, t, i, &m1);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let diag = (0..nrows.min(ncols)).map(|i| a[i][i].clone()).collect();
    Snf { u, diag, v, v_inv: vi }
}

/// Least `tau > 0` with `tau · A ⊆ B`, or infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tau {
    Finite(BigInt),
    Infinite,
}

impl Tau {
    pub fn divides(&self, bound: &BigInt) -> bool {
        match self {
            Tau::Finite(t) => bound.is_multiple_of(t),
            Tau::Infinite => false,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Tau::Finite(t) if t.is_one())
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Tau::Finite(t) => Some(t),
            Tau::Infinite => None,
        }
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Finite(t) => write!(f, "{t}"),
            Tau::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Tau {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tau::Finite(t) => match u64::try_from(t) {
                Ok(v) => s.serialize_u64(v),
                Err(_) => s.collect_str(t),
            },
            Tau::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentReport {
    pub tau: Tau,
    /// A generator of the source whose coordinates realize the worst denominator.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_vec")]
    pub witness: Option<Vec<BigInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_trunc: Option<usize>,
}

fn ser_opt_vec<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Option<Vec<String>> = v.as_ref().map(|v| v.iter().map(ToString::to_string).collect());
    strs.serialize(s)
}

/// A sublattice of `Z^ambient_dim`, stored by its Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    ambient_dim: usize,
    basis: String,
    hnf: Matrix,
}

impl IntLattice {
    pub fn from_rows(ambient_dim: usize, rows: &[Vec<BigInt>], basis: impl Into<String>) -> Result<IntLattice> {
        if let Some(r) = rows.iter().find(|r| r.len() != ambient_dim) {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: r.len() });
        }
        Ok(IntLattice { ambient_dim, basis: basis.into(), hnf: hnf(rows, ambient_dim) })
    }

    pub fn from_i64_rows(ambient_dim: usize, rows: &[&[i64]]) -> Result<IntLattice> {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntLattice::from_rows(ambient_dim, &rows, "")
    }

    pub fn zero(ambient_dim: usize, basis: impl Into<String>) -> IntLattice {
        IntLattice { ambient_dim, basis: basis.into(), hnf: Vec::new() }
    }

    pub fn full(ambient_dim: usize, basis: impl Into<String>) -> IntLattice {
        IntLattice { ambient_dim, basis: basis.into(), hnf: identity(ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis_label(&self) -> &str {
        &self.basis
    }

    pub fn hnf(&self) -> &Matrix {
        &self.hnf
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn is_zero(&self) -> bool {
        self.hnf.is_empty()
    }

    /// Same lattice, same coordinates; only the HNF is compared.
    pub fn same_lattice(&self, other: &IntLattice) -> bool {
        self.ambient_dim == other.ambient_dim && self.hnf == other.hnf
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: n });
        }
        Ok(())
    }

    pub fn scaled(&self, k: &BigInt) -> IntLattice {
        let rows: Matrix = self.hnf.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        IntLattice { ambient_dim: self.ambient_dim, basis: self.basis.clone(), hnf: hnf(&rows, self.ambient_dim) }
    }

    /// Coordinates of `v` in the HNF basis, if `v` lies in the rational span.
    fn rational_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let mut rest: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut coords = Vec::with_capacity(self.hnf.len());
        for row in &self.hnf {
            let p = row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero");
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let c = &rest[p] / BigRational::from_integer(row[p].clone());
            if !c.is_zero() {
                for (r, x) in rest[p..].iter_mut().zip(&row[p..]) {
                    *r -= &c * BigRational::from_integer(x.clone());
                }
            }
            coords.push(c);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        self.check_dim(v.len())?;
        Ok(self.rational_coordinates(v).is_some_and(|c| c.iter().all(|x| x.is_integer())))
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> Result<bool> {
        Ok(self.multiplier_from(other)?.tau.is_one())
    }

    /// The least `tau` with `tau · source ⊆ self`.
    pub fn multiplier_from(&self, source: &IntLattice) -> Result<ExponentReport> {
        self.check_dim(source.ambient_dim)?;
        let mut tau = BigInt::one();
        let mut witness = None;
        for g in &source.hnf {
            let Some(coords) = self.rational_coordinates(g) else {
                return Ok(ExponentReport { tau: Tau::Infinite, witness: Some(g.clone()), certified_trunc: None });
            };
            let den = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let next = tau.lcm(&den);
            if next != tau || (witness.is_none() && !den.is_one()) {
                witness = Some(g.clone());
            }
            tau = next;
        }
        Ok(ExponentReport { tau: Tau::Finite(tau), witness, certified_trunc: None })
    }

    /// `V_Q ∩ Z^N` for the rational span `V_Q` of this lattice.
    pub fn saturation(&self) -> IntLattice {
        let r = self.hnf.len();
        if r == 0 {
            return self.clone();
        }
        // columns of C form a basis of the column lattice, so C^{-1} H is primitive
        let ct = hnf(&transpose(&self.hnf, self.ambient_dim), r);
        let c = transpose(&ct, r);
        let mut b: Matrix = Vec::with_capacity(r);
        for i in 0..r {
            let mut row = self.hnf[i].clone();
            for (k, bk) in b.iter().enumerate() {
                let cik = &c[i][k];
                if !cik.is_zero() {
                    for (x, y) in row.iter_mut().zip(bk) {
                        *x -= cik * y;
                    }
                }
            }
            for x in row.iter_mut() {
                debug_assert!(x.is_multiple_of(&c[i][i]));
                *x = &*x / &c[i][i];
            }
            b.push(row);
        }
        IntLattice { ambient_dim: self.ambient_dim, basis: self.basis.clone(), hnf: hnf(&b, self.ambient_dim) }
    }

    /// `{v ∈ ambient : 2^k v ∈ self for some k}`.
    pub fn saturate2(&self, ambient: &IntLattice) -> Result<IntLattice> {
        ambient.check_dim(self.ambient_dim)?;
        let k = ambient.rank();
        let mut x: Matrix = Vec::with_capacity(self.rank());
        for g in &self.hnf {
            let coords = ambient.rational_coordinates(g).ok_or(Error::NotContained)?;
            if coords.iter().any(|c| !c.is_integer()) {
                return Err(Error::NotContained);
            }
            x.push(coords.into_iter().map(|c| c.to_integer()).collect());
        }
        if x.is_empty() {
            return Ok(self.clone());
        }
        let s = snf(&x, k);
        let mut rows = Vec::new();
        for (i, d) in s.diag.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let odd = d >> d.trailing_zeros().unwrap_or(0);
            let w: Vec<BigInt> = s.v_inv[i].iter().map(|y| y * &odd).collect();
            rows.push(w);
        }
        let in_ambient = mat_mul(&rows, &ambient.hnf, self.ambient_dim);
        IntLattice::from_rows(self.ambient_dim, &in_ambient, self.basis.clone())
    }

    /// Keeps the coordinates listed in `cols`, in that order.
    pub fn project(&self, cols: &[usize], basis: impl Into<String>) -> IntLattice {
        let rows: Matrix = self.hnf.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        IntLattice { ambient_dim: cols.len(), basis: basis.into(), hnf: hnf(&rows, cols.len()) }
    }

    /// Sum of two lattices in the same coordinates.
    pub fn sum(&self, other: &IntLattice) -> Result<IntLattice> {
        self.check_dim(other.ambient_dim)?;
        let rows: Matrix = self.hnf.iter().chain(&other.hnf).cloned().collect();
        IntLattice::from_rows(self.ambient_dim, &rows, self.basis.clone())
    }

    /// Nonzero elementary divisors in `Z^ambient_dim`.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        if self.hnf.is_empty() {
            return Vec::new();
        }
        snf(&self.hnf, self.ambient_dim).diag.into_iter().filter(|d| !d.is_zero()).collect()
    }
}

impl Serialize for IntLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let rows: Vec<Vec<String>> = self.hnf.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("basis", &self.basis)?;
        m.serialize_entry("ambient_dim", &self.ambient_dim)?;
        m.serialize_entry("hnf", &rows)?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn lat(n: usize, rows: &[&[i64]]) -> IntLattice {
        IntLattice::from_i64_rows(n, rows).unwrap()
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(&m(&[&[2, 1], &[0, 1]]), 2), m(&[&[2, 0], &[0, 1]]));
        assert_eq!(hnf(&m(&[&[1, 0], &[0, 1]]), 2), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(hnf(&m(&[&[2, 4]]), 2), m(&[&[2, 4]]));
        assert_eq!(hnf(&m(&[&[0, 0], &[-3, 6], &[4, -8]]), 2), m(&[&[1, -2]]));
        assert_eq!(hnf(&m(&[&[4, 1, 3], &[6, 2, 1]]), 3), m(&[&[2, 0, 5], &[0, 1, -7]]));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&m(&[&[2, 0], &[0, 3]]), 2).diag, [1, 6].map(BigInt::from));
        assert_eq!(snf(&m(&[&[2, 4], &[6, 8]]), 2).diag, [2, 4].map(BigInt::from));
        assert_eq!(snf(&m(&[&[0, 0], &[0, 0]]), 2).diag, [0, 0].map(BigInt::from));
    }

    #[test]
    fn containment() {
        let l = lat(2, &[&[2, 0], &[0, 1]]);
        let v = |a: i64, b: i64| vec![BigInt::from(a), BigInt::from(b)];
        assert!(l.contains(&v(2, 1)).unwrap());
        assert!(!l.contains(&v(1, 0)).unwrap());
        assert!(l.contains(&v(0, 0)).unwrap());
        assert!(l.contains(&[BigInt::one()]).is_err());
    }

    #[test]
    fn multipliers() {
        let l = lat(3, &[&[1, 2, 0], &[0, 3, 1]]);
        let two = l.scaled(&BigInt::from(2));
        assert_eq!(two.multiplier_from(&l).unwrap().tau, Tau::Finite(BigInt::from(2)));
        assert_eq!(l.multiplier_from(&l).unwrap().tau, Tau::Finite(BigInt::one()));
        assert_eq!(l.multiplier_from(&IntLattice::zero(3, "")).unwrap().tau, Tau::Finite(BigInt::one()));
        assert_eq!(IntLattice::zero(3, "").multiplier_from(&l).unwrap().tau, Tau::Infinite);
        assert!(l.multiplier_from(&IntLattice::zero(2, "")).is_err());
    }

    #[test]
    fn saturate2_examples() {
        let z2 = IntLattice::full(2, "");
        assert!(lat(2, &[&[2, 0], &[0, 2]]).saturate2(&z2).unwrap().same_lattice(&z2));
        assert!(lat(2, &[&[2, 0], &[0, 3]]).saturate2(&z2).unwrap().same_lattice(&lat(2, &[&[1, 0], &[0, 3]])));
        let l = lat(2, &[&[1, 0], &[0, 3]]);
        assert!(l.saturate2(&z2).unwrap().same_lattice(&l));
        assert!(matches!(lat(2, &[&[1, 0]]).saturate2(&lat(2, &[&[2, 0]])), Err(Error::NotContained)));
    }

    #[test]
    fn saturation_examples() {
        let l = lat(3, &[&[2, 4, 6], &[0, 3, 3]]);
        assert!(l.saturation().same_lattice(&lat(3, &[&[1, 0, 1], &[0, 1, 1]])));
        assert!(lat(2, &[&[6, 4]]).saturation().same_lattice(&lat(2, &[&[3, 2]])));
    }

    #[test]
    fn json_shape() {
        let mut l = lat(2, &[&[2, 1], &[0, 1]]);
        l.basis = "graded-lex degree 1".into();
        let j = serde_json::to_value(&l).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"basis": "graded-lex degree 1", "ambient_dim": 2, "hnf": [["2", "0"], ["0", "1"]]})
        );
        let r = ExponentReport { tau: Tau::Infinite, witness: None, certified_trunc: Some(8) };
        assert_eq!(serde_json::to_value(&r).unwrap(), serde_json::json!({"tau": "infinite", "certified_trunc": 8}));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(max_r: usize, max_c: usize, e: i64) -> impl Strategy<Value = (Matrix, usize)> {
            (1..=max_r, 1..=max_c).prop_flat_map(move |(r, c)| {
                prop::collection::vec(prop::collection::vec(-e..=e, c), r).prop_map(move |rows| {
                    (rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(), c)
                })
            })
        }

        fn is_hnf(h: &Matrix) -> bool {
            let mut last = None;
            for (k, row) in h.iter().enumerate() {
                let Some(p) = row.iter().position(|x| !x.is_zero()) else { return false };
                if last.is_some_and(|l| p <= l) || !row[p].is_positive() {
                    return false;
                }
                for other in &h[..k] {
                    if other[p].is_negative() || other[p] >= row[p] {
                        return false;
                    }
                }
                last = Some(p);
            }
            true
        }

        proptest! {
            #[test]
            fn hnf_is_canonical((rows, c) in matrix(6, 5, 9)) {
                let h = hnf(&rows, c);
                prop_assert!(is_hnf(&h));
                prop_assert_eq!(hnf(&h, c), h.clone());
                let a = IntLattice::from_rows(c, &rows, "").unwrap();
                for r in &rows {
                    prop_assert!(a.contains(r).unwrap());
                }
                let b = IntLattice::from_rows(c, &h, "").unwrap();
                prop_assert!(a.same_lattice(&b));
                prop_assert!(a.contains_lattice(&b).unwrap() && b.contains_lattice(&a).unwrap());
            }

            #[test]
            fn snf_is_correct((rows, c) in matrix(7, 7, 20)) {
                let s = snf(&rows, c);
                let d = mat_mul(&mat_mul(&s.u, &rows, c), &s.v, c);
                for (i, row) in d.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                        prop_assert_eq!(x, &expect);
                    }
                }
                prop_assert!(determinant(&s.u).abs().is_one());
                prop_assert!(determinant(&s.v).abs().is_one());
                prop_assert_eq!(mat_mul(&s.v, &s.v_inv, c), identity(c));
                for w in s.diag.windows(2) {
                    prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
                    prop_assert!(!w[0].is_negative());
                }
            }

            #[test]
            fn multiplier_is_least((a, c) in matrix(4, 4, 6), k in 1i64..7) {
                let la = IntLattice::from_rows(c, &a, "").unwrap();
                let scaled: Matrix = a.iter().enumerate()
                    .map(|(i, r)| r.iter().map(|x| x * BigInt::from(if i % 2 == 0 { k } else { 1 })).collect())
                    .collect();
                let lb = IntLattice::from_rows(c, &scaled, "").unwrap();
                let rep = lb.multiplier_from(&la).unwrap();
                let Tau::Finite(t) = rep.tau else { return Err(TestCaseError::fail("finite expected")) };
                prop_assert!(lb.contains_lattice(&la.scaled(&t)).unwrap());
                for p in [2u32, 3, 5, 7] {
                    let p = BigInt::from(p);
                    if t.is_multiple_of(&p) {
                        prop_assert!(!lb.contains_lattice(&la.scaled(&(&t / &p))).unwrap());
                    }
                }
            }

            #[test]
            fn saturate2_laws((rows, c) in matrix(4, 4, 12)) {
                let l = IntLattice::from_rows(c, &rows, "").unwrap();
                let z = IntLattice::full(c, "");
                let s = l.saturate2(&z).unwrap();
                prop_assert!(s.contains_lattice(&l).unwrap());
                prop_assert!(s.saturate2(&z).unwrap().same_lattice(&s));
                let odd = l.elementary_divisors().iter().all(|d| d.is_odd());
                prop_assert_eq!(s.same_lattice(&l), odd);
                let t = l.multiplier_from(&s).unwrap().tau;
                let t = t.finite().unwrap().clone();
                prop_assert!((&t & (&t - 1u32)).is_zero());
                let full = l.saturation();
                prop_assert!(full.contains_lattice(&s).unwrap());
                prop_assert_eq!(full.rank(), l.rank());
                prop_assert!(full.elementary_divisors().iter().all(One::is_one));
            }
        }
    }
}
