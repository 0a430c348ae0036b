//! Sparse multivariate truncated power series.
//!
//! Terms are keyed by exponent vectors and iterated in graded-lex order:
//! ascending total degree, and within one degree `x_1 > x_2 > ... > x_n`
//! (so `x_1^2` precedes `x_1 x_2`). Terms of degree above the truncation are
//! dropped eagerly and zero coefficients are never stored, so structural
//! equality is series equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{Coeff, CoeffRing};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial { degree: exps.iter().sum(), exps: exps.into_boxed_slice() }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    /// All monomials of total degree `d` in `nvars` variables, in graded-lex order.
    pub fn all_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
        fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, left: u32, i: usize) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial::new(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(out, cur, left - e, i + 1);
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial::new(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(&mut out, &mut vec![0; nvars], d as u32, 0);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    nvars: usize,
    trunc: usize,
    ring: CoeffRing,
    terms: BTreeMap<Monomial, Coeff>,
}

impl TruncSeries {
    pub fn zero(nvars: usize, trunc: usize, ring: CoeffRing) -> TruncSeries {
        TruncSeries { nvars, trunc, ring, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, trunc: usize, c: Coeff) -> TruncSeries {
        let mut s = TruncSeries::zero(nvars, trunc, c.ring());
        s.add_term(Monomial::one(nvars), c);
        s
    }

    pub fn one(nvars: usize, trunc: usize, ring: CoeffRing) -> TruncSeries {
        let c = ring.one();
        TruncSeries::constant(nvars, trunc, c)
    }

    /// The variable `x_{i+1}` (zero-based `i`).
    pub fn var(nvars: usize, trunc: usize, ring: CoeffRing, i: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(nvars, trunc, ring.clone());
        s.add_term(Monomial::var(nvars, i), ring.one());
        s
    }

    pub fn from_terms<I>(nvars: usize, trunc: usize, ring: CoeffRing, terms: I) -> Result<TruncSeries>
    where
        I: IntoIterator<Item = (Vec<u32>, Coeff)>,
    {
        let mut s = TruncSeries::zero(nvars, trunc, ring);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
            }
            if !c.in_ring(&s.ring) {
                return Err(Error::Incompatible(format!("coefficient in {} for series over {}", c.ring(), s.ring)));
            }
            s.add_term(Monomial::new(e), c);
        }
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Coeff {
        self.terms.get(&Monomial::new(exps.to_vec())).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&vec![0; self.nvars])
    }

    /// Lowest degree carrying a nonzero term.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::degree)
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if m.degree() > self.trunc || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &TruncSeries) -> Result<()> {
        if self.nvars != other.nvars || self.trunc != other.trunc || self.ring != other.ring {
            return Err(Error::Incompatible(format!(
                "({} vars, trunc {}, {}) vs ({} vars, trunc {}, {})",
                self.nvars, self.trunc, self.ring, other.nvars, other.trunc, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncSeries {
        self.map_coeffs(|c| -c)
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &TruncSeries) -> TruncSeries {
        let mut out = TruncSeries::zero(self.nvars, self.trunc, self.ring.clone());
        for (ma, ca) in &self.terms {
            let room = self.trunc - ma.degree();
            for (mb, cb) in &other.terms {
                // keys are degree-ascending
                if mb.degree() > room {
                    break;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> TruncSeries {
        let mut acc = TruncSeries::one(self.nvars, self.trunc, self.ring.clone());
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    pub fn scale(&self, c: &Coeff) -> TruncSeries {
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_int(&self, k: &BigInt) -> TruncSeries {
        self.map_coeffs(|x| x.scale_int(k))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> TruncSeries {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let c = f(c);
                (!c.is_zero()).then(|| (m.clone(), c))
            })
            .collect();
        TruncSeries { nvars: self.nvars, trunc: self.trunc, ring: self.ring.clone(), terms }
    }

    /// Same series with a different truncation (cutting or padding with zeros).
    pub fn with_trunc(&self, trunc: usize) -> TruncSeries {
        let terms =
            self.terms.iter().filter(|(m, _)| m.degree() <= trunc).map(|(m, c)| (m.clone(), c.clone())).collect();
        TruncSeries { nvars: self.nvars, trunc, ring: self.ring.clone(), terms }
    }

    /// Substitutes `args[i]` for `x_{i+1}`, truncating every intermediate product.
    pub fn compose(&self, args: &[TruncSeries]) -> Result<TruncSeries> {
        if args.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: args.len() });
        }
        let Some(first) = args.first() else {
            return Err(Error::Incompatible("composition needs at least one argument".into()));
        };
        for a in args {
            first.check_compatible(a)?;
            if !a.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
        }
        if self.ring != first.ring {
            return Err(Error::Incompatible(format!("outer series over {}, arguments over {}", self.ring, first.ring)));
        }
        if self.trunc < first.trunc {
            return Err(Error::Incompatible(format!(
                "outer series truncated at {} cannot feed truncation {}",
                self.trunc, first.trunc
            )));
        }
        let mut max_exp = vec![0u32; self.nvars];
        for m in self.terms.keys() {
            for (mx, &e) in max_exp.iter_mut().zip(m.exponents()) {
                *mx = (*mx).max(e.min(first.trunc as u32));
            }
        }
        let powers: Vec<Vec<TruncSeries>> = args
            .iter()
            .zip(&max_exp)
            .map(|(a, &mx)| {
                let mut p = vec![TruncSeries::one(a.nvars, a.trunc, a.ring.clone())];
                for _ in 0..mx {
                    let next = p.last().unwrap().mul_unchecked(a);
                    p.push(next);
                }
                p
            })
            .collect();
        let terms: Vec<(&[u32], &Coeff)> =
            self.terms.iter().filter(|(m, _)| m.degree() <= first.trunc).map(|(m, c)| (m.exponents(), c)).collect();
        Ok(compose_level(&terms, 0, &powers, first))
    }

    pub fn homogeneous_component(&self, d: usize) -> Result<TruncSeries> {
        if d > self.trunc {
            return Err(Error::BeyondTruncation { degree: d, trunc: self.trunc });
        }
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        Ok(TruncSeries { nvars: self.nvars, trunc: self.trunc, ring: self.ring.clone(), terms })
    }

    /// gcd of all integer coefficients; 0 for the zero series.
    pub fn content_gcd(&self) -> Result<BigInt> {
        if self.ring.is_dyadic() {
            return Err(Error::DyadicContent);
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&c.content()?);
            if g.is_one() {
                break;
            }
        }
        Ok(g)
    }

    pub fn mod2_reduce(&self) -> Result<TruncSeries> {
        let mut out = TruncSeries::zero(self.nvars, self.trunc, self.ring.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mod2_reduce()?);
        }
        Ok(out)
    }

    /// `self / m` if every integer coefficient is divisible by `m`.
    pub fn exact_div_int(&self, m: &BigInt) -> Result<Option<TruncSeries>> {
        let mut out = TruncSeries::zero(self.nvars, self.trunc, self.ring.clone());
        for (mono, c) in &self.terms {
            match c.exact_div_int(m)? {
                Some(q) => out.add_term(mono.clone(), q),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Replaces parameters by integers, landing in the integer ring.
    pub fn specialize(&self, values: &[BigInt]) -> Result<TruncSeries> {
        let mut out = TruncSeries::zero(self.nvars, self.trunc, CoeffRing::Integers);
        for (m, c) in &self.terms {
            let v = match c {
                Coeff::Int(n) => n.clone(),
                Coeff::Poly(p) => {
                    if p.names().len() != values.len() {
                        return Err(Error::DimensionMismatch { expected: p.names().len(), found: values.len() });
                    }
                    p.evaluate(values)
                }
                Coeff::Dyadic(_) => return Err(Error::Incompatible("cannot specialize a dyadic series".into())),
            };
            out.add_term(m.clone(), Coeff::Int(v));
        }
        Ok(out)
    }

    /// Integer coefficients of the monomials in `basis`, in that order.
    pub fn integer_coordinates(&self, basis: &[Monomial]) -> Result<Vec<BigInt>> {
        if self.ring != CoeffRing::Integers {
            return Err(Error::ParametersNotSpecialized);
        }
        Ok(basis.iter().map(|m| self.terms.get(m).and_then(Coeff::as_int).cloned().unwrap_or_default()).collect())
    }

    /// Multiplies by a monomial, keeping the truncation.
    pub fn mul_monomial(&self, m: &Monomial) -> TruncSeries {
        let mut out = TruncSeries::zero(self.nvars, self.trunc, self.ring.clone());
        for (k, c) in &self.terms {
            out.add_term(k.mul(m), c.clone());
        }
        out
    }

    /// First monomial, in graded-lex order, where the two series disagree.
    pub fn first_difference(&self, other: &TruncSeries) -> Option<Monomial> {
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find(|m| self.terms.get(*m) != other.terms.get(*m)).cloned()
    }
}

fn compose_level(
    terms: &[(&[u32], &Coeff)],
    level: usize,
    powers: &[Vec<TruncSeries>],
    shape: &TruncSeries,
) -> TruncSeries {
    let mut out = TruncSeries::zero(shape.nvars, shape.trunc, shape.ring.clone());
    if level == powers.len() {
        for (_, c) in terms {
            out.add_term(Monomial::one(shape.nvars), (*c).clone());
        }
        return out;
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &Coeff)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[level]).or_default().push((e, c));
    }
    let last = level + 1 == powers.len();
    for (e, group) in groups {
        let Some(pw) = powers[level].get(e as usize) else { continue };
        let piece = if last {
            let mut c = shape.ring.zero();
            for (_, x) in &group {
                c = &c + *x;
            }
            pw.scale(&c)
        } else {
            let inner = compose_level(&group, level + 1, powers, shape);
            if e == 0 {
                inner
            } else {
                pw.mul_unchecked(&inner)
            }
        };
        for (m, c) in piece.terms {
            out.add_term(m, c);
        }
    }
    out
}

/// `e_r` of the given series.
pub fn elementary_symmetric(vars: &[TruncSeries], r: usize) -> Result<TruncSeries> {
    if r > vars.len() {
        return Err(Error::OutOfRange { index: r, max: vars.len() });
    }
    let Some(first) = vars.first() else {
        return Err(Error::Incompatible("elementary_symmetric needs at least one series".into()));
    };
    for v in vars {
        first.check_compatible(v)?;
    }
    let mut e = vec![TruncSeries::one(first.nvars, first.trunc, first.ring.clone())];
    for v in vars {
        let mut next = e.clone();
        next.push(e.last().unwrap().mul_unchecked(v));
        for j in (1..e.len()).rev() {
            next[j] = e[j].add(&e[j - 1].mul_unchecked(v))?;
        }
        e = next;
    }
    Ok(e.swap_remove(r))
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.trunc + 1);
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        write!(f, " + O({})", self.trunc + 1)
    }
}

struct TermsJson<'a>(&'a BTreeMap<Monomial, Coeff>);

impl Serialize for TermsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'b> {
            exp: &'b [u32],
            coeff: String,
        }
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (m, c) in self.0 {
            seq.serialize_element(&Term { exp: m.exponents(), coeff: c.to_string() })?;
        }
        seq.end()
    }
}

impl TruncSeries {
    /// Serializes the body fields into an already-open JSON map.
    pub(crate) fn serialize_fields<M: SerializeMap>(&self, map: &mut M) -> std::result::Result<(), M::Error> {
        map.serialize_entry("vars", &self.nvars)?;
        map.serialize_entry("trunc", &self.trunc)?;
        map.serialize_entry("terms", &TermsJson(&self.terms))
    }
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        self.serialize_fields(&mut map)?;
        map.end()
    }
}
