//! Exact coefficient arithmetic: integers, dyadic rationals and integer
//! polynomials in named parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest `e` with `2^e | n`.
pub fn two_adic_valuation(n: &BigInt) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(n.trailing_zeros().unwrap_or(0))
}

/// Which ring a [`Coeff`] lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Integers,
    /// `Z[1/2]`.
    Dyadic,
    /// `Z[p_1, .., p_k]` for the named parameters.
    ParamPoly(Arc<[String]>),
}

impl CoeffRing {
    pub fn params<S: AsRef<str>>(names: &[S]) -> Result<CoeffRing> {
        if names.is_empty() {
            return Err(Error::InvalidParameters("parameter list is empty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in names {
            let n = n.as_ref();
            if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidParameters(format!("bad parameter name {n:?}")));
            }
            if !seen.insert(n.to_string()) {
                return Err(Error::InvalidParameters(format!("duplicate parameter {n:?}")));
            }
        }
        Ok(CoeffRing::ParamPoly(names.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    pub fn zero(&self) -> Coeff {
        self.from_int(0)
    }

    pub fn one(&self) -> Coeff {
        self.from_int(1)
    }

    pub fn from_int<T: Into<BigInt>>(&self, n: T) -> Coeff {
        let n = n.into();
        match self {
            CoeffRing::Integers => Coeff::Int(n),
            CoeffRing::Dyadic => Coeff::Dyadic(Dyadic::new(n, 0)),
            CoeffRing::ParamPoly(names) => Coeff::Poly(ParamPoly::constant(names.clone(), n)),
        }
    }

    /// The `i`-th parameter as a ring element.
    pub fn param(&self, name: &str) -> Result<Coeff> {
        match self {
            CoeffRing::ParamPoly(names) => {
                let idx = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::InvalidParameters(format!("unknown parameter {name:?}")))?;
                let mut exps = vec![0u32; names.len()];
                exps[idx] = 1;
                let mut terms = BTreeMap::new();
                terms.insert(ParamMono(exps), BigInt::one());
                Ok(Coeff::Poly(ParamPoly { names: names.clone(), terms }))
            }
            _ => Err(Error::InvalidParameters(format!("ring has no parameter {name:?}"))),
        }
    }

    pub fn is_dyadic(&self) -> bool {
        matches!(self, CoeffRing::Dyadic)
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::Dyadic => write!(f, "Z[1/2]"),
            CoeffRing::ParamPoly(names) => write!(f, "Z[{}]", names.join(",")),
        }
    }
}

/// `num / 2^exp`, with `num` odd whenever `exp > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u32) -> Dyadic {
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp as u64) as u32;
        Dyadic { num: num >> tz, exp: exp - tz }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn two_exponent(&self) -> u32 {
        self.exp
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        (self.exp == 0).then(|| self.num.clone())
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        Dyadic::new(a + b, e)
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }
}

/// Exponent vector over the parameters; ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamMono(pub Vec<u32>);

impl ParamMono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for ParamMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ParamMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer polynomial in named parameters. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct ParamPoly {
    names: Arc<[String]>,
    terms: BTreeMap<ParamMono, BigInt>,
}

impl PartialEq for ParamPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for ParamPoly {}

impl std::hash::Hash for ParamPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.names.hash(state);
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl ParamPoly {
    fn constant(names: Arc<[String]>, c: BigInt) -> ParamPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ParamMono(vec![0; names.len()]), c);
        }
        ParamPoly { names, terms }
    }

    fn same_ring(&self, other: &ParamPoly) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMono, &BigInt)> {
        self.terms.iter()
    }

    fn map_coeffs(&self, f: impl Fn(&BigInt) -> BigInt) -> ParamPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let c = f(c);
                (!c.is_zero()).then(|| (m.clone(), c))
            })
            .collect();
        ParamPoly { names: self.names.clone(), terms }
    }

    fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        ParamPoly { names: self.names.clone(), terms }
    }

    fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut terms: BTreeMap<ParamMono, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ParamMono(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                *terms.entry(m).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        ParamPoly { names: self.names.clone(), terms }
    }

    /// Substitutes integer values for every parameter.
    pub fn evaluate(&self, values: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in values.iter().zip(&m.0) {
                t *= num_traits::pow(v.clone(), e as usize);
            }
            acc += t;
        }
        acc
    }
}

/// An exact coefficient. Arithmetic between different rings panics; the
/// series layer checks rings before reaching here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Int(BigInt),
    Dyadic(Dyadic),
    Poly(ParamPoly),
}

impl Coeff {
    pub fn ring(&self) -> CoeffRing {
        match self {
            Coeff::Int(_) => CoeffRing::Integers,
            Coeff::Dyadic(_) => CoeffRing::Dyadic,
            Coeff::Poly(p) => CoeffRing::ParamPoly(p.names.clone()),
        }
    }

    pub fn in_ring(&self, ring: &CoeffRing) -> bool {
        match (self, ring) {
            (Coeff::Int(_), CoeffRing::Integers) | (Coeff::Dyadic(_), CoeffRing::Dyadic) => true,
            (Coeff::Poly(p), CoeffRing::ParamPoly(names)) => Arc::ptr_eq(&p.names, names) || p.names == *names,
            _ => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Int(n) => n.is_zero(),
            Coeff::Dyadic(d) => d.num.is_zero(),
            Coeff::Poly(p) => p.terms.is_empty(),
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Coeff::Int(n) => Some(n),
            _ => None,
        }
    }

    /// Reduces every integer coefficient into `{0, 1}`.
    pub fn mod2_reduce(&self) -> Result<Coeff> {
        let two = BigInt::from(2);
        match self {
            Coeff::Int(n) => Ok(Coeff::Int(n.mod_floor(&two))),
            Coeff::Poly(p) => Ok(Coeff::Poly(p.map_coeffs(|c| c.mod_floor(&two)))),
            Coeff::Dyadic(_) => Err(Error::DyadicMod2),
        }
    }

    /// `self / m` when every integer coefficient is divisible by `m`.
    pub fn exact_div_int(&self, m: &BigInt) -> Result<Option<Coeff>> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Coeff::Int(n) => n.is_multiple_of(m).then(|| Coeff::Int(n / m)),
            Coeff::Poly(p) => {
                p.terms.values().all(|c| c.is_multiple_of(m)).then(|| Coeff::Poly(p.map_coeffs(|c| c / m)))
            }
            Coeff::Dyadic(d) => {
                // divisible in Z[1/2] iff the odd part of m divides num
                let v = m.trailing_zeros().unwrap_or(0) as u32;
                let odd = m >> v;
                d.num.is_multiple_of(&odd).then(|| Coeff::Dyadic(Dyadic::new(&d.num / &odd, d.exp + v)))
            }
        })
    }

    /// gcd of the integer coefficients (0 for zero).
    pub fn content(&self) -> Result<BigInt> {
        match self {
            Coeff::Int(n) => Ok(n.abs()),
            Coeff::Poly(p) => Ok(p.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))),
            Coeff::Dyadic(_) => Err(Error::DyadicContent),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Coeff {
        match self {
            Coeff::Int(n) => Coeff::Int(n * k),
            Coeff::Dyadic(d) => Coeff::Dyadic(Dyadic::new(&d.num * k, d.exp)),
            Coeff::Poly(p) => Coeff::Poly(p.map_coeffs(|c| c * k)),
        }
    }

    fn mismatch(&self, other: &Coeff) -> ! {
        panic!("mixing coefficient rings {} and {}", self.ring(), other.ring())
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Int(a), Coeff::Int(b)) => Coeff::Int(a + b),
            (Coeff::Dyadic(a), Coeff::Dyadic(b)) => Coeff::Dyadic(a.add(b)),
            (Coeff::Poly(a), Coeff::Poly(b)) if a.same_ring(b) => Coeff::Poly(a.add(b)),
            _ => self.mismatch(rhs),
        }
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Int(a), Coeff::Int(b)) => Coeff::Int(a * b),
            (Coeff::Dyadic(a), Coeff::Dyadic(b)) => Coeff::Dyadic(a.mul(b)),
            (Coeff::Poly(a), Coeff::Poly(b)) if a.same_ring(b) => Coeff::Poly(a.mul(b)),
            _ => self.mismatch(rhs),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Int(n) => Coeff::Int(-n),
            Coeff::Dyadic(d) => Coeff::Dyadic(Dyadic { num: -&d.num, exp: d.exp }),
            Coeff::Poly(p) => Coeff::Poly(p.map_coeffs(|c| -c)),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Int(n) => write!(f, "{n}"),
            Coeff::Dyadic(d) if d.exp == 0 => write!(f, "{}", d.num),
            Coeff::Dyadic(d) => write!(f, "{}/2^{}", d.num, d.exp),
            Coeff::Poly(p) => {
                if p.terms.is_empty() {
                    return write!(f, "0");
                }
                // highest monomial first
                for (i, (m, c)) in p.terms.iter().rev().enumerate() {
                    let neg = c.is_negative();
                    let abs = c.abs();
                    if i == 0 {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { "-" } else { "+" })?;
                    }
                    let factors: Vec<String> =
                        m.0.iter()
                            .zip(p.names.iter())
                            .filter(|(&e, _)| e > 0)
                            .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
                            .collect();
                    if factors.is_empty() {
                        write!(f, "{abs}")?;
                    } else if abs.is_one() {
                        write!(f, "{}", factors.join("*"))?;
                    } else {
                        write!(f, "{abs}*{}", factors.join("*"))?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Coeff {
        Coeff::Int(BigInt::from(n))
    }

    fn ring_a() -> CoeffRing {
        CoeffRing::params(&["a11", "a22"]).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(two_adic_valuation(&BigInt::from(8)).unwrap(), 3);
        assert_eq!(two_adic_valuation(&BigInt::from(12)).unwrap(), 2);
        // [5/2]! = 2
        assert_eq!(two_adic_valuation(&BigInt::from(2)).unwrap(), 1);
        assert_eq!(two_adic_valuation(&BigInt::from(-40)).unwrap(), 3);
        assert!(matches!(two_adic_valuation(&BigInt::zero()), Err(Error::ZeroValuation)));
    }

    #[test]
    fn mod2_examples() {
        assert_eq!(int(6).mod2_reduce().unwrap(), int(0));
        assert_eq!(int(-1).mod2_reduce().unwrap(), int(1));
        let r = ring_a();
        let a11 = r.param("a11").unwrap();
        let a22 = r.param("a22").unwrap();
        let p = &(&r.from_int(3) * &a11) + &(&r.from_int(2) * &a22);
        assert_eq!(p.mod2_reduce().unwrap(), a11);
        let d = Coeff::Dyadic(Dyadic::new(BigInt::from(1), 1));
        assert!(d.mod2_reduce().is_err());
    }

    #[test]
    fn exact_div_examples() {
        let two = BigInt::from(2);
        assert_eq!(int(4).exact_div_int(&two).unwrap(), Some(int(2)));
        assert_eq!(int(3).exact_div_int(&two).unwrap(), None);
        let r = ring_a();
        let a11 = r.param("a11").unwrap();
        let p = &r.from_int(2) * &a11;
        assert_eq!(p.exact_div_int(&two).unwrap(), Some(a11));
        assert!(int(3).exact_div_int(&BigInt::zero()).is_err());
        let half = Coeff::Dyadic(Dyadic::new(BigInt::from(3), 0)).exact_div_int(&BigInt::from(6));
        assert_eq!(half.unwrap(), Some(Coeff::Dyadic(Dyadic::new(BigInt::from(1), 1))));
    }

    #[test]
    fn dyadic_lowest_terms() {
        let d = Dyadic::new(BigInt::from(12), 3);
        assert_eq!(d.numerator(), &BigInt::from(3));
        assert_eq!(d.two_exponent(), 1);
        let z = Dyadic::new(BigInt::zero(), 5);
        assert_eq!(z.two_exponent(), 0);
        let s = Coeff::Dyadic(Dyadic::new(BigInt::from(1), 1));
        assert_eq!(&s + &s, CoeffRing::Dyadic.one());
    }

    #[test]
    fn param_ring_validation() {
        assert!(CoeffRing::params::<&str>(&[]).is_err());
        assert!(CoeffRing::params(&["a", "a"]).is_err());
        assert!(CoeffRing::params(&[""]).is_err());
    }

    #[test]
    fn poly_display_is_canonical() {
        let r = ring_a();
        let a11 = r.param("a11").unwrap();
        let a22 = r.param("a22").unwrap();
        let p = &(&(&a11 * &a11) - &(&r.from_int(3) * &a22)) + &r.from_int(1);
        assert_eq!(p.to_string(), "a11^2 - 3*a22 + 1");
        assert_eq!((&a11 - &a11).to_string(), "0");
    }

    #[test]
    #[should_panic(expected = "mixing coefficient rings")]
    fn mixing_rings_panics() {
        let _ = &int(1) + &CoeffRing::Dyadic.one();
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = Coeff> {
            prop::collection::vec((-5i64..5, 0u32..3, 0u32..3), 0..5).prop_map(|ts| {
                let r = CoeffRing::params(&["p", "q"]).unwrap();
                let p = r.param("p").unwrap();
                let q = r.param("q").unwrap();
                ts.into_iter().fold(r.zero(), |acc, (c, i, j)| {
                    let mut t = r.from_int(c);
                    for _ in 0..i {
                        t = &t * &p;
                    }
                    for _ in 0..j {
                        t = &t * &q;
                    }
                    &acc + &t
                })
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(a in poly(), b in poly(), c in poly()) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a + &b, &b + &a);
            }

            #[test]
            fn mod2_is_homomorphism(a in poly(), b in poly()) {
                let m = |x: &Coeff| x.mod2_reduce().unwrap();
                prop_assert_eq!(m(&(&a * &b)), m(&(&m(&a) * &m(&b))));
                prop_assert_eq!(m(&(&a + &b)), m(&(&m(&a) + &m(&b))));
            }

            #[test]
            fn exact_div_inverts_scaling(a in poly(), k in prop::sample::select(vec![-6i64, -2, 2, 3, 7])) {
                let k = BigInt::from(k);
                if let Some(d) = a.exact_div_int(&k).unwrap() {
                    prop_assert_eq!(d.scale_int(&k), a.clone());
                }
                let scaled = a.scale_int(&k);
                prop_assert_eq!(scaled.exact_div_int(&k).unwrap(), Some(a));
            }

            #[test]
            fn valuation_is_additive(a in 1i64..100_000, b in 1i64..100_000, sa: bool) {
                let a = if sa { -a } else { a };
                let va = two_adic_valuation(&BigInt::from(a)).unwrap();
                let vb = two_adic_valuation(&BigInt::from(b)).unwrap();
                prop_assert_eq!(two_adic_valuation(&(BigInt::from(a) * b)).unwrap(), va + vb);
            }

            #[test]
            fn dyadic_ring_axioms(a in -50i64..50, ea in 0u32..4, b in -50i64..50, eb in 0u32..4, c in -50i64..50) {
                let x = Coeff::Dyadic(Dyadic::new(a.into(), ea));
                let y = Coeff::Dyadic(Dyadic::new(b.into(), eb));
                let z = CoeffRing::Dyadic.from_int(c);
                prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                prop_assert_eq!(&(&x + &y) - &y, x);
            }
        }
    }
}
