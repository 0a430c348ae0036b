//! Weight lattices and Weyl groups of the simply connected groups of type
//! B_n (n >= 3) and D_n (n >= 4).
//!
//! Coordinates follow these relations between the standard basis `e_i` and
//! the fundamental weights `ω_i`:
//!
//! * B_n: `e_1 = ω_1`, `e_i = ω_i - ω_{i-1}` for `1 < i < n`, `e_n = 2ω_n - ω_{n-1}`.
//! * D_n: `e_1 = ω_1`, `e_i = ω_i - ω_{i-1}` for `1 < i <= n-2`,
//!   `e_{n-1} = ω_n - ω_{n-1}`, `e_n = ω_n + ω_{n-1} - ω_{n-2}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    B,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSystem {
    family: Family,
    rank: usize,
}

/// Coordinates in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight(pub Vec<i64>);

/// Twice the coordinates in the `e_i` basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HalfVector(pub Vec<i64>);

/// Signed permutation `e_i ↦ signs[i] · e_{perm[i]}` (zero-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

/// `r_d`, `ζ_d`, `η_d` for one degree. `r` is only defined for `d <= n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constants {
    pub d: usize,
    #[serde(serialize_with = "crate::report::ser_opt_int")]
    pub r: Option<BigInt>,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub zeta: BigInt,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub eta: BigInt,
}

fn pow2(k: u64) -> BigInt {
    BigInt::from(1) << k
}

/// `ν_2(m!)` by Legendre's formula.
fn nu2_factorial(m: u64) -> u64 {
    let mut s = 0;
    let mut q = m / 2;
    while q > 0 {
        s += q;
        q /= 2;
    }
    s
}

impl WeylElement {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<WeylElement> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::InvalidWeylElement(format!("{} signs for {} letters", signs.len(), n)));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidWeylElement(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidWeylElement(format!("signs {signs:?} must be ±1")));
        }
        Ok(WeylElement { perm, signs })
    }

    pub fn identity(n: usize) -> WeylElement {
        WeylElement { perm: (0..n).collect(), signs: vec![1; n] }
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    /// Applies to a doubled e-vector.
    pub fn act(&self, v: &HalfVector) -> HalfVector {
        let mut out = vec![0; v.0.len()];
        for (i, &x) in v.0.iter().enumerate() {
            out[self.perm[i]] = i64::from(self.signs[i]) * x;
        }
        HalfVector(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        WeylElement { perm, signs }
    }
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<RootSystem> {
        let min = match family {
            Family::B => 3,
            Family::D => 4,
        };
        if rank < min {
            return Err(Error::InvalidRank { family: family.letter(), rank });
        }
        Ok(RootSystem { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: len });
        }
        Ok(())
    }

    /// Doubled e-coordinates of `ω_j` (zero-based `j`).
    pub fn fundamental_in_e(&self, j: usize) -> HalfVector {
        let n = self.rank;
        let v = match (self.family, j) {
            (Family::B, j) if j == n - 1 => vec![1; n],
            (Family::D, j) if j == n - 1 => vec![1; n],
            (Family::D, j) if j == n - 2 => {
                let mut v = vec![1; n];
                v[n - 2] = -1;
                v
            }
            (_, j) => (0..n).map(|i| if i <= j { 2 } else { 0 }).collect(),
        };
        HalfVector(v)
    }

    /// ω-coordinates of `e_i` (zero-based `i`).
    pub fn e_in_weights(&self, i: usize) -> Weight {
        let n = self.rank;
        let mut w = vec![0; n];
        match (self.family, i) {
            (_, 0) => w[0] = 1,
            (Family::B, i) if i == n - 1 => {
                w[n - 1] = 2;
                w[n - 2] = -1;
            }
            (Family::D, i) if i == n - 2 => {
                w[n - 1] = 1;
                w[n - 2] = -1;
            }
            (Family::D, i) if i == n - 1 => {
                w[n - 1] = 1;
                w[n - 2] = 1;
                w[n - 3] = -1;
            }
            (_, i) => {
                w[i] = 1;
                w[i - 1] = -1;
            }
        }
        Weight(w)
    }

    pub fn weight_to_e(&self, w: &Weight) -> Result<HalfVector> {
        self.check_len(w.0.len())?;
        let mut out = vec![0i64; self.rank];
        for (j, &m) in w.0.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(self.fundamental_in_e(j).0) {
                *o += m * x;
            }
        }
        Ok(HalfVector(out))
    }

    pub fn e_to_weight(&self, v: &HalfVector) -> Result<Weight> {
        self.check_len(v.0.len())?;
        let mut twice = vec![0i64; self.rank];
        for (i, &x) in v.0.iter().enumerate() {
            for (t, c) in twice.iter_mut().zip(self.e_in_weights(i).0) {
                *t += x * c;
            }
        }
        if twice.iter().any(|t| t % 2 != 0) {
            return Err(Error::NotAWeight(v.0.clone()));
        }
        Ok(Weight(twice.into_iter().map(|t| t / 2).collect()))
    }

    pub fn validate(&self, g: &WeylElement) -> Result<()> {
        self.check_len(g.perm.len())?;
        if self.family == Family::D && g.negative_count() % 2 == 1 {
            return Err(Error::InvalidWeylElement("type D allows only an even number of sign changes".into()));
        }
        Ok(())
    }

    pub fn apply_weyl(&self, g: &WeylElement, w: &Weight) -> Result<Weight> {
        self.validate(g)?;
        self.e_to_weight(&g.act(&self.weight_to_e(w)?))
    }

    /// Simple reflections as signed permutations.
    pub fn weyl_generators(&self) -> Vec<WeylElement> {
        let n = self.rank;
        let mut gens: Vec<WeylElement> = (0..n - 1)
            .map(|i| {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(i, i + 1);
                WeylElement { perm, signs: vec![1; n] }
            })
            .collect();
        let mut signs = vec![1; n];
        let mut perm: Vec<usize> = (0..n).collect();
        match self.family {
            Family::B => signs[n - 1] = -1,
            Family::D => {
                perm.swap(n - 2, n - 1);
                signs[n - 2] = -1;
                signs[n - 1] = -1;
            }
        }
        gens.push(WeylElement { perm, signs });
        gens
    }

    /// Every element of W; only offered for rank at most 4.
    pub fn weyl_group_elements(&self) -> Result<Vec<WeylElement>> {
        let n = self.rank;
        if n > 4 {
            return Err(Error::InvalidParameters(format!("full Weyl group enumeration needs rank <= 4, got {n}")));
        }
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for k in 0..n {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..=k).map(move |pos| {
                        let mut q = p.clone();
                        q.insert(pos, k);
                        q
                    })
                })
                .collect();
        }
        perms.sort();
        let mut out = Vec::new();
        for p in perms {
            for mask in 0..(1u32 << n) {
                let signs: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                let g = WeylElement { perm: p.clone(), signs };
                if self.validate(&g).is_ok() {
                    out.push(g);
                }
            }
        }
        Ok(out)
    }

    /// Algebra degree of the basic invariant `Θ_i` (one-based `i`).
    pub fn theta_degree(&self, i: usize) -> usize {
        if self.family == Family::D && i == self.rank {
            self.rank
        } else {
            2 * i
        }
    }

    pub fn constants(&self, d: usize) -> Result<Constants> {
        if d == 0 {
            return Err(Error::InvalidParameters("degree must be positive".into()));
        }
        let n = self.rank;
        let r = (d <= n).then(|| {
            if self.family == Family::D && d == n {
                pow2(n as u64)
            } else if d.is_power_of_two() {
                BigInt::from(2)
            } else {
                BigInt::from(1)
            }
        });
        let zeta = match self.family {
            Family::D if d >= n => pow2(((d / n) * n) as u64),
            _ => pow2((d / 2) as u64),
        };
        let eta_exp = |cap: usize| -> u64 {
            let d0 = d.min(cap) as u64;
            d as u64 + nu2_factorial(d0 / 2)
        };
        let eta = match (self.family, d) {
            (_, 1) => BigInt::from(1),
            (_, 2 | 3) => BigInt::from(2),
            (Family::B, 4) => BigInt::from(4),
            (Family::B, _) => pow2(eta_exp(2 * n)),
            (Family::D, 4) if n >= 5 => BigInt::from(4),
            (Family::D, _) => pow2(eta_exp(2 * n - 2)),
        };
        Ok(Constants { d, r, zeta, eta })
    }
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::B => 'B',
            Family::D => 'D',
        }
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl Serialize for RootSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for RootSystem {
    type Err = Error;

    /// `"B3"`, `"D4"`, `"b5"`, ...
    fn from_str(s: &str) -> Result<RootSystem> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('B') => Family::B,
            Some('D') => Family::D,
            _ => return Err(Error::Parse(format!("unknown root system {s:?}"))),
        };
        let rank = chars.as_str().parse().map_err(|_| Error::Parse(format!("bad rank in {s:?}")))?;
        RootSystem::new(family, rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b3() -> RootSystem {
        RootSystem::new(Family::B, 3).unwrap()
    }

    fn d4() -> RootSystem {
        RootSystem::new(Family::D, 4).unwrap()
    }

    #[test]
    fn rank_bounds() {
        assert!(RootSystem::new(Family::B, 2).is_err());
        assert!(RootSystem::new(Family::D, 3).is_err());
        assert_eq!("D5".parse::<RootSystem>().unwrap().to_string(), "D5");
        assert!("A3".parse::<RootSystem>().is_err());
        assert!("B".parse::<RootSystem>().is_err());
    }

    #[test]
    fn weight_to_e_examples() {
        assert_eq!(b3().weight_to_e(&Weight(vec![1, 0, 0])).unwrap(), HalfVector(vec![2, 0, 0]));
        assert_eq!(b3().weight_to_e(&Weight(vec![0, 0, 1])).unwrap(), HalfVector(vec![1, 1, 1]));
        // e_{n-1} = ω_n - ω_{n-1}
        assert_eq!(d4().weight_to_e(&Weight(vec![0, 0, -1, 1])).unwrap(), HalfVector(vec![0, 0, 2, 0]));
        assert_eq!(d4().weight_to_e(&Weight(vec![0, -1, 1, 1])).unwrap(), HalfVector(vec![0, 0, 0, 2]));
    }

    #[test]
    fn e_to_weight_examples() {
        assert_eq!(b3().e_to_weight(&HalfVector(vec![0, 2, 0])).unwrap(), Weight(vec![-1, 1, 0]));
        assert_eq!(b3().e_to_weight(&HalfVector(vec![0, 0, 2])).unwrap(), Weight(vec![0, -1, 2]));
        assert!(matches!(b3().e_to_weight(&HalfVector(vec![1, 0, 0])), Err(Error::NotAWeight(_))));
        assert!(d4().e_to_weight(&HalfVector(vec![1, 1, 1, -1])).is_ok());
        assert!(d4().e_to_weight(&HalfVector(vec![1, 1, 2, 0])).is_err());
    }

    #[test]
    fn weyl_examples() {
        let rs = b3();
        let w3 = Weight(vec![0, 0, 1]);
        assert_eq!(rs.apply_weyl(&WeylElement::identity(3), &w3).unwrap(), w3);
        let flip = WeylElement::new(vec![0, 1, 2], vec![1, 1, -1]).unwrap();
        assert_eq!(rs.apply_weyl(&flip, &w3).unwrap(), Weight(vec![0, 1, -1]));
        let swap = WeylElement::new(vec![1, 0, 2], vec![1, 1, 1]).unwrap();
        assert_eq!(rs.apply_weyl(&swap, &Weight(vec![1, 0, 0])).unwrap(), Weight(vec![-1, 1, 0]));
        let odd = WeylElement::new(vec![0, 1, 2, 3], vec![1, 1, 1, -1]).unwrap();
        assert!(d4().apply_weyl(&odd, &Weight(vec![1, 0, 0, 0])).is_err());
    }

    #[test]
    fn generators() {
        let g = b3().weyl_generators();
        assert_eq!(g.len(), 3);
        assert_eq!(g[2].signs(), &[1, 1, -1]);
        let g = d4().weyl_generators();
        assert_eq!(g.len(), 4);
        for rs in [b3(), d4(), RootSystem::new(Family::D, 5).unwrap()] {
            let n = rs.rank();
            for s in rs.weyl_generators() {
                assert_eq!(s.negative_count() % 2 * usize::from(rs.family() == Family::D), 0);
                assert_eq!(s.compose(&s), WeylElement::identity(n));
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(b3().weyl_group_elements().unwrap().len(), 48);
        assert_eq!(d4().weyl_group_elements().unwrap().len(), 192);
        assert_eq!(RootSystem::new(Family::B, 4).unwrap().weyl_group_elements().unwrap().len(), 384);
        assert!(RootSystem::new(Family::B, 5).unwrap().weyl_group_elements().is_err());
    }

    #[test]
    fn generators_generate() {
        for rs in [b3(), d4()] {
            let gens = rs.weyl_generators();
            let mut seen = std::collections::BTreeSet::new();
            let mut frontier = vec![WeylElement::identity(rs.rank())];
            while let Some(g) = frontier.pop() {
                if seen.insert(g.clone()) {
                    frontier.extend(gens.iter().map(|s| s.compose(&g)));
                }
            }
            assert_eq!(seen.len(), rs.weyl_group_elements().unwrap().len());
        }
    }

    #[test]
    fn constants_tables() {
        let c = |rs: &RootSystem, d| rs.constants(d).unwrap();
        let big = |v: i64| BigInt::from(v);
        let b = b3();
        assert_eq!(c(&b, 5).zeta, big(4));
        assert_eq!(c(&b, 5).eta, big(64));
        let etas: Vec<BigInt> = (1..=6).map(|d| c(&b, d).eta).collect();
        assert_eq!(etas, [1, 2, 2, 4, 64, 128].map(big));
        let d = d4();
        assert_eq!(c(&d, 4).zeta, big(16));
        assert_eq!(c(&d, 4).eta, big(32));
        assert_eq!(c(&d, 4).r, Some(big(16)));
        assert_eq!(c(&d, 3).zeta, big(2));
        let d5 = RootSystem::new(Family::D, 5).unwrap();
        assert_eq!(c(&d5, 4).eta, big(4));
        assert_eq!(c(&d5, 4).r, Some(big(2)));
        assert_eq!(c(&b, 3).r, Some(big(1)));
        assert_eq!(c(&b, 4).r, None);
        assert!(b.constants(0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn system() -> impl Strategy<Value = RootSystem> {
            prop_oneof![
                (3usize..7).prop_map(|n| RootSystem::new(Family::B, n).unwrap()),
                (4usize..7).prop_map(|n| RootSystem::new(Family::D, n).unwrap()),
            ]
        }

        fn weight(n: usize) -> impl Strategy<Value = Weight> {
            prop::collection::vec(-5i64..6, n).prop_map(Weight)
        }

        proptest! {
            #[test]
            fn round_trip(rs in system(), seed in prop::collection::vec(-5i64..6, 6)) {
                let w = Weight(seed[..rs.rank()].to_vec());
                let v = rs.weight_to_e(&w).unwrap();
                prop_assert_eq!(rs.e_to_weight(&v).unwrap(), w);
                prop_assert_eq!(rs.weight_to_e(&rs.e_to_weight(&v).unwrap()).unwrap(), v);
            }

            #[test]
            fn weyl_is_linear(
                rs in system(),
                a in weight(6),
                b in weight(6),
                word in prop::collection::vec(0usize..6, 0..8),
            ) {
                let n = rs.rank();
                let gens = rs.weyl_generators();
                let g = word.iter().fold(WeylElement::identity(n), |acc, &i| gens[i % n].compose(&acc));
                let a = Weight(a.0[..n].to_vec());
                let b = Weight(b.0[..n].to_vec());
                let sum = Weight(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                let ga = rs.apply_weyl(&g, &a).unwrap();
                let gb = rs.apply_weyl(&g, &b).unwrap();
                let expect = Weight(ga.0.iter().zip(&gb.0).map(|(x, y)| x + y).collect());
                prop_assert_eq!(rs.apply_weyl(&g, &sum).unwrap(), expect);
            }

            #[test]
            fn braid_relations(rs in system(), w in weight(6), i in 0usize..5) {
                let n = rs.rank();
                let i = i % (n - 2);
                let gens = rs.weyl_generators();
                let st = gens[i].compose(&gens[i + 1]);
                let cube = st.compose(&st).compose(&st);
                let w = Weight(w.0[..n].to_vec());
                prop_assert_eq!(rs.apply_weyl(&cube, &w).unwrap(), w);
            }

            #[test]
            fn odd_sign_count_rejected_for_d(n in 4usize..7, k in 0usize..7) {
                let rs = RootSystem::new(Family::D, n).unwrap();
                let mut signs = vec![1i8; n];
                signs[k % n] = -1;
                let g = WeylElement::new((0..n).collect(), signs).unwrap();
                prop_assert!(rs.validate(&g).is_err());
            }
        }
    }
}
