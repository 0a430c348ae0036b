//! Truncated formal group algebras `R[[Λ]]_F` in the variables `x_{ω_1}, ..., x_{ω_n}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::CoeffRing;
use crate::fgl::FormalGroupLaw;
use crate::lattice::{IntLattice, Matrix};
use crate::report::{Instance, VerificationReport};
use crate::rootdata::{Family, RootSystem, Weight, WeylElement};
use crate::series::{Monomial, TruncSeries};

/// Degree-`d` monomials in `n` variables, graded-lex; the coordinate order of every lattice.
pub fn graded_basis(n: usize, d: usize) -> Vec<Monomial> {
    Monomial::all_of_degree(n, d)
}

pub fn basis_label(d: usize) -> String {
    format!("graded-lex degree {d}")
}

/// An element of the formal group algebra, tagged with its context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgaElement {
    root_system: RootSystem,
    fgl: String,
    series: TruncSeries,
}

impl FgaElement {
    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn root_system(&self) -> RootSystem {
        self.root_system
    }

    pub fn fgl_label(&self) -> &str {
        &self.fgl
    }

    /// The augmentation.
    pub fn augmentation(&self) -> crate::exactnum::Coeff {
        self.series.constant_term()
    }

    pub fn into_series(self) -> TruncSeries {
        self.series
    }
}

impl Serialize for FgaElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("type", &self.root_system.family().letter().to_string())?;
        m.serialize_entry("rank", &self.root_system.rank())?;
        m.serialize_entry("fgl", &self.fgl)?;
        self.series.serialize_fields(&mut m)?;
        m.end()
    }
}

/// `Θ(α)` with its divisor `r_α` and degree `|α|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaProduct {
    pub element: FgaElement,
    pub r_alpha: BigInt,
    pub weight: usize,
}

/// Root system plus formal group law, with memoized expansions.
pub struct FgaContext {
    rs: RootSystem,
    fgl: FormalGroupLaw,
    exact: bool,
    nseries: Mutex<HashMap<i64, TruncSeries>>,
    weights: Mutex<HashMap<Weight, TruncSeries>>,
    thetas: Mutex<HashMap<usize, TruncSeries>>,
    products: Mutex<HashMap<Vec<u32>, TruncSeries>>,
    gen_images: Mutex<HashMap<WeylElement, Vec<TruncSeries>>>,
}

fn lock<T>(m: &Mutex<T>) -> std::sync::MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl FgaContext {
    pub fn new(rs: RootSystem, fgl: FormalGroupLaw) -> FgaContext {
        let additive = FormalGroupLaw::additive(fgl.ring(), fgl.trunc());
        let exact = fgl.series() == additive.series();
        FgaContext {
            rs,
            fgl,
            exact,
            nseries: Mutex::default(),
            weights: Mutex::default(),
            thetas: Mutex::default(),
            products: Mutex::default(),
            gen_images: Mutex::default(),
        }
    }

    pub fn from_specs(rs: &str, fgl: &str, trunc: usize) -> Result<FgaContext> {
        Ok(FgaContext::new(rs.parse()?, FormalGroupLaw::parse_spec(fgl, trunc)?))
    }

    pub fn root_system(&self) -> RootSystem {
        self.rs
    }

    pub fn fgl(&self) -> &FormalGroupLaw {
        &self.fgl
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn trunc(&self) -> usize {
        self.fgl.trunc()
    }

    pub fn ring(&self) -> &CoeffRing {
        self.fgl.ring()
    }

    /// True for the additive law, whose Weyl action preserves degree.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Caveat attached to every lattice computed in this context.
    pub fn certification(&self) -> String {
        if self.exact {
            "exact (additive law, degree-preserving action)".to_string()
        } else {
            format!("certified to truncation {}", self.trunc())
        }
    }

    pub fn element(&self, series: TruncSeries) -> Result<FgaElement> {
        if series.nvars() != self.rank() || series.trunc() != self.trunc() || series.ring() != self.ring() {
            return Err(Error::Incompatible(format!(
                "series ({} vars, trunc {}, {}) does not live in {} over {} at truncation {}",
                series.nvars(),
                series.trunc(),
                series.ring(),
                self.rs,
                self.ring(),
                self.trunc()
            )));
        }
        Ok(FgaElement { root_system: self.rs, fgl: self.fgl.label().to_string(), series })
    }

    fn check_element(&self, f: &FgaElement) -> Result<()> {
        if f.root_system != self.rs || f.fgl != self.fgl.label() {
            return Err(Error::Incompatible(format!(
                "element of ({}, {}) used in ({}, {})",
                f.root_system,
                f.fgl,
                self.rs,
                self.fgl.label()
            )));
        }
        self.element(f.series.clone()).map(|_| ())
    }

    fn var(&self, i: usize) -> TruncSeries {
        TruncSeries::var(self.rank(), self.trunc(), self.ring().clone(), i)
    }

    fn n_series(&self, m: i64) -> TruncSeries {
        if let Some(s) = lock(&self.nseries).get(&m) {
            return s.clone();
        }
        let s = self.fgl.n_series(m);
        lock(&self.nseries).insert(m, s.clone());
        s
    }

    fn x_series(&self, w: &Weight) -> Result<TruncSeries> {
        if w.0.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: w.0.len() });
        }
        if let Some(s) = lock(&self.weights).get(w) {
            return Ok(s.clone());
        }
        let mut parts = Vec::new();
        for (i, &m) in w.0.iter().enumerate() {
            if m != 0 {
                parts.push(self.n_series(m).compose(&[self.var(i)])?);
            }
        }
        let s = self.fgl.formal_sum_in(self.rank(), self.trunc(), &parts)?;
        lock(&self.weights).insert(w.clone(), s.clone());
        Ok(s)
    }

    /// `x_λ = (m_1 ·_F x_{ω_1}) +_F ... +_F (m_n ·_F x_{ω_n})`.
    pub fn x_of_weight(&self, w: &Weight) -> Result<FgaElement> {
        self.element(self.x_series(w)?)
    }

    fn generator_images(&self, g: &WeylElement) -> Result<Vec<TruncSeries>> {
        if let Some(v) = lock(&self.gen_images).get(g) {
            return Ok(v.clone());
        }
        let n = self.rank();
        let mut images = Vec::with_capacity(n);
        for j in 0..n {
            let mut omega = vec![0; n];
            omega[j] = 1;
            images.push(self.x_series(&self.rs.apply_weyl(g, &Weight(omega))?)?);
        }
        lock(&self.gen_images).insert(g.clone(), images.clone());
        Ok(images)
    }

    /// `x_{ω_j} ↦ x_{g(ω_j)}`, extended as a ring homomorphism.
    pub fn weyl_act(&self, g: &WeylElement, f: &FgaElement) -> Result<FgaElement> {
        self.check_element(f)?;
        self.rs.validate(g)?;
        let images = self.generator_images(g)?;
        let c = f.series.constant_term();
        let rest = f.series.sub(&TruncSeries::constant(self.rank(), self.trunc(), c.clone()))?;
        let moved = rest.compose(&images)?;
        self.element(moved.add(&TruncSeries::constant(self.rank(), self.trunc(), c))?)
    }

    /// `g(f) = f` for every simple reflection `g`.
    pub fn is_invariant(&self, f: &FgaElement) -> Result<bool> {
        for g in self.rs.weyl_generators() {
            if self.weyl_act(&g, f)? != *f {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn e_weight(&self, i: usize, sign: i64) -> Weight {
        Weight(self.rs.e_in_weights(i).0.into_iter().map(|c| c * sign).collect())
    }

    fn theta_series(&self, d: usize) -> Result<TruncSeries> {
        let n = self.rank();
        if d == 0 || d > n {
            return Err(Error::OutOfRange { index: d, max: n });
        }
        if let Some(s) = lock(&self.thetas).get(&d) {
            return Ok(s.clone());
        }
        let mut s;
        if self.rs.family() == Family::D && d == n {
            s = TruncSeries::one(n, self.trunc(), self.ring().clone());
            for i in 0..n {
                let diff = self.x_series(&self.e_weight(i, 1))?.sub(&self.x_series(&self.e_weight(i, -1))?)?;
                s = s.mul(&diff)?;
            }
        } else {
            s = TruncSeries::zero(n, self.trunc(), self.ring().clone());
            for i in 0..n {
                let p = self.x_series(&self.e_weight(i, 1))?.mul(&self.x_series(&self.e_weight(i, -1))?)?;
                s = s.add(&p.pow(d as u32))?;
            }
        }
        lock(&self.thetas).insert(d, s.clone());
        Ok(s)
    }

    /// `Θ_d = Σ x_{e_i}^d x_{-e_i}^d`, or `Π (x_{e_i} - x_{-e_i})` for type D with `d = n`.
    pub fn theta(&self, d: usize) -> Result<FgaElement> {
        self.element(self.theta_series(d)?)
    }

    /// `r_i`, the expected 2-power content of `Θ_i`.
    pub fn r(&self, i: usize) -> BigInt {
        self.rs.constants(i).ok().and_then(|c| c.r).unwrap_or_else(BigInt::one)
    }

    pub fn alpha_weight(&self, alpha: &[u32]) -> usize {
        alpha.iter().enumerate().map(|(i, &a)| a as usize * self.rs.theta_degree(i + 1)).sum()
    }

    fn product_series(&self, alpha: &[u32]) -> Result<TruncSeries> {
        if let Some(s) = lock(&self.products).get(alpha) {
            return Ok(s.clone());
        }
        let s = match alpha.iter().position(|&a| a > 0) {
            None => TruncSeries::one(self.rank(), self.trunc(), self.ring().clone()),
            Some(i) => {
                let mut smaller = alpha.to_vec();
                smaller[i] -= 1;
                self.product_series(&smaller)?.mul(&self.theta_series(i + 1)?)?
            }
        };
        lock(&self.products).insert(alpha.to_vec(), s.clone());
        Ok(s)
    }

    /// `Θ(α) = Π Θ_i^{α_i}`, `r_α = Π r_i^{α_i}`, `|α| = Σ α_i deg Θ_i`.
    pub fn theta_product(&self, alpha: &[u32]) -> Result<ThetaProduct> {
        if alpha.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: alpha.len() });
        }
        let weight = self.alpha_weight(alpha);
        if weight > self.trunc() {
            return Err(Error::BeyondTruncation { degree: weight, trunc: self.trunc() });
        }
        let r_alpha = alpha.iter().enumerate().fold(BigInt::one(), |acc, (i, &a)| acc * self.r(i + 1).pow(a));
        Ok(ThetaProduct { element: self.element(self.product_series(alpha)?)?, r_alpha, weight })
    }

    /// All `α` with `|α| = k`, lexicographic.
    pub fn alphas_of_weight(&self, k: usize) -> Vec<Vec<u32>> {
        let degs: Vec<usize> = (1..=self.rank()).map(|i| self.rs.theta_degree(i)).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; degs.len()];
        fn rec(i: usize, left: usize, degs: &[usize], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == degs.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for a in 0..=left / degs[i] {
                cur[i] = a as u32;
                rec(i + 1, left - a * degs[i], degs, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, k, &degs, &mut cur, &mut out);
        out
    }

    fn integral(&self) -> Result<()> {
        match self.ring() {
            CoeffRing::Integers => Ok(()),
            CoeffRing::Dyadic => Err(Error::DyadicMod2),
            CoeffRing::ParamPoly(_) => Err(Error::ParametersNotSpecialized),
        }
    }

    fn divisible(&self, s: &TruncSeries, m: &BigInt) -> Result<bool> {
        if self.ring().is_dyadic() {
            return Err(Error::DyadicMod2);
        }
        Ok(s.exact_div_int(m)?.is_some())
    }

    /// `Θ_d / 2 ∈ I_F`, to the truncation.
    pub fn theta_div2(&self, d: usize) -> Result<bool> {
        self.divisible(&self.theta_series(d)?, &BigInt::from(2))
    }

    /// `Θ_n / 2^n ∈ I_F` for type D, to the truncation.
    pub fn theta_div2n(&self) -> Result<bool> {
        if self.rs.family() != Family::D {
            return Err(Error::TypeDOnly);
        }
        let n = self.rank();
        self.divisible(&self.theta_series(n)?, &(BigInt::one() << n))
    }

    /// Both directions of the evenness criteria for `Θ_d`: `Θ_d/2` against evenness for `d` a power
    /// of two in range, and `Θ_n/2^n` against diagonal evenness for type D with `d = n`.
    pub fn divisibility_check(&self, d: usize) -> Result<VerificationReport> {
        let n = self.rank();
        let mut r = VerificationReport::new(
            "lemma45",
            Instance {
                root_system: Some(self.rs.to_string()),
                degree: Some(d),
                fgls: vec![self.fgl.label().to_string()],
                trunc: Some(self.trunc()),
            },
        );
        if self.rs.family() == Family::D && d == n {
            let div = self.theta_div2n()?;
            let diag = self.fgl.diag_even()?;
            r.computed("theta_div2n", div).computed("diag_even", diag).bound("divisor", &(BigInt::one() << n));
            r.check(format!("Θ_{n}/2^{n} integral iff every a_mm even"), div == diag, format!("{div} vs {diag}"));
        } else {
            let div = self.theta_div2(d)?;
            let even = self.fgl.is_even()?;
            r.computed("theta_div2", div).computed("even", even).bound("divisor", &BigInt::from(2));
            let limit = match self.rs.family() {
                Family::B => n,
                Family::D => n - 1,
            };
            if d.is_power_of_two() && d <= limit {
                r.check(format!("Θ_{d}/2 integral iff F even"), div == even, format!("{div} vs {even}"));
            } else {
                r.caveat(format!("d = {d} is not a power of two at most {limit}; no criterion applies"));
            }
        }
        r.caveat(format!("certified to truncation {}", self.trunc()));
        Ok(r)
    }

    pub fn graded_basis(&self, d: usize) -> Vec<Monomial> {
        graded_basis(self.rank(), d)
    }

    fn coords(&self, s: &TruncSeries, lo: usize, hi: usize) -> Result<Vec<BigInt>> {
        let basis: Vec<Monomial> = (lo..=hi).flat_map(|k| self.graded_basis(k)).collect();
        s.integer_coordinates(&basis)
    }

    fn check_degree(&self, d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::InvalidParameters("graded pieces are indexed by d >= 1".into()));
        }
        if d > self.trunc() {
            return Err(Error::BeyondTruncation { degree: d, trunc: self.trunc() });
        }
        Ok(())
    }

    /// Integral `W`-invariants of `I^lo` modulo `I^{hi+1}`, as a saturated lattice
    /// in the monomials of degrees `lo..=hi`.
    fn integral_invariants(&self, lo: usize, hi: usize) -> Result<IntLattice> {
        self.certify(lo, hi)?;
        let dim: usize = (lo..=hi).map(|k| self.graded_basis(k).len()).sum();
        let mut rows = Vec::new();
        for k in lo..=hi {
            for alpha in self.alphas_of_weight(k) {
                rows.push(self.coords(&self.product_series(&alpha)?, lo, hi)?);
            }
        }
        Ok(IntLattice::from_rows(dim, &rows, format!("graded-lex degrees {lo}..{hi}"))?.saturation())
    }

    /// Checks that the `Θ(α)` account for every graded invariant of the additive action.
    fn certify(&self, lo: usize, hi: usize) -> Result<()> {
        let mut found = 0;
        let mut bound = 0;
        for k in lo..=hi {
            found += self.alphas_of_weight(k).len();
            bound += additive_invariant_dim(self.rs, k)?;
        }
        if found != bound {
            return Err(Error::Certificate { trunc: hi, found, bound });
        }
        Ok(())
    }

    /// Leading degree-`d` forms of truncated integral invariants in `I^d`.
    pub fn invariant_graded_lattice(&self, d: usize) -> Result<IntLattice> {
        self.integral()?;
        self.check_degree(d)?;
        let hi = if self.exact { d } else { self.trunc() };
        let sat = self.integral_invariants(d, hi)?;
        let nd = self.graded_basis(d).len();
        Ok(sat.project(&(0..nd).collect::<Vec<_>>(), basis_label(d)))
    }

    /// Leading degree-`d` forms of the ideal generated by the integral invariants in `I`.
    pub fn ideal_graded_lattice(&self, d: usize) -> Result<IntLattice> {
        self.integral()?;
        self.check_degree(d)?;
        let n = self.rank();
        let nd = self.graded_basis(d).len();
        let mut gens: Vec<TruncSeries> = Vec::new();
        if self.exact {
            for k in 1..=d {
                let sat = self.integral_invariants(k, k)?;
                let basis = self.graded_basis(k);
                for row in sat.hnf() {
                    gens.push(self.series_from_coords(&basis, row, d)?);
                }
            }
        } else {
            let sat = self.integral_invariants(1, self.trunc())?;
            let basis: Vec<Monomial> = (1..=self.trunc()).flat_map(|k| self.graded_basis(k)).collect();
            for row in sat.hnf() {
                gens.push(self.series_from_coords(&basis, row, d)?);
            }
        }
        let below: usize = (1..d).map(|k| self.graded_basis(k).len()).sum();
        let mut rows: Matrix = Vec::new();
        for f in gens.iter().filter(|f| !f.is_zero()) {
            let o = f.order().expect("nonzero series has an order");
            for k in 0..=d - o {
                for m in graded_basis(n, k) {
                    rows.push(self.coords(&f.mul_monomial(&m), 1, d)?);
                }
            }
        }
        let lat = IntLattice::from_rows(below + nd, &rows, "graded-lex degrees 1..d")?;
        let top: Matrix =
            lat.hnf().iter().filter(|r| r[..below].iter().all(Zero::is_zero)).map(|r| r[below..].to_vec()).collect();
        IntLattice::from_rows(nd, &top, basis_label(d))
    }

    fn series_from_coords(&self, basis: &[Monomial], coords: &[BigInt], trunc: usize) -> Result<TruncSeries> {
        let terms = basis
            .iter()
            .zip(coords)
            .filter(|(m, c)| !c.is_zero() && m.degree() <= trunc)
            .map(|(m, c)| (m.exponents().to_vec(), crate::exactnum::Coeff::Int(c.clone())));
        TruncSeries::from_terms(self.rank(), trunc, CoeffRing::Integers, terms)
    }

    /// `Θ_i` or `Θ_i / r_i`, checked integral over the whole truncated series.
    fn theta_maybe_divided(&self, i: usize, use_r: bool) -> Result<TruncSeries> {
        let s = self.theta_series(i)?;
        if !use_r {
            return Ok(s);
        }
        let r = self.r(i);
        s.exact_div_int(&r)?
            .ok_or_else(|| Error::NonIntegralTheta { index: i, divisor: u64::try_from(&r).unwrap_or(u64::MAX) })
    }

    /// Degree-`d` forms of `Σ g_i Θ_i` (or `Σ g_i Θ_i / r_i`) with `g_i` homogeneous.
    pub fn theta_span_lattice(&self, d: usize, use_r: bool) -> Result<IntLattice> {
        self.integral()?;
        self.check_degree(d)?;
        let n = self.rank();
        let mut rows = Vec::new();
        for i in 1..=n {
            let deg = self.rs.theta_degree(i);
            if deg > d {
                continue;
            }
            let lead = self.theta_maybe_divided(i, use_r)?.homogeneous_component(deg)?;
            for m in graded_basis(n, d - deg) {
                rows.push(self.coords(&lead.mul_monomial(&m), d, d)?);
            }
        }
        IntLattice::from_rows(self.graded_basis(d).len(), &rows, basis_label(d))
    }

    /// `⟨Θ(α)⟩_{|α| = d}`, optionally `⟨Θ(α) / r_α⟩`.
    pub fn alpha_span_lattice(&self, d: usize, use_r: bool) -> Result<IntLattice> {
        self.integral()?;
        self.check_degree(d)?;
        let mut rows = Vec::new();
        for alpha in self.alphas_of_weight(d) {
            let mut s = self.product_series(&alpha)?.homogeneous_component(d)?;
            if use_r {
                for (i, &a) in alpha.iter().enumerate() {
                    if a > 0 {
                        self.theta_maybe_divided(i + 1, true)?;
                    }
                }
                let tp = self.theta_product(&alpha)?;
                s = s.exact_div_int(&tp.r_alpha)?.expect("product of integral quotients is integral");
            }
            rows.push(self.coords(&s, d, d)?);
        }
        IntLattice::from_rows(self.graded_basis(d).len(), &rows, basis_label(d))
    }

    /// `Φ^{F → F'}`: the same series read in the target algebra.
    pub fn deform(&self, f: &FgaElement, target: &FgaContext) -> Result<FgaElement> {
        self.check_element(f)?;
        if target.rs != self.rs || target.trunc() != self.trunc() || target.ring() != self.ring() {
            return Err(Error::Incompatible(format!(
                "cannot deform from ({}, trunc {}) to ({}, trunc {})",
                self.rs,
                self.trunc(),
                target.rs,
                target.trunc()
            )));
        }
        target.element(f.series.clone())
    }
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, ncols: usize) -> usize {
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, p);
        let inv = powmod(rows[rank][c], PRIME - 2);
        let pivot: Vec<u64> = rows[rank].iter().map(|&x| mulmod(x, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot).skip(c) {
                    *x = (*x + PRIME - mulmod(f, y)) % PRIME;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

fn to_mod_p(x: &BigInt) -> u64 {
    let m = BigInt::from(PRIME);
    let r = ((x % &m) + &m) % &m;
    u64::try_from(r).expect("reduced residue fits")
}

/// Dimension of the degree-`k` invariants of the linear Weyl action on `Q[x_{ω}]`,
/// bounded above through a rank computed modulo a large prime.
pub fn additive_invariant_dim(rs: RootSystem, k: usize) -> Result<usize> {
    static CACHE: OnceLock<Mutex<HashMap<(RootSystem, usize), usize>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Mutex::default);
    if let Some(&v) = lock(cache).get(&(rs, k)) {
        return Ok(v);
    }
    let n = rs.rank();
    let basis = graded_basis(n, k);
    let mut rows = Vec::new();
    for g in rs.weyl_generators() {
        let images: Vec<TruncSeries> = (0..n)
            .map(|j| {
                let mut omega = vec![0; n];
                omega[j] = 1;
                let w = rs.apply_weyl(&g, &Weight(omega))?;
                let terms = w.0.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| {
                    let mut e = vec![0u32; n];
                    e[i] = 1;
                    (e, crate::exactnum::Coeff::Int(c.into()))
                });
                TruncSeries::from_terms(n, k, CoeffRing::Integers, terms)
            })
            .collect::<Result<_>>()?;
        for m in &basis {
            let mut s = TruncSeries::one(n, k, CoeffRing::Integers);
            for (j, &e) in m.exponents().iter().enumerate() {
                s = s.mul(&images[j].pow(e))?;
            }
            let mono = TruncSeries::from_terms(
                n,
                k,
                CoeffRing::Integers,
                [(m.exponents().to_vec(), CoeffRing::Integers.one())],
            )?;
            let diff = s.sub(&mono)?;
            rows.push(diff.integer_coordinates(&basis)?.iter().map(to_mod_p).collect());
        }
    }
    let dim = basis.len() - rank_mod_p(rows, basis.len());
    lock(cache).insert((rs, k), dim);
    Ok(dim)
}
