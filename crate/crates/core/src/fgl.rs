//! One-dimensional commutative formal group laws.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{Coeff, CoeffRing};
use crate::report::{Instance, VerificationReport};
use crate::series::TruncSeries;

/// Built-in families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FglKind {
    Additive,
    /// `x + y - a x y`
    Multiplicative(Coeff),
    /// `(x + y) / (1 + beta x y)`
    Lorentz(Coeff),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalGroupLaw {
    series: TruncSeries,
    label: String,
    warnings: Vec<String>,
}

fn xy(trunc: usize, ring: &CoeffRing) -> (TruncSeries, TruncSeries) {
    (TruncSeries::var(2, trunc, ring.clone(), 0), TruncSeries::var(2, trunc, ring.clone(), 1))
}

/// Inverse of a unit series with constant term 1.
fn unit_inverse(s: &TruncSeries) -> Result<TruncSeries> {
    let one = TruncSeries::one(s.nvars(), s.trunc(), s.ring().clone());
    let u = s.sub(&one)?;
    if !u.constant_term().is_zero() {
        return Err(Error::Incompatible("unit_inverse needs constant term 1".into()));
    }
    let neg_u = u.neg();
    // 1 - u + u^2 - ...
    let mut acc = one.clone();
    let mut p = one;
    for _ in 0..s.trunc() {
        p = p.mul(&neg_u)?;
        if p.is_zero() {
            break;
        }
        acc = acc.add(&p)?;
    }
    Ok(acc)
}

impl FormalGroupLaw {
    pub fn make_builtin(kind: FglKind, ring: &CoeffRing, trunc: usize) -> Result<FormalGroupLaw> {
        let (x, y) = xy(trunc, ring);
        let sum = x.add(&y)?;
        let mut warnings = Vec::new();
        let (series, label) = match &kind {
            FglKind::Additive => (sum, "additive".to_string()),
            FglKind::Multiplicative(a) => {
                check_ring(a, ring)?;
                (sum.sub(&x.mul(&y)?.scale(a))?, format!("multiplicative:a={a}"))
            }
            FglKind::Lorentz(beta) => {
                check_ring(beta, ring)?;
                if beta.is_zero() {
                    warnings.push("lorentz with beta = 0 degenerates to the additive law".into());
                }
                let t = x.mul(&y)?.scale(beta).neg();
                let mut geom = TruncSeries::one(2, trunc, ring.clone());
                let mut p = geom.clone();
                for _ in 0..trunc / 2 {
                    p = p.mul(&t)?;
                    geom = geom.add(&p)?;
                }
                (sum.mul(&geom)?, format!("lorentz:beta={beta}"))
            }
        };
        Ok(FormalGroupLaw { series, label, warnings })
    }

    pub fn additive(ring: &CoeffRing, trunc: usize) -> FormalGroupLaw {
        Self::make_builtin(FglKind::Additive, ring, trunc).expect("additive law is always constructible")
    }

    pub fn multiplicative(a: i64, trunc: usize) -> FormalGroupLaw {
        Self::make_builtin(FglKind::Multiplicative(Coeff::Int(a.into())), &CoeffRing::Integers, trunc)
            .expect("integer multiplicative law")
    }

    pub fn lorentz(beta: i64, trunc: usize) -> FormalGroupLaw {
        Self::make_builtin(FglKind::Lorentz(Coeff::Int(beta.into())), &CoeffRing::Integers, trunc)
            .expect("integer lorentz law")
    }

    /// Formal group law of the Weierstrass curve
    /// `w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3`, expanded
    /// on the formal parameter `z` through the chord construction.
    pub fn make_elliptic(a: [Coeff; 5], ring: &CoeffRing, trunc: usize) -> Result<FormalGroupLaw> {
        if trunc < 4 {
            return Err(Error::BeyondTruncation { degree: 4, trunc });
        }
        for c in &a {
            check_ring(c, ring)?;
        }
        let [a1, a2, a3, a4, a6] = &a;
        let wt = trunc + 1;

        // w(z) by fixed-point iteration; each round fixes at least one more degree
        let z = TruncSeries::var(1, wt, ring.clone(), 0);
        let z2 = z.pow(2);
        let z3 = z.pow(3);
        let mut w = TruncSeries::zero(1, wt, ring.clone());
        for _ in 0..=wt {
            let w2 = w.mul(&w)?;
            let next = z3
                .add(&z.mul(&w)?.scale(a1))?
                .add(&z2.mul(&w)?.scale(a2))?
                .add(&w2.scale(a3))?
                .add(&z.mul(&w2)?.scale(a4))?
                .add(&w2.mul(&w)?.scale(a6))?;
            if next == w {
                break;
            }
            w = next;
        }

        let (z1, z2v) = xy(trunc, ring);
        let z1_pows: Vec<TruncSeries> = (0..=wt as u32).map(|k| z1.pow(k)).collect();
        let z2_pows: Vec<TruncSeries> = (0..=wt as u32).map(|k| z2v.pow(k)).collect();

        // slope (w(z2) - w(z1)) / (z2 - z1) = sum_n w_n sum_k z1^k z2^(n-1-k)
        let mut lambda = TruncSeries::zero(2, trunc, ring.clone());
        let mut w_at_z1 = TruncSeries::zero(2, trunc, ring.clone());
        for n in 3..=wt {
            let wn = w.coeff(&[n as u32]);
            if wn.is_zero() {
                continue;
            }
            let mut h = TruncSeries::zero(2, trunc, ring.clone());
            for k in 0..n {
                h = h.add(&z1_pows[k].mul(&z2_pows[n - 1 - k])?)?;
            }
            lambda = lambda.add(&h.scale(&wn))?;
            w_at_z1 = w_at_z1.add(&z1_pows[n].scale(&wn))?;
        }
        let nu = w_at_z1.sub(&lambda.mul(&z1)?)?;

        let two = ring.from_int(2);
        let three = ring.from_int(3);
        let l2 = lambda.mul(&lambda)?;
        let l3 = l2.mul(&lambda)?;
        let lnu = lambda.mul(&nu)?;
        let numer = lambda
            .scale(a1)
            .add(&nu.scale(a2))?
            .add(&l2.scale(a3))?
            .add(&lnu.scale(&(&two * a4)))?
            .add(&l2.mul(&nu)?.scale(&(&three * a6)))?;
        let denom =
            TruncSeries::one(2, trunc, ring.clone()).add(&lambda.scale(a2))?.add(&l2.scale(a4))?.add(&l3.scale(a6))?;
        // third intersection point of the chord
        let third = z1.add(&z2v)?.add(&numer.mul(&unit_inverse(&denom)?)?)?.neg();

        // negation on the formal parameter: i(z) = -z / (1 - a1 z - a3 w(z))
        let zt = TruncSeries::var(1, trunc, ring.clone(), 0);
        let wt_cut = w.with_trunc(trunc);
        let d = TruncSeries::one(1, trunc, ring.clone()).sub(&zt.scale(a1))?.sub(&wt_cut.scale(a3))?;
        let inv = zt.mul(&unit_inverse(&d)?)?.neg();
        let series = inv.compose(&[third])?;

        let label = format!("elliptic:a1={a1},a2={a2},a3={a3},a4={a4},a6={a6}");
        Ok(FormalGroupLaw { series, label, warnings: Vec::new() })
    }

    /// Elliptic law over `Z[a1, a2, a3, a4, a6]`.
    pub fn elliptic_generic(trunc: usize) -> Result<FormalGroupLaw> {
        let ring = CoeffRing::params(&["a1", "a2", "a3", "a4", "a6"])?;
        let a = ["a1", "a2", "a3", "a4", "a6"].map(|n| ring.param(n).expect("declared parameter"));
        Self::make_elliptic(a, &ring, trunc)
    }

    pub fn elliptic_int(a: [i64; 5], trunc: usize) -> Result<FormalGroupLaw> {
        Self::make_elliptic(a.map(|v| Coeff::Int(v.into())), &CoeffRing::Integers, trunc)
    }

    /// Builds `x + y + sum a_ij x^i y^j` from a coefficient table and rejects
    /// it unless every axiom holds to the truncation.
    pub fn from_table(table: &BTreeMap<(u32, u32), Coeff>, ring: &CoeffRing, trunc: usize) -> Result<FormalGroupLaw> {
        let (x, y) = xy(trunc, ring);
        let mut terms: Vec<(Vec<u32>, Coeff)> = Vec::new();
        for (&(i, j), c) in table {
            if i == 0 || j == 0 {
                return Err(Error::Parse(format!("table entry ({i},{j}) must have i, j >= 1")));
            }
            terms.push((vec![i, j], c.clone()));
        }
        let series = x.add(&y)?.add(&TruncSeries::from_terms(2, trunc, ring.clone(), terms)?)?;
        let f = FormalGroupLaw { series, label: "table".into(), warnings: Vec::new() };
        let report = f.check_axioms();
        if let Some(bad) = report.failed_checks().next() {
            return Err(Error::AxiomViolation(format!("{}: {}", bad.name, bad.detail)));
        }
        Ok(f)
    }

    /// Reads a JSON object mapping `"i,j"` to a coefficient string.
    pub fn from_table_file(path: &Path, trunc: usize) -> Result<FormalGroupLaw> {
        let text = std::fs::read_to_string(path)?;
        let raw: BTreeMap<String, serde_json::Value> = serde_json::from_str(&text)?;
        let mut table = BTreeMap::new();
        for (k, v) in raw {
            let (i, j) = k
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("bad table key {k:?}")))?;
            let n: BigInt = match &v {
                serde_json::Value::String(s) => {
                    s.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?
                }
                serde_json::Value::Number(n) => {
                    n.to_string().parse().map_err(|_| Error::Parse(format!("bad coefficient {n}")))?
                }
                other => return Err(Error::Parse(format!("bad coefficient {other}"))),
            };
            table.insert((i, j), Coeff::Int(n));
        }
        let mut f = Self::from_table(&table, &CoeffRing::Integers, trunc)?;
        f.label = format!("table:{}", path.display());
        Ok(f)
    }

    /// Wraps an arbitrary two-variable series without checking anything.
    pub fn new_unchecked(series: TruncSeries, label: impl Into<String>) -> Result<FormalGroupLaw> {
        if series.nvars() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: series.nvars() });
        }
        Ok(FormalGroupLaw { series, label: label.into(), warnings: Vec::new() })
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn ring(&self) -> &CoeffRing {
        self.series.ring()
    }

    pub fn trunc(&self) -> usize {
        self.series.trunc()
    }

    /// The label string this law was parsed from (`additive`, `lorentz:beta=2`, ...).
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `a_ij`, the coefficient of `x^i y^j`.
    pub fn coefficient(&self, i: u32, j: u32) -> Coeff {
        self.series.coeff(&[i, j])
    }

    /// `F(a, b)` for augmentation-zero series.
    pub fn apply(&self, a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
        if a.trunc() > self.trunc() {
            return Err(Error::Incompatible(format!(
                "law truncated at {} applied to series truncated at {}",
                self.trunc(),
                a.trunc()
            )));
        }
        self.series.compose(&[a.clone(), b.clone()])
    }

    pub fn check_axioms(&self) -> VerificationReport {
        let t = self.trunc();
        let ring = self.ring().clone();
        let mut report = VerificationReport::new(
            "fgl-axioms",
            Instance { fgls: vec![self.label.clone()], trunc: Some(t), ..Instance::default() },
        );
        report.caveat(format!("certified to truncation {t}"));

        let x1 = TruncSeries::var(1, t, ring.clone(), 0);
        let zero1 = TruncSeries::zero(1, t, ring.clone());
        let unit_left = self.apply(&x1, &zero1);
        let unit_right = self.apply(&zero1, &x1);
        let unit_diff = match (unit_left, unit_right) {
            (Ok(l), Ok(r)) => l.first_difference(&x1).or_else(|| r.first_difference(&x1)),
            _ => Some(crate::series::Monomial::one(1)),
        };
        report.check("unit", unit_diff.is_none(), describe(unit_diff));

        let (x, y) = xy(t, &ring);
        let swapped = self.apply(&y, &x).expect("compatible operands");
        let comm_diff = swapped.first_difference(&self.series);
        report.check("commutativity", comm_diff.is_none(), describe(comm_diff));

        let v: Vec<TruncSeries> = (0..3).map(|i| TruncSeries::var(3, t, ring.clone(), i)).collect();
        let left = self.apply(&v[0], &self.apply(&v[1], &v[2]).expect("compatible")).expect("compatible");
        let right = self.apply(&self.apply(&v[0], &v[1]).expect("compatible"), &v[2]).expect("compatible");
        let assoc_diff = left.first_difference(&right);
        report.check("associativity", assoc_diff.is_none(), describe(assoc_diff));
        report
    }

    /// The series `i(x)` with `F(x, i(x)) = 0`, solved degree by degree.
    pub fn formal_inverse(&self) -> TruncSeries {
        let t = self.trunc();
        let ring = self.ring().clone();
        let x = TruncSeries::var(1, t, ring.clone(), 0);
        let mut inv = x.neg();
        for k in 2..=t as u32 {
            let residue = self.apply(&x, &inv).expect("compatible").coeff(&[k]);
            if !residue.is_zero() {
                let fix =
                    TruncSeries::from_terms(1, t, ring.clone(), [(vec![k], -&residue)]).expect("well-formed term");
                inv = inv.add(&fix).expect("compatible");
            }
        }
        inv
    }

    /// `m ·_F x` as a one-variable series.
    pub fn n_series(&self, m: i64) -> TruncSeries {
        let t = self.trunc();
        let x = TruncSeries::var(1, t, self.ring().clone(), 0);
        if m == 0 {
            return TruncSeries::zero(1, t, self.ring().clone());
        }
        let mut acc = x.clone();
        for _ in 1..m.unsigned_abs() {
            acc = self.apply(&x, &acc).expect("compatible");
        }
        if m < 0 {
            acc = self.formal_inverse().compose(&[acc]).expect("augmentation-zero");
        }
        acc
    }

    /// Left fold `((a_1 +_F a_2) +_F a_3) ...`; the empty sum is zero.
    pub fn formal_sum(&self, args: &[TruncSeries]) -> Result<TruncSeries> {
        let Some((first, rest)) = args.split_first() else {
            return Err(Error::Incompatible("empty formal sum has no shape; use formal_sum_in".into()));
        };
        if !first.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = first.clone();
        for a in rest {
            acc = self.apply(&acc, a)?;
        }
        Ok(acc)
    }

    /// Like [`formal_sum`](Self::formal_sum) but returns zero of the given shape for no arguments.
    pub fn formal_sum_in(&self, nvars: usize, trunc: usize, args: &[TruncSeries]) -> Result<TruncSeries> {
        if args.is_empty() {
            return Ok(TruncSeries::zero(nvars, trunc, self.ring().clone()));
        }
        self.formal_sum(args)
    }

    fn integral_coeffs(&self) -> Result<()> {
        if self.ring().is_dyadic() {
            return Err(Error::DyadicMod2);
        }
        Ok(())
    }

    /// `F ≡ x + y mod 2`, certified to the truncation.
    pub fn is_even(&self) -> Result<bool> {
        self.integral_coeffs()?;
        for (m, c) in self.series.terms() {
            let e = m.exponents();
            if e[0] >= 1 && e[1] >= 1 && !c.mod2_reduce()?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `2 | a_mm` for every `1 <= m <= trunc / 2`.
    pub fn diag_even(&self) -> Result<bool> {
        self.integral_coeffs()?;
        for m in 1..=(self.trunc() / 2) as u32 {
            if !self.coefficient(m, m).mod2_reduce()?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest `m` with `a_mm` odd, if any within the truncation.
    pub fn first_odd_diagonal(&self) -> Result<Option<u32>> {
        self.integral_coeffs()?;
        for m in 1..=(self.trunc() / 2) as u32 {
            if !self.coefficient(m, m).mod2_reduce()?.is_zero() {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    /// `i(x) ≡ x + a_ss x^{2s}` mod 2 through degree `2s`, where `s` is the first odd diagonal.
    pub fn inverse_mod2_check(&self) -> Result<VerificationReport> {
        let t = self.trunc();
        let s = self.first_odd_diagonal()?;
        let inv = self.formal_inverse().mod2_reduce()?;
        let limit = s.map_or(t, |s| 2 * s as usize);
        let ring = self.ring().clone();
        let mut expected = BTreeMap::new();
        expected.insert(1usize, ring.one());
        if let Some(s) = s {
            expected.insert(2 * s as usize, self.coefficient(s, s).mod2_reduce()?);
        }
        let mismatch = (1..=limit).find(|&k| {
            let want = expected.get(&k).cloned().unwrap_or_else(|| ring.zero());
            inv.coeff(&[k as u32]) != want
        });

        let mut r = VerificationReport::new(
            "lemma43",
            Instance { fgls: vec![self.label.clone()], trunc: Some(t), ..Instance::default() },
        );
        r.computed("first_odd_diagonal", s).computed("inverse_mod2", &inv);
        match s {
            Some(s) => r.check(
                format!("inverse ≡ x + a_{s}{s} x^{} mod 2 through degree {limit}", 2 * s),
                mismatch.is_none(),
                mismatch.map(|k| format!("differs at x^{k}")).unwrap_or_default(),
            ),
            None => r.check(
                "inverse ≡ x mod 2",
                mismatch.is_none(),
                mismatch.map(|k| format!("differs at x^{k}")).unwrap_or_default(),
            ),
        };
        r.caveat(format!("certified to truncation {t}"));
        Ok(r)
    }

    /// The strictly isomorphic law `phi(F(phi^-1(x), phi^-1(y)))` for
    /// `phi = x + O(x^2)`.
    pub fn conjugate_by(&self, phi: &TruncSeries) -> Result<FormalGroupLaw> {
        let t = self.trunc();
        if phi.nvars() != 1 || phi.trunc() != t || phi.ring() != self.ring() {
            return Err(Error::Incompatible("conjugating series must be one-variable over the same ring".into()));
        }
        let x = TruncSeries::var(1, t, self.ring().clone(), 0);
        if phi.homogeneous_component(1)? != x || !phi.constant_term().is_zero() {
            return Err(Error::Incompatible("conjugating series must be x + O(x^2)".into()));
        }
        // compositional inverse, degree by degree
        let mut psi = x.clone();
        for k in 2..=t as u32 {
            let r = phi.compose(&[psi.clone()])?.coeff(&[k]);
            if !r.is_zero() {
                psi = psi.sub(&TruncSeries::from_terms(1, t, self.ring().clone(), [(vec![k], r)])?)?;
            }
        }
        let (u, v) = xy(t, self.ring());
        let inner = self.apply(&psi.compose(&[u])?, &psi.compose(&[v])?)?;
        let series = phi.compose(&[inner])?;
        Ok(FormalGroupLaw { series, label: format!("{}^phi", self.label), warnings: Vec::new() })
    }

    /// Substitutes integers for the parameters of a parametric law.
    pub fn specialize(&self, values: &[BigInt]) -> Result<FormalGroupLaw> {
        Ok(FormalGroupLaw {
            series: self.series.specialize(values)?,
            label: self.label.clone(),
            warnings: self.warnings.clone(),
        })
    }

    /// Parses `additive`, `multiplicative:a=<int>`, `lorentz:beta=<int>`,
    /// `elliptic:a1=..,a2=..,a3=..,a4=..,a6=..` (missing entries are 0;
    /// `elliptic:generic` keeps symbolic parameters) and `table:<path>`.
    pub fn parse_spec(spec: &str, trunc: usize) -> Result<FormalGroupLaw> {
        let spec = spec.trim();
        let (head, args) = spec.split_once(':').unwrap_or((spec, ""));
        let z = CoeffRing::Integers;
        let params = |allowed: &[&str]| -> Result<BTreeMap<String, BigInt>> {
            let mut out = BTreeMap::new();
            for part in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (k, v) =
                    part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
                let k = k.trim();
                if !allowed.contains(&k) {
                    return Err(Error::Parse(format!("unknown parameter {k:?} in {spec:?}")));
                }
                let v: BigInt = v.trim().parse().map_err(|_| Error::Parse(format!("bad integer {v:?} in {spec:?}")))?;
                out.insert(k.to_string(), v);
            }
            Ok(out)
        };
        let f = match head {
            "additive" if args.is_empty() => Self::make_builtin(FglKind::Additive, &z, trunc)?,
            "multiplicative" => {
                let p = params(&["a"])?;
                let a = p.get("a").cloned().unwrap_or_else(|| BigInt::from(1));
                Self::make_builtin(FglKind::Multiplicative(Coeff::Int(a)), &z, trunc)?
            }
            "lorentz" => {
                let p = params(&["beta"])?;
                let b = p.get("beta").cloned().ok_or_else(|| Error::Parse(format!("missing beta in {spec:?}")))?;
                Self::make_builtin(FglKind::Lorentz(Coeff::Int(b)), &z, trunc)?
            }
            "elliptic" if args == "generic" => Self::elliptic_generic(trunc)?.with_label("elliptic:generic"),
            "elliptic" => {
                let p = params(&["a1", "a2", "a3", "a4", "a6"])?;
                let get = |k: &str| Coeff::Int(p.get(k).cloned().unwrap_or_else(BigInt::zero));
                Self::make_elliptic([get("a1"), get("a2"), get("a3"), get("a4"), get("a6")], &z, trunc)?
            }
            "table" if !args.is_empty() => Self::from_table_file(Path::new(args), trunc)?,
            _ => return Err(Error::Parse(format!("unknown formal group law {spec:?}"))),
        };
        Ok(f)
    }
}

fn check_ring(c: &Coeff, ring: &CoeffRing) -> Result<()> {
    if c.in_ring(ring) {
        Ok(())
    } else {
        Err(Error::Incompatible(format!("coefficient in {} for a law over {ring}", c.ring())))
    }
}

fn describe(m: Option<crate::series::Monomial>) -> String {
    match m {
        None => String::new(),
        Some(m) => format!("first offending monomial {m} (degree {})", m.degree()),
    }
}
