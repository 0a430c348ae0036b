//! Acceptance criteria 1-9. Each test prints one `criterion N: PASS|FAIL` line to stderr.

use std::io::Write;
use std::ops::RangeInclusive;

use fga_core::lattice::{annihilator_check, cor63_check, hnf, kernel_model, snf, tau};
use fga_core::{
    Coeff, CoeffRing, Error, FgaContext, FormalGroupLaw, HalfVector, RootSystem, Status, TruncSeries, Weight,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Truncation for the axiom checks.
const AXIOM_TRUNC: usize = 8;
/// Truncation for the randomized inverse checks.
const INVERSE_TRUNC: usize = 10;
const INVERSE_LAWS: usize = 20;
/// Truncation for `Θ_d/2`; the odd witness for `a_12` odd sits in degree `6d`.
const DIV2_TRUNC: usize = 12;
const DIV2N_TRUNC: usize = 10;
/// Base truncation `D` for lattice computations; stabilization reruns at `D + 2`.
const LATTICE_TRUNC: usize = 8;
const STABILIZATION_STEP: usize = 2;
const B3_DEGREES: RangeInclusive<usize> = 2..=6;
const D4_DEGREES: RangeInclusive<usize> = 2..=5;
const SNF_SAMPLES: usize = 200;
const SNF_MAX_DIM: usize = 30;
const SNF_ENTRY_BOUND: i64 = 50;
const SEED: u64 = 0x5eed_f6a;

fn verdict(n: u32, ok: bool, summary: &str) {
    let line = format!("criterion {n}: {}: {summary}", if ok { "PASS" } else { "FAIL" });
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(ok, "{line}");
}

fn rs(s: &str) -> RootSystem {
    s.parse().unwrap()
}

fn ctx(r: &str, fgl: &str, t: usize) -> FgaContext {
    FgaContext::new(rs(r), FormalGroupLaw::parse_spec(fgl, t).unwrap())
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn grid() -> Vec<(&'static str, usize)> {
    B3_DEGREES.map(|d| ("B3", d)).chain(D4_DEGREES.map(|d| ("D4", d))).collect()
}

#[test]
fn criterion_1_fgl_engine() {
    let mut failures = Vec::new();
    let mut laws: Vec<FormalGroupLaw> =
        ["additive", "multiplicative:a=1", "multiplicative:a=2", "lorentz:beta=1", "lorentz:beta=2"]
            .iter()
            .map(|s| FormalGroupLaw::parse_spec(s, AXIOM_TRUNC).unwrap())
            .collect();
    laws.push(FormalGroupLaw::elliptic_generic(AXIOM_TRUNC).unwrap());
    for f in &laws {
        let r = f.check_axioms();
        if r.status != Status::Pass {
            failures.push(format!("{} axioms: {:?}", f.label(), r.failed_checks().collect::<Vec<_>>()));
        }
    }

    // x + y - a1 xy - a2 (x^2 y + x y^2) - 2 a3 (x^3 y + x y^3) + (a1 a2 - 3 a3) x^2 y^2
    let f = laws.last().unwrap();
    let ring = f.ring().clone();
    let a = |n: &str| ring.param(n).unwrap();
    let (a1, a2, a3) = (a("a1"), a("a2"), a("a3"));
    let k = |n: i64| ring.from_int(n);
    let display: Vec<(Vec<u32>, Coeff)> = vec![
        (vec![1, 0], k(1)),
        (vec![0, 1], k(1)),
        (vec![1, 1], -&a1),
        (vec![2, 1], -&a2),
        (vec![1, 2], -&a2),
        (vec![3, 1], -&(&k(2) * &a3)),
        (vec![1, 3], -&(&k(2) * &a3)),
        (vec![2, 2], &(&a1 * &a2) - &(&k(3) * &a3)),
    ];
    let expected = TruncSeries::from_terms(2, 4, ring.clone(), display).unwrap();
    let low = f.series().with_trunc(4);
    if low != expected {
        failures.push(format!("elliptic display mismatch at {:?}", low.first_difference(&expected)));
    }
    verdict(1, failures.is_empty(), &format!("{} laws checked at truncation {AXIOM_TRUNC}; {failures:?}", laws.len()));
}

/// A random integral law: a random integer elliptic law conjugated by a random `φ(x) = x + ...`.
fn random_law(rng: &mut ChaCha8Rng, even_phi: bool) -> FormalGroupLaw {
    let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-3..=3));
    let f = FormalGroupLaw::elliptic_int(a, INVERSE_TRUNC).unwrap();
    let z = CoeffRing::Integers;
    let mut terms = vec![(vec![1u32], z.one())];
    for k in 2..=4u32 {
        let c: i64 = rng.gen_range(-3..=3);
        terms.push((vec![k], z.from_int(if even_phi { 2 * c } else { c })));
    }
    let phi = TruncSeries::from_terms(1, INVERSE_TRUNC, z, terms).unwrap();
    f.conjugate_by(&phi).unwrap()
}

fn inverse_mod2(f: &FormalGroupLaw) -> Vec<BigInt> {
    let inv = f.formal_inverse();
    (0..=INVERSE_TRUNC as u32)
        .map(|k| inv.coeff(&[k]).as_int().expect("integer coefficient").mod_floor(&big(2)))
        .collect()
}

fn diagonal_parity(f: &FormalGroupLaw, m: u32) -> BigInt {
    f.coefficient(m, m).as_int().expect("integer coefficient").mod_floor(&big(2))
}

#[test]
fn criterion_2_inverse_mod_2() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut by_s = [0usize; 3];
    let mut attempts = 0;
    while by_s.iter().sum::<usize>() < INVERSE_LAWS {
        attempts += 1;
        assert!(attempts < 20_000, "could not sample laws for every s");
        let f = random_law(&mut rng, false);
        // largest s in {1,2,3} with 2 | a_mm for all m < s
        let s_max = (1..=3u32).take_while(|&s| (1..s).all(|m| diagonal_parity(&f, m).is_zero())).last().unwrap();
        let slot = s_max as usize - 1;
        if by_s[slot] >= INVERSE_LAWS.div_ceil(3) {
            continue;
        }
        by_s[slot] += 1;
        let inv = inverse_mod2(&f);
        for s in 1..=s_max {
            let two_s = 2 * s as usize;
            for (k, c) in inv.iter().enumerate().take(two_s + 1) {
                let want = match k {
                    1 => BigInt::one(),
                    k if k == two_s => diagonal_parity(&f, s),
                    _ => BigInt::zero(),
                };
                if *c != want {
                    failures.push(format!("s={s} law {}: x^{k} coefficient {c} vs {want}", f.label()));
                }
            }
        }
    }

    let mut even_laws = vec![
        FormalGroupLaw::multiplicative(2, INVERSE_TRUNC),
        FormalGroupLaw::lorentz(1, INVERSE_TRUNC),
        FormalGroupLaw::lorentz(2, INVERSE_TRUNC),
    ];
    let mut found = 0;
    while found < 5 {
        attempts += 1;
        assert!(attempts < 40_000, "could not sample diagonal-even laws");
        let f = random_law(&mut rng, true);
        if f.diag_even().unwrap() {
            even_laws.push(f);
            found += 1;
        }
    }
    for f in &even_laws {
        let inv = inverse_mod2(f);
        let bad: Vec<usize> = (0..inv.len()).filter(|&k| inv[k] != BigInt::from(u8::from(k == 1))).collect();
        if !bad.is_empty() {
            failures.push(format!("diag-even law {}: not x mod 2 at degrees {bad:?}", f.label()));
        }
    }
    verdict(
        2,
        failures.is_empty(),
        &format!("laws per s = {by_s:?}, {} diag-even laws, truncation {INVERSE_TRUNC}; {failures:?}", even_laws.len()),
    );
}

#[test]
fn criterion_3_theta_divisibility() {
    let even = ["additive", "lorentz:beta=2", "elliptic:a1=2,a2=2,a3=2,a4=2,a6=2"];
    let odd = ["multiplicative:a=1", "lorentz:beta=1", "elliptic:a1=1"];
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in ["B3", "B4", "D4", "D5"] {
        for (laws, want) in [(&even, true), (&odd, false)] {
            for law in laws.iter() {
                let c = ctx(r, law, DIV2_TRUNC);
                for d in [1, 2] {
                    checked += 1;
                    let got = c.theta_div2(d).unwrap();
                    if got != want {
                        failures.push(format!("{r} {law} Θ_{d}/2 integral = {got}"));
                    }
                }
            }
        }
    }
    for r in ["D4", "D5"] {
        for law in even.iter().chain(odd.iter()) {
            let c = ctx(r, law, DIV2N_TRUNC);
            checked += 1;
            let div = c.theta_div2n().unwrap();
            let diag = c.fgl().diag_even().unwrap();
            if div != diag {
                failures.push(format!("{r} {law}: Θ_n/2^n integral = {div}, diag-even = {diag}"));
            }
        }
    }
    verdict(3, failures.is_empty(), &format!("{checked} boolean comparisons; {failures:?}"));
}

fn r_divisor_relevant(c: &FgaContext, d: usize) -> bool {
    c.alphas_of_weight(d).iter().any(|a| a.iter().enumerate().any(|(i, &k)| k > 0 && c.r(i + 1) > BigInt::one()))
}

#[test]
fn criterion_4_invariant_spans() {
    let laws = ["additive", "multiplicative:a=1", "lorentz:beta=2"];
    let mut failures = Vec::new();
    let mut cells = 0;
    for (r, d) in grid() {
        let zeta = rs(r).constants(d).unwrap().zeta;
        for law in laws {
            cells += 1;
            let c = ctx(r, law, LATTICE_TRUNC);
            let c2 = ctx(r, law, LATTICE_TRUNC + STABILIZATION_STEP);
            let inv = c.invariant_graded_lattice(d).unwrap();
            let inv2 = c2.invariant_graded_lattice(d).unwrap();
            if inv.hnf() != inv2.hnf() {
                failures.push(format!("{r} d={d} {law}: invariants not stable"));
            }
            let alpha = c.alpha_span_lattice(d, false).unwrap();
            let m = alpha.multiplier_from(&inv).unwrap().tau;
            if !m.divides(&zeta) {
                failures.push(format!("{r} d={d} {law}: multiplier {m} does not divide ζ = {zeta}"));
            }
            if r_divisor_relevant(&c, d) {
                let even = c.fgl().is_even().unwrap();
                let equal = match c.alpha_span_lattice(d, true) {
                    Ok(l) => l.same_lattice(&inv),
                    Err(Error::NonIntegralTheta { .. }) => false,
                    Err(e) => panic!("{e}"),
                };
                if equal != even {
                    failures.push(format!("{r} d={d} {law}: r-divided span equal = {equal}, even = {even}"));
                }
            }
        }
    }
    verdict(
        4,
        failures.is_empty(),
        &format!("{cells} cells at truncations {LATTICE_TRUNC}/{}; {failures:?}", LATTICE_TRUNC + STABILIZATION_STEP),
    );
}

#[test]
fn criterion_5_kernel_exponent() {
    let laws = ["additive", "multiplicative:a=1", "lorentz:beta=2"];
    let mut failures = Vec::new();
    let mut cells = 0;
    for (r, d) in grid() {
        let eta = rs(r).constants(d).unwrap().eta;
        for law in laws {
            cells += 1;
            let c = ctx(r, law, LATTICE_TRUNC);
            let even = c.fgl().is_even().unwrap();
            let kernel = kernel_model(&c, d).unwrap();
            let ideal = c.ideal_graded_lattice(d).unwrap();
            let e = ideal.multiplier_from(&kernel).unwrap().tau;
            let bound = match d {
                2 | 3 => big(if even { 1 } else { 2 }),
                4 => big(if even { 2 } else { 4 }),
                _ => eta.clone(),
            };
            if !e.divides(&bound) {
                failures.push(format!("{r} d={d} {law}: e = {e} does not divide {bound}"));
            }
        }
    }
    verdict(5, failures.is_empty(), &format!("{cells} cells at truncation {LATTICE_TRUNC}; {failures:?}"));
}

#[test]
fn criterion_6_annihilator() {
    let mut failures = Vec::new();
    let mut cells = 0;
    for r in ["B3", "D4"] {
        for d in 2..=5 {
            for law in ["multiplicative:a=1", "lorentz:beta=1", "lorentz:beta=2"] {
                cells += 1;
                let rep = annihilator_check(&ctx(r, law, LATTICE_TRUNC), d).unwrap();
                if rep.status != Status::Pass {
                    failures.push(format!("{r} d={d} {law}: {:?}", rep.failed_checks().collect::<Vec<_>>()));
                }
            }
        }
    }
    verdict(6, failures.is_empty(), &format!("{cells} cells; {failures:?}"));
}

#[test]
fn criterion_7_multiplicative_kernel() {
    let mut failures = Vec::new();
    for d in 2..=5 {
        for law in ["additive", "lorentz:beta=2"] {
            let rep = cor63_check(&ctx("B3", law, LATTICE_TRUNC), d).unwrap();
            if rep.status != Status::Pass {
                failures.push(format!("B3 d={d} {law}: {:?}", rep.failed_checks().collect::<Vec<_>>()));
            }
        }
    }
    verdict(7, failures.is_empty(), &format!("8 cells; {failures:?}"));
}

#[test]
fn criterion_8_deformation_exponent() {
    let fm = ctx("B3", "multiplicative:a=1", LATTICE_TRUNC);
    let fa = ctx("B3", "additive", LATTICE_TRUNC);
    let mut values = Vec::new();
    let mut ok = true;
    for d in 2..=5 {
        let t = tau(&fm, &fa, d).unwrap().tau;
        ok &= t.divides(&big(2));
        values.push(t.to_string());
    }
    verdict(8, ok, &format!("τ_d for d = 2..5: {values:?}"));
}

fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], bcols: usize) -> Vec<Vec<BigInt>> {
    a.iter().map(|row| (0..bcols).map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect()).collect()
}

/// Fraction-free elimination.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        sign
    } else {
        sign * &a[n - 1][n - 1]
    }
}

/// Back-substitution membership in the row span of an echelon matrix.
fn in_echelon_span(h: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in h {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        if !v[..p].iter().all(Zero::is_zero) {
            return false;
        }
        let (q, rem) = v[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return false;
        }
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    v.iter().all(Zero::is_zero)
}

fn is_hermite(h: &[Vec<BigInt>]) -> bool {
    let mut last: Option<usize> = None;
    for (i, row) in h.iter().enumerate() {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { return false };
        if last.is_some_and(|l| p <= l) || !row[p].is_positive() {
            return false;
        }
        for above in &h[..i] {
            if above[p].is_negative() || above[p] >= row[p] {
                return false;
            }
        }
        last = Some(p);
    }
    true
}

fn weights_round_trip() -> Vec<String> {
    let mut failures = Vec::new();
    for r in ["B3", "B4", "B5", "D4", "D5"] {
        let sys = rs(r);
        let n = sys.rank();
        for j in 1..=n {
            let mut w = vec![0; n];
            w[j - 1] = 1;
            let w = Weight(w);
            // doubled e-coordinates of ω_j
            let mut expect = vec![0i64; n];
            let spin = match r.as_bytes()[0] {
                b'B' => j == n,
                _ => j >= n - 1,
            };
            if spin {
                expect.iter_mut().for_each(|x| *x = 1);
                if r.starts_with('D') && j == n - 1 {
                    expect[n - 2] = -1;
                }
            } else {
                expect[..j].iter_mut().for_each(|x| *x = 2);
            }
            let e = sys.weight_to_e(&w).unwrap();
            if e != HalfVector(expect.clone()) {
                failures.push(format!("{r} ω_{j} -> {:?}, expected {expect:?}", e.0));
            }
            if sys.e_to_weight(&e).unwrap() != w {
                failures.push(format!("{r} ω_{j} does not round-trip"));
            }
        }
    }
    failures
}

#[test]
fn criterion_9_normal_forms_and_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut failures = Vec::new();
    for sample in 0..SNF_SAMPLES {
        let rows = rng.gen_range(1..=SNF_MAX_DIM);
        let cols = rng.gen_range(1..=SNF_MAX_DIM);
        let m: Vec<Vec<BigInt>> = (0..rows)
            .map(|_| (0..cols).map(|_| big(rng.gen_range(-SNF_ENTRY_BOUND..=SNF_ENTRY_BOUND))).collect())
            .collect();
        let s = snf(&m, cols);
        let d = mul(&mul(&s.u, &m, cols), &s.v, cols);
        let diagonal_ok = d
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { *x == s.diag[i] } else { x.is_zero() }));
        let unimodular = det(&s.u).abs().is_one() && det(&s.v).abs().is_one();
        let chain = s.diag.windows(2).all(|w| w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])))
            && s.diag.iter().all(|x| !x.is_negative());
        let h = hnf(&m, cols);
        let hermite = is_hermite(&h);
        let spans = m.iter().all(|row| in_echelon_span(&h, row));
        let rank = s.diag.iter().filter(|x| !x.is_zero()).count();
        let hs = snf(&h, cols);
        let same_index = h.len() == rank
            && hs.diag.iter().filter(|x| !x.is_zero()).product::<BigInt>()
                == s.diag.iter().filter(|x| !x.is_zero()).product::<BigInt>();
        if !(diagonal_ok && unimodular && chain && hermite && spans && same_index) {
            failures.push(format!(
                "sample {sample} ({rows}x{cols}): diag {diagonal_ok} unimodular {unimodular} chain {chain} \
                 hermite {hermite} spans {spans} index {same_index}"
            ));
        }
    }
    failures.extend(weights_round_trip());
    verdict(
        9,
        failures.is_empty(),
        &format!(
            "{SNF_SAMPLES} random matrices up to {SNF_MAX_DIM}x{SNF_MAX_DIM}, weights of B3..B5, D4..D5; {failures:?}"
        ),
    );
}
