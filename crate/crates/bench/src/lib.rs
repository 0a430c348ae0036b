//! Seeded inputs shared by the benchmarks.

use fga_core::{CoeffRing, FgaContext, FormalGroupLaw, RootSystem, TruncSeries};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A `rows x cols` integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix(rows: usize, cols: usize, bound: i64, seed: u64) -> Vec<Vec<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows).map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).collect()
}

/// A dense series in `nvars` variables with small random coefficients and no constant term.
pub fn random_series(nvars: usize, trunc: usize, seed: u64) -> TruncSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = (1..=trunc).flat_map(|d| fga_core::Monomial::all_of_degree(nvars, d)).map(|m| {
        let c = CoeffRing::Integers.from_int(rng.gen_range(-9i64..=9));
        (m.exponents().to_vec(), c)
    });
    TruncSeries::from_terms(nvars, trunc, CoeffRing::Integers, terms.collect::<Vec<_>>()).expect("valid terms")
}

/// A fresh context with empty caches.
pub fn context(rs: &str, fgl: &str, trunc: usize) -> FgaContext {
    let rs: RootSystem = rs.parse().expect("root system");
    FgaContext::new(rs, FormalGroupLaw::parse_spec(fgl, trunc).expect("law"))
}
