//! Seeded samplers shared by the verification suites.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::vector::{Rational, Vector};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derived stream for worker `index`, disjoint from the parent's.
pub fn substream(seed: u64, index: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index + 1);
    r
}

/// Coordinate distribution used throughout: uniform rationals `p/q` in
/// `[-bound, bound]` with `1 ≤ q ≤ max_denom`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalDist {
    pub bound: i64,
    pub max_denom: i64,
}

impl Default for RationalDist {
    fn default() -> Self {
        RationalDist { bound: 10, max_denom: 64 }
    }
}

impl RationalDist {
    pub fn sample(&self, rng: &mut impl Rng) -> Rational {
        let q = rng.gen_range(1..=self.max_denom);
        let p = rng.gen_range(-self.bound * q..=self.bound * q);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn vector(&self, rng: &mut impl Rng, dim: usize) -> Vector {
        Vector::new((0..dim).map(|_| self.sample(rng)).collect())
    }
}

/// Random convex weights with small denominators, summing to one exactly.
pub fn convex_weights(rng: &mut impl Rng, count: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..count).map(|_| rng.gen_range(0..=12)).collect();
    let total: i64 = raw.iter().sum();
    if total == 0 {
        let mut w = vec![Rational::from_integer(0.into()); count];
        w[0] = Rational::from_integer(1.into());
        return w;
    }
    raw.into_iter().map(|r| Rational::new(BigInt::from(r), BigInt::from(total))).collect()
}
