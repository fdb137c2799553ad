//! Seeded random rational data.
//!
//! Samples are sparse: each vector draws its own zero density, so that points on
//! low-dimensional strata (many vanishing coordinates) show up regularly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lie::Covector;
use crate::scalar::Scalar;

/// Deterministic generator for stream `stream` of seed `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug)]
pub struct SparseSampler {
    /// Zero densities to choose from, one per drawn vector.
    pub zero_densities: Vec<f64>,
    pub max_numerator: i64,
    pub max_denominator: i64,
}

impl Default for SparseSampler {
    fn default() -> Self {
        SparseSampler { zero_densities: vec![0.0, 0.25, 0.5, 0.75, 0.9], max_numerator: 9, max_denominator: 4 }
    }
}

impl SparseSampler {
    pub fn nonzero_scalar<S: Scalar, R: Rng>(&self, rng: &mut R) -> S {
        let mut num = rng.gen_range(1..=self.max_numerator);
        if rng.gen_bool(0.5) {
            num = -num;
        }
        S::from_ratio(num, rng.gen_range(1..=self.max_denominator))
    }

    pub fn positive_scalar<S: Scalar, R: Rng>(&self, rng: &mut R) -> S {
        S::from_ratio(rng.gen_range(1..=self.max_numerator), rng.gen_range(1..=self.max_denominator))
    }

    pub fn vector<S: Scalar, R: Rng>(&self, rng: &mut R, n: usize) -> Vec<S> {
        let density = self.zero_densities[rng.gen_range(0..self.zero_densities.len())];
        (0..n)
            .map(|_| if rng.gen_bool(density) { S::zero() } else { self.nonzero_scalar(rng) })
            .collect()
    }

    /// A vector with at least one non-zero entry.
    pub fn nonzero_vector<S: Scalar, R: Rng>(&self, rng: &mut R, n: usize) -> Vec<S> {
        let mut v: Vec<S> = self.vector(rng, n);
        if n > 0 && v.iter().all(|x| x.is_zero()) {
            let i = rng.gen_range(0..n);
            v[i] = self.nonzero_scalar(rng);
        }
        v
    }

    pub fn covectors<S: Scalar>(&self, n: usize, count: usize, seed: u64) -> Vec<Covector<S>> {
        let mut rng = rng_for(seed, 0);
        (0..count).map(|_| Covector(self.vector(&mut rng, n))).collect()
    }
}

/// `count` sparse rational covectors of length `n` from the default sampler.
pub fn random_covectors<S: Scalar>(n: usize, count: usize, seed: u64) -> Vec<Covector<S>> {
    SparseSampler::default().covectors(n, count, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    #[test]
    fn sampling_is_deterministic_and_sparse() {
        let a = random_covectors::<Rational>(6, 200, 7);
        assert_eq!(a, random_covectors::<Rational>(6, 200, 7));
        assert_ne!(a, random_covectors::<Rational>(6, 200, 8));
        assert!(a.iter().any(|v| v.is_zero()));
        assert!(a.iter().any(|v| v.iter().all(|x| !x.is_zero())));
        let mut rng = rng_for(1, 2);
        let s = SparseSampler::default();
        for _ in 0..50 {
            assert!(!Covector::<Rational>(s.nonzero_vector(&mut rng, 3)).is_zero());
            assert!(s.positive_scalar::<Rational, _>(&mut rng) > Rational::from_ratio(0, 1));
        }
    }
}
