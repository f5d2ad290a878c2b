//! Monte Carlo validation: spherically isotropic plane-wave noise, the
//! truncated pseudo-inverse under the linear measurement model, and the
//! mode-sum form of the isotropic covariance dyadic.
//!
//! Every random quantity is drawn from a [`RngSpec`] stream, and parallel
//! drivers are expected to derive one [`RngSpec::substream`] per trial and
//! reduce results in trial order, which keeps reports bit-reproducible.

mod estimation;
mod green;
mod noise;
mod stats;

pub use estimation::{
    em_estimation_setup, estimation_trial, simulate_linear_estimation, summarize_estimation, EstimationReport,
    EstimationSetup,
};
pub use green::{green_identity_check, random_point_pairs, GreenCheck};
pub use noise::{
    isotropic_coeffs, mode_index, modes, sample_isotropic_coeffs, sample_plane_waves, NoiseModel, NoiseRealization,
    PlaneWave,
};
pub use stats::{empirical_covariance, PairStat, TrialIndex, TrialReport, TrialRow, MIN_REALIZATIONS};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Seed and stream of a deterministic random source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    /// Independent child stream `i`; distinct `(stream, i)` pairs map to
    /// distinct streams with overwhelming probability.
    pub fn substream(&self, i: u64) -> Self {
        Self {
            seed: self.seed,
            stream: splitmix(self.stream ^ splitmix(i.wrapping_add(0x5bd1_e995))),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Circularly symmetric complex Gaussian with `E|z|² = variance`.
pub fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = libm::sqrt(0.5 * variance);
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = RngSpec::new(7);
        let x: u64 = a.rng().random();
        assert_eq!(x, a.rng().random::<u64>());
        assert_ne!(x, a.substream(0).rng().random::<u64>());
        assert_ne!(a.substream(0), a.substream(1));
        assert_ne!(a.substream(1).substream(0), a.substream(0).substream(1));
    }

    #[test]
    fn complex_gaussian_moments() {
        let mut rng = RngSpec::new(1).rng();
        let n = 200_000;
        let (mut p, mut pseudo, mut re2) = (0.0, Complex64::new(0.0, 0.0), 0.0);
        for _ in 0..n {
            let z = complex_gaussian(&mut rng, 3.0);
            p += z.norm_sqr();
            pseudo += z * z;
            re2 += z.re * z.re;
        }
        let n = n as f64;
        assert!((p / n - 3.0).abs() < 0.05);
        assert!((pseudo / n).norm() < 0.05);
        assert!((re2 / n - 1.5).abs() < 0.03);
    }
}
