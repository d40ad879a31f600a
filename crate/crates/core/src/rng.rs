//! Reproducible random streams.
//!
//! Every sample of an experiment draws from its own xoshiro256++ generator
//! seeded from `(seed, index)`, so results do not depend on how samples are
//! distributed over threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type QRng = Xoshiro256PlusPlus;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for sample `index` of the experiment seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> QRng {
    let mut state = mix64(seed ^ 0x9e37_79b9_7f4a_7c15).wrapping_add(mix64(index.wrapping_add(0x632b_e59b_d9b4_e019)));
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    QRng::from_seed(bytes)
}

/// Standard complex Gaussian with E|z|^2 = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
