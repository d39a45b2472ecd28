//! Deterministic randomness: every random choice in the engine flows from an
//! explicit `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rat, LinearForm, Rational};

pub type SeededRng = ChaCha8Rng;

/// Independent stream for `(seed, stream)`.
pub fn seeded(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform rational `n / den` with `|n| <= max_num`.
pub fn small_rational(rng: &mut SeededRng, max_num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-max_num..=max_num), den)
}

pub fn small_vector(rng: &mut SeededRng, dim: usize, max_num: i64, den: i64) -> LinearForm {
    LinearForm::new((0..dim).map(|_| small_rational(rng, max_num, den)).collect())
}

pub fn small_int_vector(rng: &mut SeededRng, dim: usize, max: i64) -> Vec<i64> {
    (0..dim).map(|_| rng.gen_range(-max..=max)).collect()
}
