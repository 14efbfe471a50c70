//! Concrete Rota-Baxter algebras in which identities are checked exactly:
//! polynomial integration (weight 0) and sequence prefix sums (weight −1).

pub mod integral;
pub mod sequence;

pub use integral::{
    check_combination_integral, eval_tree_integral, kernel_representation_check,
    rb_law_holds_integral, simplex_volume, RationalPolynomial, SimplexKernel,
};
pub use sequence::{
    chain_count, chain_count_formula_report, chain_count_prefix_value, check_combination_sum,
    eval_tree_sum, prefix_sum, rb_law_holds_sum, ChainCountReport, ChainSet, CountRow,
    FiniteSequence,
};

use rand::Rng;

/// Default cap on tuples visited by chain enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Random polynomial with integer coefficients in `[-bound, bound]` and
/// degree at most `max_degree`.
pub fn random_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    max_degree: usize,
    bound: i64,
) -> RationalPolynomial {
    let coeffs: Vec<i64> = (0..=max_degree)
        .map(|_| rng.random_range(-bound..=bound))
        .collect();
    RationalPolynomial::from_integer_coeffs(&coeffs)
}

/// Random sequence with integer values in `[-bound, bound]`.
pub fn random_sequence<R: Rng + ?Sized>(
    rng: &mut R,
    horizon: usize,
    bound: i64,
) -> FiniteSequence {
    let values: Vec<i64> = (0..horizon)
        .map(|_| rng.random_range(-bound..=bound))
        .collect();
    FiniteSequence::from_integers(&values)
}

/// Horizon used for model checks at cell `(a, b)`: comfortably more than the
/// operator depth.
pub fn model_check_horizon(a: u32, b: u32) -> usize {
    2 * (a as usize + b as usize) + 4
}

/// Stable per-task seed so grid sweeps are deterministic regardless of
/// thread scheduling (splitmix64 mix of the user seed and the task index).
pub fn derive_seed(seed: u64, a: u32, b: u32, trial: u32) -> u64 {
    let mut z = seed
        ^ ((a as u64) << 42)
        ^ ((b as u64) << 21)
        ^ trial as u64;
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
