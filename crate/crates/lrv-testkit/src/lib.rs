//! Test support shared across the workspace: seeded random formulas and
//! words, an independent evaluator for ultimately constant words, and the
//! extraction of whole symbolic lassos from looped models.
//!
//! Nothing here is part of the shipped toolkit; the crate exists so that the
//! integration suites of several crates can draw from one pool of generators
//! and oracles instead of three diverging copies.

mod concrete;
mod gen;
mod lasso;

pub use concrete::{eval_word_lasso, eval_word_lasso_at};
pub use gen::{gen_formula, gen_past_formula, gen_word, signature_for, GenCase, GenConfig};
pub use lasso::extract_lasso;

use rand::SeedableRng;

/// The one RNG used by all suites: explicit seed, reproducible runs.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
