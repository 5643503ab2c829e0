//! Seed derivation and random streams.
//!
//! Every random stream in the crate is a ChaCha8 generator seeded from a
//! 64-bit key. Keys are derived by folding integer components through the
//! SplitMix64 finalizer, so a stream depends only on its key tuple and never
//! on generation order or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Domain tags that keep streams for different purposes disjoint.
pub mod tag {
    pub const BBOB_INSTANCE: u64 = 0x4242_4f42;
    pub const TREE: u64 = 0x5452_4545;
    pub const ACCEPTANCE: u64 = 0x4143_4350;
    pub const DESIGN: u64 = 0x4445_5349;
    pub const TOUR: u64 = 0x544f_5552;
    pub const TSNE_INIT: u64 = 0x5453_4e45;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a tuple of integers into one 64-bit seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6a09_e667_f3bc_c908, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn stream(parts: &[u64]) -> Stream {
    ChaCha8Rng::seed_from_u64(derive_seed(parts))
}
