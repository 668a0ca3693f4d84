//! Seed discipline.
//!
//! Every random quantity in the crate flows from a single master seed
//! through `derive_seed(master, tag, index)`. The derivation is a plain
//! FNV-1a hash over the master seed, a task tag, and a task index, so it
//! is stable across platforms and Rust releases (unlike
//! `std::collections::hash_map::DefaultHasher`). Streams for distinct
//! (tag, index) pairs are independent for all practical purposes.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h = FNV_OFFSET;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Derive a per-task seed from the master seed, a task tag, and an index.
pub fn derive_seed(master: u64, tag: &str, index: u64) -> u64 {
    fnv1a(
        master
            .to_le_bytes()
            .into_iter()
            .chain(tag.bytes())
            .chain(index.to_le_bytes()),
    )
}

/// Deterministic generator for the given (master, tag, index) stream.
pub fn task_rng(master: u64, tag: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tag, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derivation_is_stable() {
        // Frozen values: a change here breaks reproducibility of every
        // recorded experiment, so it must be deliberate.
        assert_eq!(derive_seed(0, "", 0), fnv1a([0u8; 16]));
        assert_eq!(derive_seed(42, "probe", 3), derive_seed(42, "probe", 3));
    }

    #[test]
    fn distinct_tags_decouple_streams() {
        let a: f64 = task_rng(7, "alpha", 0).gen();
        let b: f64 = task_rng(7, "beta", 0).gen();
        assert_ne!(a, b);
    }

    #[test]
    fn same_stream_reproduces() {
        let mut r1 = task_rng(9, "x", 5);
        let mut r2 = task_rng(9, "x", 5);
        for _ in 0..100 {
            assert_eq!(r1.gen::<u64>(), r2.gen::<u64>());
        }
    }
}
