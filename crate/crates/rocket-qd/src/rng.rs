//! Seed derivation.
//!
//! Every random stream in a run is keyed by the run seed plus the structural
//! indices that identify the consumer (emitter index, generation, solution
//! index, wind condition). Deriving streams this way keeps results identical
//! no matter how evaluations are scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 output function. Good avalanche behavior for cheap cost, which
/// is all that is needed to turn structured indices into spread-out seeds.
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a list of index words into a single seed.
pub fn mix(parts: &[u64]) -> u64 {
    let mut h = 0x6A09_E667_F3BC_C909; // arbitrary non-zero start
    for &p in parts {
        h = splitmix64(h ^ splitmix64(p));
    }
    h
}

/// A deterministic generator keyed by the given index words.
pub fn stream(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix_is_deterministic() {
        assert_eq!(mix(&[1, 2, 3]), mix(&[1, 2, 3]));
    }

    #[test]
    fn mix_depends_on_order_and_content() {
        assert_ne!(mix(&[1, 2]), mix(&[2, 1]));
        assert_ne!(mix(&[0]), mix(&[1]));
        assert_ne!(mix(&[0, 0]), mix(&[0]));
    }

    #[test]
    fn nearby_indices_produce_distinct_seeds() {
        // Seeds for consecutive (generation, solution, condition) triples must
        // not collide; sample a block and require all-distinct.
        let mut seen = std::collections::HashSet::new();
        for gen in 0..20u64 {
            for sol in 0..37u64 {
                for cond in 0..3u64 {
                    assert!(seen.insert(mix(&[42, gen, sol, cond])));
                }
            }
        }
    }

    #[test]
    fn streams_replay() {
        use rand::Rng;
        let mut a = stream(&[7, 1]);
        let mut b = stream(&[7, 1]);
        for _ in 0..16 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }
}
