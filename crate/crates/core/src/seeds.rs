//! Derivation of independent per-stage seeds from one master seed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TERRAIN: u64 = 1;
pub const PDM: u64 = 2;
pub const PLAN: u64 = 3;
pub const SLIP: u64 = 4;

/// Seed for the stage identified by `labels`, e.g. `[PLAN, segment, rover, attempt]`.
pub fn derive(master: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(master, |seed, &label| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(label);
        rng.next_u64()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_separate_streams() {
        assert_eq!(derive(7, &[PLAN, 1, 2]), derive(7, &[PLAN, 1, 2]));
        assert_ne!(derive(7, &[PLAN, 1, 2]), derive(7, &[PLAN, 2, 1]));
        assert_ne!(derive(7, &[TERRAIN]), derive(8, &[TERRAIN]));
        assert_eq!(derive(7, &[]), 7);
    }
}
