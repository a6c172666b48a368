use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_codeword, AdversaryError, AttackOutcome};
use crate::channel::{Capacity, ChannelParams, Codeword, DelaySchedule};

/// Seeded feasible baseline.
///
/// Under a max budget each delay is uniform on `[0, D_max]`. Under an
/// average budget a total is drawn uniformly from `[0, capacity]` and split
/// over the 1s in proportion to random weights, rounding down.
pub fn random_attack(
    c: &Codeword,
    ch: &ChannelParams,
    seed: u64,
) -> Result<AttackOutcome, AdversaryError> {
    check_codeword(c, ch)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ch.codeword_len();
    let delays = match ch.capacity() {
        Capacity::PerSymbol(d) => (0..n).map(|_| rng.random_range(0..=d)).collect(),
        Capacity::Total(cap) => {
            let mut delays = vec![0u64; n];
            let ones: Vec<usize> = c.ones().collect();
            if !ones.is_empty() && cap > 0 {
                let total = rng.random_range(0..=cap);
                let weights: Vec<u64> = ones
                    .iter()
                    .map(|_| rng.random_range(1..=1u64 << 32))
                    .collect();
                let sum: u128 = weights.iter().map(|&w| u128::from(w)).sum();
                for (&i, &w) in ones.iter().zip(&weights) {
                    delays[i] = (u128::from(total) * u128::from(w) / sum) as u64;
                }
            }
            delays
        }
    };
    Ok(AttackOutcome::from_schedule(DelaySchedule::new(delays), ch))
}
