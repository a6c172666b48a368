use super::{block_end_schedule, check_codeword, AdversaryError, AttackOutcome};
use crate::channel::{ChannelParams, Codeword, DelayBudget, Resolution};

/// The macro-step every codeword is forced into: a 1 at each index whose
/// 1-based position is a multiple of `d_max`.
pub fn canonical_macro_step(m: usize, d_max: usize) -> Vec<u32> {
    (1..=m)
        .map(|p| u32::from(d_max > 0 && p % d_max == 0))
        .collect()
}

/// Delay-plus-noise attack for `k = 1` with `d_max·t = M`.
///
/// Each macro-step is cut into `t` blocks of `d_max` symbols. All symbols
/// are delayed to the end of their block; a block with no 1 gets its end
/// flipped on instead. One flip per block, so at most `t` per macro-step.
pub fn flip_and_delay_attack(
    c: &Codeword,
    ch: &ChannelParams,
    t: usize,
    d_max: usize,
) -> Result<AttackOutcome, AdversaryError> {
    check_codeword(c, ch)?;
    if ch.k() != Resolution::Finite(1) {
        return Err(AdversaryError::InvalidParams("needs k = 1".into()));
    }
    if d_max == 0 || d_max.checked_mul(t) != Some(ch.m()) {
        return Err(AdversaryError::InvalidParams(format!(
            "d_max·t = {d_max}·{t} must equal M = {}",
            ch.m()
        )));
    }
    match ch.budget() {
        DelayBudget::Max(b) if b + 1 >= d_max as u64 => {}
        DelayBudget::Max(b) => {
            return Err(AdversaryError::InvalidParams(format!(
                "delay bound {b} cannot reach the end of a {d_max}-block"
            )))
        }
        DelayBudget::Avg(_) => return Err(AdversaryError::WrongBudget("max")),
    }
    let mut out = AttackOutcome::from_schedule(block_end_schedule(ch.codeword_len(), d_max), ch);
    out.flips = c
        .bits()
        .chunks(d_max)
        .enumerate()
        .filter(|(_, block)| block.iter().all(|&b| b == 0))
        .map(|(i, _)| (i + 1) * d_max - 1)
        .collect();
    Ok(out)
}
