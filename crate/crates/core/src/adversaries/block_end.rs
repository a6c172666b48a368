use super::{check_codeword, AdversaryError, AttackOutcome};
use crate::channel::{ChannelParams, Codeword, DelayBudget, DelaySchedule};

/// Delays every symbol to the last index of its length-`block` window.
///
/// A trailing partial window ends at `len − 1`. `block = 0` yields the
/// identity.
pub fn block_end_schedule(len: usize, block: usize) -> DelaySchedule {
    if block == 0 {
        return DelaySchedule::new(vec![0; len]);
    }
    DelaySchedule::new(
        (0..len)
            .map(|i| {
                let end = ((i / block + 1) * block - 1).min(len.saturating_sub(1));
                (end - i) as u64
            })
            .collect(),
    )
}

/// Pushes each symbol to the end of its `D_max`-block, so every block
/// reads back as zeros with the clipped count of its 1s at the last index.
pub fn block_end_attack(c: &Codeword, ch: &ChannelParams) -> Result<AttackOutcome, AdversaryError> {
    check_codeword(c, ch)?;
    let DelayBudget::Max(d) = ch.budget() else {
        return Err(AdversaryError::WrongBudget("max"));
    };
    let block = usize::try_from(d).unwrap_or(usize::MAX);
    Ok(AttackOutcome::from_schedule(
        block_end_schedule(ch.codeword_len(), block),
        ch,
    ))
}
