//! Delay adversaries.
//!
//! Every strategy sees the whole codeword and returns an [`AttackOutcome`]:
//! a delay schedule, optional bit flips on the received word, and the
//! ledger of what the schedule spent.

use thiserror::Error;

use crate::channel::{
    apply_delay, validate_schedule, BudgetLedger, ChannelError, ChannelParams, Codeword,
    DelaySchedule, Feasibility, ReceivedWord,
};

mod banking;
mod block_end;
mod collision;
mod flip_and_delay;
mod random;

pub use banking::{
    banking_attack, banking_attack_with, BankCase, BankState, BankingParams, BlockForm, TraceEntry,
};
pub use block_end::{block_end_attack, block_end_schedule};
pub use collision::{
    cheapest_full_corruption, collision_campaign, collision_point_attack, Campaign, CollisionPlan,
    PotentialLedger,
};
pub use flip_and_delay::{canonical_macro_step, flip_and_delay_attack};
pub use random::random_attack;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("invalid adversary parameters: {0}")]
    InvalidParams(String),
    #[error("strategy needs a {0} budget")]
    WrongBudget(&'static str),
    #[error("block {0} carries no 1s to collide")]
    NotAOneBlock(usize),
    #[error("plan needs {needed} units of potential, {remaining} remain")]
    PlanInfeasible { needed: u64, remaining: u64 },
    #[error("{0}")]
    Channel(#[from] ChannelError),
    #[error("audit failed: {0}")]
    Audit(String),
}

/// What an adversary did to one codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackOutcome {
    pub schedule: DelaySchedule,
    /// Received-word positions to flip, ascending and distinct.
    pub flips: Vec<usize>,
    pub ledger: BudgetLedger,
    /// Per-block log, for strategies that keep one.
    pub trace: Option<Vec<TraceEntry>>,
}

impl AttackOutcome {
    pub(crate) fn from_schedule(schedule: DelaySchedule, ch: &ChannelParams) -> Self {
        let ledger = BudgetLedger::for_schedule(&schedule, ch);
        Self {
            schedule,
            flips: Vec::new(),
            ledger,
            trace: None,
        }
    }

    /// Delivers `c` through the schedule, then applies the flips.
    ///
    /// A flip turns a silent index into a single 1 and silences any nonzero
    /// index.
    pub fn received(&self, c: &Codeword, ch: &ChannelParams) -> Result<ReceivedWord, ChannelError> {
        let mut y = apply_delay(c, &self.schedule, ch)?;
        apply_flips(&mut y, &self.flips);
        Ok(y)
    }

    /// Most flips falling into any one macro-step.
    pub fn max_flips_per_step(&self, m: usize) -> usize {
        let mut best = 0;
        let mut i = 0;
        while i < self.flips.len() {
            let step = self.flips[i] / m;
            let run = self.flips[i..]
                .iter()
                .take_while(|&&p| p / m == step)
                .count();
            best = best.max(run);
            i += run;
        }
        best
    }

    /// Independent recheck of the schedule and ledger against `ch`, plus
    /// the per-macro-step flip limit when one applies.
    pub fn audit(
        &self,
        ch: &ChannelParams,
        flips_per_step: Option<usize>,
    ) -> Result<(), AdversaryError> {
        match validate_schedule(&self.schedule, ch) {
            Feasibility::Feasible(ledger) if ledger == self.ledger => {}
            Feasibility::Feasible(ledger) => {
                return Err(AdversaryError::Audit(format!(
                    "ledger reports {} spent, schedule totals {}",
                    self.ledger.spent, ledger.spent
                )))
            }
            other => return Err(AdversaryError::Audit(other.to_string())),
        }
        if self.flips.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AdversaryError::Audit("flips not strictly ascending".into()));
        }
        if let Some(&last) = self.flips.last() {
            if last >= ch.codeword_len() {
                return Err(AdversaryError::Audit(format!(
                    "flip at {last} is out of range"
                )));
            }
        }
        match flips_per_step {
            Some(t) if self.max_flips_per_step(ch.m()) > t => Err(AdversaryError::Audit(format!(
                "{} flips in one macro-step, limit {t}",
                self.max_flips_per_step(ch.m())
            ))),
            None if !self.flips.is_empty() => Err(AdversaryError::Audit(
                "flips used without a noise budget".into(),
            )),
            _ => Ok(()),
        }
    }
}

pub(crate) fn apply_flips(y: &mut ReceivedWord, flips: &[usize]) {
    let values = y.values_mut();
    for &p in flips {
        if let Some(v) = values.get_mut(p) {
            *v = u32::from(*v == 0);
        }
    }
}

pub(crate) fn check_codeword(c: &Codeword, ch: &ChannelParams) -> Result<(), AdversaryError> {
    if c.len() != ch.codeword_len() {
        return Err(ChannelError::LengthMismatch {
            expected: ch.codeword_len(),
            found: c.len(),
        }
        .into());
    }
    Ok(())
}
