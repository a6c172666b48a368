use super::{check_codeword, AdversaryError, AttackOutcome};
use crate::channel::{Capacity, ChannelParams, Codeword, DelaySchedule};
use crate::codecs::AvgConcat;

/// Remaining delay potential `Φ`, debited as blocks are attacked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialLedger {
    initial: u64,
    phi: u64,
    debits: Vec<(usize, u64)>,
}

impl PotentialLedger {
    pub fn new(initial: u64) -> Self {
        Self {
            initial,
            phi: initial,
            debits: Vec::new(),
        }
    }

    pub fn initial(&self) -> u64 {
        self.initial
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// `(label, amount)` in the order they were taken.
    pub fn debits(&self) -> &[(usize, u64)] {
        &self.debits
    }

    pub fn spent(&self) -> u64 {
        self.initial - self.phi
    }

    pub fn can_afford(&self, amount: u64) -> bool {
        amount <= self.phi
    }

    pub fn debit(&mut self, label: usize, amount: u64) -> Result<(), AdversaryError> {
        if amount > self.phi {
            return Err(AdversaryError::PlanInfeasible {
                needed: amount,
                remaining: self.phi,
            });
        }
        self.phi -= amount;
        self.debits.push((label, amount));
        Ok(())
    }
}

/// How to wreck one 1-block of `ℓ` ones.
///
/// The last `δ` ones are evicted to the first index of the next inner
/// block. The remaining `ℓ − δ` are cut into `α` contiguous groups of
/// near-equal size, larger groups first, and each group is piled onto its
/// last member (the collision point). A pile of `q` ones costs
/// `q(q − 1)/2` and reads back as `min(k, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionPlan {
    ell: usize,
    alpha: usize,
    delta: usize,
    cp_positions: Vec<usize>,
}

impl CollisionPlan {
    pub fn new(ell: usize, alpha: usize, delta: usize) -> Result<Self, AdversaryError> {
        if delta > ell {
            return Err(AdversaryError::InvalidParams(format!(
                "δ = {delta} exceeds ℓ = {ell}"
            )));
        }
        let kept = ell - delta;
        if alpha > kept || (alpha == 0) != (kept == 0) {
            return Err(AdversaryError::InvalidParams(format!(
                "α = {alpha} cannot split {kept} remaining ones"
            )));
        }
        let mut cp_positions = Vec::with_capacity(alpha);
        let mut end = 0;
        for q in group_sizes(kept, alpha) {
            end += q;
            cp_positions.push(end - 1);
        }
        Ok(Self {
            ell,
            alpha,
            delta,
            cp_positions,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Offsets of the collision points inside the 1-block, ascending.
    pub fn cp_positions(&self) -> &[usize] {
        &self.cp_positions
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        group_sizes(self.ell - self.delta, self.alpha)
    }

    pub fn cost(&self) -> u64 {
        plan_cost(self.ell as u64, self.alpha as u64, self.delta as u64)
    }

    /// Received block weight after the attack.
    pub fn gamma_after(&self, k: u32) -> u64 {
        plan_gamma(
            self.ell as u64,
            self.alpha as u64,
            self.delta as u64,
            u64::from(k),
        )
    }

    /// Whether the block then falls below the decision threshold.
    pub fn is_full_corruption(&self, k: u32) -> bool {
        below_threshold(self.gamma_after(k), self.ell as u64, u64::from(k))
    }

    /// Per-symbol delays for the `2ℓ` positions of the targeted block.
    fn block_delays(&self) -> Vec<u64> {
        let mut d = vec![0u64; 2 * self.ell];
        let mut start = 0;
        for &cp in &self.cp_positions {
            for (o, slot) in d.iter_mut().enumerate().take(cp + 1).skip(start) {
                *slot = (cp - o) as u64;
            }
            start = cp + 1;
        }
        for (o, slot) in d
            .iter_mut()
            .enumerate()
            .take(self.ell)
            .skip(self.ell - self.delta)
        {
            *slot = (2 * self.ell - o) as u64;
        }
        d
    }
}

fn group_sizes(n: usize, alpha: usize) -> Vec<usize> {
    if alpha == 0 {
        return Vec::new();
    }
    let (base, rem) = (n / alpha, n % alpha);
    (0..alpha).map(|g| base + usize::from(g < rem)).collect()
}

fn plan_cost(ell: u64, alpha: u64, delta: u64) -> u64 {
    let kept = ell - delta;
    let piles = kept.checked_div(alpha).map_or(0, |base| {
        let rem = kept % alpha;
        rem * (base + 1) * base / 2 + (alpha - rem) * base * base.saturating_sub(1) / 2
    });
    piles + delta * ell + delta * (delta + 1) / 2
}

fn plan_gamma(ell: u64, alpha: u64, delta: u64, k: u64) -> u64 {
    if alpha == 0 {
        return 0;
    }
    let kept = ell - delta;
    let (base, rem) = (kept / alpha, kept % alpha);
    rem * (base + 1).min(k) + (alpha - rem) * base.min(k)
}

fn below_threshold(gamma: u64, ell: u64, k: u64) -> bool {
    u128::from(gamma) * u128::from(gamma) < u128::from(ell) * u128::from(k)
}

/// Exhaustive search over `(α, δ)` for the cheapest plan that pushes a
/// 1-block below threshold. Ties go to the smaller `δ`, then smaller `α`.
pub fn cheapest_full_corruption(ell: usize, k: u32) -> Option<CollisionPlan> {
    let (l, kk) = (ell as u64, u64::from(k));
    let mut best: Option<(u64, u64, u64)> = None;
    for delta in 0..=l {
        let kept = l - delta;
        let alphas = if kept == 0 { 0..=0 } else { 1..=kept };
        for alpha in alphas {
            if !below_threshold(plan_gamma(l, alpha, delta, kk), l, kk) {
                continue;
            }
            let cost = plan_cost(l, alpha, delta);
            if best.is_none_or(|(c, _, _)| cost < c) {
                best = Some((cost, alpha, delta));
            }
        }
    }
    best.map(|(_, a, d)| {
        CollisionPlan::new(ell, a as usize, d as usize).expect("searched in range")
    })
}

fn check_one_block(c: &Codeword, code: &AvgConcat, block: usize) -> Result<usize, AdversaryError> {
    let start = block * code.inner_block_len();
    let ones = c.bits().get(start..start + code.ell());
    match ones {
        Some(b) if b.iter().all(|&x| x == 1) => Ok(start),
        _ => Err(AdversaryError::NotAOneBlock(block)),
    }
}

fn total_capacity(ch: &ChannelParams) -> Result<u64, AdversaryError> {
    match ch.capacity() {
        Capacity::Total(cap) => Ok(cap),
        Capacity::PerSymbol(_) => Err(AdversaryError::WrongBudget("average")),
    }
}

/// Applies `plan` to inner block `target_block` of an [`AvgConcat`]
/// codeword.
pub fn collision_point_attack(
    c: &Codeword,
    target_block: usize,
    plan: &CollisionPlan,
    code: &AvgConcat,
    ch: &ChannelParams,
) -> Result<AttackOutcome, AdversaryError> {
    check_codeword(c, ch)?;
    let cap = total_capacity(ch)?;
    if plan.ell() != code.ell() {
        return Err(AdversaryError::InvalidParams(format!(
            "plan is for ℓ = {}, codec has ℓ = {}",
            plan.ell(),
            code.ell()
        )));
    }
    let start = check_one_block(c, code, target_block)?;
    if plan.cost() > cap {
        return Err(AdversaryError::PlanInfeasible {
            needed: plan.cost(),
            remaining: cap,
        });
    }
    let mut delays = vec![0u64; ch.codeword_len()];
    for (o, d) in plan.block_delays().into_iter().enumerate() {
        delays[start + o] = d;
    }
    Ok(AttackOutcome::from_schedule(DelaySchedule::new(delays), ch))
}

/// Result of [`collision_campaign`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Campaign {
    pub outcome: AttackOutcome,
    /// Inner blocks that received the plan, ascending.
    pub targeted: Vec<usize>,
    pub potential: PotentialLedger,
    /// `None` when no plan can corrupt a block at all.
    pub plan: Option<CollisionPlan>,
}

/// Spends the whole average budget on the cheapest full-corruption plan,
/// one 1-block at a time from the front, until `Φ` runs dry.
///
/// A block right after one that evicts into it is left alone, since the
/// evicted 1s would prop its weight back up.
pub fn collision_campaign(
    c: &Codeword,
    code: &AvgConcat,
    ch: &ChannelParams,
) -> Result<Campaign, AdversaryError> {
    check_codeword(c, ch)?;
    let mut potential = PotentialLedger::new(total_capacity(ch)?);
    let plan = cheapest_full_corruption(code.ell(), code.k());
    let mut delays = vec![0u64; ch.codeword_len()];
    let mut targeted = Vec::new();
    if let Some(plan) = &plan {
        let cost = plan.cost();
        let block_delays = plan.block_delays();
        let blocks = ch.codeword_len() / code.inner_block_len();
        let mut skip_next = false;
        for b in 0..blocks {
            if std::mem::take(&mut skip_next) {
                continue;
            }
            let Ok(start) = check_one_block(c, code, b) else {
                continue;
            };
            if !potential.can_afford(cost) {
                break;
            }
            potential.debit(b, cost)?;
            delays[start..start + block_delays.len()].copy_from_slice(&block_delays);
            targeted.push(b);
            skip_next = plan.delta() > 0;
        }
    }
    Ok(Campaign {
        outcome: AttackOutcome::from_schedule(DelaySchedule::new(delays), ch),
        targeted,
        potential,
        plan,
    })
}
