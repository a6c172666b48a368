use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use super::{check_codeword, AdversaryError, AttackOutcome};
use crate::channel::{ChannelParams, Codeword, DelayBudget, DelaySchedule, Resolution};

/// Knobs of the bank strategy.
///
/// `spacing` (written `D′` below) is both the gap between landing points and
/// the bank level the strategy aims for; `kappa` is how many 1s are piled on
/// a landing point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BankingParams {
    spacing: usize,
    kappa: usize,
    block_len: usize,
}

impl BankingParams {
    pub fn new(spacing: usize, kappa: usize, block_len: usize) -> Result<Self, AdversaryError> {
        if kappa == 0 || spacing == 0 || block_len == 0 {
            return Err(AdversaryError::InvalidParams(
                "banking knobs must be positive".into(),
            ));
        }
        if kappa > spacing {
            return Err(AdversaryError::InvalidParams(format!(
                "pile height {kappa} exceeds the spacing {spacing}"
            )));
        }
        Ok(Self {
            spacing,
            kappa,
            block_len,
        })
    }

    /// Derives the knobs from an average budget `D`: spacing `D′ = ⌊D/4⌋`,
    /// pile height `min(k, M)`, block length `D′·⌊D′/κ⌋` (`D′²/κ` when `κ`
    /// divides `D′`).
    pub fn for_channel(ch: &ChannelParams) -> Result<Self, AdversaryError> {
        let DelayBudget::Avg(avg) = ch.budget() else {
            return Err(AdversaryError::WrongBudget("average"));
        };
        let spacing = (avg / 4)
            .floor()
            .to_integer()
            .to_usize()
            .unwrap_or(usize::MAX);
        let kappa = match ch.k() {
            Resolution::Finite(k) => (k as usize).min(ch.m()),
            Resolution::Unbounded => ch.m(),
        };
        if spacing == 0 || kappa > spacing {
            return Err(AdversaryError::InvalidParams(format!(
                "needs min(k, M) = {kappa} ≤ D_avg/4 = {}",
                avg / 4
            )));
        }
        Self::new(spacing, kappa, spacing * (spacing / kappa))
    }

    pub fn spacing(&self) -> usize {
        self.spacing
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Block offsets whose 1-based position is a multiple of the spacing.
    pub fn landing_offsets(&self, len: usize) -> impl Iterator<Item = usize> + '_ {
        (self.spacing - 1..len).step_by(self.spacing)
    }
}

/// Which branch a block took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BankCase {
    /// Light block, bank rich enough: everything piles on the final index.
    LightFlush,
    /// Light block, bank short: every 1 goes into the bank.
    LightBank,
    /// Heavy block, bank below `D′`: top the bank up to `D′`.
    HeavyFill,
    /// Heavy block, bank full: `κ` 1s on every landing point.
    HeavySteady,
}

impl fmt::Display for BankCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BankCase::LightFlush => "1a",
            BankCase::LightBank => "1b",
            BankCase::HeavyFill => "2a",
            BankCase::HeavySteady => "2b",
        })
    }
}

impl FromStr for BankCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1a" => Ok(BankCase::LightFlush),
            "1b" => Ok(BankCase::LightBank),
            "2a" => Ok(BankCase::HeavyFill),
            "2b" => Ok(BankCase::HeavySteady),
            _ => Err(format!("unknown case {s:?}")),
        }
    }
}

/// One line of the per-block log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    pub block: usize,
    pub case: BankCase,
    /// Bank size after the block.
    pub bank: usize,
    /// Delay accrued by the end of the block, counting banked 1s up to it.
    pub spent: u64,
}

/// Withheld 1s, oldest first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BankState {
    origins: VecDeque<usize>,
}

impl BankState {
    pub fn size(&self) -> usize {
        self.origins.len()
    }

    pub fn origins(&self) -> impl Iterator<Item = usize> + '_ {
        self.origins.iter().copied()
    }

    fn deposit(&mut self, origin: usize) {
        self.origins.push_back(origin);
    }

    fn withdraw(&mut self) -> Option<usize> {
        self.origins.pop_front()
    }
}

/// Shapes a received block can take once the bank is full.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockForm {
    Silent,
    /// A single pile on the final index.
    FinalPile,
    /// A pile on every landing point.
    LandingPiles,
}

impl BlockForm {
    /// Matches a received block against the three forms; `level` is the
    /// expected pile reading.
    pub fn classify(block: &[u32], params: &BankingParams, level: u32) -> Option<Self> {
        if block.iter().all(|&v| v == 0) {
            return Some(BlockForm::Silent);
        }
        let last = block.len() - 1;
        if block[..last].iter().all(|&v| v == 0) && block[last] == level {
            return Some(BlockForm::FinalPile);
        }
        let landing = |o: usize| (o + 1).is_multiple_of(params.spacing());
        if block
            .iter()
            .enumerate()
            .all(|(o, &v)| v == if landing(o) { level } else { 0 })
        {
            return Some(BlockForm::LandingPiles);
        }
        None
    }
}

/// Bank strategy with knobs derived from the channel.
pub fn banking_attack(c: &Codeword, ch: &ChannelParams) -> Result<AttackOutcome, AdversaryError> {
    banking_attack_with(c, ch, &BankingParams::for_channel(ch)?)
}

/// Bank strategy with explicit knobs.
///
/// Blocks are processed left to right with bank size `s` and block weight
/// `ℓ`:
///
/// * `ℓ ≤ D′`, `s + ℓ ≥ D′ + κ`: all 1s go to the final index, topped up to
///   `κ` from the bank.
/// * `ℓ ≤ D′` otherwise: all 1s are banked.
/// * `ℓ > D′`, `s < D′`: the last `D′ − s` 1s are banked, the rest move to
///   the next landing point.
/// * `ℓ > D′`, `s ≥ D′`: every landing point gets `κ` banked 1s, the block's
///   last 1s replace them in the bank and the rest move to the next
///   landing point.
///
/// Bank withdrawals are oldest-first. Whatever is still banked at the end
/// is pushed past the last index.
pub fn banking_attack_with(
    c: &Codeword,
    ch: &ChannelParams,
    params: &BankingParams,
) -> Result<AttackOutcome, AdversaryError> {
    check_codeword(c, ch)?;
    let n = ch.codeword_len();
    let bits = c.bits();
    let sp = params.spacing();
    let kappa = params.kappa();
    let mut delays = vec![0u64; n];
    let mut bank = BankState::default();
    let mut landed: u64 = 0;
    let mut trace = Vec::new();

    let land = |delays: &mut [u64], origin: usize, at: usize| {
        delays[origin] = (at - origin) as u64;
        (at - origin) as u64
    };

    for (block, start) in (0..n).step_by(params.block_len()).enumerate() {
        let end = (start + params.block_len()).min(n) - 1;
        let ones: Vec<usize> = (start..=end).filter(|&i| bits[i] == 1).collect();
        let ell = ones.len();
        let s = bank.size();
        let next_landing = |p: usize| {
            let o = p - start;
            let up = (o / sp + 1) * sp - 1;
            (start + up).min(end)
        };
        let case = if ell <= sp {
            if s + ell >= sp + kappa {
                for &p in &ones {
                    landed += land(&mut delays, p, end);
                }
                for _ in ell..kappa {
                    let o = bank.withdraw().expect("bank covers the shortfall");
                    landed += land(&mut delays, o, end);
                }
                BankCase::LightFlush
            } else {
                ones.iter().for_each(|&p| bank.deposit(p));
                BankCase::LightBank
            }
        } else if s < sp {
            let keep = ell - (sp - s);
            for &p in &ones[..keep] {
                landed += land(&mut delays, p, next_landing(p));
            }
            ones[keep..].iter().for_each(|&p| bank.deposit(p));
            BankCase::HeavyFill
        } else {
            let mut drawn = 0;
            for o in params.landing_offsets(end - start + 1) {
                for _ in 0..kappa {
                    let Some(origin) = bank.withdraw() else { break };
                    landed += land(&mut delays, origin, start + o);
                    drawn += 1;
                }
            }
            let keep = ell - drawn.min(ell);
            for &p in &ones[..keep] {
                landed += land(&mut delays, p, next_landing(p));
            }
            ones[keep..].iter().for_each(|&p| bank.deposit(p));
            BankCase::HeavySteady
        };
        let held: u64 = bank.origins().map(|o| (end + 1 - o) as u64).sum();
        trace.push(TraceEntry {
            block,
            case,
            bank: bank.size(),
            spent: landed + held,
        });
    }
    for o in bank.origins() {
        delays[o] = (n - o) as u64;
    }
    let mut out = AttackOutcome::from_schedule(DelaySchedule::new(delays), ch);
    out.trace = Some(trace);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Rational;
    use proptest::prelude::*;

    // D_avg = 16: spacing 4, κ = 2, block 8
    fn ch(t: usize) -> ChannelParams {
        ChannelParams::new(
            8,
            t,
            Resolution::Finite(2),
            DelayBudget::Avg(Rational::from_integer(16)),
        )
        .unwrap()
    }

    #[test]
    fn derived_knobs() {
        let p = BankingParams::for_channel(&ch(1)).unwrap();
        assert_eq!((p.spacing(), p.kappa(), p.block_len()), (4, 2, 8));
        let big = ChannelParams::new(
            256,
            1,
            Resolution::Finite(4),
            DelayBudget::Avg(Rational::from_integer(32)),
        )
        .unwrap();
        let p = BankingParams::for_channel(&big).unwrap();
        assert_eq!((p.spacing(), p.kappa(), p.block_len()), (8, 4, 16));
        let tight = ch(1).with_budget(DelayBudget::Avg(Rational::from_integer(4)));
        assert!(BankingParams::for_channel(&tight).is_err());
    }

    #[test]
    fn all_zero_codeword() {
        let p = ch(4);
        let c = Codeword::zeros(32);
        let out = banking_attack(&c, &p).unwrap();
        assert_eq!(out.received(&c, &p).unwrap().values(), &[0; 32]);
        let trace = out.trace.unwrap();
        assert!(trace
            .iter()
            .all(|e| e.case == BankCase::LightBank && e.bank == 0 && e.spent == 0));
    }

    #[test]
    fn fill_then_steady() {
        let p = ch(2);
        // block 0: six 1s, heavy with an empty bank; block 1: heavy with a full bank
        let c = Codeword::from_bits(vec![1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1, 0, 0]).unwrap();
        let out = banking_attack(&c, &p).unwrap();
        let trace = out.trace.as_ref().unwrap();
        assert_eq!(trace[0].case, BankCase::HeavyFill);
        assert_eq!(trace[0].bank, 4);
        assert_eq!(trace[1].case, BankCase::HeavySteady);
        assert_eq!(trace[1].bank, 4);
        let y = out.received(&c, &p).unwrap();
        assert_eq!(&y.values()[..8], &[0, 0, 0, 2, 0, 0, 0, 0]);
        assert_eq!(&y.values()[8..], &[0, 0, 0, 2, 0, 0, 0, 2]);
        assert_eq!(trace[1].spent, out.ledger.spent);
        out.audit(&p, None).unwrap();
    }

    #[test]
    fn light_block_flushes_to_final_index() {
        let p = ch(3);
        let mut bits = vec![1, 1, 1, 1, 1, 1, 0, 0];
        bits.extend([0, 1, 0, 0, 0, 0, 0, 0]);
        bits.extend([0, 0, 1, 0, 0, 0, 0, 0]);
        let c = Codeword::from_bits(bits).unwrap();
        let out = banking_attack(&c, &p).unwrap();
        let trace = out.trace.as_ref().unwrap();
        // bank 4 after block 0, 5 after block 1; then 5 + 1 ≥ 4 + 2
        assert_eq!(trace[1].case, BankCase::LightBank);
        assert_eq!(trace[1].bank, 5);
        assert_eq!(trace[2].case, BankCase::LightFlush);
        assert_eq!(trace[2].bank, 4);
        let y = out.received(&c, &p).unwrap();
        assert_eq!(&y.values()[16..], &[0, 0, 0, 0, 0, 0, 0, 2]);
        let params = BankingParams::for_channel(&p).unwrap();
        assert_eq!(
            BlockForm::classify(&y.values()[16..], &params, 2),
            Some(BlockForm::FinalPile)
        );
        assert_eq!(BlockForm::classify(&y.values()[..8], &params, 2), None);
    }

    #[test]
    fn case_labels_round_trip() {
        for c in [
            BankCase::LightFlush,
            BankCase::LightBank,
            BankCase::HeavyFill,
            BankCase::HeavySteady,
        ] {
            assert_eq!(c.to_string().parse::<BankCase>(), Ok(c));
        }
        assert!("3c".parse::<BankCase>().is_err());
    }

    proptest! {
        #[test]
        fn budget_and_forms(bits in prop::collection::vec(0u8..2, 64)) {
            let p = ch(8);
            let params = BankingParams::for_channel(&p).unwrap();
            let c = Codeword::from_bits(bits).unwrap();
            let out = banking_attack(&c, &p).unwrap();
            prop_assert!(out.audit(&p, None).is_ok());
            let trace = out.trace.as_ref().unwrap();
            prop_assert_eq!(trace.last().unwrap().spent, out.ledger.spent);
            let y = out.received(&c, &p).unwrap();
            if let Some(fill) = trace.iter().position(|e| e.bank >= params.spacing()) {
                for (b, block) in y.values().chunks(8).enumerate().skip(fill + 1) {
                    prop_assert!(trace[b].bank >= params.spacing());
                    prop_assert!(BlockForm::classify(block, &params, 2).is_some());
                }
            }
        }
    }
}
