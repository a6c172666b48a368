//! Codec-versus-adversary runs with seeded, replayable trials.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::adversaries::{
    banking_attack, block_end_attack, collision_campaign, flip_and_delay_attack, random_attack,
    AdversaryError, AttackOutcome,
};
use crate::channel::{
    ChannelError, ChannelParams, Codeword, DelayBudget, DelaySchedule, Rational, ReceivedWord,
};
use crate::codecs::{AvgConcat, Codec, CodecError, FirstOne, MaxUnary, Spread};
use crate::format::format_bits;
use crate::outer::{MlLinearCode, OuterCode, OuterError, ReedSolomonCode, Uncoded};

mod csv;
mod fit;

pub use csv::{
    parse_trial_csv, write_sweep_csv, write_trial_csv, CsvRow, CSV_COLUMNS, CSV_HEADER,
    SWEEP_HEADER,
};
pub use fit::{fit_power_law, parse_xy_table, PowerFit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("trial {trial}: invariant violated: {reason}")]
    Invariant { trial: usize, reason: String },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Outer(#[from] OuterError),
}

/// Outer layer of the concatenated codecs; its length follows the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterSpec {
    Uncoded,
    /// The [20, 4, 10] code correcting 4 flips.
    Reference,
    /// Byte-symbol code tolerating the given bit-error fraction.
    ReedSolomon(Rational),
}

impl OuterSpec {
    fn build(self, codeword_bits: usize) -> Result<Arc<dyn OuterCode>, ExperimentError> {
        Ok(match self {
            OuterSpec::Uncoded => Arc::new(Uncoded::new(codeword_bits)),
            OuterSpec::Reference => {
                let code = MlLinearCode::reference();
                if code.codeword_len() != codeword_bits {
                    return Err(ExperimentError::InvalidSpec(format!(
                        "the reference code has 20 bits, the channel fits {codeword_bits}"
                    )));
                }
                Arc::new(code)
            }
            OuterSpec::ReedSolomon(f) => {
                Arc::new(ReedSolomonCode::for_codeword_bits(codeword_bits, f)?)
            }
        })
    }
}

impl FromStr for OuterSpec {
    type Err = String;

    /// `none`, `reference`, or `rs:<fraction>` such as `rs:1/20`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" | "uncoded" => Ok(OuterSpec::Uncoded),
            "reference" | "ml" => Ok(OuterSpec::Reference),
            _ => match s.strip_prefix("rs:") {
                Some(f) => parse_rational(f).map(OuterSpec::ReedSolomon),
                None => Err(format!("unknown outer code {s:?}")),
            },
        }
    }
}

impl fmt::Display for OuterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterSpec::Uncoded => f.write_str("none"),
            OuterSpec::Reference => f.write_str("reference"),
            OuterSpec::ReedSolomon(r) => write!(f, "rs:{r}"),
        }
    }
}

/// Accepts `3`, `1/4` or `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("not a nonnegative rational: {s:?}");
    if let Some((n, d)) = s.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let w: u64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let scale = 10u64.pow(frac.len() as u32);
        let f: u64 = frac.parse().map_err(|_| bad())?;
        let num = w
            .checked_mul(scale)
            .and_then(|x| x.checked_add(f))
            .ok_or_else(bad)?;
        return Ok(Rational::new(num, scale));
    }
    s.parse::<u64>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodecSpec {
    MaxUnary { c: Rational },
    AvgConcat { c: Rational, outer: OuterSpec },
    FirstOne { c_prime: Rational },
    Spread { outer: OuterSpec },
}

impl CodecSpec {
    pub fn id(&self) -> &'static str {
        match self {
            CodecSpec::MaxUnary { .. } => "max_unary",
            CodecSpec::AvgConcat { .. } => "avg_concat",
            CodecSpec::FirstOne { .. } => "first_one",
            CodecSpec::Spread { .. } => "spread",
        }
    }

    /// Builds the codec named `id` from the shared knobs.
    pub fn from_id(id: &str, c: Rational, outer: OuterSpec) -> Result<Self, String> {
        Ok(match id {
            "max_unary" => CodecSpec::MaxUnary { c },
            "avg_concat" => CodecSpec::AvgConcat { c, outer },
            "first_one" => CodecSpec::FirstOne { c_prime: c },
            "spread" => CodecSpec::Spread { outer },
            _ => return Err(format!("unknown codec {id:?}")),
        })
    }

    fn wants_max_budget(&self) -> bool {
        matches!(self, CodecSpec::MaxUnary { .. } | CodecSpec::Spread { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversarySpec {
    Identity,
    BlockEnd,
    /// Random feasible delays, plus up to `flips_per_step` random flips per
    /// macro-step.
    Random {
        flips_per_step: usize,
    },
    CollisionPoint,
    Banking,
    FlipAndDelay {
        flips_per_step: usize,
    },
}

impl AdversarySpec {
    pub fn id(&self) -> &'static str {
        match self {
            AdversarySpec::Identity => "identity",
            AdversarySpec::BlockEnd => "block_end",
            AdversarySpec::Random { .. } => "random",
            AdversarySpec::CollisionPoint => "collision_point",
            AdversarySpec::Banking => "banking",
            AdversarySpec::FlipAndDelay { .. } => "flip_and_delay",
        }
    }

    pub fn from_id(id: &str, flips_per_step: usize) -> Result<Self, String> {
        Ok(match id {
            "identity" | "none" => AdversarySpec::Identity,
            "block_end" => AdversarySpec::BlockEnd,
            "random" => AdversarySpec::Random { flips_per_step },
            "collision_point" => AdversarySpec::CollisionPoint,
            "banking" => AdversarySpec::Banking,
            "flip_and_delay" => AdversarySpec::FlipAndDelay { flips_per_step },
            _ => return Err(format!("unknown adversary {id:?}")),
        })
    }

    fn flip_limit(&self) -> Option<usize> {
        match *self {
            AdversarySpec::Random { flips_per_step }
            | AdversarySpec::FlipAndDelay { flips_per_step }
                if flips_per_step > 0 =>
            {
                Some(flips_per_step)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub codec: CodecSpec,
    pub adversary: AdversarySpec,
    pub channel: ChannelParams,
    pub trials: usize,
    pub seed: u64,
}

/// One trial's result.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// Bits for block codecs, the index for `first_one`.
    pub message: String,
    pub success: bool,
    /// Share of inner blocks read back wrong, where blocks exist.
    pub corrupted_fraction: Option<f64>,
    pub corrupted_blocks: Option<usize>,
    pub spent: u64,
    /// Distinct received words numbered in order of first appearance.
    pub form_id: usize,
}

enum Built {
    MaxUnary(MaxUnary),
    AvgConcat(AvgConcat),
    FirstOne(FirstOne),
    Spread(Spread),
}

#[derive(Debug, Clone, PartialEq)]
enum Message {
    Bits(Vec<u8>),
    Index(usize),
}

impl Message {
    fn render(&self) -> String {
        match self {
            Message::Bits(b) => format_bits(b),
            Message::Index(i) => i.to_string(),
        }
    }
}

impl Built {
    fn new(spec: &ExperimentSpec) -> Result<Self, ExperimentError> {
        let ch = &spec.channel;
        let n = ch.codeword_len();
        let k = ch.k().finite();
        Ok(match spec.codec {
            CodecSpec::MaxUnary { c } => {
                let k = k.ok_or_else(|| {
                    ExperimentError::InvalidSpec("max_unary needs a finite k".into())
                })?;
                Built::MaxUnary(MaxUnary::new(c, ch.m(), k)?)
            }
            CodecSpec::AvgConcat { c, outer } => {
                let k = k.ok_or_else(|| {
                    ExperimentError::InvalidSpec("avg_concat needs a finite k".into())
                })?;
                let probe = AvgConcat::new(c, ch.m(), k, Arc::new(Uncoded::new(0)))?;
                let blocks = n / probe.inner_block_len();
                Built::AvgConcat(AvgConcat::new(c, ch.m(), k, outer.build(blocks)?)?)
            }
            CodecSpec::FirstOne { c_prime } => Built::FirstOne(FirstOne::new(c_prime, ch.m())?),
            CodecSpec::Spread { outer } => {
                let DelayBudget::Max(d) = ch.budget() else {
                    return Err(ExperimentError::InvalidSpec(
                        "spread needs a max budget".into(),
                    ));
                };
                let block = usize::try_from(d)
                    .ok()
                    .and_then(|d| d.checked_add(1))
                    .unwrap_or(usize::MAX);
                let flips = spec.adversary.flip_limit().unwrap_or(0);
                Built::Spread(Spread::new(d, flips, outer.build(n / block)?))
            }
        })
    }

    fn random_message(
        &self,
        ch: &ChannelParams,
        rng: &mut ChaCha8Rng,
    ) -> Result<Message, ExperimentError> {
        let bits = |len: usize, rng: &mut ChaCha8Rng| {
            Message::Bits((0..len).map(|_| rng.random_range(0..2u8)).collect())
        };
        Ok(match self {
            Built::MaxUnary(c) => bits(c.payload_len(ch)?, rng),
            Built::AvgConcat(c) => bits(c.outer().message_len(), rng),
            Built::Spread(c) => bits(c.outer().message_len(), rng),
            Built::FirstOne(c) => Message::Index(rng.random_range(1..=c.num_codewords())),
        })
    }

    fn encode(&self, m: &Message, ch: &ChannelParams) -> Result<Codeword, ExperimentError> {
        Ok(match (self, m) {
            (Built::MaxUnary(c), Message::Bits(b)) => c.encode(b, ch)?,
            (Built::AvgConcat(c), Message::Bits(b)) => c.encode(b, ch)?,
            (Built::Spread(c), Message::Bits(b)) => c.encode(b, ch)?,
            (Built::FirstOne(c), Message::Index(i)) => c.encode(i, ch)?,
            _ => unreachable!("messages are drawn for their own codec"),
        })
    }

    /// Decode verdict and `(wrong blocks, total blocks)` where blocks exist.
    fn judge(
        &self,
        m: &Message,
        y: &ReceivedWord,
        ch: &ChannelParams,
    ) -> Result<(bool, Option<(usize, usize)>), ExperimentError> {
        let count_wrong =
            |sent: &[u8], got: &[u8]| sent.iter().zip(got).filter(|(a, b)| a != b).count();
        Ok(match (self, m) {
            (Built::MaxUnary(c), Message::Bits(b)) => {
                let ok = c.decode(y, ch).as_ref() == Ok(b);
                let counts = c.block_counts(y, ch)?;
                let wrong = b
                    .chunks(c.bits_per_block())
                    .zip(&counts)
                    .filter(|(chunk, &cnt)| {
                        chunk.iter().fold(0u32, |a, &x| a << 1 | u32::from(x)) + 1 != cnt
                    })
                    .count();
                (ok, Some((wrong, counts.len())))
            }
            (Built::AvgConcat(c), Message::Bits(b)) => {
                let sent = c.outer().encode(b)?;
                let got = c.inner_decode(y, ch)?;
                let ok = c.outer().decode(&got).as_ref() == Ok(b);
                (ok, Some((count_wrong(&sent, &got), sent.len())))
            }
            (Built::Spread(c), Message::Bits(b)) => {
                let sent = c.outer().encode(b)?;
                let got = c.inner_decode(y, ch)?;
                let ok = c.outer().decode(&got).as_ref() == Ok(b);
                (ok, Some((count_wrong(&sent, &got), sent.len())))
            }
            (Built::FirstOne(c), Message::Index(i)) => (c.decode(y, ch).as_ref() == Ok(i), None),
            _ => unreachable!("messages are drawn for their own codec"),
        })
    }
}

fn check_compatible(spec: &ExperimentSpec) -> Result<(), ExperimentError> {
    if spec.trials == 0 {
        return Err(ExperimentError::InvalidSpec(
            "trials must be at least 1".into(),
        ));
    }
    let max = matches!(spec.channel.budget(), DelayBudget::Max(_));
    if spec.codec.wants_max_budget() != max {
        return Err(ExperimentError::InvalidSpec(format!(
            "{} needs {} budget",
            spec.codec.id(),
            if max { "an average" } else { "a max" }
        )));
    }
    let adversary_ok = match spec.adversary {
        AdversarySpec::Identity | AdversarySpec::Random { .. } => true,
        AdversarySpec::BlockEnd | AdversarySpec::FlipAndDelay { .. } => max,
        AdversarySpec::Banking => !max,
        AdversarySpec::CollisionPoint => matches!(spec.codec, CodecSpec::AvgConcat { .. }),
    };
    if !adversary_ok {
        return Err(ExperimentError::InvalidSpec(format!(
            "{} does not apply to {} under this budget",
            spec.adversary.id(),
            spec.codec.id()
        )));
    }
    Ok(())
}

/// Per-trial generator: the experiment seed with the trial index as stream.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_flips(ch: &ChannelParams, per_step: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let m = ch.m();
    let mut flips = Vec::new();
    for step in 0..ch.t() {
        let count = rng.random_range(0..=per_step.min(m));
        let mut picked = rand::seq::index::sample(rng, m, count).into_vec();
        picked.sort_unstable();
        flips.extend(picked.into_iter().map(|o| step * m + o));
    }
    flips
}

fn attack(
    spec: &ExperimentSpec,
    built: &Built,
    c: &Codeword,
    rng: &mut ChaCha8Rng,
) -> Result<AttackOutcome, ExperimentError> {
    let ch = &spec.channel;
    Ok(match spec.adversary {
        AdversarySpec::Identity => AttackOutcome::from_schedule(DelaySchedule::identity(ch), ch),
        AdversarySpec::BlockEnd => block_end_attack(c, ch)?,
        AdversarySpec::Random { flips_per_step } => {
            let mut out = random_attack(c, ch, rng.random())?;
            if flips_per_step > 0 {
                out.flips = random_flips(ch, flips_per_step, rng);
            }
            out
        }
        AdversarySpec::CollisionPoint => {
            let Built::AvgConcat(code) = built else {
                unreachable!("checked by check_compatible")
            };
            collision_campaign(c, code, ch)?.outcome
        }
        AdversarySpec::Banking => banking_attack(c, ch)?,
        AdversarySpec::FlipAndDelay { flips_per_step } => {
            let d = ch.m().checked_div(flips_per_step).unwrap_or(0);
            flip_and_delay_attack(c, ch, flips_per_step, d)?
        }
    })
}

/// Runs every trial and revalidates each attack before reporting it.
///
/// Trials run in parallel; records come back in trial order and depend
/// only on the experiment settings.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>, ExperimentError> {
    check_compatible(spec)?;
    let built = Built::new(spec)?;
    let ch = &spec.channel;
    let limit = spec.adversary.flip_limit();
    let trials: Vec<(TrialRecord, ReceivedWord)> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(spec.seed, trial);
            let msg = built.random_message(ch, &mut rng)?;
            let c = built.encode(&msg, ch)?;
            let out = attack(spec, &built, &c, &mut rng)?;
            out.audit(ch, limit)
                .map_err(|e| ExperimentError::Invariant {
                    trial,
                    reason: e.to_string(),
                })?;
            if !out.ledger.within_budget() {
                return Err(ExperimentError::Invariant {
                    trial,
                    reason: format!("spent {} over budget", out.ledger.spent),
                });
            }
            let y = out.received(&c, ch)?;
            let (success, blocks) = built.judge(&msg, &y, ch)?;
            let record = TrialRecord {
                trial,
                message: msg.render(),
                success,
                corrupted_fraction: blocks
                    .map(|(w, t)| if t == 0 { 0.0 } else { w as f64 / t as f64 }),
                corrupted_blocks: blocks.map(|(w, _)| w),
                spent: out.ledger.spent,
                form_id: 0,
            };
            Ok((record, y))
        })
        .collect::<Result<_, ExperimentError>>()?;
    let mut forms: HashMap<ReceivedWord, usize> = HashMap::new();
    Ok(trials
        .into_iter()
        .map(|(mut r, y)| {
            let next = forms.len();
            r.form_id = *forms.entry(y).or_insert(next);
            r
        })
        .collect())
}

/// Attacks one given codeword with the experiment's adversary, drawing any
/// randomness from trial 0's stream, and revalidates the result.
pub fn attack_codeword(
    spec: &ExperimentSpec,
    c: &Codeword,
) -> Result<AttackOutcome, ExperimentError> {
    check_compatible(&ExperimentSpec { trials: 1, ..*spec })?;
    let built = Built::new(spec)?;
    let ch = &spec.channel;
    if c.len() != ch.codeword_len() {
        return Err(ExperimentError::InvalidSpec(format!(
            "codeword has length {}, channel expects {}",
            c.len(),
            ch.codeword_len()
        )));
    }
    let mut rng = trial_rng(spec.seed, 0);
    let out = attack(spec, &built, c, &mut rng)?;
    out.audit(ch, spec.adversary.flip_limit())
        .map_err(|e| ExperimentError::Invariant {
            trial: 0,
            reason: e.to_string(),
        })?;
    Ok(out)
}

/// Every codeword of the experiment's codec, in message order. Refuses payloads
/// over `max_bits` bits.
pub fn codebook(spec: &ExperimentSpec, max_bits: usize) -> Result<Vec<Codeword>, ExperimentError> {
    let built = Built::new(spec)?;
    let ch = &spec.channel;
    let len = match &built {
        Built::MaxUnary(c) => c.payload_len(ch)?,
        Built::AvgConcat(c) => c.outer().message_len(),
        Built::Spread(c) => c.outer().message_len(),
        Built::FirstOne(c) => return Ok(c.codebook(ch)?),
    };
    if len > max_bits {
        return Err(ExperimentError::InvalidSpec(format!(
            "{len} message bits is too many to enumerate (limit {max_bits})"
        )));
    }
    (0..1usize << len)
        .map(|v| {
            let bits = (0..len).map(|i| (v >> (len - 1 - i) & 1) as u8).collect();
            built.encode(&Message::Bits(bits), ch)
        })
        .collect()
}

/// Summary of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub trials: usize,
    pub success_rate: f64,
    pub mean_corrupted: Option<f64>,
    pub max_corrupted: Option<f64>,
    pub mean_spent: f64,
    pub max_spent: u64,
    /// Total spent over total corrupted blocks.
    pub cost_per_corruption: Option<f64>,
    pub distinct_forms: usize,
}

pub fn aggregate(records: &[TrialRecord]) -> Aggregate {
    let n = records.len().max(1) as f64;
    let fractions: Vec<f64> = records
        .iter()
        .filter_map(|r| r.corrupted_fraction)
        .collect();
    let corrupted: usize = records.iter().filter_map(|r| r.corrupted_blocks).sum();
    let spent: u64 = records.iter().map(|r| r.spent).sum();
    Aggregate {
        trials: records.len(),
        success_rate: records.iter().filter(|r| r.success).count() as f64 / n,
        mean_corrupted: (!fractions.is_empty())
            .then(|| fractions.iter().sum::<f64>() / fractions.len() as f64),
        max_corrupted: fractions.iter().copied().reduce(f64::max),
        mean_spent: spent as f64 / n,
        max_spent: records.iter().map(|r| r.spent).max().unwrap_or(0),
        cost_per_corruption: (corrupted > 0).then(|| spent as f64 / corrupted as f64),
        distinct_forms: records.iter().map(|r| r.form_id + 1).max().unwrap_or(0),
    }
}

/// Parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    C,
    /// `ℓ = cM` for `avg_concat`; sets `c = ℓ/M`.
    Ell,
    M,
    T,
    K,
    Dmax,
    Davg,
    Flips,
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "c" => Axis::C,
            "ell" => Axis::Ell,
            "M" | "m" => Axis::M,
            "T" | "t" => Axis::T,
            "k" => Axis::K,
            "dmax" => Axis::Dmax,
            "davg" => Axis::Davg,
            "flips" => Axis::Flips,
            _ => return Err(format!("unknown sweep axis {s:?}")),
        })
    }
}

fn integer(v: Rational, what: &str) -> Result<usize, ExperimentError> {
    if !v.is_integer() {
        return Err(ExperimentError::InvalidSpec(format!(
            "{what} must be an integer, got {v}"
        )));
    }
    usize::try_from(v.to_integer())
        .map_err(|_| ExperimentError::InvalidSpec(format!("{what} = {v} is too large")))
}

/// `template` with `axis` set to `value`.
pub fn with_axis(
    template: &ExperimentSpec,
    axis: Axis,
    value: Rational,
) -> Result<ExperimentSpec, ExperimentError> {
    let mut spec = *template;
    let ch = template.channel;
    let set_c = |codec: CodecSpec, c: Rational| match codec {
        CodecSpec::MaxUnary { .. } => Ok(CodecSpec::MaxUnary { c }),
        CodecSpec::AvgConcat { outer, .. } => Ok(CodecSpec::AvgConcat { c, outer }),
        CodecSpec::FirstOne { .. } => Ok(CodecSpec::FirstOne { c_prime: c }),
        CodecSpec::Spread { .. } => Err(ExperimentError::InvalidSpec("spread has no c".into())),
    };
    match axis {
        Axis::C => spec.codec = set_c(spec.codec, value)?,
        Axis::Ell => spec.codec = set_c(spec.codec, value / Rational::from_integer(ch.m() as u64))?,
        Axis::M => {
            spec.channel = ChannelParams::new(integer(value, "M")?, ch.t(), ch.k(), ch.budget())?
        }
        Axis::T => spec.channel = ch.with_t(integer(value, "T")?)?,
        Axis::K => {
            let k = u32::try_from(integer(value, "k")?)
                .map_err(|_| ExperimentError::InvalidSpec("k too large".into()))?;
            spec.channel = ChannelParams::new(
                ch.m(),
                ch.t(),
                crate::channel::Resolution::Finite(k),
                ch.budget(),
            )?;
        }
        Axis::Dmax => {
            spec.channel = ch.with_budget(DelayBudget::Max(integer(value, "dmax")? as u64))
        }
        Axis::Davg => spec.channel = ch.with_budget(DelayBudget::Avg(value)),
        Axis::Flips => {
            let t = integer(value, "flips")?;
            spec.adversary = match spec.adversary {
                AdversarySpec::Random { .. } => AdversarySpec::Random { flips_per_step: t },
                AdversarySpec::FlipAndDelay { .. } => {
                    AdversarySpec::FlipAndDelay { flips_per_step: t }
                }
                _ => {
                    return Err(ExperimentError::InvalidSpec(
                        "this adversary takes no flips".into(),
                    ))
                }
            };
        }
    }
    Ok(spec)
}

/// One row per value, in the order given.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: Rational,
    pub aggregate: Aggregate,
}

pub fn sweep(
    template: &ExperimentSpec,
    axis: Axis,
    values: &[Rational],
) -> Result<Vec<SweepRow>, ExperimentError> {
    values
        .iter()
        .map(|&value| {
            let spec = with_axis(template, axis, value)?;
            Ok(SweepRow {
                value,
                aggregate: aggregate(&run_experiment(&spec)?),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Resolution;

    fn max_spec(adversary: AdversarySpec, dmax: u64) -> ExperimentSpec {
        ExperimentSpec {
            codec: CodecSpec::MaxUnary {
                c: Rational::new(1, 2),
            },
            adversary,
            channel: ChannelParams::new(8, 4, Resolution::Finite(4), DelayBudget::Max(dmax))
                .unwrap(),
            trials: 40,
            seed: 11,
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/4"), Ok(Rational::new(1, 4)));
        assert_eq!(parse_rational("0.25"), Ok(Rational::new(1, 4)));
        assert_eq!(parse_rational(".5"), Ok(Rational::new(1, 2)));
        assert_eq!(parse_rational("3"), Ok(Rational::from_integer(3)));
        for bad in ["", "1/0", "-1", "a", "1.", "1.2.3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let spec = max_spec(AdversarySpec::Random { flips_per_step: 0 }, 4);
        let a = run_experiment(&spec).unwrap();
        assert_eq!(a, run_experiment(&spec).unwrap());
        assert_eq!(
            write_trial_csv(&a),
            write_trial_csv(&run_experiment(&spec).unwrap())
        );
        assert!(a.iter().all(|r| r.success));
        assert_eq!(a.len(), 40);
        assert!(a.iter().enumerate().all(|(i, r)| r.trial == i));
    }

    #[test]
    fn block_end_past_the_block_merges_messages() {
        // block length 16; a window of 32 piles both blocks onto the last index
        let spec = max_spec(AdversarySpec::BlockEnd, 32);
        let records = run_experiment(&spec).unwrap();
        assert!(records.iter().any(|r| !r.success));
        assert!(aggregate(&records).distinct_forms < 40);
    }

    #[test]
    fn incompatible_specs() {
        let mut spec = max_spec(AdversarySpec::Banking, 4);
        assert!(matches!(
            run_experiment(&spec),
            Err(ExperimentError::InvalidSpec(_))
        ));
        spec.adversary = AdversarySpec::Identity;
        spec.trials = 0;
        assert!(run_experiment(&spec).is_err());
        spec.trials = 1;
        spec.channel = spec
            .channel
            .with_budget(DelayBudget::Avg(Rational::from_integer(1)));
        assert!(run_experiment(&spec).is_err());
    }

    #[test]
    fn identity_on_avg_concat() {
        let spec = ExperimentSpec {
            codec: CodecSpec::AvgConcat {
                c: Rational::new(1, 2),
                outer: OuterSpec::Reference,
            },
            adversary: AdversarySpec::Identity,
            channel: ChannelParams::new(
                8,
                20,
                Resolution::Finite(2),
                DelayBudget::Avg(Rational::from_integer(1)),
            )
            .unwrap(),
            trials: 10,
            seed: 3,
        };
        let records = run_experiment(&spec).unwrap();
        assert!(records
            .iter()
            .all(|r| r.success && r.spent == 0 && r.corrupted_fraction == Some(0.0)));
    }

    #[test]
    fn collision_campaign_costs() {
        let spec = ExperimentSpec {
            codec: CodecSpec::AvgConcat {
                c: Rational::new(1, 4),
                outer: OuterSpec::Uncoded,
            },
            adversary: AdversarySpec::CollisionPoint,
            channel: ChannelParams::new(
                64,
                8,
                Resolution::Finite(4),
                DelayBudget::Avg(Rational::new(1, 2)),
            )
            .unwrap(),
            trials: 5,
            seed: 1,
        };
        let agg = aggregate(&run_experiment(&spec).unwrap());
        // ℓ = 16: one pile of 16 costs 120 and flips the block
        assert_eq!(agg.cost_per_corruption, Some(120.0));
        assert!(agg.max_corrupted.unwrap() > 0.0);
    }

    #[test]
    fn sweep_rows_follow_values() {
        let spec = max_spec(AdversarySpec::Random { flips_per_step: 0 }, 4);
        assert!(sweep(&spec, Axis::Dmax, &[]).unwrap().is_empty());
        let rows = sweep(
            &spec,
            Axis::Dmax,
            &[Rational::from_integer(0), Rational::from_integer(8)],
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].aggregate.max_spent, 0);
        assert!(with_axis(&spec, Axis::Flips, Rational::from_integer(1)).is_ok());
        assert!(with_axis(
            &max_spec(AdversarySpec::Identity, 4),
            Axis::Flips,
            Rational::from_integer(1)
        )
        .is_err());
        assert!(with_axis(&spec, Axis::M, Rational::new(1, 2)).is_err());
    }

    #[test]
    fn codebooks_and_single_attacks() {
        let spec = ExperimentSpec {
            channel: ChannelParams::new(4, 2, Resolution::Finite(2), DelayBudget::Max(1)).unwrap(),
            codec: CodecSpec::MaxUnary {
                c: Rational::new(1, 2),
            },
            ..max_spec(AdversarySpec::BlockEnd, 1)
        };
        // two blocks of 4 carry one bit each
        let book = codebook(&spec, 8).unwrap();
        assert_eq!(book.len(), 4);
        assert!(codebook(&spec, 1).is_err());
        let out = attack_codeword(&spec, &book[3]).unwrap();
        assert!(out.ledger.within_budget());
        assert!(attack_codeword(&spec, &Codeword::zeros(3)).is_err());
    }

    #[test]
    fn first_one_has_no_blocks() {
        let spec = ExperimentSpec {
            codec: CodecSpec::FirstOne {
                c_prime: Rational::new(1, 4),
            },
            adversary: AdversarySpec::Identity,
            channel: ChannelParams::new(
                16,
                2,
                Resolution::Finite(1),
                DelayBudget::Avg(Rational::from_integer(1)),
            )
            .unwrap(),
            trials: 8,
            seed: 5,
        };
        let records = run_experiment(&spec).unwrap();
        assert!(records
            .iter()
            .all(|r| r.success && r.corrupted_fraction.is_none()));
    }

    #[test]
    fn spread_with_random_noise() {
        // block 2, 20 blocks; one flip per macro-step of 8 gives at most 5 dirty blocks of 20
        let spec = ExperimentSpec {
            codec: CodecSpec::Spread {
                outer: OuterSpec::Reference,
            },
            adversary: AdversarySpec::Random { flips_per_step: 1 },
            channel: ChannelParams::new(8, 5, Resolution::Finite(1), DelayBudget::Max(1)).unwrap(),
            trials: 50,
            seed: 9,
        };
        let records = run_experiment(&spec).unwrap();
        assert!(records
            .iter()
            .all(|r| r.corrupted_fraction.unwrap() <= 0.25));
    }
}
