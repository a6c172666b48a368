//! Channel model: codewords, delay schedules and reception.
//!
//! A message lasts `T` macro-intervals, each split into `M` micro-intervals,
//! so every codeword is a bit string of length `M·T`. The adversary shifts
//! each symbol forward by a nonnegative delay. The receiver sees, at every
//! index, the number of 1s that landed there, saturated at the collision
//! resolution `k`. Symbols pushed past the last index are lost.
//!
//! Positions are 0-based in storage and in every file format.

use std::fmt;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use thiserror::Error;

/// Nonnegative rational used for average-delay bounds and codec knobs.
pub type Rational = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("invalid channel parameters: {0}")]
    InvalidParams(&'static str),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("codeword symbol at position {position} is {value}, expected 0 or 1")]
    NotABit { position: usize, value: u8 },
    #[error("infeasible delay schedule: {0}")]
    Infeasible(Feasibility),
}

/// Collision resolution: how many simultaneous 1s the receiver can count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resolution {
    Finite(u32),
    /// The sum channel: arrivals are never clipped.
    Unbounded,
}

impl Resolution {
    #[inline]
    pub fn clip(self, arrivals: u32) -> u32 {
        match self {
            Resolution::Finite(k) => arrivals.min(k),
            Resolution::Unbounded => arrivals,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Resolution::Finite(k) => Some(k),
            Resolution::Unbounded => None,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Finite(k) => write!(f, "{k}"),
            Resolution::Unbounded => f.write_str("inf"),
        }
    }
}

/// The adversary's delay allowance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayBudget {
    /// Every symbol may be delayed by at most this many micro-timesteps.
    Max(u64),
    /// The total delay over all `M·T` symbols is at most `M·T·D_avg`.
    Avg(Rational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelParams {
    m: usize,
    t: usize,
    k: Resolution,
    budget: DelayBudget,
}

impl ChannelParams {
    pub fn new(
        m: usize,
        t: usize,
        k: Resolution,
        budget: DelayBudget,
    ) -> Result<Self, ChannelError> {
        if m == 0 {
            return Err(ChannelError::InvalidParams("M must be at least 1"));
        }
        if t == 0 {
            return Err(ChannelError::InvalidParams("T must be at least 1"));
        }
        if k == Resolution::Finite(0) {
            return Err(ChannelError::InvalidParams("k must be at least 1"));
        }
        if m.checked_mul(t).is_none() {
            return Err(ChannelError::InvalidParams("M·T overflows"));
        }
        Ok(Self { m, t, k, budget })
    }

    /// Micro-intervals per macro-interval.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Message duration in macro-intervals.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> Resolution {
        self.k
    }

    pub fn budget(&self) -> DelayBudget {
        self.budget
    }

    /// Codeword length `M·T`.
    pub fn codeword_len(&self) -> usize {
        self.m * self.t
    }

    pub fn with_budget(mut self, budget: DelayBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_t(self, t: usize) -> Result<Self, ChannelError> {
        Self::new(self.m, t, self.k, self.budget)
    }

    pub fn capacity(&self) -> Capacity {
        match self.budget {
            DelayBudget::Max(d) => Capacity::PerSymbol(d),
            DelayBudget::Avg(avg) => {
                let total = Ratio::from_integer(self.codeword_len() as u64) * avg;
                Capacity::Total(total.floor().to_integer())
            }
        }
    }
}

/// A sent bit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword(Vec<u8>);

impl Codeword {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self, ChannelError> {
        if let Some((position, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(ChannelError::NotABit { position, value });
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Positions carrying a 1, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Per-symbol delays `Δ`, in micro-timesteps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DelaySchedule(Vec<u64>);

impl DelaySchedule {
    pub fn new(delays: Vec<u64>) -> Self {
        Self(delays)
    }

    /// All-zero schedule of length `M·T`.
    pub fn identity(p: &ChannelParams) -> Self {
        Self(vec![0; p.codeword_len()])
    }

    pub fn delays(&self) -> &[u64] {
        &self.0
    }

    pub fn delays_mut(&mut self) -> &mut [u64] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &d| acc.saturating_add(d))
    }

    pub fn max_delay(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for DelaySchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// What the receiver observes: clipped arrival counts per index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReceivedWord(Vec<u32>);

impl ReceivedWord {
    pub fn new(values: Vec<u32>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&v| u64::from(v)).sum()
    }
}

impl fmt::Display for ReceivedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Budget limit in ledger units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capacity {
    PerSymbol(u64),
    Total(u64),
}

/// Accounting view of a schedule against its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetLedger {
    /// Total delay charged, including symbols pushed past the end.
    pub spent: u64,
    /// Largest single delay in the schedule.
    pub max_delay: u64,
    pub capacity: Capacity,
}

impl BudgetLedger {
    pub fn for_schedule(d: &DelaySchedule, p: &ChannelParams) -> Self {
        Self {
            spent: d.total(),
            max_delay: d.max_delay(),
            capacity: p.capacity(),
        }
    }

    pub fn within_budget(&self) -> bool {
        match self.capacity {
            Capacity::PerSymbol(bound) => self.max_delay <= bound,
            Capacity::Total(bound) => self.spent <= bound,
        }
    }

    /// Average delay per symbol over a codeword of length `len`.
    pub fn average(&self, len: usize) -> f64 {
        if len == 0 {
            return 0.0;
        }
        self.spent.to_f64().unwrap_or(f64::INFINITY) / len as f64
    }
}

/// Outcome of [`validate_schedule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(BudgetLedger),
    WrongLength {
        expected: usize,
        found: usize,
    },
    /// First index (0-based) whose delay exceeds the per-symbol bound.
    ExceedsMax {
        index: usize,
        delay: u64,
        bound: u64,
    },
    ExceedsTotal {
        total: u64,
        capacity: u64,
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feasibility::Feasible(l) => write!(f, "feasible (spent {})", l.spent),
            Feasibility::WrongLength { expected, found } => {
                write!(f, "schedule has length {found}, expected {expected}")
            }
            Feasibility::ExceedsMax {
                index,
                delay,
                bound,
            } => {
                write!(
                    f,
                    "delay {delay} at index {index} exceeds the bound {bound}"
                )
            }
            Feasibility::ExceedsTotal { total, capacity } => {
                write!(f, "total delay {total} exceeds the capacity {capacity}")
            }
        }
    }
}

/// Checks a schedule against the channel's budget.
pub fn validate_schedule(d: &DelaySchedule, p: &ChannelParams) -> Feasibility {
    if d.len() != p.codeword_len() {
        return Feasibility::WrongLength {
            expected: p.codeword_len(),
            found: d.len(),
        };
    }
    let ledger = BudgetLedger::for_schedule(d, p);
    match ledger.capacity {
        Capacity::PerSymbol(bound) => {
            if let Some((index, &delay)) = d.delays().iter().enumerate().find(|(_, &x)| x > bound) {
                return Feasibility::ExceedsMax {
                    index,
                    delay,
                    bound,
                };
            }
        }
        Capacity::Total(capacity) => {
            if ledger.spent > capacity {
                return Feasibility::ExceedsTotal {
                    total: ledger.spent,
                    capacity,
                };
            }
        }
    }
    Feasibility::Feasible(ledger)
}

/// All-zero delays for the channel's codeword length.
pub fn identity_schedule(p: &ChannelParams) -> DelaySchedule {
    DelaySchedule::identity(p)
}

/// Delivers `c` through the channel under schedule `d`.
///
/// `Y_i = min(k, Σ X_j)` over the `j` landing at `i`; anything landing at or
/// beyond `M·T` is dropped. The schedule must be feasible for `p`.
pub fn apply_delay(
    c: &Codeword,
    d: &DelaySchedule,
    p: &ChannelParams,
) -> Result<ReceivedWord, ChannelError> {
    let n = p.codeword_len();
    if c.len() != n {
        return Err(ChannelError::LengthMismatch {
            expected: n,
            found: c.len(),
        });
    }
    match validate_schedule(d, p) {
        Feasibility::Feasible(_) => {}
        Feasibility::WrongLength { expected, found } => {
            return Err(ChannelError::LengthMismatch { expected, found })
        }
        v => return Err(ChannelError::Infeasible(v)),
    }
    Ok(deliver(c.bits(), d.delays(), p.k()))
}

/// Reception without feasibility checks; lengths must already agree.
pub(crate) fn deliver(bits: &[u8], delays: &[u64], k: Resolution) -> ReceivedWord {
    let n = bits.len();
    let mut arrivals = vec![0u32; n];
    for (j, (&x, &delay)) in bits.iter().zip(delays).enumerate() {
        if x == 0 {
            continue;
        }
        let room = (n - j) as u64;
        if delay < room {
            arrivals[j + delay as usize] += 1;
        }
    }
    for a in &mut arrivals {
        *a = k.clip(*a);
    }
    ReceivedWord(arrivals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, k: Resolution, budget: DelayBudget) -> ChannelParams {
        ChannelParams::new(n, 1, k, budget).unwrap()
    }

    fn cw(bits: &[u8]) -> Codeword {
        Codeword::from_bits(bits.to_vec()).unwrap()
    }

    fn run(bits: &[u8], delays: &[u64], k: u32) -> Vec<u32> {
        let p = params(bits.len(), Resolution::Finite(k), DelayBudget::Max(64));
        apply_delay(&cw(bits), &DelaySchedule::new(delays.to_vec()), &p)
            .unwrap()
            .into_values()
    }

    #[test]
    fn zero_codeword_is_fixed_point() {
        assert_eq!(run(&[0, 0, 0, 0], &[3, 0, 1, 0], 1), vec![0, 0, 0, 0]);
    }

    #[test]
    fn collision_clips_at_k() {
        assert_eq!(run(&[1, 1, 0, 0], &[1, 0, 0, 0], 1), vec![0, 1, 0, 0]);
        assert_eq!(run(&[1, 1, 1, 0], &[2, 1, 0, 0], 2), vec![0, 0, 2, 0]);
    }

    #[test]
    fn symbols_past_the_end_vanish() {
        assert_eq!(run(&[1, 0, 0, 1], &[4, 0, 0, 0], 1), vec![0, 0, 0, 1]);
    }

    #[test]
    fn identity_schedule_passes_bits_through() {
        let p = params(4, Resolution::Finite(1), DelayBudget::Max(0));
        let id = identity_schedule(&p);
        assert_eq!(id.delays(), &[0, 0, 0, 0]);
        let y = apply_delay(&cw(&[1, 0, 1, 0]), &id, &p).unwrap();
        assert_eq!(y.values(), &[1, 0, 1, 0]);
        let p5 = params(4, Resolution::Finite(5), DelayBudget::Max(0));
        let y = apply_delay(&cw(&[1, 1, 0, 0]), &id, &p5).unwrap();
        assert_eq!(y.values(), &[1, 1, 0, 0]);
    }

    #[test]
    fn unbounded_resolution_never_clips() {
        let p = params(4, Resolution::Unbounded, DelayBudget::Max(3));
        let y = apply_delay(
            &cw(&[1, 1, 1, 1]),
            &DelaySchedule::new(vec![3, 2, 1, 0]),
            &p,
        )
        .unwrap();
        assert_eq!(y.values(), &[0, 0, 0, 4]);
    }

    #[test]
    fn validate_zero_delay_is_feasible() {
        let d = DelaySchedule::new(vec![0; 4]);
        for budget in [
            DelayBudget::Max(0),
            DelayBudget::Avg(Rational::from_integer(0)),
        ] {
            let p = params(4, Resolution::Finite(1), budget);
            assert!(validate_schedule(&d, &p).is_feasible());
        }
    }

    #[test]
    fn validate_reports_first_violating_index() {
        let p = params(4, Resolution::Finite(1), DelayBudget::Max(2));
        let v = validate_schedule(&DelaySchedule::new(vec![3, 0, 0, 0]), &p);
        assert_eq!(
            v,
            Feasibility::ExceedsMax {
                index: 0,
                delay: 3,
                bound: 2
            }
        );
    }

    #[test]
    fn validate_aggregate_boundary() {
        let p = params(
            4,
            Resolution::Finite(1),
            DelayBudget::Avg(Rational::from_integer(2)),
        );
        assert!(validate_schedule(&DelaySchedule::new(vec![2, 2, 2, 2]), &p).is_feasible());
        assert_eq!(
            validate_schedule(&DelaySchedule::new(vec![2, 2, 2, 3]), &p),
            Feasibility::ExceedsTotal {
                total: 9,
                capacity: 8
            }
        );
    }

    #[test]
    fn fractional_average_floors_capacity() {
        let p = params(
            3,
            Resolution::Finite(1),
            DelayBudget::Avg(Rational::new(1, 2)),
        );
        assert_eq!(p.capacity(), Capacity::Total(1));
    }

    #[test]
    fn dropped_symbols_are_charged_in_full() {
        let p = params(
            4,
            Resolution::Finite(1),
            DelayBudget::Avg(Rational::from_integer(1)),
        );
        let d = DelaySchedule::new(vec![4, 0, 0, 0]);
        match validate_schedule(&d, &p) {
            Feasibility::Feasible(l) => assert_eq!(l.spent, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn apply_rejects_bad_inputs() {
        let p = params(4, Resolution::Finite(1), DelayBudget::Max(1));
        let err = apply_delay(&cw(&[1, 0, 0]), &DelaySchedule::new(vec![0; 4]), &p);
        assert!(matches!(err, Err(ChannelError::LengthMismatch { .. })));
        let err = apply_delay(&cw(&[1, 0, 0, 0]), &DelaySchedule::new(vec![0; 3]), &p);
        assert!(matches!(err, Err(ChannelError::LengthMismatch { .. })));
        let err = apply_delay(
            &cw(&[1, 0, 0, 0]),
            &DelaySchedule::new(vec![2, 0, 0, 0]),
            &p,
        );
        assert!(matches!(err, Err(ChannelError::Infeasible(_))));
    }

    #[test]
    fn params_reject_zeros() {
        let b = DelayBudget::Max(0);
        assert!(ChannelParams::new(0, 1, Resolution::Finite(1), b).is_err());
        assert!(ChannelParams::new(1, 0, Resolution::Finite(1), b).is_err());
        assert!(ChannelParams::new(1, 1, Resolution::Finite(0), b).is_err());
    }

    #[test]
    fn codeword_rejects_non_bits() {
        assert_eq!(
            Codeword::from_bits(vec![0, 1, 2]),
            Err(ChannelError::NotABit {
                position: 2,
                value: 2
            })
        );
    }
}
