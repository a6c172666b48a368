//! Cheapest schedule whose received word has a given property.
//!
//! The search sweeps positions left to right carrying the 1s that have
//! not landed yet. Carrying one symbol across one position costs one unit,
//! so the total carry equals `Σ Δ`, dropped symbols included. Only 1s are
//! ever delayed. Which carried 1s land first does not change the received
//! word; under a max bound the oldest go first, which only widens what
//! later positions can do. The frontier is expanded in order of cost.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::OracleError;
use crate::channel::{apply_delay, Capacity, ChannelParams, Codeword, DelaySchedule, ReceivedWord};

/// A property of received words, with an optional early reject on
/// prefixes.
pub trait ReceivedPredicate: Sync {
    fn holds(&self, y: &[u32]) -> bool;

    /// `false` only if no completion of `prefix` can satisfy the predicate.
    fn prefix_viable(&self, _prefix: &[u32]) -> bool {
        true
    }
}

impl<F: Fn(&[u32]) -> bool + Sync> ReceivedPredicate for F {
    fn holds(&self, y: &[u32]) -> bool {
        self(y)
    }
}

/// Received word equals a fixed word.
#[derive(Debug, Clone)]
pub struct Equals(pub ReceivedWord);

impl ReceivedPredicate for Equals {
    fn holds(&self, y: &[u32]) -> bool {
        y == self.0.values()
    }

    fn prefix_viable(&self, prefix: &[u32]) -> bool {
        self.0.values().starts_with(prefix)
    }
}

/// Nothing nonzero before index `at` (0-based).
#[derive(Debug, Clone, Copy)]
pub struct SilentBefore(pub usize);

impl ReceivedPredicate for SilentBefore {
    fn holds(&self, y: &[u32]) -> bool {
        self.prefix_viable(y)
    }

    fn prefix_viable(&self, prefix: &[u32]) -> bool {
        prefix.iter().take(self.0).all(|&v| v == 0)
    }
}

/// Weight of `y[start..start + len]` satisfies `γ² < ℓk`.
#[derive(Debug, Clone, Copy)]
pub struct WeightBelowThreshold {
    pub start: usize,
    pub len: usize,
    pub ell: u64,
    pub k: u64,
}

impl WeightBelowThreshold {
    fn weight(&self, y: &[u32]) -> u64 {
        y.iter()
            .skip(self.start)
            .take(self.len)
            .map(|&v| u64::from(v))
            .sum()
    }
}

impl ReceivedPredicate for WeightBelowThreshold {
    fn holds(&self, y: &[u32]) -> bool {
        let g = u128::from(self.weight(y));
        g * g < u128::from(self.ell) * u128::from(self.k)
    }

    fn prefix_viable(&self, prefix: &[u32]) -> bool {
        // the block weight only grows as the prefix extends
        let g = u128::from(self.weight(prefix));
        g * g < u128::from(self.ell) * u128::from(self.k)
    }
}

/// An optimal schedule and what it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCost {
    pub cost: u64,
    pub schedule: DelaySchedule,
    pub received: ReceivedWord,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    /// Ages of carried 1s, oldest first; a bare count when ages don't matter.
    carried: Vec<u32>,
    prefix: Vec<u32>,
}

struct Node {
    state: State,
    parent: Option<(usize, u32)>,
}

/// Exact minimum of `Σ Δ` over feasible schedules whose received word
/// satisfies `pred`. `Ok(None)` when no feasible schedule does. Fails once
/// more than `cap` distinct search states have been created.
pub fn min_attack_cost(
    c: &Codeword,
    pred: &dyn ReceivedPredicate,
    ch: &ChannelParams,
    cap: usize,
) -> Result<Option<MinCost>, OracleError> {
    let n = ch.codeword_len();
    if c.len() != n {
        return Err(OracleError::InvalidParams(format!(
            "codeword has length {}, channel expects {n}",
            c.len()
        )));
    }
    let (max_age, total_cap) = match ch.capacity() {
        Capacity::PerSymbol(d) => (Some(d), u64::MAX),
        Capacity::Total(t) => (None, t),
    };
    let k = ch.k();
    let bits = c.bits();

    let mut nodes: Vec<Node> = Vec::new();
    let mut best: HashMap<State, (u64, usize)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let start = State {
        carried: if max_age.is_some() {
            Vec::new()
        } else {
            vec![0]
        },
        prefix: Vec::new(),
    };
    nodes.push(Node {
        state: start.clone(),
        parent: None,
    });
    best.insert(start, (0, 0));
    heap.push(Reverse((0u64, 0usize)));

    while let Some(Reverse((cost, id))) = heap.pop() {
        let state = nodes[id].state.clone();
        if best.get(&state).is_some_and(|&(c, _)| c < cost) {
            continue;
        }
        let i = state.prefix.len();
        if i == n {
            if pred.holds(&state.prefix) {
                return Ok(Some(rebuild(c, ch, &nodes, id, cost)?));
            }
            continue;
        }
        let mut carried = state.carried.clone();
        if bits[i] == 1 {
            match max_age {
                Some(_) => carried.push(0),
                None => carried[0] += 1,
            }
        }
        let (held, forced) = match max_age {
            Some(d) => {
                let due = carried.iter().take_while(|&&a| u64::from(a) >= d).count();
                (carried.len(), due)
            }
            None => (carried[0] as usize, 0),
        };
        for land in forced..=held {
            let rest = (held - land) as u64;
            let next_cost = cost + rest;
            if next_cost > total_cap {
                continue;
            }
            let mut prefix = state.prefix.clone();
            prefix.push(k.clip(land as u32));
            if !pred.prefix_viable(&prefix) {
                continue;
            }
            let next_carried = match max_age {
                Some(_) => carried[land..].iter().map(|a| a + 1).collect(),
                None => vec![rest as u32],
            };
            let next = State {
                carried: next_carried,
                prefix,
            };
            if best.get(&next).is_some_and(|&(c, _)| c <= next_cost) {
                continue;
            }
            if nodes.len() >= cap {
                return Err(OracleError::CapExceeded { cap });
            }
            let nid = nodes.len();
            nodes.push(Node {
                state: next.clone(),
                parent: Some((id, land as u32)),
            });
            best.insert(next, (next_cost, nid));
            heap.push(Reverse((next_cost, nid)));
        }
    }
    Ok(None)
}

/// Replays the landing counts along the winning path with real origins.
fn rebuild(
    c: &Codeword,
    ch: &ChannelParams,
    nodes: &[Node],
    mut id: usize,
    cost: u64,
) -> Result<MinCost, OracleError> {
    let mut lands = Vec::new();
    while let Some((parent, land)) = nodes[id].parent {
        lands.push(land as usize);
        id = parent;
    }
    lands.reverse();
    let n = ch.codeword_len();
    let mut delays = vec![0u64; n];
    let mut queue = std::collections::VecDeque::new();
    for (i, &land) in lands.iter().enumerate() {
        if c.bits()[i] == 1 {
            queue.push_back(i);
        }
        for _ in 0..land {
            let o = queue.pop_front().expect("landing count within carried");
            delays[o] = (i - o) as u64;
        }
    }
    for o in queue {
        delays[o] = (n - o) as u64;
    }
    let schedule = DelaySchedule::new(delays);
    let received = apply_delay(c, &schedule, ch)?;
    debug_assert_eq!(schedule.total(), cost);
    Ok(MinCost {
        cost,
        schedule,
        received,
    })
}
