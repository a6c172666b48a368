//! Exhaustive ground truth for tiny channels.
//!
//! Everything here is exact or refuses with [`OracleError::CapExceeded`].

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{Capacity, ChannelError, ChannelParams, Codeword, ReceivedWord};

mod min_cost;
mod mis;

pub use min_cost::{
    min_attack_cost, Equals, MinCost, ReceivedPredicate, SilentBefore, WeightBelowThreshold,
};
pub use mis::Graph;

/// Longest codeword for which [`max_codebook`] will enumerate `2^MT` words.
pub const MAX_EXHAUSTIVE_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration exceeded the cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("invalid oracle input: {0}")]
    InvalidParams(String),
    #[error("{0}")]
    Channel(#[from] ChannelError),
}

/// `B(c)`: every received word some feasible schedule can produce from `c`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReceivedSet {
    words: BTreeSet<ReceivedWord>,
}

impl ReceivedSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, y: &ReceivedWord) -> bool {
        self.words.contains(y)
    }

    /// Ascending.
    pub fn iter(&self) -> impl Iterator<Item = &ReceivedWord> {
        self.words.iter()
    }

    pub fn is_subset(&self, other: &ReceivedSet) -> bool {
        self.words.is_subset(&other.words)
    }

    /// Smallest word in both sets.
    pub fn first_common<'a>(&'a self, other: &'a ReceivedSet) -> Option<&'a ReceivedWord> {
        self.words.intersection(&other.words).next()
    }
}

struct Enumerator<'a> {
    ones: Vec<usize>,
    n: usize,
    k: crate::channel::Resolution,
    max_delay: Option<u64>,
    arrivals: Vec<u32>,
    /// Largest remaining budget each `(depth, arrivals)` was explored with.
    seen: HashMap<(usize, Vec<u32>), u64>,
    nodes: usize,
    cap: usize,
    out: &'a mut BTreeSet<ReceivedWord>,
}

impl Enumerator<'_> {
    fn walk(&mut self, depth: usize, remaining: u64) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(OracleError::CapExceeded { cap: self.cap });
        }
        if depth == self.ones.len() {
            self.out.insert(ReceivedWord::new(self.arrivals.clone()));
            return Ok(());
        }
        let key = (depth, self.arrivals.clone());
        match self.seen.get(&key) {
            Some(&r) if r >= remaining => return Ok(()),
            _ => {
                self.seen.insert(key, remaining);
            }
        }
        let j = self.ones[depth];
        let room = (self.n - j) as u64;
        let top = match self.max_delay {
            Some(d) => d.min(room),
            None => remaining.min(room),
        };
        for d in 0..=top {
            let left = if self.max_delay.is_some() {
                0
            } else {
                remaining - d
            };
            if d == room {
                // pushed past the end
                self.walk(depth + 1, left)?;
            } else {
                let p = j + d as usize;
                let old = self.arrivals[p];
                self.arrivals[p] = self.k.clip(old + 1);
                self.walk(depth + 1, left)?;
                self.arrivals[p] = old;
            }
        }
        Ok(())
    }
}

/// Exact `B(c)`. Only delays of 1s matter, and any delay that pushes a
/// symbol past the end is as good as the cheapest such. `cap` bounds the
/// number of search nodes.
pub fn enumerate_received_set(
    c: &Codeword,
    ch: &ChannelParams,
    cap: usize,
) -> Result<ReceivedSet, OracleError> {
    let n = ch.codeword_len();
    if c.len() != n {
        return Err(ChannelError::LengthMismatch {
            expected: n,
            found: c.len(),
        }
        .into());
    }
    let (max_delay, budget) = match ch.capacity() {
        Capacity::PerSymbol(d) => (Some(d), 0),
        Capacity::Total(t) => (None, t),
    };
    let mut words = BTreeSet::new();
    let mut e = Enumerator {
        ones: c.ones().collect(),
        n,
        k: ch.k(),
        max_delay,
        arrivals: vec![0; n],
        seen: HashMap::new(),
        nodes: 0,
        cap,
        out: &mut words,
    };
    e.walk(0, budget)?;
    Ok(ReceivedSet { words })
}

/// `B(c)` for every codeword, in order, computed in parallel.
pub fn received_sets(
    codebook: &[Codeword],
    ch: &ChannelParams,
    cap: usize,
) -> Result<Vec<ReceivedSet>, OracleError> {
    codebook
        .par_iter()
        .map(|c| enumerate_received_set(c, ch, cap))
        .collect()
}

/// Two codewords the receiver cannot always tell apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    /// Indices into the codebook, `first < second`.
    pub first: usize,
    pub second: usize,
    pub first_codeword: Codeword,
    pub second_codeword: Codeword,
    /// A received word both can produce.
    pub witness: ReceivedWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// The colliding pair with the smallest `second`, then smallest
    /// `first`; the witness is the smallest shared word.
    Invalid(Collision),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Whether all received sets of the codebook are pairwise disjoint.
pub fn codebook_valid(
    codebook: &[Codeword],
    ch: &ChannelParams,
    cap: usize,
) -> Result<Verdict, OracleError> {
    let sets = received_sets(codebook, ch, cap)?;
    for j in 1..sets.len() {
        for i in 0..j {
            if let Some(w) = sets[i].first_common(&sets[j]) {
                return Ok(Verdict::Invalid(Collision {
                    first: i,
                    second: j,
                    first_codeword: codebook[i].clone(),
                    second_codeword: codebook[j].clone(),
                    witness: w.clone(),
                }));
            }
        }
    }
    Ok(Verdict::Valid)
}

/// Every binary word of length `n`, in counting order with index 0 first.
pub fn all_codewords(n: usize) -> Vec<Codeword> {
    (0u64..1 << n)
        .map(|v| {
            Codeword::from_bits((0..n).map(|i| (v >> (n - 1 - i) & 1) as u8).collect())
                .expect("binary")
        })
        .collect()
}

/// Vertices are codewords; edges join codewords with overlapping received
/// sets.
pub fn confusability_graph(
    codebook: &[Codeword],
    ch: &ChannelParams,
    cap: usize,
) -> Result<Graph, OracleError> {
    let sets = received_sets(codebook, ch, cap)?;
    let mut by_word: HashMap<&ReceivedWord, Vec<usize>> = HashMap::new();
    for (i, s) in sets.iter().enumerate() {
        for w in s.iter() {
            by_word.entry(w).or_default().push(i);
        }
    }
    let mut g = Graph::new(codebook.len());
    for sources in by_word.values() {
        for (a, &u) in sources.iter().enumerate() {
            for &v in &sources[a + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// A largest valid codebook over all `2^MT` words.
pub fn max_codebook(ch: &ChannelParams, cap: usize) -> Result<Vec<Codeword>, OracleError> {
    let n = ch.codeword_len();
    if n > MAX_EXHAUSTIVE_LEN {
        return Err(OracleError::InvalidParams(format!(
            "MT = {n} exceeds the exhaustive limit {MAX_EXHAUSTIVE_LEN}"
        )));
    }
    let words = all_codewords(n);
    let g = confusability_graph(&words, ch, cap)?;
    Ok(g.maximum_independent_set()
        .into_iter()
        .map(|i| words[i].clone())
        .collect())
}

pub fn max_codebook_size(ch: &ChannelParams, cap: usize) -> Result<usize, OracleError> {
    Ok(max_codebook(ch, cap)?.len())
}

/// Finite-parameter rate of a valid codebook.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    /// `log2 |C|`.
    pub log2_size: f64,
    /// Bits per macro-interval.
    pub rate: f64,
}

impl RateEstimate {
    pub fn new(codebook_size: usize, t: usize) -> Self {
        let log2_size = if codebook_size == 0 {
            0.0
        } else {
            (codebook_size as f64).log2()
        };
        Self {
            log2_size,
            rate: log2_size / t as f64,
        }
    }
}

pub const ORACLE_CSV_HEADER: &str = "# delaychan-oracle v1";

/// `codeword,received_set_size` rows.
pub fn write_received_set_csv(codebook: &[Codeword], sets: &[ReceivedSet]) -> String {
    let mut out = format!("{ORACLE_CSV_HEADER}\ncodeword,received_set_size\n");
    for (c, s) in codebook.iter().zip(sets) {
        out.push_str(&format!("{c},{}\n", s.len()));
    }
    out
}

pub const WITNESS_HEADER: &str = "# delaychan-witness v1 (positions 0-based)";

/// Human- and machine-readable record of a collision.
pub fn write_witness(c: &Collision) -> String {
    let y: Vec<String> = c.witness.values().iter().map(u32::to_string).collect();
    format!(
        "{WITNESS_HEADER}\nfirst_index={}\nfirst={}\nsecond_index={}\nsecond={}\nreceived={}\n",
        c.first,
        c.first_codeword,
        c.second,
        c.second_codeword,
        y.join(",")
    )
}
