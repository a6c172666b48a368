//! Exact maximum independent set by branch and bound over bitsets.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u64>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn set(bits: &mut [u64], v: usize) {
    bits[v / 64] |= 1 << (v % 64);
}

fn clear(bits: &mut [u64], v: usize) {
    bits[v / 64] &= !(1 << (v % 64));
}

fn count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

fn first(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn members(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![vec![0; words(n)]; n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Adds the undirected edge `u–v`; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            set(&mut self.adj[u], v);
            set(&mut self.adj[v], u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| count(a)).sum::<usize>() / 2
    }

    pub fn is_independent(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    /// A maximum independent set, ascending.
    pub fn maximum_independent_set(&self) -> Vec<usize> {
        let mut cand = vec![0u64; words(self.n)];
        for v in 0..self.n {
            set(&mut cand, v);
        }
        let mut search = Search {
            g: self,
            chosen: Vec::new(),
            best: Vec::new(),
        };
        search.run(cand);
        let mut best = search.best;
        best.sort_unstable();
        best
    }

    /// Upper bound on the independence number of `cand`: the number of
    /// cliques in a greedy clique cover.
    fn clique_cover(&self, cand: &[u64]) -> usize {
        let mut rest = cand.to_vec();
        let mut cliques = 0;
        while let Some(v) = first(&rest) {
            clear(&mut rest, v);
            let mut grow: Vec<u64> = rest.iter().zip(&self.adj[v]).map(|(r, a)| r & a).collect();
            while let Some(u) = first(&grow) {
                clear(&mut rest, u);
                clear(&mut grow, u);
                for (g, a) in grow.iter_mut().zip(&self.adj[u]) {
                    *g &= a;
                }
            }
            cliques += 1;
        }
        cliques
    }
}

struct Search<'a> {
    g: &'a Graph,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl Search<'_> {
    fn take(&mut self, cand: &mut [u64], v: usize) {
        self.chosen.push(v);
        clear(cand, v);
        for (c, a) in cand.iter_mut().zip(&self.g.adj[v]) {
            *c &= !a;
        }
    }

    fn run(&mut self, mut cand: Vec<u64>) {
        let mark = self.chosen.len();
        // vertices of degree 0 or 1 always belong to some maximum set
        loop {
            let low = members(&cand).find(|&v| count_and(&cand, &self.g.adj[v]) <= 1);
            match low {
                Some(v) => self.take(&mut cand, v),
                None => break,
            }
        }
        if count(&cand) == 0 {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
        } else if self.chosen.len() + self.g.clique_cover(&cand) > self.best.len() {
            let v = members(&cand)
                .max_by_key(|&v| count_and(&cand, &self.g.adj[v]))
                .expect("nonempty");
            let mut with = cand.clone();
            self.take(&mut with, v);
            self.run(with);
            self.chosen.pop();
            clear(&mut cand, v);
            self.run(cand);
        }
        self.chosen.truncate(mark);
    }
}
