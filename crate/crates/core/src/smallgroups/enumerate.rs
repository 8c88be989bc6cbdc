use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::limits::Limits;
use crate::numeric::prime_divisors;

use super::canon::{canonize, CanonicalTable};

const UNSET: u16 = u16::MAX;
const MAX_ENUMERATION_ORDER: usize = 64;
const PREFIX_DEPTH: usize = 4;

/// Result of an exhaustive search at one order.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub order: usize,
    /// One canonical table per isomorphism class, sorted by key.
    pub groups: Vec<CanonicalTable>,
    /// Search nodes visited.
    pub nodes: u64,
    /// Complete tables reached before deduplication.
    pub tables: u64,
}

struct Shared {
    start: Instant,
    limits: Limits,
    nodes: AtomicU64,
    tables: AtomicU64,
    found: AtomicU64,
    abort: AtomicBool,
}

impl Shared {
    fn tick(&self) -> bool {
        if self.abort.load(Ordering::Relaxed) {
            return false;
        }
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.limits.node_budget.is_some_and(|b| k > b);
        let over_time = k.is_multiple_of(256) && self.limits.time_budget.is_some_and(|t| self.start.elapsed() > t);
        if over_nodes || over_time {
            self.abort.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

type Decision = (u32, u16);

/// Partial Cayley table with Latin bookkeeping and an undo trail.
#[derive(Clone)]
struct State {
    n: usize,
    p: usize,
    t: Vec<u16>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    row_pos: Vec<u16>,
    col_pos: Vec<u16>,
    trail: Vec<u32>,
    queue: Vec<u32>,
    /// Blocks of `p` labels that occur in some cell fixed after initialization.
    mentioned: u64,
    track: bool,
}

impl State {
    fn new(n: usize, p: usize) -> Option<Self> {
        let mut s = State {
            n,
            p,
            t: vec![UNSET; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            row_pos: vec![UNSET; n * n],
            col_pos: vec![UNSET; n * n],
            trail: Vec::new(),
            queue: Vec::new(),
            mentioned: 1,
            track: false,
        };
        // Rows of x^i act by rotation inside each block of labels jp..jp+p.
        for i in 0..p {
            for j in 0..n / p {
                for a in 0..p {
                    if !s.assign(i, j * p + a, j * p + (i + a) % p) {
                        return None;
                    }
                }
            }
        }
        for r in 0..n {
            if !s.assign(r, 0, r) {
                return None;
            }
        }
        if !s.propagate() {
            return None;
        }
        s.trail.clear();
        s.track = true;
        Some(s)
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> Option<usize> {
        let v = self.t[r * self.n + c];
        (v != UNSET).then_some(v as usize)
    }

    fn assign(&mut self, r: usize, c: usize, v: usize) -> bool {
        let n = self.n;
        let cell = r * n + c;
        if self.t[cell] != UNSET {
            return self.t[cell] as usize == v;
        }
        let bit = 1u64 << v;
        if self.row_used[r] & bit != 0 || self.col_used[c] & bit != 0 {
            return false;
        }
        self.t[cell] = v as u16;
        self.row_used[r] |= bit;
        self.col_used[c] |= bit;
        self.row_pos[r * n + v] = c as u16;
        self.col_pos[c * n + v] = r as u16;
        self.trail.push(cell as u32);
        self.queue.push(cell as u32);
        if self.track {
            let p = self.p;
            self.mentioned |= (1 << (r / p)) | (1 << (c / p)) | (1 << (v / p));
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        let n = self.n;
        while self.trail.len() > mark {
            let cell = self.trail.pop().expect("trail entry") as usize;
            let (r, c) = (cell / n, cell % n);
            let v = self.t[cell] as usize;
            self.t[cell] = UNSET;
            self.row_used[r] &= !(1u64 << v);
            self.col_used[c] &= !(1u64 << v);
            self.row_pos[r * n + v] = UNSET;
            self.col_pos[c * n + v] = UNSET;
        }
        self.queue.clear();
    }

    /// Makes `x` and `y` equal entries, assigning whichever side is still open.
    #[inline]
    fn unify(&mut self, left: (usize, usize), right: (usize, usize)) -> bool {
        match (self.get(left.0, left.1), self.get(right.0, right.1)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) => self.assign(right.0, right.1, a),
            (None, Some(b)) => self.assign(left.0, left.1, b),
            (None, None) => true,
        }
    }

    /// Associativity consequences of every queued cell in each of its four roles.
    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some(cell) = self.queue.pop() {
            let cell = cell as usize;
            let (a, b) = (cell / n, cell % n);
            let c = self.t[cell] as usize;
            for z in 0..n {
                // (ab)z = a(bz)
                if let Some(e) = self.get(b, z) {
                    if !self.unify((c, z), (a, e)) {
                        return false;
                    }
                }
                // (za)b = z(ab)
                if let Some(w) = self.get(z, a) {
                    if !self.unify((w, b), (z, c)) {
                        return false;
                    }
                }
                // z·y = a gives (zy)b = z(yb) = c
                let y = self.row_pos[z * n + a];
                if y != UNSET {
                    let y = y as usize;
                    match self.get(y, b) {
                        Some(e) => {
                            if !self.assign(z, e, c) {
                                return false;
                            }
                        }
                        None => {
                            let e = self.row_pos[z * n + c];
                            if e != UNSET && !self.assign(y, b, e as usize) {
                                return false;
                            }
                        }
                    }
                }
                // z·w = b gives (az)w = a(zw) = c
                let w = self.row_pos[z * n + b];
                if w != UNSET {
                    let w = w as usize;
                    match self.get(a, z) {
                        Some(u) => {
                            if !self.assign(u, w, c) {
                                return false;
                            }
                        }
                        None => {
                            let u = self.col_pos[w * n + c];
                            if u != UNSET && !self.assign(a, z, u as usize) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn next_cell(&self) -> Option<usize> {
        let start = self.p * self.n;
        (start..self.n * self.n).find(|&i| self.t[i] == UNSET)
    }

    /// Candidate values with isomorphic choices among untouched blocks collapsed
    /// to the first label of the lowest such block.
    fn candidates(&self, cell: usize) -> Vec<usize> {
        let (n, p) = (self.n, self.p);
        let (r, c) = (cell / n, cell % n);
        let used = self.row_used[r] | self.col_used[c];
        let pinned = self.mentioned | (1 << (r / p)) | (1 << (c / p));
        let mut out: Vec<usize> = (0..n).filter(|&v| used >> v & 1 == 0 && pinned >> (v / p) & 1 == 1).collect();
        if let Some(block) = (0..n / p).find(|&j| pinned >> j & 1 == 0) {
            out.push(block * p);
        }
        out
    }

    /// Applies a decision; returns the trail mark and the previous mention mask.
    fn decide(&mut self, cell: usize, v: usize) -> (usize, u64, bool) {
        let mark = self.trail.len();
        let saved = self.mentioned;
        let ok = self.assign(cell / self.n, cell % self.n, v) && self.propagate();
        (mark, saved, ok)
    }

    fn retract(&mut self, mark: usize, saved: u64) {
        self.undo_to(mark);
        self.mentioned = saved;
    }
}

enum Sink<'a> {
    Prefixes(&'a mut Vec<Vec<Decision>>, usize),
    Leaves,
}

struct Worker<'a> {
    shared: &'a Shared,
    found: BTreeMap<String, CanonicalTable>,
    path: Vec<Decision>,
}

impl<'a> Worker<'a> {
    fn leaf(&mut self, s: &State) -> Result<()> {
        self.shared.tables.fetch_add(1, Ordering::Relaxed);
        let table = s.t.clone();
        let g = match FiniteGroup::from_table(s.n, table) {
            Ok(g) => g,
            Err(Error::InvalidTable(_)) => return Ok(()),
            Err(e) => return Err(e),
        };
        let c = canonize(&g);
        let key = c.key();
        if !self.found.contains_key(&key) {
            self.shared.found.fetch_add(1, Ordering::Relaxed);
            self.found.insert(key, c);
        }
        Ok(())
    }

    fn dfs(&mut self, s: &mut State, sink: &mut Sink<'_>) -> Result<()> {
        if !self.shared.tick() {
            return Ok(());
        }
        let Some(cell) = s.next_cell() else {
            return self.leaf(s);
        };
        if let Sink::Prefixes(out, depth) = sink {
            if self.path.len() == *depth {
                out.push(self.path.clone());
                return Ok(());
            }
        }
        for v in s.candidates(cell) {
            let (mark, saved, ok) = s.decide(cell, v);
            if ok {
                self.path.push((cell as u32, v as u16));
                self.dfs(s, sink)?;
                self.path.pop();
            }
            s.retract(mark, saved);
            if self.shared.abort.load(Ordering::Relaxed) {
                break;
            }
        }
        Ok(())
    }
}

/// Every group of order `n` up to isomorphism, by filling Cayley tables.
///
/// Rows of an element `x` of the least prime order `p` are fixed, every cell
/// assignment propagates associativity, and values from untouched blocks of
/// labels are tried once. Complete tables are canonized and deduplicated.
pub fn enumerate_order(n: usize, limits: &Limits) -> Result<Enumeration> {
    if n == 0 {
        return Err(Error::Domain("order must be positive".into()));
    }
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::Resource(format!(
            "exhaustive enumeration is limited to order {MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    if n == 1 {
        let c = canonize(&FiniteGroup::trivial());
        return Ok(Enumeration { order: 1, groups: vec![c], nodes: 0, tables: 1 });
    }
    let p = prime_divisors(n as u64)[0] as usize;
    let shared = Shared {
        start: Instant::now(),
        limits: limits.clone(),
        nodes: AtomicU64::new(0),
        tables: AtomicU64::new(0),
        found: AtomicU64::new(0),
        abort: AtomicBool::new(false),
    };
    let Some(root) = State::new(n, p) else {
        return Err(Error::InvalidTable(format!("inconsistent initial rows at order {n}")));
    };

    let mut prefixes = Vec::new();
    let mut head = Worker { shared: &shared, found: BTreeMap::new(), path: Vec::new() };
    head.dfs(&mut root.clone(), &mut Sink::Prefixes(&mut prefixes, PREFIX_DEPTH))?;
    prefixes.shuffle(&mut ChaCha8Rng::seed_from_u64(limits.seed));

    let run = || -> Vec<Result<BTreeMap<String, CanonicalTable>>> {
        prefixes
            .par_iter()
            .map(|prefix| {
                let mut s = root.clone();
                for &(cell, v) in prefix {
                    let (_, _, ok) = s.decide(cell as usize, v as usize);
                    debug_assert!(ok, "replayed prefix must stay consistent");
                }
                let mut w = Worker { shared: &shared, found: BTreeMap::new(), path: prefix.clone() };
                w.dfs(&mut s, &mut Sink::Leaves).map(|_| w.found)
            })
            .collect()
    };
    let parts = match limits.workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut all = head.found;
    for part in parts {
        all.extend(part?);
    }
    let nodes = shared.nodes.load(Ordering::Relaxed);
    if shared.abort.load(Ordering::Relaxed) {
        return Err(Error::Resource(format!(
            "search budget exhausted at order {n}: {nodes} nodes, {} tables, {} classes found so far",
            shared.tables.load(Ordering::Relaxed),
            all.len()
        )));
    }
    Ok(Enumeration {
        order: n,
        groups: all.into_values().collect(),
        nodes,
        tables: shared.tables.load(Ordering::Relaxed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;
    use crate::group::is_isomorphic;
    use std::time::Duration;

    fn count(n: usize) -> usize {
        enumerate_order(n, &Limits::default()).unwrap().groups.len()
    }

    #[test]
    fn small_counts() {
        let expected = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(count(i + 1), e, "order {}", i + 1);
        }
    }

    #[test]
    fn order_eight_classes() {
        let e = enumerate_order(8, &Limits::default()).unwrap();
        let models = [
            cyclic(8).unwrap(),
            cyclic(4).unwrap().direct_product(&cyclic(2).unwrap()).unwrap(),
            elementary_abelian(2, 3).unwrap(),
            dihedral(8).unwrap(),
            generalized_quaternion(8).unwrap(),
        ];
        for m in &models {
            assert_eq!(e.groups.iter().filter(|c| is_isomorphic(&c.to_group(), m)).count(), 1);
        }
    }

    #[test]
    fn deterministic_across_seeds_and_workers() {
        let a = enumerate_order(12, &Limits { seed: 1, workers: Some(1), ..Limits::default() }).unwrap();
        let b = enumerate_order(12, &Limits { seed: 99, workers: Some(3), ..Limits::default() }).unwrap();
        assert_eq!(a.groups, b.groups);
    }

    #[test]
    fn budgets_report_progress() {
        let limits = Limits { node_budget: Some(10), ..Limits::default() };
        let err = enumerate_order(12, &limits).unwrap_err();
        assert!(err.is_resource());
        assert!(err.to_string().contains("nodes"));
        let limits = Limits { time_budget: Some(Duration::ZERO), ..Limits::default() };
        assert!(enumerate_order(12, &limits).unwrap_err().is_resource());
        assert!(enumerate_order(65, &Limits::default()).unwrap_err().is_resource());
    }
}
