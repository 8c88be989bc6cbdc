use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Generating sequence with a breadth-first spanning tree of the Cayley graph.
///
/// Every non-identity element `e` is recorded as `parent(e) · gens[k]`, so a map
/// on generators extends uniquely along the tree.
#[derive(Clone, Debug)]
pub struct Generators {
    pub gens: Vec<usize>,
    /// Breadth-first order of the spanned elements, identity first.
    order: Vec<usize>,
    /// `(parent, generator slot)` for each spanned element.
    parent: Vec<(usize, usize)>,
}

impl Generators {
    pub fn of(g: &FiniteGroup) -> Self {
        Self::with(g, g.generators())
    }

    pub fn with(g: &FiniteGroup, gens: Vec<usize>) -> Self {
        let n = g.order();
        let mut parent = vec![(usize::MAX, usize::MAX); n];
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(0);
        let mut order = vec![0usize];
        let mut i = 0;
        while i < order.len() {
            let e = order[i];
            for (k, &s) in gens.iter().enumerate() {
                let p = g.mul(e, s);
                if !seen.put(p) {
                    parent[p] = (e, k);
                    order.push(p);
                }
            }
            i += 1;
        }
        Generators { gens, order, parent }
    }

    /// Number of elements reachable from the generators.
    pub fn span(&self) -> usize {
        self.order.len()
    }

    /// Extends generator images to a homomorphism into `h`, or `None` when the
    /// images violate a relation. The returned map is indexed by elements of `g`
    /// and is only meaningful on the span.
    pub fn extend(&self, g: &FiniteGroup, h: &FiniteGroup, images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; g.order()];
        map[0] = 0;
        for &e in &self.order[1..] {
            let (p, k) = self.parent[e];
            map[e] = h.mul(map[p], images[k]);
        }
        for &e in &self.order {
            for (k, &s) in self.gens.iter().enumerate() {
                if map[g.mul(e, s)] != h.mul(map[e], images[k]) {
                    return None;
                }
            }
        }
        Some(map)
    }

    fn injective_on_span(&self, map: &[usize], h_order: usize) -> bool {
        let mut seen = FixedBitSet::with_capacity(h_order);
        self.order.iter().all(|&e| !seen.put(map[e]))
    }
}

/// Per-element invariant: element order and centralizer size.
fn fingerprints(g: &FiniteGroup) -> Vec<(u32, u32)> {
    g.elements()
        .map(|x| {
            let c = g.elements().filter(|&y| g.mul(x, y) == g.mul(y, x)).count();
            (g.order_of(x), c as u32)
        })
        .collect()
}

struct Budget {
    start: Instant,
    limits: Limits,
    nodes: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if let Some(max) = self.limits.node_budget {
            if self.nodes > max {
                return Err(Error::Resource(format!("isomorphism search exceeded {max} nodes")));
            }
        }
        if self.nodes.is_multiple_of(4096) {
            if let Some(t) = self.limits.time_budget {
                if self.start.elapsed() > t {
                    return Err(Error::Resource(format!(
                        "isomorphism search exceeded {:?} after {} nodes",
                        t, self.nodes
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Backtracking over generator images, with prefix-consistency pruning.
struct MapSearch<'a> {
    g: &'a FiniteGroup,
    h: &'a FiniteGroup,
    prefixes: Vec<Generators>,
    candidates: Vec<Vec<usize>>,
    injective: bool,
}

impl<'a> MapSearch<'a> {
    fn new(
        g: &'a FiniteGroup,
        h: &'a FiniteGroup,
        gens: Vec<usize>,
        candidates: Vec<Vec<usize>>,
        injective: bool,
    ) -> Self {
        let prefixes = (1..=gens.len()).map(|j| Generators::with(g, gens[..j].to_vec())).collect();
        MapSearch { g, h, prefixes, candidates, injective }
    }

    /// Calls `visit` on each complete map; stops early when it returns false.
    fn run(&self, budget: &mut Budget, visit: &mut dyn FnMut(Vec<usize>) -> bool) -> Result<()> {
        if self.prefixes.is_empty() {
            visit(vec![0; self.g.order()]);
            return Ok(());
        }
        let mut images = Vec::with_capacity(self.prefixes.len());
        self.descend(&mut images, budget, visit).map(|_| ())
    }

    fn descend(
        &self,
        images: &mut Vec<usize>,
        budget: &mut Budget,
        visit: &mut dyn FnMut(Vec<usize>) -> bool,
    ) -> Result<bool> {
        let depth = images.len();
        for &y in &self.candidates[depth] {
            budget.tick()?;
            images.push(y);
            let pre = &self.prefixes[depth];
            if let Some(map) = pre.extend(self.g, self.h, images) {
                if !self.injective || pre.injective_on_span(&map, self.h.order()) {
                    if depth + 1 == self.prefixes.len() {
                        if !visit(map) {
                            images.pop();
                            return Ok(false);
                        }
                    } else if !self.descend(images, budget, visit)? {
                        images.pop();
                        return Ok(false);
                    }
                }
            }
            images.pop();
        }
        Ok(true)
    }
}

fn quick_mismatch(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    g.order() != h.order()
        || g.order_statistics() != h.order_statistics()
        || g.is_abelian() != h.is_abelian()
        || g.center().size() != h.center().size()
}

fn iso_search<'a>(
    g: &'a FiniteGroup,
    h: &'a FiniteGroup,
    fg: &[(u32, u32)],
    fh: &[(u32, u32)],
) -> Option<MapSearch<'a>> {
    let mut sg = fg.to_vec();
    let mut sh = fh.to_vec();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return None;
    }
    let gens = g.generators();
    let candidates = gens.iter().map(|&x| h.elements().filter(|&y| fh[y] == fg[x]).collect()).collect();
    Some(MapSearch::new(g, h, gens, candidates, true))
}

/// An isomorphism `g → h` as an element map, verified on all pairs.
pub fn isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    let limits = Limits { node_budget: None, time_budget: None, ..Limits::default() };
    isomorphism_with(g, h, &limits).expect("unbounded search cannot run out of budget")
}

pub fn isomorphism_with(g: &FiniteGroup, h: &FiniteGroup, limits: &Limits) -> Result<Option<Vec<usize>>> {
    if quick_mismatch(g, h) {
        return Ok(None);
    }
    let (fg, fh) = (fingerprints(g), fingerprints(h));
    let Some(search) = iso_search(g, h, &fg, &fh) else {
        return Ok(None);
    };
    let mut budget = Budget { start: Instant::now(), limits: limits.clone(), nodes: 0 };
    let mut found = None;
    search.run(&mut budget, &mut |map| {
        found = Some(map);
        false
    })?;
    if let Some(map) = &found {
        let ok = g.elements().all(|a| g.elements().all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])));
        assert!(ok, "isomorphism witness failed verification");
    }
    Ok(found)
}

pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    isomorphism(g, h).is_some()
}

/// Every homomorphism `b → h`, each as an element map of `b`.
pub fn homomorphisms(b: &FiniteGroup, h: &FiniteGroup) -> Vec<Vec<usize>> {
    let gens = b.generators();
    let candidates = gens
        .iter()
        .map(|&x| {
            let o = b.order_of(x);
            h.elements().filter(|&y| o.is_multiple_of(h.order_of(y))).collect()
        })
        .collect();
    let search = MapSearch::new(b, h, gens, candidates, false);
    let mut out = Vec::new();
    let mut budget = Budget { start: Instant::now(), limits: Limits::default(), nodes: 0 };
    search
        .run(&mut budget, &mut |m| {
            out.push(m);
            true
        })
        .expect("default limits carry no budget");
    out
}

/// Every automorphism of `a`, each as a permutation of its elements.
pub fn automorphisms(a: &FiniteGroup) -> Vec<Vec<usize>> {
    let fp = fingerprints(a);
    let search = iso_search(a, a, &fp, &fp).expect("a group matches itself");
    let mut out = Vec::new();
    let mut budget = Budget { start: Instant::now(), limits: Limits::default(), nodes: 0 };
    search
        .run(&mut budget, &mut |m| {
            out.push(m);
            true
        })
        .expect("default limits carry no budget");
    out.sort();
    out
}
