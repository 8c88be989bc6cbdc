use fixedbitset::FixedBitSet;

use super::{FiniteGroup, SubgroupSet};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::numeric::{prime_divisors, valuation};

/// Action of `actor` on `target` by automorphisms, one permutation per actor element.
#[derive(Clone, Debug)]
pub struct ActionSpec {
    pub actor: FiniteGroup,
    pub target: FiniteGroup,
    /// `images[b][a]` is the image of `a` under the automorphism attached to `b`.
    pub images: Vec<Vec<usize>>,
}

impl ActionSpec {
    pub fn trivial(target: FiniteGroup, actor: FiniteGroup) -> Self {
        let id: Vec<usize> = (0..target.order()).collect();
        let images = vec![id; actor.order()];
        ActionSpec { actor, target, images }
    }

    /// Action of a cyclic actor whose generator (index 1, with `x^i` at index `i`)
    /// acts by `phi`.
    pub fn cyclic(target: FiniteGroup, actor_order: usize, phi: &[usize]) -> Result<Self> {
        let actor = FiniteGroup::from_fn(actor_order, |a, b| (a + b) % actor_order)?;
        let n = target.order();
        let mut images = Vec::with_capacity(actor_order);
        let mut cur: Vec<usize> = (0..n).collect();
        for _ in 0..actor_order {
            images.push(cur.clone());
            cur = cur.iter().map(|&a| phi[a]).collect();
        }
        let spec = ActionSpec { actor, target, images };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the automorphism and homomorphism conditions on all pairs.
    pub fn validate(&self) -> Result<()> {
        let (a, b) = (&self.target, &self.actor);
        if self.images.len() != b.order() {
            return Err(Error::InvalidAction("one image per actor element required".into()));
        }
        for (bi, img) in self.images.iter().enumerate() {
            if img.len() != a.order() {
                return Err(Error::InvalidAction(format!("image {bi} has wrong length")));
            }
            let mut seen = FixedBitSet::with_capacity(a.order());
            for &v in img {
                if v >= a.order() || seen.put(v) {
                    return Err(Error::InvalidAction(format!("image {bi} is not a permutation")));
                }
            }
            for x in a.elements() {
                for y in a.elements() {
                    if img[a.mul(x, y)] != a.mul(img[x], img[y]) {
                        return Err(Error::InvalidAction(format!(
                            "image of actor element {bi} is not an automorphism"
                        )));
                    }
                }
            }
        }
        for b1 in b.elements() {
            for b2 in b.elements() {
                let prod = &self.images[b.mul(b1, b2)];
                let (f1, f2) = (&self.images[b1], &self.images[b2]);
                if a.elements().any(|x| prod[x] != f1[f2[x]]) {
                    return Err(Error::InvalidAction(format!("images of {b1} and {b2} do not compose like the actor")));
                }
            }
        }
        Ok(())
    }
}

impl FiniteGroup {
    /// Smallest subgroup containing `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> SubgroupSet {
        let start = SubgroupSet::trivial(self);
        self.extend_closure(&start, gens)
    }

    /// Closure of an existing subgroup together with extra generators.
    pub fn extend_closure(&self, base: &SubgroupSet, gens: &[usize]) -> SubgroupSet {
        let mut bits = base.bits().clone();
        let mut list: Vec<usize> = base.elements();
        let mut all_gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        if all_gens.iter().all(|&g| base.contains(g)) {
            return base.clone();
        }
        // Right multiplication by the base's own generators keeps the result closed.
        all_gens.extend(self.generators_of(base));
        let mut i = 0;
        while i < list.len() {
            let e = list[i];
            for &g in &all_gens {
                let p = self.mul(e, g);
                if !bits.put(p) {
                    list.push(p);
                }
            }
            i += 1;
        }
        SubgroupSet::from_bits_unchecked(bits)
    }

    pub fn join(&self, h: &SubgroupSet, k: &SubgroupSet) -> SubgroupSet {
        if k.is_subset(h) {
            return h.clone();
        }
        if h.is_subset(k) {
            return k.clone();
        }
        self.extend_closure(h, &self.generators_of(k))
    }

    /// Greedy generating set of a subgroup, preferring elements of large order.
    pub fn generators_of(&self, h: &SubgroupSet) -> Vec<usize> {
        let mut elems = h.elements();
        elems.sort_by_key(|&x| (std::cmp::Reverse(self.order_of(x)), x));
        let mut gens = Vec::new();
        let mut cur = FixedBitSet::with_capacity(self.order());
        cur.insert(0);
        let mut list = vec![0usize];
        let mut size = 1;
        for x in elems {
            if size == h.size() {
                break;
            }
            if cur.contains(x) {
                continue;
            }
            gens.push(x);
            let mut i = 0;
            // Restart closure over the current list with all generators.
            while i < list.len() {
                let e = list[i];
                for &g in &gens {
                    let p = self.mul(e, g);
                    if !cur.put(p) {
                        list.push(p);
                    }
                }
                i += 1;
            }
            size = list.len();
        }
        gens
    }

    /// Generating set of the whole group.
    pub fn generators(&self) -> Vec<usize> {
        self.generators_of(&SubgroupSet::whole(self))
    }

    pub fn cyclic_subgroup(&self, x: usize) -> SubgroupSet {
        let mut bits = FixedBitSet::with_capacity(self.order());
        let mut y = 0;
        loop {
            bits.insert(y);
            y = self.mul(y, x);
            if y == 0 {
                break;
            }
        }
        SubgroupSet::from_bits_unchecked(bits)
    }

    /// `g⁻¹Hg`.
    pub fn conjugate(&self, h: &SubgroupSet, g: usize) -> SubgroupSet {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for x in h.iter() {
            bits.insert(self.conj(x, g));
        }
        SubgroupSet::from_bits_unchecked(bits)
    }

    /// Largest normal subgroup contained in `h`.
    pub fn core(&self, h: &SubgroupSet) -> SubgroupSet {
        let mut acc = h.clone();
        for g in self.elements() {
            if acc.is_trivial() {
                break;
            }
            acc = acc.intersection(&self.conjugate(h, g));
        }
        acc
    }

    pub fn centralizer(&self, s: &[usize]) -> SubgroupSet {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for g in self.elements() {
            if s.iter().all(|&x| self.mul(g, x) == self.mul(x, g)) {
                bits.insert(g);
            }
        }
        SubgroupSet::from_bits_unchecked(bits)
    }

    pub fn centralizer_of(&self, h: &SubgroupSet) -> SubgroupSet {
        self.centralizer(&self.generators_of(h))
    }

    pub fn center(&self) -> SubgroupSet {
        self.centralizer(&self.generators())
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.element_orders().iter().any(|&o| o as usize == self.order())
    }

    pub fn is_normal(&self, h: &SubgroupSet) -> bool {
        let hg = self.generators_of(h);
        self.generators().iter().all(|&g| hg.iter().all(|&x| h.contains(self.conj(x, g))))
    }

    pub fn normalizer(&self, h: &SubgroupSet) -> SubgroupSet {
        let hg = self.generators_of(h);
        let mut bits = FixedBitSet::with_capacity(self.order());
        for g in self.elements() {
            if hg.iter().all(|&x| h.contains(self.conj(x, g))) {
                bits.insert(g);
            }
        }
        SubgroupSet::from_bits_unchecked(bits)
    }

    pub fn derived_subgroup(&self) -> SubgroupSet {
        self.commutator_subgroup(&SubgroupSet::whole(self))
    }

    /// `[H, H]` for a subgroup `H`.
    pub fn commutator_subgroup(&self, h: &SubgroupSet) -> SubgroupSet {
        let gens = self.generators_of(h);
        let mut comms = Vec::new();
        for &a in &gens {
            for &b in &gens {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        // Normal closure in H of the generator commutators.
        let mut acc = self.generated_subgroup(&comms);
        loop {
            let extra: Vec<usize> = acc
                .iter()
                .flat_map(|x| gens.iter().map(move |&g| (x, g)))
                .map(|(x, g)| self.conj(x, g))
                .filter(|&y| !acc.contains(y))
                .collect();
            if extra.is_empty() {
                return acc;
            }
            acc = self.extend_closure(&acc, &extra);
        }
    }

    /// True when `h` is proper and no subgroup lies strictly between `h` and the group.
    pub fn maximal_subgroup_test(&self, h: &SubgroupSet) -> bool {
        if h.size() == self.order() {
            return false;
        }
        self.elements().filter(|&g| !h.contains(g)).all(|g| self.extend_closure(h, &[g]).size() == self.order())
    }

    /// Quotient by a normal subgroup; the identity coset gets index 0.
    pub fn quotient(&self, normal: &SubgroupSet) -> Result<FiniteGroup> {
        if !self.is_normal(normal) {
            return Err(Error::NotNormal);
        }
        let n = self.order();
        let mut label = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in self.elements() {
            if label[g] != usize::MAX {
                continue;
            }
            let l = reps.len();
            reps.push(g);
            for x in normal.iter() {
                label[self.mul(g, x)] = l;
            }
        }
        let k = reps.len();
        let q = FiniteGroup::from_fn(k, |a, b| label[self.mul(reps[a], reps[b])])?;
        Ok(q)
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        self.direct_product_with(other, &Limits::default())
    }

    /// Element `(a, b)` has index `a·|B| + b`.
    pub fn direct_product_with(&self, other: &FiniteGroup, limits: &Limits) -> Result<FiniteGroup> {
        let nb = other.order();
        let n = self.order() * nb;
        let g = FiniteGroup::from_fn_with(
            n,
            |x, y| {
                let (a1, b1) = (x / nb, x % nb);
                let (a2, b2) = (y / nb, y % nb);
                self.mul(a1, a2) * nb + other.mul(b1, b2)
            },
            limits,
        )?;
        Ok(match (self.name(), other.name()) {
            (Some(a), Some(b)) => {
                let left = if a.contains(" rx ") { format!("({a})") } else { a.to_string() };
                let right = if b.contains(' ') { format!("({b})") } else { b.to_string() };
                g.with_name(format!("{left} x {right}"))
            }
            _ => g,
        })
    }

    /// Pair `(a, b)` has index `a·|B| + b`, multiplied as `(a₁·φ_{b₁}(a₂), b₁b₂)`.
    pub fn semidirect_product(spec: &ActionSpec) -> Result<FiniteGroup> {
        Self::semidirect_product_with(spec, &Limits::default())
    }

    pub fn semidirect_product_with(spec: &ActionSpec, limits: &Limits) -> Result<FiniteGroup> {
        spec.validate()?;
        let (a, b) = (&spec.target, &spec.actor);
        let nb = b.order();
        FiniteGroup::from_fn_with(
            a.order() * nb,
            |x, y| {
                let (a1, b1) = (x / nb, x % nb);
                let (a2, b2) = (y / nb, y % nb);
                a.mul(a1, spec.images[b1][a2]) * nb + b.mul(b1, b2)
            },
            limits,
        )
    }

    /// Sylow `p`-subgroup grown greedily from `p`-elements.
    pub fn sylow_subgroup(&self, p: u64) -> SubgroupSet {
        let full = p.pow(valuation(self.order() as u64, p)) as usize;
        let mut s = SubgroupSet::trivial(self);
        for x in self.elements() {
            if s.size() == full {
                break;
            }
            let o = self.order_of(x) as u64;
            if o == 1 || !is_power_of(o, p) || s.contains(x) {
                continue;
            }
            let t = self.extend_closure(&s, &[x]);
            if is_power_of(t.size() as u64, p) {
                s = t;
            }
        }
        s
    }

    /// Elements whose order only involves primes in `primes`.
    pub fn pi_elements(&self, primes: &[u64]) -> Vec<usize> {
        self.elements()
            .filter(|&x| {
                let o = self.order_of(x) as u64;
                prime_divisors(o).iter().all(|p| primes.contains(p))
            })
            .collect()
    }
}

pub(crate) fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}
