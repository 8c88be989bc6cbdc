//! Subgroup lattices, Dedekind modularity and recognition of M-group factors.

mod mgroup;

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupSet};
use crate::limits::Limits;

pub use mgroup::{
    find_iwasawa_triple, is_p_star, m_structure_decompose, IwasawaTriple, MFactor, MFactorKind, PStarParams,
};

const MAX_NODES: usize = 20_000;

/// All subgroups of a group with precomputed meets and joins.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    nodes: Vec<SubgroupSet>,
    gens: Vec<Vec<usize>>,
    index: HashMap<FixedBitSet, usize>,
    join: Vec<u32>,
    meet: Vec<u32>,
}

impl SubgroupLattice {
    pub fn nodes(&self) -> &[SubgroupSet] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Generators recorded for node `i`.
    pub fn generators(&self, i: usize) -> &[usize] {
        &self.gens[i]
    }

    pub fn position(&self, h: &SubgroupSet) -> Option<usize> {
        self.index.get(h.bits()).copied()
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.nodes.len() + j] as usize
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.nodes.len() + j] as usize
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.meet(i, j) == i
    }

    /// Indices of the normal subgroups.
    pub fn normal_subgroups(&self, g: &FiniteGroup) -> Vec<usize> {
        (0..self.len()).filter(|&i| g.is_normal(&self.nodes[i])).collect()
    }
}

/// Closure of `base` under right multiplication by `gens`.
fn close(g: &FiniteGroup, base: &SubgroupSet, gens: &[usize]) -> SubgroupSet {
    let mut bits = base.bits().clone();
    let mut list = base.elements();
    let mut i = 0;
    while i < list.len() {
        let e = list[i];
        for &s in gens {
            let p = g.mul(e, s);
            if !bits.put(p) {
                list.push(p);
            }
        }
        i += 1;
    }
    SubgroupSet::from_bits_unchecked(bits)
}

pub fn all_subgroups(g: &FiniteGroup) -> Result<SubgroupLattice> {
    all_subgroups_with(g, &Limits::default())
}

/// Seeds with the cyclic subgroups and joins each node with every cyclic
/// subgroup until no new subgroup appears.
pub fn all_subgroups_with(g: &FiniteGroup, limits: &Limits) -> Result<SubgroupLattice> {
    if g.order() > limits.lattice_cap {
        return Err(Error::Resource(format!("order {} exceeds the lattice cap {}", g.order(), limits.lattice_cap)));
    }
    let mut found: HashMap<FixedBitSet, Vec<usize>> = HashMap::new();
    let trivial = SubgroupSet::trivial(g);
    found.insert(trivial.bits().clone(), Vec::new());
    let mut cyclics: Vec<(usize, SubgroupSet)> = Vec::new();
    for x in g.elements().skip(1) {
        let c = g.cyclic_subgroup(x);
        if !found.contains_key(c.bits()) {
            found.insert(c.bits().clone(), vec![x]);
            cyclics.push((x, c));
        }
    }
    let mut queue: Vec<(SubgroupSet, Vec<usize>)> = cyclics.iter().map(|(x, c)| (c.clone(), vec![*x])).collect();
    while let Some((node, gens)) = queue.pop() {
        for (x, c) in &cyclics {
            if c.is_subset(&node) {
                continue;
            }
            let mut jg = gens.clone();
            jg.push(*x);
            let j = close(g, &node, &jg);
            if !found.contains_key(j.bits()) {
                if found.len() >= MAX_NODES {
                    return Err(Error::Resource(format!(
                        "more than {MAX_NODES} subgroups in a group of order {}",
                        g.order()
                    )));
                }
                found.insert(j.bits().clone(), jg.clone());
                queue.push((j, jg));
            }
        }
    }
    let mut entries: Vec<(SubgroupSet, Vec<usize>)> =
        found.into_iter().map(|(bits, gens)| (SubgroupSet::from_bits_unchecked(bits), gens)).collect();
    entries.sort_by(|a, b| (a.0.size(), &a.0).cmp(&(b.0.size(), &b.0)));
    let (nodes, gens): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
    let index: HashMap<FixedBitSet, usize> = nodes.iter().enumerate().map(|(i, h)| (h.bits().clone(), i)).collect();
    let k = nodes.len();
    let mut join = vec![0u32; k * k];
    let mut meet = vec![0u32; k * k];
    for i in 0..k {
        for j in i..k {
            let m = index[nodes[i].intersection(&nodes[j]).bits()];
            let jn = if nodes[i].is_subset(&nodes[j]) {
                j
            } else if nodes[j].is_subset(&nodes[i]) {
                i
            } else {
                let mut all: Vec<usize> = gens[i].clone();
                all.extend(&gens[j]);
                index[close(g, &nodes[i], &all).bits()]
            };
            meet[i * k + j] = m as u32;
            meet[j * k + i] = m as u32;
            join[i * k + j] = jn as u32;
            join[j * k + i] = jn as u32;
        }
    }
    Ok(SubgroupLattice { nodes, gens, index, join, meet })
}

/// Outcome of testing Dedekind's law on every triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularityVerdict {
    pub is_modular: bool,
    /// `(H, K, L)` with `H ≤ L` and `⟨H, K∩L⟩ ≠ ⟨H, K⟩∩L`.
    pub witness: Option<(SubgroupSet, SubgroupSet, SubgroupSet)>,
}

pub fn is_modular_lattice(g: &FiniteGroup) -> Result<ModularityVerdict> {
    is_modular_lattice_with(g, &Limits::default())
}

pub fn is_modular_lattice_with(g: &FiniteGroup, limits: &Limits) -> Result<ModularityVerdict> {
    let lat = all_subgroups_with(g, limits)?;
    Ok(modularity_of(&lat))
}

pub fn modularity_of(lat: &SubgroupLattice) -> ModularityVerdict {
    let k = lat.len();
    for l in 0..k {
        for h in 0..l {
            if !lat.leq(h, l) {
                continue;
            }
            for kk in 0..k {
                let left = lat.join(h, lat.meet(kk, l));
                let right = lat.meet(lat.join(h, kk), l);
                if left != right {
                    let n = lat.nodes();
                    return ModularityVerdict {
                        is_modular: false,
                        witness: Some((n[h].clone(), n[kk].clone(), n[l].clone())),
                    };
                }
            }
        }
    }
    ModularityVerdict { is_modular: true, witness: None }
}

/// Checks Dedekind's law for one triple with `H ≤ L`.
pub fn dedekind_holds(g: &FiniteGroup, h: &SubgroupSet, k: &SubgroupSet, l: &SubgroupSet) -> bool {
    let left = g.join(h, &k.intersection(l));
    let right = g.join(h, k).intersection(l);
    left == right
}

/// Pentagon search: `a < c` and `b` with equal meets and joins against `b`.
///
/// A lattice is modular exactly when no such triple exists.
pub fn find_pentagon(lat: &SubgroupLattice) -> Option<(usize, usize, usize)> {
    let k = lat.len();
    for c in 0..k {
        for a in 0..c {
            if !lat.leq(a, c) {
                continue;
            }
            for b in 0..k {
                if lat.meet(a, b) == lat.meet(c, b) && lat.join(a, b) == lat.join(c, b) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    #[test]
    fn subgroup_counts() {
        assert_eq!(all_subgroups(&cyclic(7).unwrap()).unwrap().len(), 2);
        assert_eq!(all_subgroups(&generalized_quaternion(8).unwrap()).unwrap().len(), 6);
        assert_eq!(all_subgroups(&dihedral(8).unwrap()).unwrap().len(), 10);
        assert_eq!(all_subgroups(&sym(3).unwrap()).unwrap().len(), 6);
        assert_eq!(all_subgroups(&alt(4).unwrap()).unwrap().len(), 10);
    }

    #[test]
    fn elementary_abelian_16_matches_gaussian_binomials() {
        // Subspaces of F_2^4: 1 + 15 + 35 + 15 + 1.
        let lat = all_subgroups(&elementary_abelian(2, 4).unwrap()).unwrap();
        assert_eq!(lat.len(), 67);
        let sizes = [1usize, 2, 4, 8, 16].map(|s| lat.nodes().iter().filter(|h| h.size() == s).count());
        assert_eq!(sizes, [1, 15, 35, 15, 1]);
    }

    #[test]
    fn tables_agree_with_set_operations() {
        let g = dihedral(12).unwrap();
        let lat = all_subgroups(&g).unwrap();
        let n = lat.nodes();
        for i in 0..lat.len() {
            for j in 0..lat.len() {
                assert_eq!(n[lat.meet(i, j)], n[i].intersection(&n[j]));
                assert_eq!(n[lat.join(i, j)], g.join(&n[i], &n[j]));
            }
        }
    }

    #[test]
    fn cap_enforced() {
        let limits = Limits { lattice_cap: 10, ..Limits::default() };
        assert!(all_subgroups_with(&cyclic(12).unwrap(), &limits).unwrap_err().is_resource());
    }

    #[test]
    fn dihedral_8_is_not_modular() {
        let d8 = dihedral(8).unwrap();
        let v = is_modular_lattice(&d8).unwrap();
        assert!(!v.is_modular);
        let (h, k, l) = v.witness.unwrap();
        assert!(h.is_subset(&l));
        assert!(!dedekind_holds(&d8, &h, &k, &l));
        // x = a^0 b at index 4, a x at index 5, a^2 at index 2 (index i + 4j for a^i b^j).
        let h = d8.generated_subgroup(&[4]);
        let k = d8.generated_subgroup(&[5]);
        let l = d8.generated_subgroup(&[2, 4]);
        assert_eq!(l.size(), 4);
        assert!(!dedekind_holds(&d8, &h, &k, &l));
        assert!(find_pentagon(&all_subgroups(&d8).unwrap()).is_some());
    }

    #[test]
    fn modular_examples() {
        for g in [
            generalized_quaternion(8).unwrap(),
            sym(3).unwrap(),
            cyclic(12).unwrap(),
            elementary_abelian(2, 3).unwrap(),
        ] {
            let lat = all_subgroups(&g).unwrap();
            assert!(modularity_of(&lat).is_modular, "{:?}", g.name());
            assert!(find_pentagon(&lat).is_none());
        }
    }
}
