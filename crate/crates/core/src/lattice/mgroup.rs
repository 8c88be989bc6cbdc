use crate::constructions::{elementary_abelian, generalized_quaternion};
use crate::error::{Error, Result};
use crate::group::{is_isomorphic, FiniteGroup, SubgroupSet};
use crate::numeric::{prime_divisors, prime_power};

use super::{all_subgroups, is_modular_lattice};

/// `(A, b, s)` with `A` abelian normal, `G = A⟨b⟩` and `a^b = a^{1+p^s}` on `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwasawaTriple {
    pub a: SubgroupSet,
    pub b: usize,
    pub s: u32,
}

impl IwasawaTriple {
    /// Re-checks every defining condition.
    pub fn is_valid(&self, g: &FiniteGroup) -> bool {
        let Some((p, _)) = g.p_group_prime() else { return false };
        if p == 2 && self.s < 2 {
            return false;
        }
        let a = &self.a;
        let abelian = a.iter().all(|x| a.iter().all(|y| g.mul(x, y) == g.mul(y, x)));
        let spans = g.extend_closure(a, &[self.b]).size() == g.order();
        let e = 1 + p.pow(self.s);
        abelian && g.is_normal(a) && spans && a.iter().all(|x| g.conj(x, self.b) == g.pow(x, e))
    }
}

/// Exhaustive search over abelian normal subgroups, elements and exponents.
///
/// `A` is tried from largest to smallest, cyclic before non-cyclic.
pub fn find_iwasawa_triple(g: &FiniteGroup) -> Result<Option<IwasawaTriple>> {
    let Some((p, _)) = g.p_group_prime() else {
        return Err(Error::Precondition(format!("order {} is not a prime power", g.order())));
    };
    let s_min = if p == 2 { 2 } else { 1 };
    let lat = all_subgroups(g)?;
    let mut candidates: Vec<&SubgroupSet> = lat
        .nodes()
        .iter()
        .filter(|a| a.iter().all(|x| a.iter().all(|y| g.mul(x, y) == g.mul(y, x))))
        .filter(|a| g.is_normal(a))
        .collect();
    let is_cyc = |a: &SubgroupSet| a.iter().any(|x| g.order_of(x) as usize == a.size());
    candidates.sort_by_key(|a| (std::cmp::Reverse(a.size()), !is_cyc(a)));
    for a in candidates {
        let gens = g.generators_of(a);
        let exp_a = a.iter().map(|x| g.order_of(x) as u64).max().unwrap_or(1);
        let e_max = crate::numeric::valuation(exp_a, p).max(s_min);
        for b in g.elements() {
            if g.extend_closure(a, &[b]).size() != g.order() {
                continue;
            }
            for s in s_min..=e_max {
                let e = 1 + p.pow(s);
                if gens.iter().all(|&x| g.conj(x, b) == g.pow(x, e)) {
                    return Ok(Some(IwasawaTriple { a: a.clone(), b, s }));
                }
            }
        }
    }
    Ok(None)
}

/// Parameters of `P*(p^n, q^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct PStarParams {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub k: u32,
}

/// Recognizes the P* shape: normal elementary abelian Sylow `p`, cyclic Sylow `q`
/// acting as a power automorphism of order `q`, with `q | p − 1`.
pub fn is_p_star(g: &FiniteGroup) -> Option<PStarParams> {
    let primes = prime_divisors(g.order() as u64);
    if primes.len() != 2 {
        return None;
    }
    for (p, q) in [(primes[0], primes[1]), (primes[1], primes[0])] {
        if (p - 1) % q != 0 {
            continue;
        }
        let a = g.sylow_subgroup(p);
        if !g.is_normal(&a) || !a.iter().all(|x| g.order_of(x) as u64 <= p) {
            continue;
        }
        if !a.iter().all(|x| a.iter().all(|y| g.mul(x, y) == g.mul(y, x))) {
            continue;
        }
        let qpart = g.order() / a.size();
        let Some(x) = g.elements().find(|&x| g.order_of(x) as usize == qpart) else { continue };
        let gens = g.generators_of(&a);
        let Some(r) = (1..p).find(|&r| g.conj(gens[0], x) == g.pow(gens[0], r)) else { continue };
        if r == 1 || !gens.iter().all(|&y| g.conj(y, x) == g.pow(y, r)) {
            continue;
        }
        let rq = (0..q).fold(1u64, |acc, _| acc * r % p);
        if rq != 1 {
            continue;
        }
        let (_, n) = prime_power(a.size() as u64)?;
        let (_, k) = prime_power(qpart as u64)?;
        return Some(PStarParams { p, n, q, k });
    }
    None
}

/// Certified shape of a coprime direct factor of an M-group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MFactorKind {
    /// `Q8 × E(2^m)`.
    QuaternionTimesElementary {
        m: u32,
    },
    /// A `p`-group with an Iwasawa triple.
    Iwasawa {
        p: u64,
        triple: IwasawaTriple,
    },
    PStar(PStarParams),
    Trivial,
}

#[derive(Clone, Debug)]
pub struct MFactor {
    pub group: FiniteGroup,
    pub primes: Vec<u64>,
    pub kind: MFactorKind,
}

/// The subgroup of `primes`-elements when it has the full Hall order.
fn hall_subgroup(g: &FiniteGroup, primes: &[u64]) -> Option<SubgroupSet> {
    let elems = g.pi_elements(primes);
    let want: usize = primes.iter().map(|&p| p.pow(crate::numeric::valuation(g.order() as u64, p)) as usize).product();
    if elems.len() != want {
        return None;
    }
    SubgroupSet::from_elements(g, elems).ok()
}

/// Finest coprime direct decomposition: splits blocks of primes while both
/// halves are Hall subgroups consisting of all their elements.
fn coprime_blocks(g: &FiniteGroup) -> Vec<(FiniteGroup, Vec<u64>)> {
    let primes = prime_divisors(g.order() as u64);
    if primes.len() <= 1 {
        return vec![(g.clone(), primes)];
    }
    let k = primes.len();
    let mut masks: Vec<u32> = (1..(1u32 << k) - 1).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let part: Vec<u64> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).collect();
        let rest: Vec<u64> = (0..k).filter(|i| mask >> i & 1 == 0).map(|i| primes[i]).collect();
        if let (Some(a), Some(b)) = (hall_subgroup(g, &part), hall_subgroup(g, &rest)) {
            let (ga, _) = a.to_group(g);
            let (gb, _) = b.to_group(g);
            let mut out = vec![(ga, part)];
            out.extend(coprime_blocks(&gb));
            return out;
        }
    }
    vec![(g.clone(), primes)]
}

fn certify(f: &FiniteGroup) -> Result<Option<MFactorKind>> {
    if f.order() == 1 {
        return Ok(Some(MFactorKind::Trivial));
    }
    if let Some((p, e)) = f.p_group_prime() {
        if let Some(triple) = find_iwasawa_triple(f)? {
            return Ok(Some(MFactorKind::Iwasawa { p, triple }));
        }
        if p == 2 && e >= 3 {
            let mut model = generalized_quaternion(8)?;
            if e > 3 {
                model = model.direct_product(&elementary_abelian(2, e - 3)?)?;
            }
            if is_isomorphic(f, &model) {
                return Ok(Some(MFactorKind::QuaternionTimesElementary { m: e - 3 }));
            }
        }
        return Ok(None);
    }
    Ok(is_p_star(f).map(MFactorKind::PStar))
}

/// Splits an M-group into pairwise coprime certified factors, ordered by smallest prime.
pub fn m_structure_decompose(g: &FiniteGroup) -> Result<Vec<MFactor>> {
    if !is_modular_lattice(g)?.is_modular {
        return Err(Error::Precondition("the subgroup lattice is not modular".into()));
    }
    let mut out = Vec::new();
    for (group, primes) in coprime_blocks(g) {
        match certify(&group)? {
            Some(kind) => out.push(MFactor { group, primes, kind }),
            None => {
                return Err(Error::Decomposition(format!(
                    "factor of order {} for primes {:?} is neither Q8 x E(2^m), an Iwasawa p-group nor a P*-group",
                    group.order(),
                    primes
                )))
            }
        }
    }
    out.sort_by_key(|f| f.primes.first().copied().unwrap_or(0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    #[test]
    fn modular_2_group_has_triple() {
        let m16 = modular_group(2, 4).unwrap();
        let t = find_iwasawa_triple(&m16).unwrap().unwrap();
        assert!(t.is_valid(&m16));
        assert_eq!((t.a.size(), t.s), (8, 2));
        assert!(t.a.iter().any(|x| m16.order_of(x) == 8));
    }

    #[test]
    fn abelian_triples_use_identity() {
        let g = cyclic(8).unwrap();
        let t = find_iwasawa_triple(&g).unwrap().unwrap();
        assert_eq!((t.a.size(), t.b, t.s), (8, 0, 3));
        let g = elementary_abelian(2, 2).unwrap();
        let t = find_iwasawa_triple(&g).unwrap().unwrap();
        assert_eq!((t.b, t.s), (0, 2));
        let g = cyclic(9).unwrap();
        assert_eq!(find_iwasawa_triple(&g).unwrap().unwrap().s, 2);
    }

    #[test]
    fn dihedral_and_quaternion_have_no_triple() {
        assert!(find_iwasawa_triple(&dihedral(8).unwrap()).unwrap().is_none());
        assert!(find_iwasawa_triple(&generalized_quaternion(8).unwrap()).unwrap().is_none());
        assert!(find_iwasawa_triple(&sym(3).unwrap()).is_err());
        assert!(find_iwasawa_triple(&FiniteGroup::trivial()).is_err());
    }

    #[test]
    fn p_star_recognition() {
        let p = |p, n, q, k| Some(PStarParams { p, n, q, k });
        assert_eq!(is_p_star(&dihedral(10).unwrap()), p(5, 1, 2, 1));
        assert_eq!(is_p_star(&sym(3).unwrap()), p(3, 1, 2, 1));
        assert_eq!(is_p_star(&p_star(7, 1, 3, 2).unwrap()), p(7, 1, 3, 2));
        assert_eq!(is_p_star(&p_star(3, 2, 2, 2).unwrap()), p(3, 2, 2, 2));
        assert_eq!(is_p_star(&alt(4).unwrap()), None);
        assert_eq!(is_p_star(&cyclic(6).unwrap()), None);
        assert_eq!(is_p_star(&rtimes_iota(&cyclic(9).unwrap(), 2).unwrap()), None);
    }

    #[test]
    fn decompositions() {
        let g = build(FamilySpec::times(Family::Quaternion { order: 8 }, 15)).unwrap();
        let f = m_structure_decompose(&g).unwrap();
        let orders: Vec<usize> = f.iter().map(|f| f.group.order()).collect();
        assert_eq!(orders, vec![8, 3, 5]);
        assert_eq!(f[0].kind, MFactorKind::QuaternionTimesElementary { m: 0 });

        let f = m_structure_decompose(&dihedral(14).unwrap()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, MFactorKind::PStar(PStarParams { p: 7, n: 1, q: 2, k: 1 }));

        let f = m_structure_decompose(&cyclic(12).unwrap()).unwrap();
        let orders: Vec<usize> = f.iter().map(|f| f.group.order()).collect();
        assert_eq!(orders, vec![4, 3]);
        assert!(f.iter().all(|f| matches!(f.kind, MFactorKind::Iwasawa { .. })));

        assert!(matches!(m_structure_decompose(&dihedral(8).unwrap()), Err(Error::Precondition(_))));
    }
}
