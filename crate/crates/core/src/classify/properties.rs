use crate::constructions::{cyclic, dihedral, elementary_abelian, modular_group};
use crate::error::Result;
use crate::group::{is_isomorphic, FiniteGroup};
use crate::lattice::{all_subgroups_with, find_iwasawa_triple, m_structure_decompose};
use crate::limits::Limits;
use crate::numeric::{gcd, is_prime, prime_divisors, prime_power, rational, ExactRational, Nat};
use crate::psi::{
    cyclic_lower_bound, f_bound, l_max_with, large_element_witness, psi, psi_cyclic, semidirect_psi, sylow_ratio,
    CyclicBound,
};

use super::diagram::diagram_data;
use super::{a4_value, d8_value, GroupFacts, Tag};

/// Largest direct product formed for the multiplicativity check.
const PRODUCT_CAP: usize = 120;
/// Range of `n` for the cyclic lower bounds and the maximal-subgroup comparison.
const CYCLIC_SWEEP: u64 = 10_000;
/// Largest odd cofactor in the product-maximal check.
const COFACTOR_CAP: usize = 50;

type Violations = Vec<String>;

fn subgroup_psi(g: &FiniteGroup, h: &crate::group::SubgroupSet) -> Nat {
    h.iter().map(|x| Nat::from(g.order_of(x))).sum()
}

fn multiplicativity(facts: &[GroupFacts], v: &mut Violations) -> Result<()> {
    for a in facts {
        for b in facts {
            let (na, nb) = (a.group().order(), b.group().order());
            if na < 2 || nb < 2 || na * nb > PRODUCT_CAP || gcd(na as u64, nb as u64) != 1 {
                continue;
            }
            let p = a.group().direct_product(b.group())?;
            if psi(&p) != &a.psi * &b.psi {
                v.push(format!(
                    "psi({} x {}) is not psi({}) * psi({})",
                    a.entry.name, b.entry.name, a.entry.name, b.entry.name
                ));
            }
        }
    }
    let d8 = dihedral(8)?;
    let c2 = cyclic(2)?;
    if psi(&d8.direct_product(&c2)?) == psi(&d8) * psi(&c2) {
        v.push("psi(D8 x C2) unexpectedly factors over the non-coprime product".into());
    }
    Ok(())
}

fn normal_subgroup_bounds(f: &GroupFacts, limits: &Limits, v: &mut Violations) -> Result<()> {
    let g = f.group();
    let lat = all_subgroups_with(g, limits)?;
    for i in lat.normal_subgroups(g) {
        let nsub = &lat.nodes()[i];
        let q = g.quotient(nsub)?;
        let size = Nat::from(nsub.size());
        if f.psi > psi(&q) * &size * &size {
            v.push(format!("{}: quotient bound fails for a normal subgroup of order {}", f.entry.name, nsub.size()));
        }
    }
    for p in prime_divisors(g.order() as u64) {
        let syl = g.sylow_subgroup(p);
        let cyc = syl.iter().any(|x| g.order_of(x) as usize == syl.size());
        if !cyc || !g.is_normal(&syl) {
            continue;
        }
        let psi_p = subgroup_psi(g, &syl);
        let q = g.quotient(&syl)?;
        let bound = &psi_p * psi(&q);
        let central = syl.is_subset(&g.center());
        if f.psi > bound || (f.psi == bound) != central {
            v.push(format!(
                "{}: normal cyclic Sylow {p} bound or its equality case fails (central = {central})",
                f.entry.name
            ));
        }
        let want = g.order() / syl.size();
        if let Some(h) = lat.nodes().iter().find(|h| h.size() == want && h.intersection(&syl).is_trivial()) {
            let chp = g.centralizer_of(&syl).intersection(h);
            let formula = semidirect_psi(&Nat::from(syl.size()), &psi_p, &subgroup_psi(g, h), &subgroup_psi(g, &chp));
            if formula != f.psi {
                v.push(format!(
                    "{}: semidirect formula for the Sylow {p} gives {formula}, not {}",
                    f.entry.name, f.psi
                ));
            }
        } else {
            v.push(format!("{}: no complement to the normal Sylow {p}", f.entry.name));
        }
    }
    Ok(())
}

fn lucchini(f: &GroupFacts, v: &mut Violations) {
    let g = f.group();
    let n = g.order();
    let mut seen = std::collections::HashSet::new();
    for x in g.elements() {
        let a = g.cyclic_subgroup(x);
        if a.size() == n || !seen.insert(a.clone()) {
            continue;
        }
        let core = g.core(&a);
        if a.size() / core.size() >= n / a.size() {
            v.push(format!("{}: |A:core(A)| >= |G:A| for a cyclic subgroup of order {}", f.entry.name, a.size()));
        }
    }
}

fn witnesses(f: &GroupFacts, v: &mut Violations) -> Result<()> {
    let g = f.group();
    if g.order() < 2 {
        return Ok(());
    }
    let k = prime_divisors(g.order() as u64).len();
    for threshold in diagram_data().into_iter().map(|e| e.value).filter(|t| *t < f.psi_prime) {
        let variants = std::iter::once(None).chain((1..=k).map(Some));
        for t in variants {
            let w = large_element_witness(g, &threshold, t)?;
            if !w.holds() {
                v.push(format!(
                    "{}: no element of index below {} for threshold {threshold} (t = {t:?})",
                    f.entry.name, w.bound
                ));
            }
        }
    }
    Ok(())
}

fn non_cyclic_maximum(f: &GroupFacts, v: &mut Violations) -> Result<()> {
    let g = f.group();
    let n = g.order() as u64;
    if g.is_cyclic() {
        if f.psi_prime != ExactRational::one() {
            v.push(format!("{}: cyclic but psi' != 1", f.entry.name));
        }
        return Ok(());
    }
    if f.psi_prime >= ExactRational::one() {
        v.push(format!("{}: non-cyclic with psi' >= 1", f.entry.name));
    }
    let q = prime_divisors(n)[0];
    let fq = f_bound(q)?;
    let m = n / (q * q);
    let shape = n.is_multiple_of(q * q) && (2..=q).all(|r| gcd(m, r) == 1) && {
        let model = elementary_abelian(q as usize, 2)?.direct_product(&cyclic(m as usize)?)?;
        is_isomorphic(g, &model)
    };
    if f.psi_prime > fq || (f.psi_prime == fq) != shape {
        v.push(format!("{}: f({q}) bound or its equality case fails", f.entry.name));
    }
    Ok(())
}

fn primary_shapes(f: &GroupFacts, v: &mut Violations) {
    let g = f.group();
    let Some((p, _)) = prime_power(g.order() as u64) else { return };
    let value = &f.psi_prime;
    let family = f.family().tag;
    if p == 2 {
        let ok = if *value > d8_value() {
            matches!(family, Tag::Cyclic | Tag::KleinCyclic | Tag::M2k | Tag::Q8)
        } else if *value == d8_value() {
            family == Tag::D8 && f.family().m == 1
        } else if *value > a4_value() {
            family == Tag::Q16 && f.family().m == 1
        } else {
            true
        };
        if !ok {
            v.push(format!("{}: 2-group outside the trichotomy", f.entry.name));
        }
    }
    if p == 3 && *value > a4_value() && !g.is_cyclic() && !(family == Tag::C3xC3 && f.family().m == 1) {
        v.push(format!("{}: 3-group above 31/77 that is neither cyclic nor C3 x C3", f.entry.name));
    }
}

fn lattice_facts(f: &GroupFacts, v: &mut Violations) -> Result<()> {
    let g = f.group();
    if f.modular {
        if !g.is_supersoluble() {
            v.push(format!("{}: M-group that is not supersoluble", f.entry.name));
        }
        if let Err(e) = m_structure_decompose(g) {
            v.push(format!("{}: M-group decomposition failed: {e}", f.entry.name));
        }
    }
    if g.order() <= 8 && !f.modular && !is_isomorphic(g, &dihedral(8)?) {
        v.push(format!("{}: non-modular group of order at most 8 other than D8", f.entry.name));
    }
    if g.is_abelian() && !f.modular {
        v.push(format!("{}: abelian group with a non-modular lattice", f.entry.name));
    }
    if g.order() > 1 && prime_power(g.order() as u64).is_some() && find_iwasawa_triple(g)?.is_some() && !f.modular {
        v.push(format!("{}: has an Iwasawa triple but is not an M-group", f.entry.name));
    }
    let a = f.theorem_a();
    if !a.is_none() && !f.modular {
        v.push(format!("{}: Theorem A label without a modular lattice", f.entry.name));
    }
    Ok(())
}

fn product_maximal(f: &GroupFacts, limits: &Limits, v: &mut Violations) -> Result<()> {
    let a = f.group();
    let na = a.order();
    if na < 2 {
        return Ok(());
    }
    let la = l_max_with(a, limits)?;
    if f.psi > &la * Nat::from(7u32) {
        return Ok(());
    }
    for m in (3..=COFACTOR_CAP).step_by(2) {
        if gcd(m as u64, na as u64) != 1 || na * m > limits.lattice_cap {
            continue;
        }
        let g = a.direct_product(&cyclic(m)?)?;
        if l_max_with(&g, limits)? != &la * psi_cyclic(m as u64) {
            v.push(format!("{}: l(A x C{m}) != l(A) * psi(C{m})", f.entry.name));
        }
    }
    Ok(())
}

/// Statements about cyclic orders and prime powers that do not depend on the catalog.
fn arithmetic(v: &mut Violations) -> Result<()> {
    for n in 2..=CYCLIC_SWEEP {
        let exact = ExactRational::integer(num_bigint::BigInt::from(psi_cyclic(n)));
        let k = prime_divisors(n).len();
        let mut variants = vec![CyclicBound::Product, CyclicBound::FirstPrimes];
        for t in 1..=k {
            variants.push(CyclicBound::Truncated(t));
            variants.push(CyclicBound::TruncatedFirstPrimes(t));
        }
        for var in variants {
            if cyclic_lower_bound(n, var)? >= exact {
                v.push(format!("psi(C{n}) is not above the {var:?} lower bound"));
            }
        }
        let ps = prime_divisors(n);
        for (i, &q) in ps.iter().enumerate() {
            for &p in &ps[i + 1..] {
                if psi_cyclic(n / q) <= psi_cyclic(n / p) {
                    v.push(format!("psi(C{}) <= psi(C{}) for primes {q} < {p}", n / q, n / p));
                }
            }
        }
    }
    let caps = [(3, 1, (3, 7)), (5, 1, (5, 21)), (7, 1, (7, 43)), (11, 1, (11, 111)), (3, 2, (9, 61))];
    for p in (3..=97u64).filter(|&p| is_prime(p)) {
        for n in 1..=4u32 {
            let r = sylow_ratio(p, n);
            for &(pmin, nmin, (a, b)) in &caps {
                if p >= pmin && n >= nmin && r > rational(a, b)? {
                    v.push(format!("|P|/psi(C_|P|) for {p}^{n} exceeds {a}/{b}"));
                }
            }
        }
    }
    for (p, n) in [(2usize, 4u32), (2, 5), (3, 3), (3, 4), (5, 3)] {
        let left = psi(&cyclic(p.pow(n - 1))?.direct_product(&cyclic(p)?)?);
        let right = psi(&modular_group(p, n)?);
        if left != right {
            v.push(format!("psi(C{} x C{p}) = {left} differs from psi(M({})) = {right}", p.pow(n - 1), p.pow(n)));
        }
    }
    Ok(())
}

pub(super) fn run(facts: &[GroupFacts], limits: &Limits) -> Result<Violations> {
    let mut v = Vec::new();
    multiplicativity(facts, &mut v)?;
    for f in facts {
        super::disjointness(f, &mut v);
        normal_subgroup_bounds(f, limits, &mut v)?;
        lucchini(f, &mut v);
        witnesses(f, &mut v)?;
        non_cyclic_maximum(f, &mut v)?;
        primary_shapes(f, &mut v);
        lattice_facts(f, &mut v)?;
        product_maximal(f, limits, &mut v)?;
    }
    arithmetic(&mut v)?;
    Ok(v)
}
