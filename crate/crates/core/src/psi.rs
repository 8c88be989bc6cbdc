//! ψ and ψ′, closed forms for the 2-group and P* families, and the
//! quantitative bounds exposed as checkable operations.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::constructions::{cyclic, dihedral, generalized_quaternion, modular_group, semidihedral};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupSet};
use crate::lattice::all_subgroups_with;
use crate::limits::Limits;
use crate::numeric::{factorize_with, is_prime, rational, ExactRational, Factorization, Nat};

/// Sum of element orders.
pub fn psi(g: &FiniteGroup) -> Nat {
    g.element_orders().iter().map(|&o| Nat::from(o)).sum()
}

fn full_factorization(n: u64) -> Factorization {
    let limits = Limits { factor_bound: u64::MAX, ..Limits::default() };
    factorize_with(n, &limits).expect("n >= 1")
}

/// `ψ(C_n) = ∏ (p^{2α+1} + 1)/(p + 1)`.
pub fn psi_cyclic(n: u64) -> Nat {
    assert!(n >= 1, "psi_cyclic needs n >= 1");
    full_factorization(n)
        .pairs()
        .iter()
        .map(|&(p, a)| (Nat::from(p).pow(2 * a + 1) + 1u32) / (Nat::from(p) + 1u32))
        .product()
}

pub fn psi_prime(g: &FiniteGroup) -> ExactRational {
    ExactRational::from_nats(&psi(g), &psi_cyclic(g.order() as u64)).expect("positive denominator")
}

/// ψ data of one group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub name: Option<String>,
    pub order: usize,
    pub psi: String,
    pub psi_cyclic: String,
    pub psi_prime: String,
}

pub fn psi_report(g: &FiniteGroup) -> PsiReport {
    PsiReport {
        name: g.name().map(str::to_string),
        order: g.order(),
        psi: psi(g).to_string(),
        psi_cyclic: psi_cyclic(g.order() as u64).to_string(),
        psi_prime: psi_prime(g).to_string(),
    }
}

/// `f(q) = [(q²−1)q + 1](q + 1)/(q⁵ + 1)`, the largest ψ′ of a non-cyclic group
/// whose smallest prime divisor is `q`.
pub fn f_bound(q: u64) -> Result<ExactRational> {
    if !is_prime(q) {
        return Err(Error::Domain(format!("{q} is not prime")));
    }
    let q = BigInt::from(q);
    let num = ((&q * &q - 1) * &q + 1) * (&q + 1);
    let den = q.pow(5) + 1;
    ExactRational::new(num, den)
}

/// 2-group families with a displayed ψ′ formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// `C_{2^{k−1}} × C_2`, k ≥ 2.
    KleinCyclic(u32),
    /// `M(2^k)`, k ≥ 4.
    ModularM2(u32),
    /// `D_{2^k}`, k ≥ 3.
    Dihedral2(u32),
    /// `Q_{2^k}`, k ≥ 3.
    Quaternion2(u32),
    /// `SD_{2^k}`, k ≥ 4.
    Semidihedral2(u32),
}

impl ClosedForm {
    pub fn k(self) -> u32 {
        match self {
            ClosedForm::KleinCyclic(k)
            | ClosedForm::ModularM2(k)
            | ClosedForm::Dihedral2(k)
            | ClosedForm::Quaternion2(k)
            | ClosedForm::Semidihedral2(k) => k,
        }
    }

    fn min_k(self) -> u32 {
        match self {
            ClosedForm::KleinCyclic(_) => 2,
            ClosedForm::Dihedral2(_) | ClosedForm::Quaternion2(_) => 3,
            ClosedForm::ModularM2(_) | ClosedForm::Semidihedral2(_) => 4,
        }
    }

    fn check(self) -> Result<u32> {
        let k = self.k();
        if k < self.min_k() || k > 62 {
            return Err(Error::Domain(format!("{self:?} is outside the family domain")));
        }
        Ok(k)
    }

    /// The constructed group the formula describes.
    pub fn group(self) -> Result<FiniteGroup> {
        let k = self.check()?;
        let n = 1usize << k;
        match self {
            ClosedForm::KleinCyclic(_) => cyclic(n / 2)?.direct_product(&cyclic(2)?),
            ClosedForm::ModularM2(_) => modular_group(2, k),
            ClosedForm::Dihedral2(_) => dihedral(n),
            ClosedForm::Quaternion2(_) => generalized_quaternion(n),
            ClosedForm::Semidihedral2(_) => semidihedral(n),
        }
    }
}

pub fn psi_prime_closed_form(family: ClosedForm) -> Result<ExactRational> {
    let k = family.check()?;
    let two = |e: u32| BigInt::one() << e;
    let den = two(2 * k + 1) + 1;
    let num = match family {
        ClosedForm::KleinCyclic(_) | ClosedForm::ModularM2(_) => two(2 * k) + 5,
        ClosedForm::Dihedral2(_) => two(2 * k - 1) + 3 * two(k) + 1,
        ClosedForm::Quaternion2(_) => two(2 * k - 1) + 3 * two(k + 1) + 1,
        ClosedForm::Semidihedral2(_) => two(2 * k - 1) + 9 * two(k - 1) + 1,
    };
    ExactRational::new(num, den)
}

/// ψ′ of `P*(p^n, 2^k)` in closed form.
pub fn psi_prime_pstar(p: u64, n: u32, k: u32) -> Result<ExactRational> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::Domain(format!("{p} must be an odd prime")));
    }
    if n < 1 || k < 1 {
        return Err(Error::Domain("exponents must be at least 1".into()));
    }
    let p = BigInt::from(p);
    let big: BigInt = p.pow(2 * n + 1) + 1;
    let first = ExactRational::new(&p + 1, big.clone())?;
    let coeff = ExactRational::new((&p + 1) * (p.pow(n) - 1), big)?;
    let two = BigInt::one() << (2 * k - 1);
    let tail = ExactRational::new((&p + 3) * two + &p, (BigInt::one() << (2 * k + 1)) + 1)?;
    Ok(first + coeff * tail)
}

/// `|P|·ψ(H) + (ψ(P) − |P|)·ψ(C_H(P))` for `G = P ⋊ H` with `P` a normal cyclic Sylow subgroup.
pub fn semidirect_psi(p_order: &Nat, psi_p: &Nat, psi_h: &Nat, psi_chp: &Nat) -> Nat {
    p_order * psi_h + (psi_p - p_order) * psi_chp
}

/// Element whose cyclic subgroup has index below a stated bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundWitness {
    pub element: usize,
    pub index: usize,
    pub bound: ExactRational,
}

impl BoundWitness {
    pub fn holds(&self) -> bool {
        ExactRational::from(self.index as u64) < self.bound
    }
}

fn prime_list(n: u64) -> Vec<u64> {
    full_factorization(n).primes().collect()
}

/// Index bound `(s/r)·∏(p_i+1)/p_i`, or its truncation at position `t` (1-based):
/// `(s/r)·∏_{i<t}(p_i+1)/p_i · (p_k+1)/p_t`.
pub fn index_bound(n: u64, threshold: &ExactRational, t: Option<usize>) -> Result<ExactRational> {
    let ps = prime_list(n);
    let mut bound = threshold.recip()?;
    match t {
        None => {
            for &p in &ps {
                bound = bound * rational(p + 1, p)?;
            }
        }
        Some(t) => {
            if t == 0 || t > ps.len() {
                return Err(Error::Domain(format!("t = {t} must lie in 1..={}", ps.len())));
            }
            for &p in &ps[..t - 1] {
                bound = bound * rational(p + 1, p)?;
            }
            bound = bound * rational(ps[ps.len() - 1] + 1, ps[t - 1])?;
        }
    }
    Ok(bound)
}

/// Element of largest order, reported against the index bound for `ψ′(G) > threshold`.
pub fn large_element_witness(g: &FiniteGroup, threshold: &ExactRational, t: Option<usize>) -> Result<BoundWitness> {
    if g.order() == 1 {
        return Err(Error::Precondition("trivial group has no prime divisors".into()));
    }
    if psi_prime(g) <= *threshold {
        return Err(Error::Precondition(format!("psi' does not exceed {threshold}")));
    }
    let bound = index_bound(g.order() as u64, threshold, t)?;
    let element = g.elements().max_by_key(|&x| (g.order_of(x), std::cmp::Reverse(x))).expect("nonempty group");
    let index = g.order() / g.order_of(element) as usize;
    Ok(BoundWitness { element, index, bound })
}

/// Which lower bound on ψ(C_n) to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicBound {
    /// `∏ p_i/(p_i+1) · n²` over the primes of `n`.
    Product,
    /// Same product over the first `k` primes.
    FirstPrimes,
    /// `∏_{i<t} p_i/(p_i+1) · p_t/(p_k+1) · n²`, `t` 1-based.
    Truncated(usize),
    /// Truncated form over the first primes, keeping the true largest prime `p_k`.
    TruncatedFirstPrimes(usize),
}

fn first_primes(k: usize) -> Vec<u64> {
    (2u64..).filter(|&p| is_prime(p)).take(k).collect()
}

pub fn cyclic_lower_bound(n: u64, variant: CyclicBound) -> Result<ExactRational> {
    if n < 2 {
        return Err(Error::Domain("the bound needs n >= 2".into()));
    }
    let ps = prime_list(n);
    let k = ps.len();
    let n2 = ExactRational::integer(BigInt::from(n) * BigInt::from(n));
    let prod = |qs: &[u64]| -> Result<ExactRational> {
        qs.iter().try_fold(ExactRational::one(), |acc, &p| Ok(acc * rational(p, p + 1)?))
    };
    let truncated = |qs: &[u64], t: usize| -> Result<ExactRational> {
        if t == 0 || t > k {
            return Err(Error::Domain(format!("t = {t} must lie in 1..={k}")));
        }
        Ok(prod(&qs[..t - 1])? * rational(qs[t - 1], ps[k - 1] + 1)?)
    };
    let factor = match variant {
        CyclicBound::Product => prod(&ps)?,
        CyclicBound::FirstPrimes => prod(&first_primes(k))?,
        CyclicBound::Truncated(t) => truncated(&ps, t)?,
        CyclicBound::TruncatedFirstPrimes(t) => truncated(&first_primes(k), t)?,
    };
    Ok(factor * n2)
}

/// Largest ψ over the maximal subgroups, which by monotonicity of ψ under
/// inclusion is the largest ψ over all proper subgroups.
pub fn l_max(g: &FiniteGroup) -> Result<Nat> {
    l_max_with(g, &Limits::default())
}

pub fn l_max_with(g: &FiniteGroup, limits: &Limits) -> Result<Nat> {
    if g.order() == 1 {
        return Err(Error::Precondition("the trivial group has no maximal subgroups".into()));
    }
    let lat = all_subgroups_with(g, limits)?;
    Ok(lat
        .nodes()
        .iter()
        .filter(|h| h.size() < g.order())
        .map(|h| h.iter().map(|x| Nat::from(g.order_of(x))).sum::<Nat>())
        .max()
        .unwrap_or_else(Nat::one))
}

fn subgroup_psi(g: &FiniteGroup, h: &SubgroupSet) -> Nat {
    h.iter().map(|x| Nat::from(g.order_of(x))).sum()
}

/// Right-hand side of the normal-cyclic-Sylow bound for `G = P ⋊ H`.
pub fn star_bound(g: &FiniteGroup, p: &SubgroupSet, h: &SubgroupSet) -> Result<ExactRational> {
    let n = g.order();
    let (ps, hs) = (p.size(), h.size());
    if ps * hs != n || !p.intersection(h).is_trivial() {
        return Err(Error::Precondition("H is not a complement of P".into()));
    }
    if !g.is_normal(p) || !g.elements().any(|x| p.contains(x) && g.order_of(x) as usize == ps) {
        return Err(Error::Precondition("P must be normal and cyclic".into()));
    }
    if crate::numeric::prime_power(ps as u64).is_none() || crate::numeric::gcd(ps as u64, hs as u64) != 1 {
        return Err(Error::Precondition("P must be a Sylow subgroup".into()));
    }
    let chp = g.centralizer_of(p).intersection(h);
    if chp.size() == hs {
        return Err(Error::Precondition("C_H(P) must be a proper subgroup of H".into()));
    }
    let (hg, _) = h.to_group(g);
    let ratio = ExactRational::from_nats(&Nat::from(ps), &psi_cyclic(ps as u64))?;
    let psi_h = ExactRational::from_nats(&subgroup_psi(g, h), &psi_cyclic(hs as u64))?;
    let lh = ExactRational::from_nats(&l_max(&hg)?, &psi_cyclic(hs as u64))?;
    Ok(&ratio * &psi_h + &(ExactRational::one() - ratio) * &lh)
}

/// Finds a normal cyclic Sylow subgroup with a non-centralizing complement and
/// evaluates the bound.
pub fn star_bound_auto(g: &FiniteGroup) -> Result<ExactRational> {
    let lat = all_subgroups_with(g, &Limits::default())?;
    for p in crate::numeric::prime_divisors(g.order() as u64) {
        let syl = g.sylow_subgroup(p);
        let cyclic = syl.iter().any(|x| g.order_of(x) as usize == syl.size());
        if !cyclic || !g.is_normal(&syl) {
            continue;
        }
        let want = g.order() / syl.size();
        for h in lat.nodes().iter().filter(|h| h.size() == want) {
            if h.intersection(&syl).is_trivial() {
                match star_bound(g, &syl, h) {
                    Ok(b) => return Ok(b),
                    Err(Error::Precondition(_)) => break,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Err(Error::Precondition("no normal cyclic Sylow subgroup acting nontrivially".into()))
}

/// `|P|/ψ(C_|P|)` for `|P| = p^n`.
pub fn sylow_ratio(p: u64, n: u32) -> ExactRational {
    let q = p.pow(n);
    ExactRational::from_nats(&Nat::from(q), &psi_cyclic(q)).expect("positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    fn r(a: i64, b: i64) -> ExactRational {
        rational(a, b).unwrap()
    }

    #[test]
    fn cyclic_values() {
        let cases = [(1u64, 1u64), (4, 11), (6, 21), (8, 43), (12, 77), (24, 301), (40, 903), (60, 1617)];
        for (n, v) in cases {
            assert_eq!(psi_cyclic(n), Nat::from(v), "n = {n}");
            assert_eq!(psi(&cyclic(n as usize).unwrap()), Nat::from(v));
        }
    }

    #[test]
    fn psi_prime_values() {
        assert_eq!(psi_prime(&cyclic(9).unwrap()), ExactRational::one());
        assert_eq!(psi_prime(&sym(3).unwrap()), r(13, 21));
        assert_eq!(psi_prime(&alt(4).unwrap()), r(31, 77));
        assert_eq!(psi_prime(&rtimes_iota(&cyclic(5).unwrap(), 4).unwrap()), r(103, 231));
        assert_eq!(psi(&alt(5).unwrap()), Nat::from(211u32));
        assert_eq!(psi(&five_group(FiveGroup::C2TimesA4).unwrap()), Nat::from(87u32));
    }

    #[test]
    fn f_values() {
        assert_eq!(f_bound(2).unwrap(), r(7, 11));
        assert_eq!(f_bound(3).unwrap(), r(25, 61));
        assert_eq!(f_bound(5).unwrap(), r(121, 521));
        assert!(f_bound(4).is_err());
        for q in [2u64, 3, 5, 7, 11, 13] {
            assert!(f_bound(q).unwrap() < r(1, q as i64 - 1));
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(psi_prime_closed_form(ClosedForm::KleinCyclic(2)).unwrap(), r(7, 11));
        assert_eq!(psi_prime_closed_form(ClosedForm::Quaternion2(3)).unwrap(), r(27, 43));
        assert_eq!(psi_prime_closed_form(ClosedForm::KleinCyclic(3)).unwrap(), r(23, 43));
        assert_eq!(psi_prime_closed_form(ClosedForm::Dihedral2(3)).unwrap(), r(19, 43));
        assert_eq!(psi_prime_closed_form(ClosedForm::Semidihedral2(4)).unwrap(), r(67, 171));
        assert!(psi_prime_closed_form(ClosedForm::ModularM2(3)).is_err());
        assert!(psi_prime_closed_form(ClosedForm::KleinCyclic(1)).is_err());
    }

    #[test]
    fn pstar_formula() {
        assert_eq!(psi_prime_pstar(3, 1, 1).unwrap(), r(13, 21));
        assert_eq!(psi_prime_pstar(5, 1, 2).unwrap(), r(103, 231));
        assert_eq!(psi_prime_pstar(7, 1, 1).unwrap(), r(19, 43));
        assert_eq!(psi_prime_pstar(5, 1, 3).unwrap(), r(391, 903));
        for k in 1..=6u32 {
            let two = 1i64 << (2 * k + 1);
            assert_eq!(psi_prime_pstar(3, 1, k).unwrap(), r(4 * two + 7, 7 * two + 7));
        }
        assert!(psi_prime_pstar(2, 1, 1).is_err());
    }

    #[test]
    fn semidirect_formula() {
        let n = |v: u32| Nat::from(v);
        assert_eq!(semidirect_psi(&n(5), &n(21), &n(3), &n(1)), n(31));
        assert_eq!(semidirect_psi(&n(3), &n(7), &n(11), &n(11)), n(77));
        assert_eq!(semidirect_psi(&n(3), &n(7), &n(11), &n(3)), n(45));
        assert_eq!(psi(&rtimes_iota(&cyclic(3).unwrap(), 4).unwrap()), n(45));
    }

    #[test]
    fn witnesses() {
        let d8 = dihedral(8).unwrap();
        let w = large_element_witness(&d8, &r(31, 77), None).unwrap();
        assert_eq!(w.index, 2);
        assert_eq!(w.bound, r(77 * 3, 31 * 2));
        assert!(w.holds());
        let q16 = generalized_quaternion(16).unwrap();
        // psi'(Q16) = 25/57 lies below 19/43, so only the lower threshold applies.
        assert!(large_element_witness(&q16, &r(19, 43), None).is_err());
        let w = large_element_witness(&q16, &r(31, 77), None).unwrap();
        assert_eq!((w.index, q16.order_of(w.element)), (2, 8));
        assert!(w.holds());
        let c6 = cyclic(6).unwrap();
        assert_eq!(large_element_witness(&c6, &r(13, 21), Some(1)).unwrap().index, 1);
        assert!(large_element_witness(&sym(3).unwrap(), &r(13, 21), None).is_err());
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(cyclic_lower_bound(12, CyclicBound::Product).unwrap(), r(72, 1));
        assert_eq!(cyclic_lower_bound(60, CyclicBound::Truncated(1)).unwrap(), r(1200, 1));
        assert_eq!(cyclic_lower_bound(8, CyclicBound::Product).unwrap(), r(128, 3));
        assert!(cyclic_lower_bound(1, CyclicBound::Product).is_err());
        assert!(cyclic_lower_bound(12, CyclicBound::Truncated(3)).is_err());
    }

    #[test]
    fn l_values() {
        let nat = |v: u32| Nat::from(v);
        assert_eq!(l_max(&generalized_quaternion(8).unwrap()).unwrap(), nat(11));
        assert_eq!(l_max(&rtimes_iota(&cyclic(3).unwrap(), 4).unwrap()).unwrap(), nat(21));
        assert_eq!(l_max(&cyclic(12).unwrap()).unwrap(), nat(21));
        assert!(l_max(&FiniteGroup::trivial()).is_err());
    }

    #[test]
    fn star_bounds() {
        let d10 = dihedral(10).unwrap();
        let p = d10.sylow_subgroup(5);
        let h = d10.generated_subgroup(&[5]);
        assert_eq!(star_bound(&d10, &p, &h).unwrap(), r(31, 63));
        assert_eq!(psi_prime(&d10), r(31, 63));
        let g = rtimes_iota(&cyclic(3).unwrap(), 4).unwrap();
        let b = star_bound_auto(&g).unwrap();
        assert!(b >= r(45, 77));
        assert!(psi_prime(&g) <= b);
        assert!(matches!(star_bound_auto(&sl23().unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn sylow_ratios() {
        assert_eq!(sylow_ratio(3, 1), r(3, 7));
        assert_eq!(sylow_ratio(5, 1), r(5, 21));
        assert_eq!(sylow_ratio(7, 1), r(7, 43));
        assert_eq!(sylow_ratio(11, 1), r(11, 111));
        assert_eq!(sylow_ratio(3, 2), r(9, 61));
    }
}
