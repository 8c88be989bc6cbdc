//! Builders for the named groups and parametrized families.

use crate::error::{Error, Result};
use crate::group::{ActionSpec, FiniteGroup, Generators};
use crate::limits::Limits;
use crate::numeric::{gcd, is_prime, prime_power};

/// Metacyclic group `⟨x, y | x^m = 1, y^s = x^t, y x y⁻¹ = x^r⟩`.
///
/// Element `x^i y^j` has index `i + m·j`, so `x` is index 1 and `y` is index `m`.
pub fn metacyclic(m: usize, s: usize, r: usize, t: usize) -> Result<FiniteGroup> {
    if m == 0 || s == 0 {
        return Err(Error::Domain("metacyclic orders must be positive".into()));
    }
    let mut rpow = vec![1usize; s];
    for j in 1..s {
        rpow[j] = rpow[j - 1] * r % m;
    }
    FiniteGroup::from_fn(m * s, |u, v| {
        let (a, b) = (u % m, u / m);
        let (c, d) = (v % m, v / m);
        let mut i = a + c * rpow[b];
        let mut j = b + d;
        if j >= s {
            j -= s;
            i += t;
        }
        (i % m) + m * j
    })
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n < 1 {
        return Err(Error::Domain("cyclic order must be at least 1".into()));
    }
    Ok(FiniteGroup::from_fn(n, |a, b| (a + b) % n)?.with_name(format!("C{n}")))
}

/// Dihedral group of the given order; rotations are `0..order/2`.
pub fn dihedral(order: usize) -> Result<FiniteGroup> {
    if order % 2 == 1 || order < 6 {
        return Err(Error::Domain(format!("dihedral order {order} must be even and at least 6")));
    }
    let m = order / 2;
    Ok(metacyclic(m, 2, m - 1, 0)?.with_name(format!("D{order}")))
}

fn two_power_exponent(order: usize, min_k: u32, what: &str) -> Result<u32> {
    match prime_power(order as u64) {
        Some((2, k)) if k >= min_k => Ok(k),
        _ => Err(Error::Domain(format!("{what} order {order} must be 2^k with k >= {min_k}"))),
    }
}

pub fn generalized_quaternion(order: usize) -> Result<FiniteGroup> {
    two_power_exponent(order, 3, "quaternion")?;
    let m = order / 2;
    Ok(metacyclic(m, 2, m - 1, m / 2)?.with_name(format!("Q{order}")))
}

pub fn semidihedral(order: usize) -> Result<FiniteGroup> {
    two_power_exponent(order, 4, "semidihedral")?;
    let m = order / 2;
    Ok(metacyclic(m, 2, m / 2 - 1, 0)?.with_name(format!("SD{order}")))
}

/// `M(p^n) = ⟨x, y | x^{p^{n-1}} = y^p = 1, y x y⁻¹ = x^{1+p^{n-2}}⟩`.
pub fn modular_group(p: usize, n: u32) -> Result<FiniteGroup> {
    if !is_prime(p as u64) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let min = if p == 2 { 4 } else { 3 };
    if n < min {
        return Err(Error::Domain(format!("M({p}^{n}) requires n >= {min}")));
    }
    let m = p.pow(n - 1);
    let r = 1 + p.pow(n - 2);
    Ok(metacyclic(m, p, r, 0)?.with_name(format!("M({})", p.pow(n))))
}

pub fn elementary_abelian(p: usize, n: u32) -> Result<FiniteGroup> {
    if !is_prime(p as u64) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if n < 1 {
        return Err(Error::Domain("elementary abelian rank must be at least 1".into()));
    }
    let cp = cyclic(p)?;
    let mut g = cp.clone();
    for _ in 1..n {
        g = g.direct_product(&cp)?;
    }
    Ok(g.with_name(format!("E({p},{n})")))
}

/// `A ⋊ C_order` with the generator acting by inversion on the abelian group `A`.
pub fn rtimes_iota(a: &FiniteGroup, order: usize) -> Result<FiniteGroup> {
    rtimes_iota_with(a, order, &Limits::default())
}

pub fn rtimes_iota_with(a: &FiniteGroup, order: usize, limits: &Limits) -> Result<FiniteGroup> {
    if !a.is_abelian() {
        return Err(Error::Domain("the inversion action needs an abelian group".into()));
    }
    if order == 0 || order % 2 == 1 {
        return Err(Error::Domain(format!("the acting cyclic group must have even order, got {order}")));
    }
    let inv: Vec<usize> = a.elements().map(|x| a.inv(x)).collect();
    let spec = ActionSpec::cyclic(a.clone(), order, &inv)?;
    let g = FiniteGroup::semidirect_product_with(&spec, limits)?;
    Ok(match a.name() {
        Some(n) => g.with_name(format!("{} rx C{order}", wrap(n))),
        None => g,
    })
}

/// Smallest residue of multiplicative order `q` modulo the prime `p`.
pub fn power_residue(p: usize, q: usize) -> Option<usize> {
    (2..p).find(|&r| {
        let mut x = 1;
        for i in 1..=q {
            x = x * r % p;
            if x == 1 {
                return i == q;
            }
        }
        false
    })
}

/// `P*(p^n, q^k)`: elementary abelian `p`-group extended by `C_{q^k}` acting as a
/// power automorphism of order `q`.
pub fn p_star(p: usize, n: u32, q: usize, k: u32) -> Result<FiniteGroup> {
    p_star_with(p, n, q, k, &Limits::default())
}

pub fn p_star_with(p: usize, n: u32, q: usize, k: u32, limits: &Limits) -> Result<FiniteGroup> {
    if !is_prime(p as u64) || !is_prime(q as u64) {
        return Err(Error::Domain(format!("P*({p}^{n},{q}^{k}) needs prime p and q")));
    }
    if !(p - 1).is_multiple_of(q) {
        return Err(Error::Domain(format!("{q} does not divide {p}-1")));
    }
    if n < 1 || k < 1 {
        return Err(Error::Domain("P* exponents must be at least 1".into()));
    }
    let total = p.pow(n) * q.pow(k);
    if total > limits.max_order {
        return Err(Error::Resource(format!("order {total} exceeds the table cap {}", limits.max_order)));
    }
    let a = elementary_abelian(p, n)?;
    let r = power_residue(p, q).expect("q divides p-1");
    let phi: Vec<usize> = a.elements().map(|x| a.pow(x, r as u64)).collect();
    let spec = ActionSpec::cyclic(a, q.pow(k), &phi)?;
    Ok(FiniteGroup::semidirect_product_with(&spec, limits)?.with_name(format!("Pstar({p},{n},{q},{k})")))
}

fn permutation_group(perms: Vec<Vec<usize>>) -> Result<FiniteGroup> {
    let mut perms = perms;
    perms.sort();
    let idx = |p: &Vec<usize>| perms.binary_search(p).expect("closed set");
    let n = perms.len();
    FiniteGroup::from_fn(n, |a, b| {
        let prod: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
        idx(&prod)
    })
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    permute(&mut cur, 0, &mut out);
    out
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

fn is_even(p: &[usize]) -> bool {
    let inversions =
        (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    inversions % 2 == 0
}

/// Alternating group on `n ≤ 5` points.
pub fn alt(n: usize) -> Result<FiniteGroup> {
    if !(1..=5).contains(&n) {
        return Err(Error::Domain(format!("alt({n}) is only supported for 1 <= n <= 5")));
    }
    let perms = all_permutations(n).into_iter().filter(|p| is_even(p)).collect();
    Ok(permutation_group(perms)?.with_name(format!("A{n}")))
}

/// Symmetric group on `n ≤ 4` points.
pub fn sym(n: usize) -> Result<FiniteGroup> {
    if !(1..=4).contains(&n) {
        return Err(Error::Domain(format!("sym({n}) is only supported for 1 <= n <= 4")));
    }
    Ok(permutation_group(all_permutations(n))?.with_name(format!("S{n}")))
}

/// Extends generator images to an endomorphism of `g` as an element map.
fn endomorphism(g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Result<Vec<usize>> {
    Generators::with(g, gens.to_vec())
        .extend(g, g, images)
        .ok_or_else(|| Error::InvalidAction("generator images violate a relation".into()))
}

/// `Q8 ⋊ C3` with the generator cycling the three cyclic subgroups of order 4.
pub fn sl23() -> Result<FiniteGroup> {
    let q8 = generalized_quaternion(8)?;
    let (x, y) = (1, 4);
    let phi = endomorphism(&q8, &[x, y], &[y, q8.mul(x, y)])?;
    let spec = ActionSpec::cyclic(q8, 3, &phi)?;
    Ok(FiniteGroup::semidirect_product(&spec)?.with_name("SL23"))
}

fn central_product_with_c4(base: FiniteGroup, name: &str) -> Result<FiniteGroup> {
    let c4 = cyclic(4)?;
    let z = base.center();
    let zgen = z.iter().find(|&e| base.order_of(e) == 2).expect("central involution");
    let prod = base.direct_product(&c4)?;
    let diag = prod.generated_subgroup(&[zgen * 4 + 2]);
    Ok(prod.quotient(&diag)?.with_name(name))
}

/// `(D8 × C4)/⟨(z, c²)⟩` with `z` the central involution of `D8`.
pub fn central_product_d8_c4() -> Result<FiniteGroup> {
    central_product_with_c4(dihedral(8)?, "CPD8C4")
}

/// `(Q8 × C4)/⟨(z, c²)⟩`.
pub fn central_product_q8_c4() -> Result<FiniteGroup> {
    central_product_with_c4(generalized_quaternion(8)?, "CPQ8C4")
}

/// The five order-36/54/24 groups singled out by their ψ values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiveGroup {
    /// `C3 × (C3 ⋊ι C4)`.
    C3TimesC3RxC4,
    /// `C9 × S3`.
    C9TimesS3,
    /// `C2 × A4`.
    C2TimesA4,
    /// `Q8 ⋊ C3`.
    Sl23,
    /// `(C2 × C2) ⋊ C9` through the quotient `C9 → C3`.
    KleinRxC9,
}

impl FiveGroup {
    pub const ALL: [FiveGroup; 5] =
        [FiveGroup::C3TimesC3RxC4, FiveGroup::C9TimesS3, FiveGroup::C2TimesA4, FiveGroup::Sl23, FiveGroup::KleinRxC9];
}

pub fn five_group(which: FiveGroup) -> Result<FiniteGroup> {
    match which {
        FiveGroup::C3TimesC3RxC4 => cyclic(3)?.direct_product(&rtimes_iota(&cyclic(3)?, 4)?),
        FiveGroup::C9TimesS3 => cyclic(9)?.direct_product(&dihedral(6)?.with_name("S3")),
        FiveGroup::C2TimesA4 => cyclic(2)?.direct_product(&alt(4)?),
        FiveGroup::Sl23 => sl23(),
        FiveGroup::KleinRxC9 => {
            let v = elementary_abelian(2, 2)?;
            // The three involutions of C2 × C2 are indices 1, 2, 3; cycle them.
            let phi = vec![0, 2, 3, 1];
            let spec = ActionSpec::cyclic(v, 9, &phi)?;
            Ok(FiniteGroup::semidirect_product(&spec)?.with_name("E(2,2) : C9"))
        }
    }
}

/// Family tag of a buildable group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Cyclic {
        n: usize,
    },
    Dihedral {
        order: usize,
    },
    Quaternion {
        order: usize,
    },
    Semidihedral {
        order: usize,
    },
    ModularM {
        p: usize,
        n: u32,
    },
    ElemAbelian {
        p: usize,
        n: u32,
    },
    PStar {
        p: usize,
        n: u32,
        q: usize,
        k: u32,
    },
    /// `C_base ⋊ι C_order`.
    RtimesIota {
        base: usize,
        order: usize,
    },
    Alt4,
    Alt5,
    Sym3,
    Sym4,
    Sl23,
    CentralProdD8C4,
    FiveGroup(FiveGroup),
}

/// A family member times a coprime cyclic cofactor `C_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub m: usize,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec { family, m: 1 }
    }

    pub fn times(family: Family, m: usize) -> Self {
        FamilySpec { family, m }
    }
}

fn build_family(f: Family) -> Result<FiniteGroup> {
    match f {
        Family::Cyclic { n } => cyclic(n),
        Family::Dihedral { order } => dihedral(order),
        Family::Quaternion { order } => generalized_quaternion(order),
        Family::Semidihedral { order } => semidihedral(order),
        Family::ModularM { p, n } => modular_group(p, n),
        Family::ElemAbelian { p, n } => elementary_abelian(p, n),
        Family::PStar { p, n, q, k } => p_star(p, n, q, k),
        Family::RtimesIota { base, order } => rtimes_iota(&cyclic(base)?, order),
        Family::Alt4 => alt(4),
        Family::Alt5 => alt(5),
        Family::Sym3 => sym(3),
        Family::Sym4 => sym(4),
        Family::Sl23 => sl23(),
        Family::CentralProdD8C4 => central_product_d8_c4(),
        Family::FiveGroup(w) => five_group(w),
    }
}

/// Builds the family member and attaches the coprime cofactor `C_m`.
pub fn build(spec: FamilySpec) -> Result<FiniteGroup> {
    if spec.m == 0 {
        return Err(Error::Domain("cofactor m must be positive".into()));
    }
    let core = build_family(spec.family)?;
    if spec.m == 1 {
        return Ok(core);
    }
    let n = core.order() as u64;
    if gcd(spec.m as u64, n) != 1 {
        return Err(Error::Domain(format!("cofactor m={} is not coprime to the core order {n}", spec.m)));
    }
    core.direct_product(&cyclic(spec.m)?)
}

/// Parenthesizes compound names.
pub(crate) fn wrap(name: &str) -> String {
    if name.contains(' ') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::is_isomorphic;

    fn psi(g: &FiniteGroup) -> u64 {
        g.element_orders().iter().map(|&o| o as u64).sum()
    }

    #[test]
    fn presentation_values() {
        assert_eq!(psi(&cyclic(1).unwrap()), 1);
        assert_eq!(psi(&cyclic(8).unwrap()), 43);
        assert_eq!(psi(&cyclic(60).unwrap()), 1617);
        assert_eq!(psi(&dihedral(8).unwrap()), 19);
        assert_eq!(psi(&dihedral(12).unwrap()), 33);
        assert_eq!(psi(&generalized_quaternion(8).unwrap()), 27);
        assert_eq!(psi(&semidihedral(16).unwrap()), 67);
        assert_eq!(psi(&modular_group(2, 4).unwrap()), 87);
        assert_eq!(psi(&elementary_abelian(2, 2).unwrap()), 7);
        assert_eq!(psi(&elementary_abelian(3, 2).unwrap()), 25);
        assert_eq!(psi(&rtimes_iota(&cyclic(5).unwrap(), 4).unwrap()), 103);
        assert_eq!(psi(&alt(4).unwrap()), 31);
        assert_eq!(psi(&alt(5).unwrap()), 211);
    }

    #[test]
    fn domain_errors() {
        assert!(dihedral(4).is_err());
        assert!(dihedral(7).is_err());
        assert!(generalized_quaternion(4).is_err());
        assert!(semidihedral(8).is_err());
        assert!(modular_group(2, 3).is_err());
        assert!(modular_group(3, 2).is_err());
        assert!(elementary_abelian(4, 2).is_err());
        assert!(p_star(7, 1, 5, 1).is_err());
        assert!(rtimes_iota(&dihedral(8).unwrap(), 2).is_err());
        assert!(rtimes_iota(&cyclic(3).unwrap(), 3).is_err());
        assert!(alt(6).is_err());
        assert!(sym(5).is_err());
    }

    #[test]
    fn named_small_isomorphisms() {
        let s3 = sym(3).unwrap();
        assert!(is_isomorphic(&rtimes_iota(&cyclic(3).unwrap(), 2).unwrap(), &s3));
        assert!(is_isomorphic(&p_star(3, 1, 2, 1).unwrap(), &s3));
        assert!(is_isomorphic(&dihedral(10).unwrap(), &rtimes_iota(&cyclic(5).unwrap(), 2).unwrap()));
        assert!(is_isomorphic(&rtimes_iota(&cyclic(6).unwrap(), 2).unwrap(), &dihedral(12).unwrap()));
        assert!(!is_isomorphic(&dihedral(8).unwrap(), &generalized_quaternion(8).unwrap()));
        assert!(!modular_group(2, 4).unwrap().is_abelian());
    }

    #[test]
    fn dihedral_matches_inversion_product() {
        for n in 3..=20 {
            let d = dihedral(2 * n).unwrap();
            let r = rtimes_iota(&cyclic(n).unwrap(), 2).unwrap();
            assert!(is_isomorphic(&d, &r), "n = {n}");
        }
    }

    #[test]
    fn p_star_with_inversion_is_dihedral() {
        for p in [3, 5, 7, 11, 13] {
            assert!(is_isomorphic(&p_star(p, 1, 2, 1).unwrap(), &dihedral(2 * p).unwrap()));
        }
    }

    #[test]
    fn central_products_agree() {
        let a = central_product_d8_c4().unwrap();
        let b = central_product_q8_c4().unwrap();
        assert_eq!(a.order(), 16);
        assert_eq!(a.exponent(), 4);
        assert!(is_isomorphic(&a, &b));
    }

    #[test]
    fn lemma_groups() {
        let expected = [
            (FiveGroup::C3TimesC3RxC4, 36, 243),
            (FiveGroup::C9TimesS3, 54, 553),
            (FiveGroup::C2TimesA4, 24, 87),
            (FiveGroup::Sl23, 24, 99),
            (FiveGroup::KleinRxC9, 36, 265),
        ];
        for (w, n, v) in expected {
            let g = five_group(w).unwrap();
            assert_eq!((g.order(), psi(&g)), (n, v), "{w:?}");
        }
        assert!(!sl23().unwrap().is_abelian());
    }

    #[test]
    fn build_checks_cofactor() {
        let g = build(FamilySpec::times(Family::Quaternion { order: 8 }, 15)).unwrap();
        assert_eq!(g.order(), 120);
        let g = build(FamilySpec::times(Family::PStar { p: 3, n: 1, q: 2, k: 3 }, 5)).unwrap();
        assert_eq!(g.order(), 120);
        assert!(build(FamilySpec::times(Family::Dihedral { order: 8 }, 2)).is_err());
        assert!(build(FamilySpec::times(Family::RtimesIota { base: 3, order: 4 }, 3)).is_err());
    }
}
