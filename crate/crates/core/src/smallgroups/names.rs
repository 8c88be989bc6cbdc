use std::collections::HashMap;
use std::sync::OnceLock;

use crate::constructions::*;
use crate::error::Result;
use crate::group::{ActionSpec, FiniteGroup};
use crate::numeric::{prime_divisors, valuation};

use super::canon::canonize;

/// Invariant factors `d1 | d2 | ...` of an abelian group, ascending, without 1s.
pub fn abelian_invariants(g: &FiniteGroup) -> Vec<u64> {
    let n = g.order() as u64;
    let mut parts: Vec<Vec<u32>> = Vec::new();
    for p in prime_divisors(n) {
        let e = valuation(n, p);
        let mut logs = vec![0u32];
        for i in 1..=e {
            let q = p.pow(i);
            let omega = g.elements().filter(|&x| q % g.order_of(x) as u64 == 0).count() as u64;
            logs.push(valuation(omega, p));
        }
        let widths: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let top = widths.first().copied().unwrap_or(0);
        // Column heights of the partition, read off its conjugate.
        let lambda: Vec<u32> = (1..=top).map(|j| widths.iter().filter(|&&w| w >= j).count() as u32).collect();
        parts.push(lambda.into_iter().map(|l| p.pow(l) as u32).collect());
    }
    let len = parts.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<u64> =
        (0..len).map(|t| parts.iter().map(|ps| ps.get(t).copied().unwrap_or(1) as u64).product()).collect();
    out.reverse();
    out
}

pub fn abelian_name(g: &FiniteGroup) -> String {
    let inv = abelian_invariants(g);
    if inv.is_empty() {
        return "C1".into();
    }
    inv.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join(" x ")
}

fn named(g: Result<FiniteGroup>, name: &str) -> (String, FiniteGroup) {
    (name.to_string(), g.expect("registry constructions are valid"))
}

fn prod(a: Result<FiniteGroup>, b: Result<FiniteGroup>) -> Result<FiniteGroup> {
    a?.direct_product(&b?)
}

/// `C3 ⋊ D8` where the rotation inverts and the reflection centralizes.
fn c3_by_d8() -> Result<FiniteGroup> {
    let c3 = cyclic(3)?;
    let d8 = dihedral(8)?;
    let inv = vec![0, 2, 1];
    let id = vec![0, 1, 2];
    let images = d8.elements().map(|b| if b % 4 % 2 == 1 { inv.clone() } else { id.clone() }).collect();
    let spec = ActionSpec { actor: d8, target: c3, images };
    spec.validate()?;
    FiniteGroup::semidirect_product(&spec)
}

/// The non-abelian groups of order at most 24 under readable names.
pub fn registry() -> Vec<(String, FiniteGroup)> {
    vec![
        named(sym(3), "S3"),
        named(dihedral(8), "D8"),
        named(generalized_quaternion(8), "Q8"),
        named(dihedral(10), "D10"),
        named(alt(4), "A4"),
        named(dihedral(12), "D12"),
        named(rtimes_iota(&cyclic(3).unwrap(), 4), "C3 rx C4"),
        named(dihedral(14), "D14"),
        named(dihedral(16), "D16"),
        named(generalized_quaternion(16), "Q16"),
        named(semidihedral(16), "SD16"),
        named(modular_group(2, 4), "M(16)"),
        named(prod(dihedral(8), cyclic(2)), "D8 x C2"),
        named(prod(generalized_quaternion(8), cyclic(2)), "Q8 x C2"),
        named(central_product_d8_c4(), "CPD8C4"),
        named(rtimes_iota(&cyclic(4).unwrap(), 4), "C4 rx C4"),
        named(
            ActionSpec::cyclic(elementary_abelian(2, 2).unwrap(), 4, &[0, 2, 1, 3])
                .and_then(|s| FiniteGroup::semidirect_product(&s)),
            "E(2,2) : C4",
        ),
        named(dihedral(18), "D18"),
        named(prod(sym(3), cyclic(3)), "S3 x C3"),
        named(rtimes_iota(&elementary_abelian(3, 2).unwrap(), 2), "E(3,2) rx C2"),
        named(dihedral(20), "D20"),
        named(rtimes_iota(&cyclic(5).unwrap(), 4), "C5 rx C4"),
        named(metacyclic(5, 4, 2, 0), "C5 : C4"),
        named(p_star(7, 1, 3, 1), "C7 : C3"),
        named(dihedral(22), "D22"),
        named(sym(4), "S4"),
        named(sl23(), "SL23"),
        named(rtimes_iota(&cyclic(3).unwrap(), 8), "C3 rx C8"),
        named(metacyclic(12, 2, 11, 6), "C3 : Q8"),
        named(dihedral(24), "D24"),
        named(prod(rtimes_iota(&cyclic(3).unwrap(), 4), cyclic(2)), "(C3 rx C4) x C2"),
        named(c3_by_d8(), "C3 : D8"),
        named(prod(dihedral(8), cyclic(3)), "D8 x C3"),
        named(prod(generalized_quaternion(8), cyclic(3)), "Q8 x C3"),
        named(prod(sym(3), cyclic(4)), "S3 x C4"),
        named(prod(dihedral(12), cyclic(2)), "D12 x C2"),
        named(prod(alt(4), cyclic(2)), "A4 x C2"),
    ]
}

fn registry_keys() -> &'static HashMap<String, String> {
    static KEYS: OnceLock<HashMap<String, String>> = OnceLock::new();
    KEYS.get_or_init(|| registry().into_iter().map(|(name, g)| (canonize(&g).key(), name)).collect())
}

/// Readable name for a group given its canonical key, if one is known.
pub fn known_name(g: &FiniteGroup, key: &str) -> Option<String> {
    if g.is_abelian() {
        return Some(abelian_name(g));
    }
    registry_keys().get(key).cloned()
}
