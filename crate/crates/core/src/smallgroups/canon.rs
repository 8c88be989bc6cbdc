use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Least Cayley table over the breadth-first labelings from minimal generating tuples.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalTable {
    n: usize,
    table: Vec<u16>,
}

impl fmt::Debug for CanonicalTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalTable({})", self.key())
    }
}

fn digit_width(n: usize) -> usize {
    let mut w = 1;
    let mut cap = 36;
    while cap < n {
        cap *= 36;
        w += 1;
    }
    w
}

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl CanonicalTable {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    /// `n:` followed by the row-major entries in base 36, fixed width per entry.
    pub fn key(&self) -> String {
        let w = digit_width(self.n);
        let mut s = format!("{}:", self.n);
        for &v in &self.table {
            let mut buf = vec![b'0'; w];
            let mut x = v as usize;
            for slot in buf.iter_mut().rev() {
                *slot = DIGITS[x % 36];
                x /= 36;
            }
            s.push_str(std::str::from_utf8(&buf).expect("ascii"));
        }
        s
    }

    /// Parses a key and re-canonizes it, so arbitrary valid tables are accepted.
    pub fn from_key(key: &str) -> Result<Self> {
        let (n, body) =
            key.trim().split_once(':').ok_or_else(|| Error::InvalidTable("missing ':' in table key".into()))?;
        let n: usize = n.parse().map_err(|_| Error::InvalidTable(format!("bad order prefix {n:?}")))?;
        let w = digit_width(n.max(1));
        if body.len() != n * n * w {
            return Err(Error::InvalidTable(format!("expected {} digits", n * n * w)));
        }
        let bytes = body.as_bytes();
        let mut table = Vec::with_capacity(n * n);
        for chunk in bytes.chunks(w) {
            let mut v = 0usize;
            for &c in chunk {
                let d = (c as char)
                    .to_digit(36)
                    .ok_or_else(|| Error::InvalidTable(format!("bad digit {:?}", c as char)))?;
                v = v * 36 + d as usize;
            }
            table.push(u16::try_from(v).map_err(|_| Error::InvalidTable("entry too large".into()))?);
        }
        let g = FiniteGroup::from_table(n, table)?;
        Ok(canonize(&g))
    }

    pub fn to_group(&self) -> FiniteGroup {
        FiniteGroup::from_table(self.n, self.table.clone()).expect("canonical tables are valid groups")
    }
}

const UNSET: u16 = u16::MAX;

struct Canonizer<'a> {
    g: &'a FiniteGroup,
    n: usize,
    label_of: Vec<u16>,
    elem_of: Vec<usize>,
    best: Option<Vec<u16>>,
}

impl<'a> Canonizer<'a> {
    /// Breadth-first labeling by right multiplication with `gens`; false unless it spans `G`.
    fn label(&mut self, gens: &[usize]) -> bool {
        self.label_of.fill(UNSET);
        self.elem_of.clear();
        self.label_of[0] = 0;
        self.elem_of.push(0);
        let mut i = 0;
        while i < self.elem_of.len() {
            let e = self.elem_of[i];
            for &s in gens {
                let f = self.g.mul(e, s);
                if self.label_of[f] == UNSET {
                    self.label_of[f] = self.elem_of.len() as u16;
                    self.elem_of.push(f);
                }
            }
            i += 1;
        }
        self.elem_of.len() == self.n
    }

    /// Keeps the current labeling if its table is smaller than the best one.
    fn offer(&mut self) {
        let n = self.n;
        let cell = |r: usize, c: usize| self.label_of[self.g.mul(self.elem_of[r], self.elem_of[c])];
        if let Some(best) = &self.best {
            let mut ord = Ordering::Equal;
            for (k, &b) in best.iter().enumerate() {
                ord = cell(k / n, k % n).cmp(&b);
                if ord != Ordering::Equal {
                    break;
                }
            }
            if ord != Ordering::Less {
                return;
            }
        }
        let table = (0..n * n).map(|k| cell(k / n, k % n)).collect();
        self.best = Some(table);
    }

    fn tuples(&mut self, gens: &mut Vec<usize>, d: usize) {
        if gens.len() == d {
            if self.label(gens) {
                self.offer();
            }
            return;
        }
        for x in 1..self.n {
            gens.push(x);
            self.tuples(gens, d);
            gens.pop();
        }
    }
}

/// Smallest number of elements generating `g`, giving up once the tuple search for `d` would cost more than `max_work`.
fn rank(g: &FiniteGroup, max_work: u64) -> Result<usize> {
    fn spans(g: &FiniteGroup, gens: &mut Vec<usize>, d: usize) -> bool {
        if gens.len() == d {
            return g.generated_subgroup(gens).size() == g.order();
        }
        let start = gens.last().map_or(1, |&x| x + 1);
        for x in start..g.order() {
            gens.push(x);
            if spans(g, gens, d) {
                return true;
            }
            gens.pop();
        }
        false
    }
    let n = g.order() as u64;
    for d in 1.. {
        let work = (n - 1).checked_pow(d as u32).and_then(|t| t.checked_mul(n));
        if work.is_none_or(|w| w > max_work) {
            return Err(Error::Resource(format!(
                "canonical form of a group of order {n} needs at least {d} generators, beyond the work cap {max_work}"
            )));
        }
        if spans(g, &mut Vec::new(), d) {
            return Ok(d);
        }
    }
    unreachable!("the loop returns")
}

/// Canonical form of a group table.
///
/// Every ordered generating tuple of minimal length labels the elements
/// breadth-first; the least resulting table is kept. The set of such tuples
/// is an isomorphism invariant, so isomorphic groups get equal tables.
pub fn canonize(g: &FiniteGroup) -> CanonicalTable {
    canonize_with(g, u64::MAX).expect("no work cap")
}

/// Work bound for `canonize_checked`, in labeled elements.
pub const CANON_WORK_CAP: u64 = 2_000_000_000;

/// `canonize` with a Resource error instead of an infeasible search.
pub fn canonize_checked(g: &FiniteGroup) -> Result<CanonicalTable> {
    canonize_with(g, CANON_WORK_CAP)
}

/// `canonize`, failing when the generating-tuple search would label more than `max_work` elements.
pub fn canonize_with(g: &FiniteGroup, max_work: u64) -> Result<CanonicalTable> {
    let n = g.order();
    if n == 1 {
        return Ok(CanonicalTable { n, table: vec![0] });
    }
    let d = rank(g, max_work)?;
    let mut c = Canonizer { g, n, label_of: vec![UNSET; n], elem_of: Vec::with_capacity(n), best: None };
    c.tuples(&mut Vec::with_capacity(d), d);
    Ok(CanonicalTable { n, table: c.best.expect("a generating tuple exists") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;
    use crate::group::is_isomorphic;
    use proptest::prelude::*;

    fn samples() -> Vec<FiniteGroup> {
        vec![
            cyclic(1).unwrap(),
            cyclic(7).unwrap(),
            cyclic(12).unwrap(),
            elementary_abelian(2, 3).unwrap(),
            dihedral(8).unwrap(),
            generalized_quaternion(8).unwrap(),
            alt(4).unwrap(),
            rtimes_iota(&cyclic(3).unwrap(), 4).unwrap(),
            dihedral(12).unwrap(),
            sym(3).unwrap(),
        ]
    }

    #[test]
    fn canonical_table_is_a_relabeling() {
        for g in samples() {
            let c = canonize(&g);
            let h = c.to_group();
            assert!(is_isomorphic(&g, &h));
            assert_eq!(canonize(&h), c, "idempotent");
        }
    }

    #[test]
    fn distinguishes_nonisomorphic() {
        let s = samples();
        for i in 0..s.len() {
            for j in 0..s.len() {
                let same = canonize(&s[i]) == canonize(&s[j]);
                assert_eq!(same, is_isomorphic(&s[i], &s[j]));
            }
        }
    }

    #[test]
    fn key_round_trip() {
        let c = canonize(&dihedral(8).unwrap());
        let k = c.key();
        assert!(k.starts_with("8:01234567"));
        assert_eq!(k.len(), 2 + 64);
        assert_eq!(CanonicalTable::from_key(&k).unwrap(), c);
        assert!(CanonicalTable::from_key("8:0123").is_err());
        assert!(CanonicalTable::from_key("nonsense").is_err());
        assert_eq!(canonize(&cyclic(1).unwrap()).key(), "1:0");
    }

    #[test]
    fn wide_keys_above_36() {
        let c = canonize(&cyclic(40).unwrap());
        assert_eq!(c.key().len(), 3 + 2 * 1600);
        assert_eq!(CanonicalTable::from_key(&c.key()).unwrap(), c);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn invariant_under_random_relabeling(seed in any::<u64>(), which in 0usize..10) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let g = samples().swap_remove(which);
            let mut perm: Vec<usize> = (1..g.order()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            perm.insert(0, 0);
            let h = g.relabel(&perm).unwrap();
            prop_assert_eq!(canonize(&g), canonize(&h));
        }
    }
}
