//! Dense finite groups stored as Cayley tables with the identity at index 0.

mod iso;
mod ops;
mod props;
mod subgroup;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::limits::Limits;

pub use iso::{automorphisms, homomorphisms, is_isomorphic, isomorphism, Generators};
pub use ops::ActionSpec;
pub use subgroup::SubgroupSet;

const FULL_ASSOCIATIVITY_LIMIT: usize = 512;
const SAMPLED_TRIPLES: usize = 100_000;

/// Finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
    orders: Vec<u32>,
    name: Option<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.n).field("name", &self.name).finish()
    }
}

impl FiniteGroup {
    /// Validates a row-major table under the default limits.
    pub fn from_table(n: usize, table: Vec<u16>) -> Result<Self> {
        Self::from_table_with(n, table, &Limits::default())
    }

    pub fn from_table_with(n: usize, table: Vec<u16>, limits: &Limits) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("order must be positive".into()));
        }
        if n > limits.max_order || n > u16::MAX as usize + 1 {
            return Err(Error::Resource(format!("order {n} exceeds the table cap {}", limits.max_order)));
        }
        if table.len() != n * n {
            return Err(Error::InvalidTable(format!("expected {} entries, got {}", n * n, table.len())));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= n) {
            return Err(Error::InvalidTable(format!("entry {bad} out of range")));
        }
        for b in 0..n {
            if table[b] as usize != b || table[b * n] as usize != b {
                return Err(Error::InvalidTable("index 0 is not the identity".into()));
            }
        }
        check_latin(n, &table)?;
        check_associative(n, &table)?;
        Ok(Self::assemble(n, table))
    }

    /// Builds a group from a multiplication closure over `0..n`.
    pub fn from_fn(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        Self::from_fn_with(n, mul, &Limits::default())
    }

    pub fn from_fn_with(n: usize, mul: impl Fn(usize, usize) -> usize, limits: &Limits) -> Result<Self> {
        if n > limits.max_order {
            return Err(Error::Resource(format!("order {n} exceeds the table cap {}", limits.max_order)));
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                if c >= n {
                    return Err(Error::InvalidTable(format!("product {c} out of range")));
                }
                table.push(c as u16);
            }
        }
        Self::from_table_with(n, table, limits)
    }

    fn assemble(n: usize, table: Vec<u16>) -> Self {
        let mut inverse = vec![0u16; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            inverse[a] = row.iter().position(|&v| v == 0).expect("latin row") as u16;
        }
        let mut orders = vec![0u32; n];
        for x in 0..n {
            let mut t = 1u32;
            let mut y = x;
            while y != 0 {
                y = table[y * n + x] as usize;
                t += 1;
            }
            orders[x] = t;
        }
        FiniteGroup { n, table, inverse, orders, name: None }
    }

    pub fn trivial() -> Self {
        Self::assemble(1, vec![0])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g⁻¹·x·g`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, x: usize, k: u64) -> usize {
        let k = k % self.orders[x] as u64;
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }

    pub fn row(&self, a: usize) -> &[u16] {
        &self.table[a * self.n..(a + 1) * self.n]
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub fn element_order(&self, x: usize) -> Result<u32> {
        self.orders.get(x).copied().ok_or(Error::IndexOutOfRange { index: x, order: self.n })
    }

    #[inline]
    pub fn order_of(&self, x: usize) -> u32 {
        self.orders[x]
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o as u64))
    }

    /// Sorted multiset of element orders.
    pub fn order_statistics(&self) -> Vec<u32> {
        let mut v = self.orders.clone();
        v.sort_unstable();
        v
    }

    /// Relabels elements: `perm[old] = new`, with `perm[0] = 0`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        if perm.len() != n || perm[0] != 0 {
            return Err(Error::Domain("relabeling must fix the identity".into()));
        }
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u16;
            }
        }
        let mut g = Self::from_table(n, table)?;
        g.name = self.name.clone();
        Ok(g)
    }
}

fn check_latin(n: usize, table: &[u16]) -> Result<()> {
    let mut seen = vec![u32::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let v = table[a * n + b] as usize;
            if seen[v] == a as u32 {
                return Err(Error::InvalidTable(format!("row {a} repeats {v}")));
            }
            seen[v] = a as u32;
        }
    }
    seen.iter_mut().for_each(|s| *s = u32::MAX);
    for b in 0..n {
        for a in 0..n {
            let v = table[a * n + b] as usize;
            if seen[v] == b as u32 {
                return Err(Error::InvalidTable(format!("column {b} repeats {v}")));
            }
            seen[v] = b as u32;
        }
    }
    Ok(())
}

fn check_associative(n: usize, table: &[u16]) -> Result<()> {
    let m = |a: usize, b: usize| table[a * n + b] as usize;
    let fail = |a, b, c| Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        for a in 1..n {
            for b in 1..n {
                let ab = m(a, b);
                for c in 1..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return fail(a, b, c);
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64 ^ n as u64);
        for _ in 0..SAMPLED_TRIPLES {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if m(m(a, b), c) != m(a, m(b, c)) {
                return fail(a, b, c);
            }
        }
    }
    Ok(())
}
