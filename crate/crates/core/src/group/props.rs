use super::FiniteGroup;
use crate::numeric::{is_prime, prime_divisors, prime_power};

impl FiniteGroup {
    /// Every Sylow subgroup is normal.
    pub fn is_nilpotent(&self) -> bool {
        prime_divisors(self.order() as u64).into_iter().all(|p| self.is_normal(&self.sylow_subgroup(p)))
    }

    /// The derived series reaches the trivial subgroup.
    pub fn is_soluble(&self) -> bool {
        let mut cur = self.derived_subgroup();
        let mut prev = self.order();
        while !cur.is_trivial() {
            if cur.size() == prev {
                return false;
            }
            prev = cur.size();
            cur = self.commutator_subgroup(&cur);
        }
        true
    }

    /// Trivial, or has a normal subgroup of prime order with supersoluble quotient.
    pub fn is_supersoluble(&self) -> bool {
        if self.order() == 1 {
            return true;
        }
        for x in self.elements().skip(1) {
            if !is_prime(self.order_of(x) as u64) {
                continue;
            }
            let n = self.cyclic_subgroup(x);
            if self.is_normal(&n) {
                // Quotients of supersoluble groups are supersoluble, so the first
                // normal subgroup of prime order decides.
                return self.quotient(&n).map(|q| q.is_supersoluble()).unwrap_or(false);
            }
        }
        false
    }

    /// `Some((p, e))` when the order is `p^e`, `e ≥ 1`.
    pub fn p_group_prime(&self) -> Option<(u64, u32)> {
        prime_power(self.order() as u64)
    }

    pub fn is_elementary_abelian(&self) -> bool {
        match self.p_group_prime() {
            Some((p, _)) => self.is_abelian() && self.element_orders().iter().all(|&o| o == 1 || o as u64 == p),
            None => false,
        }
    }
}
