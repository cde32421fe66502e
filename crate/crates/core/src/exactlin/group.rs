//! Finitely generated abelian groups (and vector spaces) up to isomorphism.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Ring;

/// `R^free_rank + Z/d_1 + ... + Z/d_m` with `d_1 | d_2 | ... | d_m`, each
/// `d_i >= 2`. Over a field the torsion list is empty and `free_rank` is the
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FGAbelianGroup {
    pub ring: Ring,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FGAbelianGroup {
    /// Normalizes an arbitrary list of cyclic orders into invariant factors.
    pub fn new(ring: Ring, free_rank: usize, orders: Vec<BigInt>) -> Self {
        let torsion = if ring.is_field() {
            Vec::new()
        } else {
            invariant_factors(orders)
        };
        FGAbelianGroup {
            ring,
            free_rank,
            torsion,
        }
    }

    pub fn zero(ring: Ring) -> Self {
        FGAbelianGroup::new(ring, 0, Vec::new())
    }

    pub fn free(ring: Ring, rank: usize) -> Self {
        FGAbelianGroup::new(ring, rank, Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum.
    pub fn sum(&self, other: &FGAbelianGroup) -> FGAbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        FGAbelianGroup::new(self.ring, self.free_rank + other.free_rank, orders)
    }

    /// Number of generators in the invariant-factor presentation.
    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Dimension over a field; over Z, the rank.
    pub fn dim(&self) -> usize {
        self.free_rank
    }
}

/// Invariant factors of `Z/o_1 + ... + Z/o_k`: split each order into prime
/// powers, then recombine largest powers first. Orders 0 and 1 are dropped.
fn invariant_factors(orders: Vec<BigInt>) -> Vec<BigInt> {
    use std::collections::BTreeMap;
    let mut by_prime: BTreeMap<BigInt, Vec<BigInt>> = BTreeMap::new();
    for o in orders {
        let mut n = if o < BigInt::zero() { -o } else { o };
        if n <= BigInt::one() {
            continue;
        }
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            if n.is_multiple_of(&p) {
                let mut pk = BigInt::one();
                while n.is_multiple_of(&p) {
                    n /= &p;
                    pk *= &p;
                }
                by_prime.entry(p.clone()).or_default().push(pk);
            }
            p += 1;
        }
        if n > BigInt::one() {
            by_prime.entry(n.clone()).or_default().push(n);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![BigInt::one(); len];
    for powers in by_prime.values_mut() {
        powers.sort();
        powers.reverse();
        for (i, pk) in powers.iter().enumerate() {
            // largest powers go to the last factor
            factors[len - 1 - i] *= pk;
        }
    }
    factors
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        let sym = self.ring.symbol();
        match self.free_rank {
            0 => {}
            1 => parts.push(sym.clone()),
            r => parts.push(format!("{sym}^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        f.write_str(&parts.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(free: usize, orders: &[i64]) -> FGAbelianGroup {
        FGAbelianGroup::new(Ring::Integers, free, orders.iter().map(|&o| o.into()).collect())
    }

    #[test]
    fn invariant_factor_normalization() {
        assert_eq!(g(0, &[2, 3]).torsion, vec![BigInt::from(6)]);
        assert_eq!(g(0, &[4, 2]).torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(g(0, &[1, 6, 4]).torsion, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn display() {
        assert_eq!(g(0, &[]).to_string(), "0");
        assert_eq!(g(1, &[]).to_string(), "Z");
        assert_eq!(g(2, &[2]).to_string(), "Z^2+Z/2");
        assert_eq!(FGAbelianGroup::free(Ring::PrimeField(2), 3).to_string(), "F2^3");
    }
}
