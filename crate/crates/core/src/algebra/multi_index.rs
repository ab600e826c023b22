use std::fmt;

use super::primes::{factor, nth_prime, prime_rank};
use crate::error::{Error, Result};

/// Exponent vector over the ordered primes `2, 3, 5, ...`.
///
/// Stored without trailing zeros, so `(2, 1)` and `(2, 1, 0, 0)` are the same
/// value. The empty vector is the index of `n = 1`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        Self(exponents)
    }

    /// The index of the constant monomial.
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    /// The index with a single `1` at zero-based coordinate `j`.
    pub fn unit(j: usize) -> Self {
        let mut e = vec![0; j + 1];
        e[j] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Number of coordinates up to the last nonzero exponent.
    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// Coordinatewise sum (the index of a product of monomials).
    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut out = long.clone();
        for (o, s) in out.iter_mut().zip(short) {
            *o += s;
        }
        Self(out)
    }

    /// The integer `prod p_j^{nu_j}`.
    pub fn reconstruct(&self) -> Result<u64> {
        let mut n: u64 = 1;
        for (j, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = nth_prime(j + 1)?;
            n = p
                .checked_pow(e)
                .and_then(|pe| n.checked_mul(pe))
                .ok_or_else(|| Error::Overflow(format!("multi-index {self} exceeds u64")))?;
        }
        Ok(n)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiIndex{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Exponent vector of `n` by the fundamental theorem of arithmetic.
pub fn factorize(n: u64) -> Result<MultiIndex> {
    let pairs = factor(n)?;
    let Some(&(largest, _)) = pairs.last() else {
        return Ok(MultiIndex::zero());
    };
    let mut exps = vec![0u32; prime_rank(largest)? + 1];
    for (p, e) in pairs {
        exps[prime_rank(p)?] = e;
    }
    Ok(MultiIndex::new(exps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap(), MultiIndex::zero());
        assert_eq!(factorize(12).unwrap(), MultiIndex::new(vec![2, 1]));
        // Rank of 97 from an independent enumeration of primes below 100.
        let primes_below_100: Vec<u64> = (2..100u64)
            .filter(|n| (2..*n).all(|d| n % d != 0))
            .collect();
        let rank = primes_below_100.iter().position(|&p| p == 97).unwrap();
        assert_eq!(rank, 24);
        assert_eq!(factorize(97).unwrap(), MultiIndex::unit(rank));
        assert!(factorize(0).is_err());
    }

    #[test]
    fn trailing_zeros_are_canonical() {
        assert_eq!(
            MultiIndex::new(vec![2, 1, 0, 0]),
            MultiIndex::new(vec![2, 1])
        );
        assert_eq!(MultiIndex::new(vec![0, 0]), MultiIndex::zero());
        assert_eq!(
            MultiIndex::new(vec![1]).add(&MultiIndex::new(vec![0, 2])),
            MultiIndex::new(vec![1, 2])
        );
    }

    #[test]
    fn reconstruct_roundtrip() {
        for n in 1..2000u64 {
            assert_eq!(factorize(n).unwrap().reconstruct().unwrap(), n);
        }
        assert!(MultiIndex::new(vec![64]).reconstruct().is_err());
        assert_eq!(MultiIndex::new(vec![63]).reconstruct().unwrap(), 1 << 63);
    }
}
