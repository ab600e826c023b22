//! Prime table, prime ranks and factorization of 64-bit indices.
//!
//! The table is a plain sieve of Eratosthenes that grows on demand: whenever a
//! bound beyond the current limit is needed, the sieve is rebuilt up to twice
//! that bound. A process-wide table backs the free functions so that ranks are
//! shared by every polynomial.

use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

/// Largest sieve limit the table will ever build.
pub const SIEVE_CEILING: u64 = 1 << 27;

/// Trial division covers every prime below this bound; any cofactor left
/// below its square is therefore prime.
const TRIAL_BOUND: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl Default for PrimeTable {
    fn default() -> Self {
        Self::with_limit(1 << 10)
    }
}

impl PrimeTable {
    /// Sieve every prime `<= limit`.
    pub fn with_limit(limit: u64) -> Self {
        let limit = limit.clamp(2, SIEVE_CEILING);
        Self {
            primes: sieve(limit),
            limit,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Make sure every prime `<= bound` is present, re-sieving to `2 * bound`.
    pub fn ensure_limit(&mut self, bound: u64) -> Result<()> {
        if bound <= self.limit {
            return Ok(());
        }
        if bound > SIEVE_CEILING {
            return Err(Error::PrimeLimit(bound));
        }
        let target = bound.saturating_mul(2).min(SIEVE_CEILING);
        self.primes = sieve(target);
        self.limit = target;
        Ok(())
    }

    /// Make sure the table holds at least `count` primes.
    pub fn ensure_count(&mut self, count: usize) -> Result<()> {
        while self.primes.len() < count {
            if self.limit >= SIEVE_CEILING {
                return Err(Error::PrimeLimit(self.limit));
            }
            let next = (self.limit + 1).max(nth_prime_upper_bound(count));
            self.ensure_limit(next)?;
        }
        Ok(())
    }

    /// The `d`-th prime, one-based (`nth(1) == 2`).
    pub fn nth(&self, d: usize) -> Option<u64> {
        d.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }

    /// Zero-based rank of `p` if it is a prime inside the table.
    pub fn rank(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }
}

/// Rosser-Schoenfeld style upper bound for the `n`-th prime.
fn nth_prime_upper_bound(n: usize) -> u64 {
    if n < 6 {
        return 15;
    }
    let n = n as f64;
    (n * (n.ln() + n.ln().ln())).ceil() as u64 + 1
}

fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn shared() -> &'static RwLock<PrimeTable> {
    static TABLE: OnceLock<RwLock<PrimeTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(PrimeTable::with_limit(TRIAL_BOUND)))
}

fn with_table<T>(f: impl Fn(&PrimeTable) -> Option<T>) -> Option<T> {
    let guard = shared().read().unwrap_or_else(|e| e.into_inner());
    f(&guard)
}

fn grow(update: impl FnOnce(&mut PrimeTable) -> Result<()>) -> Result<()> {
    let mut guard = shared().write().unwrap_or_else(|e| e.into_inner());
    update(&mut guard)
}

/// The `d`-th prime from the shared table (`nth_prime(1) == 2`).
pub fn nth_prime(d: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::Domain("prime rank d must be >= 1".into()));
    }
    if let Some(p) = with_table(|t| t.nth(d)) {
        return Ok(p);
    }
    grow(|t| t.ensure_count(d))?;
    with_table(|t| t.nth(d)).ok_or(Error::PrimeLimit(d as u64))
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Result<Vec<u64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    nth_prime(count)?;
    Ok(with_table(|t| Some(t.primes()[..count].to_vec())).unwrap_or_default())
}

/// Zero-based rank of the prime `p` (`prime_rank(2) == 0`).
pub fn prime_rank(p: u64) -> Result<usize> {
    if p <= with_table(|t| Some(t.limit())).unwrap_or(0) {
        return with_table(|t| t.rank(p)).ok_or_else(|| Error::Domain(format!("{p} is not prime")));
    }
    grow(|t| t.ensure_limit(p))?;
    with_table(|t| t.rank(p)).ok_or_else(|| Error::Domain(format!("{p} is not prime")))
}

/// Prime factorization `n = prod p^e` as ascending `(p, e)` pairs.
pub fn factor(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    let mut out = Vec::new();
    let mut rest = n;
    {
        let guard = shared().read().unwrap_or_else(|e| e.into_inner());
        for &p in guard.primes() {
            if p >= TRIAL_BOUND || p.saturating_mul(p) > rest {
                break;
            }
            if rest.is_multiple_of(p) {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                out.push((p, e));
            }
        }
    }
    if rest > 1 {
        let mut big = Vec::new();
        split_large(rest, &mut big);
        big.sort_unstable();
        for p in big {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    Ok(out)
}

/// Largest prime factor of `n` (1 for `n == 1`).
pub fn largest_prime_factor(n: u64) -> Result<u64> {
    Ok(factor(n)?.last().map_or(1, |&(p, _)| p))
}

// Cofactors here have no prime factor below TRIAL_BOUND.
fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if n < TRIAL_BOUND * TRIAL_BOUND || is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's variant of Pollard rho; `n` is odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut r = 1u64;
        let mut q = 1u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn table_matches_trial_division() {
        let t = PrimeTable::with_limit(2000);
        let brute: Vec<u64> = (2..=2000).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(t.primes(), brute.as_slice());
        assert_eq!(t.nth(1), Some(2));
        assert_eq!(t.rank(97), Some(24));
        assert_eq!(t.rank(91), None);
    }

    #[test]
    fn table_grows_to_twice_the_bound() {
        let mut t = PrimeTable::with_limit(10);
        t.ensure_limit(1000).unwrap();
        assert_eq!(t.limit(), 2000);
        t.ensure_count(500).unwrap();
        assert!(t.len() >= 500);
        assert_eq!(t.nth(500), Some(3571));
        assert!(t.ensure_limit(SIEVE_CEILING + 1).is_err());
    }

    #[test]
    fn shared_ranks() {
        assert_eq!(nth_prime(1).unwrap(), 2);
        assert_eq!(nth_prime(25).unwrap(), 97);
        assert_eq!(prime_rank(97).unwrap(), 24);
        assert!(prime_rank(100).is_err());
        assert_eq!(first_primes(4).unwrap(), vec![2, 3, 5, 7]);
        assert!(nth_prime(0).is_err());
    }

    #[test]
    fn factor_small_and_large() {
        assert_eq!(factor(1).unwrap(), vec![]);
        assert_eq!(factor(12).unwrap(), vec![(2, 2), (3, 1)]);
        assert_eq!(factor(1 << 32).unwrap(), vec![(2, 32)]);
        // 2^61 - 1 is a Mersenne prime.
        let m61 = (1u64 << 61) - 1;
        assert_eq!(factor(m61).unwrap(), vec![(m61, 1)]);
        // product of two primes just above 2^31
        let (a, b) = (2_147_483_659u64, 2_147_483_693u64);
        assert_eq!(factor(a * b).unwrap(), vec![(a, 1), (b, 1)]);
        assert!(factor(0).is_err());
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial_division_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn factor_reconstructs() {
        for n in 1..3000u64 {
            let prod: u64 = factor(n).unwrap().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
        assert_eq!(largest_prime_factor(1).unwrap(), 1);
        assert_eq!(largest_prime_factor(360).unwrap(), 5);
    }
}
