use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::primes::{largest_prime_factor, nth_prime};
use crate::error::{Error, Result};

/// Ring of coefficients a Dirichlet polynomial can carry.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
        + 'static
{
}

/// Exact Gaussian-rational coefficients.
pub type ExactCoefficient = Complex<BigRational>;

const DENSE_LIMIT: u64 = 1 << 24;

/// A finite Dirichlet series `sum a_n n^{-s}`.
///
/// Terms with a zero coefficient are never stored, so two polynomials that
/// differ only in explicit zeros compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletPolynomial<C = Complex64> {
    terms: BTreeMap<u64, C>,
}

/// Float polynomial with exact-rational counterpart [`ExactPolynomial`].
pub type ExactPolynomial = DirichletPolynomial<ExactCoefficient>;

impl<C: Coefficient> Default for DirichletPolynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> DirichletPolynomial<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    /// The multiplicative identity `1^{-s}`.
    pub fn one() -> Self {
        Self::monomial(1, C::one())
    }

    /// `c * n^{-s}`; `n` must be positive.
    pub fn monomial(n: u64, c: C) -> Self {
        assert!(n >= 1, "Dirichlet indices start at 1");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(n, c);
        }
        Self { terms }
    }

    /// Build from `(n, a_n)` pairs. Repeated indices are summed.
    pub fn from_terms<I: IntoIterator<Item = (u64, C)>>(terms: I) -> Result<Self> {
        let mut map: BTreeMap<u64, C> = BTreeMap::new();
        for (n, c) in terms {
            if n == 0 {
                return Err(Error::InvalidSeries(
                    "index 0 is not a Dirichlet index".into(),
                ));
            }
            match map.remove(&n) {
                Some(prev) => {
                    let sum = prev + c;
                    map.insert(n, sum);
                }
                None => {
                    map.insert(n, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { terms: map })
    }

    /// `sum_{n=1}^{len} coeff(n) n^{-s}`.
    pub fn from_fn(len: u64, mut coeff: impl FnMut(u64) -> C) -> Self {
        let terms = (1..=len)
            .map(|n| (n, coeff(n)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { terms }
    }

    pub fn coefficient(&self, n: u64) -> C {
        self.terms.get(&n).cloned().unwrap_or_else(C::zero)
    }

    pub fn get(&self, n: u64) -> Option<&C> {
        self.terms.get(&n)
    }

    /// Largest index with a nonzero coefficient, `0` for the zero polynomial.
    pub fn max_index(&self) -> u64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &C)> + '_ {
        self.terms.iter().map(|(&n, c)| (n, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    pub fn map_coefficients<D: Coefficient>(
        &self,
        mut f: impl FnMut(u64, &C) -> D,
    ) -> DirichletPolynomial<D> {
        let terms = self
            .terms
            .iter()
            .map(|(&n, c)| (n, f(n, c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        DirichletPolynomial { terms }
    }

    /// Keep the terms whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(u64) -> bool) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(&n, _)| keep(n))
            .map(|(&n, c)| (n, c.clone()))
            .collect();
        Self { terms }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coefficients(|_, a| a.clone() * c.clone())
    }

    /// Dirichlet convolution: `(fg)_m = sum_{d | m} f_d g_{m/d}`.
    ///
    /// Fails when `max_index(f) * max_index(g)` does not fit in a `u64`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let (a, b) = (self.max_index(), other.max_index());
        let top = a.checked_mul(b).ok_or_else(|| {
            Error::Overflow(format!(
                "product index {a} * {b} exceeds u64; truncate the operands first"
            ))
        })?;
        let pairs = self.len() * other.len();
        if top <= DENSE_LIMIT && top as usize <= 8 * pairs {
            return Ok(self.multiply_dense(other, top as usize));
        }
        let mut products: Vec<(u64, C)> = Vec::with_capacity(self.len() * other.len());
        for (&m, x) in &self.terms {
            for (&n, y) in &other.terms {
                products.push((m * n, x.clone() * y.clone()));
            }
        }
        // Stable sort: equal indices are summed in a fixed order.
        products.sort_by_key(|&(k, _)| k);
        let mut terms = BTreeMap::new();
        let mut iter = products.into_iter().peekable();
        while let Some((k, mut acc)) = iter.next() {
            while let Some((_, c)) = iter.next_if(|(j, _)| *j == k) {
                acc = acc + c;
            }
            if !acc.is_zero() {
                terms.insert(k, acc);
            }
        }
        Ok(Self { terms })
    }

    // Accumulates in the same order as the sorted path.
    fn multiply_dense(&self, other: &Self, top: usize) -> Self {
        let mut acc: Vec<Option<C>> = vec![None; top + 1];
        for (&m, x) in &self.terms {
            for (&n, y) in &other.terms {
                let slot = &mut acc[(m * n) as usize];
                let term = x.clone() * y.clone();
                *slot = Some(match slot.take() {
                    Some(prev) => prev + term,
                    None => term,
                });
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter_map(|(k, c)| c.filter(|c| !c.is_zero()).map(|c| (k as u64, c)))
            .collect();
        Self { terms }
    }

    /// `f^k` by repeated squaring; `f^0 = 1^{-s}`.
    pub fn power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let top = self.max_index();
        top.checked_pow(k).ok_or_else(|| {
            Error::Overflow(format!(
                "max index {top}^{k} exceeds u64; truncate the series first"
            ))
        })?;
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = result.multiply(&base)?;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.multiply(&base)?;
        }
        Ok(result)
    }

    /// Partial sum `S_N f`: keep indices `n <= N`.
    pub fn partial_sum(&self, n: u64) -> Self {
        let terms = self
            .terms
            .range(..=n)
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        Self { terms }
    }

    /// Bohr's `d`-th section: keep indices whose prime factors are all `<= p_d`.
    pub fn abschnitt(&self, d: usize) -> Result<Self> {
        let pd = nth_prime(d)?;
        let mut terms = BTreeMap::new();
        for (&n, c) in &self.terms {
            if n <= pd || largest_prime_factor(n)? <= pd {
                terms.insert(n, c.clone());
            }
        }
        Ok(Self { terms })
    }

    /// `sum |a_n|^2` in the coefficient ring.
    pub fn sum_of_squares(&self) -> <C as Norm2>::Output
    where
        C: Norm2,
    {
        self.terms
            .values()
            .fold(<C as Norm2>::Output::zero(), |acc, c| acc + c.norm2())
    }
}

/// `|c|^2` in the ring the coefficient lives over.
pub trait Norm2 {
    type Output: Zero + Add<Output = Self::Output> + Clone;
    fn norm2(&self) -> Self::Output;
}

impl Norm2 for Complex64 {
    type Output = f64;
    fn norm2(&self) -> f64 {
        self.norm_sqr()
    }
}

impl Norm2 for ExactCoefficient {
    type Output = BigRational;
    fn norm2(&self) -> BigRational {
        self.norm_sqr()
    }
}

impl<C: Coefficient> Add for &DirichletPolynomial<C> {
    type Output = DirichletPolynomial<C>;
    fn add(self, rhs: Self) -> DirichletPolynomial<C> {
        let mut terms = self.terms.clone();
        for (&n, c) in &rhs.terms {
            let sum = match terms.remove(&n) {
                Some(prev) => prev + c.clone(),
                None => c.clone(),
            };
            if !sum.is_zero() {
                terms.insert(n, sum);
            }
        }
        DirichletPolynomial { terms }
    }
}

impl<C: Coefficient> Sub for &DirichletPolynomial<C> {
    type Output = DirichletPolynomial<C>;
    fn sub(self, rhs: Self) -> DirichletPolynomial<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Neg for &DirichletPolynomial<C> {
    type Output = DirichletPolynomial<C>;
    fn neg(self) -> DirichletPolynomial<C> {
        self.map_coefficients(|_, c| -c.clone())
    }
}

impl DirichletPolynomial<Complex64> {
    /// Real-coefficient convenience constructor.
    pub fn from_real<I: IntoIterator<Item = (u64, f64)>>(terms: I) -> Result<Self> {
        Self::from_terms(terms.into_iter().map(|(n, a)| (n, Complex64::new(a, 0.0))))
    }

    /// Horizontal translation `f(s + sigma)`: `a_n -> a_n n^{-sigma}`.
    ///
    /// Negative `sigma` is accepted and shifts to the left.
    pub fn translate(&self, sigma: f64) -> Self {
        if sigma == 0.0 {
            return self.clone();
        }
        self.map_coefficients(|n, c| c * (-sigma * (n as f64).ln()).exp())
    }

    /// `sum a_n exp(-s ln n)`.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        self.iter()
            .map(|(n, c)| c * (-s * (n as f64).ln()).exp())
            .sum()
    }

    /// Convert to exact Gaussian-rational coefficients.
    pub fn to_exact(&self) -> Result<ExactPolynomial> {
        let conv = |x: f64| {
            BigRational::from_float(x)
                .ok_or_else(|| Error::InvalidSeries(format!("non-finite coefficient {x}")))
        };
        let terms = self
            .iter()
            .map(|(n, c)| Ok((n, Complex::new(conv(c.re)?, conv(c.im)?))))
            .collect::<Result<Vec<_>>>()?;
        ExactPolynomial::from_terms(terms)
    }
}

impl ExactPolynomial {
    /// Integer-coefficient constructor.
    pub fn from_integers<I: IntoIterator<Item = (u64, i64)>>(terms: I) -> Result<Self> {
        Self::from_terms(terms.into_iter().map(|(n, a)| {
            (
                n,
                Complex::new(
                    BigRational::from_integer(BigInt::from(a)),
                    BigRational::zero(),
                ),
            )
        }))
    }

    /// Round to double precision.
    pub fn to_complex64(&self) -> DirichletPolynomial<Complex64> {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        self.map_coefficients(|_, c| Complex64::new(f(&c.re), f(&c.im)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u64, f64)]) -> DirichletPolynomial {
        DirichletPolynomial::from_real(terms.iter().copied()).unwrap()
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let a = poly(&[(1, 1.0), (2, 0.0), (3, 2.0)]);
        let b = poly(&[(1, 1.0), (3, 2.0)]);
        assert_eq!(a, b);
        assert_eq!(a.max_index(), 3);
        assert_eq!(DirichletPolynomial::<Complex64>::zero().max_index(), 0);
        assert!(DirichletPolynomial::from_real([(0, 1.0)]).is_err());
    }

    #[test]
    fn multiply_examples() {
        let f = poly(&[(2, 1.0), (3, 1.0)]);
        assert_eq!(
            f.multiply(&f).unwrap(),
            poly(&[(4, 1.0), (6, 2.0), (9, 1.0)])
        );
        assert_eq!(f.multiply(&DirichletPolynomial::one()).unwrap(), f);
        let g = poly(&[(1, 1.0), (2, 1.0), (3, 1.0)]);
        assert_eq!(
            g.multiply(&g).unwrap(),
            poly(&[(1, 1.0), (2, 2.0), (3, 2.0), (4, 1.0), (6, 2.0), (9, 1.0)])
        );
        assert!(f.multiply(&DirichletPolynomial::zero()).unwrap().is_zero());
    }

    #[test]
    fn multiply_overflow_is_reported() {
        let big = poly(&[(1 << 40, 1.0)]);
        assert!(matches!(big.multiply(&big), Err(Error::Overflow(_))));
        assert!(matches!(big.power(2), Err(Error::Overflow(_))));
    }

    #[test]
    fn power_examples() {
        assert_eq!(poly(&[(2, 1.0)]).power(3).unwrap(), poly(&[(8, 1.0)]));
        assert_eq!(
            poly(&[(1, 1.0), (2, 1.0)]).power(2).unwrap(),
            poly(&[(1, 1.0), (2, 2.0), (4, 1.0)])
        );
        assert_eq!(
            poly(&[(5, 3.0)]).power(0).unwrap(),
            DirichletPolynomial::one()
        );
        // (1 + x + y)^3 with x = 2^{-s}, y = 3^{-s}: the x*y monomial has
        // multinomial count 3!/(1!1!1!) = 6.
        let cube = poly(&[(1, 1.0), (2, 1.0), (3, 1.0)]).power(3).unwrap();
        let multinomial = (1..=3).product::<u64>();
        assert_eq!(cube.coefficient(6).re, multinomial as f64);
    }

    #[test]
    fn translate_examples() {
        let f = poly(&[(2, 1.0)]);
        assert_eq!(f.translate(1.0), poly(&[(2, 0.5)]));
        assert_eq!(f.translate(0.0), f);
        let g = poly(&[(4, 1.0), (9, 1.0)]).translate(0.5);
        assert!((g.coefficient(4).re - 0.5).abs() < 1e-15);
        assert!((g.coefficient(9).re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn partial_sum_and_abschnitt_examples() {
        let zeta10 = DirichletPolynomial::from_fn(10, |_| Complex64::new(1.0, 0.0));
        assert_eq!(zeta10.partial_sum(3), poly(&[(1, 1.0), (2, 1.0), (3, 1.0)]));
        assert_eq!(zeta10.partial_sum(zeta10.max_index()), zeta10);
        assert!(poly(&[(5, 1.0)]).partial_sum(4).is_zero());

        let sec = zeta10.abschnitt(2).unwrap();
        assert_eq!(sec.indices().collect::<Vec<_>>(), vec![1, 2, 3, 4, 6, 8, 9]);
        assert!(poly(&[(5, 1.0)]).abschnitt(2).unwrap().is_zero());
        assert_eq!(zeta10.abschnitt(4).unwrap(), zeta10);
    }

    #[test]
    fn evaluate_examples() {
        let s = Complex64::new(0.3, 7.0);
        assert_eq!(
            DirichletPolynomial::one().evaluate(s),
            Complex64::new(1.0, 0.0)
        );
        assert!((poly(&[(2, 1.0)]).evaluate(Complex64::new(1.0, 0.0)).re - 0.5).abs() < 1e-15);

        // Exact rational oracle for sum_{n<=100} n^{-2}.
        let exact = (1..=100u64).fold(BigRational::zero(), |acc, n| {
            acc + BigRational::new(BigInt::from(1), BigInt::from(n * n))
        });
        let oracle = exact.to_f64().unwrap();
        assert!((oracle - 1.634983900184892).abs() < 1e-14);
        let zeta100 = DirichletPolynomial::from_fn(100, |_| Complex64::new(1.0, 0.0));
        let v = zeta100.evaluate(Complex64::new(2.0, 0.0));
        assert!((v.re - oracle).abs() < 1e-13 && v.im.abs() < 1e-15);
    }

    #[test]
    fn exact_mode_roundtrip() {
        let f = poly(&[(1, 0.5), (6, -1.25)]);
        let e = f.to_exact().unwrap();
        assert_eq!(e.to_complex64(), f);
        let sq = e.multiply(&e).unwrap();
        assert_eq!(
            sq.coefficient(6).re,
            BigRational::new(BigInt::from(-5), BigInt::from(4))
        );
    }

    #[test]
    fn addition_cancels() {
        let f = poly(&[(1, 1.0), (2, 3.0)]);
        assert!((&f - &f).is_zero());
        assert_eq!(&f + &poly(&[(2, -3.0)]), poly(&[(1, 1.0)]));
    }
}
