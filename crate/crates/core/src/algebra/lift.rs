use std::collections::BTreeMap;

use super::multi_index::{factorize, MultiIndex};
use super::polynomial::{Coefficient, DirichletPolynomial};
use crate::error::Result;

/// A polynomial in the variables `z_1, z_2, ...` (one per prime), the image of
/// a Dirichlet polynomial under the Bohr lift `n^{-s} -> z^{nu(n)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedPolynomial<C> {
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Coefficient> LiftedPolynomial<C> {
    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, C)>>(terms: I) -> Self {
        let mut map: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (nu, c) in terms {
            let sum = match map.remove(&nu) {
                Some(prev) => prev + c,
                None => c,
            };
            map.insert(nu, sum);
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, nu: &MultiIndex) -> Option<&C> {
        self.terms.get(nu)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C)> + '_ {
        self.terms.iter()
    }

    /// Product of polynomials in `z`; exponents add.
    pub fn multiply(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|(a, x)| {
            other
                .terms
                .iter()
                .map(move |(b, y)| (a.add(b), x.clone() * y.clone()))
        }))
    }

    /// Undo the lift: `z^nu -> (prod p_j^{nu_j})^{-s}`.
    pub fn to_dirichlet(&self) -> Result<DirichletPolynomial<C>> {
        let terms = self
            .terms
            .iter()
            .map(|(nu, c)| Ok((nu.reconstruct()?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        DirichletPolynomial::from_terms(terms)
    }
}

/// Bohr lift: re-index `a_n` by the exponent vector of `n`.
pub fn bohr_lift<C: Coefficient>(f: &DirichletPolynomial<C>) -> Result<LiftedPolynomial<C>> {
    let terms = f
        .iter()
        .map(|(n, c)| Ok((factorize(n)?, c.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(LiftedPolynomial::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn lift_examples() {
        let three = DirichletPolynomial::monomial(1, c(3.0));
        let lifted = bohr_lift(&three).unwrap();
        assert_eq!(lifted.get(&MultiIndex::zero()), Some(&c(3.0)));
        assert_eq!(lifted.len(), 1);

        let f = DirichletPolynomial::from_real([(2, 1.0), (6, 1.0)]).unwrap();
        let lifted = bohr_lift(&f).unwrap();
        assert_eq!(lifted.get(&MultiIndex::new(vec![1])), Some(&c(1.0)));
        assert_eq!(lifted.get(&MultiIndex::new(vec![1, 1])), Some(&c(1.0)));

        let z4 = DirichletPolynomial::from_fn(4, |_| c(1.0));
        let lifted = bohr_lift(&z4).unwrap();
        let keys: Vec<_> = lifted.iter().map(|(k, _)| k.clone()).collect();
        for nu in [vec![], vec![1], vec![0, 1], vec![2]] {
            assert!(keys.contains(&MultiIndex::new(nu)));
        }
        assert_eq!(lifted.len(), 4);
        assert_eq!(lifted.to_dirichlet().unwrap(), z4);
    }
}
