//! Sampling `|Bf(z)|` for `z` uniform on the finite polytorus spanned by the
//! primes that divide the support of `f`.
//!
//! Trial `i` draws its angles from ChaCha8 keyed by `seed` on stream `i`, so a
//! trial's sample does not depend on which thread evaluates it or in what order.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::primes::factor;
use crate::algebra::DirichletPolynomial;
use crate::error::Result;

struct Term {
    coef: Complex64,
    ln_n: f64,
    exps: Vec<(usize, u32)>,
}

pub(crate) struct Torus {
    primes: Vec<u64>,
    terms: Vec<Term>,
}

impl Torus {
    pub(crate) fn new(f: &DirichletPolynomial<Complex64>) -> Result<Self> {
        let mut factored = Vec::with_capacity(f.len());
        let mut primes = BTreeMap::new();
        for (n, c) in f.iter() {
            let fac = factor(n)?;
            for &(p, _) in &fac {
                primes.insert(p, 0usize);
            }
            factored.push((n, *c, fac));
        }
        for (slot, dim) in primes.values_mut().zip(0..) {
            *slot = dim;
        }
        let terms = factored
            .into_iter()
            .map(|(n, coef, fac)| Term {
                coef,
                ln_n: (n as f64).ln(),
                exps: fac.into_iter().map(|(p, e)| (primes[&p], e)).collect(),
            })
            .collect();
        Ok(Self {
            primes: primes.into_keys().collect(),
            terms,
        })
    }

    pub(crate) fn dimension(&self) -> usize {
        self.primes.len()
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn log_indices(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.ln_n)
    }

    /// `a_n z^{nu(n)}` for each term at the sampled point of trial `trial`.
    pub(crate) fn phased_terms(
        &self,
        seed: u64,
        trial: usize,
        angles: &mut Vec<f64>,
        out: &mut Vec<Complex64>,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        angles.clear();
        angles.extend((0..self.dimension()).map(|_| TAU * rng.random::<f64>()));
        out.clear();
        out.extend(self.terms.iter().map(|t| {
            let phase: f64 = t.exps.iter().map(|&(j, e)| e as f64 * angles[j]).sum();
            t.coef * Complex64::cis(phase)
        }));
    }

    /// `|Bf(z)|` at the sampled point of trial `trial`.
    pub(crate) fn modulus(
        &self,
        seed: u64,
        trial: usize,
        angles: &mut Vec<f64>,
        buf: &mut Vec<Complex64>,
    ) -> f64 {
        self.phased_terms(seed, trial, angles, buf);
        buf.iter().sum::<Complex64>().norm()
    }
}
