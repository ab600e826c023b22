#![allow(dead_code)]

use dirichlet_spaces::algebra::{DirichletPolynomial, ExactPolynomial};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random polynomial with at most `max_terms` terms at indices `<= max_index`.
pub fn random_poly(
    rng: &mut ChaCha8Rng,
    max_terms: usize,
    max_index: u64,
) -> DirichletPolynomial<Complex64> {
    let count = rng.random_range(1..=max_terms);
    let terms: Vec<(u64, Complex64)> = (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_index);
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (n, c)
        })
        .collect();
    // repeated indices are summed by from_terms
    DirichletPolynomial::from_terms(terms).unwrap()
}

pub fn random_integer_poly(
    rng: &mut ChaCha8Rng,
    max_terms: usize,
    max_index: u64,
) -> ExactPolynomial {
    let count = rng.random_range(1..=max_terms);
    let terms: Vec<(u64, i64)> = (0..count)
        .map(|_| (rng.random_range(1..=max_index), rng.random_range(-9..=9)))
        .collect();
    ExactPolynomial::from_integers(terms).unwrap()
}

/// Fixed corpus of nonzero test polynomials.
pub fn corpus(size: usize, seed: u64) -> Vec<DirichletPolynomial<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let f = random_poly(&mut rng, 12, 60);
        if !f.is_zero() {
            out.push(f);
        }
    }
    out
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
