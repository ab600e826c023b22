//! Series that show the inclusion boundaries are sharp.
//!
//! `f1` and `f2` are lacunary, supported on `2^{2^n}`, and their norms are
//! governed by [`lacunary_proxy`]. `f3` is a truncated Euler product
//! `prod_{j<=k} (1 - p_j^{-s})^{-eta}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::decide::inclusion_decide;
use crate::algebra::primes::first_primes;
use crate::algebra::DirichletPolynomial;
use crate::error::{domain, Error, Result};

/// Largest `n` with `2^{2^n}` representable in 64 bits.
pub const MAX_LACUNARY_LEVEL: u32 = 5;

fn lacunary_index(n: u32) -> Result<u64> {
    if n > MAX_LACUNARY_LEVEL {
        return Err(Error::Overflow(format!(
            "2^(2^{n}) does not fit in 64 bits; the maximum feasible level is {MAX_LACUNARY_LEVEL}"
        )));
    }
    Ok(1u64 << (1u64 << n))
}

fn lacunary(levels: impl Iterator<Item = (u32, f64)>) -> Result<DirichletPolynomial<Complex64>> {
    let terms = levels
        .map(|(n, a)| Ok((lacunary_index(n)?, Complex64::new(a, 0.0))))
        .collect::<Result<Vec<_>>>()?;
    DirichletPolynomial::from_terms(terms)
}

fn f1_levels(beta: f64, v: f64, level: u32) -> impl Iterator<Item = (u32, f64)> {
    (0..=level).map(move |n| (n, 2f64.powf((beta + 1.0) * n as f64 / v)))
}

fn f2_levels(alpha: f64, q: f64, v: f64, level: u32) -> impl Iterator<Item = (u32, f64)> {
    (1..=level).map(move |n| {
        (
            n,
            2f64.powf((alpha + 1.0) * n as f64 / q) * (n as f64).powf(-1.0 / v),
        )
    })
}

fn check_exponent_weight(x: f64, w: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("exponent must be positive, got {x}"));
    }
    if !(w > -1.0) || !w.is_finite() {
        return domain(format!("weight must exceed -1, got {w}"));
    }
    Ok(())
}

/// `sum_{n=0}^{L} 2^{(beta+1) n / v} 2^{-2^n s}`.
pub fn witness_f1(beta: f64, v: f64, level: u32) -> Result<DirichletPolynomial<Complex64>> {
    check_exponent_weight(v, beta)?;
    if level == 0 {
        return domain("level must be >= 1");
    }
    lacunary(f1_levels(beta, v, level))
}

/// `sum_{n=1}^{L} 2^{(alpha+1) n / q} n^{-1/v} 2^{-2^n s}`.
pub fn witness_f2(
    alpha: f64,
    q: f64,
    v: f64,
    level: u32,
) -> Result<DirichletPolynomial<Complex64>> {
    check_exponent_weight(q, alpha)?;
    check_exponent_weight(v, 0.0)?;
    if level == 0 {
        return domain("level must be >= 1");
    }
    lacunary(f2_levels(alpha, q, v, level))
}

/// `prod_{j<=k} (1 - p_j^{-s})^{-eta}` truncated to indices `n <= bound`.
/// The coefficient at `prod p_j^{e_j}` is `prod C(e_j + eta - 1, e_j)`.
pub fn witness_f3(k: usize, eta: f64, bound: u64) -> Result<DirichletPolynomial<Complex64>> {
    if k == 0 {
        return domain("k must be >= 1");
    }
    if bound == 0 {
        return domain("truncation bound must be >= 1");
    }
    if !eta.is_finite() {
        return domain("eta must be finite");
    }
    let primes = first_primes(k)?;
    let mut terms = Vec::new();
    smooth_terms(&primes, bound, 1, 1.0, eta, &mut terms);
    DirichletPolynomial::from_terms(terms.into_iter().map(|(n, c)| (n, Complex64::new(c, 0.0))))
}

fn smooth_terms(
    primes: &[u64],
    bound: u64,
    n: u64,
    coeff: f64,
    eta: f64,
    out: &mut Vec<(u64, f64)>,
) {
    let Some((&p, rest)) = primes.split_first() else {
        out.push((n, coeff));
        return;
    };
    let (mut m, mut c, mut e) = (n, coeff, 0u32);
    loop {
        smooth_terms(rest, bound, m, c, eta, out);
        match m.checked_mul(p) {
            Some(next) if next <= bound => {
                e += 1;
                c *= (eta + e as f64 - 1.0) / e as f64;
                m = next;
            }
            _ => break,
        }
    }
}

/// `n` with `index = 2^{2^n}`, if any.
fn lacunary_level(index: u64) -> Option<u32> {
    if !index.is_power_of_two() {
        return None;
    }
    let e = index.trailing_zeros();
    e.is_power_of_two().then(|| e.trailing_zeros())
}

/// `sum_n 2^{-(alpha+1) n} |a_n|^q` over `(n, |a_n|)` pairs.
pub fn lacunary_proxy_levels(
    levels: impl IntoIterator<Item = (u32, f64)>,
    q: f64,
    alpha: f64,
) -> Result<f64> {
    check_exponent_weight(q, alpha)?;
    Ok(levels
        .into_iter()
        .map(|(n, a)| (-(alpha + 1.0) * n as f64 * std::f64::consts::LN_2).exp() * a.abs().powf(q))
        .sum())
}

/// `sum_n 2^{-(alpha+1) n} |a_n|^q` for `f = sum a_n 2^{-2^n s}`; comparable
/// to `||f||^q` in `H^{p,q}_alpha` for every `p`.
pub fn lacunary_proxy(f: &DirichletPolynomial<Complex64>, q: f64, alpha: f64) -> Result<f64> {
    let levels = f
        .iter()
        .map(|(n, a)| {
            lacunary_level(n)
                .map(|level| (level, a.norm()))
                .ok_or_else(|| {
                    Error::InvalidSeries(format!("index {n} is not of the form 2^(2^n)"))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    lacunary_proxy_levels(levels, q, alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessFamily {
    F1 { beta: f64, v: f64 },
    F2 { alpha: f64, q: f64, v: f64 },
    F3 { k: usize, eta: f64 },
}

impl WitnessFamily {
    /// Level `L` of the family; for `f3` the level is the index bound.
    pub fn truncation(&self, level: u64) -> Result<DirichletPolynomial<Complex64>> {
        let lacunary_level =
            || u32::try_from(level).map_err(|_| Error::Overflow(format!("level {level}")));
        match *self {
            WitnessFamily::F1 { beta, v } => witness_f1(beta, v, lacunary_level()?),
            WitnessFamily::F2 { alpha, q, v } => witness_f2(alpha, q, v, lacunary_level()?),
            WitnessFamily::F3 { k, eta } => witness_f3(k, eta, level),
        }
    }

    /// `(n, |a_n|)` for the lacunary families, at any level.
    pub fn levels(&self, level: u32) -> Result<Vec<(u32, f64)>> {
        match *self {
            WitnessFamily::F1 { beta, v } => Ok(f1_levels(beta, v, level).collect()),
            WitnessFamily::F2 { alpha, q, v } => Ok(f2_levels(alpha, q, v, level).collect()),
            WitnessFamily::F3 { .. } => domain("f3 is not lacunary"),
        }
    }
}

/// The family that certifies a failed inclusion `H^{p,q}_alpha ⊂ H^{u,v}_beta`:
/// `f3` when `p < u`, `f1` when `(alpha+1)/q > (beta+1)/v`, `f2` on the
/// equality line with `q > v`. `None` when the inclusion holds.
pub fn witness_for(
    p: f64,
    q: f64,
    alpha: f64,
    u: f64,
    v: f64,
    beta: f64,
) -> Result<Option<WitnessFamily>> {
    use super::decide::Rule;
    let verdict = inclusion_decide(p, q, alpha, u, v, beta)?;
    if verdict.included {
        return Ok(None);
    }
    if p < u {
        let eta = 0.5 * (1.0 / u + 1.0 / p);
        let k = (u * (beta + 1.0) / ((u * eta - 1.0) * v)).floor() as usize + 1;
        return Ok(Some(WitnessFamily::F3 { k, eta }));
    }
    Ok(Some(match verdict.rule {
        Rule::Boundary => WitnessFamily::F2 { alpha, q, v },
        _ => WitnessFamily::F1 { beta, v },
    }))
}

fn euler_factor_sum(prime: u64, shape: f64, sigma: f64) -> f64 {
    // sum_e C(e + shape - 1, e)^2 x^e with x = p^{-2 sigma}
    let x = (-2.0 * sigma * (prime as f64).ln()).exp();
    let (mut coeff, mut power, mut total) = (1.0f64, 1.0f64, 1.0f64);
    let mut prev_term = 1.0;
    for e in 1..1_000_000u32 {
        coeff *= (shape + e as f64 - 1.0) / e as f64;
        power *= x;
        let term = coeff * coeff * power;
        total += term;
        if term < prev_term && term < 1e-17 * total {
            break;
        }
        prev_term = term;
    }
    total
}

/// `||(f3)_sigma||_{H^{2m}}^{2m}` for the full Euler product, using
/// `f3(eta)^m = f3(m eta)` and the factorization over primes.
pub fn f3_even_norm_power(k: usize, eta: f64, m: u32, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    if m == 0 || k == 0 {
        return domain("k and m must be >= 1");
    }
    let shape = m as f64 * eta;
    Ok(first_primes(k)?
        .into_iter()
        .map(|p| euler_factor_sum(p, shape, sigma))
        .product())
}

/// `prod_{j<=k} (1 - p_j^{-2 sigma})^{1 - 2 m eta}`.
pub fn forelli_rudin_reference(k: usize, eta: f64, m: u32, sigma: f64) -> Result<f64> {
    Ok(first_primes(k)?
        .into_iter()
        .map(|p| (1.0 - (p as f64).powf(-2.0 * sigma)).powf(1.0 - 2.0 * m as f64 * eta))
        .product())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForelliRudinProfile {
    pub sigmas: Vec<f64>,
    pub norms: Vec<f64>,
    pub ratios: Vec<f64>,
    /// `max ratio / min ratio`.
    pub band: f64,
}

/// Ratios of `||(f3)_sigma||_{2m}^{2m}` to the Forelli-Rudin profile.
pub fn forelli_rudin_profile(
    k: usize,
    eta: f64,
    m: u32,
    sigmas: &[f64],
) -> Result<ForelliRudinProfile> {
    let mut norms = Vec::with_capacity(sigmas.len());
    let mut ratios = Vec::with_capacity(sigmas.len());
    for &s in sigmas {
        let n = f3_even_norm_power(k, eta, m, s)?;
        ratios.push(n / forelli_rudin_reference(k, eta, m, s)?);
        norms.push(n);
    }
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    Ok(ForelliRudinProfile {
        sigmas: sigmas.to_vec(),
        norms,
        ratios,
        band: hi / lo,
    })
}
