//! Norms of Dirichlet polynomials in `H^p`, `A^p_alpha` and `H^{p,q}_alpha`.
//!
//! * `H^2` is the `l^2` norm of the coefficients.
//! * `H^{2k}` is exact through `||f||_{2k} = ||f^k||_2^{1/k}`.
//! * Other `H^p` norms are Monte Carlo averages of `|Bf|^p` over the polytorus.
//! * Mixed norms integrate `sigma -> ||f_sigma||_p^q` against `mu_alpha`.

mod quadrature;
mod torus;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use statrs::function::gamma::ln_gamma;

use crate::algebra::DirichletPolynomial;
use crate::error::{domain, Error, Result};
use crate::parallel::{mean_and_se, ordered_sums, root_error};

pub use quadrature::{
    adaptive_gauss_kronrod, gauss_laguerre, mu_alpha_integral, LaguerreRule, QuadratureResult,
    QuadratureScheme, QuadratureSpec, ADAPTIVE_UPPER, DEFAULT_NODES, DEFAULT_TOLERANCE,
};
pub(crate) use torus::Torus;

/// An exponent that may be infinite. Serialized as a number or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(x) => Some(x),
            Exponent::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

impl From<f64> for Exponent {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            Exponent::Infinite
        } else {
            Exponent::Finite(x)
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(x) => write!(f, "{x}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinite);
        }
        t.parse::<f64>()
            .map(Exponent::from)
            .map_err(|_| Error::Domain(format!("not an exponent: {s:?}")))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(x) => serializer.serialize_f64(*x),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(x) => Ok(Exponent::from(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Parameters `(p, q, alpha)` of `H^{p,q}_alpha`; `q = inf` is `H^p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub p: f64,
    pub q: Exponent,
    pub alpha: f64,
}

impl SpaceParams {
    pub fn new(p: f64, q: Exponent, alpha: f64) -> Result<Self> {
        let space = Self { p, q, alpha };
        space.validate()?;
        Ok(space)
    }

    pub fn hardy(p: f64) -> Result<Self> {
        Self::new(p, Exponent::Infinite, 0.0)
    }

    pub fn mixed(p: f64, q: f64, alpha: f64) -> Result<Self> {
        Self::new(p, Exponent::Finite(q), alpha)
    }

    /// `A^p_alpha = H^{p,p}_alpha`.
    pub fn bergman(p: f64, alpha: f64) -> Result<Self> {
        Self::mixed(p, p, alpha)
    }

    pub fn is_hardy(&self) -> bool {
        self.q.is_infinite()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0) || !self.p.is_finite() {
            return domain(format!(
                "p must be a finite positive number, got {}",
                self.p
            ));
        }
        if let Exponent::Finite(q) = self.q {
            if !(q > 0.0) || !q.is_finite() {
                return domain(format!("q must be positive or inf, got {q}"));
            }
            if !(self.alpha > -1.0) || !self.alpha.is_finite() {
                return domain(format!("alpha must be > -1, got {}", self.alpha));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    Exact,
    Quadrature,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub method: NormMethod,
    /// Standard error (Monte Carlo) or quadrature error estimate.
    pub error: f64,
    /// Samples or quadrature evaluations used.
    pub n: usize,
}

impl NormEstimate {
    fn exact(value: f64) -> Self {
        Self {
            value,
            method: NormMethod::Exact,
            error: 0.0,
            n: 0,
        }
    }
}

/// How the inner `H^p` norm is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum InnerNorm {
    /// Closed form; only for `p` in `{2, 4, 6, ...}`.
    ExactEven,
    MonteCarlo {
        trials: usize,
        seed: u64,
    },
}

impl InnerNorm {
    /// Exact when `p` is an even integer, Monte Carlo otherwise.
    pub fn auto(p: f64, trials: usize, seed: u64) -> Self {
        if even_half(p).is_some() {
            InnerNorm::ExactEven
        } else {
            InnerNorm::MonteCarlo { trials, seed }
        }
    }
}

/// `k` with `p = 2k` when `p` is an even positive integer.
pub fn even_half(p: f64) -> Option<u32> {
    let k = p / 2.0;
    (k >= 1.0 && k.fract() == 0.0 && k <= u32::MAX as f64).then_some(k as u32)
}

pub fn h2_norm(f: &DirichletPolynomial<Complex64>) -> f64 {
    f.sum_of_squares().sqrt()
}

/// `||f||_{H^{2k}} = ||f^k||_{H^2}^{1/k}`.
pub fn hp_norm_exact_even(f: &DirichletPolynomial<Complex64>, k: u32) -> Result<f64> {
    if k == 0 {
        return domain("k must be >= 1");
    }
    Ok(h2_norm(&f.power(k)?).powf(1.0 / k as f64))
}

fn check_mc(p: f64, trials: usize) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return domain(format!("p must be a finite positive number, got {p}"));
    }
    if trials == 0 {
        return domain("trials must be >= 1");
    }
    Ok(())
}

/// Monte Carlo `H^p` norm: `(E |Bf(z)|^p)^{1/p}` over the polytorus of the
/// primes dividing the support.
pub fn hp_norm_mc(
    f: &DirichletPolynomial<Complex64>,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<NormEstimate> {
    check_mc(p, trials)?;
    if f.is_zero() {
        return Ok(NormEstimate {
            value: 0.0,
            method: NormMethod::MonteCarlo,
            error: 0.0,
            n: trials,
        });
    }
    let torus = Torus::new(f)?;
    let sample = |i: usize| {
        let (mut a, mut b) = (Vec::new(), Vec::with_capacity(torus.len()));
        torus.modulus(seed, i, &mut a, &mut b).powf(p)
    };
    let shift = sample(0);
    let sums = ordered_sums(trials, 2, |i, acc| {
        let d = sample(i) - shift;
        acc[0] += d;
        acc[1] += d * d;
    });
    let (mean, se) = mean_and_se(shift, sums[0], sums[1], trials);
    Ok(NormEstimate {
        value: mean.powf(1.0 / p),
        method: NormMethod::MonteCarlo,
        error: root_error(mean, se, p),
        n: trials,
    })
}

/// `H^p` norm by the requested inner method.
pub fn hp_norm(
    f: &DirichletPolynomial<Complex64>,
    p: f64,
    inner: InnerNorm,
) -> Result<NormEstimate> {
    match inner {
        InnerNorm::ExactEven => match even_half(p) {
            Some(k) => Ok(NormEstimate::exact(hp_norm_exact_even(f, k)?)),
            None => Err(Error::InnerMethod(format!(
                "p = {p} has no closed form; use Monte Carlo"
            ))),
        },
        InnerNorm::MonteCarlo { trials, seed } => hp_norm_mc(f, p, trials, seed),
    }
}

/// `(sum_m |b_m|^2 m^{-2 sigma})` over the terms of `h`, as `(ln m, |b_m|^2)`.
fn log_squares(h: &DirichletPolynomial<Complex64>) -> Vec<(f64, f64)> {
    h.iter()
        .map(|(m, b)| ((m as f64).ln(), b.norm_sqr()))
        .collect()
}

fn weighted_square_sum(terms: &[(f64, f64)], sigma: f64) -> f64 {
    terms
        .iter()
        .map(|&(ln_m, w)| w * (-2.0 * sigma * ln_m).exp())
        .sum()
}

/// Norm of `f` in `H^{p,q}_alpha`. For `q = inf` this is the `H^p` norm.
///
/// With an exact inner norm `||f_sigma||_{2k}^{2k} = sum |b_m|^2 m^{-2 sigma}`
/// where `b` are the coefficients of `f^k`. With a Monte Carlo inner norm the
/// same torus samples are reused at every node of the `spec.nodes`-point
/// Laguerre rule.
pub fn mixed_norm(
    f: &DirichletPolynomial<Complex64>,
    space: &SpaceParams,
    spec: &QuadratureSpec,
    inner: InnerNorm,
) -> Result<NormEstimate> {
    space.validate()?;
    let q = match space.q {
        Exponent::Infinite => return hp_norm(f, space.p, inner),
        Exponent::Finite(q) => q,
    };
    spec.validate()?;
    if f.is_zero() {
        return Ok(NormEstimate::exact(0.0));
    }
    match inner {
        InnerNorm::ExactEven => {
            let k = even_half(space.p).ok_or_else(|| {
                Error::InnerMethod(format!(
                    "p = {} has no closed form; use Monte Carlo",
                    space.p
                ))
            })?;
            let terms = log_squares(&f.power(k)?);
            let r = q / (2.0 * k as f64);
            let res = mu_alpha_integral(
                |s| weighted_square_sum(&terms, s).powf(r),
                space.alpha,
                spec,
            )?;
            Ok(NormEstimate {
                value: res.value.powf(1.0 / q),
                method: NormMethod::Quadrature,
                error: root_error(res.value, res.error, q),
                n: res.evaluations,
            })
        }
        InnerNorm::MonteCarlo { trials, seed } => {
            mixed_norm_mc(f, space.p, q, space.alpha, spec, trials, seed)
        }
    }
}

fn mixed_norm_mc(
    f: &DirichletPolynomial<Complex64>,
    p: f64,
    q: f64,
    alpha: f64,
    spec: &QuadratureSpec,
    trials: usize,
    seed: u64,
) -> Result<NormEstimate> {
    check_mc(p, trials)?;
    let torus = Torus::new(f)?;
    let rule = gauss_laguerre(spec.nodes, alpha)?;
    let nodes = rule.len();
    let decay: Vec<Vec<f64>> = rule
        .sigma
        .iter()
        .map(|&s| torus.log_indices().map(|l| (-s * l).exp()).collect())
        .collect();
    let sample = |i: usize, y: &mut [f64]| {
        let (mut a, mut b) = (Vec::new(), Vec::with_capacity(torus.len()));
        torus.phased_terms(seed, i, &mut a, &mut b);
        for (yj, dj) in y.iter_mut().zip(&decay) {
            let v: Complex64 = b.iter().zip(dj).map(|(c, d)| c * d).sum();
            *yj = v.norm().powf(p);
        }
    };

    let mut pilot = vec![0.0; nodes];
    sample(0, &mut pilot);
    let sums = ordered_sums(trials, nodes, |i, acc| {
        let mut y = vec![0.0; nodes];
        sample(i, &mut y);
        for ((a, yj), pj) in acc.iter_mut().zip(&y).zip(&pilot) {
            *a += yj - pj;
        }
    });
    let means: Vec<f64> = pilot
        .iter()
        .zip(&sums)
        .map(|(s, d)| s + d / trials as f64)
        .collect();
    let r = q / p;
    let integral: f64 = rule
        .weights
        .iter()
        .zip(&means)
        .map(|(w, m)| w * m.powf(r))
        .sum();
    if !integral.is_finite() {
        return Err(Error::NonFinite {
            sigma: f64::NAN,
            value: integral,
        });
    }

    // Linearize I = sum_j w_j m_j^{q/p} around the sample means.
    let grad: Vec<f64> = rule
        .weights
        .iter()
        .zip(&means)
        .map(|(w, &m)| {
            if m > 0.0 {
                w * r * m.powf(r - 1.0)
            } else {
                0.0
            }
        })
        .collect();
    let linear = |y: &[f64]| -> f64 { grad.iter().zip(y).map(|(g, v)| g * v).sum() };
    let shift = linear(&pilot);
    let lsums = ordered_sums(trials, 2, |i, acc| {
        let mut y = vec![0.0; nodes];
        sample(i, &mut y);
        let d = linear(&y) - shift;
        acc[0] += d;
        acc[1] += d * d;
    });
    let (_, se) = mean_and_se(shift, lsums[0], lsums[1], trials);
    Ok(NormEstimate {
        value: integral.powf(1.0 / q),
        method: NormMethod::MonteCarlo,
        error: root_error(integral, se, q),
        n: trials,
    })
}

/// Evaluates `int (sum_{n <= N} w_n n^{-2 sigma})^{q/2} d mu_alpha` for each
/// truncation `N`, where `w_n` are the squared moduli in `squares` (sorted by
/// `n`, `w_n >= 0`).
pub fn membership_functional_from_squares(
    squares: &[(u64, f64)],
    q: f64,
    alpha: f64,
    spec: &QuadratureSpec,
    truncations: &[u64],
) -> Result<Vec<f64>> {
    if !(q > 0.0) || !q.is_finite() {
        return domain(format!("q must be a finite positive number, got {q}"));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("alpha must be > -1, got {alpha}"));
    }
    spec.validate()?;
    if truncations.windows(2).any(|w| w[0] > w[1]) {
        return domain("truncations must be ascending");
    }
    if squares.windows(2).any(|w| w[0].0 >= w[1].0) {
        return domain("indices must be strictly increasing");
    }
    let logs: Vec<(f64, f64)> = squares.iter().map(|&(n, w)| ((n as f64).ln(), w)).collect();
    let r = q / 2.0;
    let adaptive = |terms: &[(f64, f64)]| -> Result<f64> {
        Ok(mu_alpha_integral(
            |s| weighted_square_sum(terms, s).powf(r),
            alpha,
            &QuadratureSpec {
                scheme: QuadratureScheme::AdaptiveComposite,
                ..*spec
            },
        )?
        .value)
    };

    if spec.scheme == QuadratureScheme::AdaptiveComposite {
        return truncations
            .iter()
            .map(|&n| adaptive(&logs[..squares.partition_point(|t| t.0 <= n)]))
            .collect();
    }

    // Sweep once, keeping S(sigma_j) at the nodes of both Laguerre rules.
    let coarse = gauss_laguerre(spec.nodes, alpha)?;
    let fine = gauss_laguerre(2 * spec.nodes, alpha)?;
    let mut s_coarse = vec![0.0; coarse.len()];
    let mut s_fine = vec![0.0; fine.len()];
    let mut next = 0;
    let mut out = Vec::with_capacity(truncations.len());
    for &n in truncations {
        let end = squares.partition_point(|t| t.0 <= n);
        for &(ln_m, w) in &logs[next..end] {
            for (acc, s) in s_coarse.iter_mut().zip(&coarse.sigma) {
                *acc += w * (-2.0 * s * ln_m).exp();
            }
            for (acc, s) in s_fine.iter_mut().zip(&fine.sigma) {
                *acc += w * (-2.0 * s * ln_m).exp();
            }
        }
        next = end;
        let apply = |rule: &LaguerreRule, s: &[f64]| -> f64 {
            rule.weights.iter().zip(s).map(|(w, v)| w * v.powf(r)).sum()
        };
        let (ic, i_f) = (apply(&coarse, &s_coarse), apply(&fine, &s_fine));
        if (ic - i_f).abs() <= spec.tolerance * i_f.abs() {
            out.push(i_f);
        } else {
            out.push(adaptive(&logs[..end])?);
        }
    }
    Ok(out)
}

/// `int (sum_{n <= N} |a_n|^2 n^{-2 sigma})^{q/2} d mu_alpha` for each `N`.
/// Bounded values are evidence of membership in `H^{2,q}_alpha`.
pub fn h2q_membership_functional(
    f: &DirichletPolynomial<Complex64>,
    q: f64,
    alpha: f64,
    spec: &QuadratureSpec,
    truncations: &[u64],
) -> Result<Vec<f64>> {
    let squares: Vec<(u64, f64)> = f.iter().map(|(n, c)| (n, c.norm_sqr())).collect();
    membership_functional_from_squares(&squares, q, alpha, spec, truncations)
}

/// The factor `(x / (2x - 1))^{1/p + (alpha+1)/q}`, `x = Re s`, in the
/// point-evaluation estimate `|f(s)| <= C B(s) ||f||`. For `q = inf` the
/// exponent is `1/p`.
pub fn point_eval_bound(space: &SpaceParams, s: Complex64) -> Result<f64> {
    space.validate()?;
    let x = s.re;
    if !(x > 0.5) {
        return domain(format!("Re s must exceed 1/2, got {x}"));
    }
    let exponent = 1.0 / space.p
        + match space.q {
            Exponent::Finite(q) => (space.alpha + 1.0) / q,
            Exponent::Infinite => 0.0,
        };
    Ok((x / (2.0 * x - 1.0)).powf(exponent))
}

/// `(Gamma(alpha+2) / 2^{alpha+1})^{1/q} (kappa sigma)^{-(alpha+1)/q} e^{2 kappa sigma / q}`,
/// so that `||f_sigma||_{H^p} <= bound * ||f||_{H^{p,q}_alpha}`. For `q = inf`
/// the translation is a contraction of `H^p` and the bound is 1.
pub fn mean_growth_bound(space: &SpaceParams, sigma: f64, kappa: f64) -> Result<f64> {
    space.validate()?;
    if !(sigma > 0.0) || !sigma.is_finite() {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    if !(kappa > 0.0 && kappa <= 1.0) {
        return domain(format!("kappa must lie in (0, 1], got {kappa}"));
    }
    let q = match space.q {
        Exponent::Infinite => return Ok(1.0),
        Exponent::Finite(q) => q,
    };
    let a1 = space.alpha + 1.0;
    let log = (ln_gamma(a1 + 1.0) - a1 * std::f64::consts::LN_2) / q
        - a1 / q * (kappa * sigma).ln()
        + 2.0 * kappa * sigma / q;
    Ok(log.exp())
}
