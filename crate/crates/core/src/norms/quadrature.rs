//! Integration against the probability measure
//! `d mu_alpha(sigma) = 2^{alpha+1} / Gamma(alpha+1) sigma^alpha e^{-2 sigma} d sigma`.
//!
//! With `t = 2 sigma` the weight becomes `t^alpha e^{-t} / Gamma(alpha+1)`, so
//! generalized Gauss-Laguerre nodes apply directly. Weights are normalized to
//! sum to one: they are the squared first components of the eigenvectors of
//! the Laguerre Jacobi matrix (Golub-Welsch), which removes `Gamma(alpha+1)`
//! from the computation altogether.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};

/// Default Gauss-Laguerre node count.
pub const DEFAULT_NODES: usize = 64;
/// Default relative tolerance for quadrature.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Upper end of the adaptive integration range in `sigma`.
pub const ADAPTIVE_UPPER: f64 = 40.0;

const MAX_SUBINTERVALS: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureScheme {
    /// Gauss-Laguerre with parameter alpha; falls back to the adaptive rule
    /// when `nodes` and `2 * nodes` disagree by more than the tolerance.
    GaussLaguerre,
    /// Adaptive Gauss-Kronrod on `(0, 40]`.
    AdaptiveComposite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub scheme: QuadratureScheme,
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_NODES,
            scheme: QuadratureScheme::GaussLaguerre,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl QuadratureSpec {
    pub fn adaptive(tolerance: f64) -> Self {
        Self {
            scheme: QuadratureScheme::AdaptiveComposite,
            tolerance,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return domain("quadrature node count must be >= 1");
        }
        if !(self.tolerance > 0.0) {
            return domain("quadrature tolerance must be > 0");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
    /// Scheme that produced `value` (the adaptive rule after a fallback).
    pub scheme: QuadratureScheme,
}

/// Nodes in `sigma` and normalized weights for `mu_alpha`.
#[derive(Clone, Debug)]
pub struct LaguerreRule {
    pub sigma: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LaguerreRule {
    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }
}

type RuleCache = HashMap<(usize, u64), Arc<LaguerreRule>>;

/// The `n`-point rule for `mu_alpha`, cached per `(n, alpha)`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Arc<LaguerreRule>> {
    if n == 0 {
        return domain("node count must be >= 1");
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("alpha must be > -1, got {alpha}"));
    }
    static CACHE: OnceLock<Mutex<RuleCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (n, alpha.to_bits());
    if let Some(rule) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(golub_welsch(n, alpha));
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, rule.clone());
    Ok(rule)
}

fn golub_welsch(n: usize, alpha: f64) -> LaguerreRule {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jacobi[(i, i)] = 2.0 * i as f64 + alpha + 1.0;
        if i > 0 {
            let b = (i as f64 * (i as f64 + alpha)).sqrt();
            jacobi[(i, i - 1)] = b;
            jacobi[(i - 1, i)] = b;
        }
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i] / 2.0, eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    LaguerreRule {
        sigma: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

fn checked(sigma: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { sigma, value })
    }
}

fn apply_rule(rule: &LaguerreRule, g: &impl Fn(f64) -> f64) -> Result<f64> {
    let mut acc = 0.0;
    for (&s, &w) in rule.sigma.iter().zip(&rule.weights) {
        acc += w * checked(s, g(s))?;
    }
    Ok(acc)
}

/// `int_0^inf g(sigma) d mu_alpha(sigma)`.
pub fn mu_alpha_integral(
    g: impl Fn(f64) -> f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    spec.validate()?;
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("alpha must be > -1, got {alpha}"));
    }
    match spec.scheme {
        QuadratureScheme::AdaptiveComposite => adaptive_mu_alpha(&g, alpha, spec.tolerance),
        QuadratureScheme::GaussLaguerre => {
            let coarse = apply_rule(&*gauss_laguerre(spec.nodes, alpha)?, &g)?;
            let fine = apply_rule(&*gauss_laguerre(2 * spec.nodes, alpha)?, &g)?;
            let gap = (coarse - fine).abs();
            if gap <= spec.tolerance * fine.abs() {
                return Ok(QuadratureResult {
                    value: fine,
                    error: gap,
                    evaluations: 3 * spec.nodes,
                    scheme: QuadratureScheme::GaussLaguerre,
                });
            }
            let mut res = adaptive_mu_alpha(&g, alpha, spec.tolerance)?;
            res.evaluations += 3 * spec.nodes;
            Ok(res)
        }
    }
}

// [0, 1] uses sigma = w^{1/(alpha+1)}, which turns sigma^alpha d sigma into
// dw / (alpha + 1) and removes the endpoint singularity; [1, 40] is direct.
fn adaptive_mu_alpha(g: &impl Fn(f64) -> f64, alpha: f64, tol: f64) -> Result<QuadratureResult> {
    let a1 = alpha + 1.0;
    let norm = (a1 * std::f64::consts::LN_2 - ln_gamma(a1)).exp();
    let head = |w: f64| -> Result<f64> {
        let sigma = w.powf(1.0 / a1);
        Ok(checked(sigma, g(sigma))? * (-2.0 * sigma).exp() / a1)
    };
    let tail = |sigma: f64| -> Result<f64> {
        Ok(checked(sigma, g(sigma))? * sigma.powf(alpha) * (-2.0 * sigma).exp())
    };
    let (v1, e1, n1) = adaptive_gauss_kronrod(head, 0.0, 1.0, tol)?;
    let (v2, e2, n2) = adaptive_gauss_kronrod(tail, 1.0, ADAPTIVE_UPPER, tol)?;
    Ok(QuadratureResult {
        value: norm * (v1 + v2),
        error: norm * (e1 + e2),
        evaluations: n1 + n2,
        scheme: QuadratureScheme::AdaptiveComposite,
    })
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x)? + f(c + x)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    })
}

/// Globally adaptive G7-K15 integration of `f` over `[a, b]` to relative
/// tolerance `tol`. Returns `(value, error estimate, evaluations)`.
pub fn adaptive_gauss_kronrod(
    f: impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64, usize)> {
    let mut heap = BinaryHeap::new();
    heap.push(gk15(&f, a, b)?);
    let mut evaluations = 15;
    loop {
        let value: f64 = heap.iter().map(|s| s.value).sum();
        let error: f64 = heap.iter().map(|s| s.error).sum();
        if error <= tol * value.abs() || error < f64::MIN_POSITIVE || heap.len() >= MAX_SUBINTERVALS
        {
            // Sum in position order so the result does not depend on heap layout.
            let mut segs = heap.into_vec();
            segs.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = segs.iter().map(|s| s.value).sum();
            return Ok((value, error, evaluations));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(gk15(&f, worst.a, mid)?);
        heap.push(gk15(&f, mid, worst.b)?);
        evaluations += 30;
    }
}
