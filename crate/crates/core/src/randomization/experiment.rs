use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{derive_seed, randomize, ModelKind, RandomModel};
use crate::algebra::DirichletPolynomial;
use crate::error::{domain, Error, Result};
use crate::norms::{
    even_half, hp_norm_mc, membership_functional_from_squares, mixed_norm, Exponent, InnerNorm,
    NormEstimate, NormMethod, QuadratureSpec, SpaceParams,
};
use crate::parallel::{mean_and_se, root_error};

/// Settings shared by the randomized experiments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOptions {
    pub quadrature: QuadratureSpec,
    /// Torus samples per inner norm when `p` is not an even integer.
    pub inner_trials: usize,
    /// Attach quantiles of the final-step samples to partial-sum reports.
    pub tail: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec::default(),
            inner_trials: 4000,
            tail: false,
        }
    }
}

/// `||g||^t` in `space`, using closed forms where they exist.
fn norm_power(
    g: &DirichletPolynomial<Complex64>,
    space: &SpaceParams,
    t: f64,
    opts: &ExperimentOptions,
    seed: u64,
) -> Result<f64> {
    match (space.q, even_half(space.p)) {
        (Exponent::Infinite, Some(k)) => {
            let s = if k == 1 {
                g.sum_of_squares()
            } else {
                g.power(k)?.sum_of_squares()
            };
            Ok(s.powf(t / (2.0 * k as f64)))
        }
        (Exponent::Infinite, None) => Ok(hp_norm_mc(g, space.p, opts.inner_trials, seed)?
            .value
            .powf(t)),
        (Exponent::Finite(_), _) => {
            let inner = InnerNorm::auto(space.p, opts.inner_trials, seed);
            Ok(mixed_norm(g, space, &opts.quadrature, inner)?.value.powf(t))
        }
    }
}

fn randomized_trials<T: Send>(
    trials: usize,
    seed: u64,
    each: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| each(derive_seed(seed, i)))
        .collect()
}

fn shifted_mean(ys: &[f64]) -> (f64, f64) {
    let shift = ys[0];
    let (mut s, mut s2) = (0.0, 0.0);
    for y in ys {
        let d = y - shift;
        s += d;
        s2 += d * d;
    }
    mean_and_se(shift, s, s2, ys.len())
}

/// Monte Carlo estimate of `(E ||Rf||^t)^{1/t}` in `space`. Trial `i`
/// randomizes with seed `derive_seed(seed, i)`.
pub fn expected_norm_mc(
    f: &DirichletPolynomial<Complex64>,
    space: &SpaceParams,
    kind: ModelKind,
    trials: usize,
    t: f64,
    seed: u64,
    opts: &ExperimentOptions,
) -> Result<NormEstimate> {
    space.validate()?;
    if trials < 2 {
        return domain("at least two trials are needed");
    }
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("moment t must be positive, got {t}"));
    }
    let ys = randomized_trials(trials, seed, |s| {
        norm_power(
            &randomize(f, &RandomModel::new(kind, s)),
            space,
            t,
            opts,
            derive_seed(s, 0),
        )
    })?;
    let (mean, se) = shifted_mean(&ys);
    Ok(NormEstimate {
        value: mean.powf(1.0 / t),
        method: NormMethod::MonteCarlo,
        error: root_error(mean, se, t),
        n: trials,
    })
}

/// `(E ||Rf||_{H^p}^p)^{1/p} / ||f||_{H^2}`; the value carries the ratio and
/// the error its standard error.
pub fn khintchine_ratio(
    f: &DirichletPolynomial<Complex64>,
    p: f64,
    kind: ModelKind,
    trials: usize,
    seed: u64,
    opts: &ExperimentOptions,
) -> Result<NormEstimate> {
    if f.is_zero() {
        return domain("the ratio is undefined for the zero polynomial");
    }
    let h2 = f.sum_of_squares().sqrt();
    let est = expected_norm_mc(f, &SpaceParams::hardy(p)?, kind, trials, p, seed, opts)?;
    Ok(NormEstimate {
        value: est.value / h2,
        error: est.error / h2,
        ..est
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stabilizing,
    Diverging,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stabilizing => "stabilizing",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Stabilizing when the last two values agree within 5%; diverging when there
/// are at least four values, the last exceeds ten times the first and the last
/// four increase strictly; inconclusive otherwise.
pub fn classify(values: &[f64]) -> Verdict {
    let n = values.len();
    if n >= 2 {
        let (a, b) = (values[n - 2], values[n - 1]);
        if a == b || (b - a).abs() <= 0.05 * b.abs() {
            return Verdict::Stabilizing;
        }
    }
    if n >= 4 && values[n - 1] > 10.0 * values[0] && values[n - 4..].windows(2).all(|w| w[1] > w[0])
    {
        return Verdict::Diverging;
    }
    Verdict::Inconclusive
}

/// Strictly increasing truncation levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Schedule(Vec<u64>);

impl Schedule {
    pub fn new(levels: Vec<u64>) -> Result<Self> {
        if levels.is_empty() {
            return domain("schedule is empty");
        }
        if levels[0] == 0 {
            return domain("schedule levels must be >= 1");
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return domain("schedule must be strictly increasing");
        }
        Ok(Self(levels))
    }

    /// `round(start * factor^i)` for `i < count`.
    pub fn geometric(start: u64, factor: f64, count: usize) -> Result<Self> {
        if !(factor > 1.0) || !factor.is_finite() {
            return domain(format!("schedule factor must exceed 1, got {factor}"));
        }
        let levels = (0..count)
            .map(|i| {
                let x = (start as f64 * factor.powi(i as i32)).round();
                if x < u64::MAX as f64 {
                    Ok(x as u64)
                } else {
                    Err(Error::Overflow(format!(
                        "schedule level {x} exceeds 64 bits"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels)
    }

    pub fn levels(&self) -> &[u64] {
        &self.0
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("schedule is non-empty")
    }
}

impl TryFrom<Vec<u64>> for Schedule {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Schedule> for Vec<u64> {
    fn from(s: Schedule) -> Self {
        s.0
    }
}

impl FromStr for Schedule {
    type Err = Error;

    /// `"start:factor:count"` or a comma list `"10,100,1000"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("bad schedule {s:?}"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        match parts.as_slice() {
            [start, factor, count] => Self::geometric(
                start.parse().map_err(|_| bad())?,
                factor.parse().map_err(|_| bad())?,
                count.parse().map_err(|_| bad())?,
            ),
            [_] => Self::new(
                s.split(',')
                    .map(|x| x.trim().parse().map_err(|_| bad()))
                    .collect::<Result<Vec<u64>>>()?,
            ),
            _ => Err(bad()),
        }
    }
}

/// Deterministic coefficient sequences for experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// `a_n = 1/n`.
    Harmonic,
    /// `a_n = 1/sqrt(n)`.
    InverseSqrt,
    Zero,
}

impl Generator {
    pub fn coefficient(self, n: u64) -> f64 {
        match self {
            Generator::Harmonic => 1.0 / n as f64,
            Generator::InverseSqrt => 1.0 / (n as f64).sqrt(),
            Generator::Zero => 0.0,
        }
    }

    /// `sum_{n <= len} a_n n^{-s}`.
    pub fn polynomial(self, len: u64) -> DirichletPolynomial<Complex64> {
        match self {
            Generator::Zero => DirichletPolynomial::zero(),
            _ => DirichletPolynomial::from_fn(len, |n| Complex64::new(self.coefficient(n), 0.0)),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harmonic" => Ok(Generator::Harmonic),
            "inverse-sqrt" => Ok(Generator::InverseSqrt),
            "zero" => Ok(Generator::Zero),
            _ => domain(format!("unknown generator {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SymbolMembership,
    PartialSum,
}

/// Empirical quantiles of the final-step norms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub level: u64,
    pub mean: f64,
    /// `(probability, quantile)` pairs.
    pub quantiles: Vec<(f64, f64)>,
}

impl TailReport {
    fn from_samples(level: u64, mut xs: Vec<f64>) -> Self {
        xs.sort_by(f64::total_cmp);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let quantiles = [0.5, 0.9, 0.99, 1.0]
            .into_iter()
            .map(|prob| {
                let rank = ((prob * xs.len() as f64).ceil() as usize).clamp(1, xs.len());
                (prob, xs[rank - 1])
            })
            .collect();
        Self {
            level,
            mean,
            quantiles,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub model: Option<ModelKind>,
    pub space: SpaceParams,
    pub schedule: Schedule,
    pub trials: usize,
    pub seed: Option<u64>,
    /// Per-level statistic: the membership functional, or the median norm.
    pub values: Vec<f64>,
    /// `values` raised to `scale_exponent`; the verdict is read off this.
    pub scale: Vec<f64>,
    pub scale_exponent: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail: Option<TailReport>,
}

/// Exponent `r` that puts a norm trajectory on the scale of its membership
/// functional: `q` for mixed targets and `p` for `H^p`.
pub fn membership_scale_exponent(space: &SpaceParams) -> f64 {
    space.q.finite().unwrap_or(space.p)
}

/// Evaluates the membership functional of `space`'s symbol space along the
/// schedule: `int (sum_{n<=N} |a_n|^2 n^{-2 sigma})^{q/2} d mu_alpha` for
/// finite `q`, `sum_{n<=N} |a_n|^2` for `H^p`.
pub fn symbol_membership(
    f: &DirichletPolynomial<Complex64>,
    space: &SpaceParams,
    schedule: &Schedule,
    spec: &QuadratureSpec,
) -> Result<ExperimentReport> {
    space.validate()?;
    let squares: Vec<(u64, f64)> = f.iter().map(|(n, c)| (n, c.norm_sqr())).collect();
    let (values, r) = match space.q {
        Exponent::Finite(q) => (
            membership_functional_from_squares(&squares, q, space.alpha, spec, schedule.levels())?,
            q,
        ),
        Exponent::Infinite => {
            let mut acc = 0.0;
            let mut it = squares.iter().peekable();
            let values = schedule
                .levels()
                .iter()
                .map(|&level| {
                    while let Some(&&(n, w)) = it.peek() {
                        if n > level {
                            break;
                        }
                        acc += w;
                        it.next();
                    }
                    acc
                })
                .collect();
            (values, 2.0)
        }
    };
    Ok(ExperimentReport {
        experiment: ExperimentKind::SymbolMembership,
        model: None,
        space: *space,
        schedule: schedule.clone(),
        trials: 0,
        seed: None,
        scale: values.clone(),
        verdict: classify(&values),
        values,
        scale_exponent: r,
        tail: None,
    })
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// For each level `N` and trial, computes `||S_N(Rf)||` in `space`; reports
/// per-level medians and classifies them on the membership scale.
pub fn partial_sum_experiment(
    f: &DirichletPolynomial<Complex64>,
    space: &SpaceParams,
    kind: ModelKind,
    schedule: &Schedule,
    trials: usize,
    seed: u64,
    opts: &ExperimentOptions,
) -> Result<ExperimentReport> {
    space.validate()?;
    if trials == 0 {
        return domain("trials must be >= 1");
    }
    let truncated = f.partial_sum(schedule.max());
    let rows = randomized_trials(trials, seed, |s| {
        let g = randomize(&truncated, &RandomModel::new(kind, s));
        schedule
            .levels()
            .iter()
            .zip(1..)
            .map(|(&level, j)| {
                norm_power(&g.partial_sum(level), space, 1.0, opts, derive_seed(s, j))
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    let values: Vec<f64> = (0..schedule.levels().len())
        .map(|j| median(&mut rows.iter().map(|row| row[j]).collect::<Vec<_>>()))
        .collect();
    let r = membership_scale_exponent(space);
    let scale: Vec<f64> = values.iter().map(|v| v.powf(r)).collect();
    let tail = opts.tail.then(|| {
        let last = schedule.levels().len() - 1;
        TailReport::from_samples(schedule.max(), rows.iter().map(|row| row[last]).collect())
    });
    Ok(ExperimentReport {
        experiment: ExperimentKind::PartialSum,
        model: Some(kind),
        space: *space,
        schedule: schedule.clone(),
        trials,
        seed: Some(seed),
        verdict: classify(&scale),
        values,
        scale,
        scale_exponent: r,
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u64, f64)]) -> DirichletPolynomial<Complex64> {
        DirichletPolynomial::from_real(terms.iter().copied()).unwrap()
    }

    #[test]
    fn expected_norm_examples() {
        let opts = ExperimentOptions::default();
        let h2 = SpaceParams::hardy(2.0).unwrap();
        let est = expected_norm_mc(
            &poly(&[(2, 1.0)]),
            &h2,
            ModelKind::Bernoulli,
            50,
            1.0,
            3,
            &opts,
        )
        .unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.error, 0.0);

        let f = poly(&[(2, 1.0), (3, 1.0)]);
        for kind in ModelKind::ALL {
            let est = expected_norm_mc(&f, &h2, kind, 4000, 2.0, 11, &opts).unwrap();
            let tol = if kind.is_unimodular() {
                1e-12
            } else {
                3.0 * est.error
            };
            assert!((est.value - 2f64.sqrt()).abs() <= tol, "{kind}: {est:?}");
        }
        assert!(expected_norm_mc(&f, &h2, ModelKind::Gaussian, 1, 2.0, 0, &opts).is_err());
    }

    #[test]
    fn khintchine_examples() {
        let opts = ExperimentOptions::default();
        let f = poly(&[(2, 1.0), (3, 1.0)]);
        for kind in [ModelKind::Bernoulli, ModelKind::Steinhaus] {
            let r = khintchine_ratio(&f, 2.0, kind, 100, 1, &opts).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
            // E|X_2 z_2 + X_3 z_3|^4 over signs and torus: |f^2|_2^2 = 1 + 4 + 1
            let r = khintchine_ratio(&f, 4.0, kind, 100, 1, &opts).unwrap();
            assert!((r.value - 1.5f64.powf(0.25)).abs() < 1e-12);
            let scaled = khintchine_ratio(
                &f.scale(&Complex64::new(0.0, 3.0)),
                4.0,
                kind,
                100,
                1,
                &opts,
            )
            .unwrap();
            assert!((scaled.value - r.value).abs() < 1e-12);
        }
        // Gaussian: E[X^4 + 4 X^2 Y^2 + Y^4] = 10
        let r = khintchine_ratio(&f, 4.0, ModelKind::Gaussian, 20_000, 5, &opts).unwrap();
        assert!((r.value - 2.5f64.powf(0.25)).abs() < 3.0 * r.error, "{r:?}");
        assert!(khintchine_ratio(
            &DirichletPolynomial::zero(),
            2.0,
            ModelKind::Gaussian,
            10,
            0,
            &opts
        )
        .is_err());
    }

    #[test]
    fn verdicts() {
        assert_eq!(classify(&[0.0, 0.0, 0.0]), Verdict::Stabilizing);
        assert_eq!(classify(&[1.0, 1.5, 1.52]), Verdict::Stabilizing);
        assert_eq!(classify(&[1.0, 3.0, 6.0, 12.0]), Verdict::Diverging);
        assert_eq!(classify(&[1.0, 3.0, 2.0, 12.0]), Verdict::Inconclusive);
        assert_eq!(classify(&[1.0, 2.0, 3.0, 4.0]), Verdict::Inconclusive);
        assert_eq!(classify(&[1.0]), Verdict::Inconclusive);
    }

    #[test]
    fn schedules() {
        assert_eq!(
            "10:10:3".parse::<Schedule>().unwrap().levels(),
            &[10, 100, 1000]
        );
        assert_eq!(
            "5, 7,100".parse::<Schedule>().unwrap().levels(),
            &[5, 7, 100]
        );
        assert!("10,5".parse::<Schedule>().is_err());
        assert!("1:1.2:5".parse::<Schedule>().is_err());
        assert!("0,1".parse::<Schedule>().is_err());
        assert!("a:b".parse::<Schedule>().is_err());
        let s: Schedule = serde_json::from_str("[1,2]").unwrap();
        assert_eq!(s.max(), 2);
        assert!(serde_json::from_str::<Schedule>("[2,1]").is_err());
    }

    #[test]
    fn symbol_examples() {
        let spec = QuadratureSpec::default();
        let schedule: Schedule = "10:10:4".parse().unwrap();
        let hardy = SpaceParams::hardy(4.0).unwrap();
        let harmonic = Generator::Harmonic.polynomial(schedule.max());
        let rep = symbol_membership(&harmonic, &hardy, &schedule, &spec).unwrap();
        assert_eq!(rep.verdict, Verdict::Stabilizing);

        let schedule: Schedule = "1:10:6".parse().unwrap();
        let inv = Generator::InverseSqrt.polynomial(schedule.max());
        let rep = symbol_membership(&inv, &hardy, &schedule, &spec).unwrap();
        assert_eq!(rep.verdict, Verdict::Diverging);

        let zero =
            symbol_membership(&DirichletPolynomial::zero(), &hardy, &schedule, &spec).unwrap();
        assert!(zero.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn lacunary_symbol_stabilizes() {
        let (q, alpha) = (2.0, 0.0);
        let space = SpaceParams::mixed(2.0, q, alpha).unwrap();
        let terms: Vec<(u64, f64)> = (1..=5u32)
            .map(|k| {
                let kf = k as f64;
                (
                    1u64 << (1u64 << k),
                    2f64.powf((alpha + 1.0) * kf / q) * kf.powf(-2.0 / q),
                )
            })
            .collect();
        let f = poly(&terms);
        let schedule = Schedule::new(terms.iter().map(|t| t.0).collect()).unwrap();
        let rep = symbol_membership(&f, &space, &schedule, &QuadratureSpec::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Stabilizing, "{:?}", rep.values);
    }

    #[test]
    fn partial_sum_examples() {
        let opts = ExperimentOptions::default();
        let hardy2 = SpaceParams::hardy(2.0).unwrap();
        let schedule: Schedule = "1:10:5".parse().unwrap();
        let inv = Generator::InverseSqrt.polynomial(schedule.max());
        let rep =
            partial_sum_experiment(&inv, &hardy2, ModelKind::Bernoulli, &schedule, 5, 1, &opts)
                .unwrap();
        for (v, &n) in rep.values.iter().zip(schedule.levels()) {
            let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
            assert!((v - h.sqrt()).abs() < 1e-10);
        }
        let zero = partial_sum_experiment(
            &DirichletPolynomial::zero(),
            &hardy2,
            ModelKind::Gaussian,
            &schedule,
            3,
            1,
            &opts,
        )
        .unwrap();
        assert!(zero.values.iter().all(|&v| v == 0.0));
        assert_eq!(zero.verdict, Verdict::Stabilizing);
    }

    #[test]
    fn partial_sum_reproducible_with_tail() {
        let opts = ExperimentOptions {
            tail: true,
            ..Default::default()
        };
        let space = SpaceParams::mixed(2.0, 4.0, 0.0).unwrap();
        let schedule: Schedule = "5,20,80".parse().unwrap();
        let f = Generator::Harmonic.polynomial(80);
        let a = partial_sum_experiment(&f, &space, ModelKind::Steinhaus, &schedule, 16, 9, &opts)
            .unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool
            .install(|| {
                partial_sum_experiment(&f, &space, ModelKind::Steinhaus, &schedule, 16, 9, &opts)
            })
            .unwrap();
        assert_eq!(a, b);
        let tail = a.tail.unwrap();
        assert_eq!(tail.level, 80);
        assert!(tail.quantiles.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
