//! Superposition operators `S_phi f = phi ∘ f` for polynomial `phi`, and the
//! degree bounds under which they map one space into another.

use std::cmp::Ordering::{Equal, Greater, Less};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{DirichletPolynomial, ExactPolynomial};
use crate::error::{domain, Error, Result};
use crate::norms::hp_norm_exact_even;
use crate::regions::{require_positive, require_weight, Direction, RegionVerdict, Rule, Scalar};

/// `phi(z) = c_0 + c_1 z + ... + c_N z^N` with `c_N != 0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalarPolynomial {
    coeffs: Vec<Complex64>,
}

impl ScalarPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`.
    pub fn monomial(k: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn multiply(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::default();
        }
        let mut out = vec![Complex64::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c)
    }
}

impl Serialize for ScalarPolynomial {
    /// `[c_0, c_1, ...]`; real coefficients as numbers, others as `[re, im]`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Coef {
            Real(f64),
            Complex([f64; 2]),
        }
        let coefs: Vec<Coef> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.im == 0.0 {
                    Coef::Real(c.re)
                } else {
                    Coef::Complex([c.re, c.im])
                }
            })
            .collect();
        coefs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScalarPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coef {
            Real(f64),
            Complex([f64; 2]),
        }
        let raw = Vec::<Coef>::deserialize(deserializer)?;
        let coeffs: Vec<Complex64> = raw
            .into_iter()
            .map(|c| match c {
                Coef::Real(x) => Complex64::new(x, 0.0),
                Coef::Complex([re, im]) => Complex64::new(re, im),
            })
            .collect();
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(serde::de::Error::custom("coefficients must be finite"));
        }
        Ok(Self::new(coeffs))
    }
}

/// `phi ∘ f`, evaluated by Horner's rule in the Dirichlet convolution ring.
/// The largest index is at most `max_index(f)^N`; `f` is never truncated.
pub fn apply_superposition(
    phi: &ScalarPolynomial,
    f: &DirichletPolynomial<Complex64>,
) -> Result<DirichletPolynomial<Complex64>> {
    let mut acc = DirichletPolynomial::zero();
    for c in phi.coeffs.iter().rev() {
        acc = acc.multiply(f).map_err(|e| match e {
            Error::Overflow(m) => {
                Error::Overflow(format!("{m}; truncate f before applying the superposition"))
            }
            other => other,
        })?;
        acc = &acc + &DirichletPolynomial::monomial(1, *c);
    }
    Ok(acc)
}

fn validate_mixed<S: Scalar>(p: &S, q: &S, alpha: &S, u: &S, v: &S, beta: &S) -> Result<()> {
    for (name, x) in [("p", p), ("q", q), ("u", u), ("v", v)] {
        require_positive(name, x)?;
    }
    require_weight("alpha", alpha)?;
    require_weight("beta", beta)
}

/// Whether every `phi` of degree `N` maps `H^{p,q}_alpha` into `H^{u,v}_beta`:
/// `N <= p/u` and `N <= q(beta+1)/(v(alpha+1))`, the second strict when
/// `alpha > beta`. Degree zero is always admitted.
pub fn superposition_decide<S: Scalar>(
    n: u32,
    p: S,
    q: S,
    alpha: S,
    u: S,
    v: S,
    beta: S,
) -> Result<RegionVerdict> {
    validate_mixed(&p, &q, &alpha, &u, &v, &beta)?;
    if n == 0 {
        return Ok(Rule::Constant.into());
    }
    let degree = S::from_int(n as i64);
    if degree.compare(&(p / u)) == Greater {
        return Ok(Rule::SupNone.into());
    }
    let one = S::from_int(1);
    let bound = (q * (beta.clone() + one.clone())) / (v * (alpha.clone() + one));
    let rule = match (alpha.compare(&beta), degree.compare(&bound)) {
        (Greater, Less) => Rule::SupII,
        (Greater, Equal) => Rule::Boundary,
        (_, Less | Equal) => Rule::SupI,
        (_, Greater) => Rule::SupNone,
    };
    Ok(rule.into())
}

/// `A^p_alpha -> A^q_beta`.
pub fn superposition_bergman_decide<S: Scalar>(
    n: u32,
    p: S,
    alpha: S,
    q: S,
    beta: S,
) -> Result<RegionVerdict> {
    superposition_decide(n, p.clone(), p, alpha, q.clone(), q, beta)
}

/// `H^p -> H^{u,v}_alpha` admits degree `N <= p/u`; `H^{u,v}_alpha -> H^p`
/// admits only constants.
pub fn superposition_hardy_decide<S: Scalar>(
    n: u32,
    p: S,
    u: S,
    v: S,
    alpha: S,
    direction: Direction,
) -> Result<RegionVerdict> {
    for (name, x) in [("p", &p), ("u", &u), ("v", &v)] {
        require_positive(name, x)?;
    }
    require_weight("alpha", &alpha)?;
    if n == 0 {
        return Ok(Rule::Constant.into());
    }
    let rule = match direction {
        Direction::MixedToHardy => Rule::SupNone,
        Direction::HardyToMixed => {
            if S::from_int(n as i64).compare(&(p / u)) == Greater {
                Rule::SupNone
            } else {
                Rule::SupHardy
            }
        }
    };
    Ok(rule.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerIdentityReport {
    /// `||f^N||_{H^{2k}}`.
    pub lhs: f64,
    /// `||f||_{H^{2kN}}^N`.
    pub rhs: f64,
    pub deviation: f64,
}

/// Compares `||f^N||_{H^{2k}}` with `||f||_{H^{2kN}}^N`, both computed exactly
/// up to rounding.
pub fn prop_nn_check(
    f: &DirichletPolynomial<Complex64>,
    n: u32,
    k: u32,
) -> Result<PowerIdentityReport> {
    if n == 0 || k == 0 {
        return domain("N and k must be >= 1");
    }
    let kn = k
        .checked_mul(n)
        .ok_or_else(|| Error::Overflow(format!("k N = {k} * {n}")))?;
    let lhs = hp_norm_exact_even(&f.power(n)?, k)?;
    let rhs = hp_norm_exact_even(f, kn)?.powi(n as i32);
    let scale = lhs.abs().max(rhs.abs());
    let deviation = if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    };
    Ok(PowerIdentityReport {
        lhs,
        rhs,
        deviation,
    })
}

/// Exact form of [`prop_nn_check`]: `||(f^N)^k||_2^2 = ||f^{kN}||_2^2` in rationals.
pub fn prop_nn_check_exact(f: &ExactPolynomial, n: u32, k: u32) -> Result<bool> {
    if n == 0 || k == 0 {
        return domain("N and k must be >= 1");
    }
    let kn = k
        .checked_mul(n)
        .ok_or_else(|| Error::Overflow(format!("k N = {k} * {n}")))?;
    Ok(f.power(n)?.power(k)?.sum_of_squares() == f.power(kn)?.sum_of_squares())
}
