use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::DirichletPolynomial;
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// `+1` or `-1` with probability 1/2.
    Bernoulli,
    /// Uniform on the unit circle.
    Steinhaus,
    /// Real standard normal.
    Gaussian,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::Bernoulli,
        ModelKind::Steinhaus,
        ModelKind::Gaussian,
    ];

    /// `|X| = 1` almost surely.
    pub fn is_unimodular(self) -> bool {
        !matches!(self, ModelKind::Gaussian)
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Bernoulli => "bernoulli",
            ModelKind::Steinhaus => "steinhaus",
            ModelKind::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bernoulli" | "rademacher" => Ok(ModelKind::Bernoulli),
            "steinhaus" => Ok(ModelKind::Steinhaus),
            "gaussian" | "normal" => Ok(ModelKind::Gaussian),
            _ => domain(format!("unknown random model {s:?}")),
        }
    }
}

/// An i.i.d. sequence `X_1, X_2, ...` of one of the standard models.
///
/// `X_n` is computed from the four 32-bit words at position `4(n-1)` of the
/// ChaCha8 stream keyed by `seed`, so any draw can be produced without the
/// ones before it and every finite sequence is a prefix of the longer ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomModel {
    pub kind: ModelKind,
    pub seed: u64,
}

const WORDS_PER_DRAW: u128 = 4;
const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

fn bits53(lo: u32, hi: u32) -> u64 {
    (((hi as u64) << 32) | lo as u64) >> 11
}

impl RandomModel {
    pub fn new(kind: ModelKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    fn stream_at(&self, n: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_word_pos(WORDS_PER_DRAW * (n as u128 - 1));
        rng
    }

    fn next_draw(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        let w = [
            rng.next_u32(),
            rng.next_u32(),
            rng.next_u32(),
            rng.next_u32(),
        ];
        match self.kind {
            ModelKind::Bernoulli => Complex64::new(if w[0] & 1 == 0 { 1.0 } else { -1.0 }, 0.0),
            ModelKind::Steinhaus => Complex64::cis(TAU * bits53(w[0], w[1]) as f64 * INV_2_53),
            ModelKind::Gaussian => {
                // Box-Muller with u1 in (0, 1] and u2 in [0, 1).
                let u1 = (bits53(w[0], w[1]) + 1) as f64 * INV_2_53;
                let u2 = bits53(w[2], w[3]) as f64 * INV_2_53;
                Complex64::new((-2.0 * u1.ln()).sqrt() * (TAU * u2).cos(), 0.0)
            }
        }
    }

    /// The draw `X_n`, `n >= 1`.
    pub fn draw(&self, n: u64) -> Complex64 {
        assert!(n >= 1, "draws are indexed from 1");
        self.next_draw(&mut self.stream_at(n))
    }

    /// `X_n` for every `n` in `indices` (ascending), reading the stream
    /// sequentially across runs of consecutive indices.
    pub fn draws_at(&self, indices: impl IntoIterator<Item = u64>) -> Vec<Complex64> {
        let mut out = Vec::new();
        let mut rng: Option<ChaCha8Rng> = None;
        let mut last = 0u64;
        for n in indices {
            assert!(n >= 1, "draws are indexed from 1");
            let r = match rng.as_mut() {
                Some(r) if n == last + 1 => r,
                _ => rng.insert(self.stream_at(n)),
            };
            out.push(self.next_draw(r));
            last = n;
        }
        out
    }
}

/// `X_1, ..., X_N`.
pub fn sample_sequence(model: &RandomModel, len: usize) -> Result<Vec<Complex64>> {
    if len == 0 {
        return domain("sequence length must be >= 1");
    }
    Ok(model.draws_at(1..=len as u64))
}

/// `Rf = sum a_n X_n n^{-s}`. Draws are indexed by `n`, so gaps in the
/// support skip draws and `S_N(Rf) = R(S_N f)`.
pub fn randomize(
    f: &DirichletPolynomial<Complex64>,
    model: &RandomModel,
) -> DirichletPolynomial<Complex64> {
    let draws = model.draws_at(f.indices());
    let terms: Vec<(u64, Complex64)> = f.iter().zip(draws).map(|((n, a), x)| (n, a * x)).collect();
    DirichletPolynomial::from_terms(terms).expect("indices come from a valid polynomial")
}

/// Sub-seed number `index` of `master` (SplitMix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
