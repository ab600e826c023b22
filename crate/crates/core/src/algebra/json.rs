//! Series wire format: `{"terms": [[n, re, im], ...]}` with `n` strictly increasing.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::polynomial::DirichletPolynomial;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesJson {
    terms: Vec<(u64, f64, f64)>,
}

impl Serialize for DirichletPolynomial<Complex64> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            terms: self.iter().map(|(n, c)| (n, c.re, c.im)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DirichletPolynomial<Complex64> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(deserializer)?;
        validate_terms(&raw.terms).map_err(D::Error::custom)?;
        DirichletPolynomial::from_terms(
            raw.terms
                .into_iter()
                .map(|(n, re, im)| (n, Complex64::new(re, im))),
        )
        .map_err(D::Error::custom)
    }
}

fn validate_terms(terms: &[(u64, f64, f64)]) -> Result<()> {
    let mut prev = 0u64;
    for &(n, re, im) in terms {
        if n == 0 {
            return Err(Error::InvalidSeries("indices must be >= 1".into()));
        }
        if n <= prev {
            return Err(Error::InvalidSeries(format!(
                "indices must be strictly increasing ({n} after {prev})"
            )));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidSeries(format!(
                "non-finite coefficient at n = {n}"
            )));
        }
        prev = n;
    }
    Ok(())
}

impl DirichletPolynomial<Complex64> {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSeries(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization is infallible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_wire_format() {
        let f = DirichletPolynomial::from_json(r#"{"terms": [[2, 1.0, 0.0], [3, 0.5, -1.0]]}"#)
            .unwrap();
        assert_eq!(f.coefficient(3), Complex64::new(0.5, -1.0));
        assert_eq!(f.to_json(), r#"{"terms":[[2,1.0,0.0],[3,0.5,-1.0]]}"#);
    }

    #[test]
    fn rejects_bad_ordering_and_zero_index() {
        assert!(DirichletPolynomial::from_json(r#"{"terms": [[3, 1, 0], [2, 1, 0]]}"#).is_err());
        assert!(DirichletPolynomial::from_json(r#"{"terms": [[2, 1, 0], [2, 1, 0]]}"#).is_err());
        assert!(DirichletPolynomial::from_json(r#"{"terms": [[0, 1, 0]]}"#).is_err());
        assert!(DirichletPolynomial::from_json(r#"{"terms": [[-1, 1, 0]]}"#).is_err());
        assert!(DirichletPolynomial::from_json(r#"{"terms": [[1, 1]]}"#).is_err());
        assert!(DirichletPolynomial::from_json("[1,2]").is_err());
    }

    #[test]
    fn explicit_zeros_are_dropped() {
        let f = DirichletPolynomial::from_json(r#"{"terms": [[1, 0, 0], [4, 2, 0]]}"#).unwrap();
        assert_eq!(f.len(), 1);
    }

    proptest! {
        #[test]
        fn json_roundtrip(terms in proptest::collection::btree_map(1u64..10_000, (-1e3f64..1e3, -1e3f64..1e3), 0..20)) {
            let f = DirichletPolynomial::from_terms(
                terms.into_iter().map(|(n, (re, im))| (n, Complex64::new(re, im)))
            ).unwrap();
            let back = DirichletPolynomial::from_json(&f.to_json()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
