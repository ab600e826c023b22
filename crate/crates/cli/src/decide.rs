use std::collections::BTreeMap;

use clap::ValueEnum;
use dirichlet_spaces::regions::{
    hardy_mixed_inclusion_decide, inclusion_decide, littlewood_disk_decide, parse_rational,
    random_bergman_decide, random_embedding_decide_with, Direction, RegionVerdict,
};
use dirichlet_spaces::superposition::{
    superposition_bergman_decide, superposition_decide, superposition_hardy_decide,
};
use num_rational::BigRational;

use crate::output::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecideKind {
    /// H^{p,q}_alpha ⊂ H^{u,v}_beta: p q alpha u v beta
    Inclusion,
    /// random embedding, q or v may be inf: p q alpha u v beta
    RandomEmbedding,
    /// random embedding H^p -> H^q: p [q]
    RandomHardy,
    /// random embedding A^p_alpha -> A^q_beta: p alpha q beta
    RandomBergman,
    /// random embedding H^p -> H^{u,v}_beta: p u v beta
    RandomHardyMixed,
    /// inclusion between H^p and H^{u,v}_alpha: p u v alpha direction
    HardyMixed,
    /// L^p_a(D) -> L^q_a(D): p q
    Disk,
    /// S_phi: H^{p,q}_alpha -> H^{u,v}_beta, degree N: N p q alpha u v beta
    Superposition,
    /// S_phi: A^p_alpha -> A^q_beta: N p q alpha beta
    SuperpositionBergman,
    /// S_phi between H^p and H^{u,v}_alpha: N p u v alpha direction
    SuperpositionHardy,
}

impl DecideKind {
    /// Parameter names in positional order, with defaults for optional ones.
    fn params(self) -> &'static [(&'static str, Option<&'static str>)] {
        use DecideKind::*;
        match self {
            Inclusion | RandomEmbedding => &[
                ("p", None),
                ("q", None),
                ("alpha", None),
                ("u", None),
                ("v", None),
                ("beta", None),
            ],
            RandomHardy => &[("p", None), ("q", Some("2"))],
            RandomBergman => &[("p", None), ("alpha", None), ("q", None), ("beta", None)],
            RandomHardyMixed => &[("p", None), ("u", None), ("v", None), ("beta", None)],
            HardyMixed => &[
                ("p", None),
                ("u", None),
                ("v", None),
                ("alpha", None),
                ("direction", None),
            ],
            Disk => &[("p", None), ("q", None)],
            Superposition => &[
                ("N", None),
                ("p", None),
                ("q", None),
                ("alpha", None),
                ("u", None),
                ("v", None),
                ("beta", None),
            ],
            SuperpositionBergman => &[
                ("N", None),
                ("p", None),
                ("q", None),
                ("alpha", None),
                ("beta", None),
            ],
            SuperpositionHardy => &[
                ("N", None),
                ("p", None),
                ("u", None),
                ("v", None),
                ("alpha", None),
                ("direction", None),
            ],
        }
    }
}

/// Resolves positional and `key=value` arguments against the kind's names.
pub fn resolve(kind: DecideKind, args: &[String]) -> CliResult<BTreeMap<String, String>> {
    let names = kind.params();
    let mut values: BTreeMap<String, String> = BTreeMap::new();
    let mut positional = Vec::new();
    for arg in args {
        match arg.split_once('=') {
            Some((key, value)) => {
                let name = names
                    .iter()
                    .map(|(n, _)| *n)
                    .find(|n| n.eq_ignore_ascii_case(key.trim()))
                    .ok_or_else(|| {
                        CliError::input(format!("unknown parameter {key:?} for {kind:?}"))
                    })?;
                if values
                    .insert(name.to_string(), value.trim().to_string())
                    .is_some()
                {
                    return Err(CliError::input(format!("parameter {name} given twice")));
                }
            }
            None => positional.push(arg.trim().to_string()),
        }
    }
    let mut positional = positional.into_iter();
    for (name, _) in names {
        if !values.contains_key(*name) {
            if let Some(v) = positional.next() {
                values.insert(name.to_string(), v);
            }
        }
    }
    if let Some(extra) = positional.next() {
        return Err(CliError::input(format!("unexpected argument {extra:?}")));
    }
    for (name, default) in names {
        if !values.contains_key(*name) {
            match default {
                Some(d) => {
                    values.insert(name.to_string(), d.to_string());
                }
                None => return Err(CliError::input(format!("missing parameter {name}"))),
            }
        }
    }
    Ok(values)
}

struct Params<'a>(&'a BTreeMap<String, String>);

impl Params<'_> {
    fn raw(&self, name: &str) -> &str {
        &self.0[name]
    }

    fn rational(&self, name: &str) -> CliResult<BigRational> {
        parse_rational(self.raw(name)).map_err(|e| CliError::input(format!("{name}: {e}")))
    }

    /// `None` for `inf`.
    fn exponent(&self, name: &str) -> CliResult<Option<BigRational>> {
        match self.raw(name).to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Ok(None),
            _ => self.rational(name).map(Some),
        }
    }

    fn degree(&self) -> CliResult<u32> {
        self.raw("N").parse().map_err(|_| {
            CliError::input(format!(
                "N must be a non-negative integer, got {:?}",
                self.raw("N")
            ))
        })
    }

    fn direction(&self) -> CliResult<Direction> {
        match self.raw("direction") {
            "hardy-to-mixed" => Ok(Direction::HardyToMixed),
            "mixed-to-hardy" => Ok(Direction::MixedToHardy),
            other => Err(CliError::input(format!(
                "direction must be hardy-to-mixed or mixed-to-hardy, got {other:?}"
            ))),
        }
    }
}

pub fn decide(kind: DecideKind, values: &BTreeMap<String, String>) -> CliResult<RegionVerdict> {
    use DecideKind::*;
    let a = Params(values);
    let r = |name: &str| a.rational(name);
    let zero = || BigRational::from_integer(0.into());
    let verdict = match kind {
        Inclusion => inclusion_decide(r("p")?, r("q")?, r("alpha")?, r("u")?, r("v")?, r("beta")?)?,
        RandomEmbedding => random_embedding_decide_with(
            r("p")?,
            a.exponent("q")?,
            r("alpha")?,
            r("u")?,
            a.exponent("v")?,
            r("beta")?,
        )?,
        RandomHardy => random_embedding_decide_with(r("p")?, None, zero(), r("q")?, None, zero())?,
        RandomBergman => random_bergman_decide(r("p")?, r("alpha")?, r("q")?, r("beta")?)?,
        RandomHardyMixed => {
            random_embedding_decide_with(r("p")?, None, zero(), r("u")?, Some(r("v")?), r("beta")?)?
        }
        HardyMixed => {
            hardy_mixed_inclusion_decide(r("p")?, r("u")?, r("v")?, r("alpha")?, a.direction()?)?
        }
        Disk => littlewood_disk_decide(r("p")?, r("q")?)?,
        Superposition => superposition_decide(
            a.degree()?,
            r("p")?,
            r("q")?,
            r("alpha")?,
            r("u")?,
            r("v")?,
            r("beta")?,
        )?,
        SuperpositionBergman => {
            superposition_bergman_decide(a.degree()?, r("p")?, r("alpha")?, r("q")?, r("beta")?)?
        }
        SuperpositionHardy => superposition_hardy_decide(
            a.degree()?,
            r("p")?,
            r("u")?,
            r("v")?,
            r("alpha")?,
            a.direction()?,
        )?,
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn mixes_positional_and_named() {
        let v = resolve(
            DecideKind::SuperpositionBergman,
            &args(&["N=3", "4", "q=2", "0", "0"]),
        )
        .unwrap();
        assert_eq!(v["N"], "3");
        assert_eq!(v["p"], "4");
        assert_eq!(v["alpha"], "0");
        assert!(
            !decide(DecideKind::SuperpositionBergman, &v)
                .unwrap()
                .included
        );
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(resolve(DecideKind::Disk, &args(&["1"])).is_err());
        assert!(resolve(DecideKind::Disk, &args(&["1", "2", "3"])).is_err());
        assert!(resolve(DecideKind::Disk, &args(&["x=1", "2"])).is_err());
        assert!(resolve(DecideKind::Disk, &args(&["p=1", "p=2"])).is_err());
        let v = resolve(DecideKind::RandomHardy, &args(&["p=2"])).unwrap();
        assert_eq!(v["q"], "2");
    }
}
