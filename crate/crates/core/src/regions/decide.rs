use std::cmp::Ordering::{Equal, Greater, Less};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::{require_positive, require_weight, Scalar};
use crate::error::Result;
use crate::norms::SpaceParams;

/// The clause that settled a decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// `p >= u` and `(alpha+1)/q < (beta+1)/v`.
    #[serde(rename = "em-i")]
    EmI,
    /// `p >= u`, `(alpha+1)/q = (beta+1)/v` and `q <= v`.
    #[serde(rename = "em-ii")]
    EmII,
    #[serde(rename = "em-none")]
    EmNone,
    /// On the equality line `(alpha+1)/q = (beta+1)/v` but excluded.
    #[serde(rename = "boundary")]
    Boundary,
    /// Hardy source with `p >= 2`.
    #[serde(rename = "random-hardy")]
    RandomHardy,
    #[serde(rename = "p-lt-2")]
    PLt2,
    /// A mixed-norm space never embeds in a Hardy space.
    #[serde(rename = "mixed-to-hardy")]
    MixedToHardy,
    #[serde(rename = "p-ge-u")]
    PGeU,
    #[serde(rename = "p-lt-u")]
    PLtU,
    /// Unit disk, `p < 2` and `1/q - 2/p + 1/2 > 0`.
    #[serde(rename = "disk-i")]
    DiskI,
    /// Unit disk, `p >= 2` and `q <= p`.
    #[serde(rename = "disk-ii")]
    DiskII,
    #[serde(rename = "disk-none")]
    DiskNone,
    /// Degree admitted, `alpha <= beta`.
    #[serde(rename = "sup-i")]
    SupI,
    /// Degree admitted, `alpha > beta`.
    #[serde(rename = "sup-ii")]
    SupII,
    #[serde(rename = "sup-none")]
    SupNone,
    /// Degree zero.
    #[serde(rename = "constant")]
    Constant,
    /// Hardy to mixed with `N <= p/u`.
    #[serde(rename = "sup-hardy")]
    SupHardy,
}

impl Rule {
    pub fn included(self) -> bool {
        matches!(
            self,
            Rule::EmI
                | Rule::EmII
                | Rule::RandomHardy
                | Rule::PGeU
                | Rule::DiskI
                | Rule::DiskII
                | Rule::SupI
                | Rule::SupII
                | Rule::Constant
                | Rule::SupHardy
        )
    }

    pub fn tag(self) -> &'static str {
        match self {
            Rule::EmI => "em-i",
            Rule::EmII => "em-ii",
            Rule::EmNone => "em-none",
            Rule::Boundary => "boundary",
            Rule::RandomHardy => "random-hardy",
            Rule::PLt2 => "p-lt-2",
            Rule::MixedToHardy => "mixed-to-hardy",
            Rule::PGeU => "p-ge-u",
            Rule::PLtU => "p-lt-u",
            Rule::DiskI => "disk-i",
            Rule::DiskII => "disk-ii",
            Rule::DiskNone => "disk-none",
            Rule::SupI => "sup-i",
            Rule::SupII => "sup-ii",
            Rule::SupNone => "sup-none",
            Rule::Constant => "constant",
            Rule::SupHardy => "sup-hardy",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub included: bool,
    pub rule: Rule,
}

impl From<Rule> for RegionVerdict {
    fn from(rule: Rule) -> Self {
        Self {
            included: rule.included(),
            rule,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    HardyToMixed,
    MixedToHardy,
}

/// `H^{p,q}_alpha ⊂ H^{u,v}_beta`.
pub fn inclusion_decide<S: Scalar>(
    p: S,
    q: S,
    alpha: S,
    u: S,
    v: S,
    beta: S,
) -> Result<RegionVerdict> {
    for (name, x) in [("p", &p), ("q", &q), ("u", &u), ("v", &v)] {
        require_positive(name, x)?;
    }
    require_weight("alpha", &alpha)?;
    require_weight("beta", &beta)?;
    if p.compare(&u) == Less {
        return Ok(Rule::EmNone.into());
    }
    let one = S::from_int(1);
    let source = (alpha + one.clone()) / q.clone();
    let target = (beta + one) / v.clone();
    let rule = match source.compare(&target) {
        Less => Rule::EmI,
        Equal if q.compare(&v) != Greater => Rule::EmII,
        Equal => Rule::Boundary,
        Greater => Rule::EmNone,
    };
    Ok(rule.into())
}

/// `Rf` lies almost surely in the target for every `f` in the source.
/// `None` for `q` or `v` means a Hardy space.
pub fn random_embedding_decide_with<S: Scalar>(
    p: S,
    q: Option<S>,
    alpha: S,
    u: S,
    v: Option<S>,
    beta: S,
) -> Result<RegionVerdict> {
    require_positive("p", &p)?;
    require_positive("u", &u)?;
    if let Some(q) = &q {
        require_positive("q", q)?;
        require_weight("alpha", &alpha)?;
    }
    if let Some(v) = &v {
        require_positive("v", v)?;
        require_weight("beta", &beta)?;
    }
    let p_ge_2 = p.compare(&S::from_int(2)) != Less;
    match (q, v) {
        (None, _) => Ok(if p_ge_2 {
            Rule::RandomHardy
        } else {
            Rule::PLt2
        }
        .into()),
        (Some(_), None) => Ok(Rule::MixedToHardy.into()),
        (Some(q), Some(v)) => {
            if !p_ge_2 {
                return Ok(Rule::PLt2.into());
            }
            // The symbol space of H^{u,v}_beta is H^{2,v}_beta.
            inclusion_decide(p, q, alpha, S::from_int(2), v, beta)
        }
    }
}

pub fn random_embedding_decide(
    source: &SpaceParams,
    target: &SpaceParams,
) -> Result<RegionVerdict> {
    source.validate()?;
    target.validate()?;
    random_embedding_decide_with(
        source.p,
        source.q.finite(),
        source.alpha,
        target.p,
        target.q.finite(),
        target.alpha,
    )
}

/// Random embedding `A^p_alpha -> A^q_beta`.
pub fn random_bergman_decide<S: Scalar>(p: S, alpha: S, q: S, beta: S) -> Result<RegionVerdict> {
    random_embedding_decide_with(p.clone(), Some(p), alpha, q.clone(), Some(q), beta)
}

/// `H^p ⊂ H^{u,v}_alpha` iff `p >= u`; `H^{u,v}_alpha` is never inside `H^p`.
pub fn hardy_mixed_inclusion_decide<S: Scalar>(
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
    let rule = match direction {
        Direction::MixedToHardy => Rule::MixedToHardy,
        Direction::HardyToMixed if p.compare(&u) != Less => Rule::PGeU,
        Direction::HardyToMixed => Rule::PLtU,
    };
    Ok(rule.into())
}

/// Random embedding `L^p_a(D) -> L^q_a(D)` of Bergman spaces on the unit disk.
pub fn littlewood_disk_decide<S: Scalar>(p: S, q: S) -> Result<RegionVerdict> {
    require_positive("p", &p)?;
    require_positive("q", &q)?;
    let two = S::from_int(2);
    let rule = if p.compare(&two) == Less {
        let one = S::from_int(1);
        let lhs = one.clone() / q + one / two.clone();
        if lhs.compare(&(two / p)) == Greater {
            Rule::DiskI
        } else {
            Rule::DiskNone
        }
    } else if q.compare(&p) != Greater {
        Rule::DiskII
    } else {
        Rule::DiskNone
    };
    Ok(rule.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inclusion_examples() {
        assert_eq!(
            inclusion_decide(4.0, 4.0, 0.0, 2.0, 4.0, 1.0).unwrap().rule,
            Rule::EmI
        );
        assert_eq!(
            inclusion_decide(2.0, 2.0, 0.0, 2.0, 4.0, 1.0).unwrap().rule,
            Rule::EmII
        );
        let v = inclusion_decide(1.0, 2.0, 0.0, 2.0, 2.0, 0.0).unwrap();
        assert!(!v.included);
        // equality line with q > v
        let v = inclusion_decide(2.0, 4.0, 1.0, 2.0, 2.0, 0.0).unwrap();
        assert_eq!(v.rule, Rule::Boundary);
        assert!(!v.included);
        assert!(inclusion_decide(0.0, 1.0, 0.0, 1.0, 1.0, 0.0).is_err());
        assert!(inclusion_decide(1.0, 1.0, -1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn exact_and_float_agree_near_boundary() {
        // (alpha+1)/q = (0.1+1)/1.1 = 1 = (beta+1)/v exactly in rationals
        let exact =
            inclusion_decide(r(2, 1), r(11, 10), r(1, 10), r(1, 1), r(2, 1), r(1, 1)).unwrap();
        assert_eq!(exact.rule, Rule::EmII);
        let float = inclusion_decide(2.0, 1.1, 0.1, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(float.rule, Rule::EmII);
    }

    #[test]
    fn random_examples() {
        let a2 = SpaceParams::bergman(2.0, 0.0).unwrap();
        assert_eq!(random_embedding_decide(&a2, &a2).unwrap().rule, Rule::EmII);
        for q in [0.5, 1.0, 4.0] {
            let a1 = SpaceParams::bergman(1.0, 0.0).unwrap();
            let aq = SpaceParams::bergman(q, 0.0).unwrap();
            assert_eq!(random_embedding_decide(&a1, &aq).unwrap().rule, Rule::PLt2);
            let h1 = SpaceParams::hardy(1.0).unwrap();
            let h2 = SpaceParams::hardy(2.0).unwrap();
            let hq = SpaceParams::hardy(q).unwrap();
            assert!(!random_embedding_decide(&h1, &hq).unwrap().included);
            assert!(random_embedding_decide(&h2, &hq).unwrap().included);
            assert!(random_embedding_decide(&h2, &aq).unwrap().included);
            assert_eq!(
                random_embedding_decide(&a2, &hq).unwrap().rule,
                Rule::MixedToHardy
            );
        }
    }

    #[test]
    fn hardy_mixed_examples() {
        use Direction::*;
        assert!(
            hardy_mixed_inclusion_decide(2.0, 2.0, 1.0, 0.0, HardyToMixed)
                .unwrap()
                .included
        );
        assert!(
            !hardy_mixed_inclusion_decide(1.0, 2.0, 1.0, 0.0, HardyToMixed)
                .unwrap()
                .included
        );
        assert!(
            !hardy_mixed_inclusion_decide(9.0, 1.0, 1.0, 0.0, MixedToHardy)
                .unwrap()
                .included
        );
    }

    #[test]
    fn disk_examples() {
        assert_eq!(
            littlewood_disk_decide(1.0, 1.0).unwrap().rule,
            Rule::DiskNone
        );
        assert_eq!(littlewood_disk_decide(1.0, 0.5).unwrap().rule, Rule::DiskI);
        assert_eq!(littlewood_disk_decide(4.0, 4.0).unwrap().rule, Rule::DiskII);
        assert_eq!(
            littlewood_disk_decide(4.0, 5.0).unwrap().rule,
            Rule::DiskNone
        );
        // on the curve 1/q = 2/p - 1/2: p = 1, q = 2/3 is excluded
        assert_eq!(
            littlewood_disk_decide(r(1, 1), r(2, 3)).unwrap().rule,
            Rule::DiskNone
        );
    }

    #[test]
    fn rule_json() {
        let v: RegionVerdict = Rule::EmII.into();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"included":true,"rule":"em-ii"}"#
        );
        assert_eq!(serde_json::to_string(&Rule::PLt2).unwrap(), "\"p-lt-2\"");
    }
}
