use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decide::inclusion_decide;
use super::decide::{
    littlewood_disk_decide, random_bergman_decide, random_embedding_decide_with, Rule,
};
use super::scalar::{parse_rational, Scalar};
use crate::error::{domain, Error, Result};

/// `steps + 1` equally spaced points from `min` to `max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    pub min: BigRational,
    pub max: BigRational,
    pub steps: u32,
}

impl Axis {
    pub fn new(min: BigRational, max: BigRational, steps: u32) -> Result<Self> {
        if steps == 0 {
            return domain("an axis needs at least one step");
        }
        if min > max {
            return domain(format!("axis minimum {min} exceeds maximum {max}"));
        }
        Ok(Self { min, max, steps })
    }

    pub fn points(&self) -> Vec<BigRational> {
        let width = (self.max.clone() - self.min.clone())
            / BigRational::from_integer(BigInt::from(self.steps));
        (0..=self.steps)
            .map(|i| self.min.clone() + width.clone() * BigRational::from_integer(BigInt::from(i)))
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `"min:max:steps"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, steps] = parts.as_slice() else {
            return domain(format!("axis must look like min:max:steps, got {s:?}"));
        };
        let steps = steps
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad step count {steps:?}")))?;
        Self::new(parse_rational(min)?, parse_rational(max)?, steps)
    }
}

/// Grid over `(p, q)`: `"pmin:pmax:steps,qmin:qmax:steps"`; a single axis
/// is used for both coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub p: Axis,
    pub q: Axis,
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(',') {
            Some((p, q)) => Ok(Self {
                p: p.parse()?,
                q: q.parse()?,
            }),
            None => {
                let axis: Axis = s.parse()?;
                Ok(Self {
                    p: axis.clone(),
                    q: axis,
                })
            }
        }
    }
}

/// Which region is sampled over `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridDecider {
    /// `H^p -> H^q`.
    RandomHardy,
    /// `L^p_a(D) -> L^q_a(D)`.
    Disk,
    /// `A^p_alpha -> A^q_beta`.
    RandomBergman {
        alpha: BigRational,
        beta: BigRational,
    },
    /// `H^{p,q}_alpha ⊂ H^{u,v}_beta` for fixed `(alpha, u, v, beta)`.
    Inclusion {
        alpha: BigRational,
        u: BigRational,
        v: BigRational,
        beta: BigRational,
    },
}

impl GridDecider {
    pub fn decide(&self, p: &BigRational, q: &BigRational) -> Result<Rule> {
        let verdict = match self {
            GridDecider::RandomHardy => random_embedding_decide_with(
                p.clone(),
                None,
                BigRational::from_int(0),
                q.clone(),
                None,
                BigRational::from_int(0),
            )?,
            GridDecider::Disk => littlewood_disk_decide(p.clone(), q.clone())?,
            GridDecider::RandomBergman { alpha, beta } => {
                random_bergman_decide(p.clone(), alpha.clone(), q.clone(), beta.clone())?
            }
            GridDecider::Inclusion { alpha, u, v, beta } => inclusion_decide(
                p.clone(),
                q.clone(),
                alpha.clone(),
                u.clone(),
                v.clone(),
                beta.clone(),
            )?,
        };
        Ok(verdict.rule)
    }
}

/// Named grids matching the standard region pictures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Hardy random embedding: `p >= 2`.
    Fig1,
    /// Unit-disk Bergman reference region.
    Fig2,
    /// Bergman, `alpha = 0 < beta = 1`.
    Fig3,
    /// Bergman, `alpha = beta = 0`.
    Fig4,
    /// Bergman, `alpha = 1 > beta = 0`.
    Fig5,
}

pub const DEFAULT_GRID: &str = "0.25:6:23,0.25:6:23";

impl Preset {
    pub fn decider(self) -> GridDecider {
        let int = |n: i64| BigRational::from_int(n);
        match self {
            Preset::Fig1 => GridDecider::RandomHardy,
            Preset::Fig2 => GridDecider::Disk,
            Preset::Fig3 => GridDecider::RandomBergman {
                alpha: int(0),
                beta: int(1),
            },
            Preset::Fig4 => GridDecider::RandomBergman {
                alpha: int(0),
                beta: int(0),
            },
            Preset::Fig5 => GridDecider::RandomBergman {
                alpha: int(1),
                beta: int(0),
            },
        }
    }

    pub fn default_grid(self) -> GridSpec {
        DEFAULT_GRID.parse().expect("default grid is well formed")
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            _ => domain(format!("unknown preset {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRow {
    pub p: BigRational,
    pub q: BigRational,
    pub included: bool,
    pub rule: Rule,
}

/// Decides every grid point; rows run over `p` in the outer loop and `q` in
/// the inner loop.
pub fn region_grid(decider: &GridDecider, grid: &GridSpec) -> Result<Vec<GridRow>> {
    let ps = grid.p.points();
    let qs = grid.q.points();
    let cells: Vec<(&BigRational, &BigRational)> = ps
        .iter()
        .flat_map(|p| qs.iter().map(move |q| (p, q)))
        .collect();
    cells
        .into_par_iter()
        .map(|(p, q)| {
            let rule = decider.decide(p, q)?;
            Ok(GridRow {
                p: p.clone(),
                q: q.clone(),
                included: rule.included(),
                rule,
            })
        })
        .collect()
}

fn decimal(x: &BigRational) -> String {
    format!("{}", x.to_f64())
}

/// Writes `p,q,included,rule` rows.
pub fn write_csv<W: Write>(rows: &[GridRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "p,q,included,rule")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            decimal(&row.p),
            decimal(&row.q),
            row.included,
            row.rule
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn axis_points_are_exact() {
        let a: Axis = "0.25:6:23".parse().unwrap();
        let pts = a.points();
        assert_eq!(pts.len(), 24);
        assert_eq!(pts[0], r(1, 4));
        assert_eq!(pts[7], r(2, 1));
        assert_eq!(pts[23], r(6, 1));
        assert!("1:0:3".parse::<Axis>().is_err());
        assert!("0:1:0".parse::<Axis>().is_err());
        assert!("0:1".parse::<Axis>().is_err());
    }

    #[test]
    fn grid_spec_forms() {
        let g: GridSpec = "1:2:1,3:5:2".parse().unwrap();
        assert_eq!(g.q.points(), vec![r(3, 1), r(4, 1), r(5, 1)]);
        let g: GridSpec = "1:2:1".parse().unwrap();
        assert_eq!(g.p, g.q);
    }

    #[test]
    fn fig4_diagonal_is_included() {
        let rows = region_grid(&Preset::Fig4.decider(), &Preset::Fig4.default_grid()).unwrap();
        for row in rows {
            let want = row.p >= r(2, 1) && row.q <= row.p;
            assert_eq!(row.included, want, "{row:?}");
        }
    }

    #[test]
    fn csv_layout() {
        let rows = region_grid(&GridDecider::RandomHardy, &"1:2:1,1:1:1".parse().unwrap()).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "p,q,included,rule\n1,1,false,p-lt-2\n1,1,false,p-lt-2\n2,1,true,random-hardy\n2,1,true,random-hardy\n"
        );
    }
}
