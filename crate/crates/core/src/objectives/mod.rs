//! Objectives: distances between BRDFs, costs of measurement
//! configurations, and cost majorants with the admissibility check built on
//! them.

mod cost;
mod quadrature;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cost::{
    assess_admissibility, check_admissible, cost, AdmissibilityEntry, AdmissibilityMode,
    AdmissibilityReport, CostSpec, Majorant,
};
pub use quadrature::{
    gauss_legendre, hemisphere_nodes, pairwise_sum, PairNodes, QuadratureRule, QuadratureSpec,
};

use crate::brdf::Brdf;
use crate::error::{invalid_param, Result};

/// Exponent of an `L_p` distance; `"inf"` in JSON selects the maximum norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExponent", into = "RawExponent")]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawExponent {
    Number(f64),
    Text(String),
}

impl TryFrom<RawExponent> for Exponent {
    type Error = crate::error::Error;

    fn try_from(raw: RawExponent) -> Result<Self> {
        let e = match raw {
            RawExponent::Number(p) => Exponent::Finite(p),
            RawExponent::Text(s) if matches!(s.as_str(), "inf" | "infinity") => Exponent::Infinity,
            RawExponent::Text(s) => {
                return Err(invalid_param(
                    "p",
                    format!("`{s}` is neither a number nor \"inf\""),
                ))
            }
        };
        e.validate()?;
        Ok(e)
    }
}

impl From<Exponent> for RawExponent {
    fn from(e: Exponent) -> Self {
        match e {
            Exponent::Finite(p) => RawExponent::Number(p),
            Exponent::Infinity => RawExponent::Text("inf".into()),
        }
    }
}

impl Exponent {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Exponent::Finite(p) if !(p.is_finite() && p >= 1.0) => {
                Err(invalid_param("p", format!("{p} must be >= 1")))
            }
            _ => Ok(()),
        }
    }
}

/// An `L_p` distance between BRDFs over (hemisphere)², evaluated with a
/// quadrature rule and normalized by the total quadrature weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistSpec {
    pub p: Exponent,
    pub quadrature: QuadratureSpec,
}

impl Default for DistSpec {
    fn default() -> Self {
        DistSpec {
            p: Exponent::Finite(2.0),
            quadrature: QuadratureSpec::product_gauss(8),
        }
    }
}

impl DistSpec {
    pub fn l2(quadrature: QuadratureSpec) -> Self {
        DistSpec {
            p: Exponent::Finite(2.0),
            quadrature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.p.validate()?;
        self.quadrature.validate()
    }
}

/// [`DistSpec`] with its quadrature nodes materialized, for repeated
/// distance evaluations.
#[derive(Debug, Clone)]
pub struct Distance {
    p: Exponent,
    nodes: PairNodes,
    total_weight: f64,
}

impl Distance {
    pub fn new(spec: &DistSpec) -> Result<Self> {
        spec.validate()?;
        let nodes = PairNodes::new(&spec.quadrature)?;
        let total_weight = pairwise_sum(&nodes.weights);
        Ok(Distance {
            p: spec.p,
            nodes,
            total_weight,
        })
    }

    pub fn nodes(&self) -> &PairNodes {
        &self.nodes
    }

    /// Weighted `L_p` distance from pointwise absolute differences at the
    /// quadrature nodes.
    pub fn from_differences(&self, diffs: &[f64]) -> f64 {
        match self.p {
            Exponent::Infinity => diffs.iter().cloned().fold(0.0, f64::max),
            Exponent::Finite(p) => {
                let terms: Vec<f64> = diffs
                    .iter()
                    .zip(&self.nodes.weights)
                    .map(|(d, w)| w * pow_abs(*d, p))
                    .collect();
                let mean = pairwise_sum(&terms) / self.total_weight;
                if p == 1.0 {
                    mean
                } else if p == 2.0 {
                    mean.sqrt()
                } else {
                    mean.powf(1.0 / p)
                }
            }
        }
    }

    pub fn eval(&self, f: &dyn Brdf, g: &dyn Brdf) -> f64 {
        let diffs: Vec<f64> = self
            .nodes
            .pairs
            .par_iter()
            .map(|(wi, wr)| (f.eval(wi, wr) - g.eval(wi, wr)).abs())
            .collect();
        self.from_differences(&diffs)
    }
}

#[inline]
fn pow_abs(d: f64, p: f64) -> f64 {
    let d = d.abs();
    if p == 1.0 {
        d
    } else if p == 2.0 {
        d * d
    } else {
        d.powf(p)
    }
}

/// `Dist(f, g)` under `spec`.
pub fn dist(spec: &DistSpec, f: &dyn Brdf, g: &dyn Brdf) -> Result<f64> {
    Ok(Distance::new(spec)?.eval(f, g))
}
