//! Measurement configurations and the sampling-strategy families that
//! generate them from a budget.

mod adaptive;
mod configuration;
mod grids;

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use adaptive::{
    adaptive_greedy, adaptive_greedy_run, adaptive_seed_size, AdaptiveParams, AdaptiveRun, Probe,
    RANGE_EPSILON, SCORE_NEIGHBORS,
};
pub use configuration::MeasurementConfiguration;
pub use grids::{
    equispaced_directions, equispaced_grid, equispaced_grid_with_resolution, fibonacci_hemisphere,
    grid_resolution, random_hemisphere, specular_grid, specular_grid_with_cone,
    specular_reflections, uniform_random, uniform_sphere, uniform_split, SpecularReflections,
    GOLDEN_RATIO_CONJUGATE, SPECULAR_CONE_HALF_ANGLE,
};

use crate::error::{invalid_param, Error, Result};

/// Point-set variant used by the uniform family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniformVariant {
    #[default]
    Fibonacci,
    Random,
}

/// A strategy family together with its family-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrategyFamily {
    EquispacedGrid,
    UniformSphere {
        variant: UniformVariant,
    },
    SpecularGrid {
        concentration: f64,
        cone_half_angle: f64,
    },
    AdaptiveGreedy {
        oversampling: usize,
    },
}

impl StrategyFamily {
    pub fn name(&self) -> &'static str {
        match self {
            StrategyFamily::EquispacedGrid => "equispaced_grid",
            StrategyFamily::UniformSphere { .. } => "uniform_sphere",
            StrategyFamily::SpecularGrid { .. } => "specular_grid",
            StrategyFamily::AdaptiveGreedy { .. } => "adaptive_greedy",
        }
    }

    /// Whether generation needs to observe the BRDF being measured.
    pub fn is_adaptive(&self) -> bool {
        matches!(self, StrategyFamily::AdaptiveGreedy { .. })
    }

    /// Every family with its default parameters, in listing order.
    pub fn defaults() -> [StrategyFamily; 4] {
        [
            StrategyFamily::EquispacedGrid,
            StrategyFamily::UniformSphere {
                variant: UniformVariant::Fibonacci,
            },
            StrategyFamily::SpecularGrid {
                concentration: 3.0,
                cone_half_angle: SPECULAR_CONE_HALF_ANGLE,
            },
            StrategyFamily::AdaptiveGreedy { oversampling: 10 },
        ]
    }

    /// Parameters as they appear under `params` in JSON.
    pub fn params_json(&self) -> Value {
        match *self {
            StrategyFamily::EquispacedGrid => json!({}),
            StrategyFamily::UniformSphere { variant } => json!({ "variant": variant }),
            StrategyFamily::SpecularGrid {
                concentration,
                cone_half_angle,
            } => json!({ "concentration": concentration, "cone_half_angle": cone_half_angle }),
            StrategyFamily::AdaptiveGreedy { oversampling } => {
                json!({ "oversampling": oversampling })
            }
        }
    }

    fn from_json(family: &str, params: Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Empty {}
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Uniform {
            #[serde(default)]
            variant: UniformVariant,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Specular {
            #[serde(default = "default_concentration")]
            concentration: f64,
            #[serde(default = "default_cone")]
            cone_half_angle: f64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Adaptive {
            #[serde(default = "default_oversampling")]
            oversampling: usize,
        }
        fn default_concentration() -> f64 {
            3.0
        }
        fn default_cone() -> f64 {
            SPECULAR_CONE_HALF_ANGLE
        }
        fn default_oversampling() -> usize {
            10
        }
        let bad = |e: serde_json::Error| invalid_param(&format!("{family}.params"), e.to_string());
        let fam = match family {
            "equispaced_grid" => {
                serde_json::from_value::<Empty>(params).map_err(bad)?;
                StrategyFamily::EquispacedGrid
            }
            "uniform_sphere" => {
                let p: Uniform = serde_json::from_value(params).map_err(bad)?;
                StrategyFamily::UniformSphere { variant: p.variant }
            }
            "specular_grid" => {
                let p: Specular = serde_json::from_value(params).map_err(bad)?;
                StrategyFamily::SpecularGrid {
                    concentration: p.concentration,
                    cone_half_angle: p.cone_half_angle,
                }
            }
            "adaptive_greedy" => {
                let p: Adaptive = serde_json::from_value(params).map_err(bad)?;
                StrategyFamily::AdaptiveGreedy {
                    oversampling: p.oversampling,
                }
            }
            other => {
                return Err(invalid_param(
                    "family",
                    format!(
                        "unknown strategy family `{other}` (expected equispaced_grid, \
                         uniform_sphere, specular_grid or adaptive_greedy)"
                    ),
                ))
            }
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StrategyFamily::SpecularGrid {
                concentration,
                cone_half_angle,
            } => {
                if !(concentration.is_finite() && concentration > 0.0) {
                    return Err(invalid_param("concentration", "must be finite and > 0"));
                }
                if !(cone_half_angle > 0.0 && cone_half_angle <= std::f64::consts::FRAC_PI_2) {
                    return Err(invalid_param("cone_half_angle", "must lie in (0, π/2]"));
                }
                Ok(())
            }
            StrategyFamily::AdaptiveGreedy { oversampling: 0 } => {
                Err(invalid_param("oversampling", "must be >= 1"))
            }
            _ => Ok(()),
        }
    }
}

/// A sampling strategy: a family, its parameters, and the seed of any
/// randomness it uses. Maps a budget `n₀` to a configuration with at least
/// `n₀` pairs.
///
/// JSON form: `{"family": ..., "params": {...}, "seed": 7, "name": "..."}`,
/// where `params`, `seed`, and `name` are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStrategy", into = "RawStrategy")]
pub struct SamplingStrategy {
    pub family: StrategyFamily,
    pub seed: u64,
    /// Label used in reports; defaults to the family name.
    pub name: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStrategy {
    family: String,
    #[serde(default)]
    params: Option<Value>,
    #[serde(default)]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl TryFrom<RawStrategy> for SamplingStrategy {
    type Error = Error;

    fn try_from(raw: RawStrategy) -> Result<Self> {
        let params = raw.params.unwrap_or_else(|| json!({}));
        Ok(SamplingStrategy {
            family: StrategyFamily::from_json(&raw.family, params)?,
            seed: raw.seed,
            name: raw.name,
        })
    }
}

impl From<SamplingStrategy> for RawStrategy {
    fn from(s: SamplingStrategy) -> Self {
        RawStrategy {
            family: s.family.name().to_string(),
            params: Some(s.family.params_json()),
            seed: s.seed,
            name: s.name,
        }
    }
}

impl fmt::Display for SamplingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl SamplingStrategy {
    pub fn new(family: StrategyFamily, seed: u64) -> Self {
        SamplingStrategy {
            family,
            seed,
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| self.family.name().to_string())
    }

    /// Configuration for `budget`. Adaptive strategies need `probe` to observe
    /// the BRDF; use [`SamplingStrategy::measured_configuration`] to keep the
    /// values they observed.
    pub fn configuration(
        &self,
        budget: usize,
        probe: Option<Probe<'_>>,
    ) -> Result<MeasurementConfiguration> {
        match self.family {
            StrategyFamily::EquispacedGrid => equispaced_grid(budget),
            StrategyFamily::UniformSphere {
                variant: UniformVariant::Fibonacci,
            } => uniform_sphere(budget),
            StrategyFamily::UniformSphere {
                variant: UniformVariant::Random,
            } => uniform_random(budget, self.seed),
            StrategyFamily::SpecularGrid {
                concentration,
                cone_half_angle,
            } => specular_grid_with_cone(budget, concentration, cone_half_angle),
            StrategyFamily::AdaptiveGreedy { .. } => self
                .measured_configuration(budget, probe)
                .map(|r| r.configuration),
        }
    }

    /// Adaptive generation that also returns the observed values.
    pub fn measured_configuration(
        &self,
        budget: usize,
        probe: Option<Probe<'_>>,
    ) -> Result<AdaptiveRun> {
        let StrategyFamily::AdaptiveGreedy { oversampling } = self.family else {
            return Err(invalid_param(
                "family",
                format!(
                    "{} does not observe values while sampling",
                    self.family.name()
                ),
            ));
        };
        let probe = probe.ok_or_else(|| Error::OracleRequired(self.label()))?;
        adaptive_greedy_run(
            budget,
            &[],
            self.seed,
            AdaptiveParams { oversampling },
            probe,
        )
    }
}

/// Checks that `budgets` is nonempty and strictly ascending.
pub fn check_budgets(budgets: &[usize]) -> Result<()> {
    if budgets.is_empty() || budgets[0] == 0 || budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BudgetsNotAscending(budgets.to_vec()));
    }
    Ok(())
}

/// Generates the strategy's configurations for ascending `budgets` and checks
/// that their sizes never decrease.
pub fn strategy_sequence(
    s: &SamplingStrategy,
    budgets: &[usize],
    probe: Option<Probe<'_>>,
) -> Result<Vec<MeasurementConfiguration>> {
    check_budgets(budgets)?;
    let configs = budgets
        .iter()
        .map(|&b| s.configuration(b, probe))
        .collect::<Result<Vec<_>>>()?;
    for (k, w) in configs.windows(2).enumerate() {
        if w[0].n() > w[1].n() {
            return Err(Error::MonotonicityViolated {
                prev_budget: budgets[k],
                prev: w[0].n(),
                budget: budgets[k + 1],
                size: w[1].n(),
            });
        }
    }
    Ok(configs)
}
