use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::sampling::{strategy_sequence, MeasurementConfiguration, Probe, SamplingStrategy};

/// Cost of a measurement configuration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    content = "params",
    rename_all = "snake_case",
    deny_unknown_fields
)]
pub enum CostSpec {
    /// Number of measured pairs.
    #[default]
    Cardinality,
    /// `Σ w(θ_i)·w(θ_r)` over pairs, with `w(θ) = Σ_k c_k θ^k`.
    WeightedPoints {
        /// Polynomial coefficients `c_0, c_1, ...`; all must be >= 0.
        weight: Vec<f64>,
    },
    /// Total L1 angular travel between consecutive pairs in configuration
    /// order, azimuth differences taken along the shorter arc.
    Travel,
}

impl CostSpec {
    pub fn validate(&self) -> Result<()> {
        if let CostSpec::WeightedPoints { weight } = self {
            if weight.is_empty() || weight.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
                return Err(invalid_param(
                    "cost.weight",
                    "coefficients must be a nonempty list of finite values >= 0",
                ));
            }
        }
        Ok(())
    }
}

fn polynomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn azimuth_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TAU;
    if d > PI {
        TAU - d
    } else {
        d
    }
}

/// `Cost(Ω)`.
pub fn cost(spec: &CostSpec, c: &MeasurementConfiguration) -> f64 {
    match spec {
        CostSpec::Cardinality => c.n() as f64,
        CostSpec::WeightedPoints { weight } => c
            .pairs()
            .map(|(wi, wr)| polynomial(weight, wi.theta()) * polynomial(weight, wr.theta()))
            .sum(),
        CostSpec::Travel => {
            let pairs: Vec<_> = c.pairs().collect();
            pairs
                .windows(2)
                .map(|w| {
                    let ((a, b), (x, y)) = (w[0], w[1]);
                    (a.theta() - x.theta()).abs()
                        + azimuth_gap(a.phi(), x.phi())
                        + (b.theta() - y.theta()).abs()
                        + azimuth_gap(b.phi(), y.phi())
                })
                .sum()
        }
    }
}

/// Upper bound `C_max(n)` on the cost of a configuration with `n` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Majorant {
    Constant {
        c: f64,
    },
    Linear {
        a: f64,
        b: f64,
    },
    /// Step function through `[n, C_max]` points sorted by `n`; uses the last
    /// point at or below `n`, or the first point below the table.
    Table {
        points: Vec<(usize, f64)>,
    },
}

impl Majorant {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Majorant::Constant { c } => c.is_finite() && *c > 0.0,
            Majorant::Linear { a, b } => a.is_finite() && b.is_finite() && *a >= 0.0 && a + b > 0.0,
            Majorant::Table { points } => {
                !points.is_empty()
                    && points.windows(2).all(|w| w[0].0 < w[1].0)
                    && points.iter().all(|(_, v)| v.is_finite() && *v > 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(invalid_param(
                "majorant",
                format!("{self:?} is not positive for every n >= 1"),
            ))
        }
    }

    pub fn at(&self, n: usize) -> f64 {
        match self {
            Majorant::Constant { c } => *c,
            Majorant::Linear { a, b } => a * n as f64 + b,
            Majorant::Table { points } => {
                let k = points.partition_point(|(m, _)| *m <= n);
                points[k.saturating_sub(1)].1
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibilityMode {
    /// `Cost(Ω_n) < C_max(n)` at every evaluated budget.
    #[default]
    Uniform,
    /// The bound holds from some evaluated budget onward.
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityEntry {
    pub budget: usize,
    /// Pair count of the generated configuration; the majorant is evaluated here.
    pub n: usize,
    pub cost: f64,
    pub bound: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub strategy: String,
    pub mode: AdmissibilityMode,
    pub admissible: bool,
    /// First evaluated budget whose configuration violates the bound.
    pub first_violation: Option<usize>,
    /// Smallest evaluated budget from which every later evaluated budget
    /// satisfies the bound.
    pub n_min: Option<usize>,
    pub entries: Vec<AdmissibilityEntry>,
}

/// Admissibility of already generated `(budget, configuration)` pairs.
pub fn assess_admissibility(
    strategy: &str,
    configs: &[(usize, &MeasurementConfiguration)],
    spec: &CostSpec,
    majorant: &Majorant,
    mode: AdmissibilityMode,
) -> AdmissibilityReport {
    let entries: Vec<AdmissibilityEntry> = configs
        .iter()
        .map(|(budget, c)| {
            let value = cost(spec, c);
            let bound = majorant.at(c.n());
            AdmissibilityEntry {
                budget: *budget,
                n: c.n(),
                cost: value,
                bound,
                satisfied: value < bound,
            }
        })
        .collect();
    let first_violation = entries.iter().find(|e| !e.satisfied).map(|e| e.budget);
    let tail_start = entries
        .iter()
        .rposition(|e| !e.satisfied)
        .map_or(0, |k| k + 1);
    let n_min = entries.get(tail_start).map(|e| e.budget);
    let admissible = match mode {
        AdmissibilityMode::Uniform => first_violation.is_none(),
        AdmissibilityMode::Asymptotic => n_min.is_some(),
    };
    AdmissibilityReport {
        strategy: strategy.to_string(),
        mode,
        admissible,
        first_violation,
        n_min,
        entries,
    }
}

/// Generates the strategy's configurations for `budgets` and checks them
/// against `majorant`.
pub fn check_admissible(
    strategy: &SamplingStrategy,
    spec: &CostSpec,
    majorant: &Majorant,
    budgets: &[usize],
    mode: AdmissibilityMode,
    probe: Option<Probe<'_>>,
) -> Result<AdmissibilityReport> {
    spec.validate()?;
    majorant.validate()?;
    let configs = strategy_sequence(strategy, budgets, probe)?;
    let pairs: Vec<(usize, &MeasurementConfiguration)> =
        budgets.iter().copied().zip(configs.iter()).collect();
    Ok(assess_admissibility(
        &strategy.label(),
        &pairs,
        spec,
        majorant,
        mode,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Direction;
    use crate::sampling::{
        equispaced_grid_with_resolution, uniform_sphere, StrategyFamily, UniformVariant,
    };
    use std::f64::consts::FRAC_PI_2;

    fn d(t: f64, p: f64) -> Direction {
        Direction::new(t, p).unwrap()
    }

    #[test]
    fn cardinality_counts_pairs() {
        let c = equispaced_grid_with_resolution(3, 4).unwrap();
        assert_eq!(cost(&CostSpec::Cardinality, &c), 144.0);
    }

    #[test]
    fn travel_single_step() {
        let c = MeasurementConfiguration::new(
            vec![Direction::NORMAL],
            vec![vec![Direction::NORMAL, d(FRAC_PI_2, 0.0)]],
        )
        .unwrap();
        assert!((cost(&CostSpec::Travel, &c) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn travel_uses_shorter_arc() {
        let c = MeasurementConfiguration::new(
            vec![d(0.5, 0.1)],
            vec![vec![d(0.3, 0.2), d(0.3, TAU - 0.2)]],
        )
        .unwrap();
        assert!((cost(&CostSpec::Travel, &c) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn weighted_points_hand_sum() {
        // Pairs (0.2 | 0.4), (0.2 | 1.0), (0.6 | 0.1) with w(θ) = 1 + θ:
        // 1.2·1.4 + 1.2·2.0 + 1.6·1.1 = 1.68 + 2.4 + 1.76 = 5.84
        let c = MeasurementConfiguration::new(
            vec![d(0.2, 0.0), d(0.6, 1.0)],
            vec![vec![d(0.4, 0.0), d(1.0, 2.0)], vec![d(0.1, 3.0)]],
        )
        .unwrap();
        let spec = CostSpec::WeightedPoints {
            weight: vec![1.0, 1.0],
        };
        assert!((cost(&spec, &c) - 5.84).abs() < 1e-12);
        assert!(CostSpec::WeightedPoints {
            weight: vec![1.0, -1.0]
        }
        .validate()
        .is_err());
    }

    #[test]
    fn majorant_forms() {
        assert_eq!(Majorant::Linear { a: 2.0, b: 0.0 }.at(10), 20.0);
        assert_eq!(Majorant::Constant { c: 5.0 }.at(99), 5.0);
        let t = Majorant::Table {
            points: vec![(10, 1.0), (100, 2.0)],
        };
        assert_eq!(
            (t.at(1), t.at(10), t.at(99), t.at(100), t.at(10_000)),
            (1.0, 1.0, 1.0, 2.0, 2.0)
        );
        assert!(Majorant::Linear { a: -1.0, b: 5.0 }.validate().is_err());
        assert!(Majorant::Constant { c: 0.0 }.validate().is_err());
        assert!(Majorant::Table { points: vec![] }.validate().is_err());
        let m: Majorant = serde_json::from_str(r#"{"kind":"linear","a":2,"b":0}"#).unwrap();
        assert_eq!(m, Majorant::Linear { a: 2.0, b: 0.0 });
        assert!(
            serde_json::from_str::<Majorant>(r#"{"kind":"linear","a":2,"b":0,"c":1}"#).is_err()
        );
    }

    #[test]
    fn cost_json() {
        let c: CostSpec = serde_json::from_str(r#"{"kind":"cardinality"}"#).unwrap();
        assert_eq!(c, CostSpec::Cardinality);
        let c: CostSpec =
            serde_json::from_str(r#"{"kind":"weighted_points","params":{"weight":[1,1]}}"#)
                .unwrap();
        assert_eq!(
            c,
            CostSpec::WeightedPoints {
                weight: vec![1.0, 1.0]
            }
        );
        assert!(serde_json::from_str::<CostSpec>(r#"{"kind":"travel","extra":1}"#).is_err());
    }

    #[test]
    fn linear_majorant_twice_n_always_admits_cardinality() {
        for family in StrategyFamily::defaults()
            .into_iter()
            .filter(|f| !f.is_adaptive())
        {
            let s = SamplingStrategy::new(family, 0);
            let r = check_admissible(
                &s,
                &CostSpec::Cardinality,
                &Majorant::Linear { a: 2.0, b: 0.0 },
                &[16, 64, 256],
                AdmissibilityMode::Uniform,
                None,
            )
            .unwrap();
            assert!(r.admissible && r.first_violation.is_none(), "{r:?}");
            assert_eq!(r.n_min, Some(16));
        }
    }

    #[test]
    fn half_n_majorant_fails_at_first_budget() {
        let s = SamplingStrategy::new(StrategyFamily::EquispacedGrid, 0);
        let r = check_admissible(
            &s,
            &CostSpec::Cardinality,
            &Majorant::Linear { a: 0.5, b: 0.0 },
            &[16, 64],
            AdmissibilityMode::Uniform,
            None,
        )
        .unwrap();
        assert!(!r.admissible);
        assert_eq!(r.first_violation, Some(16));
        assert_eq!(r.n_min, None);
    }

    #[test]
    fn asymptotic_mode_finds_n_min() {
        // Constant-plus-slack table: tight for small n, loose later.
        let s = SamplingStrategy::new(
            StrategyFamily::UniformSphere {
                variant: UniformVariant::Fibonacci,
            },
            0,
        );
        let m = Majorant::Table {
            points: vec![(1, 1.0), (200, 1e9)],
        };
        let budgets = [16, 64, 256, 1024];
        let uni = check_admissible(
            &s,
            &CostSpec::Cardinality,
            &m,
            &budgets,
            AdmissibilityMode::Uniform,
            None,
        )
        .unwrap();
        assert!(!uni.admissible);
        let asy = check_admissible(
            &s,
            &CostSpec::Cardinality,
            &m,
            &budgets,
            AdmissibilityMode::Asymptotic,
            None,
        )
        .unwrap();
        assert!(asy.admissible);
        assert_eq!(asy.n_min, Some(256));
        assert_eq!(asy.first_violation, Some(16));
    }

    #[test]
    fn travel_verdict_matches_recomputation() {
        let s = SamplingStrategy::new(
            StrategyFamily::UniformSphere {
                variant: UniformVariant::Fibonacci,
            },
            0,
        );
        let m = Majorant::Linear { a: 10.0, b: 0.0 };
        let budgets = [16, 64, 256];
        let r = check_admissible(
            &s,
            &CostSpec::Travel,
            &m,
            &budgets,
            AdmissibilityMode::Uniform,
            None,
        )
        .unwrap();
        for (e, &b) in r.entries.iter().zip(&budgets) {
            let c = uniform_sphere(b).unwrap();
            // Brute-force travel: explicit loop over the flattened pair list.
            let flat: Vec<[f64; 4]> = c
                .pairs()
                .map(|(a, b)| [a.theta(), a.phi(), b.theta(), b.phi()])
                .collect();
            let mut travel = 0.0;
            for step in flat.windows(2) {
                for (j, (next, prev)) in step[1].iter().zip(&step[0]).enumerate() {
                    let mut diff = (next - prev).abs();
                    if j % 2 == 1 && diff > PI {
                        diff = TAU - diff;
                    }
                    travel += diff;
                }
            }
            assert!((e.cost - travel).abs() <= 1e-9 * travel);
            assert_eq!(e.bound, 10.0 * c.n() as f64);
            assert_eq!(e.satisfied, travel < 10.0 * c.n() as f64);
        }
        assert_eq!(r.admissible, r.entries.iter().all(|e| e.satisfied));
    }
}
