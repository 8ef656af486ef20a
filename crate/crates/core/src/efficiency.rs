//! Comparing sampling strategies: error curves, the finite-budget efficiency
//! verdict between two strategies, class-averaged curves, and selection of the
//! best admissible candidate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brdf::{draw_from_class, AnalyticModel, Brdf, BrdfClass};
use crate::error::{invalid_param, Error, Result};
use crate::estimation::{fit, Estimator};
use crate::measurement::{
    derive_seed, simulate_measurements, MeasurementSet, NoiseModel, Provenance, NOISE_RNG,
};
use crate::objectives::{
    assess_admissibility, cost, AdmissibilityMode, AdmissibilityReport, CostSpec, DistSpec,
    Distance, Majorant,
};
use crate::sampling::{
    check_budgets, strategy_sequence, MeasurementConfiguration, SamplingStrategy,
};

/// Decision margin of the tail-statistic verdict.
pub const VERDICT_MARGIN: f64 = 0.05;

/// Version of the serialized report layout.
pub const REPORT_SCHEMA: u32 = 1;

const TAIL_RULE: &str = "tail statistic = max of e1(n)/e2(n) over the last ceil(len/2) budgets, \
                         a finite-budget surrogate for the limsup as n grows";

/// What the estimates are compared against: one model, or `draws` models
/// drawn from a class.
///
/// JSON form: `{"model": {...}}` or `{"class": {...}, "draws": 50}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGroundTruth", into = "RawGroundTruth")]
pub enum GroundTruth {
    Model(AnalyticModel),
    Class { class: BrdfClass, draws: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroundTruth {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<AnalyticModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<BrdfClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    draws: Option<usize>,
}

impl TryFrom<RawGroundTruth> for GroundTruth {
    type Error = Error;

    fn try_from(raw: RawGroundTruth) -> Result<Self> {
        let truth = match (raw.model, raw.class, raw.draws) {
            (Some(m), None, None) => GroundTruth::Model(m),
            (None, Some(class), Some(draws)) => GroundTruth::Class { class, draws },
            (None, Some(_), None) => {
                return Err(invalid_param("ground_truth.draws", "required with `class`"))
            }
            (Some(_), _, _) => {
                return Err(invalid_param(
                    "ground_truth",
                    "`model` cannot be combined with `class` or `draws`",
                ))
            }
            (None, None, _) => {
                return Err(invalid_param(
                    "ground_truth",
                    "needs either `model` or `class`",
                ))
            }
        };
        truth.validate()?;
        Ok(truth)
    }
}

impl From<GroundTruth> for RawGroundTruth {
    fn from(g: GroundTruth) -> Self {
        match g {
            GroundTruth::Model(m) => RawGroundTruth {
                model: Some(m),
                class: None,
                draws: None,
            },
            GroundTruth::Class { class, draws } => RawGroundTruth {
                model: None,
                class: Some(class),
                draws: Some(draws),
            },
        }
    }
}

impl GroundTruth {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroundTruth::Model(m) => m.validate(),
            GroundTruth::Class { class, draws } => {
                class.validate()?;
                if *draws < 2 {
                    return Err(invalid_param("ground_truth.draws", "must be >= 2"));
                }
                Ok(())
            }
        }
    }

    /// The models errors are averaged over.
    pub fn models(&self) -> Result<Vec<AnalyticModel>> {
        match self {
            GroundTruth::Model(m) => Ok(vec![*m]),
            GroundTruth::Class { class, draws } => draw_from_class(class, *draws),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    /// Compare when there are exactly two strategies, otherwise select.
    #[default]
    Auto,
    Compare,
    Select,
}

fn default_majorant() -> Majorant {
    Majorant::Linear { a: 2.0, b: 0.0 }
}

fn default_replicates() -> usize {
    1
}

/// A complete experiment: ground truth, candidate strategies, estimator,
/// distance, cost constraint, budgets, noise, and seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub ground_truth: GroundTruth,
    pub strategies: Vec<SamplingStrategy>,
    #[serde(default)]
    pub estimator: Estimator,
    #[serde(default)]
    pub dist: DistSpec,
    #[serde(default)]
    pub cost: CostSpec,
    /// Defaults to `C_max(n) = 2n`.
    #[serde(default = "default_majorant")]
    pub majorant: Majorant,
    #[serde(default)]
    pub admissibility: AdmissibilityMode,
    pub budgets: Vec<usize>,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub seed: u64,
    /// Noise realizations averaged per cell.
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub analysis: Analysis,
}

impl ExperimentPlan {
    /// A plan with default estimator, distance, cost, majorant, and noise.
    pub fn new(
        ground_truth: GroundTruth,
        strategies: Vec<SamplingStrategy>,
        budgets: Vec<usize>,
    ) -> Self {
        ExperimentPlan {
            ground_truth,
            strategies,
            estimator: Estimator::default(),
            dist: DistSpec::default(),
            cost: CostSpec::default(),
            majorant: default_majorant(),
            admissibility: AdmissibilityMode::default(),
            budgets,
            noise: NoiseModel::default(),
            seed: 0,
            replicates: 1,
            analysis: Analysis::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ground_truth.validate()?;
        if self.strategies.is_empty() {
            return Err(Error::InvalidPlan(
                "at least one strategy is required".into(),
            ));
        }
        for s in &self.strategies {
            s.family.validate()?;
        }
        if self.analysis == Analysis::Compare && self.strategies.len() != 2 {
            return Err(Error::InvalidPlan(format!(
                "comparison needs exactly 2 strategies, got {}",
                self.strategies.len()
            )));
        }
        self.estimator.validate()?;
        self.dist.validate()?;
        self.cost.validate()?;
        self.majorant.validate()?;
        check_budgets(&self.budgets)?;
        self.noise.validate()?;
        if self.replicates == 0 {
            return Err(invalid_param("replicates", "must be >= 1"));
        }
        Ok(())
    }

    /// Report labels, one per strategy; repeated labels get `-2`, `-3`, ...
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::with_capacity(self.strategies.len());
        for s in &self.strategies {
            let base = s.label();
            let mut label = base.clone();
            let mut k = 1;
            while out.contains(&label) {
                k += 1;
                label = format!("{base}-{k}");
            }
            out.push(label);
        }
        out
    }

    fn resolved_analysis(&self) -> Analysis {
        match self.analysis {
            Analysis::Auto if self.strategies.len() == 2 => Analysis::Compare,
            Analysis::Auto => Analysis::Select,
            a => a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub budget: usize,
    /// Configuration size; the mean over draws for data-dependent strategies.
    pub n: f64,
    pub cost: f64,
    /// Distance to the ground truth, averaged over replicates and draws.
    pub error: f64,
    /// Standard error of `error` across draws (class) or replicates (single
    /// model); absent when only one value was averaged.
    pub standard_error: Option<f64>,
    /// Parametric fits that stopped before converging.
    pub nonconverged_fits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCurve {
    pub strategy: String,
    pub points: Vec<CurvePoint>,
}

impl ErrorCurve {
    pub fn budgets(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.budget).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.error).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Strategy1MoreEfficient,
    Strategy2MoreEfficient,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub budget: usize,
    pub error1: f64,
    pub error2: f64,
    /// `error1 / error2`; absent when `error2` is zero.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyComparisonReport {
    pub strategy1: String,
    pub strategy2: String,
    pub trajectory: Vec<RatioPoint>,
    pub tail_budgets: Vec<usize>,
    /// Tail budgets whose ratio is undefined.
    pub excluded_budgets: Vec<usize>,
    pub tail_statistic: Option<f64>,
    /// The same statistic with the strategies swapped.
    pub reverse_tail_statistic: Option<f64>,
    pub margin: f64,
    pub verdict: Verdict,
    pub rule: String,
}

fn tail_max(values: &[Option<f64>]) -> Option<f64> {
    values
        .iter()
        .flatten()
        .copied()
        .fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |a| a.max(r)))
        })
}

/// Efficiency verdict between two error curves on the same budgets.
pub fn compare_curves(c1: &ErrorCurve, c2: &ErrorCurve) -> Result<StrategyComparisonReport> {
    if c1.budgets() != c2.budgets() {
        return Err(Error::InvalidPlan(
            "compared curves must share their budgets".into(),
        ));
    }
    let trajectory: Vec<RatioPoint> = c1
        .points
        .iter()
        .zip(&c2.points)
        .map(|(a, b)| RatioPoint {
            budget: a.budget,
            error1: a.error,
            error2: b.error,
            ratio: (b.error != 0.0).then(|| a.error / b.error),
        })
        .collect();
    let tail = &trajectory[trajectory.len() - trajectory.len().div_ceil(2)..];
    let forward: Vec<Option<f64>> = tail.iter().map(|p| p.ratio).collect();
    let reverse: Vec<Option<f64>> = tail
        .iter()
        .map(|p| (p.error1 != 0.0).then(|| p.error2 / p.error1))
        .collect();
    let excluded_budgets: Vec<usize> = tail
        .iter()
        .filter(|p| p.ratio.is_none())
        .map(|p| p.budget)
        .collect();
    let reverse_excluded = reverse.iter().filter(|r| r.is_none()).count();
    let tail_statistic = tail_max(&forward);
    let reverse_tail_statistic = tail_max(&reverse);
    let decisive = |stat: Option<f64>, excluded: usize| {
        2 * excluded <= tail.len() && stat.is_some_and(|s| s < 1.0 - VERDICT_MARGIN)
    };
    let tail_budgets = tail.iter().map(|p| p.budget).collect();
    let verdict = if 2 * excluded_budgets.len() > tail.len() {
        Verdict::Inconclusive
    } else if decisive(tail_statistic, excluded_budgets.len()) {
        Verdict::Strategy1MoreEfficient
    } else if decisive(reverse_tail_statistic, reverse_excluded) {
        Verdict::Strategy2MoreEfficient
    } else {
        Verdict::Inconclusive
    };
    Ok(StrategyComparisonReport {
        strategy1: c1.strategy.clone(),
        strategy2: c2.strategy.clone(),
        trajectory,
        tail_budgets,
        excluded_budgets,
        tail_statistic,
        reverse_tail_statistic,
        margin: VERDICT_MARGIN,
        verdict,
        rule: TAIL_RULE.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetWinner {
    pub budget: usize,
    pub strategy: String,
    pub error: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    /// Winner at the largest budget.
    pub winner: String,
    pub winners: Vec<BudgetWinner>,
    /// Candidates that failed the admissibility check.
    pub excluded: Vec<String>,
}

/// Picks the lowest-error curve at each budget; ties go to the lower cost,
/// then to the earlier curve.
pub fn select_from_curves(curves: &[ErrorCurve], excluded: Vec<String>) -> Result<SelectionReport> {
    let first = curves.first().ok_or(Error::NoAdmissibleCandidate)?;
    let winners: Vec<BudgetWinner> = (0..first.points.len())
        .map(|k| {
            let best = curves
                .iter()
                .min_by(|a, b| {
                    let (pa, pb) = (&a.points[k], &b.points[k]);
                    pa.error
                        .total_cmp(&pb.error)
                        .then(pa.cost.total_cmp(&pb.cost))
                })
                .expect("nonempty");
            let p = &best.points[k];
            BudgetWinner {
                budget: p.budget,
                strategy: best.strategy.clone(),
                error: p.error,
                cost: p.cost,
            }
        })
        .collect();
    Ok(SelectionReport {
        winner: winners
            .last()
            .expect("budgets are nonempty")
            .strategy
            .clone(),
        winners,
        excluded,
    })
}

/// One evaluated `(strategy, budget, draw, replicate)` cell.
#[derive(Debug, Clone)]
struct Cell {
    error: f64,
    n: usize,
    cost: f64,
    converged: bool,
    set: MeasurementSet,
}

/// Configurations of a data-independent strategy, shared by all draws.
type FixedConfigurations = Option<Vec<MeasurementConfiguration>>;

/// A validated plan with its quadrature nodes and ground-truth draws.
pub struct Experiment<'a> {
    plan: &'a ExperimentPlan,
    distance: Distance,
    truths: Vec<AnalyticModel>,
    labels: Vec<String>,
}

/// Everything a plan run produces.
#[derive(Debug, Clone)]
pub struct PlanRun {
    pub report: PlanReport,
    /// Measurement set of the first draw and replicate for every strategy and
    /// budget, in strategy then budget order.
    pub samples: Vec<(String, usize, MeasurementSet)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub schema: u32,
    pub plan: ExperimentPlan,
    pub noise_rng: String,
    pub admissibility: Vec<AdmissibilityReport>,
    pub curves: Vec<ErrorCurve>,
    pub comparison: Option<StrategyComparisonReport>,
    pub selection: Option<SelectionReport>,
}

impl<'a> Experiment<'a> {
    pub fn new(plan: &'a ExperimentPlan) -> Result<Self> {
        plan.validate()?;
        Ok(Experiment {
            plan,
            distance: Distance::new(&plan.dist)?,
            truths: plan.ground_truth.models()?,
            labels: plan.labels(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Noise seed of a cell; shared by all strategies so that comparisons
    /// use common random numbers.
    fn noise_seed(&self, budget_index: usize, draw: usize, replicate: usize) -> u64 {
        let s = derive_seed(self.plan.seed, budget_index as u64);
        derive_seed(derive_seed(s, draw as u64), replicate as u64)
    }

    fn fixed_configurations(&self, strategy: &SamplingStrategy) -> Result<FixedConfigurations> {
        if strategy.family.is_adaptive() {
            Ok(None)
        } else {
            strategy_sequence(strategy, &self.plan.budgets, None).map(Some)
        }
    }

    fn cell(
        &self,
        strategy: &SamplingStrategy,
        fixed: &FixedConfigurations,
        budget_index: usize,
        draw: usize,
        replicate: usize,
    ) -> Result<Cell> {
        let truth = &self.truths[draw];
        let seed = self.noise_seed(budget_index, draw, replicate);
        let noise = &self.plan.noise;
        let set = match fixed {
            Some(configs) => simulate_measurements(truth, &configs[budget_index], noise, seed)?,
            None => {
                let probe = |wi: &_, wr: &_, k: u64| noise.observe(truth.eval(wi, wr), seed, k);
                let run = strategy
                    .measured_configuration(self.plan.budgets[budget_index], Some(&probe))?;
                MeasurementSet::new(
                    run.configuration,
                    run.values,
                    Provenance {
                        source: truth.id(),
                        noise: Some(*noise),
                        seed: Some(seed),
                        rng: (!noise.is_exact()).then(|| NOISE_RNG.to_string()),
                    },
                )?
            }
        };
        let outcome = fit(&self.plan.estimator, &set)?;
        Ok(Cell {
            error: self.distance.eval(&outcome.estimate, truth),
            n: set.n(),
            cost: cost(&self.plan.cost, set.configuration()),
            converged: outcome.converged,
            set,
        })
    }

    /// Error curves of the given strategies, in order, with the sample sets
    /// of their first draw and replicate.
    fn curves(&self, which: &[usize]) -> Result<(Vec<ErrorCurve>, Vec<Vec<MeasurementSet>>)> {
        let plan = self.plan;
        let fixed: Vec<FixedConfigurations> = which
            .iter()
            .map(|&s| self.fixed_configurations(&plan.strategies[s]))
            .collect::<Result<_>>()?;
        let (nb, nd, nr) = (plan.budgets.len(), self.truths.len(), plan.replicates);
        let per_strategy = nb * nd * nr;
        let cells: Vec<Cell> = (0..which.len() * per_strategy)
            .into_par_iter()
            .map(|idx| {
                let (s, rest) = (idx / per_strategy, idx % per_strategy);
                let (b, rest) = (rest / (nd * nr), rest % (nd * nr));
                let (d, r) = (rest / nr, rest % nr);
                self.cell(&plan.strategies[which[s]], &fixed[s], b, d, r)
            })
            .collect::<Result<_>>()?;

        let mut curves = Vec::with_capacity(which.len());
        let mut samples = Vec::with_capacity(which.len());
        for (s, chunk) in cells.chunks(per_strategy).enumerate() {
            let mut points = Vec::with_capacity(nb);
            let mut sets = Vec::with_capacity(nb);
            for (b, block) in chunk.chunks(nd * nr).enumerate() {
                let per_draw: Vec<f64> = block
                    .chunks(nr)
                    .map(|reps| mean(reps.iter().map(|c| c.error)))
                    .collect();
                let spread: Vec<f64> = if nd > 1 {
                    per_draw.clone()
                } else {
                    block.iter().map(|c| c.error).collect()
                };
                points.push(CurvePoint {
                    budget: plan.budgets[b],
                    n: mean(block.iter().map(|c| c.n as f64)),
                    cost: mean(block.iter().map(|c| c.cost)),
                    error: mean(per_draw.iter().copied()),
                    standard_error: standard_error(&spread),
                    nonconverged_fits: block.iter().filter(|c| !c.converged).count(),
                });
                sets.push(block[0].set.clone());
            }
            curves.push(ErrorCurve {
                strategy: self.labels[which[s]].clone(),
                points,
            });
            samples.push(sets);
        }
        Ok((curves, samples))
    }

    /// Admissibility of every strategy. Data-dependent strategies are probed
    /// noise-free on the first ground-truth draw.
    pub fn admissibility(&self) -> Result<Vec<AdmissibilityReport>> {
        let plan = self.plan;
        let truth = &self.truths[0];
        let probe = |wi: &_, wr: &_, _k: u64| truth.eval(wi, wr);
        plan.strategies
            .iter()
            .zip(&self.labels)
            .map(|(s, label)| {
                let configs = strategy_sequence(s, &plan.budgets, Some(&probe))?;
                let pairs: Vec<_> = plan.budgets.iter().copied().zip(configs.iter()).collect();
                Ok(assess_admissibility(
                    label,
                    &pairs,
                    &plan.cost,
                    &plan.majorant,
                    plan.admissibility,
                ))
            })
            .collect()
    }

    /// Runs the analysis the plan asks for.
    pub fn run(&self) -> Result<PlanRun> {
        let plan = self.plan;
        let admissibility = self.admissibility()?;
        let analysis = plan.resolved_analysis();
        if analysis == Analysis::Compare {
            if let Some(bad) = admissibility.iter().find(|r| !r.admissible) {
                return Err(inadmissible(bad));
            }
        }
        let admitted: Vec<usize> = (0..plan.strategies.len())
            .filter(|&k| admissibility[k].admissible)
            .collect();
        if admitted.is_empty() {
            return Err(Error::NoAdmissibleCandidate);
        }
        let (curves, sets) = self.curves(&admitted)?;
        let (comparison, selection) = match analysis {
            Analysis::Compare => (Some(compare_curves(&curves[0], &curves[1])?), None),
            _ => {
                let excluded = admissibility
                    .iter()
                    .filter(|r| !r.admissible)
                    .map(|r| r.strategy.clone())
                    .collect();
                (None, Some(select_from_curves(&curves, excluded)?))
            }
        };
        let samples = curves
            .iter()
            .zip(sets)
            .flat_map(|(c, sets)| {
                c.points
                    .iter()
                    .zip(sets)
                    .map(|(p, set)| (c.strategy.clone(), p.budget, set))
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(PlanRun {
            report: PlanReport {
                schema: REPORT_SCHEMA,
                plan: plan.clone(),
                noise_rng: NOISE_RNG.to_string(),
                admissibility,
                curves,
                comparison,
                selection,
            },
            samples,
        })
    }
}

fn inadmissible(r: &AdmissibilityReport) -> Error {
    let e = r
        .entries
        .iter()
        .find(|e| !e.satisfied)
        .expect("an inadmissible report has a violating entry");
    Error::Inadmissible {
        strategy: r.strategy.clone(),
        budget: e.budget,
        n: e.n,
        cost: e.cost,
        bound: e.bound,
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    sum / count as f64
}

fn standard_error(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs.iter().copied());
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    Some((var / xs.len() as f64).sqrt())
}

fn strategy_index(plan: &ExperimentPlan, strategy: &SamplingStrategy) -> Result<usize> {
    plan.strategies
        .iter()
        .position(|s| s == strategy)
        .ok_or_else(|| {
            Error::InvalidPlan(format!(
                "strategy `{}` is not part of the plan",
                strategy.label()
            ))
        })
}

fn single_curve(plan: &ExperimentPlan, strategy: &SamplingStrategy) -> Result<ErrorCurve> {
    let mut plan = plan.clone();
    if strategy_index(&plan, strategy).is_err() {
        plan.strategies.push(strategy.clone());
    }
    let k = strategy_index(&plan, strategy)?;
    let exp = Experiment::new(&plan)?;
    Ok(exp.curves(&[k])?.0.remove(0))
}

/// `(budget, Dist(𝓔(f; Ω(budget)), f))` for a single ground-truth model.
pub fn error_curve(plan: &ExperimentPlan, strategy: &SamplingStrategy) -> Result<ErrorCurve> {
    if !matches!(plan.ground_truth, GroundTruth::Model(_)) {
        return Err(Error::InvalidPlan(
            "error_curve needs a single ground-truth model; use expected_error_curve for classes"
                .into(),
        ));
    }
    single_curve(plan, strategy)
}

/// Mean error over the class draws at each budget, with its standard error.
pub fn expected_error_curve(
    plan: &ExperimentPlan,
    strategy: &SamplingStrategy,
) -> Result<ErrorCurve> {
    if !matches!(plan.ground_truth, GroundTruth::Class { .. }) {
        return Err(Error::InvalidPlan(
            "expected_error_curve needs a BRDF class".into(),
        ));
    }
    single_curve(plan, strategy)
}

/// Efficiency verdict between the plan's two strategies, after checking both
/// are admissible.
pub fn compare_strategies(plan: &ExperimentPlan) -> Result<StrategyComparisonReport> {
    let mut plan = plan.clone();
    plan.analysis = Analysis::Compare;
    let run = Experiment::new(&plan)?.run()?;
    Ok(run.report.comparison.expect("compare analysis"))
}

/// Best admissible strategy per budget, with every candidate's curve.
pub fn select_best_strategy(plan: &ExperimentPlan) -> Result<(SelectionReport, Vec<ErrorCurve>)> {
    let mut plan = plan.clone();
    plan.analysis = Analysis::Select;
    let run = Experiment::new(&plan)?.run()?;
    Ok((
        run.report.selection.expect("select analysis"),
        run.report.curves,
    ))
}

/// Runs the plan end to end.
pub fn run_plan(plan: &ExperimentPlan) -> Result<PlanRun> {
    Experiment::new(plan)?.run()
}
