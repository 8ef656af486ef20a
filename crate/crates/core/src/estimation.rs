//! Estimators: from a measurement set to an evaluatable BRDF.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::brdf::{
    cook_torrance_from_geometry, cos_to_mirror, phong_from_cos, AnalyticModel, Brdf,
    CookTorranceParams, Family, Interpolation, MicrofacetGeometry, PhongParams, TabulatedBrdf,
};
use crate::error::{invalid_param, Error, Result};
use crate::geometry::Direction;
use crate::measurement::MeasurementSet;

pub const DEFAULT_IDW_POWER: f64 = 2.0;
pub const DEFAULT_IDW_NEIGHBORS: usize = 16;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

/// Projected-gradient norm below which a fit counts as converged.
pub const GRADIENT_TOLERANCE: f64 = 1e-6;

const MAX_EXPONENT: f64 = 1e4;
const MIN_ROUGHNESS: f64 = 1e-3;
const INITIAL_FRESNEL: f64 = 0.5;

/// JSON form: `{"kind": ..., "params": {...}}`; `params` may be omitted when
/// every parameter has a default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEstimator", into = "RawEstimator")]
pub enum Estimator {
    NearestNeighbor,
    Idw {
        power: f64,
        neighbors: usize,
    },
    ParametricFit {
        family: Family,
        max_iterations: usize,
    },
}

impl Default for Estimator {
    fn default() -> Self {
        Estimator::idw()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEstimator {
    kind: String,
    #[serde(default)]
    params: Option<Value>,
}

impl TryFrom<RawEstimator> for Estimator {
    type Error = Error;

    fn try_from(raw: RawEstimator) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Empty {}
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Idw {
            #[serde(default = "default_power")]
            power: f64,
            #[serde(default = "default_neighbors")]
            neighbors: usize,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Fit {
            family: Family,
            #[serde(default = "default_iterations")]
            max_iterations: usize,
        }
        fn default_power() -> f64 {
            DEFAULT_IDW_POWER
        }
        fn default_neighbors() -> usize {
            DEFAULT_IDW_NEIGHBORS
        }
        fn default_iterations() -> usize {
            DEFAULT_MAX_ITERATIONS
        }
        let params = raw.params.unwrap_or_else(|| json!({}));
        let kind = raw.kind;
        let bad = |e: serde_json::Error| invalid_param(&format!("{kind}.params"), e.to_string());
        let e = match kind.as_str() {
            "nearest_neighbor" => {
                serde_json::from_value::<Empty>(params).map_err(bad)?;
                Estimator::NearestNeighbor
            }
            "idw" => {
                let p: Idw = serde_json::from_value(params).map_err(bad)?;
                Estimator::Idw {
                    power: p.power,
                    neighbors: p.neighbors,
                }
            }
            "parametric_fit" => {
                let p: Fit = serde_json::from_value(params).map_err(bad)?;
                Estimator::ParametricFit {
                    family: p.family,
                    max_iterations: p.max_iterations,
                }
            }
            other => {
                return Err(invalid_param(
                    "kind",
                    format!(
                        "unknown estimator `{other}` (expected nearest_neighbor, idw or parametric_fit)"
                    ),
                ))
            }
        };
        e.validate()?;
        Ok(e)
    }
}

impl From<Estimator> for RawEstimator {
    fn from(e: Estimator) -> Self {
        let (kind, params) = match e {
            Estimator::NearestNeighbor => ("nearest_neighbor", json!({})),
            Estimator::Idw { power, neighbors } => {
                ("idw", json!({ "power": power, "neighbors": neighbors }))
            }
            Estimator::ParametricFit {
                family,
                max_iterations,
            } => (
                "parametric_fit",
                json!({ "family": family, "max_iterations": max_iterations }),
            ),
        };
        RawEstimator {
            kind: kind.to_string(),
            params: Some(params),
        }
    }
}

impl Estimator {
    pub fn idw() -> Self {
        Estimator::Idw {
            power: DEFAULT_IDW_POWER,
            neighbors: DEFAULT_IDW_NEIGHBORS,
        }
    }

    pub fn parametric(family: Family) -> Self {
        Estimator::ParametricFit {
            family,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Estimator::NearestNeighbor => Ok(()),
            Estimator::Idw { power, neighbors } => {
                Interpolation::Idw { power, neighbors }.validate()
            }
            Estimator::ParametricFit {
                max_iterations: 0, ..
            } => Err(invalid_param("max_iterations", "must be >= 1")),
            Estimator::ParametricFit { .. } => Ok(()),
        }
    }
}

/// An estimated BRDF.
#[derive(Debug, Clone)]
pub enum Estimate {
    Tabulated(TabulatedBrdf),
    Parametric(AnalyticModel),
}

impl Brdf for Estimate {
    fn eval(&self, wi: &Direction, wr: &Direction) -> f64 {
        match self {
            Estimate::Tabulated(t) => t.eval(wi, wr),
            Estimate::Parametric(m) => m.eval(wi, wr),
        }
    }

    fn id(&self) -> String {
        match self {
            Estimate::Tabulated(t) => t.id(),
            Estimate::Parametric(m) => m.id(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub estimate: Estimate,
    /// False when a parametric fit stopped with its projected gradient norm
    /// above [`GRADIENT_TOLERANCE`]; the estimate is then the best iterate.
    pub converged: bool,
    pub iterations: usize,
    pub gradient_norm: f64,
}

/// `𝓔ₙ(m)`.
pub fn fit(e: &Estimator, m: &MeasurementSet) -> Result<FitOutcome> {
    e.validate()?;
    if m.is_empty() {
        return Err(Error::EmptyMeasurementSet);
    }
    let tabulated = |rule| -> Result<FitOutcome> {
        Ok(FitOutcome {
            estimate: Estimate::Tabulated(TabulatedBrdf::new(m.clone(), rule)?),
            converged: true,
            iterations: 0,
            gradient_norm: 0.0,
        })
    };
    match *e {
        Estimator::NearestNeighbor => tabulated(Interpolation::Nearest),
        Estimator::Idw { power, neighbors } => tabulated(Interpolation::Idw { power, neighbors }),
        Estimator::ParametricFit {
            family,
            max_iterations,
        } => {
            if m.n() < family.arity() {
                return Err(Error::TooFewSamples {
                    needed: family.arity(),
                    got: m.n(),
                });
            }
            let problem = Problem::new(family, m);
            Ok(problem.solve(max_iterations))
        }
    }
}

/// Evaluates a fitted estimate.
pub fn evaluate_estimate(g: &FitOutcome, wi: &Direction, wr: &Direction) -> f64 {
    g.estimate.eval(wi, wr)
}

/// Per-sample geometry that does not depend on model parameters.
#[derive(Debug, Clone, Copy)]
enum SampleGeometry {
    None,
    Phong(f64),
    Microfacet(MicrofacetGeometry),
}

/// Least-squares problem `min Σ (f_θ(pair_k) − v_k)²` for one family.
struct Problem {
    family: Family,
    samples: Vec<SampleGeometry>,
    values: Vec<f64>,
}

/// Model value and its gradient with respect to the parameters.
fn value_and_gradient(family: Family, theta: &[f64], g: &SampleGeometry) -> (f64, [f64; 4]) {
    match (family, g) {
        (Family::Lambertian, _) => (theta[0] * FRAC_1_PI, [FRAC_1_PI, 0.0, 0.0, 0.0]),
        (Family::Phong, SampleGeometry::Phong(cos_alpha)) => {
            let p = PhongParams {
                kd: theta[0],
                ks: theta[1],
                exponent: theta[2],
            };
            let value = phong_from_cos(&p, *cos_alpha);
            let c = cos_alpha.max(0.0);
            let lobe = c.powf(p.exponent);
            let d_exponent = if c > 0.0 {
                p.ks / (2.0 * PI) * lobe * (1.0 + (p.exponent + 2.0) * c.ln())
            } else {
                0.0
            };
            (
                value,
                [
                    FRAC_1_PI,
                    (p.exponent + 2.0) / (2.0 * PI) * lobe,
                    d_exponent,
                    0.0,
                ],
            )
        }
        (Family::CookTorrance, SampleGeometry::Microfacet(geom)) => {
            let p = CookTorranceParams {
                kd: theta[0],
                ks: theta[1],
                roughness: theta[2],
                fresnel_f0: theta[3],
            };
            let value = cook_torrance_from_geometry(&p, geom);
            let scale = geom.shadowing / (4.0 * geom.cos_i * geom.cos_r);
            let (d, d_rough) = match geom.tan2_h() {
                None => (0.0, 0.0),
                Some(t2) => {
                    let m = p.roughness;
                    let m2 = m * m;
                    let c2 = geom.cos_h * geom.cos_h;
                    let d = (-t2 / m2).exp() / (PI * m2 * c2 * c2);
                    (d, d * (2.0 * t2 / (m2 * m) - 2.0 / m))
                }
            };
            let tail = (1.0 - geom.h_dot).powi(5);
            let fresnel = p.fresnel_f0 + (1.0 - p.fresnel_f0) * tail;
            (
                value,
                [
                    FRAC_1_PI,
                    d * fresnel * scale,
                    p.ks * d_rough * fresnel * scale,
                    p.ks * d * (1.0 - tail) * scale,
                ],
            )
        }
        _ => unreachable!("sample geometry built for another family"),
    }
}

impl Problem {
    fn new(family: Family, m: &MeasurementSet) -> Self {
        let samples = m
            .samples()
            .map(|(wi, wr, _)| {
                let (a, b) = (wi.to_unit_vector(), wr.to_unit_vector());
                match family {
                    Family::Lambertian => SampleGeometry::None,
                    Family::Phong => SampleGeometry::Phong(cos_to_mirror(&a, &b)),
                    Family::CookTorrance => {
                        SampleGeometry::Microfacet(MicrofacetGeometry::new(&a, &b))
                    }
                }
            })
            .collect();
        Problem {
            family,
            samples,
            values: m.values().to_vec(),
        }
    }

    fn arity(&self) -> usize {
        self.family.arity()
    }

    fn cost(&self, theta: &[f64]) -> f64 {
        self.samples
            .iter()
            .zip(&self.values)
            .map(|(g, v)| {
                let r = value_and_gradient(self.family, theta, g).0 - v;
                r * r
            })
            .sum()
    }

    /// Cost, gradient `2 Jᵀr`, and Gauss–Newton matrix `JᵀJ`.
    fn linearize(&self, theta: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let k = self.arity();
        let mut cost = 0.0;
        let mut jtr = vec![0.0; k];
        let mut jtj = vec![vec![0.0; k]; k];
        for (g, v) in self.samples.iter().zip(&self.values) {
            let (f, row) = value_and_gradient(self.family, theta, g);
            let r = f - v;
            cost += r * r;
            for a in 0..k {
                jtr[a] += row[a] * r;
                for b in 0..k {
                    jtj[a][b] += row[a] * row[b];
                }
            }
        }
        (cost, jtr.into_iter().map(|x| 2.0 * x).collect(), jtj)
    }

    /// Projects onto the family's parameter domain.
    fn project(&self, theta: &mut [f64]) {
        if self.family == Family::Lambertian {
            theta[0] = theta[0].clamp(0.0, 1.0);
            return;
        }
        let (kd, ks) = project_energy(theta[0], theta[1]);
        theta[0] = kd;
        theta[1] = ks;
        match self.family {
            Family::Phong => theta[2] = theta[2].clamp(0.0, MAX_EXPONENT),
            Family::CookTorrance => {
                theta[2] = theta[2].clamp(MIN_ROUGHNESS, 1.0);
                theta[3] = theta[3].clamp(0.0, 1.0);
            }
            Family::Lambertian => unreachable!(),
        }
    }

    fn projected_gradient_norm(&self, theta: &[f64], grad: &[f64]) -> f64 {
        let mut moved: Vec<f64> = theta.iter().zip(grad).map(|(t, g)| t - g).collect();
        self.project(&mut moved);
        theta
            .iter()
            .zip(&moved)
            .map(|(t, m)| (t - m).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Deterministic starting point: `kd = π·mean(v)` clamped to `[0, 1]`,
    /// `ks = (1 − kd)/2`, and the shape parameter picked by an 8-point search.
    fn initial(&self) -> Vec<f64> {
        let mean = self.values.iter().sum::<f64>() / self.values.len() as f64;
        let kd = (mean * PI).clamp(0.0, 1.0);
        let ks = (1.0 - kd).max(0.0) / 2.0;
        let candidates: Vec<Vec<f64>> = match self.family {
            Family::Lambertian => return vec![kd],
            Family::Phong => (0..8)
                .map(|k| vec![kd, ks, 1024f64.powf(k as f64 / 7.0)])
                .collect(),
            Family::CookTorrance => [0.05, 0.1, 0.15, 0.2, 0.3, 0.45, 0.65, 1.0]
                .iter()
                .map(|&m| vec![kd, ks, m, INITIAL_FRESNEL])
                .collect(),
        };
        candidates
            .into_iter()
            .map(|c| (self.cost(&c), c))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, c)| c)
            .expect("eight candidates")
    }

    /// Levenberg–Marquardt with Marquardt scaling and projection onto the
    /// parameter bounds.
    fn solve(&self, max_iterations: usize) -> FitOutcome {
        let mut theta = self.initial();
        self.project(&mut theta);
        let mut lambda = 1e-3;
        let (mut cost, mut grad, mut jtj) = self.linearize(&theta);
        let mut gnorm = self.projected_gradient_norm(&theta, &grad);
        let mut iterations = 0;
        while iterations < max_iterations && gnorm > GRADIENT_TOLERANCE {
            iterations += 1;
            let mut stalled = true;
            while lambda < 1e16 {
                let k = self.arity();
                let mut a = jtj.clone();
                for i in 0..k {
                    a[i][i] += lambda * jtj[i][i].max(1e-12);
                }
                let rhs: Vec<f64> = grad.iter().map(|g| -0.5 * g).collect();
                let Some(step) = solve_linear(a, rhs) else {
                    lambda *= 4.0;
                    continue;
                };
                let mut trial: Vec<f64> = theta.iter().zip(&step).map(|(t, s)| t + s).collect();
                self.project(&mut trial);
                let trial_cost = self.cost(&trial);
                if trial_cost < cost {
                    theta = trial;
                    lambda = (lambda / 3.0).max(1e-12);
                    stalled = false;
                    break;
                }
                lambda *= 4.0;
            }
            if stalled {
                break;
            }
            (cost, grad, jtj) = self.linearize(&theta);
            gnorm = self.projected_gradient_norm(&theta, &grad);
        }
        FitOutcome {
            estimate: Estimate::Parametric(AnalyticModel::from_params(self.family, &theta)),
            converged: gnorm <= GRADIENT_TOLERANCE,
            iterations,
            gradient_norm: gnorm,
        }
    }
}

/// Euclidean projection onto `{kd, ks ≥ 0, kd + ks ≤ 1}`.
fn project_energy(kd: f64, ks: f64) -> (f64, f64) {
    let (kd, ks) = (kd.max(0.0), ks.max(0.0));
    if kd + ks <= 1.0 {
        return (kd, ks);
    }
    let shift = 0.5 * (kd + ks - 1.0);
    let (kd, ks) = (kd - shift, ks - shift);
    if kd < 0.0 {
        (0.0, 1.0)
    } else if ks < 0.0 {
        (1.0, 0.0)
    } else {
        (kd, ks)
    }
}

/// Gaussian elimination with partial pivoting; `None` for a singular system.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 || !a[pivot][col].is_finite() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (target, source) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target -= factor * source;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brdf::LambertianParams;
    use crate::measurement::{simulate_measurements, NoiseModel, Provenance};
    use crate::objectives::{dist, DistSpec, QuadratureSpec};
    use crate::sampling::{uniform_sphere, MeasurementConfiguration};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn d(t: f64, p: f64) -> Direction {
        Direction::new(t, p).unwrap()
    }

    fn set(pairs: Vec<(Direction, Direction)>, values: Vec<f64>) -> MeasurementSet {
        MeasurementSet::new(
            MeasurementConfiguration::from_pairs(pairs).unwrap(),
            values,
            Provenance::ingested(),
        )
        .unwrap()
    }

    #[test]
    fn single_sample_nearest_is_constant() {
        let m = set(vec![(d(0.3, 1.0), d(0.7, 2.0))], vec![0.42]);
        let g = fit(&Estimator::NearestNeighbor, &m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = d(rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * TAU);
            let b = d(rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * TAU);
            assert_eq!(evaluate_estimate(&g, &a, &b), 0.42);
        }
    }

    #[test]
    fn idw_equal_distances_average() {
        let q = d(0.5, 1.0);
        let m = set(vec![(q, d(0.3, 1.0)), (q, d(0.7, 1.0))], vec![1.0, 3.0]);
        let g = fit(&Estimator::idw(), &m).unwrap();
        assert!((evaluate_estimate(&g, &q, &d(0.5, 1.0)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn idw_stays_in_neighbor_range() {
        let c = uniform_sphere(300).unwrap();
        let f = AnalyticModel::Phong(PhongParams {
            kd: 0.1,
            ks: 0.6,
            exponent: 30.0,
        });
        let m = simulate_measurements(&f, &c, &NoiseModel::additive(0.05), 3).unwrap();
        let e = Estimator::Idw {
            power: 2.0,
            neighbors: 16,
        };
        let Estimate::Tabulated(t) = fit(&e, &m).unwrap().estimate else {
            panic!("idw returns a table")
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = d(rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * TAU);
            let b = d(rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * TAU);
            let near = t.nearest(&a, &b, 16);
            let vals: Vec<f64> = near.iter().map(|(_, i)| m.values()[*i]).collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let v = t.eval(&a, &b);
            assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }

    #[test]
    fn empty_and_underdetermined_sets_are_rejected() {
        let m = set(vec![(d(0.3, 1.0), d(0.7, 2.0))], vec![0.42]);
        assert_eq!(
            fit(&Estimator::parametric(Family::Phong), &m).unwrap_err(),
            Error::TooFewSamples { needed: 3, got: 1 }
        );
    }

    #[test]
    fn lambertian_fit_is_exact() {
        let f = AnalyticModel::Lambertian(LambertianParams { albedo: 0.5 });
        let m =
            simulate_measurements(&f, &uniform_sphere(64).unwrap(), &NoiseModel::NONE, 0).unwrap();
        let g = fit(&Estimator::parametric(Family::Lambertian), &m).unwrap();
        let Estimate::Parametric(AnalyticModel::Lambertian(p)) = g.estimate else {
            panic!()
        };
        assert!((p.albedo - 0.5).abs() < 1e-9);
        assert!(g.converged);
    }

    #[test]
    fn phong_fit_recovers_parameters() {
        let truth = [0.2, 0.5, 20.0];
        let f = AnalyticModel::from_params(Family::Phong, &truth);
        let m =
            simulate_measurements(&f, &uniform_sphere(512).unwrap(), &NoiseModel::NONE, 0).unwrap();
        let g = fit(&Estimator::parametric(Family::Phong), &m).unwrap();
        let Estimate::Parametric(model) = g.estimate else {
            panic!()
        };
        for (got, want) in model.params().iter().zip(truth) {
            assert!(((got - want) / want).abs() < 1e-4, "{:?}", model.params());
        }
        assert!(g.converged, "gradient {}", g.gradient_norm);
    }

    #[test]
    fn cook_torrance_fit_reduces_error() {
        let f = AnalyticModel::from_params(Family::CookTorrance, &[0.3, 0.6, 0.3, 0.9]);
        let m =
            simulate_measurements(&f, &uniform_sphere(512).unwrap(), &NoiseModel::NONE, 0).unwrap();
        let g = fit(&Estimator::parametric(Family::CookTorrance), &m).unwrap();
        let spec = DistSpec::l2(QuadratureSpec::product_gauss(6));
        let err = dist(&spec, &g.estimate, &f).unwrap();
        let baseline = dist(
            &spec,
            &AnalyticModel::from_params(Family::Lambertian, &[0.3]),
            &f,
        )
        .unwrap();
        assert!(
            err < 1e-3 * baseline,
            "{err} vs {baseline}: {:?}",
            g.estimate
        );
    }

    #[test]
    fn iteration_limit_flags_non_convergence() {
        let f = AnalyticModel::from_params(Family::Phong, &[0.2, 0.5, 20.0]);
        let m =
            simulate_measurements(&f, &uniform_sphere(256).unwrap(), &NoiseModel::NONE, 0).unwrap();
        let e = Estimator::ParametricFit {
            family: Family::Phong,
            max_iterations: 1,
        };
        let g = fit(&e, &m).unwrap();
        assert!(!g.converged && g.iterations == 1 && g.gradient_norm > GRADIENT_TOLERANCE);
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let h = 1e-6;
        for family in [Family::Lambertian, Family::Phong, Family::CookTorrance] {
            for _ in 0..10 {
                let theta: Vec<f64> = match family {
                    Family::Lambertian => vec![rng.random_range(0.1..0.9)],
                    Family::Phong => vec![
                        rng.random_range(0.05..0.4),
                        rng.random_range(0.1..0.5),
                        rng.random_range(2.0..60.0),
                    ],
                    Family::CookTorrance => vec![
                        rng.random_range(0.05..0.4),
                        rng.random_range(0.1..0.5),
                        rng.random_range(0.1..0.8),
                        rng.random_range(0.05..0.95),
                    ],
                };
                // A pair near the specular peak so every derivative is non-trivial.
                let wi = d(rng.random_range(0.1..1.2), rng.random_range(0.0..TAU));
                let wr = d(
                    (wi.theta() + rng.random_range(-0.1..0.1)).clamp(0.0, 1.5),
                    wi.mirror_reflect().phi(),
                );
                let m = set(vec![(wi, wr)], vec![0.0]);
                let problem = Problem::new(family, &m);
                let geom = problem.samples[0];
                let (_, grad) = value_and_gradient(family, &theta, &geom);
                for k in 0..family.arity() {
                    let mut up = theta.clone();
                    let mut down = theta.clone();
                    up[k] += h;
                    down[k] -= h;
                    let model = |t: &[f64]| AnalyticModel::from_params(family, t).eval(&wi, &wr);
                    let fd = (model(&up) - model(&down)) / (2.0 * h);
                    assert!(
                        (grad[k] - fd).abs() <= 1e-4 * fd.abs().max(1e-8),
                        "{family:?} param {k}: {} vs {fd}",
                        grad[k]
                    );
                }
            }
        }
    }

    #[test]
    fn nearest_neighbor_is_consistent() {
        let spec = DistSpec::default();
        let errors = |truth: &AnalyticModel| -> Vec<f64> {
            [16, 64, 256, 1024]
                .iter()
                .map(|&b| {
                    let m = simulate_measurements(
                        truth,
                        &uniform_sphere(b).unwrap(),
                        &NoiseModel::NONE,
                        0,
                    )
                    .unwrap();
                    let est = fit(&Estimator::NearestNeighbor, &m).unwrap();
                    dist(&spec, &est.estimate, truth).unwrap()
                })
                .collect()
        };
        // A constant BRDF is reproduced exactly from any number of samples.
        let lambert = AnalyticModel::Lambertian(LambertianParams { albedo: 0.5 });
        assert_eq!(errors(&lambert), vec![0.0; 4]);
        let phong = AnalyticModel::Phong(PhongParams {
            kd: 0.3,
            ks: 0.4,
            exponent: 8.0,
        });
        let e = errors(&phong);
        assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
    }

    #[test]
    fn estimator_json() {
        let e: Estimator = serde_json::from_str(r#"{"kind":"idw"}"#).unwrap();
        assert_eq!(e, Estimator::idw());
        let e: Estimator =
            serde_json::from_str(r#"{"kind":"parametric_fit","params":{"family":"phong"}}"#)
                .unwrap();
        assert_eq!(e, Estimator::parametric(Family::Phong));
        for bad in [
            r#"{"kind":"idw","params":{"power":0}}"#,
            r#"{"kind":"idw","params":{"q":2}}"#,
            r#"{"kind":"kriging"}"#,
            r#"{"kind":"parametric_fit","params":{"family":"phong","max_iterations":0}}"#,
        ] {
            assert!(serde_json::from_str::<Estimator>(bad).is_err(), "{bad}");
        }
        let back: Estimator = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn energy_projection() {
        let (kd, ks) = project_energy(0.8, 0.6);
        assert!((kd - 0.6).abs() < 1e-15 && (ks - 0.4).abs() < 1e-15);
        assert_eq!(project_energy(1.5, -0.2), (1.0, 0.0));
        assert_eq!(project_energy(0.2, 0.3), (0.2, 0.3));
        assert_eq!(project_energy(-0.1, 1.4), (0.0, 1.0));
    }
}
