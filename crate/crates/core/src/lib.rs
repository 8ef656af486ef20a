//! Design of experiments for BRDF measurement: analytic reflectance models,
//! sampling strategies over pairs of hemisphere directions, simulated noisy
//! measurement, estimators, function-space distances and costs, and the
//! machinery for deciding which sampling strategy learns a BRDF (or a class
//! of BRDFs) more efficiently.

pub mod brdf;
pub mod efficiency;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod measurement;
pub mod objectives;
pub mod sampling;

pub use brdf::{AnalyticModel, Brdf, BrdfClass, Family, TabulatedBrdf};
pub use efficiency::{ExperimentPlan, GroundTruth, PlanReport, Verdict};
pub use error::{Error, Result};
pub use estimation::{fit, Estimator};
pub use geometry::Direction;
pub use measurement::{simulate_measurements, MeasurementSet, NoiseModel};
pub use objectives::{cost, dist, CostSpec, DistSpec, Majorant};
pub use sampling::{MeasurementConfiguration, SamplingStrategy, StrategyFamily};
