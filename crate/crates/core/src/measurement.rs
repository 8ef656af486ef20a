//! Simulated measurement: a seeded stochastic transformation from a
//! ground-truth BRDF and a configuration to observed values.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brdf::Brdf;
use crate::error::{invalid_param, Error, Result};
use crate::geometry::Direction;
use crate::sampling::MeasurementConfiguration;

/// Identifier of the per-point noise generator, recorded in provenance.
pub const NOISE_RNG: &str = "chacha8(splitmix64(seed, index))";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    #[default]
    None,
    AdditiveGaussian,
    RelativeGaussian,
}

/// How observed values deviate from the ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    #[serde(default)]
    pub kind: NoiseKind,
    /// Standard deviation: in BRDF units for additive noise, dimensionless for
    /// relative noise.
    #[serde(default)]
    pub sigma: f64,
    /// Clamp observed values at zero. Defaults to on for relative noise and
    /// off otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clamp_negative: Option<bool>,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        kind: NoiseKind::None,
        sigma: 0.0,
        clamp_negative: None,
    };

    pub fn additive(sigma: f64) -> Self {
        NoiseModel {
            kind: NoiseKind::AdditiveGaussian,
            sigma,
            clamp_negative: None,
        }
    }

    pub fn relative(sigma: f64) -> Self {
        NoiseModel {
            kind: NoiseKind::RelativeGaussian,
            sigma,
            clamp_negative: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(invalid_param(
                "sigma",
                format!("{} must be >= 0", self.sigma),
            ));
        }
        Ok(())
    }

    pub fn clamps(&self) -> bool {
        self.clamp_negative
            .unwrap_or(self.kind == NoiseKind::RelativeGaussian)
    }

    /// True when observations equal the ground truth exactly.
    pub fn is_exact(&self) -> bool {
        self.kind == NoiseKind::None || self.sigma == 0.0
    }

    /// Observation of `truth` at point `index` under `seed`.
    pub fn observe(&self, truth: f64, seed: u64, index: u64) -> f64 {
        if self.is_exact() {
            return if self.clamps() { truth.max(0.0) } else { truth };
        }
        let eps: f64 = StandardNormal.sample(&mut point_rng(seed, index));
        let v = match self.kind {
            NoiseKind::None => truth,
            NoiseKind::AdditiveGaussian => truth + self.sigma * eps,
            NoiseKind::RelativeGaussian => truth * (1.0 + self.sigma * eps),
        };
        if self.clamps() {
            v.max(0.0)
        } else {
            v
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Combines a seed with a stream index into a new, well-mixed seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x6A09_E667_F3BC_C909)))
}

fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, index))
}

/// Where a measurement set came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Ground-truth identifier, or `"ingested"`.
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

impl Provenance {
    pub fn ingested() -> Self {
        Provenance {
            source: "ingested".into(),
            noise: None,
            seed: None,
            rng: None,
        }
    }
}

/// A configuration plus one observed value per pair, in pair order.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    configuration: MeasurementConfiguration,
    values: Vec<f64>,
    pub provenance: Provenance,
}

impl MeasurementSet {
    pub fn new(
        configuration: MeasurementConfiguration,
        values: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if values.len() != configuration.n() {
            return Err(Error::ValueCountMismatch {
                values: values.len(),
                pairs: configuration.n(),
            });
        }
        Ok(MeasurementSet {
            configuration,
            values,
            provenance,
        })
    }

    pub fn configuration(&self) -> &MeasurementConfiguration {
        &self.configuration
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(ω_i, ω_r, value)` triples in pair order.
    pub fn samples(&self) -> impl Iterator<Item = (&Direction, &Direction, f64)> + '_ {
        self.configuration
            .pairs()
            .zip(&self.values)
            .map(|((a, b), v)| (a, b, *v))
    }

    /// Same samples, ignoring provenance.
    pub fn same_samples(&self, other: &MeasurementSet) -> bool {
        self.configuration == other.configuration && self.values == other.values
    }
}

/// Measures `f` on every pair of `c`.
///
/// Each point's noise is drawn from a generator keyed by `(seed, pair index)`,
/// so the result does not depend on evaluation order.
pub fn simulate_measurements(
    f: &dyn Brdf,
    c: &MeasurementConfiguration,
    noise: &NoiseModel,
    seed: u64,
) -> Result<MeasurementSet> {
    noise.validate()?;
    let pairs: Vec<(&Direction, &Direction)> = c.pairs().collect();
    let values = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (wi, wr))| noise.observe(f.eval(wi, wr), seed, k as u64))
        .collect();
    MeasurementSet::new(
        c.clone(),
        values,
        Provenance {
            source: f.id(),
            noise: Some(*noise),
            seed: Some(seed),
            rng: (!noise.is_exact()).then(|| NOISE_RNG.to_string()),
        },
    )
}
