//! Greedy adaptive design: grow a measured configuration one pair at a time,
//! always measuring where the local spread of observed values times the gap
//! to the nearest existing sample is largest.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grids::{check_budget, uniform_sphere, uniform_sphere_phased};
use super::MeasurementConfiguration;
use crate::error::{Error, Result};
use crate::geometry::{Direction, Vec3};

/// Additive floor on the value range so that flat regions still order by
/// distance.
pub const RANGE_EPSILON: f64 = 1e-12;

/// Number of nearest existing samples whose value range enters the score.
pub const SCORE_NEIGHBORS: usize = 4;

/// Measurement callback: `(ω_i, ω_r, acquisition index) → observed value`.
pub type Probe<'a> = &'a (dyn Fn(&Direction, &Direction, u64) -> f64 + Sync + 'a);

/// Tuning knobs for [`adaptive_greedy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveParams {
    /// Candidate pool size as a multiple of the budget.
    pub oversampling: usize,
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        AdaptiveParams { oversampling: 10 }
    }
}

/// A configuration together with the values observed while building it,
/// aligned with the configuration's pair order.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveRun {
    pub configuration: MeasurementConfiguration,
    pub values: Vec<f64>,
}

/// Size of the initial uniform design: `max(8, budget / 4)`.
pub fn adaptive_seed_size(budget: usize) -> usize {
    (budget / 4).max(8)
}

/// Chord-based angle: `2 asin(|a − b| / 2)`.
#[inline]
fn chord_angle(a: &Vec3, b: &Vec3) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let c = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    2.0 * (0.5 * c).min(1.0).asin()
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    wi: Vec3,
    wr: Vec3,
    value: f64,
}

impl Sample {
    fn distance(&self, wi: &Vec3, wr: &Vec3) -> f64 {
        chord_angle(&self.wi, wi).hypot(chord_angle(&self.wr, wr))
    }
}

struct Candidate {
    wi: Direction,
    wr: Direction,
    ui: Vec3,
    ur: Vec3,
    /// Nearest existing samples as (distance, value), ascending.
    nearest: Vec<(f64, f64)>,
}

impl Candidate {
    fn offer(&mut self, d: f64, value: f64) {
        if self.nearest.len() == SCORE_NEIGHBORS && d >= self.nearest[SCORE_NEIGHBORS - 1].0 {
            return;
        }
        let pos = self.nearest.partition_point(|&(e, _)| e <= d);
        self.nearest.insert(pos, (d, value));
        self.nearest.truncate(SCORE_NEIGHBORS);
    }

    fn score(&self) -> f64 {
        let gap = self.nearest.first().map_or(f64::INFINITY, |n| n.0);
        let (lo, hi) = self
            .nearest
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| {
                (lo.min(v), hi.max(v))
            });
        let range = if hi >= lo { hi - lo } else { 0.0 };
        (range + RANGE_EPSILON) * gap
    }

    fn order_key(&self) -> [f64; 4] {
        [
            self.wi.theta(),
            self.wi.phi(),
            self.wr.theta(),
            self.wr.phi(),
        ]
    }
}

/// `true` when `a` should be preferred over `b`: higher score, then the
/// lexicographically smaller `(θ_i, φ_i, θ_r, φ_r)`.
fn prefer(a: (f64, [f64; 4]), b: (f64, [f64; 4])) -> bool {
    match a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            a.1.iter()
                .zip(&b.1)
                .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
                .find(|o| *o != Ordering::Equal)
                == Some(Ordering::Less)
        }
    }
}

type PairKey = ([u64; 2], [u64; 2]);

fn pair_key(wi: &Direction, wr: &Direction) -> PairKey {
    (wi.key(), wr.key())
}

/// Greedy adaptive design grown to `budget` pairs.
///
/// `observed` lists pairs already measured, with their values; when it is
/// empty the run starts from the Fibonacci design of size
/// [`adaptive_seed_size`]. New pairs are measured through `probe`, whose
/// third argument counts acquisitions made by this run, starting at 0.
pub fn adaptive_greedy_run(
    budget: usize,
    observed: &[(Direction, Direction, f64)],
    seed: u64,
    params: AdaptiveParams,
    probe: Probe<'_>,
) -> Result<AdaptiveRun> {
    check_budget(budget)?;
    if budget < observed.len() {
        return Err(Error::BudgetBelowObservations {
            budget,
            observed: observed.len(),
        });
    }
    let mut acquisitions = 0u64;
    let mut order: Vec<(Direction, Direction, f64)> = if observed.is_empty() {
        let start = uniform_sphere(adaptive_seed_size(budget))?;
        start
            .pairs()
            .map(|(wi, wr)| {
                let v = probe(wi, wr, acquisitions);
                acquisitions += 1;
                (*wi, *wr, v)
            })
            .collect()
    } else {
        observed.to_vec()
    };

    if order.len() < budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = uniform_sphere_phased(
            params.oversampling.max(1) * budget,
            rng.random::<f64>(),
            rng.random::<f64>(),
        )?;
        let taken: HashSet<PairKey> = order.iter().map(|(a, b, _)| pair_key(a, b)).collect();
        let samples: Vec<Sample> = order
            .iter()
            .map(|(a, b, v)| Sample {
                wi: a.to_unit_vector(),
                wr: b.to_unit_vector(),
                value: *v,
            })
            .collect();
        let mut pool: Vec<Candidate> = pool
            .pairs()
            .filter(|(a, b)| !taken.contains(&pair_key(a, b)))
            .map(|(a, b)| {
                let mut c = Candidate {
                    wi: *a,
                    wr: *b,
                    ui: a.to_unit_vector(),
                    ur: b.to_unit_vector(),
                    nearest: Vec::with_capacity(SCORE_NEIGHBORS + 1),
                };
                for s in &samples {
                    c.offer(s.distance(&c.ui, &c.ur), s.value);
                }
                c
            })
            .collect();

        while order.len() < budget && !pool.is_empty() {
            let mut best = 0;
            for k in 1..pool.len() {
                if prefer(
                    (pool[k].score(), pool[k].order_key()),
                    (pool[best].score(), pool[best].order_key()),
                ) {
                    best = k;
                }
            }
            let chosen = pool.swap_remove(best);
            let value = probe(&chosen.wi, &chosen.wr, acquisitions);
            acquisitions += 1;
            let s = Sample {
                wi: chosen.ui,
                wr: chosen.ur,
                value,
            };
            for c in &mut pool {
                c.offer(s.distance(&c.ui, &c.ur), value);
            }
            order.push((chosen.wi, chosen.wr, value));
        }
    }

    let configuration =
        MeasurementConfiguration::from_pairs(order.iter().map(|(a, b, _)| (*a, *b)))?;
    let lookup: HashMap<PairKey, f64> =
        order.iter().map(|(a, b, v)| (pair_key(a, b), *v)).collect();
    let values = configuration
        .pairs()
        .map(|(a, b)| lookup[&pair_key(a, b)])
        .collect();
    Ok(AdaptiveRun {
        configuration,
        values,
    })
}

/// Configuration produced by [`adaptive_greedy_run`].
pub fn adaptive_greedy(
    budget: usize,
    observed: &[(Direction, Direction, f64)],
    seed: u64,
    probe: Probe<'_>,
) -> Result<MeasurementConfiguration> {
    adaptive_greedy_run(budget, observed, seed, AdaptiveParams::default(), probe)
        .map(|r| r.configuration)
}
