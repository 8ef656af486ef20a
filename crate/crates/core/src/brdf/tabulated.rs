//! BRDFs defined by a measurement set and a scattered-data interpolation rule.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Brdf;
use crate::error::{invalid_param, Result};
use crate::geometry::{angle_between, Direction, Vec3};
use crate::measurement::MeasurementSet;

/// Distance below which a query counts as hitting a stored sample.
pub const EXACT_HIT: f64 = 1e-12;

/// Added to `d^q` in inverse-distance weights.
pub const IDW_REGULARIZER: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Interpolation {
    /// Value of the sample nearest in the product angular metric.
    Nearest,
    /// Inverse-distance weighting over the `neighbors` nearest samples.
    Idw { power: f64, neighbors: usize },
}

impl Interpolation {
    pub fn validate(&self) -> Result<()> {
        if let Interpolation::Idw { power, neighbors } = *self {
            if !(power.is_finite() && power > 0.0) {
                return Err(invalid_param("power", format!("{power} must be > 0")));
            }
            if neighbors == 0 {
                return Err(invalid_param("neighbors", "must be >= 1"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Group {
    incoming: Vec3,
    /// Reflection unit vectors and their index into the value list.
    reflections: Vec<(Vec3, usize)>,
}

/// An interpolated measurement set. Neighbor search is exact (brute force),
/// pruned per incoming direction.
#[derive(Debug, Clone)]
pub struct TabulatedBrdf {
    set: MeasurementSet,
    rule: Interpolation,
    groups: Vec<Group>,
}

impl TabulatedBrdf {
    pub fn new(set: MeasurementSet, rule: Interpolation) -> Result<Self> {
        rule.validate()?;
        if set.is_empty() {
            return Err(crate::error::Error::EmptyMeasurementSet);
        }
        let c = set.configuration();
        let mut index = 0;
        let groups = c
            .incoming()
            .iter()
            .zip(c.reflections())
            .map(|(wi, refl)| Group {
                incoming: wi.to_unit_vector(),
                reflections: refl
                    .iter()
                    .map(|wr| {
                        index += 1;
                        (wr.to_unit_vector(), index - 1)
                    })
                    .collect(),
            })
            .collect();
        Ok(TabulatedBrdf { set, rule, groups })
    }

    pub fn set(&self) -> &MeasurementSet {
        &self.set
    }

    pub fn rule(&self) -> Interpolation {
        self.rule
    }

    /// The `k` samples nearest to `(wi, wr)` as `(distance, value index)`,
    /// sorted by distance then index.
    pub fn nearest(&self, wi: &Direction, wr: &Direction, k: usize) -> Vec<(f64, usize)> {
        let qi = wi.to_unit_vector();
        let qr = wr.to_unit_vector();
        let mut order: Vec<(f64, &Group)> = self
            .groups
            .iter()
            .map(|g| (angle_between(&qi, &g.incoming), g))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        for (di, g) in order {
            let di2 = di * di;
            if best.len() == k && di2 > best[k - 1].0 {
                break;
            }
            for (v, idx) in &g.reflections {
                let dr = angle_between(&qr, v);
                let d2 = di2 + dr * dr;
                if best.len() == k && by_distance(&(d2, *idx), &best[k - 1]) != Ordering::Less {
                    continue;
                }
                let pos = best.partition_point(|e| by_distance(e, &(d2, *idx)) == Ordering::Less);
                best.insert(pos, (d2, *idx));
                best.truncate(k);
            }
        }
        best.into_iter().map(|(d2, i)| (d2.sqrt(), i)).collect()
    }
}

fn by_distance(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

impl Brdf for TabulatedBrdf {
    fn eval(&self, wi: &Direction, wr: &Direction) -> f64 {
        let values = self.set.values();
        match self.rule {
            Interpolation::Nearest => values[self.nearest(wi, wr, 1)[0].1],
            Interpolation::Idw { power, neighbors } => {
                let near = self.nearest(wi, wr, neighbors.min(values.len()));
                if near[0].0 < EXACT_HIT {
                    return values[near[0].1];
                }
                let (mut num, mut den) = (0.0, 0.0);
                for (d, i) in near {
                    let w = 1.0 / (d.powf(power) + IDW_REGULARIZER);
                    num += w * values[i];
                    den += w;
                }
                num / den
            }
        }
    }

    fn id(&self) -> String {
        let rule = match self.rule {
            Interpolation::Nearest => "nearest".to_string(),
            Interpolation::Idw { power, neighbors } => format!("idw(q={power},k={neighbors})"),
        };
        format!("tabulated({rule},n={})", self.set.n())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pair_distance;
    use crate::measurement::Provenance;
    use crate::sampling::{uniform_random, uniform_sphere, MeasurementConfiguration};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn table(c: MeasurementConfiguration, rule: Interpolation) -> TabulatedBrdf {
        let values = (0..c.n()).map(|k| (k as f64 * 0.37).sin().abs()).collect();
        TabulatedBrdf::new(
            MeasurementSet::new(c, values, Provenance::ingested()).unwrap(),
            rule,
        )
        .unwrap()
    }

    fn random_dir(rng: &mut impl Rng) -> Direction {
        Direction::new(rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * TAU).unwrap()
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        let t = table(uniform_random(300, 4).unwrap(), Interpolation::Nearest);
        let pairs: Vec<_> = t.set().configuration().pairs().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (a, b) = (random_dir(&mut rng), random_dir(&mut rng));
            let mut brute: Vec<(f64, usize)> = pairs
                .iter()
                .enumerate()
                .map(|(k, p)| (pair_distance((&a, &b), *p), k))
                .collect();
            brute.sort_by(by_distance);
            let fast = t.nearest(&a, &b, 7);
            for (x, y) in fast.iter().zip(&brute) {
                assert!((x.0 - y.0).abs() < 1e-12);
            }
            assert_eq!(fast[0].1, brute[0].1);
        }
    }

    #[test]
    fn reproduces_stored_values() {
        for rule in [
            Interpolation::Nearest,
            Interpolation::Idw {
                power: 2.0,
                neighbors: 16,
            },
        ] {
            let t = table(uniform_sphere(200).unwrap(), rule);
            for (wi, wr, v) in t.set().samples() {
                assert_eq!(t.eval(wi, wr), v);
            }
        }
    }

    #[test]
    fn rejects_bad_rules() {
        let c = uniform_sphere(4).unwrap();
        let set = MeasurementSet::new(c, vec![0.0; 4], Provenance::ingested()).unwrap();
        for rule in [
            Interpolation::Idw {
                power: 0.0,
                neighbors: 4,
            },
            Interpolation::Idw {
                power: 2.0,
                neighbors: 0,
            },
        ] {
            assert!(TabulatedBrdf::new(set.clone(), rule).is_err());
        }
    }
}
