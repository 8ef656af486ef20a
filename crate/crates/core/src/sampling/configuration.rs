use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::Direction;

/// A finite measurement design: the incoming directions and, for each of
/// them, the reflection directions that were measured.
///
/// The total pair count `n` is the sum of the per-incoming reflection counts.
/// Pairs are ordered incoming-major; that order is the instrument visit order
/// and the row order of serialized sample files.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementConfiguration {
    incoming: Vec<Direction>,
    reflections: Vec<Vec<Direction>>,
    n: usize,
}

impl MeasurementConfiguration {
    pub fn new(incoming: Vec<Direction>, reflections: Vec<Vec<Direction>>) -> Result<Self> {
        if incoming.is_empty() {
            return Err(Error::InvalidConfiguration(
                "at least one incoming direction is required".into(),
            ));
        }
        if incoming.len() != reflections.len() {
            return Err(Error::InvalidConfiguration(format!(
                "{} incoming directions but {} reflection sets",
                incoming.len(),
                reflections.len()
            )));
        }
        let mut seen_in = HashSet::new();
        for (p, (wi, refl)) in incoming.iter().zip(&reflections).enumerate() {
            if !seen_in.insert(wi.key()) {
                return Err(Error::InvalidConfiguration(format!(
                    "incoming direction {p} ({wi:?}) is repeated"
                )));
            }
            if refl.is_empty() {
                return Err(Error::InvalidConfiguration(format!(
                    "incoming direction {p} has no reflection directions"
                )));
            }
            let mut seen_r = HashSet::with_capacity(refl.len());
            for wr in refl {
                if !seen_r.insert(wr.key()) {
                    return Err(Error::InvalidConfiguration(format!(
                        "duplicate pair ({wi:?}, {wr:?})"
                    )));
                }
            }
        }
        let n = reflections.iter().map(Vec::len).sum();
        Ok(MeasurementConfiguration {
            incoming,
            reflections,
            n,
        })
    }

    /// Groups a flat pair list by incoming direction, keeping the order of
    /// first appearance.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Direction, Direction)>) -> Result<Self> {
        let mut incoming: Vec<Direction> = Vec::new();
        let mut reflections: Vec<Vec<Direction>> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for (wi, wr) in pairs {
            let p = *index.entry(wi.key()).or_insert_with(|| {
                incoming.push(wi);
                reflections.push(Vec::new());
                incoming.len() - 1
            });
            reflections[p].push(wr);
        }
        Self::new(incoming, reflections)
    }

    /// Number of (incoming, reflection) pairs.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn incoming(&self) -> &[Direction] {
        &self.incoming
    }

    pub fn reflections(&self) -> &[Vec<Direction>] {
        &self.reflections
    }

    pub fn p_inc(&self) -> usize {
        self.incoming.len()
    }

    /// Reflection counts per incoming direction.
    pub fn p_refl(&self) -> Vec<usize> {
        self.reflections.iter().map(Vec::len).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Direction, &Direction)> + '_ {
        self.incoming
            .iter()
            .zip(&self.reflections)
            .flat_map(|(wi, refl)| refl.iter().map(move |wr| (wi, wr)))
    }

    /// Recounts the pairs and compares against the stored total.
    pub fn check_pair_count(&self) -> bool {
        self.pairs().count() == self.n && self.p_refl().iter().sum::<usize>() == self.n
    }

    /// Number of pairs whose reflection lies within `angle` of the mirror
    /// image of its incoming direction.
    pub fn count_near_mirror(&self, angle: f64) -> usize {
        self.pairs()
            .filter(|(wi, wr)| wi.mirror_reflect().angular_distance(wr) <= angle)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(t: f64, p: f64) -> Direction {
        Direction::new(t, p).unwrap()
    }

    #[test]
    fn counts_follow_group_sizes() {
        let c = MeasurementConfiguration::new(
            vec![d(0.1, 0.0), d(0.2, 0.0), d(0.3, 0.0)],
            vec![
                vec![d(0.1, 1.0), d(0.2, 1.0)],
                vec![d(0.1, 1.0), d(0.2, 1.0), d(0.3, 1.0)],
                vec![d(0.1, 1.0), d(0.2, 1.0), d(0.3, 1.0), d(0.4, 1.0)],
            ],
        )
        .unwrap();
        assert_eq!(c.n(), 9);
        assert_eq!(c.p_inc(), 3);
        assert_eq!(c.p_refl(), vec![2, 3, 4]);
        assert!(c.check_pair_count());
    }

    #[test]
    fn rejects_malformed() {
        assert!(MeasurementConfiguration::new(vec![], vec![]).is_err());
        assert!(MeasurementConfiguration::new(vec![d(0.1, 0.0)], vec![vec![]]).is_err());
        assert!(MeasurementConfiguration::new(vec![d(0.1, 0.0)], vec![]).is_err());
        assert!(MeasurementConfiguration::new(
            vec![d(0.1, 0.0)],
            vec![vec![d(0.2, 0.0), d(0.2, 0.0)]]
        )
        .is_err());
        assert!(MeasurementConfiguration::new(
            vec![d(0.1, 0.0), d(0.1, 0.0)],
            vec![vec![d(0.2, 0.0)], vec![d(0.3, 0.0)]]
        )
        .is_err());
    }

    #[test]
    fn from_pairs_groups_in_first_appearance_order() {
        let a = d(0.5, 1.0);
        let b = d(0.2, 3.0);
        let c = MeasurementConfiguration::from_pairs(vec![
            (a, d(0.1, 0.0)),
            (b, d(0.1, 0.0)),
            (a, d(0.3, 0.0)),
        ])
        .unwrap();
        assert_eq!(c.incoming(), &[a, b]);
        assert_eq!(c.p_refl(), vec![2, 1]);
        assert!(MeasurementConfiguration::from_pairs(vec![(a, b), (a, b)]).is_err());
    }
}
