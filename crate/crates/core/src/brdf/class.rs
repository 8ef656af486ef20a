use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AnalyticModel, CookTorranceParams, Family, LambertianParams, PhongParams};
use crate::error::{invalid_param, Error, Result};

/// Closed interval `[lo, hi]`, written `[lo, hi]` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
}

impl From<[f64; 2]> for ParamRange {
    fn from(v: [f64; 2]) -> Self {
        ParamRange { lo: v[0], hi: v[1] }
    }
}

impl From<ParamRange> for [f64; 2] {
    fn from(r: ParamRange) -> Self {
        [r.lo, r.hi]
    }
}

impl ParamRange {
    pub const fn point(v: f64) -> Self {
        ParamRange { lo: v, hi: v }
    }

    fn check(&self, name: &str, min: f64, max: f64) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(invalid_param(
                name,
                format!("bad range [{}, {}]", self.lo, self.hi),
            ));
        }
        if self.lo < min || self.hi > max {
            return Err(invalid_param(
                name,
                format!("range [{}, {}] leaves [{min}, {max}]", self.lo, self.hi),
            ));
        }
        Ok(())
    }

    fn draw(&self, rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.random();
        self.lo + (self.hi - self.lo) * u
    }
}

/// Independent uniform ranges for every parameter of one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassRanges {
    Lambertian {
        albedo: ParamRange,
    },
    Phong {
        kd: ParamRange,
        ks: ParamRange,
        exponent: ParamRange,
    },
    CookTorrance {
        kd: ParamRange,
        ks: ParamRange,
        roughness: ParamRange,
        fresnel_f0: ParamRange,
    },
}

impl ClassRanges {
    fn named(&self) -> Vec<(&'static str, ParamRange)> {
        match *self {
            ClassRanges::Lambertian { albedo } => vec![("albedo", albedo)],
            ClassRanges::Phong { kd, ks, exponent } => {
                vec![("kd", kd), ("ks", ks), ("exponent", exponent)]
            }
            ClassRanges::CookTorrance {
                kd,
                ks,
                roughness,
                fresnel_f0,
            } => vec![
                ("kd", kd),
                ("ks", ks),
                ("roughness", roughness),
                ("fresnel_f0", fresnel_f0),
            ],
        }
    }
}

/// A random subset of one model family: a parameter distribution plus the
/// seed that drives it.
///
/// JSON form: `{"family": "phong", "ranges": {"kd": [lo, hi], ...}, "seed": 7}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClass", into = "RawClass")]
pub struct BrdfClass {
    pub ranges: ClassRanges,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    family: Family,
    ranges: BTreeMap<String, ParamRange>,
    seed: u64,
}

impl From<BrdfClass> for RawClass {
    fn from(c: BrdfClass) -> Self {
        RawClass {
            family: c.family(),
            ranges: c
                .ranges
                .named()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            seed: c.seed,
        }
    }
}

impl TryFrom<RawClass> for BrdfClass {
    type Error = Error;

    fn try_from(raw: RawClass) -> Result<Self> {
        let mut ranges = raw.ranges;
        let mut take = |name: &str| {
            ranges
                .remove(name)
                .ok_or_else(|| invalid_param(name, "missing range"))
        };
        let typed = match raw.family {
            Family::Lambertian => ClassRanges::Lambertian {
                albedo: take("albedo")?,
            },
            Family::Phong => ClassRanges::Phong {
                kd: take("kd")?,
                ks: take("ks")?,
                exponent: take("exponent")?,
            },
            Family::CookTorrance => ClassRanges::CookTorrance {
                kd: take("kd")?,
                ks: take("ks")?,
                roughness: take("roughness")?,
                fresnel_f0: take("fresnel_f0")?,
            },
        };
        if let Some(extra) = ranges.keys().next() {
            return Err(invalid_param(
                extra,
                format!("unknown parameter for family {}", raw.family.name()),
            ));
        }
        Ok(BrdfClass {
            ranges: typed,
            seed: raw.seed,
        })
    }
}

impl BrdfClass {
    pub fn family(&self) -> Family {
        match self.ranges {
            ClassRanges::Lambertian { .. } => Family::Lambertian,
            ClassRanges::Phong { .. } => Family::Phong,
            ClassRanges::CookTorrance { .. } => Family::CookTorrance,
        }
    }

    /// Checks that every parameter vector in the box is a valid model.
    pub fn validate(&self) -> Result<()> {
        const BIG: f64 = f64::MAX;
        match self.ranges {
            ClassRanges::Lambertian { albedo } => albedo.check("albedo", 0.0, 1.0),
            ClassRanges::Phong { kd, ks, exponent } => {
                kd.check("kd", 0.0, 1.0)?;
                ks.check("ks", 0.0, 1.0)?;
                exponent.check("exponent", 0.0, BIG)?;
                check_energy(kd, ks)
            }
            ClassRanges::CookTorrance {
                kd,
                ks,
                roughness,
                fresnel_f0,
            } => {
                kd.check("kd", 0.0, 1.0)?;
                ks.check("ks", 0.0, 1.0)?;
                roughness.check("roughness", f64::MIN_POSITIVE, 1.0)?;
                fresnel_f0.check("fresnel_f0", 0.0, 1.0)?;
                check_energy(kd, ks)
            }
        }
    }
}

fn check_energy(kd: ParamRange, ks: ParamRange) -> Result<()> {
    if kd.hi + ks.hi <= 1.0 {
        Ok(())
    } else {
        Err(invalid_param(
            "kd+ks",
            format!("upper bounds sum to {} > 1", kd.hi + ks.hi),
        ))
    }
}

/// Draws `k` models from the class. The same class (including its seed)
/// always yields the same sequence.
pub fn draw_from_class(c: &BrdfClass, k: usize) -> Result<Vec<AnalyticModel>> {
    if k == 0 {
        return Err(invalid_param("draws", "at least one draw is required"));
    }
    c.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let models = (0..k)
        .map(|_| match c.ranges {
            ClassRanges::Lambertian { albedo } => AnalyticModel::Lambertian(LambertianParams {
                albedo: albedo.draw(&mut rng),
            }),
            ClassRanges::Phong { kd, ks, exponent } => AnalyticModel::Phong(PhongParams {
                kd: kd.draw(&mut rng),
                ks: ks.draw(&mut rng),
                exponent: exponent.draw(&mut rng),
            }),
            ClassRanges::CookTorrance {
                kd,
                ks,
                roughness,
                fresnel_f0,
            } => AnalyticModel::CookTorrance(CookTorranceParams {
                kd: kd.draw(&mut rng),
                ks: ks.draw(&mut rng),
                roughness: roughness.draw(&mut rng),
                fresnel_f0: fresnel_f0.draw(&mut rng),
            }),
        })
        .collect::<Vec<_>>();
    for m in &models {
        m.validate().map_err(|e| Error::InvalidParameter {
            name: "class".into(),
            reason: format!("drew an invalid model {m:?}: {e}"),
        })?;
    }
    Ok(models)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambertian(lo: f64, hi: f64, seed: u64) -> BrdfClass {
        BrdfClass {
            ranges: ClassRanges::Lambertian {
                albedo: ParamRange { lo, hi },
            },
            seed,
        }
    }

    #[test]
    fn degenerate_range_repeats_the_point() {
        let draws = draw_from_class(&lambertian(0.5, 0.5, 1), 3).unwrap();
        assert_eq!(
            draws,
            vec![AnalyticModel::Lambertian(LambertianParams { albedo: 0.5 }); 3]
        );
    }

    #[test]
    fn zero_draws_rejected() {
        assert!(draw_from_class(&lambertian(0.0, 1.0, 1), 0).is_err());
    }

    #[test]
    fn sample_mean_of_unit_range() {
        let draws = draw_from_class(&lambertian(0.0, 1.0, 42), 100).unwrap();
        let mean = draws.iter().map(|m| m.params()[0]).sum::<f64>() / 100.0;
        assert!((mean - 0.5).abs() < 0.1, "{mean}");
    }

    #[test]
    fn same_seed_same_sequence() {
        let c = BrdfClass {
            ranges: ClassRanges::Phong {
                kd: ParamRange { lo: 0.0, hi: 0.3 },
                ks: ParamRange { lo: 0.2, hi: 0.6 },
                exponent: ParamRange { lo: 5.0, hi: 100.0 },
            },
            seed: 9,
        };
        assert_eq!(
            draw_from_class(&c, 20).unwrap(),
            draw_from_class(&c, 20).unwrap()
        );
        let other = BrdfClass { seed: 10, ..c };
        assert_ne!(
            draw_from_class(&c, 5).unwrap(),
            draw_from_class(&other, 5).unwrap()
        );
        for m in draw_from_class(&c, 200).unwrap() {
            m.validate().unwrap();
        }
    }

    #[test]
    fn invalid_ranges_rejected() {
        assert!(draw_from_class(&lambertian(0.2, 1.5, 0), 1).is_err());
        assert!(draw_from_class(&lambertian(0.8, 0.2, 0), 1).is_err());
        let c = BrdfClass {
            ranges: ClassRanges::Phong {
                kd: ParamRange { lo: 0.0, hi: 0.6 },
                ks: ParamRange { lo: 0.0, hi: 0.6 },
                exponent: ParamRange::point(10.0),
            },
            seed: 0,
        };
        assert!(draw_from_class(&c, 1).is_err());
        let ct = BrdfClass {
            ranges: ClassRanges::CookTorrance {
                kd: ParamRange::point(0.3),
                ks: ParamRange::point(0.6),
                roughness: ParamRange { lo: 0.0, hi: 0.5 },
                fresnel_f0: ParamRange::point(0.9),
            },
            seed: 0,
        };
        assert!(draw_from_class(&ct, 1).is_err());
    }

    #[test]
    fn json_shape() {
        let c: BrdfClass = serde_json::from_str(
            r#"{"family":"phong","ranges":{"kd":[0.2,0.2],"ks":[0.5,0.5],"exponent":[5,100]},"seed":3}"#,
        )
        .unwrap();
        assert_eq!(c.family(), Family::Phong);
        assert_eq!(c.seed, 3);
        let back: BrdfClass = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<BrdfClass>(
            r#"{"family":"lambertian","ranges":{"albedo":[0,1],"kd":[0,1]},"seed":3}"#
        )
        .is_err());
        assert!(serde_json::from_str::<BrdfClass>(
            r#"{"family":"lambertian","ranges":{},"seed":3}"#
        )
        .is_err());
    }
}
