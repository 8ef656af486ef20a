//! Reflectance functions: the evaluation contract, analytic ground-truth
//! models, random model classes, and tabulated BRDFs built from measurements.

mod class;
mod models;
mod tabulated;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use class::{draw_from_class, BrdfClass, ClassRanges, ParamRange};
pub use models::{
    beckmann, cos_to_mirror, eval_cook_torrance, eval_lambertian, eval_phong, schlick,
    CookTorranceParams, LambertianParams, MicrofacetGeometry, PhongParams, GRAZING_EPSILON,
};
pub(crate) use models::{cook_torrance_from_geometry, phong_from_cos};
pub use tabulated::{Interpolation, TabulatedBrdf};

use crate::error::Result;
use crate::geometry::Direction;
use crate::objectives::{hemisphere_nodes, QuadratureSpec};

/// A single-channel BRDF `f(ω_i, ω_r)` in 1/sr.
pub trait Brdf: Send + Sync + fmt::Debug {
    fn eval(&self, wi: &Direction, wr: &Direction) -> f64;

    /// Short human-readable identifier, recorded in provenance.
    fn id(&self) -> String;
}

/// The analytic model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lambertian,
    Phong,
    CookTorrance,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Lambertian => "lambertian",
            Family::Phong => "phong",
            Family::CookTorrance => "cook_torrance",
        }
    }

    /// Number of free parameters.
    pub fn arity(self) -> usize {
        match self {
            Family::Lambertian => 1,
            Family::Phong => 3,
            Family::CookTorrance => 4,
        }
    }
}

/// An analytic model with its parameters, `{"family": ..., "params": {...}}`
/// in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum AnalyticModel {
    Lambertian(LambertianParams),
    Phong(PhongParams),
    CookTorrance(CookTorranceParams),
}

impl AnalyticModel {
    pub fn family(&self) -> Family {
        match self {
            AnalyticModel::Lambertian(_) => Family::Lambertian,
            AnalyticModel::Phong(_) => Family::Phong,
            AnalyticModel::CookTorrance(_) => Family::CookTorrance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticModel::Lambertian(p) => p.validate(),
            AnalyticModel::Phong(p) => p.validate(),
            AnalyticModel::CookTorrance(p) => p.validate(),
        }
    }

    /// Parameters in declaration order.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            AnalyticModel::Lambertian(p) => vec![p.albedo],
            AnalyticModel::Phong(p) => vec![p.kd, p.ks, p.exponent],
            AnalyticModel::CookTorrance(p) => vec![p.kd, p.ks, p.roughness, p.fresnel_f0],
        }
    }

    /// Inverse of [`AnalyticModel::params`]; performs no validation.
    pub fn from_params(family: Family, v: &[f64]) -> Self {
        match family {
            Family::Lambertian => AnalyticModel::Lambertian(LambertianParams { albedo: v[0] }),
            Family::Phong => AnalyticModel::Phong(PhongParams {
                kd: v[0],
                ks: v[1],
                exponent: v[2],
            }),
            Family::CookTorrance => AnalyticModel::CookTorrance(CookTorranceParams {
                kd: v[0],
                ks: v[1],
                roughness: v[2],
                fresnel_f0: v[3],
            }),
        }
    }
}

impl Brdf for AnalyticModel {
    fn eval(&self, wi: &Direction, wr: &Direction) -> f64 {
        match self {
            AnalyticModel::Lambertian(p) => eval_lambertian(p, wi, wr),
            AnalyticModel::Phong(p) => eval_phong(p, wi, wr),
            AnalyticModel::CookTorrance(p) => eval_cook_torrance(p, wi, wr),
        }
    }

    fn id(&self) -> String {
        let params = self
            .params()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("{}({params})", self.family().name())
    }
}

impl<T: Brdf + ?Sized> Brdf for std::sync::Arc<T> {
    fn eval(&self, wi: &Direction, wr: &Direction) -> f64 {
        (**self).eval(wi, wr)
    }

    fn id(&self) -> String {
        (**self).id()
    }
}

/// Cosine-weighted hemispherical integral `∫ f(ω_i, ω_r) cosθ_r dω_r`, the
/// fraction of incident energy reflected from `wi`.
pub fn directional_hemispherical_reflectance(
    f: &dyn Brdf,
    wi: &Direction,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let nodes = hemisphere_nodes(quad)?;
    let terms: Vec<f64> = nodes
        .iter()
        .map(|(wr, w)| w * f.eval(wi, wr) * wr.cos_theta())
        .collect();
    Ok(crate::objectives::pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::QuadratureRule;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn gauss(n: usize) -> QuadratureSpec {
        QuadratureSpec {
            rule: QuadratureRule::ProductGauss,
            nodes: n,
            seed: 0,
            cosine_weighting: false,
        }
    }

    fn random_dir(rng: &mut ChaCha8Rng) -> Direction {
        Direction::new(
            rng.random_range(0.0..=FRAC_PI_2),
            rng.random_range(0.0..TAU),
        )
        .unwrap()
    }

    fn models() -> Vec<AnalyticModel> {
        vec![
            AnalyticModel::Lambertian(LambertianParams { albedo: 0.7 }),
            AnalyticModel::Phong(PhongParams {
                kd: 0.3,
                ks: 0.6,
                exponent: 25.0,
            }),
            AnalyticModel::CookTorrance(CookTorranceParams {
                kd: 0.3,
                ks: 0.6,
                roughness: 0.3,
                fresnel_f0: 0.9,
            }),
        ]
    }

    #[test]
    fn reciprocity_and_nonnegativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1_000 {
            let (a, b) = (random_dir(&mut rng), random_dir(&mut rng));
            for m in models() {
                let ab = m.eval(&a, &b);
                let ba = m.eval(&b, &a);
                assert!(ab >= 0.0 && ab.is_finite());
                assert!(
                    (ab - ba).abs() <= 1e-9 * (1.0 + ab.abs()),
                    "{m:?}: {ab} vs {ba}"
                );
            }
        }
    }

    #[test]
    fn diffuse_limits_match_lambertian() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let lam = AnalyticModel::Lambertian(LambertianParams { albedo: 0.45 });
        let phong = AnalyticModel::Phong(PhongParams {
            kd: 0.45,
            ks: 0.0,
            exponent: 30.0,
        });
        let ct = AnalyticModel::CookTorrance(CookTorranceParams {
            kd: 0.45,
            ks: 0.0,
            roughness: 0.2,
            fresnel_f0: 0.5,
        });
        for _ in 0..500 {
            let (a, b) = (random_dir(&mut rng), random_dir(&mut rng));
            let l = lam.eval(&a, &b);
            assert!((phong.eval(&a, &b) - l).abs() <= 1e-12);
            assert!((ct.eval(&a, &b) - l).abs() <= 1e-12);
        }
    }

    #[test]
    fn dhr_examples() {
        let wi = Direction::new(0.8, 1.0).unwrap();
        let lam = AnalyticModel::Lambertian(LambertianParams { albedo: 0.7 });
        let r = directional_hemispherical_reflectance(&lam, &wi, &gauss(32)).unwrap();
        assert!((r - 0.7).abs() < 1e-3);
        let black = AnalyticModel::Lambertian(LambertianParams { albedo: 0.0 });
        assert_eq!(
            directional_hemispherical_reflectance(&black, &wi, &gauss(8)).unwrap(),
            0.0
        );
        let phong = AnalyticModel::Phong(PhongParams {
            kd: 0.2,
            ks: 0.0,
            exponent: 7.0,
        });
        let r = directional_hemispherical_reflectance(&phong, &wi, &gauss(32)).unwrap();
        assert!((r - 0.2).abs() < 1e-3);
    }

    #[test]
    fn dhr_rejects_bad_quadrature() {
        let lam = AnalyticModel::Lambertian(LambertianParams { albedo: 0.7 });
        assert!(
            directional_hemispherical_reflectance(&lam, &Direction::NORMAL, &gauss(0)).is_err()
        );
    }

    #[test]
    fn json_shape() {
        let m: AnalyticModel =
            serde_json::from_str(r#"{"family":"phong","params":{"kd":0.1,"ks":0.2,"exponent":3}}"#)
                .unwrap();
        assert_eq!(
            m,
            AnalyticModel::from_params(Family::Phong, &[0.1, 0.2, 3.0])
        );
        let bad = serde_json::from_str::<AnalyticModel>(
            r#"{"family":"lambertian","params":{"albedo":0.1,"gloss":1}}"#,
        );
        assert!(bad.is_err());
    }
}
