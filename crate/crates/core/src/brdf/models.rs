//! Analytic reflectance models: Lambertian, energy-normalized Phong, and
//! Cook–Torrance with a Beckmann distribution.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::geometry::{dot, Direction, Vec3};

/// Lower clamp applied to every cosine that appears in a denominator.
pub const GRAZING_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambertianParams {
    pub albedo: f64,
}

impl LambertianParams {
    pub fn validate(&self) -> Result<()> {
        check_unit("albedo", self.albedo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhongParams {
    pub kd: f64,
    pub ks: f64,
    pub exponent: f64,
}

impl PhongParams {
    pub fn validate(&self) -> Result<()> {
        check_nonneg("kd", self.kd)?;
        check_nonneg("ks", self.ks)?;
        check_nonneg("exponent", self.exponent)?;
        check_energy(self.kd, self.ks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CookTorranceParams {
    pub kd: f64,
    pub ks: f64,
    pub roughness: f64,
    pub fresnel_f0: f64,
}

impl CookTorranceParams {
    pub fn validate(&self) -> Result<()> {
        check_nonneg("kd", self.kd)?;
        check_nonneg("ks", self.ks)?;
        if !(self.roughness > 0.0 && self.roughness <= 1.0) {
            return Err(invalid_param(
                "roughness",
                format!("{} outside (0, 1]", self.roughness),
            ));
        }
        check_unit("fresnel_f0", self.fresnel_f0)?;
        check_energy(self.kd, self.ks)
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid_param(name, format!("{v} must be finite and >= 0")))
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid_param(name, format!("{v} outside [0, 1]")))
    }
}

fn check_energy(kd: f64, ks: f64) -> Result<()> {
    if kd + ks <= 1.0 {
        Ok(())
    } else {
        Err(invalid_param("kd+ks", format!("{} exceeds 1", kd + ks)))
    }
}

pub fn eval_lambertian(p: &LambertianParams, _wi: &Direction, _wr: &Direction) -> f64 {
    p.albedo * FRAC_1_PI
}

/// Cosine of the angle between `wr` and the mirror image of `wi`.
///
/// Written as `z_i z_r - x_i x_r - y_i y_r`, which is symmetric in its
/// arguments.
#[inline]
pub fn cos_to_mirror(wi: &Vec3, wr: &Vec3) -> f64 {
    wi[2] * wr[2] - wi[0] * wr[0] - wi[1] * wr[1]
}

#[inline]
pub(crate) fn phong_from_cos(p: &PhongParams, cos_alpha: f64) -> f64 {
    let lobe = cos_alpha.max(0.0).powf(p.exponent);
    p.kd * FRAC_1_PI + p.ks * (p.exponent + 2.0) / (2.0 * PI) * lobe
}

pub fn eval_phong(p: &PhongParams, wi: &Direction, wr: &Direction) -> f64 {
    phong_from_cos(p, cos_to_mirror(&wi.to_unit_vector(), &wr.to_unit_vector()))
}

/// Parameter-independent geometric quantities of one (incoming, reflected)
/// pair used by the microfacet model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicrofacetGeometry {
    pub cos_i: f64,
    pub cos_r: f64,
    /// Cosine of the half-vector polar angle.
    pub cos_h: f64,
    /// Cosine between the half vector and either direction.
    pub h_dot: f64,
    /// Torrance–Sparrow shadowing/masking.
    pub shadowing: f64,
}

impl MicrofacetGeometry {
    pub fn new(wi: &Vec3, wr: &Vec3) -> Self {
        let cos_i = wi[2].max(GRAZING_EPSILON);
        let cos_r = wr[2].max(GRAZING_EPSILON);
        let sum = [wi[0] + wr[0], wi[1] + wr[1], wi[2] + wr[2]];
        let len = dot(&sum, &sum).sqrt();
        // Opposite horizon directions have no half vector; fall back to the normal.
        let h = if len < GRAZING_EPSILON {
            [0.0, 0.0, 1.0]
        } else {
            [sum[0] / len, sum[1] / len, sum[2] / len]
        };
        let cos_h = h[2].clamp(0.0, 1.0);
        // h·wi and h·wr agree analytically; averaging keeps the result symmetric.
        let h_dot = (0.5 * (dot(&h, wi) + dot(&h, wr))).clamp(GRAZING_EPSILON, 1.0);
        let shadowing = 1f64
            .min(2.0 * cos_h * cos_r / h_dot)
            .min(2.0 * cos_h * cos_i / h_dot);
        MicrofacetGeometry {
            cos_i,
            cos_r,
            cos_h,
            h_dot,
            shadowing,
        }
    }

    /// `tan²` of the half-vector angle, or `None` when the half vector lies on
    /// the horizon and the distribution vanishes.
    pub fn tan2_h(&self) -> Option<f64> {
        if self.cos_h <= GRAZING_EPSILON {
            None
        } else {
            let c2 = self.cos_h * self.cos_h;
            Some((1.0 - c2) / c2)
        }
    }
}

/// Beckmann normal distribution `exp(-tan²α/m²) / (π m² cos⁴α)`.
pub fn beckmann(geom: &MicrofacetGeometry, roughness: f64) -> f64 {
    match geom.tan2_h() {
        None => 0.0,
        Some(t2) => {
            let m2 = roughness * roughness;
            let c2 = geom.cos_h * geom.cos_h;
            (-t2 / m2).exp() / (PI * m2 * c2 * c2)
        }
    }
}

/// Schlick approximation `f0 + (1 - f0)(1 - cos)^5`.
pub fn schlick(f0: f64, cos: f64) -> f64 {
    f0 + (1.0 - f0) * (1.0 - cos).powi(5)
}

pub(crate) fn cook_torrance_from_geometry(p: &CookTorranceParams, g: &MicrofacetGeometry) -> f64 {
    let specular = if p.ks == 0.0 {
        0.0
    } else {
        p.ks * beckmann(g, p.roughness) * g.shadowing * schlick(p.fresnel_f0, g.h_dot)
            / (4.0 * g.cos_i * g.cos_r)
    };
    p.kd * FRAC_1_PI + specular
}

pub fn eval_cook_torrance(p: &CookTorranceParams, wi: &Direction, wr: &Direction) -> f64 {
    let g = MicrofacetGeometry::new(&wi.to_unit_vector(), &wr.to_unit_vector());
    cook_torrance_from_geometry(p, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn dir(theta: f64, phi: f64) -> Direction {
        Direction::new(theta, phi).unwrap()
    }

    #[test]
    fn lambertian_examples() {
        let a = dir(0.3, 1.0);
        let b = dir(1.1, 4.0);
        let f = |albedo| eval_lambertian(&LambertianParams { albedo }, &a, &b);
        assert!((f(0.5) - 0.159_154_943_091_895_35).abs() < 1e-15);
        assert_eq!(f(0.0), 0.0);
        assert!((f(1.0) - 2.0 * 0.159_154_943_091_895_35).abs() < 1e-15);
    }

    #[test]
    fn phong_examples() {
        let p = PhongParams {
            kd: 0.0,
            ks: 1.0,
            exponent: 10.0,
        };
        let wi = dir(0.6, 0.4);
        let peak = eval_phong(&p, &wi, &wi.mirror_reflect());
        assert!((peak - 12.0 / (2.0 * PI)).abs() < 1e-12);
        assert!((peak - 1.909_859_3).abs() < 1e-7);

        // Normal incidence: the mirror is the normal, the horizon is 90° away.
        let off = eval_phong(
            &p,
            &Direction::NORMAL,
            &dir(std::f64::consts::FRAC_PI_2, 0.0),
        );
        assert!(off.abs() < 1e-12);

        let diffuse = PhongParams {
            kd: 0.5,
            ks: 0.0,
            exponent: 10.0,
        };
        assert!((eval_phong(&diffuse, &wi, &dir(1.0, 2.0)) - 0.5 / PI).abs() < 1e-15);
    }

    #[test]
    fn cook_torrance_normal_incidence() {
        let p = CookTorranceParams {
            kd: 0.0,
            ks: 1.0,
            roughness: 0.3,
            fresnel_f0: 1.0,
        };
        let v = eval_cook_torrance(&p, &Direction::NORMAL, &Direction::NORMAL);
        assert!((v - 1.0 / (4.0 * PI * 0.09)).abs() < 1e-12);
        assert!((v - 0.884_194_1).abs() < 1e-7);
    }

    /// Straight-line scalar evaluation of D·G·F / (4 cosθi cosθr), written
    /// without `MicrofacetGeometry` or `beckmann`.
    fn cook_torrance_scalar(ks: f64, m: f64, f0: f64, wi: Vec3, wr: Vec3) -> f64 {
        let hx = wi[0] + wr[0];
        let hy = wi[1] + wr[1];
        let hz = wi[2] + wr[2];
        let hl = (hx * hx + hy * hy + hz * hz).sqrt();
        let (hx, hy, hz) = (hx / hl, hy / hl, hz / hl);
        let alpha = hz.acos();
        let d = (-(alpha.tan().powi(2)) / (m * m)).exp() / (PI * m * m * alpha.cos().powi(4));
        let vh = hx * wr[0] + hy * wr[1] + hz * wr[2];
        let g = [1.0, 2.0 * hz * wr[2] / vh, 2.0 * hz * wi[2] / vh]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let f = f0 + (1.0 - f0) * (1.0 - vh).powi(5);
        ks * d * g * f / (4.0 * wi[2] * wr[2])
    }

    #[test]
    fn cook_torrance_matches_scalar_oracle() {
        let p = CookTorranceParams {
            kd: 0.0,
            ks: 1.0,
            roughness: 0.3,
            fresnel_f0: 1.0,
        };
        let wi = dir(FRAC_PI_4, 0.0);
        let wr = wi.mirror_reflect();
        let oracle = cook_torrance_scalar(1.0, 0.3, 1.0, wi.to_unit_vector(), wr.to_unit_vector());
        // Closed form at the specular peak: D(0) / (4 cos²(π/4)) = 1 / (2π m²).
        assert!((oracle - 1.0 / (2.0 * PI * 0.09)).abs() < 1e-12);
        assert!((eval_cook_torrance(&p, &wi, &wr) - oracle).abs() < 1e-12);

        let q = CookTorranceParams {
            kd: 0.0,
            ks: 0.7,
            roughness: 0.45,
            fresnel_f0: 0.2,
        };
        for (ti, pi_, tr, pr) in [
            (0.2, 0.1, 0.9, 2.5),
            (1.2, 5.0, 0.4, 1.0),
            (0.7, 3.0, 0.7, 0.2),
            (1.4, 0.0, 1.3, 3.3),
        ] {
            let (a, b) = (dir(ti, pi_), dir(tr, pr));
            let oracle =
                cook_torrance_scalar(0.7, 0.45, 0.2, a.to_unit_vector(), b.to_unit_vector());
            let v = eval_cook_torrance(&q, &a, &b);
            assert!(
                (v - oracle).abs() <= 1e-12 * (1.0 + oracle),
                "{v} vs {oracle}"
            );
        }
    }

    #[test]
    fn cook_torrance_is_finite_at_grazing() {
        let p = CookTorranceParams {
            kd: 0.2,
            ks: 0.8,
            roughness: 0.2,
            fresnel_f0: 0.5,
        };
        let horizon = dir(std::f64::consts::FRAC_PI_2, 0.0);
        for other in [
            horizon,
            horizon.mirror_reflect(),
            Direction::NORMAL,
            dir(1.0, 1.0),
        ] {
            let v = eval_cook_torrance(&p, &horizon, &other);
            assert!(v.is_finite() && v >= 0.0, "{v}");
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(LambertianParams { albedo: 1.2 }.validate().is_err());
        assert!(PhongParams {
            kd: 0.6,
            ks: 0.6,
            exponent: 1.0
        }
        .validate()
        .is_err());
        assert!(PhongParams {
            kd: 0.4,
            ks: 0.6,
            exponent: -1.0
        }
        .validate()
        .is_err());
        let ct = CookTorranceParams {
            kd: 0.3,
            ks: 0.6,
            roughness: 0.0,
            fresnel_f0: 0.9,
        };
        assert!(ct.validate().is_err());
        assert!(CookTorranceParams {
            roughness: 0.3,
            ..ct
        }
        .validate()
        .is_ok());
        assert!(CookTorranceParams {
            roughness: 0.3,
            fresnel_f0: 1.5,
            ..ct
        }
        .validate()
        .is_err());
    }
}
