//! Hemispherical directions and the angular primitives shared by the rest of
//! the crate.
//!
//! Directions live on the upper hemisphere of a local frame whose `+z` axis is
//! the surface normal. `theta` is the polar angle from the normal and `phi`
//! the azimuth measured from `+x`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Angle between two unit vectors.
///
/// Uses `atan2(|a × b|, a · b)`, which equals `acos(a · b)` but stays accurate
/// for nearly parallel vectors and returns exactly 0 for identical inputs.
#[inline]
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    norm(&cross(a, b)).atan2(dot(a, b))
}

/// Maps any finite azimuth into `[0, 2π)`.
pub fn canonical_phi(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

/// A direction on the upper hemisphere, `theta ∈ [0, π/2]`, `phi ∈ [0, 2π)`.
///
/// The azimuth of the normal direction is canonicalized to 0 so that every
/// physical direction has exactly one representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// The surface normal.
    pub const NORMAL: Direction = Direction {
        theta: 0.0,
        phi: 0.0,
    };

    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidDirection(format!(
                "non-finite angles (theta={theta}, phi={phi})"
            )));
        }
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidDirection(format!(
                "theta={theta} outside [0, π/2]"
            )));
        }
        Ok(Self::canonical(theta, phi))
    }

    fn canonical(theta: f64, phi: f64) -> Self {
        let phi = if theta == 0.0 {
            0.0
        } else {
            canonical_phi(phi)
        };
        Direction { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cos_theta(&self) -> f64 {
        self.theta.cos()
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn to_unit_vector(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Inverse of [`Direction::to_unit_vector`].
    ///
    /// Rejects vectors that are not unit length to within `1e-9` or that point
    /// below the hemisphere by more than `1e-12`.
    pub fn from_unit_vector(v: &Vec3) -> Result<Self> {
        let len = norm(v);
        if !len.is_finite() || (len - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDirection(format!(
                "vector {v:?} is not unit length (|v| = {len})"
            )));
        }
        if v[2] < -1e-12 {
            return Err(Error::InvalidDirection(format!(
                "vector {v:?} points below the hemisphere"
            )));
        }
        let z = v[2].clamp(0.0, 1.0);
        let rho = v[0].hypot(v[1]);
        let theta = rho.atan2(z).min(FRAC_PI_2);
        let phi = if rho == 0.0 { 0.0 } else { v[1].atan2(v[0]) };
        Ok(Self::canonical(theta, phi))
    }

    /// Mirror reflection about the normal: `(θ, φ) → (θ, φ + π mod 2π)`.
    pub fn mirror_reflect(&self) -> Direction {
        let phi = if self.phi < PI {
            self.phi + PI
        } else {
            self.phi - PI
        };
        Self::canonical(self.theta, phi)
    }

    /// Great-circle angle to `other`, in `[0, π]`.
    pub fn angular_distance(&self, other: &Direction) -> f64 {
        if self == other {
            return 0.0;
        }
        angle_between(&self.to_unit_vector(), &other.to_unit_vector())
    }

    /// Normalized bisector of `self` and `other`.
    pub fn halfway(&self, other: &Direction) -> Result<Direction> {
        let a = self.to_unit_vector();
        let b = other.to_unit_vector();
        let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        let len = norm(&sum);
        if len < 1e-9 {
            return Err(Error::InvalidDirection(format!(
                "halfway vector undefined for antipodal directions {self:?} and {other:?}"
            )));
        }
        Direction::from_unit_vector(&[sum[0] / len, sum[1] / len, sum[2] / len])
    }

    /// Bit pattern of the canonical angles, usable as an exact hash key.
    pub fn key(&self) -> [u64; 2] {
        [self.theta.to_bits(), self.phi.to_bits()]
    }
}

pub fn angular_distance(a: &Direction, b: &Direction) -> f64 {
    a.angular_distance(b)
}

pub fn mirror_reflect(d: &Direction) -> Direction {
    d.mirror_reflect()
}

pub fn halfway(a: &Direction, b: &Direction) -> Result<Direction> {
    a.halfway(b)
}

/// Distance between two (incoming, reflected) pairs: the Euclidean combination
/// of the two angular distances.
pub fn pair_distance(a: (&Direction, &Direction), b: (&Direction, &Direction)) -> f64 {
    a.0.angular_distance(b.0).hypot(a.1.angular_distance(b.1))
}
