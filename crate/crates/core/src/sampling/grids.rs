//! Deterministic point-set generators: the equispaced angular grid, the
//! Fibonacci hemisphere, and the mirror-concentrated specular grid.

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MeasurementConfiguration;
use crate::error::{invalid_param, Result};
use crate::geometry::{Direction, Vec3};

/// `(√5 − 1) / 2`.
pub const GOLDEN_RATIO_CONJUGATE: f64 = 0.618_033_988_749_894_8;

/// Default half-angle of the specular cone.
pub const SPECULAR_CONE_HALF_ANGLE: f64 = FRAC_PI_8;

/// Grid resolution `(N_θ, N_φ)` for a budget under the aspect rule
/// `N_φ = 2 N_θ`: the smallest `N_θ` with `(N_θ N_φ)² ≥ budget`.
///
/// A budget of one is the degenerate `1 × 1` design.
pub fn grid_resolution(budget: usize) -> (usize, usize) {
    if budget <= 1 {
        return (1, 1);
    }
    let mut nt = 1usize;
    while (2 * nt * nt).pow(2) < budget {
        nt += 1;
    }
    (nt, 2 * nt)
}

/// Rings of equispaced azimuths: ring `j` sits at `θ = (j + ½)·span/rings`
/// and carries `counts[j]` nodes at `φ = k·2π/counts[j]`.
fn ring_nodes(span: f64, counts: &[usize]) -> Vec<(f64, f64)> {
    let rings = counts.len() as f64;
    counts
        .iter()
        .enumerate()
        .flat_map(|(j, &m)| {
            let theta = (j as f64 + 0.5) * span / rings;
            (0..m).map(move |k| (theta, k as f64 * TAU / m as f64))
        })
        .collect()
}

/// Splits `total` nodes over `max(1, round(√(total/2)))` rings, giving any
/// remainder to the outermost rings.
fn ring_counts(total: usize) -> Vec<usize> {
    if total == 0 {
        return Vec::new();
    }
    let rings = ((total as f64 / 2.0).sqrt().round() as usize).clamp(1, total);
    let base = total / rings;
    let extra = total % rings;
    (0..rings)
        .map(|j| base + usize::from(j >= rings - extra))
        .collect()
}

/// The `N_θ × N_φ` equispaced angular grid on the hemisphere.
pub fn equispaced_directions(n_theta: usize, n_phi: usize) -> Vec<Direction> {
    ring_nodes(FRAC_PI_2, &vec![n_phi; n_theta])
        .into_iter()
        .map(|(t, p)| Direction::new(t, p).expect("grid nodes lie on the hemisphere"))
        .collect()
}

/// Equispaced product design with explicitly chosen resolutions: every grid
/// direction is used as an incoming direction and measured at every grid
/// direction.
pub fn equispaced_grid_with_resolution(
    n_theta: usize,
    n_phi: usize,
) -> Result<MeasurementConfiguration> {
    if n_theta == 0 || n_phi == 0 {
        return Err(invalid_param("resolution", "grid resolutions must be >= 1"));
    }
    let dirs = equispaced_directions(n_theta, n_phi);
    MeasurementConfiguration::new(dirs.clone(), vec![dirs; n_theta * n_phi])
}

fn degenerate_design() -> Result<MeasurementConfiguration> {
    MeasurementConfiguration::new(vec![Direction::NORMAL], vec![vec![Direction::NORMAL]])
}

/// The standard equispaced angular grid with resolution from
/// [`grid_resolution`]; returns `n ≥ budget` pairs.
pub fn equispaced_grid(budget: usize) -> Result<MeasurementConfiguration> {
    check_budget(budget)?;
    if budget == 1 {
        return degenerate_design();
    }
    let (nt, np) = grid_resolution(budget);
    equispaced_grid_with_resolution(nt, np)
}

/// Fibonacci hemisphere set of `k` points: `cosθ_j = 1 − (j + ½)/k`,
/// `φ_j = 2π·frac(j·g + phase)` with `g` the golden ratio conjugate.
pub fn fibonacci_hemisphere(k: usize, phase: f64) -> Vec<Direction> {
    (0..k)
        .map(|j| {
            let cos_theta = 1.0 - (j as f64 + 0.5) / k as f64;
            let turns = (j as f64 * GOLDEN_RATIO_CONJUGATE + phase).fract();
            Direction::new(cos_theta.acos(), TAU * turns).expect("fibonacci node on hemisphere")
        })
        .collect()
}

/// `k` independent directions uniform in solid angle over the hemisphere.
pub fn random_hemisphere(k: usize, rng: &mut impl Rng) -> Vec<Direction> {
    let mut seen = HashSet::with_capacity(k);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        // 1 − u lies in (0, 1], keeping θ strictly below π/2.
        let cos_theta = 1.0 - rng.random::<f64>();
        let phi = TAU * rng.random::<f64>();
        let d = Direction::new(cos_theta.acos(), phi).expect("uniform node on hemisphere");
        if seen.insert(d.key()) {
            out.push(d);
        }
    }
    out
}

/// `(P_inc, P_refl)` used by the uniform designs: `⌈√budget⌉` incoming
/// directions with `⌈budget / P_inc⌉` reflections each.
pub fn uniform_split(budget: usize) -> (usize, usize) {
    let budget = budget.max(1);
    let mut p_inc = (budget as f64).sqrt().ceil() as usize;
    while p_inc * p_inc < budget {
        p_inc += 1;
    }
    while p_inc > 1 && (p_inc - 1) * (p_inc - 1) >= budget {
        p_inc -= 1;
    }
    (p_inc, budget.div_ceil(p_inc))
}

/// Fibonacci product design: Fibonacci incoming set, each measured on the
/// same Fibonacci reflection set.
pub fn uniform_sphere(budget: usize) -> Result<MeasurementConfiguration> {
    uniform_sphere_phased(budget, 0.0, 0.0)
}

pub(crate) fn uniform_sphere_phased(
    budget: usize,
    incoming_phase: f64,
    reflection_phase: f64,
) -> Result<MeasurementConfiguration> {
    check_budget(budget)?;
    let (p_inc, p_refl) = uniform_split(budget);
    let refl = fibonacci_hemisphere(p_refl, reflection_phase);
    MeasurementConfiguration::new(
        fibonacci_hemisphere(p_inc, incoming_phase),
        vec![refl; p_inc],
    )
}

/// Random-uniform counterpart of [`uniform_sphere`]: independent uniform
/// reflection sets per incoming direction, driven by `seed`.
pub fn uniform_random(budget: usize, seed: u64) -> Result<MeasurementConfiguration> {
    check_budget(budget)?;
    let (p_inc, p_refl) = uniform_split(budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let incoming = random_hemisphere(p_inc, &mut rng);
    let reflections = (0..p_inc)
        .map(|_| random_hemisphere(p_refl, &mut rng))
        .collect();
    MeasurementConfiguration::new(incoming, reflections)
}

/// Reflection nodes for one incoming direction of the specular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecularReflections {
    /// Nodes inside the cone around the mirror direction.
    pub in_cone: Vec<Direction>,
    /// Coarse equispaced nodes covering the rest of the hemisphere.
    pub coarse: Vec<Direction>,
}

impl SpecularReflections {
    pub fn all(&self) -> Vec<Direction> {
        self.in_cone.iter().chain(&self.coarse).copied().collect()
    }
}

/// Unit vector at polar offset `beta` and azimuth `psi` around `axis`,
/// folded back into the upper hemisphere.
fn cone_point(axis: &Direction, beta: f64, psi: f64) -> Direction {
    let (st, ct) = axis.theta().sin_cos();
    let (sp, cp) = axis.phi().sin_cos();
    let m: Vec3 = [st * cp, st * sp, ct];
    let t1: Vec3 = [ct * cp, ct * sp, -st];
    let t2: Vec3 = [-sp, cp, 0.0];
    let (sb, cb) = beta.sin_cos();
    let (ss, cs) = psi.sin_cos();
    let mut v = [0.0; 3];
    for k in 0..3 {
        v[k] = cb * m[k] + sb * (cs * t1[k] + ss * t2[k]);
    }
    // Mirroring across the horizon never moves a point farther from an
    // axis that lies on or above it.
    v[2] = v[2].abs();
    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    Direction::from_unit_vector(&[v[0] / len, v[1] / len, v[2] / len])
        .expect("cone node on hemisphere")
}

/// Places `round(R·c/(1+c))` of `budget` reflection nodes on rings inside the
/// cone of `half_angle` around the mirror of `wi`, and the rest on a coarse
/// equispaced ring grid.
pub fn specular_reflections(
    wi: &Direction,
    budget: usize,
    concentration: f64,
    half_angle: f64,
) -> SpecularReflections {
    let in_cone_count = ((budget as f64) * concentration / (1.0 + concentration)).round() as usize;
    let in_cone_count = in_cone_count.min(budget);
    let mirror = wi.mirror_reflect();
    let mut seen = HashSet::new();
    let in_cone: Vec<Direction> = ring_nodes(half_angle, &ring_counts(in_cone_count))
        .into_iter()
        .map(|(beta, psi)| cone_point(&mirror, beta, psi))
        .filter(|d| seen.insert(d.key()))
        .collect();
    // Folded cone nodes can coincide; a denser coarse grid makes up for them.
    let wanted = budget - in_cone.len();
    let mut extra = 0;
    let coarse = loop {
        let mut taken = seen.clone();
        let nodes: Vec<Direction> = ring_nodes(FRAC_PI_2, &ring_counts(wanted + extra))
            .into_iter()
            .map(|(t, p)| Direction::new(t, p).expect("grid node on hemisphere"))
            .filter(|d| taken.insert(d.key()))
            .take(wanted)
            .collect();
        if nodes.len() == wanted {
            break nodes;
        }
        extra += wanted - nodes.len();
    };
    SpecularReflections { in_cone, coarse }
}

/// Equispaced incoming grid whose reflection sets concentrate around each
/// mirror direction.
pub fn specular_grid(budget: usize, concentration: f64) -> Result<MeasurementConfiguration> {
    specular_grid_with_cone(budget, concentration, SPECULAR_CONE_HALF_ANGLE)
}

pub fn specular_grid_with_cone(
    budget: usize,
    concentration: f64,
    half_angle: f64,
) -> Result<MeasurementConfiguration> {
    check_budget(budget)?;
    if !(concentration.is_finite() && concentration > 0.0) {
        return Err(invalid_param(
            "concentration",
            format!("{concentration} must be > 0"),
        ));
    }
    if !(half_angle > 0.0 && half_angle <= FRAC_PI_2) {
        return Err(invalid_param(
            "cone_half_angle",
            format!("{half_angle} outside (0, π/2]"),
        ));
    }
    if budget == 1 {
        return degenerate_design();
    }
    let (nt, np) = grid_resolution(budget);
    let incoming = equispaced_directions(nt, np);
    let reflections = incoming
        .iter()
        .map(|wi| specular_reflections(wi, nt * np, concentration, half_angle).all())
        .collect();
    MeasurementConfiguration::new(incoming, reflections)
}

pub(crate) fn check_budget(budget: usize) -> Result<()> {
    if budget == 0 {
        Err(invalid_param("budget", "must be >= 1"))
    } else {
        Ok(())
    }
}
