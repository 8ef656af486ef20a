use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::geometry::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    /// Gauss–Legendre in θ times the trapezoid rule in φ.
    ProductGauss,
    /// Seeded uniform sampling in solid angle.
    MonteCarlo,
}

/// Numerical integration over the hemisphere, or over pairs of hemispheres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    /// Nodes per angular dimension for the product rule; total samples for
    /// Monte Carlo.
    pub nodes: usize,
    #[serde(default)]
    pub seed: u64,
    /// Weight each pair by `cosθ_i cosθ_r`.
    #[serde(default)]
    pub cosine_weighting: bool,
}

impl QuadratureSpec {
    pub fn product_gauss(nodes: usize) -> Self {
        QuadratureSpec {
            rule: QuadratureRule::ProductGauss,
            nodes,
            seed: 0,
            cosine_weighting: false,
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        QuadratureSpec {
            rule: QuadratureRule::MonteCarlo,
            nodes: samples,
            seed,
            cosine_weighting: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(invalid_param("quadrature.nodes", "must be >= 1"));
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(z) and its derivative.
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Hemisphere nodes with solid-angle weights; the weights sum to about 2π.
pub fn hemisphere_nodes(spec: &QuadratureSpec) -> Result<Vec<(Direction, f64)>> {
    spec.validate()?;
    let n = spec.nodes;
    let nodes = match spec.rule {
        QuadratureRule::ProductGauss => {
            let (x, w) = gauss_legendre(n);
            let dphi = TAU / n as f64;
            let mut out = Vec::with_capacity(n * n);
            for (xk, wk) in x.iter().zip(&w) {
                let theta = FRAC_PI_2 * 0.5 * (xk + 1.0);
                let weight = wk * FRAC_PI_2 * 0.5 * theta.sin() * dphi;
                for j in 0..n {
                    let d = Direction::new(theta, j as f64 * dphi).expect("quadrature node");
                    out.push((d, weight));
                }
            }
            out
        }
        QuadratureRule::MonteCarlo => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let weight = TAU / n as f64;
            (0..n)
                .map(|_| (uniform_direction(&mut rng), weight))
                .collect()
        }
    };
    Ok(nodes)
}

fn uniform_direction(rng: &mut impl Rng) -> Direction {
    let cos_theta = 1.0 - rng.random::<f64>();
    let phi = TAU * rng.random::<f64>();
    Direction::new(cos_theta.acos(), phi).expect("uniform direction")
}

/// Nodes over (hemisphere)² for integrating functions of a direction pair.
#[derive(Debug, Clone)]
pub struct PairNodes {
    pub pairs: Vec<(Direction, Direction)>,
    pub weights: Vec<f64>,
}

impl PairNodes {
    pub fn new(spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let (pairs, mut weights): (Vec<_>, Vec<_>) = match spec.rule {
            QuadratureRule::ProductGauss => {
                let h = hemisphere_nodes(spec)?;
                h.iter()
                    .flat_map(|(a, wa)| h.iter().map(move |(b, wb)| ((*a, *b), wa * wb)))
                    .unzip()
            }
            QuadratureRule::MonteCarlo => {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                (0..spec.nodes)
                    .map(|_| {
                        let a = uniform_direction(&mut rng);
                        let b = uniform_direction(&mut rng);
                        ((a, b), 1.0)
                    })
                    .unzip()
            }
        };
        if spec.cosine_weighting {
            for ((a, b), w) in pairs.iter().zip(weights.iter_mut()) {
                *w *= a.cos_theta() * b.cos_theta();
            }
        }
        Ok(PairNodes { pairs, weights })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// `xs`, never on how the terms were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}
