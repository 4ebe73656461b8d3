//! Gauss-Legendre rules and a tensor rule on the sphere for the normalized
//! Fubini-Study area `omega` (total mass 1).

use rayon::prelude::*;

use crate::projline::ProjPoint;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `P_n(t)` and `P_n'(t)`.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
}

/// Gauss-Legendre in `cos(theta)` times the uniform rule in azimuth.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub n_theta: usize,
    pub n_phi: usize,
    pub sphere: Vec<[f64; 3]>,
    pub points: Vec<ProjPoint>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (xs, ws) = gauss_legendre(n_theta);
        let mut sphere = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (c, w) in xs.iter().zip(&ws) {
            let s = (1.0 - c * c).sqrt();
            for j in 0..n_phi {
                // offset keeps nodes off the coordinate meridians
                let phi = std::f64::consts::TAU * (j as f64 + 0.5) / n_phi as f64;
                sphere.push([s * phi.cos(), s * phi.sin(), *c]);
                weights.push(w / (2.0 * n_phi as f64));
            }
        }
        let points = sphere.iter().map(|x| ProjPoint::from_sphere(*x)).collect();
        QuadratureRule { n_theta, n_phi, sphere, points, weights }
    }

    /// The rule with both sizes doubled.
    pub fn doubled(&self) -> Self {
        Self::new(2 * self.n_theta, 2 * self.n_phi)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `sum_i w_i g(i)`, evaluated in parallel and reduced in index order.
    pub fn sum_by<G: Fn(usize) -> f64 + Sync>(&self, g: G) -> f64 {
        let terms: Vec<f64> = (0..self.len()).into_par_iter().map(|i| self.weights[i] * g(i)).collect();
        terms.iter().sum()
    }
}
