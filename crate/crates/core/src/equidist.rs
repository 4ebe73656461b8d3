//! Test functions, integration against `mu_f`, and quantitative
//! equidistribution of pullback measures.
//!
//! Sphere points are `x = (2 Re z, 2 Im z, |z|^2 - 1) / (1 + |z|^2)`. The
//! Laplacian is normalized by `Delta log|z - w| = (w) - (inf)`, which on the
//! sphere reads `Delta phi = 2 (Delta_S phi) omega`, so
//! `int phi dmu_f = int (phi + 2 g_F Delta_S phi) domega`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fekete::EnergyReport;
use crate::potential::GreenEvaluator;
use crate::projline::{Mobius, ProjPoint};
use crate::pullback::PullbackMeasure;
use crate::quadrature::{gauss_legendre, QuadratureRule};

pub trait TestFunction: Sync {
    fn name(&self) -> String;
    fn value(&self, x: [f64; 3]) -> f64;
    /// Norm of the gradient for the round metric of the unit sphere.
    fn grad_norm(&self, x: [f64; 3]) -> f64;
    /// Laplace-Beltrami operator of the unit sphere.
    fn laplacian_s(&self, x: [f64; 3]) -> f64;
    /// Lipschitz constant for the chordal metric.
    fn lip(&self) -> f64;
    /// `<phi, phi> = (1/2pi) int |grad phi|^2 dA`.
    fn dirichlet(&self) -> f64;

    fn at(&self, p: &ProjPoint) -> f64 {
        self.value(p.to_sphere())
    }

    /// Euclidean Laplacian in the affine chart at finite `z`.
    fn chart_laplacian(&self, z: num_complex::Complex64) -> f64 {
        let s = 1.0 + z.norm_sqr();
        4.0 * self.laplacian_s(ProjPoint::from_affine(z).to_sphere()) / (s * s)
    }

    fn norm_max(&self) -> f64 {
        self.lip().max(self.dirichlet().sqrt())
    }
}

const BUMP_POWER: i32 = 10;

/// Profiles `h` for zonal functions `phi(x) = h(x . y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile {
    /// `h(t) = t`.
    Linear,
    /// Squared chordal distance `u = (1 - t)/2`, clamped: `h = s (1 - exp(-u/s))`.
    ClampedChordal { s: f64 },
    /// `(1 - q^2)^BUMP_POWER`, `q = (t - t0)/delta`, supported in `|q| < 1`.
    Bump { t0: f64, delta: f64 },
}

impl Profile {
    /// `(h, h', h'')` at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match *self {
            Profile::Linear => (t, 1.0, 0.0),
            Profile::ClampedChordal { s } => {
                let u = (1.0 - t) / 2.0;
                let e = (-u / s).exp();
                (s * (1.0 - e), -0.5 * e, -e / (4.0 * s))
            }
            Profile::Bump { t0, delta } => {
                let q = (t - t0) / delta;
                if q.abs() >= 1.0 {
                    return (0.0, 0.0, 0.0);
                }
                let a = 1.0 - q * q;
                let n = BUMP_POWER as f64;
                let an2 = a.powi(BUMP_POWER - 2);
                let h1 = -2.0 * n * q * an2 * a;
                let h2 = -2.0 * n * an2 * a + 4.0 * n * (n - 1.0) * q * q * an2;
                (an2 * a * a, h1 / delta, h2 / (delta * delta))
            }
        }
    }

    fn support(&self) -> (f64, f64) {
        match *self {
            Profile::Bump { t0, delta } => ((t0 - delta).max(-1.0), (t0 + delta).min(1.0)),
            _ => (-1.0, 1.0),
        }
    }
}

/// `phi(x) = h(x . center)`.
#[derive(Clone, Debug)]
pub struct Zonal {
    pub label: String,
    pub center: [f64; 3],
    pub profile: Profile,
    lip: f64,
    dirichlet: f64,
}

impl Zonal {
    pub fn new(label: &str, center: [f64; 3], profile: Profile) -> Self {
        let n = (center[0].powi(2) + center[1].powi(2) + center[2].powi(2)).sqrt();
        let center = [center[0] / n, center[1] / n, center[2] / n];
        let (lip, dirichlet) = match profile {
            Profile::Linear => (2.0, 4.0 / 3.0),
            _ => (2.0 * sup_abs_derivative(&profile), profile_dirichlet(&profile)),
        };
        Zonal { label: label.to_string(), center, profile, lip, dirichlet }
    }

    /// `2 Re z / (1 + |z|^2)`.
    pub fn re() -> Self {
        Self::new("re", [1.0, 0.0, 0.0], Profile::Linear)
    }

    /// `2 Im z / (1 + |z|^2)`.
    pub fn im() -> Self {
        Self::new("im", [0.0, 1.0, 0.0], Profile::Linear)
    }

    /// `(|z|^2 - 1) / (|z|^2 + 1)`.
    pub fn height() -> Self {
        Self::new("height", [0.0, 0.0, 1.0], Profile::Linear)
    }

    pub fn chordal_bump(w: &ProjPoint, s: f64) -> Self {
        Self::new("bump", w.to_sphere(), Profile::ClampedChordal { s })
    }

    /// A bump in `|z|`, supported in `(t0 - delta, t0 + delta)` of the height `x_3`.
    pub fn radial_bump(t0: f64, delta: f64) -> Self {
        Self::new("radial", [0.0, 0.0, 1.0], Profile::Bump { t0, delta })
    }

    fn t(&self, x: [f64; 3]) -> f64 {
        (x[0] * self.center[0] + x[1] * self.center[1] + x[2] * self.center[2]).clamp(-1.0, 1.0)
    }
}

/// `sup |h'|` on the support, from a fine grid and golden-section polishing.
fn sup_abs_derivative(p: &Profile) -> f64 {
    let (a, b) = p.support();
    let n = 20000;
    let g = |t: f64| p.eval(t).1.abs();
    let mut best = (0.0, a);
    for i in 0..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        if g(t) > best.0 {
            best = (g(t), t);
        }
    }
    let h = (b - a) / n as f64;
    let (mut lo, mut hi) = ((best.1 - h).max(a), (best.1 + h).min(b));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let m1 = hi - r * (hi - lo);
        let m2 = lo + r * (hi - lo);
        if g(m1) > g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best.0.max(g(0.5 * (lo + hi)))
}

/// `int_{-1}^{1} h'(t)^2 (1 - t^2) dt`.
fn profile_dirichlet(p: &Profile) -> f64 {
    let (a, b) = p.support();
    let (x, w) = gauss_legendre(400);
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter()
        .zip(&w)
        .map(|(x, w)| {
            let t = m + r * x;
            let d = p.eval(t).1;
            r * w * d * d * (1.0 - t * t)
        })
        .sum()
}

impl TestFunction for Zonal {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn value(&self, x: [f64; 3]) -> f64 {
        self.profile.eval(self.t(x)).0
    }

    fn grad_norm(&self, x: [f64; 3]) -> f64 {
        let t = self.t(x);
        self.profile.eval(t).1.abs() * (1.0 - t * t).max(0.0).sqrt()
    }

    fn laplacian_s(&self, x: [f64; 3]) -> f64 {
        let t = self.t(x);
        let (_, h1, h2) = self.profile.eval(t);
        (1.0 - t * t) * h2 - 2.0 * t * h1
    }

    fn lip(&self) -> f64 {
        self.lip
    }

    fn dirichlet(&self) -> f64 {
        self.dirichlet
    }
}

/// `h^* phi = phi o h` for a unitary Mobius map.
pub struct Pulled<'a, T: TestFunction> {
    pub inner: &'a T,
    pub h: Mobius,
}

impl<T: TestFunction> Pulled<'_, T> {
    fn image(&self, x: [f64; 3]) -> [f64; 3] {
        self.h.apply(&ProjPoint::from_sphere(x)).to_sphere()
    }
}

impl<T: TestFunction> TestFunction for Pulled<'_, T> {
    fn name(&self) -> String {
        format!("pulled-{}", self.inner.name())
    }

    fn value(&self, x: [f64; 3]) -> f64 {
        self.inner.value(self.image(x))
    }

    fn grad_norm(&self, x: [f64; 3]) -> f64 {
        self.inner.grad_norm(self.image(x))
    }

    fn laplacian_s(&self, x: [f64; 3]) -> f64 {
        self.inner.laplacian_s(self.image(x))
    }

    fn lip(&self) -> f64 {
        self.inner.lip()
    }

    fn dirichlet(&self) -> f64 {
        self.inner.dirichlet()
    }
}

pub const BUILTIN_NAMES: [&str; 5] = ["re", "im", "height", "bump", "radial"];

/// The built-in family by name.
pub fn builtin(name: &str) -> Result<Zonal> {
    match name {
        "re" => Ok(Zonal::re()),
        "im" => Ok(Zonal::im()),
        "height" => Ok(Zonal::height()),
        "bump" => Ok(Zonal::chordal_bump(&ProjPoint::from_re_im(0.5, 0.5), 0.25)),
        "radial" => Ok(Zonal::radial_bump(0.55, 0.45)),
        _ => Err(Error::InvalidInput(format!("unknown test function '{name}' (expected one of {})", BUILTIN_NAMES.join(", ")))),
    }
}

/// `<phi, phi>` from the sphere rule.
pub fn dirichlet_quadrature<T: TestFunction>(phi: &T, rule: &QuadratureRule) -> f64 {
    2.0 * rule.sum_by(|i| phi.grad_norm(rule.sphere[i]).powi(2))
}

/// `<phi, phi>` as the sum of chart integrals over `|z| < 1` and `|1/z| < 1`.
pub fn dirichlet_two_chart<T: TestFunction>(phi: &T, n_r: usize, n_a: usize) -> f64 {
    let (x, w) = gauss_legendre(n_r);
    let disc = |to_point: &(dyn Fn(num_complex::Complex64) -> ProjPoint + Sync)| -> f64 {
        let terms: Vec<f64> = x
            .par_iter()
            .zip(&w)
            .map(|(x, w)| {
                let r = 0.5 * (x + 1.0);
                let conf = 2.0 / (1.0 + r * r);
                let mut s = 0.0;
                for j in 0..n_a {
                    let a = std::f64::consts::TAU * (j as f64 + 0.5) / n_a as f64;
                    let z = num_complex::Complex64::from_polar(r, a);
                    let g = phi.grad_norm(to_point(z).to_sphere()) * conf;
                    s += g * g;
                }
                0.5 * w * r * s * std::f64::consts::TAU / n_a as f64
            })
            .collect();
        terms.iter().sum()
    };
    let inner = disc(&|z| ProjPoint::from_affine(z));
    let outer = disc(&|w| ProjPoint::from_affine(w).reciprocal());
    (inner + outer) / std::f64::consts::TAU
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadValue {
    pub value: f64,
    pub coarse: f64,
    pub error_estimate: f64,
}

/// `int phi dmu_f` on `rule` and its doubling; the doubled value is returned.
pub fn integrate_mu_f<T: TestFunction>(green: &GreenEvaluator, phi: &T, rule: &QuadratureRule) -> QuadValue {
    let one = |r: &QuadratureRule| {
        r.sum_by(|i| {
            let x = r.sphere[i];
            let lap = phi.laplacian_s(x);
            let g = if lap == 0.0 { 0.0 } else { green.green_g_lift(&r.points[i]) };
            phi.value(x) + 2.0 * g * lap
        })
    };
    let coarse = one(rule);
    let value = one(&rule.doubled());
    QuadValue { value, coarse, error_estimate: (value - coarse).abs() }
}

/// `|d^-k sum w phi(w) - int phi dmu_f|` against a precomputed `int phi dmu_f`.
pub fn equidist_error<T: TestFunction>(nu: &PullbackMeasure, phi: &T, mu_value: f64, degree: usize) -> f64 {
    let terms: Vec<f64> = nu.atoms.par_iter().map(|a| a.weight as f64 * phi.at(&a.point)).collect();
    let avg = terms.iter().sum::<f64>() / (degree as f64).powi(nu.level as i32);
    (avg - mu_value).abs()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundCheck {
    /// `C max{Lip, <phi,phi>^1/2} sqrt(|E| + k D_k / d^2k)`.
    pub energy_bound: f64,
    /// `C max{Lip, <phi,phi>^1/2} sqrt(k / d^k)`.
    pub rate_bound: f64,
    pub margin: f64,
    /// `error / (max{Lip, <phi,phi>^1/2} sqrt(k / d^k))`.
    pub ratio: f64,
}

pub fn verify_bound(error: f64, energy: f64, k: usize, d: usize, d_k: u64, norm_max: f64, c: f64) -> BoundCheck {
    let dk = (d as f64).powi(k as i32);
    let energy_bound = c * norm_max * (energy.abs() + k as f64 * d_k as f64 / (dk * dk)).sqrt();
    let rate = norm_max * (k as f64 / dk).sqrt();
    BoundCheck { energy_bound, rate_bound: c * rate, margin: energy_bound - error, ratio: if rate > 0.0 { error / rate } else { 0.0 } }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquidistRow {
    pub k: usize,
    pub error: f64,
    pub energy: f64,
    /// Energy bound with `C = 1`.
    pub bound: f64,
    pub margin: f64,
    /// Smallest `C` with `error <= C max{Lip, <phi,phi>^1/2} sqrt(k / d^k)` for all levels up to `k`.
    pub inferred_c: f64,
    pub quad_error: f64,
}

/// Sweep over the levels of a tower with matching energy reports.
pub fn equidist_sweep<T: TestFunction>(
    green: &GreenEvaluator,
    tower: &[PullbackMeasure],
    reports: &[EnergyReport],
    phi: &T,
    rule: &QuadratureRule,
) -> Vec<EquidistRow> {
    let d = green.degree();
    let mu = integrate_mu_f(green, phi, rule);
    let mut c_run = 0.0f64;
    reports
        .iter()
        .map(|r| {
            let err = equidist_error(&tower[r.k], phi, mu.value, d);
            let chk = verify_bound(err, r.energy_direct, r.k, d, *r.d_seq.last().unwrap(), phi.norm_max(), 1.0);
            c_run = c_run.max(chk.ratio);
            EquidistRow { k: r.k, error: err, energy: r.energy_direct, bound: chk.energy_bound, margin: chk.margin, inferred_c: c_run, quad_error: mu.error_estimate }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_norms_of_coordinates() {
        let q = QuadratureRule::new(32, 64);
        let re = Zonal::re();
        assert!((dirichlet_quadrature(&re, &q) - 4.0 / 3.0).abs() < 1e-12);
        assert!((dirichlet_two_chart(&re, 64, 128) - 4.0 / 3.0).abs() < 1e-8);
        let z = num_complex::Complex64::new(0.3, -0.7);
        assert!((re.at(&ProjPoint::from_affine(z)) - 2.0 * z.re / (1.0 + z.norm_sqr())).abs() < 1e-15);
    }

    #[test]
    fn chart_laplacian_matches_finite_differences() {
        for phi in [Zonal::im(), builtin("bump").unwrap(), builtin("radial").unwrap()] {
            let z = num_complex::Complex64::new(0.4, 0.9);
            let h = 1e-4;
            let f = |w: num_complex::Complex64| phi.at(&ProjPoint::from_affine(w));
            let fd = (f(z + h) + f(z - h) + f(z + num_complex::Complex64::new(0.0, h)) + f(z - num_complex::Complex64::new(0.0, h)) - 4.0 * f(z)) / (h * h);
            assert!((fd - phi.chart_laplacian(z)).abs() < 1e-5 * (1.0 + fd.abs()), "{}", phi.name());
        }
    }

    #[test]
    fn lipschitz_dominates_quotients() {
        let q = QuadratureRule::new(12, 24);
        for name in BUILTIN_NAMES {
            let phi = builtin(name).unwrap();
            let mut best = 0.0f64;
            for (i, x) in q.sphere.iter().enumerate() {
                for y in q.sphere.iter().skip(i + 1) {
                    let ch = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt() / 2.0;
                    best = best.max((phi.value(*x) - phi.value(*y)).abs() / ch);
                }
            }
            assert!(best <= phi.lip(), "{name}: {best} > {}", phi.lip());
        }
    }
}
