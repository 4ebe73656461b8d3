//! Escape rate, Green functions and the kernel `Phi_f`.
//!
//! For a unit vector `p`, `G^F(p) = sum_j d^-(j+1) log|F(q_j)|` with the
//! renormalized orbit `q_0 = p`, `q_(j+1) = F(q_j)/|F(q_j)|`. On the sphere
//! `g_F = G^F` on unit representatives, `g_f = g_F + V_F/2` with
//! `V_F = -log|Res F| / (d(d-1))`, and
//! `Phi_f(x, y) = log[x, y] - g_f(x) - g_f(y)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::projline::{chordal, ProjPoint};
use crate::ratmap::HomLift;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 60;
const TF_MARGIN: f64 = 0.1;

/// A sup estimate from a coarse grid and its one-step refinement.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub coarse: f64,
    pub fine: f64,
    /// Always true: grid maxima are not certified bounds.
    pub nonrigorous: bool,
}

impl SupEstimate {
    pub fn relative_change(&self) -> f64 {
        if self.fine == 0.0 {
            0.0
        } else {
            (self.fine - self.coarse).abs() / self.fine
        }
    }
}

#[derive(Clone, Debug)]
pub struct GreenEvaluator {
    lift: HomLift,
    tol: f64,
    max_iter: usize,
    vf: f64,
    tf_sup: f64,
}

/// Midpoint grid on the sphere, `n_theta` polar bands by `n_phi` azimuths.
pub fn sphere_grid(n_theta: usize, n_phi: usize) -> Vec<ProjPoint> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / n_theta as f64;
        for j in 0..n_phi {
            let phi = std::f64::consts::TAU * (j as f64 + 0.5) / n_phi as f64;
            let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            out.push(ProjPoint::from_sphere(x));
        }
    }
    out
}

impl GreenEvaluator {
    pub fn new(lift: HomLift) -> Self {
        Self::with_params(lift, DEFAULT_TOL, DEFAULT_MAX_ITER)
    }

    pub fn with_params(lift: HomLift, tol: f64, max_iter: usize) -> Self {
        let d = lift.degree() as f64;
        let vf = -lift.resultant().norm().ln() / (d * (d - 1.0));
        let mut tf = 0.0f64;
        for p in sphere_grid(64, 128) {
            let (a, b) = lift.eval_vec(&p);
            tf = tf.max((a.norm_sqr() + b.norm_sqr()).sqrt().ln().abs() / d);
        }
        GreenEvaluator { lift, tol, max_iter, vf, tf_sup: tf + TF_MARGIN }
    }

    pub fn lift(&self) -> &HomLift {
        &self.lift
    }

    pub fn degree(&self) -> usize {
        self.lift.degree()
    }

    pub fn vf(&self) -> f64 {
        self.vf
    }

    pub fn tf_sup(&self) -> f64 {
        self.tf_sup
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `G^F(p)` for a unit vector, with its truncation-error bound.
    pub fn escape_rate_unit(&self, p: (Complex64, Complex64)) -> (f64, f64) {
        let d = self.lift.degree() as f64;
        let tail_factor = 1.0 / (1.0 - 1.0 / d);
        let mut q = p;
        let mut sum = 0.0;
        let mut scale = 1.0 / d;
        let mut err = self.tf_sup * d * tail_factor;
        for _ in 0..self.max_iter {
            let (a, b) = self.lift.eval_xy(q.0, q.1);
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            sum += scale * n.ln();
            q = (a / n, b / n);
            err = self.tf_sup * scale * tail_factor;
            scale /= d;
            if err < self.tol {
                break;
            }
        }
        (sum, err)
    }

    /// `G^F(v)` for any nonzero vector.
    pub fn escape_rate_vec(&self, v: (Complex64, Complex64)) -> f64 {
        let n = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
        self.escape_rate_unit((v.0 / n, v.1 / n)).0 + n.ln()
    }

    pub fn escape_rate(&self, p: &ProjPoint) -> f64 {
        self.escape_rate_unit(p.coords()).0
    }

    pub fn green_g_lift(&self, x: &ProjPoint) -> f64 {
        self.escape_rate(x)
    }

    pub fn green_gf(&self, x: &ProjPoint) -> f64 {
        self.escape_rate(x) + 0.5 * self.vf
    }

    /// `Phi_f(x, y)`; `-inf` when the points coincide.
    pub fn phi_f(&self, x: &ProjPoint, y: &ProjPoint) -> f64 {
        if x.same_point(y) {
            return f64::NEG_INFINITY;
        }
        self.phi_f_with(x, y, self.green_gf(x), self.green_gf(y))
    }

    /// `Phi_f(x, y)` from precomputed `g_f(x)`, `g_f(y)`.
    pub fn phi_f_with(&self, x: &ProjPoint, y: &ProjPoint, gx: f64, gy: f64) -> f64 {
        if x.same_point(y) {
            return f64::NEG_INFINITY;
        }
        chordal(x, y).ln() - (gx + gy)
    }

    /// `Phi_F = Phi_f + V_F`.
    pub fn phi_capital_f(&self, x: &ProjPoint, y: &ProjPoint) -> f64 {
        self.phi_f(x, y) + self.vf
    }

    /// `U_mu(z) = sum_w m_w Phi_f(z, w)` for a weighted atom list.
    pub fn potential_of_atoms(&self, z: &ProjPoint, atoms: &[(ProjPoint, f64)]) -> f64 {
        let gz = self.green_gf(z);
        let mut sum = 0.0;
        for (w, m) in atoms {
            if z.same_point(w) {
                return f64::NEG_INFINITY;
            }
            sum += m * self.phi_f_with(z, w, gz, self.green_gf(w));
        }
        sum
    }

    /// `B(f) = sum_j (G^F(C_j) + V_F)` over a factorization `det DF = prod (p ^ C_j)`.
    pub fn bifurcation_potential(&self) -> Result<f64> {
        let crit = self.lift.critical_points()?;
        let mut b = crit.constant.norm().ln();
        for (c, m) in &crit.atoms {
            b += *m as f64 * (self.escape_rate(c) + self.vf);
        }
        Ok(b)
    }

    /// Chordal derivative `f^#(z) = |det DF(p)| / (d |F(p)|^2)`.
    pub fn chordal_derivative(&self, z: &ProjPoint) -> f64 {
        let (a, b) = self.lift.eval_vec(z);
        self.lift.jacobian_at(z).norm() / (self.lift.degree() as f64 * (a.norm_sqr() + b.norm_sqr()))
    }

    /// Estimate of `sup |g_f|` from a 64x128 grid and its doubling.
    pub fn sup_abs_gf(&self) -> SupEstimate {
        let coarse = sphere_grid(64, 128).iter().map(|p| self.green_gf(p).abs()).fold(0.0, f64::max);
        let fine = sphere_grid(128, 256).iter().map(|p| self.green_gf(p).abs()).fold(0.0, f64::max);
        SupEstimate { value: coarse.max(fine), coarse, fine, nonrigorous: true }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_map;

    fn z2() -> GreenEvaluator {
        GreenEvaluator::new(parse_map("z^2").unwrap())
    }

    #[test]
    fn escape_rate_of_z2() {
        let g = z2();
        let p = ProjPoint::from_re_im(2.0, 0.0);
        assert!((g.escape_rate(&p) - (2f64.ln() - 5f64.sqrt().ln())).abs() < 1e-12);
        assert!(g.escape_rate(&ProjPoint::infinity()).abs() < 1e-15);
    }

    #[test]
    fn green_values() {
        let g = z2();
        assert_eq!(g.vf(), 0.0);
        assert!(g.green_gf(&ProjPoint::zero()).abs() < 1e-15);
        assert!((g.green_gf(&ProjPoint::from_re_im(1.0, 0.0)) + 0.5 * 2f64.ln()).abs() < 1e-12);
        let n = GreenEvaluator::new(parse_map("(z^2+1)/(2*z)").unwrap());
        assert!((n.vf() + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn kernel_values() {
        let g = z2();
        assert!(g.phi_f(&ProjPoint::from_re_im(1.0, 0.0), &ProjPoint::zero()).abs() < 1e-12);
        assert!((g.phi_f(&ProjPoint::from_re_im(2.0, 0.0), &ProjPoint::infinity()) + 2f64.ln()).abs() < 1e-12);
        let p = ProjPoint::from_re_im(0.3, 0.1);
        assert_eq!(g.phi_f(&p, &p), f64::NEG_INFINITY);
    }

    #[test]
    fn bifurcation_of_z2() {
        assert!((z2().bifurcation_potential().unwrap() - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn chordal_derivative_of_z2() {
        let g = z2();
        assert!((g.chordal_derivative(&ProjPoint::from_re_im(1.0, 0.0)) - 2.0).abs() < 1e-14);
        assert!((g.chordal_derivative(&ProjPoint::from_re_im(2.0, 0.0)) - 20.0 / 17.0).abs() < 1e-14);
        assert_eq!(g.chordal_derivative(&ProjPoint::zero()), 0.0);
    }

    #[test]
    fn truncation_error_is_reported() {
        let g = z2();
        let (_, err) = g.escape_rate_unit(ProjPoint::from_re_im(0.5, 0.5).coords());
        assert!(err < g.tol());
    }
}
