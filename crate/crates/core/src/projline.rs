//! Points of the complex projective line and the chordal metric.
//!
//! A [`ProjPoint`] stores a homogeneous coordinate pair normalized to unit
//! Euclidean length, with the phase fixed so that the larger coordinate is real
//! and positive. On unit vectors the chordal distance `[z, w]` is exactly the
//! modulus of the wedge `z0 w1 - z1 w0`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Library-wide point equality tolerance, measured in the chordal metric.
pub const EPS_PT: f64 = 1e-10;

const UNITARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ProjPoint {
    z0: Complex64,
    z1: Complex64,
}

impl ProjPoint {
    /// Builds a point from a homogeneous pair; fails on `(0, 0)` or non-finite input.
    pub fn new(z0: Complex64, z1: Complex64) -> Result<Self> {
        if !(z0.re.is_finite() && z0.im.is_finite() && z1.re.is_finite() && z1.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite homogeneous coordinate".into()));
        }
        // scale first so that the norm cannot overflow
        let s = z0.norm().max(z1.norm());
        if s == 0.0 {
            return Err(Error::InvalidInput("homogeneous pair (0, 0)".into()));
        }
        let (a, b) = (z0 / s, z1 / s);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / n, b / n);
        // fix the phase on the dominant coordinate
        let lead = if a.norm() >= b.norm() { a } else { b };
        let phase = lead.conj() / lead.norm();
        Ok(ProjPoint { z0: a * phase, z1: b * phase })
    }

    pub fn from_affine(z: Complex64) -> Self {
        ProjPoint::new(z, Complex64::new(1.0, 0.0)).expect("finite affine point")
    }

    pub fn from_re_im(re: f64, im: f64) -> Self {
        ProjPoint::from_affine(Complex64::new(re, im))
    }

    pub fn infinity() -> Self {
        ProjPoint { z0: Complex64::new(1.0, 0.0), z1: Complex64::new(0.0, 0.0) }
    }

    pub fn zero() -> Self {
        ProjPoint { z0: Complex64::new(0.0, 0.0), z1: Complex64::new(1.0, 0.0) }
    }

    pub fn coords(&self) -> (Complex64, Complex64) {
        (self.z0, self.z1)
    }

    pub fn is_infinity(&self) -> bool {
        self.z1.norm() <= EPS_PT
    }

    /// The affine coordinate `z0 / z1`, or `None` when `z1` is exactly zero.
    pub fn affine(&self) -> Option<Complex64> {
        if self.z1 == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(self.z0 / self.z1)
        }
    }

    /// Coordinates on the unit sphere `S^2` under stereographic projection
    /// (`infinity` is the north pole).
    pub fn to_sphere(&self) -> [f64; 3] {
        let (a, b) = (self.z0, self.z1);
        let w = a * b.conj();
        let na = a.norm_sqr();
        let nb = b.norm_sqr();
        [2.0 * w.re, 2.0 * w.im, na - nb]
    }

    pub fn from_sphere(x: [f64; 3]) -> Self {
        let [x1, x2, x3] = x;
        if x3 <= 0.0 {
            ProjPoint::new(Complex64::new(x1, x2), Complex64::new(1.0 - x3, 0.0))
        } else {
            ProjPoint::new(Complex64::new(1.0 + x3, 0.0), Complex64::new(x1, -x2))
        }
        .expect("point on the sphere")
    }

    /// `1/z`, realized by swapping homogeneous coordinates.
    pub fn reciprocal(&self) -> Self {
        ProjPoint::new(self.z1, self.z0).expect("unit vector")
    }

    pub fn same_point(&self, other: &ProjPoint) -> bool {
        chordal(self, other) <= EPS_PT
    }

    /// Lexicographic key `(is_infinity, re, im)` used for deterministic ordering.
    pub fn sort_key(&self) -> (bool, f64, f64) {
        match self.affine() {
            Some(z) if !self.is_infinity() => (false, z.re, z.im),
            _ => (true, 0.0, 0.0),
        }
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.same_point(other)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            return write!(f, "inf");
        }
        let z = self.affine().unwrap_or_default();
        if z.im >= 0.0 {
            write!(f, "{}+{}i", z.re, z.im)
        } else {
            write!(f, "{}-{}i", z.re, -z.im)
        }
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// Accepts `inf` or any constant complex expression such as `0.3+0.4i`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(ProjPoint::infinity());
        }
        let value = crate::expr::parse_constant(t)?;
        Ok(ProjPoint::from_affine(value.to_complex()))
    }
}

/// `z0 w1 - z1 w0` on the stored unit coordinates.
pub fn wedge(p: &ProjPoint, q: &ProjPoint) -> Complex64 {
    p.z0 * q.z1 - p.z1 * q.z0
}

/// Normalized chordal distance, in `[0, 1]`.
pub fn chordal(p: &ProjPoint, q: &ProjPoint) -> f64 {
    wedge(p, q).norm().min(1.0)
}

/// Chordal distance between two affine points, via the closed form.
pub fn chordal_affine(z: Complex64, w: Complex64) -> f64 {
    (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
}

/// A unitary 2x2 matrix acting on the projective line as a chordal isometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    m: [[Complex64; 2]; 2],
}

impl Mobius {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        // rows orthonormal
        let r0 = m[0][0].norm_sqr() + m[0][1].norm_sqr();
        let r1 = m[1][0].norm_sqr() + m[1][1].norm_sqr();
        let cross = m[0][0] * m[1][0].conj() + m[0][1] * m[1][1].conj();
        if (r0 - 1.0).abs() > UNITARY_TOL || (r1 - 1.0).abs() > UNITARY_TOL || cross.norm() > UNITARY_TOL {
            return Err(Error::InvalidInput("matrix is not unitary".into()));
        }
        Ok(Mobius { m })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Mobius { m: [[one, zero], [zero, one]] }
    }

    /// `z -> -1/z`.
    pub fn inversion() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Mobius { m: [[zero, -one], [one, zero]] }
    }

    /// Element of `SU(2)` from Euler-type angles.
    pub fn from_angles(theta: f64, phi: f64, psi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let e_phi = Complex64::from_polar(1.0, phi);
        let e_psi = Complex64::from_polar(1.0, psi);
        Mobius {
            m: [
                [e_phi * c, -e_psi.conj() * s],
                [e_psi * s, e_phi.conj() * c],
            ],
        }
    }

    /// The isometry with `h(0) = p`, determinant one.
    pub fn moving_zero_to(p: &ProjPoint) -> Self {
        let (z0, z1) = p.coords();
        Mobius { m: [[z1.conj(), z0], [-z0.conj(), z1]] }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Conjugate transpose, which is the inverse of a unitary matrix.
    pub fn inverse(&self) -> Self {
        let m = self.m;
        Mobius {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn compose(&self, other: &Mobius) -> Mobius {
        let (a, b) = (self.m, other.m);
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mobius { m }
    }

    pub fn apply_vec(&self, v: (Complex64, Complex64)) -> (Complex64, Complex64) {
        let m = self.m;
        (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let (a, b) = self.apply_vec(p.coords());
        ProjPoint::new(a, b).expect("unitary image of a unit vector")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_point(rng: &mut ChaCha8Rng) -> ProjPoint {
        ProjPoint::new(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .unwrap()
    }

    #[test]
    fn wedge_examples() {
        let w = wedge(&ProjPoint::infinity(), &ProjPoint::zero());
        assert!((w - c(1.0, 0.0)).norm() < 1e-15);
        let p = ProjPoint::from_re_im(0.3, -0.7);
        assert_eq!(wedge(&p, &p).norm(), 0.0);
        let q = ProjPoint::new(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((wedge(&q, &ProjPoint::zero()).norm() - 2.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn chordal_examples() {
        let one = ProjPoint::from_re_im(1.0, 0.0);
        assert!((chordal(&one, &ProjPoint::zero()) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(chordal(&one, &one), 0.0);
        let two = ProjPoint::from_re_im(2.0, 0.0);
        assert!((chordal(&two, &ProjPoint::infinity()) - 1.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn normalization_and_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let (a, b) = p.coords();
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-14);
            // same point under rescaling by a complex constant
            let s = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let q = ProjPoint::new(a * s, b * s).unwrap();
            assert_eq!(p, q);
        }
        assert!(ProjPoint::new(c(0.0, 0.0), c(0.0, 0.0)).is_err());
        let big = ProjPoint::from_re_im(1e200, 1e200);
        assert!(big.is_infinity());
    }

    #[test]
    fn affine_closed_form_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let w = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let a = chordal(&ProjPoint::from_affine(z), &ProjPoint::from_affine(w));
            assert!((a - chordal_affine(z, w)).abs() < 1e-13);
        }
    }

    #[test]
    fn metric_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let (p, q, r) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
            let pq = chordal(&p, &q);
            assert_eq!(pq, chordal(&q, &p));
            assert!((0.0..=1.0).contains(&pq));
            assert!(pq <= chordal(&p, &r) + chordal(&r, &q) + 1e-12);
        }
    }

    #[test]
    fn mobius_examples() {
        let p = ProjPoint::from_re_im(0.2, 0.9);
        assert_eq!(Mobius::identity().apply(&p), p);
        let h = Mobius::inversion();
        let one = ProjPoint::from_re_im(1.0, 0.0);
        assert_eq!(h.apply(&one), ProjPoint::from_re_im(-1.0, 0.0));
        let two = ProjPoint::from_re_im(2.0, 0.0);
        let a = chordal(&one, &two);
        let b = chordal(&ProjPoint::from_re_im(-1.0, 0.0), &ProjPoint::from_re_im(-0.5, 0.0));
        assert!((a - b).abs() < 1e-15);
        assert!((chordal(&h.apply(&one), &h.apply(&two)) - a).abs() < 1e-15);
    }

    #[test]
    fn mobius_preserves_chordal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let h = Mobius::from_angles(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0));
            assert!(Mobius::new(h.matrix()).is_ok());
            let (p, q) = (random_point(&mut rng), random_point(&mut rng));
            assert!((chordal(&h.apply(&p), &h.apply(&q)) - chordal(&p, &q)).abs() < 1e-12);
            let back = h.inverse().apply(&h.apply(&p));
            assert!(chordal(&back, &p) < 1e-14);
        }
    }

    #[test]
    fn mobius_rejects_non_unitary() {
        let two = c(2.0, 0.0);
        let zero = c(0.0, 0.0);
        assert!(Mobius::new([[two, zero], [zero, c(0.5, 0.0)]]).is_err());
    }

    #[test]
    fn moving_zero() {
        let p = ProjPoint::from_re_im(-3.0, 0.25);
        let h = Mobius::moving_zero_to(&p);
        assert!(Mobius::new(h.matrix()).is_ok());
        assert_eq!(h.apply(&ProjPoint::zero()), p);
        assert!((h.det() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sphere_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let x = p.to_sphere();
            assert!((x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0).abs() < 1e-14);
            assert!(chordal(&ProjPoint::from_sphere(x), &p) < 1e-14);
        }
        assert!(ProjPoint::from_sphere([0.0, 0.0, 1.0]).is_infinity());
    }

    #[test]
    fn parse_points() {
        assert!("inf".parse::<ProjPoint>().unwrap().is_infinity());
        let p: ProjPoint = "0.3+0.4i".parse().unwrap();
        assert!((p.affine().unwrap() - c(0.3, 0.4)).norm() < 1e-15);
        let q: ProjPoint = "-2".parse().unwrap();
        assert!((q.affine().unwrap() - c(-2.0, 0.0)).norm() < 1e-15);
        assert!("z+1".parse::<ProjPoint>().is_err());
    }
}
