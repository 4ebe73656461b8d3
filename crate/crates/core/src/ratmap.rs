//! Rational maps through homogeneous lifts `F = (P, Q)`.
//!
//! Binary forms of degree `n` are coefficient vectors `c` with `c[i]` the
//! coefficient of `X^(n-i) Y^i`. A lift keeps the representative it was built
//! from; Gaussian-rational input also keeps exact coefficients so resultants
//! can be computed without rounding.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{bareiss_det, sylvester, GaussRat};
use crate::projline::{chordal, Mobius, ProjPoint, EPS_PT};
use crate::rootsolve::{eval_form_xy, roots_binary_form, RootList};

/// Largest iterate degree `iterate_lift` will build.
pub const MAX_ITERATE_DEGREE: usize = 1 << 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, Serialize)]
pub struct CriticalSet {
    /// Critical points with multiplicity `deg_c f - 1`.
    pub atoms: Vec<(ProjPoint, usize)>,
    /// `c` in `det DF = c * prod (b_j X - a_j Y)` over unit root representatives.
    pub constant: Complex64,
    pub residual_max: f64,
    pub warnings: Vec<String>,
}

impl CriticalSet {
    pub fn total_multiplicity(&self) -> usize {
        self.atoms.iter().map(|a| a.1).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CycleClass {
    Superattracting,
    Attracting,
    Indifferent,
    Repelling,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicPoint {
    pub point: ProjPoint,
    pub period: usize,
    pub multiplier: Complex64,
    pub class: CycleClass,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct HomLift {
    d: usize,
    p: Vec<Complex64>,
    q: Vec<Complex64>,
    exact: Option<(Vec<GaussRat>, Vec<GaussRat>)>,
    jac: Vec<Complex64>,
    res: Complex64,
    critical: OnceLock<std::result::Result<CriticalSet, Error>>,
}

impl HomLift {
    /// Builds a lift from floating coefficients; rejects degree below 2 and
    /// (numerically) degenerate pairs.
    pub fn new(p: Vec<Complex64>, q: Vec<Complex64>) -> Result<Self> {
        Self::build(p, q, None)
    }

    /// Builds a lift from Gaussian-rational coefficients; the resultant is exact.
    pub fn from_exact(p: Vec<GaussRat>, q: Vec<GaussRat>) -> Result<Self> {
        let pf = p.iter().map(|c| c.to_complex()).collect();
        let qf = q.iter().map(|c| c.to_complex()).collect();
        Self::build(pf, qf, Some((p, q)))
    }

    fn build(p: Vec<Complex64>, q: Vec<Complex64>, exact: Option<(Vec<GaussRat>, Vec<GaussRat>)>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::InvalidInput("P and Q must have the same number of coefficients".into()));
        }
        if p.len() < 3 {
            return Err(Error::InvalidInput("degree must be at least 2".into()));
        }
        if p.iter().chain(q.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let d = p.len() - 1;
        let res = match &exact {
            Some((pe, qe)) => {
                let r = bareiss_det(sylvester(pe, qe));
                if r.is_zero() {
                    return Err(Error::Degenerate("resultant is exactly zero".into()));
                }
                r.to_complex()
            }
            None => {
                let r = float_resultant(&p, &q);
                let scale = p.iter().chain(q.iter()).map(|c| c.norm()).fold(0.0, f64::max);
                if r.norm().is_nan() || r.norm() <= 1e-12 * scale.powi(2 * d as i32) {
                    return Err(Error::Degenerate(format!("|Res| = {:e} is below tolerance", r.norm())));
                }
                r
            }
        };
        let jac = jacobian_coeffs(&p, &q);
        Ok(HomLift { d, p, q, exact, jac, res, critical: OnceLock::new() })
    }

    /// Parses `{"d":2,"P":[[re,im],...],"Q":[...]}`. Decimal literals are read
    /// exactly, so the resultant is exact.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("lift JSON: {e}")))?;
        let read = |key: &str| -> Result<Vec<GaussRat>> {
            let arr = v.get(key).and_then(|x| x.as_array()).ok_or_else(|| Error::InvalidInput(format!("lift JSON: missing array {key}")))?;
            arr.iter()
                .map(|pair| {
                    let parts = pair.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::InvalidInput(format!("lift JSON: {key} entries must be [re, im]")))?;
                    let num = |x: &serde_json::Value| -> Result<num_rational::BigRational> {
                        let s = x.as_number().ok_or_else(|| Error::InvalidInput("lift JSON: non-numeric coefficient".into()))?.to_string();
                        let (neg, body) = match s.strip_prefix('-') {
                            Some(b) => (true, b),
                            None => (false, s.as_str()),
                        };
                        let q = GaussRat::parse_decimal(body).ok_or_else(|| Error::InvalidInput(format!("lift JSON: bad number {s}")))?;
                        Ok(if neg { -q } else { q })
                    };
                    Ok(GaussRat::new(num(&parts[0])?, num(&parts[1])?))
                })
                .collect()
        };
        let p = read("P")?;
        let q = read("Q")?;
        if let Some(d) = v.get("d").and_then(|x| x.as_u64()) {
            if d as usize + 1 != p.len() || d as usize + 1 != q.len() {
                return Err(Error::InvalidInput(format!("lift JSON: d = {d} does not match coefficient counts")));
            }
        }
        Self::from_exact(p, q)
    }

    pub fn to_json(&self) -> String {
        let pairs = |v: &[Complex64]| v.iter().map(|c| serde_json::json!([c.re, c.im])).collect::<Vec<_>>();
        serde_json::json!({"d": self.d, "P": pairs(&self.p), "Q": pairs(&self.q)}).to_string()
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn p_coeffs(&self) -> &[Complex64] {
        &self.p
    }

    pub fn q_coeffs(&self) -> &[Complex64] {
        &self.q
    }

    pub fn exact_coeffs(&self) -> Option<(&[GaussRat], &[GaussRat])> {
        self.exact.as_ref().map(|(p, q)| (p.as_slice(), q.as_slice()))
    }

    /// `(P(x, y), Q(x, y))`.
    pub fn eval_xy(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (eval_form_xy(&self.p, x, y), eval_form_xy(&self.q, x, y))
    }

    pub fn eval_vec(&self, p: &ProjPoint) -> (Complex64, Complex64) {
        let (x, y) = p.coords();
        self.eval_xy(x, y)
    }

    pub fn evaluate(&self, p: &ProjPoint) -> ProjPoint {
        let (a, b) = self.eval_vec(p);
        ProjPoint::new(a, b).expect("non-degenerate lift has no nonzero zeros")
    }

    /// `f^n(p)`.
    pub fn orbit_point(&self, p: &ProjPoint, n: usize) -> ProjPoint {
        (0..n).fold(*p, |acc, _| self.evaluate(&acc))
    }

    /// Coefficients of `det DF`, a form of degree `2d - 2`.
    pub fn jacobian_form(&self) -> &[Complex64] {
        &self.jac
    }

    pub fn jacobian_at(&self, p: &ProjPoint) -> Complex64 {
        let (x, y) = p.coords();
        eval_form_xy(&self.jac, x, y)
    }

    pub fn critical_points(&self) -> Result<&CriticalSet> {
        self.critical
            .get_or_init(|| {
                let roots: RootList = roots_binary_form(&self.jac)?;
                if roots.total_multiplicity() != 2 * self.d - 2 {
                    return Err(Error::Consistency("critical multiplicities do not sum to 2d-2".into()));
                }
                let constant = roots.leading_constant(&self.jac);
                Ok(CriticalSet {
                    atoms: roots.atoms.iter().map(|a| (a.point, a.multiplicity)).collect(),
                    constant,
                    residual_max: roots.residual_max,
                    warnings: roots.warnings,
                })
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// `deg_p f`, from the critical multiplicities.
    pub fn local_degree(&self, p: &ProjPoint) -> Result<usize> {
        let crit = self.critical_points()?;
        Ok(1 + crit.atoms.iter().filter(|(c, _)| chordal(c, p) <= EPS_PT).map(|(_, m)| *m).sum::<usize>())
    }

    /// Homogeneous resultant `Res(P, Q)`; exact when the lift carries exact
    /// coefficients.
    pub fn resultant(&self) -> Complex64 {
        self.res
    }

    pub fn resultant_exact(&self) -> Option<GaussRat> {
        self.exact.as_ref().map(|(p, q)| bareiss_det(sylvester(p, q)))
    }

    /// The lift `c F`.
    pub fn scaled(&self, c: Complex64) -> Result<HomLift> {
        let p = self.p.iter().map(|a| a * c).collect();
        let q = self.q.iter().map(|a| a * c).collect();
        match (&self.exact, GaussRat::from_complex(c)) {
            (Some((pe, qe)), Some(ce)) => {
                HomLift::from_exact(pe.iter().map(|a| a * &ce).collect(), qe.iter().map(|a| a * &ce).collect())
            }
            _ => HomLift::new(p, q),
        }
    }

    /// The lift `F^k` of `f^k`, by repeated composition of binary forms.
    pub fn iterate_lift(&self, k: usize) -> Result<HomLift> {
        if k == 0 {
            return Err(Error::InvalidInput("iterate order must be at least 1".into()));
        }
        let deg = (self.d as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if deg > MAX_ITERATE_DEGREE as u128 {
            return Err(Error::Budget(format!("iterate of degree {deg} exceeds {MAX_ITERATE_DEGREE}")));
        }
        let mut cur = self.clone();
        for _ in 1..k {
            cur = self.compose_with(&cur)?;
        }
        Ok(cur)
    }

    /// The lift `F o G`.
    pub fn compose_with(&self, g: &HomLift) -> Result<HomLift> {
        match (&self.exact, &g.exact) {
            (Some((p, q)), Some((g1, g2))) => {
                let np = compose_form_exact(p, g1, g2);
                let nq = compose_form_exact(q, g1, g2);
                HomLift::from_exact(np, nq)
            }
            _ => HomLift::new(compose_form(&self.p, &g.p, &g.q), compose_form(&self.q, &g.p, &g.q)),
        }
    }

    /// Lift of `h^-1 o f o h` for a unitary `h`.
    pub fn conjugate(&self, h: &Mobius) -> Result<HomLift> {
        Mobius::new(h.matrix())?;
        let m = h.matrix();
        let lin1 = vec![m[0][0], m[0][1]];
        let lin2 = vec![m[1][0], m[1][1]];
        let fp = compose_form(&self.p, &lin1, &lin2);
        let fq = compose_form(&self.q, &lin1, &lin2);
        let inv = h.inverse().matrix();
        let p: Vec<Complex64> = fp.iter().zip(fq.iter()).map(|(a, b)| inv[0][0] * a + inv[0][1] * b).collect();
        let q: Vec<Complex64> = fp.iter().zip(fq.iter()).map(|(a, b)| inv[1][0] * a + inv[1][1] * b).collect();
        HomLift::new(p, q)
    }

    /// Coefficients `F_k` of `F(p + t v) = sum_k t^k F_k`.
    pub fn jet(&self, p: (Complex64, Complex64), v: (Complex64, Complex64)) -> Vec<(Complex64, Complex64)> {
        let a = shift_form(&self.p, p, v);
        let b = shift_form(&self.q, p, v);
        a.into_iter().zip(b).collect()
    }

    /// Periodic points of exact period `1..=p_max` with multipliers and types.
    pub fn classify_periodic(&self, p_max: usize) -> Result<Vec<PeriodicPoint>> {
        if p_max == 0 || p_max > 3 {
            return Err(Error::InvalidInput("period bound must be between 1 and 3".into()));
        }
        let mut out: Vec<PeriodicPoint> = Vec::new();
        for per in 1..=p_max {
            let g = self.iterate_lift(per)?;
            let e = g.degree();
            // Y P - X Q, degree e + 1
            let mut form = vec![ZERO; e + 2];
            for i in 0..=e {
                form[i + 1] += g.p[i];
                form[i] -= g.q[i];
            }
            let roots = roots_binary_form(&form)?;
            for atom in &roots.atoms {
                let z = atom.point;
                let minimal = (1..per).all(|s| per % s != 0 || chordal(&self.orbit_point(&z, s), &z) > 1e-8);
                if !minimal {
                    continue;
                }
                let (gx, gy) = g.eval_vec(&z);
                let (z0, z1) = z.coords();
                let t = gx * z0.conj() + gy * z1.conj();
                let lambda = g.jacobian_at(&z) / (t * t * e as f64);
                let r = lambda.norm();
                let class = if r < 1e-8 {
                    CycleClass::Superattracting
                } else if r < 1.0 - 1e-8 {
                    CycleClass::Attracting
                } else if r <= 1.0 + 1e-8 {
                    CycleClass::Indifferent
                } else {
                    CycleClass::Repelling
                };
                out.push(PeriodicPoint { point: z, period: per, multiplier: lambda, class, multiplicity: atom.multiplicity });
            }
        }
        Ok(out)
    }
}

fn float_resultant(p: &[Complex64], q: &[Complex64]) -> Complex64 {
    let d = p.len() - 1;
    let n = 2 * d;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for r in 0..d {
        for i in 0..=d {
            m[(r, r + i)] = p[i];
            m[(d + r, r + i)] = q[i];
        }
    }
    m.lu().determinant()
}

fn d_dx(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    (0..n).map(|i| c[i] * (n - i) as f64).collect()
}

fn d_dy(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    (1..=n).map(|i| c[i] * i as f64).collect()
}

pub fn form_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn jacobian_coeffs(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    let a = form_mul(&d_dx(p), &d_dy(q));
    let b = form_mul(&d_dy(p), &d_dx(q));
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

/// `A(G1, G2)` for a form `A` and forms `G1, G2` of a common degree.
fn compose_form(a: &[Complex64], g1: &[Complex64], g2: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let e = g1.len() - 1;
    let mut pow1 = vec![vec![Complex64::new(1.0, 0.0)]];
    let mut pow2 = vec![vec![Complex64::new(1.0, 0.0)]];
    for i in 1..=n {
        pow1.push(form_mul(&pow1[i - 1], g1));
        pow2.push(form_mul(&pow2[i - 1], g2));
    }
    let mut out = vec![ZERO; n * e + 1];
    for (i, c) in a.iter().enumerate() {
        if *c == ZERO {
            continue;
        }
        let term = form_mul(&pow1[n - i], &pow2[i]);
        for (o, t) in out.iter_mut().zip(term.iter()) {
            *o += c * t;
        }
    }
    out
}

fn form_mul_exact(a: &[GaussRat], b: &[GaussRat]) -> Vec<GaussRat> {
    let mut out = vec![GaussRat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn compose_form_exact(a: &[GaussRat], g1: &[GaussRat], g2: &[GaussRat]) -> Vec<GaussRat> {
    let n = a.len() - 1;
    let e = g1.len() - 1;
    let mut pow1 = vec![vec![GaussRat::one()]];
    let mut pow2 = vec![vec![GaussRat::one()]];
    for i in 1..=n {
        pow1.push(form_mul_exact(&pow1[i - 1], g1));
        pow2.push(form_mul_exact(&pow2[i - 1], g2));
    }
    let mut out = vec![GaussRat::zero(); n * e + 1];
    for (i, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = form_mul_exact(&pow1[n - i], &pow2[i]);
        for (o, t) in out.iter_mut().zip(term.iter()) {
            *o = &*o + &(c * t);
        }
    }
    out
}

/// Taylor coefficients in `t` of `A(x + t a, y + t b)`.
fn shift_form(c: &[Complex64], p: (Complex64, Complex64), v: (Complex64, Complex64)) -> Vec<Complex64> {
    let n = c.len() - 1;
    let l1 = [p.0, v.0];
    let l2 = [p.1, v.1];
    let mut pow1 = vec![vec![Complex64::new(1.0, 0.0)]];
    let mut pow2 = vec![vec![Complex64::new(1.0, 0.0)]];
    for i in 1..=n {
        pow1.push(form_mul(&pow1[i - 1], &l1));
        pow2.push(form_mul(&pow2[i - 1], &l2));
    }
    let mut out = vec![ZERO; n + 1];
    for (i, a) in c.iter().enumerate() {
        let term = form_mul(&pow1[n - i], &pow2[i]);
        for (o, t) in out.iter_mut().zip(term.iter()) {
            *o += a * t;
        }
    }
    out
}

/// Wedge of two (not necessarily unit) vectors.
pub fn wedge_vec(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> Complex64 {
    a.0 * b.1 - a.1 * b.0
}
