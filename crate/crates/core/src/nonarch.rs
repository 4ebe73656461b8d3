//! Exact p-adic kernels on the tree of balls over `Q_p`.
//!
//! Every kernel value is a rational multiple of `log p` ([`LogValue`]); a ball
//! `B(c, p^-r)` is stored by its center and the exponent `r`, classical points
//! having no exponent.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{bareiss_det, sylvester};
use crate::ratmap::HomLift;

/// Largest iterate degree `d^k` for [`gauss_green`].
pub const GAUSS_DEGREE_BUDGET: usize = 4096;
pub const GAUSS_MAX_K: usize = 6;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 || !(2..).take_while(|k: &u64| k * k <= p).all(|k| !p.is_multiple_of(k)) {
        return Err(Error::InvalidInput(format!("{p} is not a prime")));
    }
    Ok(())
}

fn vp_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation; `None` for zero.
pub fn vp(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(vp_int(x.numer(), p) - vp_int(x.denom(), p))
}

/// `|x|_p = p^-vp(x)`.
pub fn absp(x: &BigRational, p: u64) -> BigRational {
    match vp(x, p) {
        None => BigRational::zero(),
        Some(v) => {
            let pp = BigRational::from_integer(BigInt::from(p));
            if v >= 0 {
                BigRational::one() / num_traits::pow(pp, v as usize)
            } else {
                num_traits::pow(pp, (-v) as usize)
            }
        }
    }
}

/// `coeff * log p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogValue(pub BigRational);

impl LogValue {
    pub fn zero() -> Self {
        LogValue(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        LogValue(rat(n))
    }

    pub fn coeff(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self, p: u64) -> f64 {
        let c = self.0.numer().to_f64().unwrap_or(f64::NAN) / self.0.denom().to_f64().unwrap_or(f64::NAN);
        c * (p as f64).ln()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::ops::Add for LogValue {
    type Output = LogValue;
    fn add(self, o: LogValue) -> LogValue {
        LogValue(self.0 + o.0)
    }
}

impl std::ops::Sub for LogValue {
    type Output = LogValue;
    fn sub(self, o: LogValue) -> LogValue {
        LogValue(self.0 - o.0)
    }
}

impl std::ops::Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue(-self.0)
    }
}

/// A closed ball `{z : |z - center|_p <= p^-r}`, or a classical point when `r` is `None`.
#[derive(Clone, Debug)]
pub struct PadicBall {
    pub p: u64,
    pub center: BigRational,
    pub radius_val: Option<BigRational>,
}

/// Exponents ordered so that `None` (radius 0) is the largest.
fn exp_min(a: &Option<BigRational>, b: &Option<BigRational>) -> Option<BigRational> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

fn exp_cmp(a: &Option<BigRational>, b: &Option<BigRational>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Greater,
        (_, None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

impl PadicBall {
    pub fn new(p: u64, center: BigRational, radius_val: BigRational) -> Result<Self> {
        check_prime(p)?;
        Ok(PadicBall { p, center, radius_val: Some(radius_val) })
    }

    pub fn point(p: u64, center: BigRational) -> Result<Self> {
        check_prime(p)?;
        Ok(PadicBall { p, center, radius_val: None })
    }

    /// The Gauss point, the closed unit ball.
    pub fn gauss(p: u64) -> Result<Self> {
        Self::new(p, BigRational::zero(), BigRational::zero())
    }

    pub fn is_classical(&self) -> bool {
        self.radius_val.is_none()
    }

    /// `log diam` in units of `log p`; `None` for a classical point.
    pub fn log_diam(&self) -> Option<LogValue> {
        self.radius_val.as_ref().map(|r| LogValue(-r.clone()))
    }

    fn dist_exp(&self, x: &BigRational) -> Option<BigRational> {
        vp(&(x - &self.center), self.p).map(rat)
    }

    pub fn contains_point(&self, x: &BigRational) -> bool {
        exp_cmp(&self.dist_exp(x), &self.radius_val) != Ordering::Less
    }

    /// `self` is contained in `other`.
    pub fn is_subset(&self, other: &PadicBall) -> bool {
        exp_cmp(&self.radius_val, &other.radius_val) != Ordering::Less && other.contains_point(&self.center)
    }

    /// `log max{1, |S|}` with `|S| = sup_{z in S} |z|_p`.
    pub fn log_abs_clamped(&self) -> LogValue {
        let e = exp_min(&vp(&self.center, self.p).map(rat), &self.radius_val);
        match e {
            Some(e) if e.is_negative() => LogValue(-e),
            _ => LogValue::zero(),
        }
    }

    fn same_prime(&self, o: &PadicBall) -> Result<()> {
        if self.p != o.p {
            return Err(Error::InvalidInput(format!("prime mismatch: {} vs {}", self.p, o.p)));
        }
        Ok(())
    }
}

impl PartialEq for PadicBall {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && exp_cmp(&self.radius_val, &o.radius_val) == Ordering::Equal && self.contains_point(&o.center)
    }
}

impl fmt::Display for PadicBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radius_val {
            Some(r) => write!(f, "B({}, {}^-{})", self.center, self.p, r),
            None => write!(f, "{}", self.center),
        }
    }
}

/// The smallest ball containing both.
pub fn join(s: &PadicBall, t: &PadicBall) -> Result<PadicBall> {
    s.same_prime(t)?;
    let e = exp_min(&exp_min(&s.radius_val, &t.radius_val), &s.dist_exp(&t.center));
    Ok(PadicBall { p: s.p, center: s.center.clone(), radius_val: e })
}

/// `log delta_inf(S, S') = log diam(S ^ S')`; `None` is `-inf`.
pub fn hsia(s: &PadicBall, t: &PadicBall) -> Result<Option<LogValue>> {
    Ok(join(s, t)?.log_diam())
}

/// Path length `2 log diam(S ^ S') - log diam S - log diam S'`.
pub fn rho(s: &PadicBall, t: &PadicBall) -> Result<LogValue> {
    let (ds, dt) = match (s.log_diam(), t.log_diam()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Domain("rho is defined on balls of positive radius".into())),
    };
    let dj = join(s, t)?.log_diam().expect("join of balls has positive radius");
    Ok(dj.clone() + dj - ds - dt)
}

/// `log delta_can(S, S') = log diam(S ^ S') - log max{1,|S|} - log max{1,|S'|}`.
pub fn delta_can(s: &PadicBall, t: &PadicBall) -> Result<Option<LogValue>> {
    Ok(hsia(s, t)?.map(|h| h - s.log_abs_clamped() - t.log_abs_clamped()))
}

/// The point between each pair of `a`, `b`, `c`: the smallest of the pairwise joins.
pub fn median(a: &PadicBall, b: &PadicBall, c: &PadicBall) -> Result<PadicBall> {
    let js = [join(a, b)?, join(a, c)?, join(b, c)?];
    Ok(js.into_iter().max_by(|x, y| exp_cmp(&x.radius_val, &y.radius_val)).unwrap())
}

#[derive(Clone, Debug)]
pub struct GromovCheck {
    pub lhs: LogValue,
    pub rhs: LogValue,
    pub median: PadicBall,
}

/// `log delta_can(S, S')` against `-rho(S'', S_can)`.
pub fn gromov_check(s: &PadicBall, t: &PadicBall) -> Result<GromovCheck> {
    let g = PadicBall::gauss(s.p)?;
    let lhs = delta_can(s, t)?.ok_or_else(|| Error::Domain("Gromov identity needs balls of positive radius".into()))?;
    let m = median(s, t, &g)?;
    let rhs = -rho(&m, &g)?;
    if lhs != rhs {
        return Err(Error::Consistency(format!("Gromov identity fails for {s}, {t}: {lhs} vs {rhs}")));
    }
    Ok(GromovCheck { lhs, rhs, median: m })
}

/// A lift with rational coefficients, `coeffs[i]` of `X^(d-i) Y^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalLift {
    pub p: Vec<BigRational>,
    pub q: Vec<BigRational>,
}

impl RationalLift {
    pub fn new(p: Vec<BigRational>, q: Vec<BigRational>) -> Result<Self> {
        if p.len() != q.len() || p.len() < 3 {
            return Err(Error::InvalidInput("lift needs two forms of the same degree >= 2".into()));
        }
        Ok(RationalLift { p, q })
    }

    pub fn from_ints(p: &[i64], q: &[i64]) -> Result<Self> {
        Self::new(p.iter().map(|&x| rat(x)).collect(), q.iter().map(|&x| rat(x)).collect())
    }

    /// From a lift read with exact real rational coefficients.
    pub fn from_homlift(f: &HomLift) -> Result<Self> {
        let (p, q) = f.exact_coeffs().ok_or_else(|| Error::InvalidInput("p-adic kernels need exact coefficients".into()))?;
        let real = |v: &[crate::exact::GaussRat]| -> Result<Vec<BigRational>> {
            v.iter()
                .map(|c| if c.im.is_zero() { Ok(c.re.clone()) } else { Err(Error::InvalidInput("p-adic kernels need rational (real) coefficients".into())) })
                .collect()
        };
        Self::new(real(p)?, real(q)?)
    }

    pub fn degree(&self) -> usize {
        self.p.len() - 1
    }

    pub fn resultant(&self) -> BigRational {
        bareiss_det(sylvester(&self.p, &self.q))
    }

    /// `F o G` as forms: `P(G_1, G_2)`, `Q(G_1, G_2)`.
    pub fn compose(&self, g: &RationalLift) -> RationalLift {
        let d = self.degree();
        let pow = |f: &[BigRational]| -> Vec<Vec<BigRational>> {
            let mut out = vec![vec![BigRational::one()]];
            for i in 1..=d {
                out.push(form_mul(&out[i - 1], f));
            }
            out
        };
        let (a, b) = (pow(&g.p), pow(&g.q));
        let apply = |f: &[BigRational]| -> Vec<BigRational> {
            let mut acc = vec![BigRational::zero(); d * g.degree() + 1];
            for (i, c) in f.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j, t) in form_mul(&a[d - i], &b[i]).iter().enumerate() {
                    acc[j] += c * t;
                }
            }
            acc
        };
        RationalLift { p: apply(&self.p), q: apply(&self.q) }
    }

    /// `H^-1 o F o H` for an integer matrix `H` with `det H = +-1`.
    pub fn conjugate_integral(&self, h: [[i64; 2]; 2]) -> Result<RationalLift> {
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det.abs() != 1 {
            return Err(Error::InvalidInput("conjugating matrix must have determinant +-1".into()));
        }
        // H acts on (X, Y) as (aX + bY, cX + dY)
        let lin = |a: i64, b: i64| vec![rat(a), rat(b)];
        let hl = RationalLift { p: lin(h[0][0], h[0][1]), q: lin(h[1][0], h[1][1]) };
        let inv = RationalLift { p: lin(h[1][1] * det, -h[0][1] * det), q: lin(-h[1][0] * det, h[0][0] * det) };
        let fh = self.compose(&hl);
        Ok(inv.compose_linear(&fh))
    }

    fn compose_linear(&self, f: &RationalLift) -> RationalLift {
        let comb = |a: &BigRational, b: &BigRational| -> Vec<BigRational> { f.p.iter().zip(&f.q).map(|(x, y)| a * x + b * y).collect() };
        RationalLift { p: comb(&self.p[0], &self.p[1]), q: comb(&self.q[0], &self.q[1]) }
    }

    /// Smallest valuation among all coefficients.
    fn min_val(&self, p: u64) -> Option<i64> {
        self.p.iter().chain(&self.q).filter_map(|c| vp(c, p)).min()
    }
}

fn form_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `V_F = -log|Res F|_p / (d(d-1)) = vp(Res F) log p / (d(d-1))`.
pub fn vf_padic(f: &RationalLift, p: u64) -> Result<LogValue> {
    check_prime(p)?;
    let d = f.degree() as i64;
    let v = vp(&f.resultant(), p).ok_or_else(|| Error::Degenerate("Res F = 0".into()))?;
    Ok(LogValue(BigRational::new(BigInt::from(v), BigInt::from(d * (d - 1)))))
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussGreenReport {
    pub p: u64,
    /// `g_k = d^-k log ||F^k||` for `k = 1..=k_max`.
    pub sequence: Vec<String>,
    /// `|g_k - g_(k-1)|` for `k >= 2`.
    pub differences: Vec<String>,
    pub vf: String,
    /// `Phi_f(S_can, S_can) = -2 g - V_F` with the last `g_k`.
    pub phi_self: String,
    #[serde(skip)]
    pub values: Vec<LogValue>,
    #[serde(skip)]
    pub vf_value: LogValue,
    #[serde(skip)]
    pub phi_self_value: LogValue,
}

/// Gauss-norm escape rates at the Gauss point.
pub fn gauss_green(f: &RationalLift, p: u64, k_max: usize) -> Result<GaussGreenReport> {
    check_prime(p)?;
    if k_max == 0 || k_max > GAUSS_MAX_K {
        return Err(Error::InvalidInput(format!("kmax must be in 1..={GAUSS_MAX_K}")));
    }
    let d = f.degree();
    let vf_value = vf_padic(f, p)?;
    let mut it = f.clone();
    let mut values = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if k > 1 {
            if it.degree() * d > GAUSS_DEGREE_BUDGET {
                return Err(Error::Budget(format!("iterate degree {} exceeds {GAUSS_DEGREE_BUDGET}", it.degree() * d)));
            }
            it = f.compose(&it);
        }
        let v = it.min_val(p).ok_or_else(|| Error::Degenerate("iterate vanishes".into()))?;
        let dk = BigInt::from(d).pow(k as u32);
        values.push(LogValue(BigRational::new(BigInt::from(-v), dk)));
    }
    let differences = values.windows(2).map(|w| LogValue((w[1].0.clone() - w[0].0.clone()).abs())).collect::<Vec<_>>();
    let last = values.last().unwrap().clone();
    let phi_self_value = -(last.clone() + last) - vf_value.clone();
    Ok(GaussGreenReport {
        p,
        sequence: values.iter().map(|v| v.to_string()).collect(),
        differences: differences.iter().map(|v| v.to_string()).collect(),
        vf: vf_value.to_string(),
        phi_self: phi_self_value.to_string(),
        values,
        vf_value,
        phi_self_value,
    })
}
