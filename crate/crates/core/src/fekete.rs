//! Fekete energies of preimage configurations, the renormalized limits
//! `c_z(f)`, and the proximity sandwich bounds.
//!
//! The energy `E_f(k, a) = d^-2k sum_{i != j} w_i w_j Phi_f(z_i, z_j)` over
//! the merged atoms of `(f^k)^*(a)` is computed directly and, independently,
//! as `d^-2k sum_w w c_w(f^k)` with `c_w(f^k)` assembled along the preimage
//! tree by the chain rule.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{GreenEvaluator, SupEstimate};
use crate::projline::{chordal, ProjPoint, EPS_PT};
use crate::pullback::{preimage_tower, PullbackMeasure};
use crate::ratmap::{wedge_vec, CriticalSet, HomLift};

/// Chordal radii for the limit samples.
pub const LIMIT_RADII: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
pub const LIMIT_SPREAD_TOL: f64 = 1e-4;
/// Horizon for detecting preperiodic critical orbits.
pub const ORBIT_HORIZON: usize = 64;
/// Relative change of the refined `sup |g_f|` beyond which `C_f` is marked heuristic.
const SUP_REFINE_TOL: f64 = 0.05;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LimitValue {
    pub value: f64,
    /// Difference between the last two Richardson estimates.
    pub spread: f64,
    pub low_confidence: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalOrbit {
    pub point: ProjPoint,
    pub multiplicity: usize,
    /// `f^j(c)` for `j = 0..orbit.len()`.
    pub orbit: Vec<ProjPoint>,
    /// `(preperiod, period)` when a cycle was found within the horizon.
    pub cycle: Option<(usize, usize)>,
}

impl CriticalOrbit {
    fn detect(f: &HomLift, c: ProjPoint, multiplicity: usize) -> Self {
        let mut orbit = vec![c];
        let mut cycle = None;
        'outer: for _ in 0..ORBIT_HORIZON {
            let next = f.evaluate(orbit.last().unwrap());
            for (i, q) in orbit.iter().enumerate() {
                if chordal(q, &next) <= EPS_PT {
                    cycle = Some((i, orbit.len() - i));
                    break 'outer;
                }
            }
            orbit.push(next);
        }
        CriticalOrbit { point: c, multiplicity, orbit, cycle }
    }

    pub fn is_preperiodic(&self) -> bool {
        self.cycle.is_some()
    }

    /// `f^j(c)`, continued along the detected cycle when there is one.
    pub fn at(&self, f: &HomLift, j: usize) -> ProjPoint {
        if j < self.orbit.len() {
            return self.orbit[j];
        }
        match self.cycle {
            Some((pre, per)) => self.orbit[pre + (j - pre) % per],
            None => f.orbit_point(self.orbit.last().unwrap(), j + 1 - self.orbit.len()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CfEstimate {
    pub value: f64,
    pub b_abs: f64,
    pub max_cc: f64,
    pub c_double_prime: f64,
    pub critical_separation: f64,
    pub log_d: f64,
    pub sup_gf: SupEstimate,
    pub heuristic: bool,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Proximity {
    /// `terms[j-1][i] = d^-j log(1/[f^j(c_i), a])`, `None` when `f^j(c_i) = a`.
    pub terms: Vec<Vec<Option<f64>>>,
    /// Running maximum over `c` and `j' <= j`.
    pub running_max: Vec<f64>,
    /// Multiplicity-weighted sums over `c`, per `j`.
    pub per_level: Vec<f64>,
    /// `(j, critical index)` pairs with `f^j(c) = a`.
    pub hits: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateBundle {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnergyReport {
    pub k: usize,
    pub a: ProjPoint,
    pub energy_direct: f64,
    pub energy_cz: f64,
    pub route_diff: f64,
    pub eta_seq: Vec<u64>,
    #[serde(rename = "D_seq")]
    pub d_seq: Vec<u64>,
    pub proximity_max: f64,
    pub proximity_sum: f64,
    pub proximity_sum_eta: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub margin_lower: f64,
    pub margin_upper: f64,
    #[serde(rename = "C_f_est")]
    pub c_f_est: f64,
    #[serde(rename = "C_fa")]
    pub c_fa: f64,
    /// Number of critical preimage hits `f^j(c) = a` with `j <= k`.
    pub critical_hits: usize,
    /// `C_fa` only sees hits `f^j(c) = a` with `j <= c_fa_horizon`.
    pub c_fa_horizon: usize,
    pub rate_bundle: RateBundle,
    pub cf_heuristic: bool,
    pub sup_gf_nonrigorous: bool,
    pub cz_low_confidence: usize,
    pub at_critical_value: bool,
    pub bounds_hold: bool,
    pub warnings: Vec<String>,
}

/// `(1/d^k) sum eta_j`, `k D_k / d^2k`, `k eta_k / d^k`.
pub fn rate_bundle(d: usize, eta: &[u64], d_seq: &[u64]) -> Result<RateBundle> {
    let k = eta.len();
    if k == 0 || d_seq.len() != k {
        return Err(Error::InvalidInput("rate bundle needs eta and D for levels 1..k".into()));
    }
    let dk = (d as f64).powi(k as i32);
    let r1 = eta.iter().map(|&e| e as f64).sum::<f64>() / dk;
    let r2 = k as f64 * d_seq[k - 1] as f64 / (dk * dk);
    let r3 = k as f64 * eta[k - 1] as f64 / dk;
    if r1.max(r2) > r3 * (1.0 + 1e-12) {
        return Err(Error::Consistency(format!("rate inequality fails: max({r1}, {r2}) > {r3}")));
    }
    Ok(RateBundle { r1, r2, r3 })
}

/// Per-map data shared by all energy computations.
pub struct Fekete {
    green: GreenEvaluator,
    crit: CriticalSet,
    crit_gf: Vec<f64>,
    bif: f64,
    orbits: Vec<CriticalOrbit>,
    cf: CfEstimate,
}

impl Fekete {
    pub fn new(lift: HomLift) -> Result<Self> {
        Self::from_green(GreenEvaluator::new(lift))
    }

    pub fn from_green(green: GreenEvaluator) -> Result<Self> {
        let crit = green.lift().critical_points()?.clone();
        let crit_gf = crit.atoms.iter().map(|(c, _)| green.green_gf(c)).collect();
        let bif = green.bifurcation_potential()?;
        let orbits = crit.atoms.iter().map(|(c, m)| CriticalOrbit::detect(green.lift(), *c, *m)).collect();
        let mut me = Fekete {
            green,
            crit,
            crit_gf,
            bif,
            orbits,
            cf: CfEstimate {
                value: 0.0,
                b_abs: 0.0,
                max_cc: 0.0,
                c_double_prime: 0.0,
                critical_separation: 0.0,
                log_d: 0.0,
                sup_gf: SupEstimate { value: 0.0, coarse: 0.0, fine: 0.0, nonrigorous: true },
                heuristic: true,
                reasons: Vec::new(),
            },
        };
        me.cf = me.estimate_cf()?;
        Ok(me)
    }

    pub fn green(&self) -> &GreenEvaluator {
        &self.green
    }

    pub fn lift(&self) -> &HomLift {
        self.green.lift()
    }

    pub fn degree(&self) -> usize {
        self.green.degree()
    }

    pub fn bifurcation(&self) -> f64 {
        self.bif
    }

    pub fn critical(&self) -> &CriticalSet {
        &self.crit
    }

    pub fn critical_orbits(&self) -> &[CriticalOrbit] {
        &self.orbits
    }

    pub fn cf_estimate(&self) -> &CfEstimate {
        &self.cf
    }

    fn near_critical(&self, z: &ProjPoint) -> bool {
        self.crit.atoms.iter().any(|(c, _)| chordal(c, z) <= EPS_PT)
    }

    /// `c_z(f) = -log d + B(f) + sum_c Phi_f(z, c)` for non-critical `z`.
    pub fn c_z_regular(&self, z: &ProjPoint) -> Result<f64> {
        if self.near_critical(z) {
            return Err(Error::Domain(format!("{z} is a critical point; use the limit evaluation")));
        }
        let gz = self.green.green_gf(z);
        let mut s = -(self.degree() as f64).ln() + self.bif;
        for ((c, m), gc) in self.crit.atoms.iter().zip(&self.crit_gf) {
            s += *m as f64 * self.green.phi_f_with(z, c, gz, *gc);
        }
        Ok(s)
    }

    /// `c_z(f)` from the local jet of `F` at `z`:
    /// `log|F_m ^ F_0| + 2(m - d) g_F(z) + (m - 1) V_F`, `m = deg_z f`.
    pub fn c_z_jet(&self, z: &ProjPoint) -> Result<f64> {
        let m = self.lift().local_degree(z)?;
        let (p, v) = frame(z);
        let jet = self.lift().jet(p, v);
        let w = wedge_vec(jet[m], jet[0]).norm();
        let d = self.degree() as f64;
        Ok(w.ln() + 2.0 * (m as f64 - d) * self.green.green_g_lift(z) + (m as f64 - 1.0) * self.green.vf())
    }

    /// `c_z(f)` as the limit `u -> z` of `Phi_f(f(u), f(z)) - m Phi_f(u, z)`.
    pub fn c_z_limit(&self, z: &ProjPoint) -> Result<LimitValue> {
        let m = self.lift().local_degree(z)?;
        Ok(self.c_z_limit_with(z, m))
    }

    /// The limit with a prescribed local degree `m`.
    ///
    /// The logarithmic part is sampled at chordal radii `LIMIT_RADII` in four
    /// directions and Richardson-extrapolated in `r^2`; the Green function
    /// terms are continuous and enter through their values at `z` and `f(z)`.
    pub fn c_z_limit_with(&self, z: &ProjPoint, m: usize) -> LimitValue {
        let f = self.lift();
        let (p, v) = frame(z);
        let jet = f.jet(p, v);
        let f0 = jet[0];
        let wk: Vec<Complex64> = jet.iter().map(|fk| wedge_vec(*fk, f0)).collect();
        let n0 = (f0.0.norm_sqr() + f0.1.norm_sqr()).sqrt();
        let sample = |t: Complex64| -> f64 {
            // F(p + t v) ^ F(p) = sum_{k >= 1} t^k (F_k ^ F_0)
            let mut num = Complex64::new(0.0, 0.0);
            let mut tp = Complex64::new(1.0, 0.0);
            for w in wk.iter().skip(1) {
                tp *= t;
                num += tp * w;
            }
            let (a, b) = f.eval_xy(p.0 + t * v.0, p.1 + t * v.1);
            let nu = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let s = t.norm();
            let log_chord_u = s.ln() - 0.5 * (1.0 + s * s).ln();
            num.norm().ln() - nu.ln() - n0.ln() - m as f64 * log_chord_u
        };
        let theta0 = 0.3;
        let vals: Vec<f64> = LIMIT_RADII
            .iter()
            .map(|&r| {
                let s = r / (1.0 - r * r).sqrt();
                (0..4)
                    .map(|j| sample(Complex64::from_polar(s, theta0 + j as f64 * std::f64::consts::FRAC_PI_2)))
                    .sum::<f64>()
                    / 4.0
            })
            .collect();
        let hs: Vec<f64> = LIMIT_RADII.iter().map(|&r| r * r / (1.0 - r * r)).collect();
        let (est, spread) = richardson(&vals, &hs);
        let fz = f.evaluate(z);
        let g_part = -2.0 * self.green.green_gf(&fz) + 2.0 * m as f64 * self.green.green_gf(z);
        let value = est + g_part;
        LimitValue { value, spread, low_confidence: spread.is_nan() || spread > LIMIT_SPREAD_TOL || !value.is_finite() }
    }

    /// `c_z(f)` by the regular formula off the critical set and the limit on it.
    pub fn c_z(&self, z: &ProjPoint, local_degree: usize) -> LimitValue {
        if local_degree == 1 && !self.near_critical(z) {
            if let Ok(v) = self.c_z_regular(z) {
                return LimitValue { value: v, spread: 0.0, low_confidence: false };
            }
        }
        self.c_z_limit_with(z, local_degree)
    }

    /// `c_w(f)` for every atom of every level of a preimage tower.
    fn node_values(&self, tower: &[PullbackMeasure]) -> Vec<Vec<LimitValue>> {
        tower.iter().map(|lvl| lvl.atoms.par_iter().map(|a| self.c_z(&a.point, a.local_degree.max(1))).collect()).collect()
    }

    /// `c_w(f^k)` for every atom of the top level, by the chain rule
    /// `c_w(f^k) = sum_l deg_(f^(k-l+1) w)(f^(l-1)) c_(f^(k-l) w)(f)`.
    pub fn c_z_iterate_all(&self, tower: &[PullbackMeasure]) -> (Vec<f64>, usize) {
        let nodes = self.node_values(tower);
        let low = nodes.iter().skip(1).flatten().filter(|v| v.low_confidence).count();
        let mut cum = vec![0.0];
        for l in 1..tower.len() {
            let prev = &tower[l - 1];
            cum = tower[l]
                .atoms
                .iter()
                .zip(&nodes[l])
                .map(|(a, c)| cum[a.parent] + prev.atoms[a.parent].weight as f64 * c.value)
                .collect();
        }
        (cum, low)
    }

    /// `c_z(f^k)` along the forward orbit of `z`.
    pub fn c_z_iterate(&self, z: &ProjPoint, k: usize) -> Result<f64> {
        let f = self.lift();
        let mut pts = vec![*z];
        for _ in 0..k {
            pts.push(f.evaluate(pts.last().unwrap()));
        }
        let degs = pts.iter().map(|p| f.local_degree(p)).collect::<Result<Vec<usize>>>()?;
        let mut s = 0.0;
        for j in 1..=k {
            let w: usize = degs[j..k].iter().product();
            s += w as f64 * self.c_z(&pts[j - 1], degs[j - 1]).value;
        }
        Ok(s)
    }

    /// Energy from `c_w(f^k)`: `d^-2k sum_w w c_w(f^k)`.
    pub fn energy_cz(&self, tower: &[PullbackMeasure]) -> (f64, usize) {
        let k = tower.len() - 1;
        let (cz, low) = self.c_z_iterate_all(tower);
        let top = &tower[k];
        let s: f64 = top.atoms.iter().zip(&cz).map(|(a, c)| a.weight as f64 * c).sum();
        (s / (self.degree() as f64).powi(2 * k as i32), low)
    }

    /// Direct off-diagonal double sum.
    pub fn energy_direct(&self, nu: &PullbackMeasure) -> f64 {
        let atoms = &nu.atoms;
        let g: Vec<f64> = atoms.par_iter().map(|a| self.green.green_gf(&a.point)).collect();
        let rows: Vec<f64> = (0..atoms.len())
            .into_par_iter()
            .map(|i| {
                let mut s = 0.0;
                for j in 0..atoms.len() {
                    if j != i {
                        s += atoms[j].weight as f64 * self.green.phi_f_with(&atoms[i].point, &atoms[j].point, g[i], g[j]);
                    }
                }
                atoms[i].weight as f64 * s
            })
            .collect();
        let total: f64 = rows.iter().sum();
        total / (self.degree() as f64).powi(2 * nu.level as i32)
    }

    pub fn proximity_terms(&self, a: &ProjPoint, k: usize) -> Proximity {
        let f = self.lift();
        let d = self.degree() as f64;
        let mut terms = Vec::with_capacity(k);
        let mut running_max = Vec::with_capacity(k);
        let mut per_level = Vec::with_capacity(k);
        let mut hits = Vec::new();
        let mut best = f64::NEG_INFINITY;
        for j in 1..=k {
            let mut row = Vec::with_capacity(self.orbits.len());
            let mut s = 0.0;
            for (i, orb) in self.orbits.iter().enumerate() {
                let x = orb.at(f, j);
                let dist = chordal(&x, a);
                if dist <= EPS_PT {
                    row.push(None);
                    hits.push((j, i));
                } else {
                    let t = -dist.ln() / d.powi(j as i32);
                    best = best.max(t);
                    s += orb.multiplicity as f64 * t;
                    row.push(Some(t));
                }
            }
            terms.push(row);
            running_max.push(if best.is_finite() { best } else { 0.0 });
            per_level.push(s);
        }
        Proximity { terms, running_max, per_level, hits }
    }

    /// `C_(f,a) = sum_j C_(f,a)(j) eta_j` over wandering critical points with
    /// `f^j(c) = a`, `j <= k`.
    fn c_fa(&self, hits: &[(usize, usize)], eta: &[u64]) -> f64 {
        let f = self.lift();
        let mut total = 0.0;
        for &(j, i) in hits {
            let orb = &self.orbits[i];
            if orb.is_preperiodic() {
                continue;
            }
            // chain rule along the critical orbit
            let pts: Vec<ProjPoint> = (0..=j).map(|l| orb.at(f, l)).collect();
            let degs: Vec<usize> = pts.iter().map(|p| f.local_degree(p).unwrap_or(1)).collect();
            let mut ccj = 0.0;
            for l in 1..=j {
                let weight: usize = degs[l..j].iter().product();
                ccj += weight as f64 * self.c_z(&pts[l - 1], degs[l - 1]).value;
            }
            total += ccj.abs() * eta[j - 1] as f64;
        }
        total
    }

    fn estimate_cf(&self) -> Result<CfEstimate> {
        let f = self.lift();
        let d = self.degree();
        let mut reasons = Vec::new();
        let mut heuristic = false;
        let b_abs = self.bif.abs();
        let mut max_cc = 0.0f64;
        for (c, m) in &self.crit.atoms {
            let v = self.c_z(c, m + 1);
            if v.low_confidence {
                heuristic = true;
                reasons.push(format!("c_c(f) at {c} has low confidence"));
            }
            max_cc = max_cc.max(v.value.abs());
        }
        let mut cpp = 0.0f64;
        for orb in &self.orbits {
            match orb.cycle {
                Some(_) => {
                    for x in &orb.orbit {
                        let m = f.local_degree(x)?;
                        cpp = cpp.max(self.c_z(x, m).value.abs());
                    }
                }
                None => {
                    heuristic = true;
                    reasons.push(format!("no cycle found for the orbit of {} within {ORBIT_HORIZON} steps", orb.point));
                }
            }
        }
        let mut sep = 0.0f64;
        for (i, (c, _)) in self.crit.atoms.iter().enumerate() {
            for (c2, _) in self.crit.atoms.iter().skip(i + 1) {
                sep = sep.max(-chordal(c, c2).ln());
            }
        }
        let sup = self.green.sup_abs_gf();
        if sup.relative_change() > SUP_REFINE_TOL {
            heuristic = true;
            reasons.push(format!("sup |g_f| changed by {:.3} under refinement", sup.relative_change()));
        }
        let sup_val = sup.value + (sup.fine - sup.coarse).abs();
        let log_d = (d as f64).ln();
        let value = b_abs + max_cc + 2.0 * cpp + (2 * d - 2) as f64 * sep + log_d + (8 * d - 8) as f64 * sup_val;
        Ok(CfEstimate { value, b_abs, max_cc, c_double_prime: cpp, critical_separation: sep, log_d, sup_gf: sup, heuristic, reasons })
    }

    /// Reports for `k = 1..=k_max`, sharing one preimage tower.
    pub fn sweep(&self, a: &ProjPoint, k_max: usize, budget: u64) -> Result<Vec<EnergyReport>> {
        if k_max == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        let tower = preimage_tower(self.lift(), a, k_max, budget)?;
        (1..=k_max).map(|k| self.report_from_tower(&tower[..=k])).collect()
    }

    pub fn report(&self, a: &ProjPoint, k: usize, budget: u64) -> Result<EnergyReport> {
        Ok(self.sweep(a, k, budget)?.pop().unwrap())
    }

    pub fn report_from_tower(&self, tower: &[PullbackMeasure]) -> Result<EnergyReport> {
        let k = tower.len() - 1;
        let top = &tower[k];
        let d = self.degree();
        let dk = (d as f64).powi(k as i32);
        let energy_direct = self.energy_direct(top);
        let (energy_cz, low) = self.energy_cz(tower);
        let (eta_seq, d_seq): (Vec<u64>, Vec<u64>) = tower[1..].iter().map(|m| m.eta_and_d()).unzip();
        for (j, (&e, &ds)) in eta_seq.iter().zip(&d_seq).enumerate() {
            let n = (d as u64).pow(j as u32 + 1);
            if ds < n || ds > n * e {
                return Err(Error::Consistency(format!("D = {ds} outside [{n}, {}] at level {}", n * e, j + 1)));
            }
        }
        let prox = self.proximity_terms(&top.base, k);
        let s_plain: f64 = prox.per_level.iter().sum();
        let s_eta: f64 = prox.per_level.iter().zip(&eta_seq).map(|(s, &e)| s * e as f64).sum();
        let sum_eta: f64 = eta_seq.iter().map(|&e| e as f64).sum();
        let c_fa = self.c_fa(&prox.hits, &eta_seq);
        let cf = self.cf.value;
        let lower = -s_eta / dk - cf * sum_eta / dk - c_fa / dk;
        let upper = -s_plain / dk + cf * sum_eta / dk + c_fa / dk;
        let mut warnings = top.warnings.clone();
        warnings.extend(self.crit.warnings.iter().cloned());
        let bounds_hold = lower <= energy_direct && energy_direct <= upper;
        if !bounds_hold {
            let tag = if self.cf.heuristic { "with heuristic C_f" } else { "with unflagged C_f" };
            warnings.push(format!("sandwich bound violated at k = {k} {tag}"));
        }
        let route_diff = (energy_direct - energy_cz).abs();
        Ok(EnergyReport {
            k,
            a: top.base,
            energy_direct,
            energy_cz,
            route_diff,
            proximity_max: *prox.running_max.last().unwrap_or(&0.0),
            proximity_sum: s_plain,
            proximity_sum_eta: s_eta,
            lower_bound: lower,
            upper_bound: upper,
            margin_lower: energy_direct - lower,
            margin_upper: upper - energy_direct,
            c_f_est: cf,
            c_fa,
            critical_hits: prox.hits.len(),
            c_fa_horizon: k,
            rate_bundle: rate_bundle(d, &eta_seq, &d_seq)?,
            eta_seq,
            d_seq,
            cf_heuristic: self.cf.heuristic,
            sup_gf_nonrigorous: true,
            cz_low_confidence: low,
            at_critical_value: top.at_critical_value,
            bounds_hold,
            warnings,
        })
    }
}

/// Unit `p` for `z` and the unit normal `v` with `p ^ v = 1`.
fn frame(z: &ProjPoint) -> ((Complex64, Complex64), (Complex64, Complex64)) {
    let (z0, z1) = z.coords();
    ((z0, z1), (-z1.conj(), z0.conj()))
}

/// Richardson extrapolation of samples `vals[i] ~ A + c1 h_i + c2 h_i^2 + ...`;
/// returns the last diagonal entry and its difference from the previous one.
fn richardson(vals: &[f64], hs: &[f64]) -> (f64, f64) {
    let n = vals.len();
    let mut table: Vec<Vec<f64>> = vec![vals.to_vec()];
    for j in 1..n {
        let prev = &table[j - 1];
        let row: Vec<f64> = (j..n)
            .map(|i| {
                let (a, b) = (prev[i - j], prev[i - j + 1]);
                let ratio = hs[i - j] / hs[i];
                b + (b - a) / (ratio - 1.0)
            })
            .collect();
        table.push(row);
    }
    let best = table[n - 1][0];
    let prev = *table[n - 2].last().unwrap();
    (best, (best - prev).abs())
}
