//! Roots of binary forms with multiplicities.
//!
//! A form of degree `n` is given by `coeffs[i]`, the coefficient of
//! `X^(n-i) Y^i`. Exact leading zeros are roots at infinity and exact trailing
//! zeros are roots at zero; the remaining affine polynomial is solved by
//! Aberth–Ehrlich iteration, with the Newton correction evaluated in the chart
//! `1/z` for roots outside the unit disc. Near-coincident roots are grouped by
//! inclusion discs and merged only when the derivatives certify a multiple root.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::projline::{chordal, ProjPoint, EPS_PT};

pub const MAX_ITER: usize = 200;
const EPS: f64 = f64::EPSILON;
const CLUSTER_SAFETY: f64 = 4.0;
const GAP_RATIO: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct RootAtom {
    pub point: ProjPoint,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootList {
    pub atoms: Vec<RootAtom>,
    /// Largest relative backward error over the reported atoms.
    pub residual_max: f64,
    pub warnings: Vec<String>,
}

impl RootList {
    pub fn total_multiplicity(&self) -> usize {
        self.atoms.iter().map(|a| a.multiplicity).sum()
    }

    /// The constant `c` with `form = c * prod (b_j X - a_j Y)^(m_j)` for the unit
    /// root representatives `(a_j, b_j)`.
    pub fn leading_constant(&self, coeffs: &[Complex64]) -> Complex64 {
        let probes = [
            ProjPoint::from_re_im(0.3141, 0.2718),
            ProjPoint::from_re_im(-1.732, 0.577),
            ProjPoint::from_re_im(0.1, -2.3),
            ProjPoint::new(Complex64::new(1.0, 0.0), Complex64::new(0.0137, 0.0091)).unwrap(),
        ];
        let mut best = (0.0f64, Complex64::new(0.0, 0.0));
        for p in &probes {
            let mut prod = Complex64::new(1.0, 0.0);
            for a in &self.atoms {
                let w = crate::projline::wedge(p, &a.point);
                prod *= w.powu(a.multiplicity as u32);
            }
            if prod.norm() > best.0 {
                best = (prod.norm(), eval_form(coeffs, p) / prod);
            }
        }
        best.1
    }
}

/// Value of a binary form at a homogeneous pair.
pub fn eval_form(coeffs: &[Complex64], p: &ProjPoint) -> Complex64 {
    let (x, y) = p.coords();
    eval_form_xy(coeffs, x, y)
}

pub fn eval_form_xy(coeffs: &[Complex64], x: Complex64, y: Complex64) -> Complex64 {
    let n = coeffs.len() - 1;
    if x.norm() >= y.norm() {
        let t = y / x;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc * x.powu(n as u32)
    } else {
        let t = x / y;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter() {
            acc = acc * t + c;
        }
        acc * y.powu(n as u32)
    }
}

/// Which affine chart a root is handled in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Chart {
    Z,
    InvZ,
}

struct Affine {
    /// Ascending coefficients in `z`.
    asc: Vec<Complex64>,
    /// Ascending coefficients in `y = 1/z`.
    rev: Vec<Complex64>,
    abs_asc: Vec<f64>,
    abs_rev: Vec<f64>,
}

impl Affine {
    fn new(asc: Vec<Complex64>) -> Self {
        let rev: Vec<Complex64> = asc.iter().rev().cloned().collect();
        let abs_asc = asc.iter().map(|c| c.norm()).collect();
        let abs_rev = rev.iter().map(|c| c.norm()).collect();
        Affine { asc, rev, abs_asc, abs_rev }
    }

    fn degree(&self) -> usize {
        self.asc.len() - 1
    }

    fn chart_of(z: Complex64) -> Chart {
        if z.norm() <= 1.0 {
            Chart::Z
        } else {
            Chart::InvZ
        }
    }

    fn coeffs(&self, chart: Chart) -> (&[Complex64], &[f64]) {
        match chart {
            Chart::Z => (&self.asc, &self.abs_asc),
            Chart::InvZ => (&self.rev, &self.abs_rev),
        }
    }

    /// `p(z) / p'(z)` inverted, i.e. the logarithmic derivative, together with the
    /// relative backward error `|p| / sum |a_j||z|^j` in the root's chart.
    fn log_deriv(&self, z: Complex64) -> (Option<Complex64>, f64) {
        let chart = Affine::chart_of(z);
        let (a, abs) = self.coeffs(chart);
        let w = match chart {
            Chart::Z => z,
            Chart::InvZ => z.inv(),
        };
        let (p, dp, scale) = horner_with_deriv(a, abs, w);
        let berr = if scale > 0.0 { p.norm() / scale } else { 0.0 };
        if p == Complex64::new(0.0, 0.0) {
            return (None, 0.0);
        }
        let ld = match chart {
            Chart::Z => dp / p,
            // p(z) = z^n q(1/z), so p'/p = (n q - y q') / (z q)
            Chart::InvZ => {
                let n = self.degree() as f64;
                (p * n - w * dp) / (z * p)
            }
        };
        (Some(ld), berr)
    }

    fn backward_error(&self, z: Complex64) -> f64 {
        self.log_deriv(z).1
    }
}

fn horner_with_deriv(a: &[Complex64], abs: &[f64], w: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut s = 0.0;
    let r = w.norm();
    for (c, ac) in a.iter().zip(abs.iter()).rev() {
        dp = dp * w + p;
        p = p * w + c;
        s = s * r + ac;
    }
    (p, dp, s)
}

/// Taylor coefficients `p^(j)(c)/j!` for `j = 0..=m`, and the matching
/// magnitude scales `sum |a_i| C(i,j) |c|^(i-j)`.
fn taylor_at(a: &[Complex64], abs: &[f64], c: Complex64, m: usize) -> (Vec<Complex64>, Vec<f64>) {
    let mut t = a.to_vec();
    let mut s = abs.to_vec();
    let r = c.norm();
    let n = a.len() - 1;
    let mut out = Vec::with_capacity(m + 1);
    let mut scl = Vec::with_capacity(m + 1);
    for j in 0..=m.min(n) {
        // synthetic division by (z - c)
        for i in (j..n).rev() {
            let hi = t[i + 1];
            t[i] += hi * c;
            let shi = s[i + 1];
            s[i] += shi * r;
        }
        out.push(t[j]);
        scl.push(s[j]);
    }
    (out, scl)
}

/// Newton-polygon starting radii (upper convex hull of `log |a_j|`).
fn initial_guesses(asc: &[Complex64]) -> Vec<Complex64> {
    let n = asc.len() - 1;
    let pts: Vec<(usize, f64)> = asc
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| (i, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut z = Vec::with_capacity(n);
    let sigma = 0.7;
    for seg in hull.windows(2) {
        let (i, li) = seg[0];
        let (k, lk) = seg[1];
        let cnt = k - i;
        let r = ((li - lk) / cnt as f64).exp();
        for j in 0..cnt {
            let ang = std::f64::consts::TAU * (j as f64 / cnt as f64) + std::f64::consts::TAU * i as f64 / n as f64 + sigma;
            z.push(Complex64::from_polar(r, ang));
        }
    }
    z
}

fn aberth(poly: &Affine, z: &mut [Complex64], max_iter: usize) -> bool {
    let n = z.len();
    let tol = 4.0 * (n as f64 + 1.0) * EPS;
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ld, berr) = poly.log_deriv(z[i]);
            let ld = match ld {
                Some(v) if berr > tol => v,
                _ => {
                    done[i] = true;
                    continue;
                }
            };
            all = false;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff != Complex64::new(0.0, 0.0) {
                        s += diff.inv();
                    }
                }
            }
            let den = ld - s;
            let w = if den == Complex64::new(0.0, 0.0) || !den.is_finite() {
                Complex64::new(EPS * (1.0 + z[i].norm()), 0.0)
            } else {
                den.inv()
            };
            let znew = z[i] - w;
            if !znew.is_finite() {
                continue;
            }
            z[i] = znew;
            if w.norm() <= 2.0 * EPS * z[i].norm() {
                done[i] = true;
            }
        }
        if all {
            return true;
        }
    }
    done.iter().all(|&d| d) || z.iter().all(|&zi| poly.backward_error(zi) <= tol)
}

fn companion_roots(asc: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = asc.len() - 1;
    let lead = asc[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -asc[i] / lead;
    }
    let schur = Schur::try_new(m, EPS, 100_000)?;
    schur.eigenvalues().map(|v| v.iter().cloned().collect())
}

/// Solves the affine polynomial, returning roots in `z` (all finite, nonzero
/// constant and leading coefficients assumed).
fn solve_affine(poly: &Affine) -> Result<Vec<Complex64>> {
    let n = poly.degree();
    if n == 1 {
        return Ok(vec![-poly.asc[0] / poly.asc[1]]);
    }
    let mut z = initial_guesses(&poly.asc);
    if aberth(poly, &mut z, MAX_ITER) {
        return Ok(z);
    }
    // stall: restart from companion eigenvalues and polish
    let best = z.clone();
    if let Some(mut ev) = companion_roots(&poly.asc) {
        if ev.len() == n && ev.iter().all(|v| v.is_finite()) {
            aberth(poly, &mut ev, MAX_ITER);
            let worst = ev.iter().map(|&v| poly.backward_error(v)).fold(0.0, f64::max);
            if worst <= 1e-10 {
                return Ok(ev);
            }
        }
    }
    let residuals: Vec<f64> = best.iter().map(|&v| poly.backward_error(v)).collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Err(Error::NonConvergence { iterations: MAX_ITER, max_residual, best, residuals })
}

/// Groups of root indices whose inclusion discs overlap.
fn inclusion_groups(poly: &Affine, z: &[Complex64]) -> Vec<Vec<usize>> {
    let n = z.len();
    let pts: Vec<ProjPoint> = z.iter().map(|&v| ProjPoint::from_affine(v)).collect();
    let mut rho = vec![0.0; n];
    for i in 0..n {
        let chart = Affine::chart_of(z[i]);
        let (a, _) = poly.coeffs(chart);
        let map = |v: Complex64| if chart == Chart::Z { v } else { v.inv() };
        let wi = map(z[i]);
        let (p, _, _) = horner_with_deriv(a, &vec![0.0; a.len()], wi);
        let mut den = a[n];
        for (j, zj) in z.iter().enumerate().take(n) {
            if j != i {
                den *= wi - map(*zj);
            }
        }
        let r = if den.norm() > 0.0 { n as f64 * p.norm() / den.norm() } else { f64::INFINITY };
        // chart radius to chordal radius
        rho[i] = (r / (1.0 + wi.norm_sqr())).min(1.0);
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let dist = chordal(&pts[i], &pts[j]);
            if dist <= 1e-3 && dist <= CLUSTER_SAFETY * (rho[i] + rho[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Tests whether a cluster of `m` roots is one root of multiplicity `m`;
/// returns the polished center on success.
fn certify_multiple(poly: &Affine, members: &[Complex64]) -> Option<Complex64> {
    let m = members.len();
    let mean = members.iter().sum::<Complex64>() / m as f64;
    let chart = Affine::chart_of(mean);
    let (a, abs) = poly.coeffs(chart);
    let mut c = if chart == Chart::Z { mean } else { mean.inv() };
    let n = a.len() - 1;
    // Newton on p^(m-1), which has a simple root at a true m-fold root
    for _ in 0..20 {
        let (t, _) = taylor_at(a, abs, c, m);
        let f = t[m - 1];
        let df = t[m] * m as f64;
        if df == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = f / df;
        c -= step;
        if step.norm() <= EPS * (1.0 + c.norm()) {
            break;
        }
    }
    let (t, s) = taylor_at(a, abs, c, m - 1);
    let k = 64.0 * n as f64;
    let ok = (0..m - 1).all(|j| t[j].norm() <= k * EPS * s[j]);
    if !ok {
        return None;
    }
    Some(if chart == Chart::Z { c } else { c.inv() })
}

struct Raw {
    point: ProjPoint,
    mult: usize,
    berr: f64,
    spread: f64,
}

/// Roots of a binary form, with multiplicities summing to its degree.
pub fn roots_binary_form(coeffs: &[Complex64]) -> Result<RootList> {
    if coeffs.is_empty() {
        return Err(Error::InvalidInput("empty coefficient list".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("non-finite coefficient".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let n = coeffs.len() - 1;
    let m_inf = coeffs.iter().take_while(|&&c| c == zero).count();
    if m_inf == n + 1 {
        return Err(Error::InvalidInput("zero binary form".into()));
    }
    let m_zero = coeffs.iter().rev().take_while(|&&c| c == zero).count();
    let mut warnings = Vec::new();
    let mut raw: Vec<Raw> = Vec::new();
    if m_inf > 0 {
        raw.push(Raw { point: ProjPoint::infinity(), mult: m_inf, berr: 0.0, spread: 0.0 });
    }
    if m_zero > 0 {
        raw.push(Raw { point: ProjPoint::zero(), mult: m_zero, berr: 0.0, spread: 0.0 });
    }
    // coefficient of z^j is coeffs[n - j]
    let asc: Vec<Complex64> = (m_zero..=n - m_inf).map(|j| coeffs[n - j]).collect();
    if asc.len() >= 2 {
        let poly = Affine::new(asc);
        let z = solve_affine(&poly)?;
        let groups = inclusion_groups(&poly, &z);
        for g in groups {
            let members: Vec<Complex64> = g.iter().map(|&i| z[i]).collect();
            if members.len() == 1 {
                raw.push(Raw { point: ProjPoint::from_affine(members[0]), mult: 1, berr: poly.backward_error(members[0]), spread: 0.0 });
                continue;
            }
            match certify_multiple(&poly, &members) {
                Some(c) => {
                    let point = ProjPoint::from_affine(c);
                    let spread = members.iter().map(|&v| chordal(&point, &ProjPoint::from_affine(v))).fold(0.0, f64::max);
                    raw.push(Raw { point, mult: members.len(), berr: poly.backward_error(c), spread });
                }
                None => {
                    warnings.push(format!(
                        "ambiguous cluster of {} roots near {} left unmerged",
                        members.len(),
                        ProjPoint::from_affine(members[0])
                    ));
                    for &v in &members {
                        raw.push(Raw { point: ProjPoint::from_affine(v), mult: 1, berr: poly.backward_error(v), spread: 0.0 });
                    }
                }
            }
        }
    }
    let atoms = merge_close(raw, &mut warnings);
    let residual_max = atoms.iter().map(|a| a.2).fold(0.0, f64::max);
    gap_warnings(&atoms, &mut warnings);
    let mut atoms: Vec<RootAtom> = atoms.into_iter().map(|(point, multiplicity, _, _)| RootAtom { point, multiplicity }).collect();
    atoms.sort_by(|a, b| a.point.sort_key().partial_cmp(&b.point.sort_key()).unwrap_or(std::cmp::Ordering::Equal));
    debug_assert_eq!(atoms.iter().map(|a| a.multiplicity).sum::<usize>(), n);
    Ok(RootList { atoms, residual_max, warnings })
}

/// Single-linkage merge at `EPS_PT`; the representative is the member of
/// highest multiplicity.
fn merge_close(raw: Vec<Raw>, warnings: &mut Vec<String>) -> Vec<(ProjPoint, usize, f64, f64)> {
    let n = raw.len();
    let mut group: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if chordal(&raw[i].point, &raw[j].point) <= EPS_PT {
                let (gi, gj) = (group[i], group[j]);
                if gi != gj {
                    let lo = gi.min(gj);
                    let hi = gi.max(gj);
                    for g in group.iter_mut() {
                        if *g == hi {
                            *g = lo;
                        }
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| group[i] == root).collect();
        if members.is_empty() {
            continue;
        }
        let rep = *members.iter().max_by_key(|&&i| raw[i].mult).unwrap();
        let mult = members.iter().map(|&i| raw[i].mult).sum();
        let berr = members.iter().map(|&i| raw[i].berr).fold(0.0, f64::max);
        let spread = members
            .iter()
            .map(|&i| raw[i].spread + chordal(&raw[i].point, &raw[rep].point))
            .fold(0.0, f64::max);
        if members.len() > 1 {
            warnings.push(format!("{} roots within the point tolerance merged at {}", members.len(), raw[rep].point));
        }
        out.push((raw[rep].point, mult, berr, spread));
    }
    out
}

fn gap_warnings(atoms: &[(ProjPoint, usize, f64, f64)], warnings: &mut Vec<String>) {
    for (i, a) in atoms.iter().enumerate() {
        if a.3 == 0.0 {
            continue;
        }
        let gap = atoms
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| chordal(&a.0, &b.0))
            .fold(f64::INFINITY, f64::min);
        if gap < GAP_RATIO * a.3 {
            warnings.push(format!("cluster at {} has gap ratio {:.3e} below {GAP_RATIO}", a.0, gap / a.3));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn find(list: &RootList, p: ProjPoint) -> usize {
        list.atoms.iter().find(|a| chordal(&a.point, &p) < 1e-9).map(|a| a.multiplicity).unwrap_or(0)
    }

    #[test]
    fn difference_of_squares() {
        let r = roots_binary_form(&[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(r.atoms.len(), 2);
        assert_eq!(find(&r, ProjPoint::from_re_im(1.0, 0.0)), 1);
        assert_eq!(find(&r, ProjPoint::from_re_im(-1.0, 0.0)), 1);
    }

    #[test]
    fn monomial() {
        // X^2 Y
        let r = roots_binary_form(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(find(&r, ProjPoint::zero()), 2);
        assert_eq!(find(&r, ProjPoint::infinity()), 1);
    }

    #[test]
    fn roots_of_unity_discriminant() {
        let mut coeffs = vec![c(0.0, 0.0); 9];
        coeffs[0] = c(1.0, 0.0);
        coeffs[8] = c(-1.0, 0.0);
        let r = roots_binary_form(&coeffs).unwrap();
        assert_eq!(r.atoms.len(), 8);
        let z: Vec<Complex64> = r.atoms.iter().map(|a| a.point.affine().unwrap()).collect();
        let mut prod = 1.0;
        for i in 0..8 {
            assert!((z[i].norm() - 1.0).abs() < 1e-14);
            for j in 0..8 {
                if i != j {
                    prod *= (z[i] - z[j]).norm();
                }
            }
        }
        assert!((prod / 8f64.powi(8) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn double_root_is_certified() {
        // (X - Y)^2 (X + 2Y)
        let r = roots_binary_form(&[c(1.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(find(&r, ProjPoint::from_re_im(1.0, 0.0)), 2);
        assert_eq!(find(&r, ProjPoint::from_re_im(-2.0, 0.0)), 1);
    }

    #[test]
    fn triple_root_off_axis() {
        // (z - (0.3+0.4i))^3 expanded, as X^3 - 3wX^2Y + 3w^2XY^2 - w^3Y^3
        let w = c(0.3, 0.4);
        let r = roots_binary_form(&[c(1.0, 0.0), -3.0 * w, 3.0 * w * w, -w * w * w]).unwrap();
        assert_eq!(r.atoms.len(), 1);
        assert_eq!(r.atoms[0].multiplicity, 3);
        assert!(chordal(&r.atoms[0].point, &ProjPoint::from_affine(w)) < 1e-10);
    }

    #[test]
    fn close_but_distinct_roots_stay_apart() {
        // roots 1 and 1 + 1e-5
        let a = c(1.0, 0.0);
        let b = c(1.0 + 1e-5, 0.0);
        let r = roots_binary_form(&[c(1.0, 0.0), -(a + b), a * b]).unwrap();
        assert_eq!(r.atoms.len(), 2);
    }

    #[test]
    fn huge_and_tiny_roots() {
        // (X - 1e12 Y)(X - 1e-12 Y)
        let a = c(1e12, 0.0);
        let b = c(1e-12, 0.0);
        let r = roots_binary_form(&[c(1.0, 0.0), -(a + b), a * b]).unwrap();
        assert_eq!(r.atoms.len(), 2);
        assert!(r.residual_max < 1e-14);
        assert_eq!(find(&r, ProjPoint::from_affine(a)), 1);
        assert_eq!(find(&r, ProjPoint::from_affine(b)), 1);
    }

    #[test]
    fn leading_constant_reconstructs() {
        let coeffs = [c(2.0, 1.0), c(0.5, 0.0), c(-1.0, 3.0), c(0.25, -0.5)];
        let r = roots_binary_form(&coeffs).unwrap();
        let k = r.leading_constant(&coeffs);
        let probe = ProjPoint::from_re_im(0.77, -1.3);
        let mut prod = k;
        for a in &r.atoms {
            prod *= crate::projline::wedge(&probe, &a.point).powu(a.multiplicity as u32);
        }
        assert!((prod - eval_form(&coeffs, &probe)).norm() < 1e-12);
    }

    #[test]
    fn rejects_zero_form() {
        assert!(roots_binary_form(&[c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    }
}
