//! Iterated preimage measures `(f^k)^*(a)` as weighted atom lists.
//!
//! Each level is obtained from the previous one by solving the degree-`d`
//! form `b1 P - b0 Q` for every atom `b`; the weight of a preimage is the
//! parent weight times its root multiplicity, which is `deg_w(f^k)`. Atoms
//! remember their parent, so every level is a node layer of the preimage tree.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::projline::{chordal, ProjPoint, EPS_PT};
use crate::ratmap::HomLift;
use crate::rootsolve::{roots_binary_form, RootList};

pub const DEFAULT_BUDGET: u64 = 1 << 16;

#[derive(Clone, Debug, Serialize)]
pub struct Atom {
    pub point: ProjPoint,
    /// `deg_w(f^k)`.
    pub weight: u64,
    /// Index of `f(w)` in the previous level (0 at level 0).
    pub parent: usize,
    /// `deg_w f`.
    pub local_degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackMeasure {
    pub level: usize,
    pub base: ProjPoint,
    pub atoms: Vec<Atom>,
    /// Set when some preimage was a multiple root, i.e. the orbit of a critical
    /// point meets the base point within this level.
    pub at_critical_value: bool,
    pub residual_max: f64,
    pub warnings: Vec<String>,
}

impl PullbackMeasure {
    pub fn base(a: ProjPoint) -> Self {
        PullbackMeasure {
            level: 0,
            base: a,
            atoms: vec![Atom { point: a, weight: 1, parent: 0, local_degree: 1 }],
            at_critical_value: false,
            residual_max: 0.0,
            warnings: Vec::new(),
        }
    }

    pub fn mass(&self) -> u64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `(eta, D)`: the largest weight and the sum of squared weights.
    pub fn eta_and_d(&self) -> (u64, u64) {
        let eta = self.atoms.iter().map(|a| a.weight).max().unwrap_or(0);
        let dsum = self.atoms.iter().map(|a| a.weight * a.weight).sum();
        (eta, dsum)
    }

    pub fn weighted_points(&self) -> Vec<(ProjPoint, f64)> {
        self.atoms.iter().map(|a| (a.point, a.weight as f64)).collect()
    }

    /// CSV rows `re,im,is_infinity,weight`.
    pub fn to_csv_rows(&self) -> Vec<String> {
        self.atoms
            .iter()
            .map(|a| {
                let (re, im) = match a.point.affine() {
                    Some(z) if !a.point.is_infinity() => (z.re, z.im),
                    _ => (0.0, 0.0),
                };
                format!("{:.16e},{:.16e},{},{}", re, im, a.point.is_infinity() as u8, a.weight)
            })
            .collect()
    }
}

/// The form `b1 P - b0 Q` whose roots are `f^-1(b)`.
pub fn preimage_form(f: &HomLift, b: &ProjPoint) -> Vec<Complex64> {
    let (b0, b1) = b.coords();
    f.p_coeffs().iter().zip(f.q_coeffs()).map(|(p, q)| b1 * p - b0 * q).collect()
}

pub fn preimages(f: &HomLift, b: &ProjPoint) -> Result<RootList> {
    roots_binary_form(&preimage_form(f, b))
}

/// Spatial hash on sphere coordinates with cells wider than the merge radius.
struct CellIndex {
    cell: f64,
    map: HashMap<(i64, i64, i64), Vec<usize>>,
}

impl CellIndex {
    fn new() -> Self {
        // chordal distance is half the Euclidean distance in R^3
        CellIndex { cell: 4.0 * EPS_PT, map: HashMap::new() }
    }

    fn key(&self, x: [f64; 3]) -> (i64, i64, i64) {
        ((x[0] / self.cell).floor() as i64, (x[1] / self.cell).floor() as i64, (x[2] / self.cell).floor() as i64)
    }

    fn near(&self, x: [f64; 3]) -> Vec<usize> {
        let (a, b, c) = self.key(x);
        let mut out = Vec::new();
        for da in -1..=1 {
            for db in -1..=1 {
                for dc in -1..=1 {
                    if let Some(v) = self.map.get(&(a + da, b + db, c + dc)) {
                        out.extend_from_slice(v);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn insert(&mut self, x: [f64; 3], idx: usize) {
        let k = self.key(x);
        self.map.entry(k).or_default().push(idx);
    }
}

/// One pullback step: level `k` to level `k + 1`.
pub fn pull_back_once(f: &HomLift, nu: &PullbackMeasure) -> Result<PullbackMeasure> {
    let d = f.degree() as u64;
    let solved: Vec<Result<RootList>> = nu.atoms.par_iter().map(|a| preimages(f, &a.point)).collect();
    let mut atoms: Vec<Atom> = Vec::with_capacity(nu.atoms.len() * f.degree());
    let mut warnings = nu.warnings.clone();
    let mut residual_max = nu.residual_max;
    let mut at_cv = nu.at_critical_value;
    let mut index = CellIndex::new();
    let mut conflicts = 0usize;
    for (pi, res) in solved.into_iter().enumerate() {
        let roots = res?;
        residual_max = residual_max.max(roots.residual_max);
        warnings.extend(roots.warnings.iter().map(|w| format!("level {}: {w}", nu.level + 1)));
        let parent_w = nu.atoms[pi].weight;
        for r in &roots.atoms {
            if r.multiplicity > 1 {
                at_cv = true;
            }
            let x = r.point.to_sphere();
            let hit = index.near(x).into_iter().find(|&j| chordal(&atoms[j].point, &r.point) <= EPS_PT);
            match hit {
                Some(j) => {
                    conflicts += 1;
                    atoms[j].weight += parent_w * r.multiplicity as u64;
                }
                None => {
                    index.insert(x, atoms.len());
                    atoms.push(Atom { point: r.point, weight: parent_w * r.multiplicity as u64, parent: pi, local_degree: r.multiplicity });
                }
            }
        }
    }
    if conflicts > 0 {
        warnings.push(format!("level {}: {conflicts} preimages of distinct parents merged", nu.level + 1));
    }
    atoms.sort_by(|a, b| {
        let (ka, kb) = (a.point.sort_key(), b.point.sort_key());
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.total_cmp(&kb.2))
    });
    let out = PullbackMeasure { level: nu.level + 1, base: nu.base, atoms, at_critical_value: at_cv, residual_max, warnings };
    let expected = d.pow(out.level as u32);
    if out.mass() != expected {
        return Err(Error::Consistency(format!("mass {} at level {} differs from {expected}", out.mass(), out.level)));
    }
    Ok(out)
}

/// All levels `0..=k` of the preimage tree of `a`.
pub fn preimage_tower(f: &HomLift, a: &ProjPoint, k: usize, budget: u64) -> Result<Vec<PullbackMeasure>> {
    let d = f.degree() as u64;
    match d.checked_pow(k as u32) {
        Some(n) if n <= budget => {}
        _ => return Err(Error::Budget(format!("d^k = {}^{k} exceeds the atom budget {budget}", d))),
    }
    let mut levels = vec![PullbackMeasure::base(*a)];
    for _ in 0..k {
        let next = pull_back_once(f, levels.last().unwrap())?;
        levels.push(next);
    }
    Ok(levels)
}

pub fn pullback(f: &HomLift, a: &ProjPoint, k: usize, budget: u64) -> Result<PullbackMeasure> {
    Ok(preimage_tower(f, a, k, budget)?.pop().unwrap())
}

/// Checks that pushing level `k + 1` forward reproduces `d` times level `k`:
/// each atom maps onto its parent and children weights add up.
pub fn push_forward_consistent(f: &HomLift, lower: &PullbackMeasure, upper: &PullbackMeasure, tol: f64) -> bool {
    let d = f.degree() as u64;
    let mut sums = vec![0u64; lower.atoms.len()];
    for a in &upper.atoms {
        if a.parent >= lower.atoms.len() {
            return false;
        }
        if chordal(&f.evaluate(&a.point), &lower.atoms[a.parent].point) > tol {
            return false;
        }
        sums[a.parent] += a.weight;
    }
    sums.iter().zip(&lower.atoms).all(|(s, a)| *s == d * a.weight)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GrowthClass {
    ExceptionalCandidate,
    SuperattractingCandidate,
    Ordinary,
}

impl GrowthClass {
    pub fn label(&self) -> &'static str {
        match self {
            GrowthClass::ExceptionalCandidate => "exceptional-candidate",
            GrowthClass::SuperattractingCandidate => "superattracting-candidate",
            GrowthClass::Ordinary => "ordinary",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub eta: Vec<u64>,
    pub d_seq: Vec<u64>,
    pub class: GrowthClass,
    pub threshold: u64,
}

/// Finite-horizon classification from `eta_j`, `j = 1..=k_max`.
pub fn classify_growth(d: u64, eta: &[u64], d_seq: &[u64]) -> GrowthReport {
    let threshold = d.pow(2 * d as u32 - 2);
    let class = if !eta.is_empty() && eta.iter().enumerate().all(|(j, &e)| e == d.pow(j as u32 + 1)) {
        GrowthClass::ExceptionalCandidate
    } else if eta.iter().any(|&e| e > threshold) {
        GrowthClass::SuperattractingCandidate
    } else {
        GrowthClass::Ordinary
    };
    GrowthReport { eta: eta.to_vec(), d_seq: d_seq.to_vec(), class, threshold }
}

pub fn eta_growth_probe(f: &HomLift, a: &ProjPoint, k_max: usize, budget: u64) -> Result<GrowthReport> {
    let tower = preimage_tower(f, a, k_max, budget)?;
    let (eta, dseq): (Vec<u64>, Vec<u64>) = tower[1..].iter().map(|m| m.eta_and_d()).unzip();
    Ok(classify_growth(f.degree() as u64, &eta, &dseq))
}
