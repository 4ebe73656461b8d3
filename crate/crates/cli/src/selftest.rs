//! Closed-form checks on `z^2`.

use feketelab::equidist::{builtin, equidist_error, integrate_mu_f};
use feketelab::expr::parse_map;
use feketelab::fekete::Fekete;
use feketelab::nonarch::{gauss_green, RationalLift};
use feketelab::pullback::{pullback, DEFAULT_BUDGET};
use feketelab::quadrature::QuadratureRule;
use feketelab::{Complex64, ProjPoint};

type Check = (&'static str, fn() -> Result<String, String>);

fn within(label: &str, got: f64, want: f64, tol: f64) -> Result<String, String> {
    let e = (got - want).abs();
    let msg = format!("{label}: got {got:.16e}, expected {want:.16e}, |diff| {e:.3e}");
    if e <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn z2() -> Result<Fekete, String> {
    Fekete::new(parse_map("z^2").map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn green_closed_form() -> Result<String, String> {
    let f = z2()?;
    let mut worst = 0.0f64;
    for (re, im) in [(0.3, 0.1), (1.0, 0.0), (-2.5, 1.5), (0.0, 7.0)] {
        let z = Complex64::new(re, im);
        let exact = z.norm().max(1.0).ln() - 0.5 * (1.0 + z.norm_sqr()).ln();
        worst = worst.max((f.green().green_g_lift(&ProjPoint::from_affine(z)) - exact).abs());
    }
    within("g_F(z) = log+|z| - log||(z,1)|| at 4 points, worst", worst, 0.0, 1e-10)
}

fn capacity() -> Result<String, String> {
    let f = z2()?;
    within("V_F", f.green().vf(), 0.0, 1e-10)
}

fn energy_closed_form() -> Result<String, String> {
    let f = z2()?;
    let reps = f.sweep(&ProjPoint::from_re_im(1.0, 0.0), 8, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for r in &reps {
        let exact = r.k as f64 * 2f64.powi(-(r.k as i32)) * 2f64.ln();
        worst = worst.max((r.energy_direct - exact).abs()).max((r.energy_cz - exact).abs());
        if !r.bounds_hold {
            return Err(format!("bounds violated at k={}", r.k));
        }
    }
    within("energy at a=1 vs k 2^-k log 2, k<=8, worst", worst, 0.0, 1e-9)
}

fn critical_base() -> Result<String, String> {
    let f = z2()?;
    let reps = f.sweep(&ProjPoint::zero(), 4, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let worst = reps.iter().map(|r| r.energy_direct.abs().max(r.energy_cz.abs())).fold(0.0, f64::max);
    within("energy at a=0, k<=4, worst", worst, 0.0, 1e-9)
}

fn c_z_agreement() -> Result<String, String> {
    let f = z2()?;
    let z = ProjPoint::from_re_im(0.7, -0.4);
    let reg = f.c_z_regular(&z).map_err(|e| e.to_string())?;
    let lim = f.c_z_limit(&z).map_err(|e| e.to_string())?;
    within("c_z regular vs limit at 0.7-0.4i", reg, lim.value, 1e-6)
}

fn equidist_height() -> Result<String, String> {
    let f = z2()?;
    let phi = builtin("height").map_err(|e| e.to_string())?;
    let mu = integrate_mu_f(f.green(), &phi, &QuadratureRule::new(64, 128));
    let nu = pullback(f.lift(), &ProjPoint::from_re_im(1.0, 0.0), 6, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let err = equidist_error(&nu, &phi, mu.value, 2);
    within("height: |<phi, 2^-6 [z^64 = 1]> - mu_f(phi)|", err, 0.0, 1e-9)
}

fn gauss_point() -> Result<String, String> {
    let f = RationalLift::from_ints(&[1, 0, 0], &[0, 0, 1]).map_err(|e| e.to_string())?;
    let r = gauss_green(&f, 2, 4).map_err(|e| e.to_string())?;
    let ok = r.sequence.iter().all(|s| s == "0") && r.vf == "0" && r.phi_self == "0";
    let msg = format!("p=2 Gauss point: sequence {:?}, VF {}, phi_self {}", r.sequence, r.vf, r.phi_self);
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

const CHECKS: [Check; 7] = [
    ("green_closed_form", green_closed_form),
    ("capacity", capacity),
    ("energy_closed_form", energy_closed_form),
    ("critical_base", critical_base),
    ("c_z_agreement", c_z_agreement),
    ("equidist_height", equidist_height),
    ("gauss_point", gauss_point),
];

pub fn run() -> (String, bool) {
    let mut out = String::new();
    let mut all = true;
    for (name, check) in CHECKS {
        match check() {
            Ok(msg) => out.push_str(&format!("PASS {name}: {msg}\n")),
            Err(msg) => {
                all = false;
                out.push_str(&format!("FAIL {name}: {msg}\n"));
            }
        }
    }
    (out, all)
}
