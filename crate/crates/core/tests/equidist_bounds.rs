use feketelab::equidist::{builtin, equidist_sweep, integrate_mu_f, TestFunction};
use feketelab::expr::parse_map;
use feketelab::fekete::Fekete;
use feketelab::pullback::{preimage_tower, DEFAULT_BUDGET};
use feketelab::quadrature::QuadratureRule;
use feketelab::ProjPoint;

#[test]
fn mu_f_of_z2_is_the_circle_measure() {
    let f = Fekete::new(parse_map("z^2").unwrap()).unwrap();
    let rule = QuadratureRule::new(64, 128);
    for (name, want) in [("re", 0.0), ("im", 0.0), ("radial", 0.0)] {
        let phi = builtin(name).unwrap();
        let v = integrate_mu_f(f.green(), &phi, &rule);
        assert!((v.value - want).abs() < 1e-8 + 2.0 * v.error_estimate, "{name}: {:?}", v);
    }
    let bump = builtin("bump").unwrap();
    let v = integrate_mu_f(f.green(), &bump, &rule);
    // circle average of s(1 - exp(-[z,w]^2/s))
    let n = 4096;
    let avg: f64 = (0..n).map(|j| bump.at(&ProjPoint::from_affine(num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64)))).sum::<f64>() / n as f64;
    assert!((v.value - avg).abs() <= 2.0 * v.error_estimate);
}

#[test]
fn inferred_constant_is_stable() {
    let f = Fekete::new(parse_map("z^2+i").unwrap()).unwrap();
    let a = ProjPoint::from_re_im(2.0, 0.0);
    let tower = preimage_tower(f.lift(), &a, 8, DEFAULT_BUDGET).unwrap();
    let reps: Vec<_> = (1..=8).map(|k| f.report_from_tower(&tower[..=k]).unwrap()).collect();
    let rule = QuadratureRule::new(256, 512);
    for name in ["height", "bump", "radial"] {
        let rows = equidist_sweep(f.green(), &tower, &reps, &builtin(name).unwrap(), &rule);
        let (c4, c8) = (rows[3].inferred_c, rows[7].inferred_c);
        assert!(c4.is_finite() && c4 > 0.0 && c8 / c4 < 2.0, "{name}: {c4} {c8}");
        assert!(rows.iter().all(|r| r.quad_error < 0.05 * r.error), "{name}: quadrature error too large");
    }
}

#[test]
fn explicit_bound_for_z2() {
    let f = Fekete::new(parse_map("z^2").unwrap()).unwrap();
    let a = ProjPoint::from_re_im(1.0, 0.0);
    let tower = preimage_tower(f.lift(), &a, 10, DEFAULT_BUDGET).unwrap();
    let reps: Vec<_> = (1..=10).map(|k| f.report_from_tower(&tower[..=k]).unwrap()).collect();
    let rule = QuadratureRule::new(64, 128);
    for name in feketelab::equidist::BUILTIN_NAMES {
        for r in equidist_sweep(f.green(), &tower, &reps, &builtin(name).unwrap(), &rule).iter().skip(1) {
            let closed = r.k as f64 * 2f64.powi(-(r.k as i32)) * 2f64.ln();
            assert!((r.energy - closed).abs() < 1e-9);
            assert!(r.margin >= 0.0, "{name} k={}: error {} above bound {}", r.k, r.error, r.bound);
        }
    }
}

#[test]
fn dirichlet_norm_is_chart_and_mobius_invariant() {
    use feketelab::equidist::{dirichlet_two_chart, Pulled, BUILTIN_NAMES};
    use feketelab::Mobius;
    for name in BUILTIN_NAMES {
        let phi = builtin(name).unwrap();
        let two = dirichlet_two_chart(&phi, 400, 800);
        assert!((two - phi.dirichlet()).abs() < 1e-8, "{name}: {two} vs {}", phi.dirichlet());
        for h in [Mobius::from_angles(0.3, 1.1, 2.0), Mobius::inversion(), Mobius::from_angles(2.5, 0.4, 5.0)] {
            let pulled = Pulled { inner: &phi, h };
            let v = dirichlet_two_chart(&pulled, 400, 800);
            assert!((v - phi.dirichlet()).abs() < 1e-6, "{name}: {v}");
        }
    }
}

#[test]
fn roots_of_unity_average_the_coordinates() {
    use feketelab::equidist::equidist_error;
    let f = parse_map("z^2").unwrap();
    let re = builtin("re").unwrap();
    for k in 2..=8 {
        let nu = feketelab::pullback::pullback(&f, &ProjPoint::from_re_im(1.0, 0.0), k, DEFAULT_BUDGET).unwrap();
        assert!(equidist_error(&nu, &re, 0.0, 2) < 1e-10);
    }
    let nu = feketelab::pullback::pullback(&f, &ProjPoint::zero(), 4, DEFAULT_BUDGET).unwrap();
    assert_eq!(equidist_error(&nu, &re, 0.0, 2), 0.0);
}
