use feketelab::expr::parse_map;
use feketelab::potential::GreenEvaluator;
use feketelab::pullback::{preimages, pullback, DEFAULT_BUDGET};
use feketelab::{Complex64, Mobius, ProjPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAPS: [&str; 4] = ["z^2", "z^2-1", "z^2+i", "(z^2+1)/(2*z)"];

fn random_point(rng: &mut ChaCha8Rng) -> ProjPoint {
    let x: [f64; 3] = loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0f64)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            break [v[0] / n, v[1] / n, v[2] / n];
        }
    };
    ProjPoint::from_sphere(x)
}

fn random_unitary(rng: &mut ChaCha8Rng) -> Mobius {
    Mobius::from_angles(rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.0..std::f64::consts::PI), rng.gen_range(0.0..std::f64::consts::TAU))
}

#[test]
fn z2_green_function_closed_form() {
    let g = GreenEvaluator::new(parse_map("z^2").unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let z = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let exact = z.norm().max(1.0).ln() - 0.5 * (1.0 + z.norm_sqr()).ln();
        assert!((g.green_g_lift(&ProjPoint::from_affine(z)) - exact).abs() < 1e-10);
    }
}

#[test]
fn functional_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for m in MAPS {
        let g = GreenEvaluator::new(parse_map(m).unwrap());
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let (a, b) = g.lift().eval_vec(&p);
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let lhs = g.escape_rate_unit((a / n, b / n)).0 + n.ln();
            let res = (lhs - g.lift().degree() as f64 * g.escape_rate(&p)).abs();
            assert!(res < 10.0 * g.tol(), "{m}: {res}");
        }
    }
}

#[test]
fn riesz_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in MAPS {
        let g = GreenEvaluator::new(parse_map(m).unwrap());
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let z = random_point(&mut rng);
            let a = random_point(&mut rng);
            let pre = preimages(g.lift(), &a).unwrap();
            let atoms: Vec<(ProjPoint, f64)> = pre.atoms.iter().map(|r| (r.point, r.multiplicity as f64)).collect();
            let lhs = g.phi_f(&g.lift().evaluate(&z), &a);
            worst = worst.max((lhs - g.potential_of_atoms(&z, &atoms)).abs());
        }
        assert!(worst < 1e-7, "{m}: {worst}");
    }
}

#[test]
fn kernel_symmetry_and_mobius_transport() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for m in MAPS {
        let f = parse_map(m).unwrap();
        let g = GreenEvaluator::new(f.clone());
        for _ in 0..5 {
            let h = random_unitary(&mut rng);
            let gh = GreenEvaluator::new(f.conjugate(&h).unwrap());
            for _ in 0..10 {
                let (z, w) = (random_point(&mut rng), random_point(&mut rng));
                assert_eq!(g.phi_f(&z, &w), g.phi_f(&w, &z));
                let d = (gh.phi_f(&z, &w) - g.phi_f(&h.apply(&z), &h.apply(&w))).abs();
                assert!(d < 1e-8, "{m}: {d}");
            }
        }
    }
}

#[test]
fn resultant_modulus_is_unitarily_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in MAPS {
        let f = parse_map(m).unwrap();
        for _ in 0..5 {
            let fh = f.conjugate(&random_unitary(&mut rng)).unwrap();
            let (a, b) = (f.resultant().norm(), fh.resultant().norm());
            assert!((a - b).abs() <= 1e-9 * a, "{m}: {a} vs {b}");
        }
    }
}

#[test]
fn frostman_and_vanishing_potential() {
    let g = GreenEvaluator::new(parse_map("z^2+i").unwrap());
    let nu = pullback(g.lift(), &ProjPoint::from_re_im(2.0, 0.0), 8, DEFAULT_BUDGET).unwrap();
    let dk = 256.0;
    let atoms: Vec<(ProjPoint, f64)> = nu.atoms.iter().map(|a| (a.point, a.weight as f64 / dk)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut probes = 0;
    while probes < 20 {
        let z = random_point(&mut rng);
        if atoms.iter().any(|(w, _)| feketelab::projline::chordal(&z, w) < 0.05) {
            continue;
        }
        probes += 1;
        let u = g.potential_of_atoms(&z, &atoms);
        assert!(u.abs() <= 0.05, "U = {u} at {z}");
        let uf: f64 = atoms.iter().map(|(w, m)| m * g.phi_capital_f(&z, w)).sum();
        assert!((uf - g.vf()).abs() <= 0.05, "U_F = {uf}, V_F = {}", g.vf());
    }
}
