use feketelab::expr::parse_map;
use feketelab::fekete::Fekete;
use feketelab::pullback::DEFAULT_BUDGET;
use feketelab::ProjPoint;

const MAPS: [&str; 4] = ["z^2", "z^2-1", "z^2+i", "(z^2+1)/(2*z)"];

fn points() -> Vec<ProjPoint> {
    vec![ProjPoint::from_re_im(1.0, 0.0), ProjPoint::from_re_im(2.0, 0.0), ProjPoint::from_re_im(0.3, 0.4)]
}

#[test]
fn direct_and_chain_rule_routes_agree() {
    for m in MAPS {
        let f = Fekete::new(parse_map(m).unwrap()).unwrap();
        for a in points() {
            for r in f.sweep(&a, 5, DEFAULT_BUDGET).unwrap() {
                let tol = 1e-6 * r.energy_direct.abs() + 1e-9;
                assert!(r.route_diff <= tol, "{m} a={a} k={}: {} vs {}", r.k, r.energy_direct, r.energy_cz);
                if !r.cf_heuristic {
                    assert!(r.bounds_hold, "{m} a={a} k={}", r.k);
                }
            }
        }
    }
}

mod props {
    use super::*;
    use feketelab::pullback::eta_growth_probe;
    use feketelab::Mobius;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> ProjPoint {
        let z = num_complex::Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        ProjPoint::from_affine(z)
    }

    #[test]
    fn regular_formula_matches_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in MAPS {
            let f = Fekete::new(parse_map(m).unwrap()).unwrap();
            let mut n = 0;
            while n < 20 {
                let z = random_point(&mut rng);
                if f.critical().atoms.iter().any(|(c, _)| feketelab::projline::chordal(c, &z) < 1e-3) {
                    continue;
                }
                n += 1;
                let reg = f.c_z_regular(&z).unwrap();
                let lim = f.c_z_limit(&z).unwrap();
                assert!(!lim.low_confidence);
                assert!((reg - lim.value).abs() < 1e-6, "{m} {z}: {reg} vs {}", lim.value);
                assert!((reg - f.c_z_jet(&z).unwrap()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn chain_rule_against_second_iterate() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for m in ["z^2+i", "(z^2+1)/(2*z)"] {
            let f = Fekete::new(parse_map(m).unwrap()).unwrap();
            let f2 = Fekete::new(f.lift().iterate_lift(2).unwrap()).unwrap();
            for _ in 0..10 {
                let z = random_point(&mut rng);
                let chain = f.c_z_iterate(&z, 2).unwrap();
                let direct = f2.c_z_limit(&z).unwrap().value;
                assert!((chain - direct).abs() < 1e-5, "{m} {z}: {chain} vs {direct}");
            }
        }
    }

    #[test]
    fn energy_is_mobius_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = parse_map("z^2+i").unwrap();
        let base = Fekete::new(f.clone()).unwrap();
        let a = ProjPoint::from_re_im(0.3, 0.4);
        let e = base.sweep(&a, 4, DEFAULT_BUDGET).unwrap();
        for _ in 0..5 {
            let h = Mobius::from_angles(rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.0..std::f64::consts::PI), rng.gen_range(0.0..std::f64::consts::TAU));
            let conj = Fekete::new(f.conjugate(&h).unwrap()).unwrap();
            let eh = conj.sweep(&h.inverse().apply(&a), 4, DEFAULT_BUDGET).unwrap();
            for (x, y) in e.iter().zip(&eh) {
                assert!((x.energy_direct - y.energy_direct).abs() < 1e-8, "k={}: {} vs {}", x.k, x.energy_direct, y.energy_direct);
            }
        }
    }

    #[test]
    fn growth_probes_of_z2() {
        let f = parse_map("z^2").unwrap();
        let r = eta_growth_probe(&f, &ProjPoint::zero(), 8, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.class.label(), "exceptional-candidate");
        assert!(r.eta.iter().enumerate().all(|(j, &e)| e == 1u64 << (j + 1)));
        let r = eta_growth_probe(&f, &ProjPoint::from_re_im(1.0, 0.0), 8, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.class.label(), "ordinary");
        assert_eq!(r.eta.iter().max(), Some(&1));
    }

    #[test]
    fn closed_form_to_level_ten() {
        let f = Fekete::new(parse_map("z^2").unwrap()).unwrap();
        for r in f.sweep(&ProjPoint::from_re_im(1.0, 0.0), 10, DEFAULT_BUDGET).unwrap() {
            let exact = r.k as f64 * 2f64.powi(-(r.k as i32)) * 2f64.ln();
            assert!((r.energy_direct - exact).abs() < 1e-9);
            assert!(r.bounds_hold && !r.cf_heuristic);
            assert!(r.rate_bundle.r1.max(r.rate_bundle.r2) <= r.rate_bundle.r3);
        }
    }
}
