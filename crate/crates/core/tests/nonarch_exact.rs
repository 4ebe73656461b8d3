use feketelab::nonarch::{delta_can, gauss_green, gromov_check, hsia, join, rho, vf_padic, LogValue, PadicBall, RationalLift};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rational(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    let num = rng.gen_range(-500i64..500) * (p as i64).pow(rng.gen_range(0..3));
    let den = rng.gen_range(1i64..60) * (p as i64).pow(rng.gen_range(0..3));
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn random_ball(rng: &mut ChaCha8Rng, p: u64) -> PadicBall {
    let r = BigRational::new(BigInt::from(rng.gen_range(-4i64..6)), BigInt::from(rng.gen_range(1i64..4)));
    PadicBall::new(p, random_rational(rng, p), r).unwrap()
}

fn vp_of(x: &Option<LogValue>) -> Option<BigRational> {
    x.as_ref().map(|v| v.coeff().clone())
}

#[test]
fn gromov_identity_on_random_balls() {
    for p in [2u64, 3, 5] {
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..1000 {
            let (s, t) = (random_ball(&mut rng, p), random_ball(&mut rng, p));
            let g = gromov_check(&s, &t).unwrap();
            assert_eq!(g.lhs, g.rhs);
            assert_eq!(delta_can(&s, &t).unwrap(), delta_can(&t, &s).unwrap());
        }
    }
}

#[test]
fn hsia_is_ultrametric_and_rho_is_a_metric() {
    for p in [2u64, 3, 5] {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + p);
        for _ in 0..500 {
            let (a, b, c) = (random_ball(&mut rng, p), random_ball(&mut rng, p), random_ball(&mut rng, p));
            let ab = vp_of(&hsia(&a, &b).unwrap()).unwrap();
            let bc = vp_of(&hsia(&b, &c).unwrap()).unwrap();
            let ac = vp_of(&hsia(&a, &c).unwrap()).unwrap();
            assert!(ac <= ab.clone().max(bc.clone()));
            let (rab, rbc, rac) = (rho(&a, &b).unwrap(), rho(&b, &c).unwrap(), rho(&a, &c).unwrap());
            assert_eq!(rab, rho(&b, &a).unwrap());
            assert!(rac <= rab.clone() + rbc);
            assert!(rab >= LogValue::zero());
            assert_eq!(rho(&a, &a).unwrap(), LogValue::zero());
            if rab == LogValue::zero() {
                assert_eq!(a, b);
            }
            assert_eq!(join(&a, &b).unwrap(), join(&b, &a).unwrap());
        }
    }
}

#[test]
fn multiplicativity_of_absolute_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [2u64, 3, 5, 7] {
        for _ in 0..100 {
            let (x, y) = (random_rational(&mut rng, p), random_rational(&mut rng, p));
            let lhs = feketelab::nonarch::absp(&(&x * &y), p);
            assert_eq!(lhs, feketelab::nonarch::absp(&x, p) * feketelab::nonarch::absp(&y, p));
        }
    }
}

#[test]
fn resultant_valuation_under_integral_conjugation() {
    let maps = [RationalLift::from_ints(&[1, 0, 1], &[0, 2, 0]).unwrap(), RationalLift::from_ints(&[3, 1, 4], &[0, 6, 9]).unwrap(), RationalLift::from_ints(&[1, 0, 0, 2], &[0, 0, 8, 1]).unwrap()];
    let hs = [[[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2, 1], [1, 1]], [[1, 0], [3, 1]], [[3, 2], [1, 1]]];
    for f in &maps {
        for h in hs {
            let fh = f.conjugate_integral(h).unwrap();
            for p in [2u64, 3, 5] {
                assert_eq!(vf_padic(f, p).unwrap(), vf_padic(&fh, p).unwrap());
            }
        }
    }
}

#[test]
fn good_reduction_maps_have_zero_gauss_green() {
    let maps = [
        RationalLift::from_ints(&[1, 0, 0], &[0, 0, 1]).unwrap(),
        RationalLift::from_ints(&[1, 0, 1], &[0, 0, 1]).unwrap(),
        RationalLift::from_ints(&[1, 1, 0], &[0, 0, 1]).unwrap(),
        RationalLift::from_ints(&[0, 0, 1], &[1, 0, 0]).unwrap(),
        RationalLift::from_ints(&[1, 0, 0, 1], &[0, 0, 0, 1]).unwrap(),
    ];
    for f in &maps {
        for p in [2u64, 3, 5] {
            assert_eq!(vf_padic(f, p).unwrap(), LogValue::zero());
            let r = gauss_green(f, p, 4).unwrap();
            assert!(r.values.iter().all(|v| *v == LogValue::zero()));
            assert_eq!(r.phi_self_value, LogValue::zero());
        }
    }
}

#[test]
fn newton_map_at_two() {
    let f = RationalLift::from_ints(&[1, 0, 1], &[0, 2, 0]).unwrap();
    assert_eq!(vf_padic(&f, 2).unwrap(), LogValue::from_int(1));
    let r = gauss_green(&f, 2, 6).unwrap();
    // P_k(1, 0) = 1 for every iterate, so the Gauss norm stays 1
    assert!(r.sequence.iter().all(|g| g == "0"));
    assert!(r.differences.iter().all(|g| g == "0"));
    assert_eq!(r.phi_self, "-1");
    assert_eq!(gauss_green(&f, 3, 3).unwrap().phi_self, "0");
}
