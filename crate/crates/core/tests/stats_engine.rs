use std::f64::consts::{PI, SQRT_2};

use lflab_core::specfun::euler_gamma;
use lflab_core::stats::{
    finite_diff, integrate, kolmogorov_q, ks_one_sample, ks_two_sample, mc_mean_se, ratio_mean_se,
    Domain,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Case = (&'static str, fn(f64) -> f64, Domain<f64>, f64);

fn corpus() -> Vec<Case> {
    use Domain::{Finite, SemiInfinite};
    vec![
        ("x^3 on [0,1]", |x| x.powi(3), Finite(0.0, 1.0), 0.25),
        ("sqrt x", |x| x.sqrt(), Finite(0.0, 1.0), 2.0 / 3.0),
        ("x^-1/2", |x| 1.0 / x.sqrt(), Finite(0.0, 1.0), 2.0),
        ("x^-0.9", |x| x.powf(-0.9), Finite(0.0, 1.0), 10.0),
        ("log x", |x| x.ln(), Finite(0.0, 1.0), -1.0),
        (
            "(-x)^-1/2 on [-1,0]",
            |x| 1.0 / (-x).sqrt(),
            Finite(-1.0, 0.0),
            2.0,
        ),
        (
            "log x log(1-x)",
            |x| x.ln() * (-x).ln_1p(),
            Finite(0.0, 1.0),
            2.0 - PI * PI / 6.0,
        ),
        (
            "1/(1+x^2) on [0,1]",
            |x| 1.0 / (1.0 + x * x),
            Finite(0.0, 1.0),
            PI / 4.0,
        ),
        ("sin on [0,pi]", f64::sin, Finite(0.0, PI), 2.0),
        (
            "cos^2 on [0,2pi]",
            |x| x.cos().powi(2),
            Finite(0.0, 2.0 * PI),
            PI,
        ),
        (
            "semicircle",
            |x| (1.0 - x * x).max(0.0).sqrt(),
            Finite(-1.0, 1.0),
            PI / 2.0,
        ),
        ("e^-x", |x| (-x).exp(), SemiInfinite(0.0), 1.0),
        ("x^2 e^-x", |x| x * x * (-x).exp(), SemiInfinite(0.0), 2.0),
        (
            "x^-0.7 e^-x",
            |x| x.powf(-0.7) * (-x).exp(),
            SemiInfinite(0.0),
            2.991_568_987_687_591,
        ),
        (
            "e^-x log x",
            |x| (-x).exp() * x.ln(),
            SemiInfinite(0.0),
            -euler_gamma::<f64>(),
        ),
        (
            "e^-x^2",
            |x| (-x * x).exp(),
            SemiInfinite(0.0),
            PI.sqrt() / 2.0,
        ),
        (
            "1/(1+x^2)",
            |x| 1.0 / (1.0 + x * x),
            SemiInfinite(0.0),
            PI / 2.0,
        ),
        (
            "1/(1+x^4)",
            |x| 1.0 / (1.0 + x.powi(4)),
            SemiInfinite(0.0),
            PI / (2.0 * SQRT_2),
        ),
        (
            "(1+x)^-3/2",
            |x| (1.0 + x).powf(-1.5),
            SemiInfinite(0.0),
            2.0,
        ),
        (
            "x/(e^x-1)",
            |x| if x == 0.0 { 1.0 } else { x / x.exp_m1() },
            SemiInfinite(0.0),
            PI * PI / 6.0,
        ),
        (
            "e^-2x cos x",
            |x| (-2.0 * x).exp() * x.cos(),
            SemiInfinite(0.0),
            0.4,
        ),
        (
            "e^-x from 3",
            |x| (-x).exp(),
            SemiInfinite(3.0),
            (-3.0_f64).exp(),
        ),
    ]
}

#[test]
fn quadrature_corpus() {
    let cases = corpus();
    assert!(cases.len() >= 20);
    for (name, f, dom, exact) in cases {
        for &tol in &[1e-8, 1e-11] {
            let r = integrate(f, dom, tol).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(
                (r.value - exact).abs() <= 10.0 * tol,
                "{name} at tol {tol}: {} vs {exact}",
                r.value
            );
            assert!(
                r.est_abs_err <= 10.0 * tol,
                "{name}: estimated error {}",
                r.est_abs_err
            );
        }
    }
}

#[test]
fn quadrature_rejects_divergent_or_bad_input() {
    assert!(integrate(|x: f64| 1.0 / x, Domain::Finite(0.0, 1.0), 1e-10).is_err());
    assert!(integrate(|x: f64| x, Domain::Finite(0.0, f64::NAN), 1e-10).is_err());
}

#[test]
fn finite_diff_error_within_noise_floor() {
    type WithDerivative = (fn(f64) -> f64, fn(usize, f64) -> f64);
    let fs: [WithDerivative; 3] = [
        (
            |x| (-x).exp(),
            |k, x| if k % 2 == 0 { (-x).exp() } else { -(-x).exp() },
        ),
        (
            |x| 1.0 / (1.0 + x),
            |k, x| {
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * fact / (1.0 + x).powi(k as i32 + 1)
            },
        ),
        (f64::sin, |k, x| {
            [x.sin(), x.cos(), -x.sin(), -x.cos()][k % 4]
        }),
    ];
    let (mut total, mut covered) = (0, 0);
    for (f, df) in fs {
        for order in 1..=4 {
            for &x in &[0.8, 1.0, 2.0, 3.5, 5.0] {
                for &h in &[1e-1, 3e-2, 1e-2] {
                    let d = finite_diff(f, x, order, h).unwrap();
                    total += 1;
                    if (d.value - df(order, x)).abs() <= d.noise_floor {
                        covered += 1;
                    }
                }
            }
        }
    }
    assert!(covered as f64 >= 0.99 * total as f64, "{covered}/{total}");
}

#[test]
fn ks_one_sample_on_exact_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u: Vec<f64> = (0..20_000).map(|_| rng.gen::<f64>()).collect();
    let r = ks_one_sample(&u, |x| x.clamp(0.0, 1.0)).unwrap();
    assert!(r.p_value > 0.01, "{r:?}");
    let shifted = ks_one_sample(&u, |x| (x - 0.05).clamp(0.0, 1.0)).unwrap();
    assert!(shifted.p_value < 1e-6);
    assert!(ks_one_sample(&u[..5], |x| x).is_err());
}

#[test]
fn kolmogorov_tail_values() {
    // Q(λ) at a few points from the series itself, summed independently.
    for &l in &[0.5_f64, 1.0, 1.36, 2.0] {
        let want: f64 = (1..100)
            .map(|k| 2.0 * (-1.0_f64).powi(k - 1) * (-2.0 * (k * k) as f64 * l * l).exp())
            .sum();
        assert!((kolmogorov_q(l) - want).abs() < 1e-12);
    }
    assert!((kolmogorov_q(1.358) - 0.05).abs() < 1e-3);
}

#[test]
fn mean_and_ratio_standard_errors() {
    let v = [1.0, 2.0, 3.0, 4.0];
    let m = mc_mean_se(&v).unwrap();
    assert_eq!(m.mean, 2.5);
    assert!((m.se - (5.0_f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    let r = ratio_mean_se(&[2.0, 4.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
    assert!((r.mean - 2.0).abs() < 1e-15 && r.se.abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ks_two_sample_symmetric(seed in any::<u64>(), na in 10usize..400, nb in 10usize..400, shift in -1.0..1.0_f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<f64> = (0..na).map(|_| rng.gen::<f64>()).collect();
        let b: Vec<f64> = (0..nb).map(|_| rng.gen::<f64>() + shift).collect();
        let ab = ks_two_sample(&a, &b).unwrap();
        let ba = ks_two_sample(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab.d) && (0.0..=1.0).contains(&ab.p_value));
    }

    #[test]
    fn ks_two_sample_monotone_invariant(seed in any::<u64>(), na in 10usize..400, nb in 10usize..400) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<f64> = (0..na).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
        let b: Vec<f64> = (0..nb).map(|_| rng.gen::<f64>() * 3.0 - 1.0).collect();
        let g = |x: &f64| x.exp() + x.powi(3);
        let ta: Vec<f64> = a.iter().map(g).collect();
        let tb: Vec<f64> = b.iter().map(g).collect();
        prop_assert_eq!(ks_two_sample(&a, &b).unwrap(), ks_two_sample(&ta, &tb).unwrap());
    }

    #[test]
    fn integrate_polynomials(c0 in -3.0..3.0_f64, c1 in -3.0..3.0_f64, c2 in -3.0..3.0_f64, a in -2.0..0.0_f64, b in 0.1..3.0_f64) {
        let f = |x: f64| c0 + c1 * x + c2 * x * x;
        let prim = |x: f64| c0 * x + c1 * x * x / 2.0 + c2 * x * x * x / 3.0;
        let r = integrate(f, Domain::Finite(a, b), 1e-12).unwrap();
        prop_assert!((r.value - (prim(b) - prim(a))).abs() < 1e-10);
    }
}
