use lflab_core::expfun_sim::{
    sample_exponential_functionals, sample_sd_compositions, PathConfig, PathSimulator,
};
use lflab_core::levy_core::LevyExponentSpec;
use lflab_core::samplers::{split_stream, RngStream};
use lflab_core::stats::{ks_two_sample, mc_mean_se};
use lflab_core::{FrechetParams, LevyExponent};

fn spec(alpha: f64, t: f64) -> LevyExponent {
    LevyExponentSpec::frechet_gamma(FrechetParams::new(alpha, t).unwrap())
}

#[test]
fn window_moments_match_exponent() {
    // E[Z_T] = T m and E[e^{-Z_T}] = e^{T ψ(-1)}.
    let s = spec(0.3, 1.0);
    let sim = PathSimulator::new(&s, PathConfig::default()).unwrap();
    let horizon = 2.0;
    let streams = split_stream(RngStream::new(5, 0), 20_000).unwrap();
    let (z, ez): (Vec<f64>, Vec<f64>) = streams
        .iter()
        .map(|st| {
            let (z, _) = sim.window(&mut st.rng(), horizon);
            (z, (-z).exp())
        })
        .unzip();
    let zm = mc_mean_se(&z).unwrap().z_score(horizon * s.drift_m());
    assert!(zm < 3.5, "mean of Z_T: z = {zm}");
    let want = (horizon * s.psi_closed(-1.0).unwrap()).exp();
    let zl = mc_mean_se(&ez).unwrap().z_score(want);
    assert!(zl < 3.5, "E[exp(-Z_T)]: z = {zl}");
}

#[test]
fn mean_of_reciprocal_functional_is_drift() {
    for (a, t, n) in [(0.5, 0.5, 2_000), (0.3, 1.0, 4_000), (0.7, 2.0, 1_500)] {
        let s = spec(a, t);
        let xs =
            sample_exponential_functionals(&s, &PathConfig::default(), n, RngStream::new(11, 2))
                .unwrap();
        assert!(xs.iter().all(|x| !x.truncated && x.value_i > 0.0));
        let inv: Vec<f64> = xs.iter().map(|x| 1.0 / x.value_i).collect();
        let z = mc_mean_se(&inv).unwrap().z_score(s.drift_m());
        assert!(z < 3.0, "α={a} t={t}: z = {z}");
    }
}

#[test]
fn finer_discretization_does_not_move_the_law() {
    let s = spec(0.3, 1.0);
    let coarse = PathConfig {
        eps_jump: 2e-3,
        grid_h: 0.02,
        ..PathConfig::default()
    };
    let fine = PathConfig::default();
    let n = 6_000;
    let a: Vec<f64> = sample_exponential_functionals(&s, &coarse, n, RngStream::new(21, 0))
        .unwrap()
        .iter()
        .map(|x| x.value_i)
        .collect();
    let b: Vec<f64> = sample_exponential_functionals(&s, &fine, n, RngStream::new(21, 1))
        .unwrap()
        .iter()
        .map(|x| x.value_i)
        .collect();
    let ks = ks_two_sample(&a, &b).unwrap();
    assert!(ks.p_value >= 0.01, "{ks:?}");
}

#[test]
fn passage_split_is_positive() {
    let s = spec(0.5, 1.0);
    let sim = PathSimulator::new(&s, PathConfig::default()).unwrap();
    for st in split_stream(RngStream::new(9, 0), 200).unwrap() {
        let (split, tail) = sim.sd_split(&mut st.rng(), 1.0).unwrap();
        assert!(split.passage_time > 0.0 && split.head_integral > 0.0);
        assert!(tail.value_i > 0.0);
    }
    let composed =
        sample_sd_compositions(&s, 0.5, &PathConfig::default(), 100, RngStream::new(9, 1)).unwrap();
    assert!(composed.iter().all(|&v| v > 0.0 && v.is_finite()));
}

#[test]
fn samples_are_reproducible_and_stream_dependent() {
    let s = spec(0.5, 0.5);
    let cfg = PathConfig::default();
    let a = sample_exponential_functionals(&s, &cfg, 50, RngStream::new(3, 4)).unwrap();
    let b = sample_exponential_functionals(&s, &cfg, 50, RngStream::new(3, 4)).unwrap();
    let c = sample_exponential_functionals(&s, &cfg, 50, RngStream::new(3, 5)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn invalid_configs_are_rejected() {
    let s = spec(0.5, 0.5);
    for cfg in [
        PathConfig {
            eps_jump: 0.0,
            ..PathConfig::default()
        },
        PathConfig {
            tail_delta: 1.5,
            ..PathConfig::default()
        },
        PathConfig {
            window_t: f64::INFINITY,
            ..PathConfig::default()
        },
    ] {
        assert!(PathSimulator::new(&s, cfg).is_err());
    }
}
