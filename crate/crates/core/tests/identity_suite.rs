use lflab_core::identity_suite::{
    default_params, list_checks, run_check, run_suite, suite, CheckReport, ParamValue, Params,
    SUITE_NAMES,
};
use lflab_core::samplers::RngStream;
use lflab_core::Error;

const MANIFEST: [&str; 17] = [
    "moment_recursion",
    "psi_closed_vs_integral",
    "patie_psi_closed_vs_integral",
    "main_theorem_expfun",
    "sd_split",
    "identity_2_1",
    "gumbel_max_convergence",
    "gumbel_stable_identity",
    "gumbel_lt",
    "dufresne",
    "bessel_hitting",
    "size_biased_formula",
    "subordination_xi_lt_m1",
    "shs_factorization",
    "weibull_not_id",
    "frechet_cm_consistency",
    "grosswald_stieltjes",
];

fn without_timing(mut r: Vec<CheckReport>) -> Vec<CheckReport> {
    r.iter_mut().for_each(|c| c.runtime_ms = 0);
    r
}

#[test]
fn registry_matches_manifest() {
    let mut ids: Vec<&str> = list_checks().iter().map(|c| c.check_id).collect();
    ids.sort_unstable();
    let mut want = MANIFEST.to_vec();
    want.sort_unstable();
    assert_eq!(ids, want);
    for c in list_checks() {
        assert!(
            !c.paper_anchor.trim().is_empty(),
            "{} has no anchor",
            c.check_id
        );
        assert!(!c.description.trim().is_empty());
        assert!(!default_params(c.check_id).unwrap().is_empty());
    }
}

#[test]
fn every_check_appears_in_the_full_suite() {
    let full = suite("full").unwrap();
    for id in MANIFEST {
        assert!(
            full.iter().any(|e| e.check_id == id),
            "{id} missing from the full suite"
        );
    }
    for name in SUITE_NAMES {
        assert!(suite(name).is_some());
    }
    assert!(suite("nope").is_none());
}

#[test]
fn unknown_checks_and_parameters_are_rejected() {
    let s = RngStream::new(1, 0);
    assert!(matches!(
        run_check("nope", &Params::new(), s),
        Err(Error::UnknownCheck(_))
    ));
    let mut p = Params::new();
    p.insert("bogus".into(), ParamValue::Number(1.0));
    assert!(run_check("moment_recursion", &p, s).is_err());
}

#[test]
fn thresholds_come_from_parameters() {
    let s = RngStream::new(1, 0);
    let base = run_check("moment_recursion", &Params::new(), s).unwrap();
    assert!(base.pass);
    let mut strict = Params::new();
    strict.insert("limit".into(), ParamValue::Number(1e-30));
    let r = run_check("moment_recursion", &strict, s).unwrap();
    assert!(!r.pass);
    assert_eq!(r.threshold, 1e-30);
    assert_eq!(r.statistic, base.statistic);
}

#[test]
fn fast_suite_is_deterministic() {
    let entries = suite("fast").unwrap();
    let a = without_timing(run_suite(&entries, 2024).unwrap());
    let b = without_timing(run_suite(&entries, 2024).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.len(), entries.len());
    for (r, e) in a.iter().zip(&entries) {
        assert_eq!(r.check_id, e.check_id);
        assert!(r.pass, "{}: {}", r.check_id, r.notes);
    }
    let c = without_timing(run_suite(&entries, 2025).unwrap());
    assert_ne!(a, c);
}

#[test]
fn report_serializes_losslessly() {
    let r = run_suite(&suite("analytic").unwrap(), 5).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: Vec<CheckReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}
