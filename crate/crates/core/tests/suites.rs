use std::sync::Arc;

use hallforge::backend::Backend;
use hallforge::presented::{Algebra, FreeElt, Gen, Workbench};
use hallforge::quiver::{KClass, Quiver};
use hallforge::verify::{kashaev_monomials, run_suite, SuiteConfig};
use hallforge::Error;
use proptest::prelude::*;

fn a2() -> Arc<Backend> {
    Arc::new(Backend::preset("a2", 2).unwrap())
}

#[test]
fn report_json_has_counts() {
    let r = run_suite(a2(), &SuiteConfig::new("heis-oracle")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["suite"], "heis-oracle");
    assert_eq!(v["quiver"], "a2");
    assert_eq!(v["q"], 2);
    assert_eq!(v["instances"], v["passes"]);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn tiny_budget_reports_cap_hits() {
    let b = Arc::new(Backend::with_budget(Quiver::preset("a2").unwrap(), 3, 20).unwrap());
    let r = run_suite(b, &SuiteConfig::new("green")).unwrap();
    assert!(r.cap_hits > 0);
    assert!(r.failures.is_empty());
    assert_eq!(r.exit_code(), 3);
}

#[test]
fn unknown_suite_is_a_parameter_error() {
    assert!(matches!(run_suite(a2(), &SuiteConfig::new("nope")), Err(Error::Param(_))));
}

#[test]
fn random_samples_follow_the_seed() {
    let mut cfg = SuiteConfig::new("rewrite-sanity");
    cfg.samples = 40;
    let a = run_suite(a2(), &cfg).unwrap();
    let b = run_suite(a2(), &cfg).unwrap();
    assert_eq!(a.to_json_untimed(), b.to_json_untimed());
    assert_eq!(a.exit_code(), 0);
}

#[test]
fn twenty_distinct_monomials() {
    let b = a2();
    let objs = b.objects_up_to(2).unwrap();
    let classes = hallforge::hall::default_class_window(&b);
    let ws = kashaev_monomials(&objs, &classes, 20);
    assert_eq!(ws.len(), 20);
    let mut sorted = ws.clone();
    sorted.dedup();
    assert_eq!(sorted.len(), 20);
    assert!(ws[0].is_empty());
}

fn dh_letter() -> impl Strategy<Value = Gen> {
    let b = a2();
    let objs: Vec<_> = b.objects_up_to(2).unwrap().into_iter().filter(|m| !m.is_zero()).collect();
    (prop::sample::select(objs), -2i64..=2).prop_map(|(m, i)| Gen::Z(m, i))
}

fn hd_letter() -> impl Strategy<Value = Gen> {
    let b = a2();
    let objs: Vec<_> = b.objects_up_to(2).unwrap().into_iter().filter(|m| !m.is_zero()).collect();
    let classes = vec![KClass::from_slice(&[1, 0]), KClass::from_slice(&[0, -1])];
    (prop::sample::select(objs), prop::sample::select(classes), 0..4).prop_map(|(m, a, k)| match k {
        0 => Gen::MuP(m),
        1 => Gen::MuM(m),
        2 => Gen::KP(a),
        _ => Gen::KM(a),
    })
}

fn check_word(alg: Algebra, w: Vec<Gen>, split: usize) -> Result<(), TestCaseError> {
    let wb = Workbench::new(a2());
    let split = split.min(w.len());
    let whole = wb.word(alg, w.clone()).unwrap();
    let again = wb.normal_form(alg, &whole.to_free()).unwrap();
    prop_assert_eq!(&again, &whole);
    let left = wb.word(alg, w[..split].to_vec()).unwrap();
    let right = wb.word(alg, w[split..].to_vec()).unwrap();
    prop_assert_eq!(wb.mult(&left, &right).unwrap(), whole);
    let free = FreeElt::word(2, w);
    prop_assert_eq!(wb.mult_free(alg, &free, &FreeElt::word(2, vec![])).unwrap(), wb.normal_form(alg, &free).unwrap());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derived_words_normalize_consistently(w in prop::collection::vec(dh_letter(), 0..5), split in 0usize..5) {
        check_word(Algebra::Dh, w.clone(), split)?;
        check_word(Algebra::Dhtw, w, split)?;
    }

    #[test]
    fn heisenberg_words_normalize_consistently(w in prop::collection::vec(hd_letter(), 0..5), split in 0usize..5) {
        check_word(Algebra::Hd, w, split)?;
    }
}
