mod common;

use common::*;
use quasipos::algebra::{group_exp, FieldTag, GroupElement, Quaternion};
use quasipos::catalog;
use quasipos::certify::{self, StartBudget, Tolerances, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn budget() -> StartBudget {
    StartBudget::default().with_starts(32).with_seed(11)
}

#[test]
fn f_matches_closed_form_on_t1s3() {
    // conjugation by e^{iθ} rotates j towards k by 2θ, giving f(s) = ½ sin²(2√2 s)
    let e = catalog::t1s3_product().unwrap();
    let z = pair(Quaternion::J, Quaternion::J).scale(1.0 / R2);
    let w = pair(Quaternion::J, -Quaternion::J).scale(1.0 / R2);
    for s in [-0.4, -0.1, 0.05, 0.2, 0.7] {
        let f = certify::f_of_s(&e.triple, &z, &w, &e.base_point, s).unwrap();
        let expected = 0.5 * (2.0 * R2 * s).sin().powi(2);
        assert!((f - expected).abs() < 1e-13, "s = {s}: {f} vs {expected}");
    }
}

#[test]
fn unconstrained_k_zero_entry_reports_sigma() {
    let e = catalog::m_kl(2, 0, 1).unwrap();
    let sigma = certify::min_ad_singular(&e.triple, &e.base_point).unwrap();
    let oracle = sampled_min_ad(&e.triple, &e.base_point, 100_000, 3);
    assert!((sigma - oracle).abs() < 1e-3, "{sigma} vs {oracle}");
    assert!(e.metadata.notes.iter().any(|n| n.contains("k ≠ 0")));
}

#[test]
fn fat_triple_is_positive_at_every_sampled_point() {
    let e = catalog::t1_sphere(2).unwrap();
    let t = &e.triple;
    assert_eq!(certify::check_fatness(t, &budget(), Tolerances::default()).unwrap().verdict, Verdict::Certified);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..6 {
        let g = group_exp(&random_unit_in(t.g(), &mut rng), 2.0);
        let r = certify::point_positivity(t, &g, &budget(), Tolerances::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Certified, "{r:?}");
        // the commutator term alone is 1/2 on orthonormal pairs of so(3)
        assert!(r.score >= 0.5 - 1e-9);
    }
}

#[test]
fn part2_agrees_with_fatness_and_part3() {
    let s2 = catalog::t1_sphere(2).unwrap();
    let fat = certify::check_fatness(&s2.triple, &budget(), Tolerances::default()).unwrap();
    let p2 = certify::certify_part2(&s2.triple, &s2.base_point, &budget(), Tolerances::default()).unwrap();
    assert_eq!((fat.verdict, p2.verdict), (Verdict::Certified, Verdict::Certified));

    for e in [catalog::t1s3_product().unwrap(), catalog::t1_sphere(3).unwrap()] {
        let p3 = certify::certify_part3(&e.triple, &e.base_point, Tolerances::default()).unwrap();
        let p2 = certify::certify_part2(&e.triple, &e.base_point, &budget(), Tolerances::default()).unwrap();
        assert_eq!(p3.verdict, Verdict::Certified);
        assert_eq!(p2.verdict, Verdict::Certified, "{}: {p2:?}", e.id);
    }
}

#[test]
fn point_off_identity_is_positive() {
    let e = catalog::t1s3_product().unwrap();
    let g = group_exp(&e.base_point, 0.3);
    let r = certify::point_positivity(&e.triple, &g, &budget(), Tolerances::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Certified);
    assert!(r.score > 1e-4);
    let id = certify::point_positivity(&e.triple, &GroupElement::identity(e.triple.field(), 2), &budget(), Tolerances::default()).unwrap();
    assert_eq!(id.verdict, Verdict::Refuted);
}

#[test]
fn m_kl_scan_is_positive() {
    let e = catalog::m_kl(2, 1, 1).unwrap();
    let reports = certify::scan_along_a(&e.triple, &e.base_point, &[0.1, 0.2], &budget(), Tolerances::default()).unwrap();
    for r in reports {
        assert_eq!(r.verdict, Verdict::Certified, "{r:?}");
    }
}

#[test]
fn min_ad_singular_matches_sampling_on_small_entries() {
    let entries = [
        catalog::t1_sphere(4).unwrap(),
        catalog::pt_projective(FieldTag::Complex, 2).unwrap(),
        catalog::sp_example(2).unwrap(),
    ];
    for e in entries {
        assert!(e.triple.m().dim() <= 8);
        let sigma = certify::min_ad_singular(&e.triple, &e.base_point).unwrap();
        let oracle = sampled_min_ad(&e.triple, &e.base_point, 100_000, 8);
        assert!((sigma - oracle).abs() < 1e-3, "{}: {sigma} vs {oracle}", e.id);
    }
}
