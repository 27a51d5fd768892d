use super::*;
use crate::algebra::basis::{compact_algebra, diagonal};
use crate::algebra::{FieldTag, Quaternion};
use crate::catalog;
use proptest::prelude::*;

const R2: f64 = std::f64::consts::SQRT_2;

fn pair(a: Quaternion, b: Quaternion) -> AlgElement {
    diagonal(FieldTag::Quaternion, 2, &[(0, a), (1, b)])
}

fn small() -> StartBudget {
    StartBudget::default().with_starts(16).with_seed(7)
}

fn tols() -> Tolerances {
    Tolerances::default()
}

#[test]
fn tolerance_ordering_is_enforced() {
    assert!(Tolerances::new(1e-6, 1e-12).is_ok());
    assert!(Tolerances::new(1e-12, 1e-6).is_err());
    assert!(Tolerances::new(1e-6, 0.0).is_err());
    assert!(Tolerances::new(f64::NAN, 1e-12).is_err());
}

#[test]
fn zero_base_point_has_zero_singular_value() {
    let e = catalog::t1s3_product().unwrap();
    assert_eq!(min_ad_singular(&e.triple, &e.triple.zero()).unwrap(), 0.0);
    let r = certify_part3(&e.triple, &e.triple.zero(), tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted);
    r.validate().unwrap();
}

#[test]
fn t1s3_part3_value() {
    // X = (a, a) with a ⟂ i: |[X, A]|² = |[a, i]|², and |[a, i]| = 2|a| = √2 for |X| = 1.
    let e = catalog::t1s3_product().unwrap();
    let sigma = min_ad_singular(&e.triple, &e.base_point).unwrap();
    assert!((sigma - R2).abs() < 1e-12, "{sigma}");
    let r = certify_part3(&e.triple, &e.base_point, tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Certified);
    assert!(!r.heuristic);
    assert!(r.notes.iter().any(|n| n == RANK_ONE_NOTE));
}

#[test]
fn part3_on_catalog_examples() {
    for e in [catalog::sp_example(2).unwrap(), catalog::t1_sphere(3).unwrap(), catalog::m_kl(2, 1, 1).unwrap()] {
        let r = certify_part3(&e.triple, &e.base_point, tols()).unwrap();
        assert_eq!(r.verdict, Verdict::Certified, "{}: {r:?}", e.id);
    }
}

#[test]
fn part3_with_a_in_h_is_inconclusive() {
    let e = catalog::t1s3_product().unwrap();
    let a = pair(Quaternion::I, Quaternion::I).scale(1.0 / R2);
    let r = certify_part3(&e.triple, &a, tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(r.notes.iter().any(|n| n.contains("not in p")));
}

#[test]
fn part3_rejects_foreign_elements() {
    let e = catalog::t1s3_product().unwrap();
    let a = AlgElement::zero(FieldTag::Complex, 2);
    assert!(certify_part3(&e.triple, &a, tols()).is_err());
}

#[test]
fn fatness_of_low_dimensional_spheres() {
    let r = check_fatness(&catalog::t1_sphere(2).unwrap().triple, &small(), tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Certified);
    assert!((r.score - 0.5).abs() < 1e-10, "{}", r.score);
    assert!(r.heuristic);

    let r = check_fatness(&catalog::t1_sphere(4).unwrap().triple, &small(), tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted);
    let w = r.witness.as_ref().unwrap();
    assert!(w.commutator_residual.sqrt() < 1e-12);
    r.validate().unwrap();
}

#[test]
fn degenerate_p_is_vacuous() {
    let f = FieldTag::Real;
    let g = compact_algebra(f, 3, &[0, 1, 2]);
    let t = Triple::new("full", f, 3, &g, &g, &[]).unwrap();
    let r = check_fatness(&t, &small(), tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Certified);
    assert!(r.score.is_infinite());
    assert!(r.notes.iter().any(|n| n.contains("vacuous")));
    let json = r.to_json();
    assert!(json.contains("\"score\": null"));
    assert_eq!(CertReport::from_json(&json).unwrap(), r);
}

#[test]
fn part2_verdicts() {
    let e = catalog::t1s3_product().unwrap();
    let r = certify_part2(&e.triple, &e.base_point, &small(), tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Certified, "{r:?}");

    let r = certify_part2(&e.triple, &e.triple.zero(), &small(), tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted);
    r.validate().unwrap();

    let s2 = catalog::t1_sphere(2).unwrap();
    let r = certify_part2(&s2.triple, &s2.base_point, &small(), tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Certified);
}

#[test]
fn identity_point_is_flat_and_nearby_points_are_not() {
    let e = catalog::t1s3_product().unwrap();
    let t = &e.triple;
    let r = point_positivity(t, &GroupElement::identity(t.field(), 2), &small(), tols()).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted);
    let w = r.witness.as_ref().unwrap();
    assert!(t.project_h(&w.w).norm() < 1e-12);

    let scan = scan_along_a(t, &e.base_point, &[0.0, 0.3], &small(), tols()).unwrap();
    assert_eq!(scan.len(), 2);
    assert_eq!(scan[0].verdict, Verdict::Refuted);
    assert_eq!(scan[0].s, Some(0.0));
    assert_eq!(scan[1].verdict, Verdict::Certified, "{:?}", scan[1]);
    assert!(scan[1].score > 1e-4);
}

#[test]
fn scan_rejects_non_finite_parameters() {
    let e = catalog::t1s3_product().unwrap();
    assert!(scan_along_a(&e.triple, &e.base_point, &[f64::NAN], &small(), tols()).is_err());
}

#[test]
fn f_and_second_derivative_on_t1s3() {
    let e = catalog::t1s3_product().unwrap();
    let t = &e.triple;
    let z = pair(Quaternion::J, Quaternion::J).scale(1.0 / R2);
    let w = pair(Quaternion::J, -Quaternion::J).scale(1.0 / R2);
    assert_eq!(f_of_s(t, &z, &w, &e.base_point, 0.0).unwrap(), 0.0);
    assert!(f_of_s(t, &z, &w, &e.base_point, 0.2).unwrap() > 0.0);
    // [A, W] = (k, k), so [Zʰ, [A, W]ʰ] = (2i, 2i)/√2 with squared norm 4
    let d = derivative_test(t, &z, &w, &e.base_point).unwrap();
    assert!((d.analytic - 4.0).abs() < 1e-12);
    assert!(d.relative_error() < 1e-4, "{d:?}");
    assert!(!d.flagged());

    // A ∈ k maps W into p, so [A, W]ʰ = 0
    let ak = pair(Quaternion::I, Quaternion::I).scale(1.0 / R2);
    let zi = pair(Quaternion::K, Quaternion::K).scale(1.0 / R2);
    let wi = pair(Quaternion::K, -Quaternion::K).scale(1.0 / R2);
    let d = derivative_test(t, &zi, &wi, &ak).unwrap();
    assert!(d.analytic < 1e-28 && d.numeric.abs() < 1e-12, "{d:?}");
}

#[test]
fn derivative_test_preconditions() {
    let e = catalog::t1s3_product().unwrap();
    let t = &e.triple;
    let z = pair(Quaternion::J, Quaternion::J).scale(1.0 / R2);
    let w = pair(Quaternion::K, -Quaternion::K).scale(1.0 / R2);
    assert!(matches!(f_of_s(t, &z, &w, &e.base_point, 0.1), Err(Error::Precondition(_))));
    assert!(derivative_test(t, &z, &z, &e.base_point).is_err());
}

#[test]
fn reports_are_deterministic() {
    let e = catalog::m_kl(2, 1, 1).unwrap();
    let g = group_exp(&e.base_point, 0.2);
    let a = point_positivity(&e.triple, &g, &small(), tols()).unwrap().to_json();
    let b = point_positivity(&e.triple, &g, &StartBudget { workers: Some(2), ..small() }, tols()).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn validate_catches_inconsistent_reports() {
    let e = catalog::t1s3_product().unwrap();
    let mut r = certify_part3(&e.triple, &e.base_point, tols()).unwrap();
    r.score = 1e-9;
    assert!(r.validate().is_err());
    r.verdict = Verdict::Refuted;
    assert!(r.validate().is_err());
    r.verdict = Verdict::Inconclusive;
    assert!(r.validate().is_ok());
    assert!(CertReport::from_json("{}").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn part3_is_homogeneous_in_a(c in 0.05..20.0f64) {
        for e in [catalog::t1s3_product().unwrap(), catalog::m_kl(2, 1, -1).unwrap()] {
            let base = certify_part3(&e.triple, &e.base_point, tols()).unwrap();
            let scaled = certify_part3(&e.triple, &e.base_point.scale(c), tols()).unwrap();
            prop_assert_eq!(base.verdict, scaled.verdict);
            prop_assert!((scaled.score - c * base.score).abs() < 1e-12 * c.max(1.0));
        }
    }

    #[test]
    fn part3_is_basis_independent(seed in any::<u64>()) {
        let e = catalog::sp_example(2).unwrap();
        let t = e.triple.rebased(seed);
        let a = certify_part3(&e.triple, &e.base_point, tols()).unwrap();
        let b = certify_part3(&t, &e.base_point, tols()).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.score - b.score).abs() < 1e-12);
    }
}
