//! End-to-end checks of the verifiers against values computed directly.

use char2_invariants::forms::{FormKind, FormSpec};
use char2_invariants::identities::{self as id, Mode, DEFAULT_SEED};
use char2_invariants::invariants::{orth_family_gf, ps_family_gf, restricted_family_gf};
use char2_invariants::ring::gf_make_field;

fn spec(kind: FormKind, nu: usize, m: u32) -> FormSpec {
    FormSpec::new(kind, nu, gf_make_field(m, None).unwrap(), None).unwrap()
}

#[test]
fn closed_form_for_p22_by_direct_expansion() {
    let fam = orth_family_gf(&spec(FormKind::OrthEven, 1, 1), 2).unwrap();
    let [p0, p1, p2] = [0, 1, 2].map(|k| fam.member(k).unwrap().clone());
    let lhs = p0.square().unwrap().mul(&p2).unwrap();
    let rhs = p1.pow(3).unwrap().add(&p0.pow(3).unwrap().mul(&p1).unwrap()).unwrap();
    assert!(lhs.sub(&rhs).unwrap().is_zero());
}

#[test]
fn main_identity_at_q4() {
    let r = id::verify_main_identity(&spec(FormKind::OrthEven, 1, 2), Mode::Auto, 32, DEFAULT_SEED).unwrap();
    assert!(r.passed());
    // P0* = P20^q
    assert_eq!(r.witnesses["denominator"], "P20^4");
}

#[test]
fn s_times_s_plus_pf_is_p20_p20q() {
    let s = spec(FormKind::OrthEven, 1, 1);
    let w = id::extract_s(&s).unwrap();
    let pf = w.pf_p.reduce(s.field()).unwrap();
    let prod = w.s_mod2.mul(&w.s_mod2.add(&pf).unwrap()).unwrap();
    let fam = orth_family_gf(&s, 0).unwrap();
    let p0 = fam.member(0).unwrap();
    assert_eq!(prod, p0.mul(&p0.twist(1).unwrap()).unwrap());
    assert_eq!(prod.to_string(), "x1^3*x2^3");
}

#[test]
fn odd_pseudo_symplectic_split_at_q4() {
    let s = spec(FormKind::PsOdd, 1, 2);
    let bar = ps_family_gf(&s, 3).unwrap();
    let low = restricted_family_gf(&s, 3).unwrap();
    let x3 = bar.ring().var(2);
    for k in 1..=3u32 {
        let diff = bar.member(k as usize).unwrap().sub(low.member(k as usize).unwrap()).unwrap();
        assert_eq!(diff, x3.pow(4u64.pow(k) + 1).unwrap());
    }
    let r = id::verify_thm_s1(&s, DEFAULT_SEED).unwrap();
    assert!(r.passed());
    assert_eq!(r.witnesses["P23"], "(P22^5 + P21^17) / (P21^4)");
}

#[test]
fn even_pseudo_symplectic_at_q4() {
    let r = id::verify_thm_s2(&spec(FormKind::PsEven, 0, 2), Mode::Auto, 16, DEFAULT_SEED).unwrap();
    assert!(r.passed());
    assert_eq!(r.witnesses["K"], "x2^2");
}

#[test]
fn verifiers_reject_the_wrong_form() {
    let even = spec(FormKind::OrthEven, 1, 1);
    assert!(id::verify_thm_second(&even, 0).is_err());
    assert!(id::verify_thm_s1(&even, 0).is_err());
    assert!(id::verify_thm_s2(&even, Mode::Auto, 1, 0).is_err());
    assert!(id::verify_mainlemma(&spec(FormKind::PsOdd, 1, 1), 0).is_err());
    assert!(id::verify_nodd(4, 1, Mode::Auto, 0).is_err());
}

#[test]
fn alternate_form_reports_alpha() {
    let s = FormSpec::new(FormKind::OrthEvenAlpha, 2, gf_make_field(1, None).unwrap(), Some(1)).unwrap();
    let r = id::verify_pftimes(&s, Mode::Auto, 16, DEFAULT_SEED).unwrap();
    assert!(r.passed());
    assert_eq!(r.params.alpha.as_deref(), Some("0x1"));
}
