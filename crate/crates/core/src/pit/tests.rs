use super::*;
use crate::mpoly::PolyRing;
use crate::ring::gf_make_field;

fn ring(m: u32, n: usize) -> PolyRing<Gf> {
    let f = gf_make_field(m, None).unwrap();
    let q = f.size();
    PolyRing::new(f, n, q, false).unwrap()
}

fn p(r: &PolyRing<Gf>, s: &str) -> MPoly<Gf> {
    r.parse(s).unwrap()
}

/// P_{2k} for the hyperbolic plane over GF(2).
fn plane(r: &PolyRing<Gf>) -> Vec<Generator> {
    vec![
        Generator::new("P20", p(r, "x1*x2")),
        Generator::new("P21", p(r, "x1^2*x2 + x1*x2^2")),
        Generator::new("P22", p(r, "x1^4*x2 + x1*x2^4")),
        Generator::new("P23", p(r, "x1^8*x2 + x1*x2^8")),
    ]
}

#[test]
fn distinguishes_frobenius_from_identity() {
    let r = ring(1, 1);
    let v = pit_equal(&p(&r, "x1"), &p(&r, "x1^2"), &PitConfig::default()).unwrap();
    assert!(!v.equal);
    let c = v.counterexample.unwrap();
    assert!(c[0] > 1);
    assert_eq!(v.field_bits, 16);
}

#[test]
fn equal_inputs_short_circuit() {
    let r = ring(2, 2);
    let a = p(&r, "x1 + x2").square().unwrap();
    let v = pit_equal(&a, &p(&r, "x1^2 + x2^2"), &PitConfig::default()).unwrap();
    assert_eq!((v.trials, v.error_bound, v.total_error()), (0, 0.0, 0.0));
    assert_eq!((v.trials, v.error_bound), (0, 0.0));
}

#[test]
fn checks_an_identity_pointwise() {
    // (x + y)^q = x^q + y^q, tested through evaluation only
    let r = ring(2, 2);
    let lhs = p(&r, "x1 + x2").pow(4).unwrap();
    let cfg = PitConfig { trials: 20, ..PitConfig::default() };
    let v = pit_check(r.coeffs(), 2, 4, &cfg, |e, pt| {
        let t = e.target();
        Ok(Some(lhs.evaluate(e, pt)? == t.pow_bits(pt[0], 4) ^ t.pow_bits(pt[1], 4)))
    })
    .unwrap();
    assert!(v.equal);
    assert_eq!(v.trials, 20);
    assert!(v.total_error() < 1e-60);
}

#[test]
fn rejects_degrees_beyond_the_field() {
    let r = ring(1, 1);
    let cfg = PitConfig { ext_bits: 4, ..PitConfig::default() };
    let big = p(&r, "x1^100");
    assert!(matches!(pit_equal(&big, &r.zero(), &cfg), Err(Error::DegreeTooLarge { .. })));
}

#[test]
fn seeds_fix_the_sample_points() {
    let f = gf_make_field(16, None).unwrap();
    assert_eq!(sample_point(&f, 9, 3, 4), sample_point(&f, 9, 3, 4));
    assert_ne!(sample_point(&f, 9, 3, 4), sample_point(&f, 9, 4, 4));
}

#[test]
fn expresses_a_product_in_generators() {
    let r = ring(1, 2);
    let g = plane(&r);
    let target = g[0].poly.square().unwrap().mul(&g[2].poly).unwrap();
    let sol = express_in_generators(&AnsatzProblem::new(target.clone(), g[..2].to_vec())).unwrap();
    assert_eq!(sol.expr.to_text(), "P21^3 + P20^3*P21");
    assert_eq!(sol.nullity, 0);
    assert_eq!(sol.certificate, Certificate::Symbolic);
    let polys: Vec<_> = g[..2].iter().map(|x| x.poly.clone()).collect();
    assert_eq!(sol.expr.expand(&polys).unwrap(), target);
    assert_eq!(sol.expr.to_map().get("P21^3").map(String::as_str), Some("0x1"));
}

#[test]
fn reports_missing_representations() {
    let r = ring(1, 1);
    let gens = vec![Generator::new("Y", p(&r, "x1^2"))];
    let e = express_in_generators(&AnsatzProblem::new(p(&r, "x1"), gens)).unwrap_err();
    assert!(matches!(e, Error::AnsatzNotFound { .. }));
}

#[test]
fn works_over_an_extension_field() {
    let r = ring(2, 1);
    let w = 2u32;
    let target = p(&r, "x1^3").scale(&w).add(&p(&r, "x1")).unwrap();
    let gens = vec![Generator::new("Y", p(&r, "x1")), Generator::new("Z", p(&r, "x1^3"))];
    let sol = express_in_generators(&AnsatzProblem::new(target, gens)).unwrap();
    assert_eq!(sol.expr.to_text(), "0x2*Z + Y");
}

#[test]
fn finds_the_frobenius_relation() {
    // P23 P21^2 = P21^5 + P22^3
    let r = ring(1, 2);
    let g = plane(&r);
    let rel = find_rational_relation(&g[3].poly, &g[1..3], 6, 1).unwrap();
    assert_eq!(rel.denominator.to_text(), "P21^2");
    assert_eq!(rel.numerator.to_text(), "P22^3 + P21^5");
    assert_eq!(rel.certificate, Certificate::Symbolic);
}
