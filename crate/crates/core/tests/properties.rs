use char2_invariants::forms::{apply_action, FormKind, FormSpec, GroupKind, Sampler};
use char2_invariants::identities::sqrt_det;
use char2_invariants::invariants::{orth_family_gf, ps_family_gf};
use char2_invariants::linalg::{det_bareiss, det_cofactor, det_gauss, pfaffian, Matrix};
use char2_invariants::mpoly::{MPoly, PolyRing};
use char2_invariants::pit::{pit_equal, PitConfig};
use char2_invariants::ring::{gf_make_field, Embedding, Gf, Integers, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;

fn alternate(n: usize, entries: &[i64]) -> Matrix<BigInt> {
    let mut m = Matrix::zeros(&Integers, n, n);
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in i + 1..n {
            let v = BigInt::from(*it.next().unwrap());
            m.set(i, j, v.clone());
            m.set(j, i, -v);
        }
    }
    m
}

fn poly(ring: &PolyRing<Gf>, terms: &[(u32, [u64; 3])]) -> MPoly<Gf> {
    let size = ring.coeffs().size() as u32;
    let mut acc = ring.zero();
    for (c, e) in terms {
        let mut t = ring.constant(c % size);
        for (v, &k) in e.iter().enumerate() {
            t = t.mul(&ring.var(v).pow(k).unwrap()).unwrap();
        }
        acc = acc.add(&t).unwrap();
    }
    acc
}

fn terms() -> impl Strategy<Value = Vec<(u32, [u64; 3])>> {
    prop::collection::vec((1u32..16, [0u64..3, 0u64..3, 0u64..3]), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pfaffian_squares_to_the_determinant(half in 1usize..5, entries in prop::collection::vec(-9i64..=9, 1..29)) {
        let m = alternate(2 * half, &entries);
        let pf = pfaffian(&Integers, &m).unwrap();
        prop_assert_eq!(&pf * &pf, det_bareiss(&m).unwrap());
    }

    #[test]
    fn bareiss_agrees_with_cofactors(n in 1usize..6, entries in prop::collection::vec(-20i64..=20, 36)) {
        let m = Matrix::from_fn(n, n, |i, j| BigInt::from(entries[i * 6 + j]));
        prop_assert_eq!(det_bareiss(&m).unwrap(), det_cofactor(&Integers, &m).unwrap());
    }

    #[test]
    fn field_inverse_and_frobenius(m in 1u32..9, a in 1u32..256, b in 0u32..256) {
        let k = gf_make_field(m, None).unwrap();
        let mask = (k.size() - 1) as u32;
        let (a, b) = ((a & mask).max(1), b & mask);
        prop_assert_eq!(k.mul_bits(a, k.inv_bits(a).unwrap()), 1);
        // squaring is additive in characteristic 2
        prop_assert_eq!(k.mul_bits(a ^ b, a ^ b), k.mul_bits(a, a) ^ k.mul_bits(b, b));
        prop_assert_eq!(k.pow_bits(a, k.size() as u128), a);
    }

    #[test]
    fn twisting_is_a_ring_map(f in terms(), g in terms(), r in 0u32..3) {
        let ring = PolyRing::new(gf_make_field(2, None).unwrap(), 3, 4, false).unwrap();
        let (f, g) = (poly(&ring, &f), poly(&ring, &g));
        let lhs = f.mul(&g).unwrap().twist(r).unwrap();
        prop_assert_eq!(lhs, f.twist(r).unwrap().mul(&g.twist(r).unwrap()).unwrap());
        prop_assert_eq!(f.twist(1).unwrap(), f.pow(4).unwrap());
    }

    #[test]
    fn evaluation_is_a_ring_map(f in terms(), g in terms(), pt in [any::<u32>(), any::<u32>(), any::<u32>()]) {
        let k = gf_make_field(1, None).unwrap();
        let ring = PolyRing::new(k.clone(), 3, 2, false).unwrap();
        let emb = Embedding::new(&k, 12).unwrap();
        let pt: Vec<u32> = pt.iter().map(|v| v & 0xfff).collect();
        let (f, g) = (poly(&ring, &f), poly(&ring, &g));
        let big = emb.target();
        let prod = f.mul(&g).unwrap().evaluate(&emb, &pt).unwrap();
        prop_assert_eq!(prod, big.mul_bits(f.evaluate(&emb, &pt).unwrap(), g.evaluate(&emb, &pt).unwrap()));
    }

    #[test]
    fn sqrt_det_squares_back(m in 1usize..5, diag in prop::collection::vec(terms(), 4), off in prop::collection::vec(terms(), 6)) {
        let ring = PolyRing::new(gf_make_field(1, None).unwrap(), 3, 2, false).unwrap();
        let mut mat = Matrix::zeros(&ring, m, m);
        let mut roots = Vec::new();
        let mut k = 0;
        for i in 0..m {
            let r = poly(&ring, &diag[i]);
            mat.set(i, i, r.square().unwrap());
            roots.push(Some(r));
            for j in i + 1..m {
                let g = poly(&ring, &off[k]);
                k += 1;
                mat.set(i, j, g.clone());
                mat.set(j, i, g);
            }
        }
        let f = sqrt_det(&ring, &mat, &roots).unwrap();
        prop_assert_eq!(f.square().unwrap(), ring.det(&mat).unwrap());
    }

    #[test]
    fn identical_polynomials_pass_identity_testing(f in terms(), seed in any::<u64>()) {
        let ring = PolyRing::new(gf_make_field(1, None).unwrap(), 3, 2, false).unwrap();
        let f = poly(&ring, &f);
        let g = f.add(&ring.zero()).unwrap();
        let cfg = PitConfig { trials: 8, seed, ..PitConfig::default() };
        prop_assert!(pit_equal(&f, &g, &cfg).unwrap().equal);
        let h = f.add(&ring.var(0).pow(5).unwrap()).unwrap();
        prop_assert!(!pit_equal(&f, &h, &cfg).unwrap().equal);
    }
}

#[test]
fn sampled_elements_fix_the_families() {
    let k = gf_make_field(1, None).unwrap();
    let cases = [
        (FormSpec::new(FormKind::OrthEven, 2, k.clone(), None).unwrap(), GroupKind::Orthogonal),
        (FormSpec::new(FormKind::PsEven, 1, k.clone(), None).unwrap(), GroupKind::PseudoSymplectic),
    ];
    for (spec, group) in cases {
        let fam = match group {
            GroupKind::Orthogonal => orth_family_gf(&spec, 3).unwrap(),
            _ => ps_family_gf(&spec, 3).unwrap(),
        };
        let mut sampler = Sampler::new(&spec, group, 11).unwrap();
        for _ in 0..20 {
            let t = sampler.sample().unwrap();
            for p in fam.members() {
                assert_eq!(&apply_action(&t, p).unwrap(), p, "{spec}");
            }
        }
    }
}

#[test]
fn action_composes() {
    // σ_T σ_S = σ_{TS}: σ_S f = f(X S), then X -> X T gives f(X T S)
    let k = gf_make_field(1, None).unwrap();
    let spec = FormSpec::new(FormKind::OrthEven, 2, k.clone(), None).unwrap();
    let fam = orth_family_gf(&spec, 1).unwrap();
    let f = fam.member(1).unwrap().add(&fam.ring().var(0)).unwrap();
    let mut sampler = Sampler::new(&spec, GroupKind::GA, 5).unwrap();
    for _ in 0..10 {
        let s = sampler.sample().unwrap();
        let t = sampler.sample().unwrap();
        let ts = char2_invariants::linalg::mat_mul(&k, &t, &s).unwrap();
        let lhs = apply_action(&t, &apply_action(&s, &f).unwrap()).unwrap();
        assert_eq!(lhs, apply_action(&ts, &f).unwrap());
        assert_ne!(det_gauss(&k, &ts).unwrap(), 0);
    }
}
