use super::*;
use crate::linalg::mat_mul;
use crate::ring::gf_make_field;

fn f(m: u32) -> Gf {
    gf_make_field(m, None).unwrap()
}

fn spec(kind: FormKind, nu: usize, m: u32) -> FormSpec {
    FormSpec::new(kind, nu, f(m), None).unwrap()
}

fn mat(rows: Vec<Vec<u32>>) -> Matrix<u32> {
    Matrix::from_rows(rows).unwrap()
}

#[test]
fn form_matrices() {
    assert_eq!(form_matrix(&spec(FormKind::OrthEven, 1, 1)), mat(vec![vec![0, 1], vec![0, 0]]));
    assert_eq!(form_matrix(&spec(FormKind::PsEven, 0, 1)), mat(vec![vec![0, 1], vec![1, 1]]));
    assert_eq!(
        form_matrix(&spec(FormKind::OrthOdd, 1, 1)),
        mat(vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 1]])
    );
    let alpha = FormSpec::new(FormKind::OrthEvenAlpha, 2, f(1), Some(1)).unwrap();
    assert_eq!(
        form_matrix(&alpha),
        mat(vec![vec![0, 1, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]])
    );
    assert_eq!(spec(FormKind::PsOdd, 2, 1).n(), 5);
}

#[test]
fn alpha_validation() {
    assert_eq!(FormSpec::new(FormKind::OrthEvenAlpha, 1, f(1), Some(0)).unwrap_err(), Error::InvalidAlpha(0));
    // omega + omega^2 = 1 in GF(4)
    assert_eq!(FormSpec::new(FormKind::OrthEvenAlpha, 1, f(2), Some(1)).unwrap_err(), Error::InvalidAlpha(1));
    assert!(FormSpec::new(FormKind::OrthEvenAlpha, 1, f(2), Some(2)).is_ok());
    assert!(FormSpec::new(FormKind::OrthEven, 1, f(1), Some(1)).is_err());
    assert!(FormSpec::new(FormKind::OrthEven, 0, f(1), None).is_err());
}

#[test]
fn spec_text_round_trip() {
    let s = FormSpec::new(FormKind::OrthEvenAlpha, 2, f(2), Some(2)).unwrap();
    let text = s.to_string();
    assert_eq!(text, "form:orth-even-alpha;nu=2;q=GF(2^2):modulus=0x7;alpha=0x2");
    assert_eq!(text.parse::<FormSpec>().unwrap(), s);
    assert_eq!("form:ps-even;nu=0;q=2".parse::<FormSpec>().unwrap(), spec(FormKind::PsEven, 0, 1));
    assert!("form:bogus;nu=1;q=2".parse::<FormSpec>().is_err());
}

#[test]
fn bilinearization() {
    let b = bilinearize(&spec(FormKind::OrthEven, 1, 1)).unwrap();
    assert_eq!(b.a, mat(vec![vec![0, 1], vec![1, 0]]));
    assert_eq!(b.abar_int.get(1, 0).to_string(), "-1");
    assert_eq!(b.abar_int.get(0, 1).to_string(), "1");
    let alpha = FormSpec::new(FormKind::OrthEvenAlpha, 1, f(1), Some(1)).unwrap();
    let b = bilinearize(&alpha).unwrap();
    assert_eq!(b.a_int.get(0, 0).to_string(), "2*alpha");
    assert_eq!(b.a_int.get(0, 1).to_string(), "1");
    assert_eq!(b.a_int.get(1, 1).to_string(), "2*alpha");
    assert!(matches!(bilinearize(&spec(FormKind::PsOdd, 1, 1)), Err(Error::KindMismatch(_))));
}

#[test]
fn membership_examples() {
    let s = spec(FormKind::OrthEven, 1, 1);
    let id = Matrix::identity(s.field(), 2);
    assert!(is_member(&id, &s, GroupKind::Orthogonal).unwrap());
    assert!(is_member(&mat(vec![vec![0, 1], vec![1, 0]]), &s, GroupKind::Orthogonal).unwrap());
    assert!(!is_member(&mat(vec![vec![1, 1], vec![0, 1]]), &s, GroupKind::Orthogonal).unwrap());
    assert!(is_member(&mat(vec![vec![1, 1], vec![0, 1]]), &s, GroupKind::GA).unwrap());
    assert!(!is_member(&mat(vec![vec![1, 1], vec![1, 1]]), &s, GroupKind::GA).unwrap());
    assert!(is_member(&id, &s, GroupKind::PseudoSymplectic).is_err());
    assert!(is_member(&Matrix::identity(s.field(), 3), &s, GroupKind::Orthogonal).is_err());
}

#[test]
fn small_group_orders() {
    let s = spec(FormKind::OrthEven, 1, 1);
    assert_eq!(enumerate_group(&s, GroupKind::Orthogonal).unwrap().len(), 2);
    assert_eq!(enumerate_group(&s, GroupKind::GA).unwrap().len(), 6);
    let ps = spec(FormKind::PsEven, 0, 1);
    let elems = enumerate_group(&ps, GroupKind::PseudoSymplectic).unwrap();
    assert!(is_closed(&elems, ps.field()).unwrap());
    // |O_3(F_2)| = |Sp_2(F_2)| = 6
    let o3 = spec(FormKind::OrthOdd, 1, 1);
    assert_eq!(enumerate_group(&o3, GroupKind::Orthogonal).unwrap().len(), 6);
    assert!(matches!(enumerate_group(&spec(FormKind::OrthEven, 3, 1), GroupKind::GA), Err(Error::TooLarge(_))));
}

#[test]
fn orthogonal_inside_ga() {
    for s in [spec(FormKind::OrthEven, 1, 2), spec(FormKind::OrthEven, 2, 1)] {
        let o = enumerate_group(&s, GroupKind::Orthogonal).unwrap();
        assert!(is_closed(&o, s.field()).unwrap());
        for t in &o {
            assert!(is_member(t, &s, GroupKind::GA).unwrap());
        }
    }
    let a = FormSpec::new(FormKind::OrthEvenAlpha, 1, f(2), Some(2)).unwrap();
    for t in enumerate_group(&a, GroupKind::Orthogonal).unwrap() {
        assert!(is_member(&t, &a, GroupKind::GA).unwrap());
    }
}

fn quadratic(s: &FormSpec) -> MPoly<Gf> {
    let ring = s.field_ring().unwrap();
    let g = form_matrix(s);
    let x = ring.vars();
    let mut acc = ring.zero();
    for i in 0..s.n() {
        for j in 0..s.n() {
            if *g.get(i, j) != 0 {
                acc = acc.add(&x[i].mul(&x[j]).unwrap().scale(g.get(i, j))).unwrap();
            }
        }
    }
    acc
}

#[test]
fn membership_iff_quadratic_form_is_fixed() {
    for m in [1, 2] {
        let s = spec(FormKind::OrthEven, 1, m);
        let p0 = quadratic(&s);
        let size = s.q() as u32;
        let mut members = 0;
        for idx in 0..(size.pow(4)) {
            let t = mat(vec![
                vec![idx % size, (idx / size) % size],
                vec![(idx / size / size) % size, idx / size / size / size],
            ]);
            if det_gauss(s.field(), &t).unwrap() == 0 {
                continue;
            }
            let fixed = apply_action(&t, &p0).unwrap() == p0;
            let member = is_member(&t, &s, GroupKind::Orthogonal).unwrap();
            assert_eq!(fixed, member, "T = {t:?}");
            members += member as usize;
        }
        assert_eq!(members as u64, 2 * (s.q() - 1));
    }
}

#[test]
fn action_is_a_homomorphism() {
    let s = spec(FormKind::OrthEven, 1, 1);
    let ring = s.field_ring().unwrap();
    let (x1, x2) = (ring.var(0), ring.var(1));
    let swap = mat(vec![vec![0, 1], vec![1, 0]]);
    let p = x1.mul(&x2).unwrap();
    assert_eq!(apply_action(&swap, &p).unwrap(), p);
    assert_eq!(apply_action(&Matrix::identity(s.field(), 2), &x1).unwrap(), x1);
    let t = mat(vec![vec![1, 1], vec![0, 1]]);
    // σ_T(X2) is the second column: X1 + X2
    assert_eq!(apply_action(&t, &x2).unwrap(), x1.add(&x2).unwrap());
    let a = x1.pow(3).unwrap().add(&x2).unwrap();
    let b = x1.mul(&x2).unwrap().add(&ring.one()).unwrap();
    let lhs = apply_action(&t, &a.mul(&b).unwrap()).unwrap();
    let rhs = apply_action(&t, &a).unwrap().mul(&apply_action(&t, &b).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn sampling_is_reproducible_and_closed() {
    let s = spec(FormKind::OrthEven, 2, 1);
    let mut a = Sampler::new(&s, GroupKind::Orthogonal, 7).unwrap();
    let mut b = Sampler::new(&s, GroupKind::Orthogonal, 7).unwrap();
    for _ in 0..5 {
        let (x, y) = (a.sample().unwrap(), b.sample().unwrap());
        assert_eq!(x, y);
        assert!(is_member(&x, &s, GroupKind::Orthogonal).unwrap());
        let z = a.sample().unwrap();
        b.sample().unwrap();
        assert!(is_member(&mat_mul(s.field(), &x, &z).unwrap(), &s, GroupKind::Orthogonal).unwrap());
    }
    let two = spec(FormKind::OrthEven, 1, 1);
    let t = sample_element(&two, GroupKind::Orthogonal, 3).unwrap();
    assert!(t == Matrix::identity(two.field(), 2) || t == mat(vec![vec![0, 1], vec![1, 0]]));
    assert!(Sampler::new(&spec(FormKind::OrthEven, 4, 1), GroupKind::Orthogonal, 0).is_err());
}

#[test]
fn odd_orthogonal_block_shape() {
    let s = spec(FormKind::OrthOdd, 1, 1);
    let group = enumerate_group(&s, GroupKind::Orthogonal).unwrap();
    for t in &group {
        assert!(check_block_shape(t, &s).unwrap());
    }
    let bad = mat(vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1]]);
    assert!(!check_block_shape(&bad, &s).unwrap());
    assert!(!is_member(&bad, &s, GroupKind::Orthogonal).unwrap());
    assert!(check_block_shape(&Matrix::identity(s.field(), 3), &spec(FormKind::PsOdd, 1, 1)).is_err());
}

#[test]
fn pseudo_symplectic_members_fix_the_last_variable() {
    for m in [1, 2] {
        let s = spec(FormKind::PsOdd, 1, m);
        let ring = s.field_ring().unwrap();
        let x3 = ring.var(2);
        let group = enumerate_group(&s, GroupKind::PseudoSymplectic).unwrap();
        assert!(!group.is_empty());
        for t in &group {
            assert_eq!(apply_action(t, &x3).unwrap(), x3);
        }
    }
}

#[test]
fn element_export() {
    let s = spec(FormKind::OrthEven, 1, 1);
    let text = format_element(&mat(vec![vec![0, 1], vec![1, 0]]), &s);
    assert_eq!(text, "matrix 2x2\nform:orth-even;nu=1;q=GF(2^1):modulus=0x3\n0x0 | 0x1\n0x1 | 0x0\n");
}
