//! The pseudo-symplectic forms: the odd case reduces to the symplectic
//! invariants plus `X_n`, the even case rests on a square root of a Gram
//! determinant.

use std::time::Instant;

use rand::Rng as _;

use super::orthogonal::{frobenius_relation, gen_name, moore_degree, spec_params};
use super::{eval_matrix, rng, IdentityReport, Method, Mode, Params};
use crate::error::{Error, Result};
use crate::forms::{apply_action, enumerate_group, format_element, FormKind, FormSpec, GroupKind};
use crate::invariants::{k_matrix, moore_det, ps_family_gf, restricted_family_gf, s_gram, s_gram_shifted};
use crate::linalg::{det_gauss, pfaffian, Matrix};
use crate::mpoly::{MPoly, PolyRing};
use crate::pit::{express_in_generators, pit_check, AnsatzProblem, Certificate, Generator, PitConfig};
use crate::ring::{Gf, Ring};

/// A square root of `det(M)` for a symmetric `M` over `GF(q)[X]` whose
/// diagonal entries are squares, `roots[i]^2 = M[i][i]`.
///
/// Peels off one nonzero diagonal entry at a time: `det(M) = f_ii^2
/// det(M_ii) + det(M')`, `M'` being `M` with that entry cleared, so `f =
/// f_ii f_1 + f_2`. With no nonzero diagonal left `M` is alternate and `f`
/// is its Pfaffian.
pub fn sqrt_det(ring: &PolyRing<Gf>, m: &Matrix<MPoly<Gf>>, roots: &[Option<MPoly<Gf>>]) -> Result<MPoly<Gf>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if roots.len() != n {
        return Err(Error::DimensionMismatch(format!("{} roots for a {n}x{n} matrix", roots.len())));
    }
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j) != m.get(j, i) {
                return Err(Error::DimensionMismatch("matrix is not symmetric".into()));
            }
        }
    }
    peel(ring, m, roots)
}

fn peel(ring: &PolyRing<Gf>, m: &Matrix<MPoly<Gf>>, roots: &[Option<MPoly<Gf>>]) -> Result<MPoly<Gf>> {
    let n = m.rows();
    if n == 0 {
        return Ok(ring.one());
    }
    let Some(i) = (0..n).find(|&i| !m.get(i, i).is_zero()) else {
        return pfaffian(ring, m);
    };
    let root = match &roots[i] {
        Some(r) if r.square()? == *m.get(i, i) => r,
        _ => return Err(Error::NotAPerfectSquareStructure(i)),
    };
    let rest: Vec<Option<MPoly<Gf>>> = roots.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
    let f1 = peel(ring, &m.minor(i, i), &rest)?;
    let mut cleared = m.clone();
    cleared.set(i, i, ring.zero());
    let f2 = peel(ring, &cleared, roots)?;
    root.mul(&f1)?.add(&f2)
}

fn random_poly(ring: &PolyRing<Gf>, r: &mut impl rand::Rng) -> Result<MPoly<Gf>> {
    let size = ring.coeffs().size() as u32;
    let mut acc = ring.zero();
    for _ in 0..r.gen_range(1..=3) {
        let mut t = ring.constant(r.gen_range(1..size));
        for v in 0..ring.nvars() {
            t = t.mul(&ring.var(v).pow(r.gen_range(0..=2))?)?;
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// `sqrt_det` squared against `det` on random symmetric matrices of sizes
/// `1..=4` over `GF(q)[x1, x2, x3]` with square diagonals (about a quarter
/// of them zero), plus the closed form `f11 f22 + g` for `m = 2`.
pub fn verify_sqrt_det(field: &Gf, trials: usize, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    let params = Params { q: Some(field.size()), trials: Some(trials), seed, ..Params::default() };
    let mut rep = IdentityReport::new("pfaffian-sqrt", params);
    let ring = PolyRing::new(field.clone(), 3, field.size(), false)?;
    let mut r = rng(seed, 40);
    let mut good = 0;
    for t in 0..trials {
        let m = 1 + t % 4;
        let mut roots = Vec::with_capacity(m);
        let mut mat = Matrix::zeros(&ring, m, m);
        for i in 0..m {
            let root = if r.gen_bool(0.25) { ring.zero() } else { random_poly(&ring, &mut r)? };
            mat.set(i, i, root.square()?);
            roots.push(Some(root));
            for j in i + 1..m {
                let g = random_poly(&ring, &mut r)?;
                mat.set(i, j, g.clone());
                mat.set(j, i, g);
            }
        }
        if sqrt_det(&ring, &mat, &roots)?.square()? == ring.det(&mat)? {
            good += 1;
        }
    }
    rep.check_with("f^2 = det on random structured matrices", Method::Symbolic, good == trials, format!("{good} of {trials}"));
    let [a, b, g] = [ring.var(0), ring.var(1), ring.var(2)];
    let m2 = Matrix::from_rows(vec![vec![a.square()?, g.clone()], vec![g.clone(), b.square()?]])?;
    let f = sqrt_det(&ring, &m2, &[Some(a.clone()), Some(b.clone())])?;
    rep.check("m = 2 gives f11 f22 + g", Method::Symbolic, f == a.mul(&b)?.add(&g)?);
    rep.witness("m = 2", &f);
    Ok(rep.finish(start))
}

/// The odd pseudo-symplectic case: `P̄_n0 = X_n^2`, `P̄_nk = P_{n-1,k} +
/// X_n^(q^k + 1)`, the enumerated group fixes `X_n` and every `P̄_nk`, and
/// `P_{n-1,n}` is rational in `P_{n-1,1}, .., P_{n-1,n-1}`.
pub fn verify_thm_s1(spec: &FormSpec, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    if spec.kind() != FormKind::PsOdd {
        return Err(Error::KindMismatch(format!("needs the odd pseudo-symplectic form, got {}", spec.kind())));
    }
    let n = spec.n();
    let q = spec.q();
    let mut rep = IdentityReport::new("s1", spec_params(spec, None, seed));
    let bar = ps_family_gf(spec, n)?;
    let low = restricted_family_gf(spec, n)?;
    let xn = bar.ring().var(n - 1);
    rep.check("P_n0 = X_n^2", Method::Symbolic, *bar.member(0)? == xn.square()?);
    let mut split = true;
    for k in 1..=n {
        let e = q.pow(k as u32) + 1;
        split &= *bar.member(k)? == low.member(k)?.add(&xn.pow(e)?)?;
    }
    rep.check("P_nk = P_{n-1,k} + X_n^(q^k+1) for k = 1..n", Method::Symbolic, split);

    let group = enumerate_group(spec, GroupKind::PseudoSymplectic)?;
    rep.note(format!("|Ps_{n}(F_{q})| = {}", group.len()));
    let mut moved = None;
    let mut fixed = true;
    for t in &group {
        if moved.is_none() && apply_action(t, &xn)? != xn {
            moved = Some(t.clone());
        }
        for p in bar.members() {
            fixed &= apply_action(t, p)? == *p;
        }
    }
    rep.check("every element fixes X_n", Method::Enumeration, moved.is_none());
    rep.check("every element fixes P_n0, .., P_nn", Method::Enumeration, fixed);
    if let Some(t) = moved {
        rep.counterexample = Some(format_element(&t, spec));
    }
    // X_n and P_{n-1,k} = P_nk - X_n^(q^k+1) generate the same field as the P_nk
    rep.witness_text("generators", format!("X{n}, {}", (1..n).map(|k| gen_name(n - 1, k, 0)).collect::<Vec<_>>().join(", ")));
    frobenius_relation(&mut rep, &low, q, seed)?;
    Ok(rep.finish(start))
}

/// The even pseudo-symplectic case: `D_n^2 = det(B S tB)`, `D_n` is the
/// square root from [`sqrt_det`], `D_n^(q+1) = K^q P_nn + g` with `g` a
/// polynomial in `P_n1, .., P_n,n-1, X_n`, and `K ≠ 0`.
pub fn verify_thm_s2(spec: &FormSpec, mode: Mode, trials: usize, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    if spec.kind() != FormKind::PsEven {
        return Err(Error::KindMismatch(format!("needs the even pseudo-symplectic form, got {}", spec.kind())));
    }
    let n = spec.n();
    let q = spec.q();
    let mut rep = IdentityReport::new("s2", spec_params(spec, Some(trials), seed));
    let fam = ps_family_gf(spec, n)?;
    let ring = fam.ring().clone();
    let all: Vec<usize> = (0..n).collect();
    let d = moore_det(&ring, &all)?;
    let sg = s_gram(&fam)?;
    let shifted = s_gram_shifted(&fam)?;
    let symbolic = mode == Mode::Symbolic || (mode == Mode::Auto && n <= 2);

    if symbolic {
        rep.check("D_n^2 = det(B S tB)", Method::Symbolic, ring.det(&sg)? == d.square()?);
        rep.check("D_n^(q+1) = det(B^(q) S tB)", Method::Symbolic, ring.det(&shifted)? == d.pow(q + 1)?);
    } else {
        let degree = (q + 1) * moore_degree(q, n);
        let cfg = PitConfig { trials, seed, ..PitConfig::default() };
        let v = pit_check(spec.field(), n, degree, &cfg, |emb, pt| {
            let k = emb.target();
            let dv = d.evaluate(emb, pt)?;
            let a = det_gauss(k, &eval_matrix(&sg, emb, pt)?)? == k.mul_bits(dv, dv);
            let b = det_gauss(k, &eval_matrix(&shifted, emb, pt)?)? == k.pow_bits(dv, q as u128 + 1);
            Ok(Some(a && b))
        })?;
        rep.check_pit("D_n^2 and D_n^(q+1) as Gram determinants at random points", &v);
    }

    let xn = ring.var(n - 1);
    let roots: Vec<Option<MPoly<Gf>>> = (0..n as u32).map(|a| xn.twist(a).ok()).collect();
    let root = sqrt_det(&ring, &sg, &roots)?;
    rep.check("sqrt_det(B S tB) = D_n", Method::Symbolic, root == d);
    rep.witness("D_n", &d);

    let km = k_matrix(&fam)?;
    let kdet = ring.det(&km)?;
    rep.witness("K", &kdet);
    let pnn = fam.member(n)?;
    let g = d.pow(q + 1)?.sub(&kdet.pow(q)?.mul(pnn)?)?;
    rep.witness("g", &g);
    let mut gens: Vec<Generator> =
        (1..n).map(|k| Ok(Generator::new(gen_name(n, k, 0), fam.member(k)?.clone()))).collect::<Result<_>>()?;
    gens.push(Generator::new(format!("X{n}"), xn.clone()));
    let mut problem = AnsatzProblem::new(g, gens);
    problem.seed = seed;
    match express_in_generators(&problem) {
        Ok(s) => {
            let method = if matches!(s.certificate, Certificate::Symbolic) { Method::Symbolic } else { Method::Pit };
            rep.check(format!("g is a polynomial in P{n}1..P{n}{}, X{n}", n - 1), method, true);
            rep.solution("g", &s);
        }
        Err(e @ (Error::AnsatzNotFound { .. } | Error::TooLarge(_))) => {
            rep.check_with("g found and certified", Method::Symbolic, false, e.to_string());
        }
        Err(e) => return Err(e),
    }

    // K at X_n = X_{n-1} is a squared Moore determinant in X_1..X_{n-1}
    let collapsed = kdet.substitute_one(n - 1, &ring.var(n - 2))?;
    let lower: Vec<usize> = (0..n - 1).collect();
    let expected = moore_det(&ring, &lower)?.square()?;
    rep.check("K at X_n = X_{n-1} is Moore(X_1..X_{n-1})^2", Method::Symbolic, collapsed == expected);
    rep.check("K is nonzero", Method::Symbolic, !kdet.is_zero() && !expected.is_zero());
    Ok(rep.finish(start))
}
