//! Congruences for determinants of symmetric and alternate matrices, and the
//! Pfaffian product rule.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{int_matrix, random_symmetric, rng, IdentityReport, Indeterminates, Method, Mode, Params};
use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, pfaffian, Matrix};
use crate::mpoly::MPoly;
use crate::ring::{Integers, Ring};

const SYMBOLIC_LIMIT: usize = 7;

fn params(n: usize, trials: usize, seed: u64) -> Params {
    Params { n: Some(n), trials: Some(trials), seed, ..Params::default() }
}

fn want_symbolic(mode: Mode, n: usize, limit: usize) -> Result<bool> {
    match mode {
        Mode::Symbolic if n > limit => {
            Err(Error::InvalidSpec(format!("symbolic expansion is limited to n <= {limit}, got {n}")))
        }
        Mode::Symbolic => Ok(true),
        Mode::Auto => Ok(n <= limit.min(5)),
        Mode::Pit | Mode::Numeric => Ok(false),
    }
}

fn check_parity(n: usize, odd: bool) -> Result<()> {
    if n == 0 || (n % 2 == 1) != odd {
        let want = if odd { "odd" } else { "even" };
        return Err(Error::InvalidSpec(format!("n = {n} must be positive and {want}")));
    }
    Ok(())
}

/// Symmetric matrix of indeterminates with the given diagonal.
fn generic_symmetric(ind: &Indeterminates, n: usize, diag: impl Fn(usize) -> MPoly<Integers>) -> Matrix<MPoly<Integers>> {
    Matrix::from_fn(n, n, |i, j| if i == j { diag(i) } else { ind.get(0, n, i, j) })
}

fn generic_alternate(ind: &Indeterminates, p: usize, n: usize, offset: usize, size: usize) -> Matrix<MPoly<Integers>> {
    Matrix::from_fn(size, size, |i, j| {
        let e = ind.get(p, n, i + offset, j + offset);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => e,
            std::cmp::Ordering::Equal => ind.ring.zero(),
            std::cmp::Ordering::Greater => e.neg(),
        }
    })
}

/// The determinant of a symmetric zero-diagonal matrix of odd size is even.
pub fn verify_nodd(n: usize, trials: usize, mode: Mode, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    check_parity(n, true)?;
    let mut rep = IdentityReport::new("nodd", params(n, trials, seed));
    if want_symbolic(mode, n, SYMBOLIC_LIMIT)? {
        let ind = Indeterminates::new(n, false, &["a"])?;
        let m = generic_symmetric(&ind, n, |_| ind.ring.zero());
        let d = ind.ring.det(&m)?;
        let even = d.all_divisible(&2.into());
        rep.check(format!("det is even, n = {n}"), Method::Symbolic, even);
        rep.witness_text("det", ind.show(&d));
        if even {
            rep.witness_text("half", ind.show(&d.exact_div_int(&2.into())?));
        }
    }
    if mode.evaluation() && trials > 0 {
        let mut r = rng(seed, n as u64);
        let mut ok = true;
        for _ in 0..trials {
            let m = random_symmetric(&mut r, n, false);
            let d = det_bareiss(&int_matrix(&m))?;
            if !(&d % 2u32).is_zero() {
                rep.counterexample = Some(format!("{m:?}"));
                ok = false;
                break;
            }
        }
        rep.check(format!("{trials} random matrices with entries in [-9, 9]"), Method::Numeric, ok);
    }
    Ok(rep.finish(start))
}

/// Doubling the diagonal of a symmetric matrix of even size changes the
/// determinant by a multiple of 4 relative to the zero-diagonal matrix.
pub fn verify_neven(n: usize, trials: usize, mode: Mode, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    check_parity(n, false)?;
    let mut rep = IdentityReport::new("neven", params(n, trials, seed));
    if want_symbolic(mode, n, 6)? {
        let ind = Indeterminates::new(n, true, &["a"])?;
        let two = ind.ring.from_int(2);
        let doubled = generic_symmetric(&ind, n, |i| ind.get(0, n, i, i).mul(&two).unwrap());
        let zero = generic_symmetric(&ind, n, |_| ind.ring.zero());
        let diff = ind.ring.det(&doubled)?.sub(&ind.ring.det(&zero)?)?;
        rep.check(format!("difference divisible by 4, n = {n}"), Method::Symbolic, diff.all_divisible(&4.into()));
        rep.witness_text("difference", ind.show(&diff));
    }
    if mode.evaluation() && trials > 0 {
        let mut r = rng(seed, n as u64);
        let mut ok = true;
        for _ in 0..trials {
            let m = random_symmetric(&mut r, n, true);
            let mut doubled = m.clone();
            let mut zero = m.clone();
            for i in 0..n {
                doubled[i][i] *= 2;
                zero[i][i] = 0;
            }
            let d = det_bareiss(&int_matrix(&doubled))? - det_bareiss(&int_matrix(&zero))?;
            if !(&d % 4u32).is_zero() {
                rep.counterexample = Some(format!("{m:?}"));
                ok = false;
                break;
            }
        }
        rep.check(format!("{trials} random matrices with entries in [-9, 9]"), Method::Numeric, ok);
    }
    Ok(rep.finish(start))
}

/// `det(alternate) ≡ (-1)^ν det(symmetric, zero diagonal) (mod 4)` on the
/// same upper entries.
pub fn verify_difference(n: usize, trials: usize, mode: Mode, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    check_parity(n, false)?;
    let sign: i64 = if (n / 2) % 2 == 0 { 1 } else { -1 };
    let mut rep = IdentityReport::new("difference", params(n, trials, seed));
    if want_symbolic(mode, n, 6)? {
        let ind = Indeterminates::new(n, false, &["a"])?;
        let skew = generic_alternate(&ind, 0, n, 0, n);
        let sym = generic_symmetric(&ind, n, |_| ind.ring.zero());
        let diff = ind.ring.det(&skew)?.sub(&ind.ring.det(&sym)?.mul(&ind.ring.from_int(sign))?)?;
        rep.check(format!("difference divisible by 4, n = {n}"), Method::Symbolic, diff.all_divisible(&4.into()));
        rep.witness_text("difference", ind.show(&diff));
    }
    if mode.evaluation() && trials > 0 {
        let mut r = rng(seed, n as u64);
        let mut ok = true;
        for _ in 0..trials {
            let sym = random_symmetric(&mut r, n, false);
            let mut skew = sym.clone();
            for i in 0..n {
                for j in 0..i {
                    skew[i][j] = -skew[i][j];
                }
            }
            let d = det_bareiss(&int_matrix(&skew))? - det_bareiss(&int_matrix(&sym))? * sign;
            if !(&d % 4u32).is_zero() {
                rep.counterexample = Some(format!("{skew:?}"));
                ok = false;
                break;
            }
        }
        rep.check(format!("{trials} random matrices with entries in [-9, 9]"), Method::Numeric, ok);
    }
    Ok(rep.finish(start))
}

/// `[[0, a], [-tb, C]]` for a row `a`, a row `b` and an alternate core `C`.
fn bordered<E: Clone>(a: &[E], b: &[E], c: &Matrix<E>, zero: E, neg: impl Fn(&E) -> E) -> Matrix<E> {
    let n = c.rows() + 1;
    Matrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => zero.clone(),
        (0, j) => a[j - 1].clone(),
        (i, 0) => neg(&b[i - 1]),
        (i, j) => c.get(i - 1, j - 1).clone(),
    })
}

/// `Pf(A) Pf(B) = det(D)` where `A`, `B` share an alternate core and `D`
/// takes its first row from `A` and its first column from `B`.
pub fn verify_multiplicity(n: usize, trials: usize, mode: Mode, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    check_parity(n, false)?;
    let mut rep = IdentityReport::new("multiplicity", params(n, trials, seed));
    if want_symbolic(mode, n, 6)? {
        let ind = Indeterminates::new(n, false, &["a", "b", "c"])?;
        let z = &ind.ring;
        let a: Vec<_> = (1..n).map(|j| ind.get(0, n, 0, j)).collect();
        let b: Vec<_> = (1..n).map(|j| ind.get(1, n, 0, j)).collect();
        let c = generic_alternate(&ind, 2, n, 1, n - 1);
        let neg = |e: &MPoly<Integers>| e.neg();
        let ma = bordered(&a, &a, &c, z.zero(), neg);
        let mb = bordered(&b, &b, &c, z.zero(), neg);
        let md = bordered(&a, &b, &c, z.zero(), neg);
        let lhs = pfaffian(z, &ma)?.mul(&pfaffian(z, &mb)?)?;
        let rhs = z.det(&md)?;
        rep.check(format!("Pf(A) Pf(B) = det(D), n = {n}"), Method::Symbolic, lhs == rhs);
        rep.witness_text("det(D)", ind.show(&rhs));
    }
    if mode.evaluation() && trials > 0 {
        let mut r = rng(seed, n as u64);
        let mut ok = true;
        for _ in 0..trials {
            let s = random_symmetric(&mut r, n, false);
            let t = random_symmetric(&mut r, n, false);
            let big = |v: i64| BigInt::from(v);
            let c = Matrix::from_fn(n - 1, n - 1, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Less => big(s[i + 1][j + 1]),
                std::cmp::Ordering::Equal => BigInt::zero(),
                std::cmp::Ordering::Greater => big(-s[i + 1][j + 1]),
            });
            let a: Vec<BigInt> = (1..n).map(|j| big(s[0][j])).collect();
            let b: Vec<BigInt> = (1..n).map(|j| big(t[0][j])).collect();
            let neg = |e: &BigInt| -e;
            let lhs = pfaffian(&Integers, &bordered(&a, &a, &c, BigInt::zero(), neg))?
                * pfaffian(&Integers, &bordered(&b, &b, &c, BigInt::zero(), neg))?;
            let rhs = det_bareiss(&bordered(&a, &b, &c, BigInt::zero(), neg))?;
            if lhs != rhs {
                rep.counterexample = Some(format!("a = {a:?}, b = {b:?}, C = {:?}", c.entries()));
                ok = false;
                break;
            }
        }
        rep.check(format!("{trials} random integer instances"), Method::Numeric, ok);
    }
    Ok(rep.finish(start))
}

fn random_alternate(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Matrix<BigInt> {
    let s = random_symmetric(r, n, false);
    Matrix::from_fn(n, n, |i, j| if i > j { BigInt::from(-s[i][j]) } else { BigInt::from(s[i][j]) })
}

/// `Pf(A)` expanded along row `i`.
fn row_expansion(a: &Matrix<BigInt>, i: usize) -> Result<BigInt> {
    let n = a.rows();
    let mut acc = BigInt::zero();
    for j in (0..n).filter(|&j| j != i) {
        let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        let pf = pfaffian(&Integers, &a.select(&rest, &rest))?;
        let mut term = a.get(i, j) * pf;
        if (i + j + 1) % 2 == 1 {
            term = -term;
        }
        if j < i {
            term = -term;
        }
        acc += term;
    }
    Ok(acc)
}

/// `Pf(A)^2 = det(A)`, sign change under a simultaneous row and column swap,
/// row expansion, and `Pf = 0` in odd size, on random integer matrices.
pub fn pfaffian_properties(trials: usize, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    let mut rep = IdentityReport::new(
        "pfaffian-properties",
        Params { trials: Some(trials), seed, ..Params::default() },
    );
    let ind = Indeterminates::new(4, false, &["a"])?;
    let generic = generic_alternate(&ind, 0, 4, 0, 4);
    let pf = pfaffian(&ind.ring, &generic)?;
    rep.witness_text("Pf, n = 4", ind.show(&pf));
    rep.check("Pf^2 = det for the generic 4x4 matrix", Method::Symbolic, pf.square()? == ind.ring.det(&generic)?);

    for n in [2usize, 4, 6, 8] {
        let mut r = rng(seed, n as u64);
        let (mut square, mut swap, mut expand) = (true, true, true);
        for t in 0..trials {
            let a = random_alternate(&mut r, n);
            let pf = pfaffian(&Integers, &a)?;
            square &= &pf * &pf == det_bareiss(&a)?;
            if t < trials.div_ceil(2) {
                let (i, j) = (t % n, (t / n + 1 + t % n) % n);
                if i != j {
                    swap &= pfaffian(&Integers, &a.swap_symmetric(i, j))? == -&pf;
                }
                expand &= row_expansion(&a, t % n)? == pf;
            }
        }
        rep.check(format!("Pf^2 = det, n = {n}"), Method::Numeric, square);
        rep.check(format!("swap changes the sign, n = {n}"), Method::Numeric, swap);
        rep.check(format!("row expansion, n = {n}"), Method::Numeric, expand);
    }
    let mut r = rng(seed, 99);
    let mut odd = true;
    for t in 0..trials {
        let a = random_alternate(&mut r, 2 * (t % 4) + 1);
        odd &= pfaffian(&Integers, &a)?.is_zero() && det_bareiss(&a)?.is_zero();
    }
    rep.check("Pf = det = 0 in odd size", Method::Numeric, odd);
    Ok(rep.finish(start))
}
