use std::collections::HashMap;

use super::{mat_sub, Matrix};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// `a_ij = -a_ji` and `a_ii = 0`. In characteristic two this is "symmetric
/// with zero diagonal".
pub fn is_alternate<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<bool> {
    m.check_square()?;
    let n = m.rows();
    for i in 0..n {
        if !ring.is_zero(m.get(i, i)) {
            return Ok(false);
        }
        for j in i + 1..n {
            if !ring.is_zero(&ring.add(m.get(i, j), m.get(j, i))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `A ≡ B`, i.e. `A - B` is alternate.
pub fn congruent_alternate<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<bool> {
    a.check_square()?;
    is_alternate(ring, &mat_sub(ring, a, b)?)
}

/// Pfaffian by development along the first remaining row, memoized over the
/// set of remaining indices. Zero for odd dimension.
pub fn pfaffian<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    if !is_alternate(ring, m)? {
        return Err(Error::NotAlternate);
    }
    let n = m.rows();
    if n % 2 == 1 {
        return Ok(ring.zero());
    }
    if n > 64 {
        return Err(Error::TooLarge(format!("Pfaffian of a {n}x{n} matrix")));
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    pf_rec(ring, m, full, &mut memo)
}

fn pf_rec<R: Ring>(
    ring: &R,
    m: &Matrix<R::Elem>,
    set: u64,
    memo: &mut HashMap<u64, R::Elem>,
) -> Result<R::Elem> {
    if set == 0 {
        return Ok(ring.one());
    }
    if let Some(v) = memo.get(&set) {
        return Ok(v.clone());
    }
    let i = set.trailing_zeros() as usize;
    let rest = set & !(1u64 << i);
    let mut acc = ring.zero();
    let mut bits = rest;
    let mut t = 0;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        t += 1;
        let a = m.get(i, j);
        if ring.is_zero(a) {
            continue;
        }
        let sub = pf_rec(ring, m, rest & !(1u64 << j), memo)?;
        if ring.is_zero(&sub) {
            continue;
        }
        let term = ring.mul(a, &sub)?;
        acc = if t % 2 == 1 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
    }
    memo.insert(set, acc.clone());
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det_bareiss;
    use crate::ring::{gf_make_field, Integers};
    use num_bigint::BigInt;
    use rand::{Rng as _, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
            .unwrap()
    }

    fn random_alternate(rng: &mut ChaCha8Rng, n: usize) -> Matrix<BigInt> {
        let mut m = Matrix::zeros(&Integers, n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = BigInt::from(rng.gen_range(-9i64..=9));
                m.set(j, i, -v.clone());
                m.set(i, j, v);
            }
        }
        m
    }

    #[test]
    fn alternate_depends_on_characteristic() {
        let swap = int(vec![vec![0, 1], vec![1, 0]]);
        assert!(!is_alternate(&Integers, &swap).unwrap());
        let f2 = gf_make_field(1, None).unwrap();
        let swap2 = Matrix::from_rows(vec![vec![0u32, 1], vec![1, 0]]).unwrap();
        assert!(is_alternate(&f2, &swap2).unwrap());
        assert!(is_alternate(&Integers, &Matrix::zeros(&Integers, 3, 3)).unwrap());
    }

    #[test]
    fn congruence_of_hyperbolic_forms() {
        let f2 = gf_make_field(1, None).unwrap();
        let g = Matrix::from_rows(vec![vec![0u32, 1], vec![0, 0]]).unwrap();
        let h = Matrix::from_rows(vec![vec![0u32, 0], vec![1, 0]]).unwrap();
        assert!(congruent_alternate(&f2, &g, &h).unwrap());
        assert!(congruent_alternate(&f2, &g, &g).unwrap());
        assert!(!congruent_alternate(&f2, &g, &Matrix::identity(&f2, 2)).unwrap());
    }

    #[test]
    fn small_pfaffians() {
        assert_eq!(pfaffian(&Integers, &int(vec![vec![0, 5], vec![-5, 0]])).unwrap(), BigInt::from(5));
        // a12 a34 - a13 a24 + a14 a23 with (a12, a13, a14, a23, a24, a34) = (2, 3, 5, 7, 11, 13)
        let m = int(vec![
            vec![0, 2, 3, 5],
            vec![-2, 0, 7, 11],
            vec![-3, -7, 0, 13],
            vec![-5, -11, -13, 0],
        ]);
        assert_eq!(pfaffian(&Integers, &m).unwrap(), BigInt::from(2 * 13 - 3 * 11 + 5 * 7));
        assert_eq!(pfaffian(&Integers, &Matrix::zeros(&Integers, 5, 5)).unwrap(), BigInt::from(0));
        assert_eq!(pfaffian(&Integers, &Matrix::<BigInt>::identity(&Integers, 2)).unwrap_err(), Error::NotAlternate);
    }

    #[test]
    fn square_of_pfaffian_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 4, 6, 8] {
            for _ in 0..10 {
                let m = random_alternate(&mut rng, n);
                let pf = pfaffian(&Integers, &m).unwrap();
                assert_eq!(&pf * &pf, det_bareiss(&m).unwrap());
                let i = rng.gen_range(0..n);
                let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
                assert_eq!(pfaffian(&Integers, &m.swap_symmetric(i, j)).unwrap(), -pf);
            }
        }
    }
}
