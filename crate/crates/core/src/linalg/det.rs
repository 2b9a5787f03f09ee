use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Matrix;
use crate::error::{Error, Result};
use crate::ring::{Gf, Ring};

/// Determinant using the ring's preferred method: Gaussian elimination over
/// fields, Bareiss over the integers, memoized cofactor expansion otherwise.
pub fn det<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    m.check_square()?;
    ring.det(m)
}

/// Division-free determinant by Laplace expansion, memoized over column
/// subsets: the minor on rows `0..k` and a `k`-subset of columns is computed
/// once. Costs `O(n 2^n)` ring multiplications.
pub fn det_cofactor<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    m.check_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(ring.one());
    }
    if n > 30 {
        return Err(Error::TooLarge(format!("cofactor expansion of a {n}x{n} matrix")));
    }
    let mut level: HashMap<u32, R::Elem> = HashMap::from([(0u32, ring.one())]);
    for k in 0..n {
        let mut next: HashMap<u32, R::Elem> = HashMap::new();
        for (&mask, minor) in &level {
            for j in 0..n {
                if mask >> j & 1 == 1 {
                    continue;
                }
                let a = m.get(k, j);
                if ring.is_zero(a) {
                    continue;
                }
                let pos = (mask & ((1u32 << j) - 1)).count_ones() as usize;
                let mut term = ring.mul(a, minor)?;
                if (k + pos) % 2 == 1 {
                    term = ring.neg(&term);
                }
                let slot = next.entry(mask | 1 << j).or_insert_with(|| ring.zero());
                *slot = ring.add(slot, &term);
            }
        }
        next.retain(|_, v| !ring.is_zero(v));
        if next.is_empty() {
            return Ok(ring.zero());
        }
        level = next;
    }
    Ok(level.remove(&((1u32 << n) - 1)).unwrap_or_else(|| ring.zero()))
}

/// Fraction-free Bareiss elimination over the integers.
pub fn det_bareiss(m: &Matrix<BigInt>) -> Result<BigInt> {
    m.check_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign { -d } else { d })
}

/// Gaussian elimination over a binary field.
pub fn det_gauss(field: &Gf, m: &Matrix<u32>) -> Result<u32> {
    m.check_square()?;
    let n = m.rows();
    let mut a: Vec<Vec<u32>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = 1u32;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return Ok(0);
        };
        a.swap(k, p);
        let pivot = a[k][k];
        d = field.mul_bits(d, pivot);
        let inv = field.inv_bits(pivot)?;
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = field.mul_bits(a[i][k], inv);
            for j in k..n {
                a[i][j] ^= field.mul_bits(f, a[k][j]);
            }
        }
    }
    Ok(d)
}

/// Rank over a binary field.
pub fn rank_gauss(field: &Gf, m: &Matrix<u32>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<u32>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = field.inv_bits(a[rank][c]).expect("nonzero pivot");
        for i in 0..rows {
            if i != rank && a[i][c] != 0 {
                let f = field.mul_bits(a[i][c], inv);
                for j in c..cols {
                    a[i][j] ^= field.mul_bits(f, a[rank][j]);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{gf_make_field, CoeffRing, Integers, ZMod};
    use rand::{Rng as _, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_int(rng: &mut ChaCha8Rng, n: usize) -> Matrix<BigInt> {
        Matrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-9i64..=9)))
    }

    #[test]
    fn identity_has_unit_determinant() {
        for n in 0..6 {
            assert_eq!(det(&Integers, &Matrix::identity(&Integers, n)).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn bareiss_and_cofactor_agree_and_are_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            for _ in 0..20 {
                let a = random_int(&mut rng, n);
                let b = random_int(&mut rng, n);
                let da = det_bareiss(&a).unwrap();
                assert_eq!(da, det_cofactor(&Integers, &a).unwrap());
                let ab = super::super::mat_mul(&Integers, &a, &b).unwrap();
                assert_eq!(det_bareiss(&ab).unwrap(), &da * det_bareiss(&b).unwrap());
            }
        }
    }

    #[test]
    fn gauss_agrees_with_reduced_integer_determinant() {
        let f2 = gf_make_field(1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..20 {
                let a = random_int(&mut rng, n);
                let d = ZMod::Z2.from_bigint(&det_bareiss(&a).unwrap());
                let reduced = a.map(|e| ZMod::Z2.from_bigint(e) as u32);
                assert_eq!(det_gauss(&f2, &reduced).unwrap(), d as u32);
                assert_eq!(det_cofactor(&f2, &reduced).unwrap(), d as u32);
            }
        }
    }

    #[test]
    fn gauss_matches_cofactor_over_gf16() {
        let f = gf_make_field(4, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            let a = Matrix::from_fn(n, n, |_, _| rng.gen_range(0..16u32));
            assert_eq!(det_gauss(&f, &a).unwrap(), det_cofactor(&f, &a).unwrap());
            let singular = det_gauss(&f, &a).unwrap() == 0;
            assert_eq!(rank_gauss(&f, &a) < n, singular);
        }
    }

    #[test]
    fn non_square_is_rejected() {
        let m = Matrix::from_fn(2, 3, |_, _| BigInt::one());
        assert_eq!(det(&Integers, &m).unwrap_err(), Error::NotSquare { rows: 2, cols: 3 });
    }
}
