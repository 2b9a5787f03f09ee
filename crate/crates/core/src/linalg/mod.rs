//! Dense matrices over any [`Ring`], with exact determinants and Pfaffians.

mod det;
mod pfaffian;

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Ring;

pub use det::{det, det_bareiss, det_cofactor, det_gauss, rank_gauss};
pub use pfaffian::{congruent_alternate, is_alternate, pfaffian};

/// A row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<E>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| ring.zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: E) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<F: Clone>(&self, f: impl FnMut(&E) -> Result<F>) -> Result<Matrix<F>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// The submatrix on the given row and column indices, in that order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Deletes row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        self.select(&rows, &cols)
    }

    /// Simultaneously swaps rows `i, j` and columns `i, j`.
    pub fn swap_symmetric(&self, i: usize, j: usize) -> Self {
        let p = |k: usize| if k == i { j } else if k == j { i } else { k };
        Matrix::from_fn(self.rows, self.cols, |r, c| self.get(p(r), p(c)).clone())
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

/// Matrix product over `ring`.
pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Matrix::try_from_fn(a.rows, b.cols, |i, j| {
        let mut acc = ring.zero();
        for k in 0..a.cols {
            let (x, y) = (a.get(i, k), b.get(k, j));
            if ring.is_zero(x) || ring.is_zero(y) {
                continue;
            }
            acc = ring.add(&acc, &ring.mul(x, y)?);
        }
        Ok(acc)
    })
}

pub fn mat_add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    same_shape(a, b)?;
    Ok(Matrix::from_fn(a.rows, a.cols, |i, j| ring.add(a.get(i, j), b.get(i, j))))
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    same_shape(a, b)?;
    Ok(Matrix::from_fn(a.rows, a.cols, |i, j| ring.sub(a.get(i, j), b.get(i, j))))
}

fn same_shape<E>(a: &Matrix<E>, b: &Matrix<E>) -> Result<()> {
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} versus {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

/// `T M tT`.
pub fn congruence<R: Ring>(ring: &R, t: &Matrix<R::Elem>, m: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    mat_mul(ring, &mat_mul(ring, t, m)?, &t.transpose())
}

/// Renders a matrix as `matrix RxC`, then `header` (if any), then one line per
/// row with entries separated by ` | `.
pub fn format_matrix<E>(m: &Matrix<E>, header: Option<&str>, entry: impl Fn(&E) -> String) -> String {
    let mut out = format!("matrix {}x{}\n", m.rows, m.cols);
    if let Some(h) = header {
        out.push_str(h);
        out.push('\n');
    }
    for r in 0..m.rows {
        let cells: Vec<String> = m.data[r * m.cols..(r + 1) * m.cols].iter().map(&entry).collect();
        out.push_str(&cells.join(" | "));
        out.push('\n');
    }
    out
}

/// Parses the output of [`format_matrix`]. Returns the optional header line
/// and the entries.
pub fn parse_matrix<E: Clone>(
    text: &str,
    with_header: bool,
    entry: impl Fn(&str) -> Result<E>,
) -> Result<(Option<String>, Matrix<E>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let first = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
    let dims = first
        .strip_prefix("matrix ")
        .ok_or_else(|| Error::Parse(format!("expected 'matrix RxC', got '{first}'")))?;
    let (r, c) = dims
        .split_once('x')
        .ok_or_else(|| Error::Parse(format!("bad dimensions '{dims}'")))?;
    let parse_dim = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension '{s}'")));
    let (rows, cols) = (parse_dim(r)?, parse_dim(c)?);
    let header = if with_header {
        Some(lines.next().ok_or_else(|| Error::Parse("missing ring header".into()))?.to_string())
    } else {
        None
    };
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Parse("too few matrix rows".into()))?;
        let cells: Vec<&str> = line.split('|').collect();
        if cells.len() != cols {
            return Err(Error::Parse(format!("expected {cols} entries in row '{line}'")));
        }
        for cell in cells {
            data.push(entry(cell.trim())?);
        }
    }
    if lines.next().is_some() {
        return Err(Error::Parse("trailing matrix rows".into()));
    }
    Ok((header, Matrix { rows, cols, data }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;
    use num_bigint::BigInt;

    fn int_matrix(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
            .unwrap()
    }

    #[test]
    fn product_and_transpose() {
        let a = int_matrix(vec![vec![1, 2], vec![3, 4]]);
        let b = int_matrix(vec![vec![0, 1], vec![1, 0]]);
        let ab = mat_mul(&Integers, &a, &b).unwrap();
        assert_eq!(ab, int_matrix(vec![vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), int_matrix(vec![vec![1, 3], vec![2, 4]]));
        assert!(mat_mul(&Integers, &a, &int_matrix(vec![vec![1, 2, 3]])).is_err());
    }

    #[test]
    fn text_round_trip() {
        let a = int_matrix(vec![vec![1, -2, 0], vec![3, 4, 5]]);
        let text = format_matrix(&a, Some("ring: Z"), |e| e.to_string());
        assert_eq!(text, "matrix 2x3\nring: Z\n1 | -2 | 0\n3 | 4 | 5\n");
        let (h, b) = parse_matrix(&text, true, |s| s.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())))
            .unwrap();
        assert_eq!(h.as_deref(), Some("ring: Z"));
        assert_eq!(a, b);
    }

    #[test]
    fn symmetric_swap_permutes_both_axes() {
        let a = int_matrix(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let s = a.swap_symmetric(0, 2);
        assert_eq!(s, int_matrix(vec![vec![9, 8, 7], vec![6, 5, 4], vec![3, 2, 1]]));
        assert_eq!(a.minor(1, 1), int_matrix(vec![vec![1, 3], vec![7, 9]]));
    }
}
