//! Dense matrices over ℚ(i).
//!
//! Rank, kernels, determinants and linear solves all go through one
//! fraction-free (Bareiss) elimination: each row is first scaled to ℤ[i] by
//! the lcm of its denominators, then every elimination step divides exactly by
//! the previous pivot, so intermediate entries stay bounded minors of the input.
//! Pivots are chosen by scanning columns left to right and taking the first
//! nonzero entry at or below the current row.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{GaussianInteger, GaussianRational, Rational};

pub type Vector = Vec<GaussianRational>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

/// Integral row echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<GaussianInteger>>,
    pivots: Vec<usize>,
    swaps: usize,
    /// Row `r` of the echelon form corresponds to the original rows scaled by
    /// these factors (in the permuted order).
    scales: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = GaussianRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussianRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(ExactMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::from_int(x)).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("column length differs from row count".into()));
        }
        Ok(ExactMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone()))
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussianRational::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(GaussianRational::is_real)
    }

    pub fn row(&self, r: usize) -> Vector {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(GaussianRational::conj).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ExactMatrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).map(|k| &self[(r, k)] * &other[(k, c)]).sum()
        }))
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| &self[(r, c)] * &v[c]).sum())
            .collect())
    }

    /// Bilinear evaluation `xᵀ M y` (no conjugation).
    pub fn bilinear(&self, x: &[GaussianRational], y: &[GaussianRational]) -> GaussianRational {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        let mut acc = GaussianRational::zero();
        for (r, xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            let inner: GaussianRational = (0..self.cols)
                .filter(|&c| !y[c].is_zero())
                .map(|c| &self[(r, c)] * &y[c])
                .sum();
            acc += xr * &inner;
        }
        acc
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack with different row counts".into()));
        }
        Ok(ExactMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Stacks any number of matrices with equal column counts. An empty
    /// slice yields a `0 x cols` matrix.
    pub fn vstack_all(parts: &[ExactMatrix], cols: usize) -> Result<Self> {
        let mut out = ExactMatrix::zeros(0, cols);
        for p in parts {
            out = out.vstack(p)?;
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        ExactMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows.start + r, cols.start + c)].clone()
        })
    }

    fn echelon(&self) -> Echelon {
        let mut rows: Vec<Vec<GaussianInteger>> = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let scale = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom_lcm()));
            rows.push(row.iter().map(|x| GaussianInteger::scaled_from(x, &scale)).collect());
            scales.push(scale);
        }

        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut prev = GaussianInteger::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&p| !rows[p][c].is_zero()) else {
                continue;
            };
            if p != r {
                rows.swap(p, r);
                scales.swap(p, r);
                swaps += 1;
            }
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            for row in tail.iter_mut() {
                let factor = row[c].clone();
                for j in c + 1..self.cols {
                    let v = pivot_row[c].mul(&row[j]).sub(&factor.mul(&pivot_row[j]));
                    row[j] = v.exact_div(&prev);
                }
                row[c] = GaussianInteger::zero();
            }
            // Entries of the pivot row itself stay as they are; only rows
            // below are rescaled by the previous pivot.
            prev = rows[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        Echelon {
            rows,
            pivots,
            swaps,
            scales,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn determinant(&self) -> Result<GaussianRational> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(GaussianRational::one());
        }
        let e = self.echelon();
        if e.pivots.len() < n {
            return Ok(GaussianRational::zero());
        }
        // After Bareiss the last pivot is the determinant of the scaled,
        // permuted matrix.
        let mut det = e.rows[n - 1][n - 1].to_rational();
        if e.swaps % 2 == 1 {
            det = -det;
        }
        let scale = e.scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        Ok(det / GaussianRational::from_rational(Rational::from_integer(scale)))
    }

    /// Basis of `{v : M v = 0}`, one vector per free column, with the free
    /// coordinate set to 1 and the other free coordinates to 0.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let e = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![GaussianRational::zero(); self.cols];
                x[f] = GaussianRational::one();
                back_substitute(&e, &mut x);
                x
            })
            .collect()
    }

    /// One solution of `M x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[GaussianRational]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::Dimension("right-hand side length differs from row count".into()));
        }
        let rhs = ExactMatrix::from_fn(self.rows, 1, |r, _| b[r].clone());
        let aug = self.hstack(&rhs)?;
        let e = aug.echelon();
        if e.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![GaussianRational::zero(); self.cols + 1];
        x[self.cols] = -GaussianRational::one();
        back_substitute(&e, &mut x);
        x.truncate(self.cols);
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Option<Self>> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut columns = Vec::with_capacity(n);
        for c in 0..n {
            let mut e = vec![GaussianRational::zero(); n];
            e[c] = GaussianRational::one();
            match self.solve(&e)? {
                Some(x) if self.rank() == n => columns.push(x),
                _ => return Ok(None),
            }
        }
        ExactMatrix::from_columns(n, &columns).map(Some)
    }

    /// True iff the column spans of `self` and `other` coincide.
    pub fn same_column_span(&self, other: &Self) -> Result<bool> {
        let r1 = self.rank();
        let r2 = other.rank();
        if r1 != r2 {
            return Ok(false);
        }
        Ok(self.hstack(other)?.rank() == r1)
    }

    /// True iff `v` lies in the column span of `self`.
    pub fn spans(&self, v: &[GaussianRational]) -> Result<bool> {
        let col = ExactMatrix::from_fn(v.len(), 1, |r, _| v[r].clone());
        Ok(self.hstack(&col)?.rank() == self.rank())
    }
}

/// Fills the pivot coordinates of `x` so that the echelon rows annihilate it,
/// given its free coordinates.
fn back_substitute(e: &Echelon, x: &mut [GaussianRational]) {
    for (r, &p) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[r];
        let mut acc = GaussianRational::zero();
        for j in p + 1..x.len() {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc += row[j].to_rational() * &x[j];
            }
        }
        x[p] = -(acc / row[p].to_rational());
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = GaussianRational;
    fn index(&self, (r, c): (usize, usize)) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        ExactMatrix::mul(self, rhs).expect("matrix shapes must agree")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn conj_vec(v: &[GaussianRational]) -> Vector {
    v.iter().map(GaussianRational::conj).collect()
}

pub fn is_zero_vec(v: &[GaussianRational]) -> bool {
    v.iter().all(GaussianRational::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn m(rows: &[&[&str]]) -> ExactMatrix {
        ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| g(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(4).rank(), 4);
        assert_eq!(ExactMatrix::zeros(3, 5).rank(), 0);
        assert_eq!(m(&[&["1", "i"], &["i", "-1"]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(ExactMatrix::identity(3).kernel_basis().is_empty());
        assert_eq!(ExactMatrix::zeros(2, 2).kernel_basis().len(), 2);
        let a = m(&[&["1", "i"], &["i", "-1"]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&k[0]).unwrap()));
        // proportional to (i, -1): k = (-i, 1)
        let target = [g("i"), g("-1")];
        let ratio = &k[0][0] / &target[0];
        assert_eq!(&target[1] * &ratio, k[0][1]);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(ExactMatrix::identity(5).determinant().unwrap(), g("1"));
        assert_eq!(m(&[&["2", "0"], &["0", "3*i"]]).determinant().unwrap(), g("6*i"));
        let p = m(&[
            &["1", "0", "1", "0"],
            &["0", "1", "0", "1"],
            &["i", "0", "-i", "0"],
            &["0", "i", "0", "-i"],
        ]);
        assert_eq!(p.determinant().unwrap(), g("-4"));
        assert!(ExactMatrix::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn determinant_with_fractions_and_swaps() {
        let a = m(&[&["0", "1/2", "1"], &["1/3", "0", "i"], &["2", "1+i", "0"]]);
        // cofactor expansion along the first row
        let expected = -(g("1/2") * (g("0") - g("i") * g("2")))
            + g("1") * (g("1/3") * g("1+i") - g("0"));
        assert_eq!(a.determinant().unwrap(), expected);
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&["1", "2"], &["i", "1/2"]]);
        let inv = a.inverse().unwrap().unwrap();
        assert_eq!(&a * &inv, ExactMatrix::identity(2));
        let b = vec![g("1"), g("0")];
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        let singular = m(&[&["1", "i"], &["i", "-1"]]);
        assert!(singular.inverse().unwrap().is_none());
        assert!(singular.solve(&[g("1"), g("0")]).unwrap().is_none());
    }

    #[test]
    fn rank_deficient_with_skipped_columns() {
        let a = m(&[
            &["0", "1", "2", "3"],
            &["0", "2", "4", "7"],
            &["0", "3", "6", "10"],
        ]);
        assert_eq!(a.rank(), 2);
        for v in a.kernel_basis() {
            assert!(is_zero_vec(&a.mul_vec(&v).unwrap()));
        }
        assert_eq!(a.kernel_basis().len(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn entry() -> impl Strategy<Value = GaussianRational> {
            prop_oneof![
                3 => Just(GaussianRational::zero()),
                5 => (-4i64..=4, -4i64..=4).prop_map(|(a, b)| GaussianRational::from_ints(a, b)),
            ]
        }

        fn matrix(max: usize) -> impl Strategy<Value = ExactMatrix> {
            (1..=max, 1..=max).prop_flat_map(|(r, c)| {
                prop::collection::vec(entry(), r * c)
                    .prop_map(move |e| ExactMatrix::from_fn(r, c, |i, j| e[i * c + j].clone()))
            })
        }

        fn square(n: usize) -> impl Strategy<Value = ExactMatrix> {
            prop::collection::vec(entry(), n * n)
                .prop_map(move |e| ExactMatrix::from_fn(n, n, |i, j| e[i * n + j].clone()))
        }

        proptest! {
            #[test]
            fn rank_nullity(a in matrix(5)) {
                let k = a.kernel_basis();
                prop_assert_eq!(a.rank() + k.len(), a.cols());
                for v in &k {
                    prop_assert!(is_zero_vec(&a.mul_vec(v).unwrap()));
                }
                if !k.is_empty() {
                    prop_assert_eq!(ExactMatrix::from_columns(a.cols(), &k).unwrap().rank(), k.len());
                }
            }

            #[test]
            fn rank_is_stable(a in matrix(5)) {
                prop_assert_eq!(a.rank(), a.transpose().rank());
                prop_assert_eq!(a.rank(), a.conj().rank());
            }

            #[test]
            fn determinant_is_multiplicative((a, b) in (1usize..=4).prop_flat_map(|n| (square(n), square(n)))) {
                let ab = a.mul(&b).unwrap();
                prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
            }

            #[test]
            fn kernel_of_conjugate(a in matrix(4)) {
                let k: Vec<Vector> = a.kernel_basis().iter().map(|v| conj_vec(v)).collect();
                let kc = a.conj().kernel_basis();
                prop_assert_eq!(k.len(), kc.len());
                if !k.is_empty() {
                    let left = ExactMatrix::from_columns(a.cols(), &k).unwrap();
                    let right = ExactMatrix::from_columns(a.cols(), &kc).unwrap();
                    prop_assert!(left.same_column_span(&right).unwrap());
                }
            }

            #[test]
            fn inverse_and_solve(a in square(3), b in prop::collection::vec(entry(), 3)) {
                match a.inverse().unwrap() {
                    Some(inv) => {
                        prop_assert_eq!(a.mul(&inv).unwrap(), ExactMatrix::identity(3));
                        let x = a.solve(&b).unwrap().unwrap();
                        prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
                    }
                    None => prop_assert!(a.determinant().unwrap().is_zero()),
                }
            }
        }
    }
}
