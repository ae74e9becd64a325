//! Exact integer linear algebra: matrices, Smith normal form, finitely
//! generated abelian groups given by presentations, and the group ring
//! `Z[F^x/(F^x)^2]`.

mod abgroup;
mod echelon;
mod groupring;
mod reduce;
mod scalar;
mod snf;

pub use abgroup::{cokernel, cokernel_sparse, kernel_subgroup, kernel_subgroup_sparse, AbGroup, SparseRow};
pub(crate) use abgroup::ReducedLattice;
pub use groupring::GroupRingElem;
pub use snf::{smith_normal_form, SnfResult};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone)]
enum Storage {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

/// Dense row-major integer matrix. Entries are arbitrary precision; matrices
/// whose entries fit in `i64` are stored compactly.
#[derive(Clone)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Storage,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: Storage::Small(vec![0; rows * cols]) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` is needed when
    /// there are no rows.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        IntMatrix { rows: rows.len(), cols, data: Storage::Small(data) }
    }

    pub fn from_big_rows(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r.iter().cloned());
        }
        IntMatrix { rows: rows.len(), cols, data: Storage::Big(data) }.compacted()
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[i64]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        assert!(i < self.rows && j < self.cols);
        match &self.data {
            Storage::Small(v) => BigInt::from(v[i * self.cols + j]),
            Storage::Big(v) => v[i * self.cols + j].clone(),
        }
    }

    pub fn get_i64(&self, i: usize, j: usize) -> Option<i64> {
        match &self.data {
            Storage::Small(v) => Some(v[i * self.cols + j]),
            Storage::Big(v) => v[i * self.cols + j].to_i64(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: impl Into<BigInt>) {
        assert!(i < self.rows && j < self.cols);
        let x: BigInt = x.into();
        let k = i * self.cols + j;
        match (&mut self.data, x.to_i64()) {
            (Storage::Small(v), Some(s)) => v[k] = s,
            (Storage::Big(v), _) => v[k] = x,
            (Storage::Small(v), None) => {
                let mut big: Vec<BigInt> = v.iter().map(|&e| BigInt::from(e)).collect();
                big[k] = x;
                self.data = Storage::Big(big);
            }
        }
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn row_i64(&self, i: usize) -> Option<Vec<i64>> {
        (0..self.cols).map(|j| self.get_i64(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let rows: Vec<Vec<BigInt>> =
            (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).collect()).collect();
        Self::from_big_rows(self.rows, &rows)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        if let (Some(a), Some(b)) = (self.to_scalar_rows::<i64>(), other.to_scalar_rows::<i64>()) {
            if let Some(c) = mat_mul(&a, &b, other.cols) {
                return IntMatrix::from_rows(other.cols, &c);
            }
        }
        let a = self.to_scalar_rows::<BigInt>().unwrap();
        let b = other.to_scalar_rows::<BigInt>().unwrap();
        IntMatrix::from_big_rows(other.cols, &mat_mul(&a, &b, other.cols).unwrap())
    }

    /// Absolute value of the determinant of a square matrix (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.to_scalar_rows::<BigInt>().unwrap();
        let mut sign = 1;
        let mut prev = BigInt::from(1);
        for k in 0..n {
            if let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) {
                if p != k {
                    a.swap(p, k);
                    sign = -sign;
                }
            } else {
                return BigInt::zero();
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            BigInt::from(1)
        } else {
            &a[n - 1][n - 1] * sign
        }
    }

    pub(crate) fn to_scalar_rows<T: scalar::Scalar>(&self) -> Option<Vec<Vec<T>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| match &self.data {
                        Storage::Small(v) => Some(T::from_i64(v[i * self.cols + j])),
                        Storage::Big(v) => T::from_big(&v[i * self.cols + j]),
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn from_scalar_rows<T: scalar::Scalar>(cols: usize, rows: &[Vec<T>]) -> Self {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(T::to_big).collect()).collect();
        Self::from_big_rows(cols, &big)
    }

    fn compacted(self) -> Self {
        if let Storage::Big(v) = &self.data {
            if let Some(small) = v.iter().map(|e| e.to_i64()).collect::<Option<Vec<i64>>>() {
                return IntMatrix { rows: self.rows, cols: self.cols, data: Storage::Small(small) };
            }
        }
        self
    }
}

pub(crate) fn mat_mul<T: scalar::Scalar>(a: &[Vec<T>], b: &[Vec<T>], cols: usize) -> Option<Vec<Vec<T>>> {
    let mut out = Vec::with_capacity(a.len());
    for row in a {
        let mut acc = vec![T::zero(); cols];
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[k].iter().enumerate() {
                if !y.is_zero() {
                    acc[j] = acc[j].add(&x.mul(y)?)?;
                }
            }
        }
        out.push(acc);
    }
    Some(out)
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == other.get(i, j)))
    }
}

impl Eq for IntMatrix {}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn storage_promotes_on_large_entries() {
        let mut m = IntMatrix::zeros(2, 2);
        let big: BigInt = BigInt::from(i64::MAX) * 4;
        m.set(0, 1, big.clone());
        assert_eq!(m.get(0, 1), big);
        assert_eq!(m.get_i64(0, 1), None);
        assert_eq!(m.get_i64(1, 1), Some(0));
    }

    #[test]
    fn products_overflowing_i64_are_exact() {
        let x = 1i64 << 40;
        let a = IntMatrix::from_rows(1, &[vec![x]]);
        let p = a.mul(&a);
        assert_eq!(p.get(0, 0), BigInt::from(x) * BigInt::from(x));
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_rows(3, &[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(m.det(), BigInt::zero());
        let m = IntMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det(), BigInt::from(-1));
        assert_eq!(IntMatrix::zeros(0, 0).det(), BigInt::from(1));
    }
}
