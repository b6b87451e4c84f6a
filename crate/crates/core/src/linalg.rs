//! Dense linear algebra over exact fields (`F = Q` read p-adically, and `E`).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::Error;

pub trait Field: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_rational_like(&self, r: &Rational) -> Self;
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn filled(rows: usize, cols: usize, x: T) -> Self {
        Matrix { rows, cols, data: vec![x; rows * cols] }
    }

    pub fn zeros_like(rows: usize, cols: usize, proto: &T) -> Self {
        Self::filled(rows, cols, proto.zero_like())
    }

    pub fn identity_like(n: usize, proto: &T) -> Self {
        let mut m = Self::zeros_like(n, n, proto);
        for i in 0..n {
            m[(i, i)] = proto.one_like();
        }
        m
    }

    pub fn diag(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros_like(n, n, &entries[0]);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let r = cols[0].len();
        let mut m = Self::zeros_like(r, cols.len(), &cols[0][0]);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..r {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let proto = self.data.first().or(o.data.first()).expect("nonempty");
        let mut out = Self::zeros_like(self.rows, o.cols, proto);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.vanishes() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = a.mul(&o[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for j in 0..self.cols {
                    acc = acc.add(&self[(i, j)].mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        self.transpose().mul_vec(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::identity_like(self.rows, &self.data[0]);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows {
            acc = acc.add(&self[(i, i)]);
        }
        acc
    }

    /// Row echelon form; returns (reduced matrix, pivot columns, determinant sign/scale).
    fn rref(&self) -> (Self, Vec<usize>, T) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = self.data[0].one_like();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m[(i, c)].vanishes()) else {
                det = det.zero_like();
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
                det = det.neg();
            }
            let lead = m[(r, c)].clone();
            det = det.mul(&lead);
            let li = lead.inv().unwrap();
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)].mul(&li);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].vanishes() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let t = f.mul(&m[(r, j)]);
                        m[(i, j)] = m[(i, j)].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, det)
    }

    pub fn rank(&self) -> usize {
        if self.data.is_empty() {
            return 0;
        }
        self.rref().1.len()
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let (_, piv, det) = self.rref();
        if piv.len() < self.rows {
            det.zero_like()
        } else {
            det
        }
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        assert!(self.is_square());
        let n = self.rows;
        let proto = &self.data[0];
        let mut aug = Self::zeros_like(n, 2 * n, proto);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = proto.one_like();
        }
        let (red, piv, _) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut out = Self::zeros_like(n, n, proto);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = red[(i, n + j)].clone();
            }
        }
        Ok(out)
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let proto = &self.data[0];
        let (red, piv, _) = self.rref();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if piv.contains(&free) {
                continue;
            }
            let mut x = vec![proto.zero_like(); self.cols];
            x[free] = proto.one_like();
            for (r, &pc) in piv.iter().enumerate() {
                x[pc] = red[(r, free)].neg();
            }
            out.push(x);
        }
        out
    }

    /// Solve `A x = b` for square invertible `A`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, Error> {
        Ok(self.inverse()?.mul_vec(b))
    }

    /// Characteristic polynomial `det(tI - A)`, coefficients low to high,
    /// by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        let proto = &self.data[0];
        let mut coeffs = vec![proto.zero_like(); n + 1];
        coeffs[n] = proto.one_like();
        let ident = Self::identity_like(n, proto);
        let mut m = Self::zeros_like(n, n, proto);
        for k in 1..=n {
            m = self.mul(&m).add(&ident.scale(&coeffs[n - k + 1]));
            let am = self.mul(&m);
            let kk = proto.from_rational_like(&Rational::from_integer((k as i64).into()));
            coeffs[n - k] = am.trace().neg().mul(&kk.inv().unwrap());
        }
        coeffs
    }
}

impl<T> core::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> core::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub type RMatrix = Matrix<Rational>;

pub fn rmat(rows: &[&[i64]]) -> RMatrix {
    Matrix::from_rows(
        rows.iter().map(|r| r.iter().map(|x| Rational::from_integer((*x).into())).collect()).collect(),
    )
}

pub fn rzero_matrix(r: usize, c: usize) -> RMatrix {
    Matrix::filled(r, c, Rational::zero())
}

pub fn ridentity(n: usize) -> RMatrix {
    Matrix::identity_like(n, &Rational::zero())
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    let mut acc = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn det_inverse_charpoly() {
        let a = rmat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), rat(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), ridentity(3));
        // det(tI - A) = t^3 - 9t^2 + 24t - 18
        assert_eq!(a.charpoly(), alloc::vec![rat(-18), rat(24), rat(-9), rat(1)]);
    }

    #[test]
    fn nullspace_and_rank() {
        let a = rmat(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| x.vanishes()));
        }
        assert_eq!(rmat(&[&[1, 2], &[2, 4]]).det(), rat(0));
        assert!(rmat(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }
}
