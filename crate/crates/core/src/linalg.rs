//! Exact linear algebra over [`Scalar`]: sparse echelon forms, kernels and a
//! small dense matrix type.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse vector: `(index, value)` pairs sorted by index, no zero values.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// `a + c * b`.
pub fn axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_sparse(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Incremental row-echelon basis of a subspace. The pivot of a row is its
/// smallest index, and stored rows are monic at the pivot.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Reduces `v` against the stored rows; zero iff `v` is in the span.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.reduce_tracked(v, |_, _| {})
    }

    fn reduce_tracked(&self, mut v: SparseVec, mut on_step: impl FnMut(usize, &Scalar)) -> SparseVec {
        let mut k = 0;
        while k < v.len() {
            let (idx, ref c) = v[k];
            if let Some(&r) = self.pivots.get(&idx) {
                let c = -c;
                on_step(r, &c);
                v = axpy(&v, &c, &self.rows[r]);
                // entries before k are unaffected: rows only touch indices >= pivot
            } else {
                k += 1;
            }
        }
        v
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let inv = r[0].1.inv().unwrap();
        let r = scale_sparse(&r, &inv);
        self.pivots.insert(r[0].0, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Reduced row-echelon basis, sorted by pivot.
    pub fn rref(&self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r][0].0);
        let mut out: Vec<SparseVec> = Vec::with_capacity(order.len());
        // back-substitute from the largest pivot
        for &r in order.iter().rev() {
            let mut row = self.rows[r].clone();
            let mut k = 1;
            while k < row.len() {
                let idx = row[k].0;
                if let Some(pos) = out.iter().position(|o| o[0].0 == idx) {
                    let c = -&row[k].1;
                    row = axpy(&row, &c, &out[pos]);
                } else {
                    k += 1;
                }
            }
            out.push(row);
        }
        out.reverse();
        out
    }
}

/// Solver that tracks, for each stored row, which input combination produced it.
#[derive(Clone, Debug, Default)]
pub struct TrackedEchelon {
    basis: Echelon,
    combos: Vec<SparseVec>,
    inserted: usize,
}

impl TrackedEchelon {
    pub fn new() -> TrackedEchelon {
        TrackedEchelon::default()
    }

    /// Inserts the next input vector (numbered in insertion order). Returns the
    /// kernel combination when the vector is dependent on earlier ones.
    pub fn insert(&mut self, v: SparseVec) -> Option<SparseVec> {
        let id = self.inserted;
        self.inserted += 1;
        let mut combo: SparseVec = vec![(id, Scalar::one())];
        let combos = &self.combos;
        let r = self.basis.reduce_tracked(v, |row, c| {
            combo = axpy(&combo, c, &combos[row]);
        });
        if r.is_empty() {
            return Some(combo);
        }
        let inv = r[0].1.inv().unwrap();
        let r = scale_sparse(&r, &inv);
        let combo = scale_sparse(&combo, &inv);
        self.basis.pivots.insert(r[0].0, self.basis.rows.len());
        self.basis.rows.push(r);
        self.combos.push(combo);
        None
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// Expresses `v` in terms of the inputs, if it lies in their span.
    pub fn solve(&self, v: SparseVec) -> Option<SparseVec> {
        let mut combo: SparseVec = Vec::new();
        let combos = &self.combos;
        let r = self.basis.reduce_tracked(v, |row, c| {
            combo = axpy(&combo, c, &combos[row]);
        });
        if r.is_empty() {
            Some(scale_sparse(&combo, &Scalar::from_int(-1)))
        } else {
            None
        }
    }
}

/// Basis of `{ lambda : sum_k lambda_k * images[k] = 0 }` in reduced echelon form.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut t = TrackedEchelon::new();
    let mut ker = Echelon::new();
    for v in images {
        if let Some(c) = t.insert(v.clone()) {
            ker.insert(c);
        }
    }
    ker.rref()
}

/// Dense matrix over [`Scalar`], row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn from_row_major(n: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
        }
        Ok(Matrix { rows: n, cols: n, data })
    }

    pub fn diag(entries: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Standard symplectic form `[[0, I], [-I, 0]]` of size `2n`.
    pub fn standard_symplectic(n: usize) -> Matrix {
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = Scalar::one();
            m[(n + i, i)] = Scalar::from_int(-1);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    fn echelon_rows(&self) -> Echelon {
        let mut e = Echelon::new();
        for i in 0..self.rows {
            let v: SparseVec = self
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect();
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon_rows().rank()
    }

    /// Basis of the null space `{ v : M v = 0 }`, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let rref = self.echelon_rows().rref();
        let pivots: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for row in &rref {
                let p = row[0].0;
                if let Some((_, c)) = row.iter().find(|(j, _)| *j == free) {
                    v[p] = -c;
                }
            }
            out.push(v);
        }
        out
    }

    /// Basis of the column space.
    pub fn column_space(&self) -> Vec<Vec<Scalar>> {
        let t = self.transpose();
        t.echelon_rows()
            .rref()
            .into_iter()
            .map(|r| {
                let mut v = vec![Scalar::zero(); self.rows];
                for (j, x) in r {
                    v[j] = x;
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let inv = a[col][col].inv().unwrap();
            for v in a[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for k in 0..2 * n {
                        let sub = &f * &a[col][k];
                        a[r][k] -= &sub;
                    }
                }
            }
        }
        Some(Matrix::from_rows(a.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut a: Vec<Vec<Scalar>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Scalar::zero();
            };
            if piv != col {
                a.swap(col, piv);
                det = -det;
            }
            det *= &a[col][col];
            let inv = a[col][col].inv().unwrap();
            for r in col + 1..n {
                if !a[r][col].is_zero() {
                    let f = &a[r][col] * &inv;
                    for k in col..n {
                        let sub = &f * &a[col][k];
                        a[r][k] -= &sub;
                    }
                }
            }
        }
        det
    }

    /// Coefficients `c_1..c_n` of `det(lambda I - M) = lambda^n + c_1 lambda^(n-1) + ... + c_n`
    /// (Faddeev-LeVerrier).
    pub fn charpoly_coeffs(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = Vec::with_capacity(n);
        let mut mk = Matrix::zeros(n, n);
        let mut c_prev = Scalar::one();
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{k-1} I
            let mut next = self * &mk;
            for i in 0..n {
                next[(i, i)] += &c_prev;
            }
            let am = self * &next;
            let tr: Scalar = (0..n).map(|i| am[(i, i)].clone()).sum();
            let c = -(&tr / &Scalar::from_int(k as i64));
            coeffs.push(c.clone());
            mk = next;
            c_prev = c;
        }
        coeffs
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut m = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        m[(i, j)] += &p;
                    }
                }
            }
        }
        m
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_dependent_vectors() {
        let v = |xs: &[(usize, i64)]| -> SparseVec {
            xs.iter().map(|&(i, c)| (i, Scalar::from_int(c))).collect()
        };
        let imgs = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1)]), v(&[(0, 2), (1, 3)])];
        let k = kernel(&imgs);
        assert_eq!(k.len(), 1);
        // 2*a + b - c = 0
        let lam = &k[0];
        let mut acc: SparseVec = Vec::new();
        for (i, c) in lam {
            acc = axpy(&acc, c, &imgs[*i]);
        }
        assert!(acc.is_empty());
    }

    #[test]
    fn dense_ops() {
        let m = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det(), Scalar::from_int(-2));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert_eq!(m.charpoly_coeffs(), vec![Scalar::from_int(-5), Scalar::from_int(-2)]);
        let s = Matrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.kernel().len(), 1);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn rref_is_reduced() {
        let mut e = Echelon::new();
        e.insert(vec![(0, Scalar::one()), (1, Scalar::one()), (2, Scalar::one())]);
        e.insert(vec![(1, Scalar::one()), (2, Scalar::from_int(2))]);
        let r = e.rref();
        assert_eq!(r[0], vec![(0, Scalar::one()), (2, Scalar::from_int(-1))]);
    }
}
