//! Finite-dimensional algebras given by structure constants.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix, SparseVec};
use crate::scalar::Scalar;

/// Algebra with basis `e_0..e_{n-1}` and `e_i e_j = sum_k table[i][j][k] e_k`.
#[derive(Clone, Debug)]
pub struct FiberAlgebra {
    pub labels: Vec<String>,
    pub table: Vec<Vec<Vec<Scalar>>>,
}

/// Isomorphism invariants compared across points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiberInvariants {
    pub dim: usize,
    pub center_dim: usize,
    pub radical_dim: usize,
    pub semisimple_dim: usize,
}

impl FiberInvariants {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.dim, self.center_dim, self.radical_dim, self.semisimple_dim)
    }
}

impl FiberAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Full matrix algebra `M_n(k)` on the matrix units.
    pub fn matrix_algebra(n: usize) -> FiberAlgebra {
        let d = n * n;
        let mut table = vec![vec![vec![Scalar::zero(); d]; d]; d];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, out) in row.iter_mut().enumerate() {
                let (i, j) = (a / n, a % n);
                let (k, l) = (b / n, b % n);
                if j == k {
                    out[i * n + l] = Scalar::one();
                }
            }
        }
        let labels = (0..d).map(|a| format!("E{}{}", a / n + 1, a % n + 1)).collect();
        FiberAlgebra { labels, table }
    }

    /// Group algebra of the cyclic group of order `n` over the rationals.
    pub fn cyclic_group_algebra(n: usize) -> FiberAlgebra {
        let mut table = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, out) in row.iter_mut().enumerate() {
                out[(a + b) % n] = Scalar::one();
            }
        }
        FiberAlgebra { labels: (0..n).map(|a| format!("g{a}")).collect(), table }
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&xy * c);
                    }
                }
            }
        }
        out
    }

    fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    /// Exhaustive check of `(e_i e_j) e_k = e_i (e_j e_k)`.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ij = &self.table[i][j];
                (0..n).all(|k| {
                    let left = self.mul(ij, &self.basis_vec(k));
                    let right = self.mul(&self.basis_vec(i), &self.table[j][k]);
                    left == right
                })
            })
        })
    }

    /// The two-sided identity, if one exists.
    pub fn unit(&self) -> Option<Vec<Scalar>> {
        let n = self.dim();
        // unknown u: sum_i u_i e_i e_j = e_j and sum_i u_i e_j e_i = e_j for all j
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs: Vec<Scalar> = Vec::new();
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| self.table[i][j][k].clone()).collect());
                rhs.push(if j == k { Scalar::one() } else { Scalar::zero() });
                rows.push((0..n).map(|i| self.table[j][i][k].clone()).collect());
                rhs.push(if j == k { Scalar::one() } else { Scalar::zero() });
            }
        }
        let aug: Vec<Vec<Scalar>> = rows
            .into_iter()
            .zip(rhs)
            .map(|(mut r, b)| {
                r.push(-b);
                r
            })
            .collect();
        let ker = Matrix::from_rows(aug).kernel();
        // a solution is a kernel vector with last coordinate 1
        let v = ker.into_iter().find(|v| !v[n].is_zero())?;
        let s = v[n].inv().unwrap();
        Some(v[..n].iter().map(|x| x * &s).collect())
    }

    pub fn invariants(&self) -> Result<FiberInvariants> {
        if !self.is_associative() {
            return Err(Error::NonAssociative);
        }
        let n = self.dim();
        // center: kernel of b -> ([b, e_j])_j
        let images: Vec<SparseVec> = (0..n)
            .map(|i| {
                let mut v: SparseVec = Vec::new();
                for j in 0..n {
                    for k in 0..n {
                        let c = &self.table[i][j][k] - &self.table[j][i][k];
                        if !c.is_zero() {
                            v.push((j * n + k, c));
                        }
                    }
                }
                v
            })
            .collect();
        let center_dim = kernel(&images).len();
        // trace form T(a, b) = tr(L_ab)
        let tr: Vec<Scalar> = (0..n).map(|c| (0..n).map(|i| self.table[c][i][i].clone()).sum()).collect();
        let gram: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = Scalar::zero();
                        for (k, c) in self.table[i][j].iter().enumerate() {
                            if !c.is_zero() {
                                s += &(c * &tr[k]);
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let radical_dim = if n == 0 { 0 } else { n - Matrix::from_rows(gram).rank() };
        Ok(FiberInvariants { dim: n, center_dim, radical_dim, semisimple_dim: n - radical_dim })
    }
}

pub fn fiber_invariants(f: &FiberAlgebra) -> Result<FiberInvariants> {
    f.invariants()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_and_commutative() {
        let m2 = FiberAlgebra::matrix_algebra(2);
        assert_eq!(m2.invariants().unwrap().as_tuple(), (4, 1, 0, 4));
        assert!(m2.unit().is_some());
        let z2 = FiberAlgebra::cyclic_group_algebra(2);
        assert_eq!(z2.invariants().unwrap().as_tuple(), (2, 2, 0, 2));
    }

    #[test]
    fn dual_numbers_have_radical() {
        // k[e]/(e^2)
        let z = Scalar::zero;
        let o = Scalar::one;
        let table = vec![vec![vec![o(), z()], vec![z(), o()]], vec![vec![z(), o()], vec![z(), z()]]];
        let a = FiberAlgebra { labels: vec!["1".into(), "e".into()], table };
        assert_eq!(a.invariants().unwrap().as_tuple(), (2, 2, 1, 1));
    }

    #[test]
    fn rejects_non_associative() {
        let mut m = FiberAlgebra::matrix_algebra(2);
        m.table[1][2][0] = Scalar::from_int(2);
        assert_eq!(m.invariants(), Err(Error::NonAssociative));
    }
}
