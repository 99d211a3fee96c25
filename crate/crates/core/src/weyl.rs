//! Finite Weyl groups in their reflection representation, and the
//! parabolic versus eigenvalue censuses.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{group_closure, MatrixGroup};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::strata::double;

pub const DEFAULT_WEYL_CAP: usize = 1152;

/// An irreducible factor: type letter and rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub kind: char,
    pub rank: usize,
}

/// A (possibly reducible) root system such as `A2`, `B3` or `A2xA1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSystemSpec {
    pub factors: Vec<Factor>,
}

impl RootSystemSpec {
    pub fn parse(text: &str) -> Result<RootSystemSpec> {
        let mut factors = Vec::new();
        for part in text.split(['x', '*', '+']) {
            let part = part.trim();
            let mut chars = part.chars();
            let kind = chars.next().ok_or_else(|| Error::Schema(format!("empty root system factor in `{text}`")))?;
            let kind = kind.to_ascii_uppercase();
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Schema(format!("bad rank in root system factor `{part}`")))?;
            factors.push(Factor::new(kind, rank)?);
        }
        Ok(RootSystemSpec { factors })
    }

    pub fn single(kind: char, rank: usize) -> Result<RootSystemSpec> {
        Ok(RootSystemSpec { factors: vec![Factor::new(kind, rank)?] })
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }

    pub fn is_type_a(&self) -> bool {
        self.factors.iter().all(|f| f.kind == 'A')
    }

    /// Block-diagonal Cartan matrix `a_ij = <alpha_i^vee, alpha_j>`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut out = vec![vec![0; n]; n];
        let mut off = 0;
        for f in &self.factors {
            let c = f.cartan();
            for i in 0..f.rank {
                for j in 0..f.rank {
                    out[off + i][off + j] = c[i][j];
                }
            }
            off += f.rank;
        }
        out
    }

    /// Simple reflections on `h` in the basis of simple roots.
    pub fn simple_reflections(&self) -> Vec<Matrix> {
        let a = self.cartan();
        let n = a.len();
        (0..n)
            .map(|i| {
                let mut s = Matrix::identity(n);
                for j in 0..n {
                    s[(i, j)] -= &Scalar::from_int(a[i][j]);
                }
                s
            })
            .collect()
    }
}

impl Factor {
    pub fn new(kind: char, rank: usize) -> Result<Factor> {
        let ok = match kind {
            'A' => rank >= 1,
            'B' | 'C' => rank >= 2,
            'D' => rank >= 3,
            'G' => rank == 2,
            'F' => rank == 4,
            _ => false,
        };
        if ok {
            Ok(Factor { kind, rank })
        } else {
            Err(Error::Unsupported(format!("root system type {kind}{rank} (supported: A, B, C, D, G2, F4)")))
        }
    }

    fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.kind {
            'A' | 'B' | 'C' => {
                for i in 0..n.saturating_sub(1) {
                    link(&mut a, i, i + 1);
                }
                match self.kind {
                    'B' => a[n - 1][n - 2] = -2,
                    'C' => a[n - 2][n - 1] = -2,
                    _ => {}
                }
            }
            'D' => {
                for i in 0..n - 2 {
                    link(&mut a, i, i + 1);
                }
                link(&mut a, n - 3, n - 1);
            }
            'G' => {
                link(&mut a, 0, 1);
                a[1][0] = -3;
            }
            'F' => {
                link(&mut a, 0, 1);
                link(&mut a, 1, 2);
                link(&mut a, 2, 3);
                a[1][2] = -2;
            }
            _ => unreachable!("validated in Factor::new"),
        }
        a
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{}{}", x.kind, x.rank)?;
        }
        Ok(())
    }
}

/// A Weyl group acting on `h`, with its simple reflections marked.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub spec: RootSystemSpec,
    pub group: MatrixGroup,
    /// Element indices of the simple reflections.
    pub simple: Vec<usize>,
}

pub fn build_weyl(spec: &RootSystemSpec, cap: usize) -> Result<WeylGroup> {
    let gens = spec.simple_reflections();
    let group = group_closure(&gens, None, cap)?;
    let simple = gens.iter().map(|g| group.index_of(g).unwrap()).collect();
    Ok(WeylGroup { spec: spec.clone(), group, simple })
}

impl WeylGroup {
    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    /// The same group acting on `h ⊕ h*` with the standard symplectic form.
    pub fn doubled(&self) -> Result<MatrixGroup> {
        let gens: Vec<Matrix> = self.simple.iter().map(|&s| double(self.group.element(s))).collect();
        group_closure(&gens, Some(Matrix::standard_symplectic(self.rank())), self.group.order())
    }

    fn codim_fixed(&self, elems: &[usize]) -> usize {
        self.rank() - self.group.fixed_space(elems).len()
    }

    /// Number of classes of parabolic subgroups `W_J` per rank `k`.
    pub fn parabolic_census(&self) -> Vec<usize> {
        let n = self.rank();
        let subsets: Vec<Vec<usize>> = (0u32..(1 << n))
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.simple[i]).collect())
            .collect();
        let parabolics: Vec<(Vec<usize>, HashSet<usize>, usize)> = subsets
            .into_iter()
            .map(|j| {
                let elems = self.group.generate(&j);
                let k = self.codim_fixed(&elems);
                let set = elems.iter().copied().collect();
                (j, set, k)
            })
            .collect();
        let order = self.group.order();
        self.group.table();
        let inverses: Vec<usize> = (0..order).map(|w| self.group.inverse(w)).collect();
        // union-find over conjugacy of W_J
        let mut rep: Vec<usize> = (0..parabolics.len()).collect();
        for a in 0..parabolics.len() {
            if rep[a] != a {
                continue;
            }
            for b in a + 1..parabolics.len() {
                if rep[b] != b {
                    continue;
                }
                let (ja, sa, ka) = &parabolics[a];
                let (_, sb, kb) = &parabolics[b];
                if ka != kb || sa.len() != sb.len() {
                    continue;
                }
                let conj = (0..order).any(|w| {
                    ja.iter().all(|&s| sb.contains(&self.group.mul(self.group.mul(w, s), inverses[w])))
                });
                if conj {
                    rep[b] = a;
                }
            }
        }
        let mut p = vec![0; n + 1];
        for (a, (_, _, k)) in parabolics.iter().enumerate() {
            if rep[a] == a {
                p[*k] += 1;
            }
        }
        p
    }

    /// Number of conjugacy classes of elements per `k = n - dim ker(w - 1)`.
    pub fn eigen_multiplicity_census(&self) -> Vec<usize> {
        let n = self.rank();
        let mut e = vec![0; n + 1];
        for class in self.group.conjugacy_classes() {
            e[self.codim_fixed(&class[..1])] += 1;
        }
        e
    }

    pub fn compare_census(&self) -> CensusTable {
        let p = self.parabolic_census();
        let e = self.eigen_multiplicity_census();
        let n = self.rank();
        let rows: Vec<CensusRow> = (0..=n)
            .map(|k| CensusRow { k, eigenvalue_one_multiplicity: n - k, parabolic: p[k], elements: e[k], equal: p[k] == e[k] })
            .collect();
        let agree = rows.iter().all(|r| r.equal);
        CensusTable { system: self.spec.to_string(), rank: n, order: self.group.order(), rows, agree }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    /// Codimension of the fixed space on `h`.
    pub k: usize,
    /// `n - k`.
    pub eigenvalue_one_multiplicity: usize,
    pub parabolic: usize,
    pub elements: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusTable {
    pub system: String,
    pub rank: usize,
    pub order: usize,
    pub rows: Vec<CensusRow>,
    pub agree: bool,
}

impl CensusTable {
    pub fn parabolic(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.parabolic).collect()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.elements).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn census(s: &str) -> CensusTable {
        build_weyl(&RootSystemSpec::parse(s).unwrap(), DEFAULT_WEYL_CAP).unwrap().compare_census()
    }

    #[test]
    fn orders() {
        for (s, n) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("A2xA1", 12)] {
            assert_eq!(build_weyl(&RootSystemSpec::parse(s).unwrap(), DEFAULT_WEYL_CAP).unwrap().group.order(), n, "{s}");
        }
    }

    #[test]
    fn small_censuses() {
        let a2 = census("A2");
        assert_eq!(a2.parabolic(), vec![1, 1, 1]);
        assert!(a2.agree);
        let b2 = census("B2");
        assert_eq!(b2.parabolic(), vec![1, 2, 1]);
        assert_eq!(b2.elements(), vec![1, 2, 2]);
        assert!(!b2.agree);
        assert_eq!(census("A3").parabolic(), vec![1, 1, 2, 1]);
    }

    #[test]
    fn rejects_unknown_types() {
        assert!(RootSystemSpec::parse("E6").is_err());
        assert!(RootSystemSpec::parse("G3").is_err());
    }
}
