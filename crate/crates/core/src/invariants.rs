//! Invariant rings of finite matrix groups.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groebner::{groebner, Budget, Reducer};
use crate::groups::MatrixGroup;
use crate::ideal::Ideal;
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, MonomialOrder, Poly, PolyRing, Ring};
use crate::scalar::{Rational, Scalar};

/// Generators of `k[V]^G`, the relations among them, and the rewriting data
/// that expresses invariants in the generators.
#[derive(Clone, Debug)]
pub struct InvariantPresentation {
    /// `k[V]`.
    pub source: Ring,
    pub generators: Vec<Poly>,
    /// `k[A, B, ...]`, one variable per generator.
    pub target: Ring,
    pub relations: Ideal,
    /// Molien series coefficients up to the degree bound.
    pub molien: Vec<Rational>,
    elim_ring: Ring,
    elim: Reducer,
}

/// Presentation variable names `A, B, ...`, then `A1, B1, ...` beyond 26.
pub fn generator_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            let c = (b'A' + (i % 26) as u8) as char;
            if i < 26 {
                c.to_string()
            } else {
                format!("{c}{}", i / 26)
            }
        })
        .collect()
}

/// Truncated Molien series `|G|^-1 sum_g 1 / det(1 - t g)` up to `t^bound`.
pub fn molien_series(g: &MatrixGroup, bound: usize) -> Vec<Rational> {
    let terms: Vec<Vec<Scalar>> = g
        .elements()
        .par_iter()
        .map(|m| {
            // det(1 - t m) = 1 + c_1 t + ... + c_n t^n
            let c = m.charpoly_coeffs();
            let mut den = vec![Scalar::one()];
            den.extend(c);
            let mut inv = vec![Scalar::zero(); bound + 1];
            inv[0] = Scalar::one();
            for k in 1..=bound {
                let mut acc = Scalar::zero();
                for j in 1..den.len().min(k + 1) {
                    acc -= &(&den[j] * &inv[k - j]);
                }
                inv[k] = acc;
            }
            inv
        })
        .collect();
    let scale = Scalar::from_int(g.order() as i64).inv().unwrap();
    (0..=bound)
        .map(|k| {
            let s: Scalar = terms.iter().map(|t| t[k].clone()).sum();
            let v = &s * &scale;
            v.as_rational().cloned().expect("Molien coefficients are rational")
        })
        .collect()
}

fn degree_space(ring: &Ring, d: u32) -> (Vec<Monomial>, HashMap<Monomial, usize>) {
    let mut monos = Monomial::all_of_degree(ring.nvars(), d);
    monos.sort_by(|a, b| ring.order().cmp(b, a));
    let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    (monos, index)
}

fn to_vec(p: &Poly, index: &HashMap<Monomial, usize>) -> SparseVec {
    let mut v: SparseVec = p.raw_terms().map(|(m, c)| (index[m], c.clone())).collect();
    v.sort_by_key(|t| t.0);
    v
}

fn from_vec(ring: &Ring, v: &SparseVec, monos: &[Monomial]) -> Poly {
    Poly::from_terms(ring, v.iter().map(|(i, c)| (monos[*i].clone(), c.clone())))
}

/// Minimal homogeneous generators of the invariant ring up to the Noether
/// bound `|G|`, checked degree by degree against the Molien series, plus
/// their relation ideal.
pub fn invariant_generators(g: &MatrixGroup) -> Result<InvariantPresentation> {
    invariant_generators_to(g, g.order() as u32)
}

/// As [`invariant_generators`] with an explicit degree bound (at most `|G|`).
pub fn invariant_generators_to(g: &MatrixGroup, bound: u32) -> Result<InvariantPresentation> {
    let ring = g.coordinate_ring();
    let bound = bound.min(g.order() as u32).max(1);
    let molien = molien_series(g, bound as usize);
    let mut gens: Vec<Poly> = Vec::new();
    // invariant bases per degree, for decomposables
    let mut bases: Vec<Vec<Poly>> = vec![vec![Poly::one(&ring)]];
    for d in 1..=bound {
        let (monos, index) = degree_space(&ring, d);
        let images: Vec<SparseVec> = monos
            .par_iter()
            .map(|m| to_vec(&g.reynolds(&Poly::monomial(&ring, m.clone(), Scalar::one())), &index))
            .collect();
        let mut inv = Echelon::new();
        for v in images {
            inv.insert(v);
        }
        let expected = &molien[d as usize];
        if Rational::from_integer((inv.rank() as i64).into()) != *expected {
            return Err(Error::MolienMismatch { degree: d, molien: expected.to_string(), reynolds: inv.rank() });
        }
        let basis: Vec<SparseVec> = inv.rref();
        let mut span = Echelon::new();
        for gen in &gens {
            let e = gen.total_degree().unwrap();
            if e >= d {
                continue;
            }
            for b in &bases[(d - e) as usize] {
                span.insert(to_vec(&(gen * b), &index));
            }
        }
        let mut fresh: Vec<Poly> = Vec::new();
        // lowest pivots first so that e.g. xy is preferred over x^2 + y^2
        for v in basis.iter().rev() {
            if span.insert(v.clone()) {
                fresh.push(from_vec(&ring, v, &monos));
            }
        }
        fresh.reverse();
        gens.extend(fresh);
        bases.push(basis.iter().map(|v| from_vec(&ring, v, &monos)).collect());
    }
    present(ring, gens, molien)
}

fn present(source: Ring, gens: Vec<Poly>, molien: Vec<Rational>) -> Result<InvariantPresentation> {
    let n = source.nvars();
    let k = gens.len();
    let names = generator_names(k);
    let target = PolyRing::new(&names, source.field().clone())?;
    let mut all: Vec<String> = source.vars().to_vec();
    all.extend(names.iter().cloned());
    let elim_ring = PolyRing::with_order(&all, source.field().clone(), MonomialOrder::Block(n))?;
    let src_map: Vec<usize> = (0..n).collect();
    let eqs: Vec<Poly> = gens
        .iter()
        .enumerate()
        .map(|(i, p)| &Poly::var(&elim_ring, n + i) - &p.embed(&elim_ring, &src_map))
        .collect();
    let gb = groebner(&eqs, &MonomialOrder::Block(n), Budget::global())?;
    let back: Vec<usize> = (0..n).map(|_| 0).chain(0..k).collect();
    let rels: Vec<Poly> = gb
        .iter()
        .filter(|p| p.support_vars().iter().all(|&v| v >= n))
        .map(|p| p.embed(&target, &back))
        .collect();
    let relations = Ideal::new(&target, rels)?;
    relations.groebner_basis()?;
    let elim = Reducer::new(&elim_ring, &gb, &MonomialOrder::Block(n));
    Ok(InvariantPresentation { source, generators: gens, target, relations, molien, elim_ring, elim })
}

impl InvariantPresentation {
    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(|p| p.total_degree().unwrap_or(0)).collect()
    }

    /// Expresses an invariant of `k[V]` as a polynomial in the generators.
    pub fn rewrite(&self, f: &Poly) -> Result<Poly> {
        let n = self.source.nvars();
        let k = self.ngens();
        let map: Vec<usize> = (0..n).collect();
        let r = self.elim.reduce(&f.embed(&self.elim_ring, &map));
        if r.support_vars().iter().any(|&v| v < n) {
            return Err(Error::Rewrite(f.to_string()));
        }
        let back: Vec<usize> = (0..n).map(|_| 0).chain(0..k).collect();
        Ok(r.embed(&self.target, &back))
    }

    /// Substitutes the generators: `k[A, B, ...] -> k[V]`.
    pub fn expand(&self, p: &Poly) -> Poly {
        if self.generators.is_empty() {
            return Poly::constant(&self.source, p.as_constant().unwrap_or_else(Scalar::zero));
        }
        p.substitute(&self.generators)
    }

    /// Image of a point of `V` in the presentation coordinates.
    pub fn project(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.generators.iter().map(|g| g.evaluate(v)).collect()
    }

    /// `A = x^2`-style description of each generator.
    pub fn describe(&self) -> Vec<(String, String)> {
        self.target.vars().iter().cloned().zip(self.generators.iter().map(ToString::to_string)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::parse::parse_poly;
    use crate::groups::group_closure;

    #[test]
    fn z2_presentation() {
        let g = MatrixGroup::cyclic(2);
        let p = invariant_generators(&g).unwrap();
        let shown: Vec<String> = p.generators.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["x^2", "x*y", "y^2"]);
        let expect = Ideal::parse(&p.target, &["B^2 - A*C"]).unwrap();
        assert!(p.relations.equals(&expect).unwrap());
        let f = parse_poly("x^4 + 3*x*y^3", &p.source).unwrap();
        assert_eq!(p.rewrite(&f).unwrap().to_string(), "A^2 + 3*B*C");
        assert!(p.rewrite(&parse_poly("x", &p.source).unwrap()).is_err());
    }

    #[test]
    fn trivial_and_symmetric() {
        let p = invariant_generators(&MatrixGroup::trivial(2)).unwrap();
        assert_eq!(p.generators.len(), 2);
        assert!(p.relations.is_zero());
        let swap = group_closure(&[Matrix::from_ints(&[&[0, 1], &[1, 0]])], None, 10).unwrap();
        let p = invariant_generators(&swap).unwrap();
        let shown: Vec<String> = p.generators.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["x + y", "x*y"]);
        assert!(p.relations.is_zero());
    }

    #[test]
    fn molien_of_z4() {
        let g = MatrixGroup::cyclic(4);
        let m = molien_series(&g, 4);
        let ints: Vec<i64> = m.iter().map(|r| r.to_integer().try_into().unwrap()).collect();
        // invariants of diag(i, -i): x^a y^b with a = b mod 4
        assert_eq!(ints, vec![1, 0, 1, 0, 3]);
        let p = invariant_generators(&g).unwrap();
        assert_eq!(p.degrees(), vec![2, 4, 4]);
    }
}
