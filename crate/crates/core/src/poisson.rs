//! Poisson structures on presented affine algebras.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{all_minors, Ideal};
use crate::linalg::{kernel, Echelon, Matrix, SparseVec};
use crate::parse::parse_poly;
use crate::poly::{Monomial, MonomialOrder, Poly, Ring};
use crate::scalar::Scalar;

/// A ring `k[z_1..z_m] / relations` with the bracket `{z_i, z_j} = matrix[i][j]`.
#[derive(Clone, Debug)]
pub struct PoissonStructure {
    ring: Ring,
    relations: Ideal,
    matrix: Vec<Vec<Poly>>,
    valid: OnceLock<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub skew_symmetric: bool,
    /// Generator triples `(i, j, k)` whose cyclic Jacobi sum is not in the relations.
    pub jacobi_failures: Vec<(usize, usize, usize)>,
    pub relations_stable: bool,
    pub valid: bool,
}

#[derive(Clone, Debug)]
pub struct CoreResult {
    pub core: Ideal,
    pub certified: bool,
    pub iterations: usize,
}

/// Outcome of comparing two Poisson cores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoreComparison {
    Same,
    Different,
    /// At least one core did not certify.
    Indeterminate,
}

#[derive(Clone, Debug)]
pub struct RankStratum {
    /// Points where the bracket matrix has rank at most `rank`.
    pub rank: usize,
    pub ideal: Ideal,
}

pub const DEFAULT_MAX_ITERS: usize = 32;
pub const DEFAULT_HEADROOM: u32 = 4;

impl PoissonStructure {
    pub fn new(ring: &Ring, relations: Ideal, matrix: Vec<Vec<Poly>>) -> Result<PoissonStructure> {
        let m = ring.nvars();
        if matrix.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: matrix.len() });
        }
        for row in &matrix {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: row.len() });
            }
            if row.iter().any(|p| !p.ring().compatible(ring)) {
                return Err(Error::RingMismatch);
            }
        }
        if !relations.ring().compatible(ring) {
            return Err(Error::RingMismatch);
        }
        let matrix = matrix.into_iter().map(|r| r.into_iter().map(|p| p.in_ring(ring)).collect()).collect();
        Ok(PoissonStructure { ring: ring.clone(), relations, matrix, valid: OnceLock::new() })
    }

    /// Builds the matrix from brackets `{a, b} = f` given by variable names;
    /// the remaining entries follow by skew-symmetry.
    pub fn from_brackets(ring: &Ring, relations: Ideal, brackets: &[(&str, &str, &str)]) -> Result<PoissonStructure> {
        let m = ring.nvars();
        let mut matrix = vec![vec![Poly::zero(ring); m]; m];
        for (a, b, f) in brackets {
            let i = ring.var_index(a).ok_or_else(|| Error::UnknownVariable(a.to_string()))?;
            let j = ring.var_index(b).ok_or_else(|| Error::UnknownVariable(b.to_string()))?;
            let p = parse_poly(f, ring)?;
            matrix[j][i] = -&p;
            matrix[i][j] = p;
        }
        PoissonStructure::new(ring, relations, matrix)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn matrix(&self) -> &[Vec<Poly>] {
        &self.matrix
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Hamiltonian derivation `f -> {z_i, f}`, not reduced.
    pub fn hamiltonian(&self, i: usize, f: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.ring);
        for (j, mij) in self.matrix[i].iter().enumerate() {
            if mij.is_zero() {
                continue;
            }
            let d = f.derivative(j);
            if !d.is_zero() {
                acc = &acc + &(mij * &d);
            }
        }
        acc
    }

    /// `sum_ij df/dz_i dg/dz_j M_ij`, not reduced.
    pub fn raw_bracket(&self, f: &Poly, g: &Poly) -> Poly {
        let m = self.nvars();
        let df: Vec<Poly> = (0..m).map(|i| f.derivative(i)).collect();
        let dg: Vec<Poly> = (0..m).map(|j| g.derivative(j)).collect();
        let mut acc = Poly::zero(&self.ring);
        for i in 0..m {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if dg[j].is_zero() || self.matrix[i][j].is_zero() {
                    continue;
                }
                acc = &acc + &(&(&df[i] * &dg[j]) * &self.matrix[i][j]);
            }
        }
        acc
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let m = self.nvars();
        let rel = &self.relations;
        let mut skew = true;
        for i in 0..m {
            if !rel.contains(&self.matrix[i][i])? {
                skew = false;
            }
            for j in i + 1..m {
                if !rel.contains(&(&self.matrix[i][j] + &self.matrix[j][i]))? {
                    skew = false;
                }
            }
        }
        let mut jacobi_failures = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let s = &(&self.hamiltonian(i, &self.matrix[j][k]) + &self.hamiltonian(j, &self.matrix[k][i]))
                        + &self.hamiltonian(k, &self.matrix[i][j]);
                    if !rel.contains(&s)? {
                        jacobi_failures.push((i, j, k));
                    }
                }
            }
        }
        let mut relations_stable = true;
        'outer: for r in rel.gens() {
            for i in 0..m {
                if !rel.contains(&self.hamiltonian(i, r))? {
                    relations_stable = false;
                    break 'outer;
                }
            }
        }
        let valid = skew && jacobi_failures.is_empty() && relations_stable;
        let _ = self.valid.set(valid);
        Ok(ValidationReport { skew_symmetric: skew, jacobi_failures, relations_stable, valid })
    }

    pub fn is_valid(&self) -> Result<bool> {
        if let Some(&v) = self.valid.get() {
            return Ok(v);
        }
        Ok(self.validate()?.valid)
    }

    fn require_valid(&self) -> Result<()> {
        if self.is_valid()? {
            Ok(())
        } else {
            Err(Error::InvalidStructure("skew-symmetry, Jacobi or relation stability fails".into()))
        }
    }

    /// `{f, g}` reduced modulo the relations.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        self.require_valid()?;
        if !f.ring().compatible(&self.ring) || !g.ring().compatible(&self.ring) {
            return Err(Error::RingMismatch);
        }
        self.relations.normal_form(&self.raw_bracket(&f.in_ring(&self.ring), &g.in_ring(&self.ring)))
    }

    /// True when `{z_i, g} ∈ J + relations` for every variable and generator.
    pub fn is_poisson_ideal(&self, j: &Ideal) -> Result<bool> {
        let full = j.sum(&self.relations)?;
        for g in j.gens() {
            for i in 0..self.nvars() {
                if !full.contains(&self.hamiltonian(i, g))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Maximum degree by which a Hamiltonian derivation can raise degree.
    fn degree_shift(&self) -> u32 {
        self.matrix
            .iter()
            .flatten()
            .filter_map(Poly::total_degree)
            .max()
            .map_or(0, |d| d.saturating_sub(1))
    }

    /// One refinement step of the core iteration: the largest subspace `U` of
    /// `(J + relations)` in degrees `<= D` with `{z_i, U}` inside the degree
    /// closure of `U`, re-saturated to an ideal. `D` is the top generator
    /// degree of `J` plus `headroom`.
    pub fn core_step(&self, j: &Ideal, headroom: u32) -> Result<Ideal> {
        let k = j.sum(&self.relations)?;
        let dr = self.ring.reordered(MonomialOrder::DegRevLex);
        let k = Ideal::new(&dr, k.gens().to_vec())?;
        let gb = k.groebner_basis()?.to_vec();
        if gb.iter().any(Poly::is_constant) {
            return Ok(Ideal::unit(&self.ring));
        }
        let top = gb.iter().filter_map(Poly::total_degree).max().unwrap_or(0);
        let d = top + headroom;
        let e = self.degree_shift();
        let n = self.nvars();

        let monos = Monomial::all_up_to_degree(n, d + e);
        let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let to_vec = |p: &Poly| -> SparseVec {
            let mut v: SparseVec = p.raw_terms().map(|(m, c)| (index[m], c.clone())).collect();
            v.sort_by_key(|t| t.0);
            v
        };
        let from_vec = |v: &SparseVec| -> Poly { Poly::from_terms(&self.ring, v.iter().map(|(i, c)| (monos[*i].clone(), c.clone()))) };

        // U_0 = K ∩ P_{<=d}
        let mut u = Echelon::new();
        for g in &gb {
            let dg = g.total_degree().unwrap();
            for m in Monomial::all_up_to_degree(n, d - dg.min(d)) {
                if dg + m.degree() <= d {
                    u.insert(to_vec(&g.mul_term(&m, &Scalar::one()).in_ring(&self.ring)));
                }
            }
        }
        let relations_window: Vec<SparseVec> = if e > 0 {
            let rgb = Ideal::new(&dr, self.relations.gens().to_vec())?.groebner_basis()?.to_vec();
            let mut out = Vec::new();
            for g in &rgb {
                let dg = g.total_degree().unwrap();
                for m in Monomial::all_up_to_degree(n, (d + e).saturating_sub(dg)) {
                    out.push(to_vec(&g.mul_term(&m, &Scalar::one()).in_ring(&self.ring)));
                }
            }
            out
        } else {
            Vec::new()
        };

        loop {
            let basis = u.rref();
            // W = degree closure of U up to d + e, plus relations there
            let w = if e == 0 {
                u.clone()
            } else {
                let mut w = Echelon::new();
                for b in &basis {
                    let p = from_vec(b);
                    let db = p.total_degree().unwrap_or(0);
                    for m in Monomial::all_up_to_degree(n, (d + e).saturating_sub(db)) {
                        w.insert(to_vec(&p.mul_term(&m, &Scalar::one())));
                    }
                }
                for r in &relations_window {
                    w.insert(r.clone());
                }
                w
            };
            let width = monos.len();
            let images: Vec<SparseVec> = basis
                .iter()
                .map(|b| {
                    let f = from_vec(b);
                    let mut img: SparseVec = Vec::new();
                    for i in 0..n {
                        let r = w.reduce(to_vec(&self.hamiltonian(i, &f)));
                        img.extend(r.into_iter().map(|(c, v)| (i * width + c, v)));
                    }
                    img
                })
                .collect();
            let ker = kernel(&images);
            if ker.len() == basis.len() {
                break;
            }
            let mut next = Echelon::new();
            for lam in &ker {
                let mut v: SparseVec = Vec::new();
                for (idx, c) in lam {
                    v = crate::linalg::axpy(&v, c, &basis[*idx]);
                }
                next.insert(v);
            }
            u = next;
        }

        let gens: Vec<Poly> = u.rref().iter().map(|v| from_vec(v)).collect();
        let out = Ideal::new(&self.ring, gens)?.sum(&self.relations)?;
        out.groebner_basis()?;
        Ok(out)
    }

    /// Largest Poisson ideal inside `I`, by descending fixed-point iteration
    /// with an exact stability check on the result.
    pub fn poisson_core(&self, ideal: &Ideal, max_iters: usize, headroom: u32) -> Result<CoreResult> {
        self.require_valid()?;
        let target = ideal.sum(&self.relations)?;
        let mut current = target.clone();
        for it in 1..=max_iters.max(1) {
            let next = self.core_step(&current, headroom)?;
            if next.equals(&current)? {
                let certified = self.is_poisson_ideal(&next)? && target.contains_ideal(&next)?;
                return Ok(CoreResult { core: next, certified, iterations: it });
            }
            current = next;
        }
        Ok(CoreResult { core: current, certified: false, iterations: max_iters })
    }

    /// Core of the maximal ideal of a point, with default iteration limits.
    pub fn core_at_point(&self, point: &[Scalar]) -> Result<CoreResult> {
        self.check_point(point)?;
        let m = Ideal::point(&self.ring, point)?;
        self.poisson_core(&m, DEFAULT_MAX_ITERS, DEFAULT_HEADROOM)
    }

    /// Basis of `{f : deg f <= bound, {f, z_i} ∈ relations}` modulo the
    /// relations, in reduced echelon form (the constant 1 always appears).
    pub fn casimirs(&self, bound: u32) -> Result<Vec<Poly>> {
        self.require_valid()?;
        let dr = self.ring.reordered(MonomialOrder::DegRevLex);
        let rel = Ideal::new(&dr, self.relations.gens().to_vec())?;
        let red = rel.reducer()?;
        let mut monos: Vec<Monomial> = Monomial::all_up_to_degree(self.nvars(), bound)
            .into_iter()
            .filter(|m| red.is_standard(m))
            .collect();
        // leading monomials first so echelon pivots are leading terms
        monos.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(b, a));
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        let images: Vec<SparseVec> = monos
            .iter()
            .map(|m| {
                let f = Poly::monomial(&self.ring, m.clone(), Scalar::one());
                let mut img: SparseVec = Vec::new();
                for i in 0..self.nvars() {
                    let r = red.reduce(&self.hamiltonian(i, &f).in_ring(&dr));
                    for (mm, c) in r.raw_terms() {
                        let next = index.len();
                        let k = *index.entry(mm.clone()).or_insert(next);
                        img.push((k * self.nvars() + i, c.clone()));
                    }
                }
                img.sort_by_key(|t| t.0);
                img
            })
            .collect();
        Ok(kernel(&images)
            .into_iter()
            .map(|lam| Poly::from_terms(&self.ring, lam.into_iter().map(|(k, c)| (monos[k].clone(), c))))
            .collect())
    }

    fn check_point(&self, point: &[Scalar]) -> Result<()> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: point.len() });
        }
        for r in self.relations.gens() {
            if !r.evaluate(point)?.is_zero() {
                return Err(Error::NotOnVariety(format!("relation {r} does not vanish")));
            }
        }
        Ok(())
    }

    pub fn evaluate_matrix(&self, point: &[Scalar]) -> Result<Matrix> {
        let rows = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(rows))
    }

    /// Rank of the bracket matrix at a point of the variety.
    pub fn rank_at_point(&self, point: &[Scalar]) -> Result<usize> {
        self.check_point(point)?;
        Ok(self.evaluate_matrix(point)?.rank())
    }

    /// For each even `j`, the ideal of points where the rank is at most `j`:
    /// relations plus all minors of order `j + 1`.
    pub fn rank_stratum_ideals(&self) -> Result<Vec<RankStratum>> {
        let m = self.nvars();
        let mut out = Vec::new();
        for j in (0..=2 * (m / 2)).step_by(2) {
            let minors = if j < m { all_minors(&self.matrix, j + 1) } else { Vec::new() };
            let ideal = self.relations.with_generators(minors)?;
            ideal.groebner_basis()?;
            out.push(RankStratum { rank: j, ideal });
        }
        Ok(out)
    }

    /// Compares the certified cores of two points.
    pub fn same_core(&self, p: &[Scalar], q: &[Scalar]) -> Result<CoreComparison> {
        let a = self.core_at_point(p)?;
        let b = if p == q { a.clone() } else { self.core_at_point(q)? };
        if !a.certified || !b.certified {
            return Ok(CoreComparison::Indeterminate);
        }
        Ok(if a.core.equals(&b.core)? { CoreComparison::Same } else { CoreComparison::Different })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn dixmier_moeglin() -> PoissonStructure {
        let r = PolyRing::rational(&["x", "y", "z"]);
        PoissonStructure::from_brackets(&r, Ideal::zero(&r), &[("x", "z", "x"), ("y", "z", "y")]).unwrap()
    }

    fn pt(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&v| Scalar::from_int(v)).collect()
    }

    #[test]
    fn validation() {
        assert!(dixmier_moeglin().validate().unwrap().valid);
        let r = PolyRing::rational(&["x", "y", "z"]);
        let so3 = PoissonStructure::from_brackets(&r, Ideal::zero(&r), &[("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")]).unwrap();
        assert!(so3.validate().unwrap().valid);
        let bad = PoissonStructure::from_brackets(&r, Ideal::zero(&r), &[("x", "y", "x"), ("x", "z", "y")]).unwrap();
        let rep = bad.validate().unwrap();
        assert!(!rep.valid);
        assert_eq!(rep.jacobi_failures, vec![(0, 1, 2)]);
        assert!(matches!(bad.bracket(&Poly::var(&r, 0), &Poly::var(&r, 1)), Err(Error::InvalidStructure(_))));
    }

    #[test]
    fn brackets() {
        let p = dixmier_moeglin();
        let r = p.ring().clone();
        let xy = parse_poly("x*y", &r).unwrap();
        assert_eq!(p.bracket(&xy, &Poly::var(&r, 2)).unwrap(), parse_poly("2*x*y", &r).unwrap());
        assert!(p.bracket(&xy, &xy).unwrap().is_zero());
    }

    #[test]
    fn poisson_ideals() {
        let p = dixmier_moeglin();
        let r = p.ring().clone();
        assert!(p.is_poisson_ideal(&Ideal::parse(&r, &["x", "y"]).unwrap()).unwrap());
        assert!(p.is_poisson_ideal(&Ideal::parse(&r, &["x - 2*y"]).unwrap()).unwrap());
        assert!(!p.is_poisson_ideal(&Ideal::parse(&r, &["z"]).unwrap()).unwrap());
    }

    #[test]
    fn cores() {
        let p = dixmier_moeglin();
        let r = p.ring().clone();
        let c = p.core_at_point(&pt(&[1, 1, 0])).unwrap();
        assert!(c.certified);
        assert!(c.core.equals(&Ideal::parse(&r, &["x - y"]).unwrap()).unwrap());
        let c = p.core_at_point(&pt(&[3, 1, -1])).unwrap();
        assert!(c.certified);
        assert!(c.core.equals(&Ideal::parse(&r, &["x - 3*y"]).unwrap()).unwrap());
        let i = Ideal::parse(&r, &["x", "y"]).unwrap();
        let c = p.poisson_core(&i, 32, 4).unwrap();
        assert_eq!(c.iterations, 1);
        assert!(c.certified && c.core.equals(&i).unwrap());
    }

    #[test]
    fn casimir_spaces() {
        let p = dixmier_moeglin();
        let c = p.casimirs(6).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].is_constant());
        let r = p.ring().clone();
        let zero = PoissonStructure::new(&r, Ideal::zero(&r), vec![vec![Poly::zero(&r); 3]; 3]).unwrap();
        assert_eq!(zero.casimirs(2).unwrap().len(), 10);
    }

    #[test]
    fn ranks() {
        let p = dixmier_moeglin();
        assert_eq!(p.rank_at_point(&pt(&[1, 1, 0])).unwrap(), 2);
        assert_eq!(p.rank_at_point(&pt(&[0, 0, 5])).unwrap(), 0);
        let strata = p.rank_stratum_ideals().unwrap();
        let r = p.ring().clone();
        assert!(strata[0].ideal.equals(&Ideal::parse(&r, &["x", "y"]).unwrap()).unwrap());
        assert!(strata[1].ideal.is_zero() || strata[1].ideal.equals(&Ideal::zero(&r)).unwrap());
    }

    #[test]
    fn core_comparison() {
        let p = dixmier_moeglin();
        assert_eq!(p.same_core(&pt(&[1, 1, 0]), &pt(&[2, 2, 7])).unwrap(), CoreComparison::Same);
        assert_eq!(p.same_core(&pt(&[1, 1, 0]), &pt(&[0, 0, 0])).unwrap(), CoreComparison::Different);
    }

    #[test]
    fn alpha_core_is_level_set() {
        let r = PolyRing::rational(&["x", "y", "z"]);
        let p = PoissonStructure::from_brackets(&r, Ideal::zero(&r), &[("x", "z", "-x"), ("y", "z", "y")]).unwrap();
        let c = p.core_at_point(&pt(&[2, 3, 1])).unwrap();
        assert!(c.certified);
        assert!(c.core.equals(&Ideal::parse(&r, &["x*y - 6"]).unwrap()).unwrap());
        let fixed = p.core_at_point(&pt(&[0, 0, 5])).unwrap();
        assert!(fixed.certified);
        assert!(fixed.core.equals(&Ideal::parse(&r, &["x", "y", "z - 5"]).unwrap()).unwrap());
    }
}
