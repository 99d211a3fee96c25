//! Stabilizer stratification of `V/G`, the induced Poisson structure on the
//! invariant presentation, and fibers of the skew group algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fiber::FiberAlgebra;
use crate::groups::{MatrixGroup, SubgroupClass, DEFAULT_SUBGROUP_CAP};
use crate::ideal::Ideal;
use crate::invariants::InvariantPresentation;
use crate::linalg::Matrix;
use crate::poisson::{CoreComparison, PoissonStructure};
use crate::poly::{Monomial, Poly, PolyRing};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Stratum {
    pub subgroup: SubgroupClass,
    pub fixed_basis: Vec<Vec<Scalar>>,
    /// Linear forms `x∘h - x` in `k[V]`.
    pub i_ideal: Ideal,
    /// Contraction of `I(H)` to the invariant presentation.
    pub j_ideal: Ideal,
}

impl Stratum {
    pub fn fixed_dim(&self) -> usize {
        self.fixed_basis.len()
    }
}

/// True when some point of `V_H` has stabilizer exactly `H`, i.e. the
/// pointwise stabilizer of `V_H` is `H`.
pub fn is_stabilizer(g: &MatrixGroup, h: &[usize]) -> bool {
    let basis = g.fixed_space(h);
    let pointwise: Vec<usize> = (0..g.order())
        .filter(|&x| basis.iter().all(|b| g.element(x).apply(b) == *b))
        .collect();
    pointwise.len() == h.len()
}

/// Ideal of `V_H` in `k[V]`.
pub fn fixed_ideal(g: &MatrixGroup, h: &[usize]) -> Result<Ideal> {
    let ring = g.coordinate_ring();
    let mut gens = Vec::new();
    for &e in h {
        for i in 0..g.dim() {
            let x = Poly::var(&ring, i);
            gens.push(&g.compose(&x, e) - &x);
        }
    }
    let out = Ideal::new(&ring, gens)?;
    out.groebner_basis()?;
    Ok(out)
}

/// `I ∩ k[V]^G` in the presentation coordinates, by eliminating `V` from
/// `I + <A - g_A, ...>`.
pub fn contract(pres: &InvariantPresentation, i: &Ideal) -> Result<Ideal> {
    let n = pres.source.nvars();
    let k = pres.ngens();
    let mut names: Vec<String> = pres.source.vars().to_vec();
    names.extend(pres.target.vars().iter().cloned());
    let big = PolyRing::new(&names, pres.source.field().clone())?;
    let src: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Poly> = i.gens().iter().map(|p| p.embed(&big, &src)).collect();
    for (a, gen) in pres.generators.iter().enumerate() {
        gens.push(&Poly::var(&big, n + a) - &gen.embed(&big, &src));
    }
    let elim = Ideal::new(&big, gens)?.eliminate(&src)?;
    let back: Vec<usize> = (0..n).map(|_| 0).chain(0..k).collect();
    let out = Ideal::new(&pres.target, elim.gens().iter().map(|p| p.embed(&pres.target, &back)).collect())?;
    out.groebner_basis()?;
    Ok(out)
}

/// One stratum per conjugacy class of stabilizer subgroups, ordered by
/// subgroup order (the open stratum first).
pub fn stabilizer_strata(g: &MatrixGroup, pres: &InvariantPresentation) -> Result<Vec<Stratum>> {
    g.symplectic_form()?;
    let classes = g.subgroup_conjugacy_classes(DEFAULT_SUBGROUP_CAP)?;
    let mut out = Vec::new();
    for c in classes {
        if !is_stabilizer(g, &c.representative) {
            continue;
        }
        let fixed_basis = g.fixed_space(&c.representative);
        let i_ideal = fixed_ideal(g, &c.representative)?;
        let j_ideal = contract(pres, &i_ideal)?;
        out.push(Stratum { subgroup: c, fixed_basis, i_ideal, j_ideal });
    }
    Ok(out)
}

/// The bracket `{x_i, x_j} = P_ij` on `k[V]` with `P = -omega^-1` (the
/// standard form gives `{x_k, y_k} = 1`).
pub fn symplectic_poisson(g: &MatrixGroup) -> Result<PoissonStructure> {
    let omega = g.symplectic_form()?;
    let p = omega.inverse().ok_or(Error::NoSymplecticForm)?.scale(&Scalar::from_int(-1));
    let ring = g.coordinate_ring();
    let matrix = (0..g.dim())
        .map(|i| (0..g.dim()).map(|j| Poly::constant(&ring, p[(i, j)].clone())).collect())
        .collect();
    PoissonStructure::new(&ring, Ideal::zero(&ring), matrix)
}

/// Restriction of the symplectic bracket to the invariants, written in the
/// presentation variables.
pub fn induced_poisson(g: &MatrixGroup, pres: &InvariantPresentation) -> Result<PoissonStructure> {
    let sym = symplectic_poisson(g)?;
    let k = pres.ngens();
    let mut matrix = vec![vec![Poly::zero(&pres.target); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let b = sym.raw_bracket(&pres.generators[i], &pres.generators[j]);
            let r = pres.rewrite(&b)?;
            matrix[j][i] = -&r;
            matrix[i][j] = r;
        }
    }
    PoissonStructure::new(&pres.target, pres.relations.clone(), matrix)
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let p: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let q: i64 = rng.gen_range(1..=3);
    Scalar::frac(p, q)
}

/// A random point of `V°_H` (stabilizer exactly `H`).
pub fn sample_stratum_point(g: &MatrixGroup, s: &Stratum, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let h = &s.subgroup.representative;
    loop {
        let mut v = vec![Scalar::zero(); g.dim()];
        for b in &s.fixed_basis {
            let r = random_scalar(rng);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += &(&r * bi);
            }
        }
        if g.stabilizer(&v) == *h {
            return v;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumCheck {
    pub subgroup_order: usize,
    pub class_size: usize,
    pub fixed_dim: usize,
    pub j_generators: Vec<String>,
    pub j_is_poisson: bool,
    pub sampled_ranks: Vec<usize>,
    pub rank_matches: bool,
    pub within: Vec<CoreComparison>,
    pub within_same: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafReport {
    pub strata: Vec<StratumCheck>,
    /// `(stratum a, stratum b, comparison)` for one sample of each pair.
    pub across: Vec<(usize, usize, CoreComparison)>,
    pub across_different: bool,
    /// Number of comparisons that did not certify.
    pub indeterminate: usize,
    pub pass: bool,
}

/// Checks Poisson-ness of every `J(H)`, rank constancy and core
/// (in)equality on sampled points of each stratum.
pub fn verify_leaf_claims(g: &MatrixGroup, pres: &InvariantPresentation, samples: usize, seed: u64) -> Result<LeafReport> {
    let strata = stabilizer_strata(g, pres)?;
    let p = induced_poisson(g, pres)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reps: Vec<Vec<Scalar>> = Vec::new();
    let mut checks = Vec::new();
    let mut indeterminate = 0;
    for s in &strata {
        let j_is_poisson = p.is_poisson_ideal(&s.j_ideal)?;
        let pts: Vec<Vec<Scalar>> = (0..samples.max(1))
            .map(|_| pres.project(&sample_stratum_point(g, s, &mut rng)))
            .collect::<Result<_>>()?;
        let ranks = pts.iter().map(|q| p.rank_at_point(q)).collect::<Result<Vec<_>>>()?;
        let rank_matches = ranks.iter().all(|&r| r == s.fixed_dim());
        let mut within = Vec::new();
        for w in pts.windows(2) {
            within.push(p.same_core(&w[0], &w[1])?);
        }
        indeterminate += within.iter().filter(|c| **c == CoreComparison::Indeterminate).count();
        let within_same = within.iter().all(|c| *c != CoreComparison::Different);
        reps.push(pts[0].clone());
        checks.push(StratumCheck {
            subgroup_order: s.subgroup.order,
            class_size: s.subgroup.class_size,
            fixed_dim: s.fixed_dim(),
            j_generators: s.j_ideal.canonical_strings()?,
            j_is_poisson,
            sampled_ranks: ranks,
            rank_matches,
            within,
            within_same,
        });
    }
    let mut across = Vec::new();
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            across.push((a, b, p.same_core(&reps[a], &reps[b])?));
        }
    }
    indeterminate += across.iter().filter(|c| c.2 == CoreComparison::Indeterminate).count();
    let across_different = across.iter().all(|c| c.2 != CoreComparison::Same);
    let pass = across_different && checks.iter().all(|c| c.j_is_poisson && c.rank_matches && c.within_same);
    Ok(LeafReport { strata: checks, across, across_different, indeterminate, pass })
}

/// `(k[V] * G) / m_{π(v)}` on the basis (standard monomials) x G, with
/// `(m ⊗ g)(m' ⊗ g') = NF(m (g·m')) ⊗ g g'` and `g·f = f∘g^-1`.
pub fn skew_fiber(g: &MatrixGroup, pres: &InvariantPresentation, v: &[Scalar]) -> Result<FiberAlgebra> {
    if v.len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: v.len() });
    }
    if let Some(bad) = v.iter().find(|c| !g.field().contains(c)) {
        return Err(Error::NotInField(bad.to_string()));
    }
    let ring = g.coordinate_ring();
    let values = pres.project(v)?;
    let gens: Vec<Poly> = pres
        .generators
        .iter()
        .zip(&values)
        .map(|(p, c)| p - &Poly::constant(&ring, c.clone()))
        .collect();
    let m = Ideal::new(&ring, gens)?;
    let red = m.reducer()?;
    let standard = finite_standard_monomials(&red, ring.nvars())?;
    let order = g.order();
    let inverses: Vec<usize> = (0..order).map(|x| g.inverse(x)).collect();
    let nb = standard.len();
    let index = |mono: &Monomial| standard.iter().position(|s| s == mono).expect("normal forms are standard");
    let mut labels = Vec::with_capacity(nb * order);
    for gi in 0..order {
        for s in &standard {
            labels.push(format!("{}|g{gi}", Poly::monomial(&ring, s.clone(), Scalar::one())));
        }
    }
    let dim = nb * order;
    // cache g·m' for standard monomials
    let acted: Vec<Vec<Poly>> = (0..order)
        .map(|gi| {
            standard
                .iter()
                .map(|s| g.compose(&Poly::monomial(&ring, s.clone(), Scalar::one()), inverses[gi]))
                .collect()
        })
        .collect();
    let mut table = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    for g1 in 0..order {
        for (a, sa) in standard.iter().enumerate() {
            let left = Poly::monomial(&ring, sa.clone(), Scalar::one());
            for g2 in 0..order {
                let prod_g = g.mul(g1, g2);
                for b in 0..nb {
                    let nf = red.reduce(&(&left * &acted[g1][b]));
                    let out = &mut table[g1 * nb + a][g2 * nb + b];
                    for (mono, c) in nf.raw_terms() {
                        out[prod_g * nb + index(mono)] = c.clone();
                    }
                }
            }
        }
    }
    Ok(FiberAlgebra { labels, table })
}

/// Standard monomials of a zero-dimensional ideal (degree-compatible order).
pub(crate) fn finite_standard_monomials(red: &crate::groebner::Reducer, n: usize) -> Result<Vec<Monomial>> {
    if red.is_unit() {
        return Err(Error::EmptyVariety);
    }
    let mut out = Vec::new();
    for d in 0..=64u32 {
        let layer: Vec<Monomial> = Monomial::all_of_degree(n, d).into_iter().filter(|m| red.is_standard(m)).collect();
        if layer.is_empty() {
            return Ok(out);
        }
        out.extend(layer);
    }
    Err(Error::Unsupported("a zero-dimensional fiber".into()))
}

/// Direct-sum identification of `h ⊕ h*`: `g -> diag(g, g^-T)`.
pub fn double(g: &Matrix) -> Matrix {
    g.direct_sum(&g.inverse().expect("invertible").transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::invariant_generators;

    #[test]
    fn z2_strata() {
        let g = MatrixGroup::cyclic(2);
        let pres = invariant_generators(&g).unwrap();
        let strata = stabilizer_strata(&g, &pres).unwrap();
        assert_eq!(strata.len(), 2);
        assert_eq!(strata[0].fixed_dim(), 2);
        assert_eq!(strata[1].fixed_dim(), 0);
        let irr = Ideal::parse(&pres.target, &["A", "B", "C"]).unwrap();
        assert!(strata[1].j_ideal.equals(&irr).unwrap());
    }

    #[test]
    fn z2_induced_bracket() {
        let g = MatrixGroup::cyclic(2);
        let pres = invariant_generators(&g).unwrap();
        let p = induced_poisson(&g, &pres).unwrap();
        let m = p.matrix();
        assert_eq!(m[0][1].to_string(), "2*A");
        assert_eq!(m[0][2].to_string(), "4*B");
        assert_eq!(m[1][2].to_string(), "2*C");
        assert!(p.validate().unwrap().valid);
    }

    #[test]
    fn z2_fibers() {
        let g = MatrixGroup::cyclic(2);
        let pres = invariant_generators(&g).unwrap();
        let generic = skew_fiber(&g, &pres, &[Scalar::one(), Scalar::from_int(2)]).unwrap();
        assert_eq!(generic.invariants().unwrap().as_tuple(), (4, 1, 0, 4));
        let origin = skew_fiber(&g, &pres, &[Scalar::zero(), Scalar::zero()]).unwrap();
        let inv = origin.invariants().unwrap();
        assert_eq!((inv.dim, inv.radical_dim), (6, 4));
    }

    #[test]
    fn z2_leaves() {
        let g = MatrixGroup::cyclic(2);
        let pres = invariant_generators(&g).unwrap();
        let rep = verify_leaf_claims(&g, &pres, 3, 7).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.strata[0].sampled_ranks, vec![2, 2, 2]);
        assert_eq!(rep.indeterminate, 0);
    }
}
