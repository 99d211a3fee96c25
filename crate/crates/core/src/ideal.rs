//! Ideals of polynomial rings with cached reduced Gröbner bases.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::groebner::{groebner, normal_form, Budget, Reducer};
use crate::parse::parse_poly;
use crate::poly::{Monomial, MonomialOrder, Poly, PolyRing, Ring};

/// An ideal given by generators; the reduced basis under the ring's order is
/// computed at most once.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Poly>,
    gb: OnceLock<Vec<Poly>>,
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<Poly>) -> Result<Ideal> {
        for g in &gens {
            if !g.ring().compatible(ring) {
                return Err(Error::RingMismatch);
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).map(|g| g.in_ring(ring)).collect();
        Ok(Ideal { ring: ring.clone(), gens, gb: OnceLock::new() })
    }

    pub fn parse<S: AsRef<str>>(ring: &Ring, gens: &[S]) -> Result<Ideal> {
        let gens = gens.iter().map(|s| parse_poly(s.as_ref(), ring)).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, gens)
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal { ring: ring.clone(), gens: Vec::new(), gb: OnceLock::new() }
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::new(ring, vec![Poly::one(ring)]).unwrap()
    }

    /// The maximal ideal of a point with coordinates in the coefficient field.
    pub fn point(ring: &Ring, point: &[crate::Scalar]) -> Result<Ideal> {
        if point.len() != ring.nvars() {
            return Err(Error::DimensionMismatch { expected: ring.nvars(), got: point.len() });
        }
        let gens = point
            .iter()
            .enumerate()
            .map(|(i, c)| &Poly::var(ring, i) - &Poly::constant(ring, c.clone()))
            .collect();
        Ideal::new(ring, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Reduced Gröbner basis under the ring's order.
    pub fn groebner_basis(&self) -> Result<&[Poly]> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = groebner(&self.gens, self.ring.order(), Budget::global())?;
        Ok(self.gb.get_or_init(|| gb))
    }

    /// Reduced Gröbner basis under another order (not cached).
    pub fn groebner_basis_in(&self, order: &MonomialOrder) -> Result<Vec<Poly>> {
        if order == self.ring.order() {
            return Ok(self.groebner_basis()?.to_vec());
        }
        groebner(&self.gens, order, Budget::global())
    }

    pub fn reducer(&self) -> Result<Reducer> {
        Ok(Reducer::new(&self.ring, self.groebner_basis()?, self.ring.order()))
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        if !f.ring().compatible(&self.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(normal_form(&f.in_ring(&self.ring), self.groebner_basis()?, self.ring.order()))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        if !other.ring.compatible(&self.ring) {
            return Err(Error::RingMismatch);
        }
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner_basis()?.iter().any(Poly::is_constant))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if !other.ring.compatible(&self.ring) {
            return Err(Error::RingMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Poly>) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        Ideal::new(&self.ring, gens)
    }

    /// `I ∩ k[remaining variables]`, expressed in the same ring.
    pub fn eliminate(&self, drop: &[usize]) -> Result<Ideal> {
        if drop.is_empty() || self.gens.is_empty() {
            return Ok(self.clone());
        }
        let n = self.ring.nvars();
        if let Some(&bad) = drop.iter().find(|&&i| i >= n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad + 1 });
        }
        // put the dropped variables first and use a block order
        let mut perm: Vec<usize> = drop.to_vec();
        perm.sort_unstable();
        perm.dedup();
        let k = perm.len();
        perm.extend((0..n).filter(|i| !drop.contains(i)));
        let names: Vec<&str> = perm.iter().map(|&i| self.ring.vars()[i].as_str()).collect();
        let elim = PolyRing::with_order(&names, self.ring.field().clone(), MonomialOrder::Block(k))?;
        let mut to_elim = vec![0; n];
        for (pos, &i) in perm.iter().enumerate() {
            to_elim[i] = pos;
        }
        let gens: Vec<Poly> = self.gens.iter().map(|g| g.embed(&elim, &to_elim)).collect();
        let gb = groebner(&gens, &MonomialOrder::Block(k), Budget::global())?;
        let kept: Vec<Poly> = gb
            .into_iter()
            .filter(|g| g.support_vars().iter().all(|&v| v >= k))
            .map(|g| g.embed(&self.ring, &perm))
            .collect();
        Ideal::new(&self.ring, kept)
    }

    /// `I ∩ J` through `t I + (1 - t) J` and elimination of `t`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if !other.ring.compatible(&self.ring) {
            return Err(Error::RingMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let n = self.ring.nvars();
        let mut t_name = String::from("t");
        while self.ring.var_index(&t_name).is_some() {
            t_name.push('_');
        }
        let mut names: Vec<String> = vec![t_name];
        names.extend(self.ring.vars().iter().cloned());
        let big = PolyRing::new(&names, self.ring.field().clone())?;
        let shift: Vec<usize> = (1..=n).collect();
        let t = Poly::var(&big, 0);
        let one_minus_t = &Poly::one(&big) - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&t * &g.embed(&big, &shift));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.embed(&big, &shift));
        }
        let elim = Ideal::new(&big, gens)?.eliminate(&[0])?;
        let back: Vec<usize> = std::iter::once(0).chain(0..n).collect();
        let kept = elim.gens.iter().map(|g| g.embed(&self.ring, &back)).collect();
        let out = Ideal::new(&self.ring, kept)?;
        out.groebner_basis()?;
        Ok(out)
    }

    /// Krull dimension of `ring / I`, from a maximal set of variables free of
    /// leading monomials.
    pub fn krull_dim(&self) -> Result<usize> {
        let gb = self.groebner_basis()?;
        if gb.iter().any(Poly::is_constant) {
            return Err(Error::EmptyVariety);
        }
        let n = self.ring.nvars();
        let supports: Vec<u64> = gb
            .iter()
            .map(|g| {
                let m = g.leading_monomial().unwrap();
                m.0.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |acc, (i, _)| acc | (1 << i))
            })
            .collect();
        assert!(n < 64, "too many variables for the staircase search");
        let mut best = 0;
        for set in 0u64..(1u64 << n) {
            let size = set.count_ones() as usize;
            if size > best && supports.iter().all(|&s| s & !set != 0) {
                best = size;
            }
        }
        Ok(best)
    }

    /// `I` plus the `c x c` minors of the Jacobian of its generators, with `c`
    /// the codimension. Assumes `I` is prime.
    pub fn singular_locus(&self) -> Result<Ideal> {
        let dim = self.krull_dim()?;
        let n = self.ring.nvars();
        let c = n - dim;
        let gens: Vec<Poly> = self.groebner_basis()?.to_vec();
        let jac: Vec<Vec<Poly>> = gens.iter().map(|g| (0..n).map(|i| g.derivative(i)).collect()).collect();
        let minors = all_minors(&jac, c);
        let out = Ideal::new(&self.ring, gens.into_iter().chain(minors).collect())?;
        out.groebner_basis()?;
        Ok(out)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        if !other.ring.compatible(&self.ring) {
            return Err(Error::RingMismatch);
        }
        if self.ring.order() == other.ring.order() {
            return Ok(self.groebner_basis()? == other.groebner_basis()?);
        }
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    /// Rabinowitsch test for `f ∈ sqrt(I)`.
    pub fn radical_contains(&self, f: &Poly) -> Result<bool> {
        let n = self.ring.nvars();
        let mut names: Vec<String> = self.ring.vars().to_vec();
        let mut s = String::from("s");
        while self.ring.var_index(&s).is_some() {
            s.push('_');
        }
        names.push(s);
        let big = PolyRing::new(&names, self.ring.field().clone())?;
        let map: Vec<usize> = (0..n).collect();
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| g.embed(&big, &map)).collect();
        gens.push(&Poly::one(&big) - &(&Poly::var(&big, n) * &f.embed(&big, &map)));
        Ideal::new(&big, gens)?.is_unit()
    }

    /// Standard monomials of degree at most `d` (all of them when the ring
    /// order is degree-compatible and `d` bounds the quotient).
    pub fn standard_monomials_up_to(&self, d: u32) -> Result<Vec<Monomial>> {
        let red = self.reducer()?;
        Ok(Monomial::all_up_to_degree(self.ring.nvars(), d)
            .into_iter()
            .filter(|m| red.is_standard(m))
            .collect())
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.gens.iter().map(ToString::to_string).collect()
    }

    /// Reduced basis as strings, the canonical textual form of the ideal.
    pub fn canonical_strings(&self) -> Result<Vec<String>> {
        Ok(self.groebner_basis()?.iter().map(ToString::to_string).collect())
    }
}

pub fn ideal_member(f: &Poly, ideal: &Ideal) -> Result<bool> {
    ideal.contains(f)
}

pub fn equal_ideals(a: &Ideal, b: &Ideal) -> Result<bool> {
    a.equals(b)
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n));
    let ring = m[0][0].ring().clone();
    // memoised expansion along rows over column subsets
    let mut memo: std::collections::HashMap<u64, Poly> = std::collections::HashMap::new();
    fn go(m: &[Vec<Poly>], row: usize, cols: u64, ring: &Ring, memo: &mut std::collections::HashMap<u64, Poly>) -> Poly {
        let n = m.len();
        if row == n {
            return Poly::one(ring);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero(ring);
        let mut sign_pos = 0;
        for c in 0..n {
            if cols & (1 << c) != 0 {
                continue;
            }
            let e = &m[row][c];
            if !e.is_zero() {
                let sub = go(m, row + 1, cols | (1 << c), ring, memo);
                let term = e * &sub;
                acc = if sign_pos % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            sign_pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(m, 0, 0, &ring, &mut memo)
}

/// All nonzero `k x k` minors of a polynomial matrix. `k = 0` yields `[1]`.
pub fn all_minors(m: &[Vec<Poly>], k: usize) -> Vec<Poly> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if k == 0 {
        return match m.first().and_then(|r| r.first()) {
            Some(p) => vec![Poly::one(p.ring())],
            None => Vec::new(),
        };
    }
    let mut out = Vec::new();
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<Poly>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
            let d = poly_det(&sub);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(vars: &[&str]) -> Ring {
        PolyRing::rational(vars)
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn determinant() {
        let r = q(&["x", "y"]);
        let p = |s: &str| parse_poly(s, &r).unwrap();
        let m = vec![vec![p("x"), p("y")], vec![p("1"), p("x")]];
        assert_eq!(poly_det(&m), p("x^2 - y"));
    }

    #[test]
    fn membership_and_elimination() {
        let r = q(&["t", "x", "y"]);
        let i = Ideal::parse(&r, &["x - t", "y - t^2"]).unwrap();
        assert!(i.contains(&parse_poly("y - x^2", &r).unwrap()).unwrap());
        let e = i.eliminate(&[0]).unwrap();
        assert!(e.equals(&Ideal::parse(&r, &["y - x^2"]).unwrap()).unwrap());
        let j = Ideal::parse(&r, &["x - 1"]).unwrap().eliminate(&[1]).unwrap();
        assert!(j.is_zero());
    }

    #[test]
    fn intersections() {
        let r = q(&["x", "y"]);
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let y = Ideal::parse(&r, &["y"]).unwrap();
        assert!(x.intersect(&y).unwrap().equals(&Ideal::parse(&r, &["x*y"]).unwrap()).unwrap());
        let x2 = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(x.intersect(&x2).unwrap().equals(&x2).unwrap());
    }

    #[test]
    fn dimensions() {
        let r = q(&["x", "y", "z"]);
        assert_eq!(Ideal::zero(&r).krull_dim().unwrap(), 3);
        assert_eq!(Ideal::parse(&r, &["x", "y"]).unwrap().krull_dim().unwrap(), 1);
        assert_eq!(Ideal::unit(&r).krull_dim(), Err(Error::EmptyVariety));
    }

    #[test]
    fn singular_loci() {
        let r = q(&["x", "y"]);
        let cusp = Ideal::parse(&r, &["y^2 - x^3"]).unwrap().singular_locus().unwrap();
        assert!(cusp.radical_contains(&parse_poly("x", &r).unwrap()).unwrap());
        assert!(cusp.radical_contains(&parse_poly("y", &r).unwrap()).unwrap());
        assert!(Ideal::parse(&r, &["x"]).unwrap().singular_locus().unwrap().is_unit().unwrap());
    }
}
