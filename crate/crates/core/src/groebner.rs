//! Buchberger's algorithm with sugar selection and the Gebauer-Möller
//! criteria, producing reduced Gröbner bases.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly, Ring};
use crate::scalar::Scalar;

static MAX_REDUCTIONS: AtomicU64 = AtomicU64::new(1_000_000);
static MAX_DEGREE: AtomicU32 = AtomicU32::new(40);

/// Resource caps for one Gröbner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// S-polynomial reductions.
    pub max_reductions: u64,
    /// Total degree of any pair considered.
    pub max_degree: u32,
}

impl Budget {
    pub const STANDARD: Budget = Budget { max_reductions: 1_000_000, max_degree: 40 };

    /// The process-wide default used when no budget is passed explicitly.
    pub fn global() -> Budget {
        Budget {
            max_reductions: MAX_REDUCTIONS.load(AtomicOrdering::Relaxed),
            max_degree: MAX_DEGREE.load(AtomicOrdering::Relaxed),
        }
    }

    pub fn set_global(b: Budget) {
        MAX_REDUCTIONS.store(b.max_reductions, AtomicOrdering::Relaxed);
        MAX_DEGREE.store(b.max_degree, AtomicOrdering::Relaxed);
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::global()
    }
}

/// Terms sorted by decreasing monomial under the working order.
type Terms = Vec<(Monomial, Scalar)>;

fn to_terms(p: &Poly, ord: &MonomialOrder) -> Terms {
    p.terms_by(ord).into_iter().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// `f - c * m * g`.
fn sub_mul(f: &[(Monomial, Scalar)], c: &Scalar, m: &Monomial, g: &[(Monomial, Scalar)], ord: &MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gm: Option<(Monomial, Scalar)> = None;
    loop {
        if gm.is_none() && j < g.len() {
            gm = Some((g[j].0.mul(m), &g[j].1 * c));
            j += 1;
        }
        match (f.get(i), gm.as_ref()) {
            (None, None) => break,
            (Some(a), None) => {
                out.push(a.clone());
                i += 1;
            }
            (None, Some(_)) => {
                let (bm, bc) = gm.take().unwrap();
                out.push((bm, -bc));
            }
            (Some(a), Some(b)) => match ord.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (bm, bc) = gm.take().unwrap();
                    out.push((bm, -bc));
                }
                Ordering::Equal => {
                    let v = &a.1 - &b.1;
                    if !v.is_zero() {
                        out.push((a.0.clone(), v));
                    }
                    i += 1;
                    gm = None;
                }
            },
        }
    }
    out
}

fn make_monic(t: &mut Terms) {
    if let Some((_, c)) = t.first() {
        if !c.is_one() {
            let inv = c.inv().expect("nonzero leading coefficient");
            for (_, v) in t.iter_mut() {
                *v *= &inv;
            }
        }
    }
}

/// Reduces `f` by the (monic) `basis`. With `full` the tail is reduced too.
fn reduce(mut f: Terms, basis: &[&Terms], ord: &MonomialOrder, full: bool) -> Terms {
    let mut rem: Terms = Vec::new();
    let mut start = 0;
    while start < f.len() {
        let (m, c) = (&f[start].0, &f[start].1);
        let div = basis
            .iter()
            .filter(|g| g[0].0.divides(m))
            .min_by_key(|g| g.len());
        match div {
            Some(g) => {
                let q = g[0].0.quotient(m).unwrap();
                let c = c.clone();
                f = sub_mul(&f[start..], &c, &q, g, ord);
                start = 0;
            }
            None => {
                if !full {
                    break;
                }
                rem.push(f[start].clone());
                start += 1;
            }
        }
    }
    if full {
        rem
    } else {
        f.drain(..start);
        f
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Engine<'a> {
    ord: &'a MonomialOrder,
    polys: Vec<Terms>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Engine<'_> {
    fn lm(&self, i: usize) -> &Monomial {
        &self.polys[i][0].0
    }

    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (self.lm(i), self.lm(j));
        let lcm = a.lcm(b);
        let d = lcm.degree();
        let sugar = (self.sugar[i] + d - a.degree()).max(self.sugar[j] + d - b.degree());
        Pair { i, j, lcm, sugar }
    }

    /// Gebauer-Möller update after adding a new element.
    fn update(&mut self, h_terms: Terms, h_sugar: u32) {
        let h = self.polys.len();
        self.polys.push(h_terms);
        self.sugar.push(h_sugar);
        self.active.push(true);
        let lmh = self.lm(h).clone();

        let mut c: Vec<Pair> = (0..h).filter(|&g| self.active[g]).map(|g| self.make_pair(h, g)).collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let coprime = lmh.coprime(self.lm(p.j));
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d.into_iter().filter(|p| !lmh.coprime(self.lm(p.j))).collect();

        let old = std::mem::take(&mut self.pairs);
        for p in old {
            let kill = lmh.divides(&p.lcm)
                && self.lm(p.i).lcm(&lmh) != p.lcm
                && self.lm(p.j).lcm(&lmh) != p.lcm;
            if !kill {
                self.pairs.push(p);
            }
        }
        self.pairs.extend(e);

        for g in 0..h {
            if self.active[g] && lmh.divides(&self.polys[g][0].0) {
                self.active[g] = false;
            }
        }
    }

    fn select(&mut self) -> Option<Pair> {
        let ord = self.ord;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.sugar.cmp(&b.sugar).then_with(|| ord.cmp(&a.lcm, &b.lcm)))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> Terms {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let mf = f[0].0.quotient(&p.lcm).unwrap();
        let mg = g[0].0.quotient(&p.lcm).unwrap();
        // both monic: S = mf * f - mg * g
        let ff: Terms = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
        sub_mul(&ff, &Scalar::one(), &mg, &g[1..], self.ord)
    }

    fn active_basis(&self) -> Vec<&Terms> {
        (0..self.polys.len()).filter(|&i| self.active[i]).map(|i| &self.polys[i]).collect()
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`,
/// returned monic and sorted by decreasing leading monomial.
pub fn groebner(gens: &[Poly], order: &MonomialOrder, budget: Budget) -> Result<Vec<Poly>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring().clone();
    let mut inputs: Vec<Terms> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let mut t = to_terms(p, order);
            make_monic(&mut t);
            t
        })
        .collect();
    if inputs.is_empty() {
        return Ok(Vec::new());
    }
    if inputs.iter().any(|t| t[0].0.is_one()) {
        return Ok(vec![Poly::one(&ring)]);
    }
    inputs.sort_by(|a, b| a[0].0.degree().cmp(&b[0].0.degree()).then_with(|| order.cmp(&a[0].0, &b[0].0)));

    let mut eng = Engine { ord: order, polys: Vec::new(), sugar: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for t in inputs {
        let reduced = {
            let basis = eng.active_basis();
            reduce(t.clone(), &basis, order, false)
        };
        if reduced.is_empty() {
            continue;
        }
        let mut r = reduced;
        make_monic(&mut r);
        if r[0].0.is_one() {
            return Ok(vec![Poly::one(&ring)]);
        }
        let s = t.iter().map(|(m, _)| m.degree()).max().unwrap();
        eng.update(r, s);
    }

    let mut reductions: u64 = 0;
    while let Some(p) = eng.select() {
        if p.lcm.degree() > budget.max_degree {
            return Err(Error::Budget(format!(
                "S-pair of degree {} exceeds degree cap {}",
                p.lcm.degree(),
                budget.max_degree
            )));
        }
        reductions += 1;
        if reductions > budget.max_reductions {
            return Err(Error::Budget(format!("more than {} S-polynomial reductions", budget.max_reductions)));
        }
        let s = eng.spoly(&p);
        if s.is_empty() {
            continue;
        }
        let mut r = {
            let basis = eng.active_basis();
            reduce(s, &basis, order, false)
        };
        if r.is_empty() {
            continue;
        }
        make_monic(&mut r);
        if r[0].0.is_one() {
            return Ok(vec![Poly::one(&ring)]);
        }
        eng.update(r, p.sugar);
    }

    // minimal basis: active elements have pairwise non-dividing leading monomials
    let mut basis: Vec<Terms> = (0..eng.polys.len())
        .filter(|&i| eng.active[i])
        .map(|i| eng.polys[i].clone())
        .collect();
    basis.sort_by(|a, b| order.cmp(&b[0].0, &a[0].0));
    basis.dedup_by(|a, b| a[0].0 == b[0].0);
    // tail reduction
    let mut out: Vec<Terms> = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others: Vec<&Terms> = basis.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, t)| t).collect();
        let head = basis[k][0].clone();
        let tail = reduce(basis[k][1..].to_vec(), &others, order, true);
        let mut t = vec![head];
        t.extend(tail);
        out.push(t);
    }
    Ok(out.into_iter().map(|t| Poly::from_terms(&ring, t)).collect())
}

/// Fully reduced normal form of `f` modulo a Gröbner basis for `order`.
pub fn normal_form(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> Poly {
    let ts: Vec<Terms> = basis
        .iter()
        .map(|g| {
            let mut t = to_terms(g, order);
            make_monic(&mut t);
            t
        })
        .collect();
    let refs: Vec<&Terms> = ts.iter().collect();
    Poly::from_terms(f.ring(), reduce(to_terms(f, order), &refs, order, true))
}

/// Precomputed reducer for repeated normal forms against one basis.
#[derive(Clone, Debug)]
pub struct Reducer {
    ring: Ring,
    order: MonomialOrder,
    basis: Vec<Terms>,
}

impl Reducer {
    pub fn new(ring: &Ring, basis: &[Poly], order: &MonomialOrder) -> Reducer {
        let basis = basis
            .iter()
            .map(|g| {
                let mut t = to_terms(g, order);
                make_monic(&mut t);
                t
            })
            .collect();
        Reducer { ring: ring.clone(), order: order.clone(), basis }
    }

    pub fn reduce(&self, f: &Poly) -> Poly {
        let refs: Vec<&Terms> = self.basis.iter().collect();
        Poly::from_terms(&self.ring, reduce(to_terms(f, &self.order), &refs, &self.order, true))
    }

    /// True when no leading monomial of the basis divides `m`.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.basis.iter().any(|g| g[0].0.divides(m))
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.basis.iter().map(|g| &g[0].0)
    }

    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|g| g[0].0.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::PolyRing;

    fn ps(ring: &Ring, xs: &[&str]) -> Vec<Poly> {
        xs.iter().map(|s| parse_poly(s, ring).unwrap()).collect()
    }

    #[test]
    fn collapse_and_zero() {
        let r = PolyRing::rational(&["x", "y"]);
        let gb = groebner(&ps(&r, &["x^2", "x"]), &MonomialOrder::DegRevLex, Budget::STANDARD).unwrap();
        assert_eq!(gb, ps(&r, &["x"]));
        assert!(groebner(&ps(&r, &["0"]), &MonomialOrder::DegRevLex, Budget::STANDARD).unwrap().is_empty());
    }

    #[test]
    fn lex_parametrisation() {
        let r = PolyRing::rational(&["t", "x", "y"]);
        let gb = groebner(&ps(&r, &["x - t", "y - t^2"]), &MonomialOrder::Lex, Budget::STANDARD).unwrap();
        assert!(gb.contains(&parse_poly("y - x^2", &r).unwrap()) || gb.contains(&parse_poly("x^2 - y", &r).unwrap()));
    }

    #[test]
    fn cyclic3() {
        let r = PolyRing::rational(&["a", "b", "c"]);
        let gens = ps(&r, &["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]);
        let gb = groebner(&gens, &MonomialOrder::DegRevLex, Budget::STANDARD).unwrap();
        for g in &gens {
            assert!(normal_form(g, &gb, &MonomialOrder::DegRevLex).is_zero());
        }
        assert_eq!(gb.len(), 3);
    }

    #[test]
    fn budget_is_reported() {
        let r = PolyRing::rational(&["x", "y", "z"]);
        let gens = ps(&r, &["x^3 - y*z^2 + 1", "y^3 - x*z - 2", "z^3 - x^2*y + x"]);
        let tiny = Budget { max_reductions: 2, max_degree: 40 };
        assert!(matches!(groebner(&gens, &MonomialOrder::DegRevLex, tiny), Err(Error::Budget(_))));
    }
}
