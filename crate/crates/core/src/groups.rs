//! Finite matrix groups: closure, conjugacy, subgroups, symplectic
//! reflections, fixed spaces and stabilizers.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Poly, PolyRing, Ring};
use crate::scalar::{Field, Scalar};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;
pub const DEFAULT_SUBGROUP_CAP: usize = 200;

/// A finite group of invertible matrices. Element 0 is the identity; the
/// rest are sorted by their canonical encoding.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    field: Field,
    dim: usize,
    elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
    generators: Vec<usize>,
    form: Option<Matrix>,
    table: OnceLock<Vec<Vec<usize>>>,
    classes: OnceLock<Vec<Vec<usize>>>,
    ring: OnceLock<Ring>,
}

/// A conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    /// Sorted element indices of the representative.
    pub representative: Vec<usize>,
    pub order: usize,
    pub class_size: usize,
}

#[derive(Clone, Debug)]
pub struct SymplecticReflection {
    pub element: usize,
    /// Index into the list of reflection classes.
    pub class: usize,
    /// Form with radical `Ker(1 - s)` agreeing with the symplectic form on `Im(1 - s)`.
    pub omega_s: Matrix,
}

/// Default coordinate names: `x, y` in dimension 2, `x1..xn, y1..yn` in
/// dimension `2n`, `x1..xn` otherwise.
pub fn coordinate_names(dim: usize) -> Vec<String> {
    if dim == 2 {
        return vec!["x".into(), "y".into()];
    }
    if dim % 2 == 0 {
        let n = dim / 2;
        (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|i| format!("y{i}"))).collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

fn field_of(ms: &[Matrix]) -> Field {
    let n = ms
        .iter()
        .flat_map(|m| m.entries().iter())
        .filter_map(Scalar::cyclotomic_order)
        .fold(1u32, num_integer::lcm);
    Field::cyclotomic(n)
}

/// Closes `generators` under multiplication. `form`, when given, must be
/// preserved by every generator.
pub fn group_closure(generators: &[Matrix], form: Option<Matrix>, cap: usize) -> Result<MatrixGroup> {
    let dim = generators.first().map_or(0, Matrix::nrows);
    if let Some(f) = &form {
        if f.nrows() != dim || !f.is_square() {
            return Err(Error::DimensionMismatch { expected: dim, got: f.nrows() });
        }
        if !f.transpose().scale(&Scalar::from_int(-1)).eq(f) || f.det().is_zero() {
            return Err(Error::InvalidStructure("symplectic form must be skew and nondegenerate".into()));
        }
    }
    for g in generators {
        if !g.is_square() || g.nrows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: g.nrows() });
        }
        if g.det().is_zero() {
            return Err(Error::NonInvertible);
        }
        if let Some(f) = &form {
            if &(&g.transpose() * f) * g != *f {
                return Err(Error::NotSymplectic);
            }
        }
    }
    let id = Matrix::identity(dim);
    let mut seen: HashMap<Matrix, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([id.clone()]);
    let mut all = vec![id.clone()];
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = &x * g;
            if !seen.contains_key(&y) {
                if all.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                seen.insert(y.clone(), ());
                all.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    let field = field_of(&all);
    let mut rest: Vec<Matrix> = all.into_iter().filter(|m| *m != id).collect();
    rest.sort();
    let mut elements = vec![id];
    elements.extend(rest);
    let index: HashMap<Matrix, usize> = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut gens: Vec<usize> = generators.iter().map(|g| index[g]).collect();
    gens.sort_unstable();
    gens.dedup();
    Ok(MatrixGroup {
        field,
        dim,
        elements,
        index,
        generators: gens,
        form,
        table: OnceLock::new(),
        classes: OnceLock::new(),
        ring: OnceLock::new(),
    })
}

impl MatrixGroup {
    pub fn trivial(dim: usize) -> MatrixGroup {
        group_closure(&[Matrix::identity(dim)], None, 1).unwrap()
    }

    /// `<diag(zeta, zeta^-1)>` of order `n` on `C^2` (so `n = 2` gives `{±I}`).
    pub fn cyclic(n: u32) -> MatrixGroup {
        let z = Scalar::zeta(n);
        let g = Matrix::diag(&[z.clone(), z.inv().unwrap()]);
        group_closure(&[g], None, n as usize).expect("cyclic group")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn explicit_form(&self) -> Option<&Matrix> {
        self.form.as_ref()
    }

    /// Coordinate ring `k[V]` with the default coordinate names.
    pub fn coordinate_ring(&self) -> Ring {
        self.ring
            .get_or_init(|| PolyRing::new(&coordinate_names(self.dim), self.field.clone()).expect("valid names"))
            .clone()
    }

    /// The attached form (standard when unspecified in even dimension),
    /// checked to be preserved by the group.
    pub fn symplectic_form(&self) -> Result<Matrix> {
        let f = match &self.form {
            Some(f) => f.clone(),
            None if self.dim % 2 == 0 && self.dim > 0 => Matrix::standard_symplectic(self.dim / 2),
            None => return Err(Error::NoSymplecticForm),
        };
        for &g in &self.generators {
            let g = &self.elements[g];
            if &(&g.transpose() * &f) * g != f {
                return Err(Error::NotSymplectic);
            }
        }
        Ok(f)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = self.table.get() {
            return t[a][b];
        }
        self.index[&(&self.elements[a] * &self.elements[b])]
    }

    /// Full multiplication table (computed once).
    pub fn table(&self) -> &Vec<Vec<usize>> {
        self.table.get_or_init(|| {
            (0..self.order())
                .into_par_iter()
                .map(|a| (0..self.order()).map(|b| self.index[&(&self.elements[a] * &self.elements[b])]).collect())
                .collect()
        })
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse().expect("group elements are invertible")]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverse(g))
    }

    /// Conjugacy classes as sorted index lists, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> &Vec<Vec<usize>> {
        self.classes.get_or_init(|| {
            let n = self.order();
            let gens: Vec<(usize, usize)> = self.generators.iter().map(|&g| (g, self.inverse(g))).collect();
            let mut class_of = vec![usize::MAX; n];
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for start in 0..n {
                if class_of[start] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members = vec![start];
                class_of[start] = id;
                let mut k = 0;
                while k < members.len() {
                    let x = members[k];
                    for &(g, gi) in &gens {
                        let y = self.mul(self.mul(g, x), gi);
                        if class_of[y] == usize::MAX {
                            class_of[y] = id;
                            members.push(y);
                        }
                    }
                    k += 1;
                }
                members.sort_unstable();
                classes.push(members);
            }
            classes
        })
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.conjugacy_classes().iter().position(|c| c.binary_search(&x).is_ok()).unwrap()
    }

    /// All `s` with `rank(1 - s) = 2`, grouped into conjugacy classes, with
    /// their forms `omega_s`.
    pub fn symplectic_reflections(&self) -> Result<Vec<SymplecticReflection>> {
        let omega = self.symplectic_form()?;
        let id = Matrix::identity(self.dim);
        let mut class_ids: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        for (i, s) in self.elements.iter().enumerate() {
            let d = id.sub(s);
            if d.rank() != 2 {
                continue;
            }
            let c = self.class_of(i);
            let class = match class_ids.iter().position(|&x| x == c) {
                Some(p) => p,
                None => {
                    class_ids.push(c);
                    class_ids.len() - 1
                }
            };
            out.push(SymplecticReflection { element: i, class, omega_s: omega_s(&d, &omega) });
        }
        Ok(out)
    }

    /// Basis of the common fixed space of the listed elements.
    pub fn fixed_space(&self, subgroup: &[usize]) -> Vec<Vec<Scalar>> {
        let id = Matrix::identity(self.dim);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for &h in subgroup {
            let d = self.elements[h].sub(&id);
            for i in 0..self.dim {
                rows.push(d.row(i).to_vec());
            }
        }
        if rows.is_empty() {
            rows.push(vec![Scalar::zero(); self.dim]);
        }
        Matrix::from_rows(rows).kernel()
    }

    pub fn stabilizer(&self, v: &[Scalar]) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.elements[g].apply(v) == v).collect()
    }

    /// Subgroup generated by the listed elements, as sorted indices.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut members = vec![0];
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        members
    }

    /// All subgroups up to conjugacy, built as joins of cyclic subgroups.
    pub fn subgroup_conjugacy_classes(&self, cap: usize) -> Result<Vec<SubgroupClass>> {
        let n = self.order();
        if n > cap {
            return Err(Error::CapExceeded(cap));
        }
        let table = self.table();
        let words = n.div_ceil(64);
        let to_bits = |xs: &[usize]| -> Vec<u64> {
            let mut b = vec![0u64; words];
            for &x in xs {
                b[x / 64] |= 1 << (x % 64);
            }
            b
        };
        let close = |seed: &[usize]| -> Vec<usize> {
            let mut inside = vec![false; n];
            inside[0] = true;
            let mut members = vec![0];
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                for &g in seed {
                    let y = table[x][g];
                    if !inside[y] {
                        inside[y] = true;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            members
        };
        // one generator per distinct cyclic subgroup
        let mut cyclic: Vec<(Vec<usize>, usize)> = (1..n).map(|g| (close(&[g]), g)).collect();
        cyclic.sort();
        cyclic.dedup_by(|a, b| a.0 == b.0);
        let mut found: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
        found.insert(to_bits(&[0]), vec![0]);
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                let hb = to_bits(h);
                for &(_, gen) in &cyclic {
                    if hb[gen / 64] & (1 << (gen % 64)) != 0 {
                        continue;
                    }
                    let mut seed: Vec<usize> = h.clone();
                    seed.push(gen);
                    let j = close(&seed);
                    let jb = to_bits(&j);
                    if !found.contains_key(&jb) {
                        found.insert(jb, j.clone());
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let inverses: Vec<usize> = (0..n).map(|g| self.inverse(g)).collect();
        let subgroups: Vec<Vec<usize>> = found.into_values().collect();
        let canon: Vec<(Vec<u64>, usize)> = subgroups
            .par_iter()
            .map(|h| {
                let mut conj: Vec<Vec<u64>> = (0..n)
                    .map(|g| {
                        let img: Vec<usize> = h.iter().map(|&x| table[table[g][x]][inverses[g]]).collect();
                        to_bits(&img)
                    })
                    .collect();
                conj.sort();
                conj.dedup();
                (conj[0].clone(), conj.len())
            })
            .collect();
        let mut classes: HashMap<Vec<u64>, SubgroupClass> = HashMap::new();
        for (h, (key, size)) in subgroups.iter().zip(canon) {
            let entry = classes.entry(key.clone()).or_insert_with(|| SubgroupClass {
                representative: h.clone(),
                order: h.len(),
                class_size: size,
            });
            if to_bits(h) == key {
                entry.representative = h.clone();
            }
        }
        let mut out: Vec<SubgroupClass> = classes.into_values().collect();
        out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.representative.cmp(&b.representative)));
        Ok(out)
    }

    /// `f(g v)`: substitutes `x_i -> sum_j g_ij x_j`.
    pub fn compose(&self, f: &Poly, g: usize) -> Poly {
        let ring = f.ring().clone();
        let m = &self.elements[g];
        let images: Vec<Poly> = (0..self.dim)
            .map(|i| {
                let mut p = Poly::zero(&ring);
                for j in 0..self.dim {
                    if !m[(i, j)].is_zero() {
                        p = &p + &Poly::var(&ring, j).scale(&m[(i, j)]);
                    }
                }
                p
            })
            .collect();
        if images.is_empty() {
            return f.clone();
        }
        f.substitute(&images)
    }

    /// Group average `|G|^-1 sum_g f∘g`.
    pub fn reynolds(&self, f: &Poly) -> Poly {
        let parts: Vec<Poly> = (0..self.order()).into_par_iter().map(|g| self.compose(f, g)).collect();
        let mut acc = Poly::zero(f.ring());
        for p in &parts {
            acc = &acc + p;
        }
        acc.scale(&Scalar::from_int(self.order() as i64).inv().unwrap())
    }

    pub fn is_invariant(&self, f: &Poly) -> bool {
        self.generators.iter().all(|&g| self.compose(f, g) == *f)
    }
}

/// `P^T omega P` for the projection `P` onto `Im(d)` along `Ker(d)`, with
/// `d = 1 - s` semisimple.
fn omega_s(d: &Matrix, omega: &Matrix) -> Matrix {
    let n = d.nrows();
    let im = d.column_space();
    let ker = d.kernel();
    let mut cols: Vec<Vec<Scalar>> = im.clone();
    cols.extend(ker);
    let q = Matrix::from_rows(cols).transpose();
    let qi = q.inverse().expect("image and kernel are complementary");
    let mut e = Matrix::zeros(n, n);
    for i in 0..im.len() {
        e[(i, i)] = Scalar::one();
    }
    let p = &(&q * &e) * &qi;
    &(&p.transpose() * omega) * &p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm3() -> Vec<Matrix> {
        vec![
            Matrix::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
            Matrix::from_ints(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
        ]
    }

    #[test]
    fn closures() {
        let minus = Matrix::from_ints(&[&[-1, 0], &[0, -1]]);
        assert_eq!(group_closure(&[minus.clone()], None, 100).unwrap().order(), 2);
        assert_eq!(MatrixGroup::cyclic(4).order(), 4);
        let swap = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(group_closure(&[swap, minus], None, 100).unwrap().order(), 4);
        assert!(matches!(group_closure(&[Matrix::from_ints(&[&[1, 1], &[0, 1]])], None, 10), Err(Error::CapExceeded(10))));
        assert!(matches!(group_closure(&[Matrix::from_ints(&[&[1, 1], &[1, 1]])], None, 10), Err(Error::NonInvertible)));
    }

    #[test]
    fn classes_of_s3() {
        let g = group_closure(&perm3(), None, 100).unwrap();
        let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        let subs = g.subgroup_conjugacy_classes(200).unwrap();
        assert_eq!(subs.iter().map(|s| s.order).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert_eq!(subs[1].class_size, 3);
    }

    #[test]
    fn reflections() {
        let z2 = MatrixGroup::cyclic(2);
        let s = z2.symplectic_reflections().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].omega_s, Matrix::standard_symplectic(1));
        let z4 = MatrixGroup::cyclic(4);
        let s = z4.symplectic_reflections().unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().map(|r| r.class).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(MatrixGroup::trivial(2).symplectic_reflections().unwrap().is_empty());
        assert!(matches!(MatrixGroup::trivial(3).symplectic_reflections(), Err(Error::NoSymplecticForm)));
    }

    #[test]
    fn fixed_spaces_and_stabilizers() {
        let z2 = MatrixGroup::cyclic(2);
        assert_eq!(z2.fixed_space(&[0]).len(), 2);
        assert!(z2.fixed_space(&[0, 1]).is_empty());
        assert_eq!(z2.stabilizer(&[Scalar::zero(), Scalar::zero()]).len(), 2);
        assert_eq!(z2.stabilizer(&[Scalar::frac(3, 7), Scalar::from_int(2)]), vec![0]);
    }
}
