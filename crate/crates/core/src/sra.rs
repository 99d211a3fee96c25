//! PBW arithmetic for symplectic reflection algebras `A_{t,c}`.
//!
//! Elements are kept in PBW normal form: an ordered monomial in the basis
//! letters of `V` followed by a group element. Products are computed by
//! straightening with `x_k x_i = x_i x_k - t w(x_i, x_k) - sum_s c_s w_s(x_i, x_k) s`
//! for `i < k` and `g x = g(x) g`. Confluence is not assumed; the PBW check
//! measures it.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Mutex;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fiber::FiberAlgebra;
use crate::groups::{coordinate_names, MatrixGroup, SymplecticReflection};
use crate::ideal::Ideal;
use crate::invariants::{generator_names, molien_series};
use crate::linalg::{kernel, Echelon, Matrix, SparseVec, TrackedEchelon};
use crate::poisson::PoissonStructure;
use crate::poly::{Monomial, MonomialOrder, Poly, PolyRing, Ring};
use crate::scalar::{Rational, Scalar};

/// Polynomial in the formal parameter `T`, lowest power first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TPoly(Vec<Scalar>);

impl TPoly {
    pub fn zero() -> TPoly {
        TPoly(Vec::new())
    }

    pub fn constant(c: Scalar) -> TPoly {
        TPoly(vec![c]).trimmed()
    }

    pub fn t() -> TPoly {
        TPoly(vec![Scalar::zero(), Scalar::one()])
    }

    fn trimmed(mut self) -> TPoly {
        while self.0.last().is_some_and(Scalar::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.0.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.0.len() {
            0 => Some(Scalar::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let n = self.0.len().max(other.0.len());
        TPoly((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect()).trimmed()
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        TPoly(out).trimmed()
    }

    pub fn scale(&self, c: &Scalar) -> TPoly {
        TPoly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    /// Value at `T = v`.
    pub fn at(&self, v: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * v) + c;
        }
        acc
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let t = match k {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{k}"),
            };
            parts.push(if t.is_empty() {
                c.to_string()
            } else if c.is_one() {
                t
            } else if (-c).is_one() {
                format!("-{t}")
            } else {
                format!("{c}*{t}")
            });
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// The parameter `t`: a field element or the formal symbol `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TParam {
    Value(Scalar),
    Formal,
}

impl TParam {
    pub fn parse(text: &str) -> Result<TParam> {
        match text.trim() {
            "formal" | "T" => Ok(TParam::Formal),
            s => {
                let field = crate::scalar::Field::Rationals;
                Ok(TParam::Value(crate::parse::parse_scalar(s, &field)?))
            }
        }
    }

    fn as_tpoly(&self) -> TPoly {
        match self {
            TParam::Value(v) => TPoly::constant(v.clone()),
            TParam::Formal => TPoly::t(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TParam::Value(v) if v.is_zero())
    }
}

impl fmt::Display for TParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TParam::Value(v) => write!(f, "{v}"),
            TParam::Formal => write!(f, "formal"),
        }
    }
}

/// A letter of a word: a basis vector of `V` or a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    V(usize),
    G(usize),
}

/// PBW key: ordered monomial in the letters, then a group element index.
pub type Key = (Monomial, usize);

/// A linear combination of PBW words, stored in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SraElement {
    terms: BTreeMap<Key, TPoly>,
}

impl SraElement {
    pub fn zero() -> SraElement {
        SraElement::default()
    }

    pub fn term(m: Monomial, g: usize, c: TPoly) -> SraElement {
        let mut e = SraElement::zero();
        e.add_term((m, g), &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &TPoly)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &Key) -> TPoly {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Filtration degree (largest monomial degree), `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(m, _)| m.degree()).max()
    }

    pub fn add_term(&mut self, key: Key, c: &TPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.add(c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add(&self, other: &SraElement) -> SraElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &SraElement) -> SraElement {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> SraElement {
        self.scale_t(&TPoly::constant(c.clone()))
    }

    pub fn scale_t(&self, c: &TPoly) -> SraElement {
        let mut out = SraElement::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &v.mul(c));
        }
        out
    }

    /// True when every coefficient is a constant (no `T`).
    pub fn is_specialized(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }

    /// Coefficient of `T^k` in every term.
    pub fn t_coefficient(&self, k: usize) -> SraElement {
        let mut out = SraElement::zero();
        for (key, c) in &self.terms {
            out.add_term(key.clone(), &TPoly::constant(c.coeff(k)));
        }
        out
    }
}

/// Rewriting system for `A_{t,c}` over a finite symplectic group.
#[derive(Debug)]
pub struct SraEngine {
    group: MatrixGroup,
    t: TParam,
    /// Parameter per symplectic reflection class.
    c: Vec<Scalar>,
    names: Vec<String>,
    omega: Matrix,
    reflections: Vec<SymplecticReflection>,
    /// `action[g][j]`: nonzero entries `(i, a)` of `g(x_j) = sum a x_i`.
    action: Vec<Vec<Vec<(usize, Scalar)>>>,
    /// `swap[i][k]` for `i < k`: the terms `(g, coeff)` of `x_k x_i - x_i x_k`.
    swap: Vec<Vec<Vec<(usize, TPoly)>>>,
    flipped: Option<usize>,
    cache: Mutex<HashMap<(Monomial, usize), SraElement>>,
}

/// Builds the engine; `c` maps reflection-class indices to parameters and
/// must cover every class.
pub fn build_sra(g: &MatrixGroup, t: TParam, c: &BTreeMap<usize, Scalar>) -> Result<SraEngine> {
    let omega = g.symplectic_form()?;
    let reflections = g.symplectic_reflections()?;
    let nclasses = reflections.iter().map(|r| r.class + 1).max().unwrap_or(0);
    if let Some(&extra) = c.keys().find(|&&k| k >= nclasses) {
        return Err(Error::ClassParameter(extra));
    }
    let cvals = (0..nclasses).map(|k| c.get(&k).cloned().ok_or(Error::ClassParameter(k))).collect::<Result<Vec<_>>>()?;
    if let Some(bad) = cvals.iter().find(|v| !g.field().contains(v)) {
        return Err(Error::NotInField(bad.to_string()));
    }
    if let TParam::Value(v) = &t {
        if !g.field().contains(v) {
            return Err(Error::NotInField(v.to_string()));
        }
    }
    g.table();
    let n = g.dim();
    let action = g
        .elements()
        .iter()
        .map(|m| (0..n).map(|j| (0..n).filter(|&i| !m[(i, j)].is_zero()).map(|i| (i, m[(i, j)].clone())).collect()).collect())
        .collect();
    let tp = t.as_tpoly();
    let mut swap = vec![vec![Vec::new(); n]; n];
    for (i, row) in swap.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate().skip(i + 1) {
            let mut terms: BTreeMap<usize, TPoly> = BTreeMap::new();
            let w = &omega[(i, k)];
            if !w.is_zero() {
                terms.insert(0, tp.scale(&-w));
            }
            for r in &reflections {
                let ws = &r.omega_s[(i, k)];
                if ws.is_zero() || cvals[r.class].is_zero() {
                    continue;
                }
                let v = TPoly::constant(-&(ws * &cvals[r.class]));
                let slot = terms.entry(r.element).or_default();
                *slot = slot.add(&v);
            }
            *entry = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
    }
    Ok(SraEngine {
        group: g.clone(),
        t,
        c: cvals,
        names: coordinate_names(n),
        omega,
        reflections,
        action,
        swap,
        flipped: None,
        cache: Mutex::new(HashMap::new()),
    })
}

/// Result of [`SraEngine::pbw_dimension_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PbwReport {
    /// `dim F_i` for `i = 0..=d`.
    pub dims: Vec<usize>,
    /// `|G| * C(i + dim V, dim V)`.
    pub expected: Vec<usize>,
    pub pass: bool,
    pub first_failure: Option<usize>,
    /// Overlap words whose two reductions disagree.
    pub ambiguities: usize,
}

impl SraEngine {
    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn t(&self) -> &TParam {
        &self.t
    }

    pub fn c(&self) -> &[Scalar] {
        &self.c
    }

    pub fn letter_names(&self) -> &[String] {
        &self.names
    }

    pub fn nletters(&self) -> usize {
        self.names.len()
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn reflections(&self) -> &[SymplecticReflection] {
        &self.reflections
    }

    pub fn is_formal(&self) -> bool {
        self.t == TParam::Formal
    }

    fn c_map(&self) -> BTreeMap<usize, Scalar> {
        self.c.iter().cloned().enumerate().collect()
    }

    /// Same group and `c` with another `t`.
    pub fn with_t(&self, t: TParam) -> SraEngine {
        let mut e = build_sra(&self.group, t, &self.c_map()).expect("parameters already validated");
        if let Some(j) = self.flipped {
            e.flip(j);
        }
        e
    }

    /// Negative control: negates the action of every non-identity group
    /// element on letter `j`. The result is no longer a valid algebra.
    pub fn with_flipped_action_sign(&self, j: usize) -> SraEngine {
        let mut e = self.with_t(self.t.clone());
        e.flip(j);
        e
    }

    fn flip(&mut self, j: usize) {
        for g in 1..self.action.len() {
            for entry in &mut self.action[g][j] {
                entry.1 = -&entry.1;
            }
        }
        self.flipped = Some(j);
        self.cache.lock().unwrap().clear();
    }

    pub fn one(&self) -> SraElement {
        SraElement::term(Monomial::one(self.nletters()), 0, TPoly::constant(Scalar::one()))
    }

    pub fn scalar(&self, c: Scalar) -> SraElement {
        SraElement::term(Monomial::one(self.nletters()), 0, TPoly::constant(c))
    }

    pub fn letter(&self, i: usize) -> SraElement {
        SraElement::term(Monomial::var(self.nletters(), i), 0, TPoly::constant(Scalar::one()))
    }

    pub fn group_element(&self, g: usize) -> SraElement {
        SraElement::term(Monomial::one(self.nletters()), g, TPoly::constant(Scalar::one()))
    }

    pub fn key_element(&self, key: &Key) -> SraElement {
        SraElement::term(key.0.clone(), key.1, TPoly::constant(Scalar::one()))
    }

    /// `m * x_i` for an ordered monomial `m`.
    fn ordered_times(&self, m: &Monomial, i: usize) -> SraElement {
        let k = match (i + 1..self.nletters()).rev().find(|&k| m.0[k] > 0) {
            None => return SraElement::term(m.mul(&Monomial::var(self.nletters(), i)), 0, TPoly::constant(Scalar::one())),
            Some(k) => k,
        };
        if let Some(hit) = self.cache.lock().unwrap().get(&(m.clone(), i)) {
            return hit.clone();
        }
        let mut rest = m.clone();
        rest.0[k] -= 1;
        // m' x_k x_i = (m' x_i) x_k + m' (x_k x_i - x_i x_k)
        let mut out = self.times_letter(&self.ordered_times(&rest, i), k);
        for (g, c) in &self.swap[i][k] {
            out.add_term((rest.clone(), *g), c);
        }
        self.cache.lock().unwrap().insert((m.clone(), i), out.clone());
        out
    }

    fn times_letter(&self, e: &SraElement, j: usize) -> SraElement {
        let mut out = SraElement::zero();
        for ((m, g), c) in &e.terms {
            for (i, a) in &self.action[*g][j] {
                let ca = c.scale(a);
                for ((m2, h), c2) in &self.ordered_times(m, *i).terms {
                    out.add_term((m2.clone(), self.group.mul(*h, *g)), &ca.mul(c2));
                }
            }
        }
        out
    }

    fn times_group(&self, e: &SraElement, h: usize) -> SraElement {
        let mut out = SraElement::zero();
        for ((m, g), c) in &e.terms {
            out.add_term((m.clone(), self.group.mul(*g, h)), c);
        }
        out
    }

    fn word_of(&self, m: &Monomial) -> Vec<usize> {
        m.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize)).collect()
    }

    pub fn mul(&self, a: &SraElement, b: &SraElement) -> SraElement {
        let mut out = SraElement::zero();
        for ((m, g), c) in &b.terms {
            let mut cur = a.clone();
            for j in self.word_of(m) {
                cur = self.times_letter(&cur, j);
            }
            cur = self.times_group(&cur, *g);
            out = out.add(&cur.scale_t(c));
        }
        out
    }

    pub fn commutator(&self, a: &SraElement, b: &SraElement) -> SraElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    fn letter_element(&self, l: Letter) -> SraElement {
        match l {
            Letter::V(i) => self.letter(i),
            Letter::G(g) => self.group_element(g),
        }
    }

    /// Normal form of a word, multiplying left to right.
    pub fn normal_form(&self, word: &[Letter]) -> SraElement {
        let mut cur = self.one();
        for &l in word {
            cur = match l {
                Letter::V(i) => self.times_letter(&cur, i),
                Letter::G(g) => self.times_group(&cur, g),
            };
        }
        cur
    }

    /// Normal form under a random bracketing of the word.
    pub fn normal_form_random(&self, word: &[Letter], rng: &mut ChaCha8Rng) -> SraElement {
        match word.len() {
            0 => self.one(),
            1 => self.letter_element(word[0]),
            n => {
                let split = rng.gen_range(1..n);
                let left = self.normal_form_random(&word[..split], rng);
                let right = self.normal_form_random(&word[split..], rng);
                self.mul(&left, &right)
            }
        }
    }

    /// Words are products of letter names (with `^k`), group elements `g<i>`
    /// and `1`, separated by `*` or whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        let mut col = 1;
        for tok in text.split(|c: char| c == '*' || c == '·' || c.is_whitespace()) {
            let here = col;
            col += tok.chars().count() + 1;
            if tok.is_empty() || tok == "1" {
                continue;
            }
            let (base, pow) = match tok.split_once('^') {
                Some((b, p)) => (b, p.parse::<usize>().map_err(|_| Error::Syntax { column: here, message: format!("bad exponent in `{tok}`") })?),
                None => (tok, 1),
            };
            let letter = if let Some(i) = self.names.iter().position(|n| n == base) {
                Letter::V(i)
            } else if let Some(idx) = base.strip_prefix('g').and_then(|s| s.parse::<usize>().ok()) {
                if idx >= self.group.order() {
                    return Err(Error::Syntax { column: here, message: format!("no group element {base}") });
                }
                Letter::G(idx)
            } else {
                return Err(Error::UnknownVariable(base.to_string()));
            };
            out.extend(std::iter::repeat(letter).take(pow));
        }
        Ok(out)
    }

    /// Parses a linear combination of words, e.g. `x*y + y*x - 2*g1`.
    pub fn parse_element(&self, text: &str) -> Result<SraElement> {
        let mut out = SraElement::zero();
        let chars: Vec<char> = text.chars().collect();
        let mut start = 0;
        let mut sign = 1i64;
        let mut i = 0;
        let flush = |from: usize, to: usize, sign: i64, out: &mut SraElement| -> Result<()> {
            let piece: String = chars[from..to].iter().collect();
            if piece.trim().is_empty() {
                return if from == 0 { Ok(()) } else { Err(Error::Syntax { column: to + 1, message: "empty term".into() }) };
            }
            let mut coeff = Scalar::from_int(sign);
            let mut word = Vec::new();
            for (k, f) in piece.split('*').enumerate() {
                let f = f.trim();
                if f.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    coeff = &coeff * &crate::parse::parse_scalar(f, self.group.field())
                        .map_err(|_| Error::Syntax { column: from + 1, message: format!("bad coefficient `{f}`") })?;
                } else if k == 0 && f.is_empty() {
                    return Err(Error::Syntax { column: from + 1, message: "empty factor".into() });
                } else {
                    word.extend(self.parse_word(f)?);
                }
            }
            *out = out.add(&self.normal_form(&word).scale(&coeff));
            Ok(())
        };
        while i < chars.len() {
            let ch = chars[i];
            if (ch == '+' || ch == '-') && (i == 0 || chars[i - 1] != '^') {
                flush(start, i, sign, &mut out)?;
                sign = if ch == '+' { 1 } else { -1 };
                start = i + 1;
            }
            i += 1;
        }
        flush(start, chars.len(), sign, &mut out)?;
        Ok(out)
    }

    fn monomial_string(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
            .collect();
        parts.join("*")
    }

    /// Label of a PBW key, e.g. `x*y|g1`.
    pub fn key_label(&self, key: &Key) -> String {
        let m = self.monomial_string(&key.0);
        format!("{}|g{}", if m.is_empty() { "1".into() } else { m }, key.1)
    }

    pub fn display(&self, e: &SraElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Key> = e.terms.keys().collect();
        keys.sort_by(|a, b| key_order(b, a));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|k| {
                let mut body = self.monomial_string(&k.0);
                if k.1 != 0 {
                    if !body.is_empty() {
                        body.push('*');
                    }
                    body.push_str(&format!("g{}", k.1));
                }
                let c = &e.terms[k];
                match c.as_constant() {
                    Some(s) if body.is_empty() => s.to_string(),
                    Some(s) if s.is_one() => body,
                    Some(s) if (-&s).is_one() => format!("-{body}"),
                    Some(s) => format!("{s}*{body}"),
                    None if body.is_empty() => format!("({c})"),
                    None => format!("({c})*{body}"),
                }
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }

    fn generators(&self) -> Vec<SraElement> {
        let mut out: Vec<SraElement> = (0..self.nletters()).map(|i| self.letter(i)).collect();
        out.extend(self.group.generators().iter().map(|&g| self.group_element(g)));
        out
    }

    pub fn is_central(&self, z: &SraElement) -> bool {
        self.generators().iter().all(|u| self.commutator(z, u).is_zero())
    }

    /// PBW keys of `F_d`, highest degree first.
    pub fn pbw_keys(&self, d: u32) -> Vec<Key> {
        let monos = Monomial::all_up_to_degree(self.nletters(), d);
        let mut keys: Vec<Key> = monos.into_iter().flat_map(|m| (0..self.group.order()).map(move |g| (m.clone(), g))).collect();
        keys.sort_by(|a, b| key_order(b, a));
        keys
    }

    fn require_numeric(&self, what: &str) -> Result<()> {
        if self.is_formal() {
            return Err(Error::Unsupported(format!("{what} with formal t")));
        }
        Ok(())
    }

    /// Dimensions of `F_i` of the algebra presented by the rewriting rules,
    /// computed as the PBW count minus the two-sided ideal forced by the
    /// overlap ambiguities `(ab)c - a(bc)` among generators. An overlap with
    /// `L` letters of `V` is counted from degree `L` on. A formal engine is
    /// checked at `T = 1`.
    pub fn pbw_dimension_check(&self, d: u32) -> PbwReport {
        if self.is_formal() {
            return self.with_t(TParam::Value(Scalar::one())).pbw_dimension_check(d);
        }
        let n = self.nletters();
        let gens: Vec<(SraElement, usize)> = self
            .generators()
            .into_iter()
            .enumerate()
            .map(|(k, e)| (e, usize::from(k < n)))
            .collect();
        let mut deltas: Vec<(SraElement, usize)> = Vec::new();
        for (a, la) in &gens {
            for (b, lb) in &gens {
                let ab = self.mul(a, b);
                for (c, lc) in &gens {
                    let left = self.mul(&ab, c);
                    let right = self.mul(a, &self.mul(b, c));
                    let delta = left.sub(&right);
                    if !delta.is_zero() {
                        deltas.push((delta, la + lb + lc));
                    }
                }
            }
        }
        let order = self.group.order();
        let mut dims = Vec::new();
        let mut expected = Vec::new();
        for i in 0..=d {
            let full = order * binomial(i as usize + n, n);
            expected.push(full);
            let seeds: Vec<SraElement> = deltas.iter().filter(|(_, l)| *l as u32 <= i).map(|(e, _)| e.clone()).collect();
            let rank = self.ideal_rank(&seeds, &gens, i);
            dims.push(full - rank);
        }
        let first_failure = (0..dims.len()).find(|&i| dims[i] != expected[i]);
        PbwReport { pass: first_failure.is_none(), dims, expected, first_failure, ambiguities: deltas.len() }
    }

    /// Dimension of the span of two-sided multiples of `seeds` inside `F_i`.
    fn ideal_rank(&self, seeds: &[SraElement], gens: &[(SraElement, usize)], i: u32) -> usize {
        let mut index = KeyIndex::default();
        let mut ech = Echelon::new();
        let mut queue: VecDeque<SraElement> = VecDeque::new();
        for s in seeds {
            if s.degree().is_some_and(|d| d <= i) && ech.insert(index.vec(s)) {
                queue.push_back(s.clone());
            }
        }
        while let Some(s) = queue.pop_front() {
            for (u, _) in gens {
                for p in [self.mul(u, &s), self.mul(&s, u)] {
                    if p.degree().is_some_and(|d| d <= i) && ech.insert(index.vec(&p)) {
                        queue.push_back(p);
                    }
                }
            }
        }
        ech.rank()
    }

    /// Images of `b` under commutators with every generator, as one vector.
    fn commutator_image(&self, b: &SraElement, gens: &[SraElement]) -> Vec<(usize, Key, Scalar)> {
        let mut out = Vec::new();
        for (k, u) in gens.iter().enumerate() {
            for (key, c) in &self.commutator(b, u).terms {
                out.push((k, key.clone(), c.as_constant().expect("numeric engine")));
            }
        }
        out
    }

    /// Basis of the central elements of `F_d`.
    pub fn center_basis(&self, d: u32) -> Result<Vec<SraElement>> {
        self.require_numeric("center computation")?;
        let keys = self.pbw_keys(d);
        let basis: Vec<SraElement> = keys.iter().map(|k| self.key_element(k)).collect();
        let ker = self.central_combinations(&basis);
        Ok(ker.iter().map(|v| combine(&basis, v)).collect())
    }

    fn central_combinations(&self, basis: &[SraElement]) -> Vec<SparseVec> {
        let gens = self.generators();
        let raw: Vec<Vec<(usize, Key, Scalar)>> = basis.par_iter().map(|b| self.commutator_image(b, &gens)).collect();
        let mut cols: HashMap<(usize, Key), usize> = HashMap::new();
        let images: Vec<SparseVec> = raw
            .into_iter()
            .map(|entries| {
                let mut v: SparseVec = entries
                    .into_iter()
                    .map(|(k, key, c)| {
                        let next = cols.len();
                        (*cols.entry((k, key)).or_insert(next), c)
                    })
                    .collect();
                v.sort_by_key(|t| t.0);
                v
            })
            .collect();
        kernel(&images)
    }

    /// A central element of `F_d` whose top part is `top`, with the lower
    /// part fixed by a particular solution of the commutator equations.
    fn central_lift(&self, top: &SraElement, d: u32) -> Result<SraElement> {
        if self.is_central(top) {
            return Ok(top.clone());
        }
        let gens = self.generators();
        let lower: Vec<SraElement> = if d == 0 { Vec::new() } else { self.pbw_keys(d - 1).iter().map(|k| self.key_element(k)).collect() };
        let mut cols: HashMap<(usize, Key), usize> = HashMap::new();
        let mut to_vec = |entries: Vec<(usize, Key, Scalar)>| -> SparseVec {
            let mut v: SparseVec = entries
                .into_iter()
                .map(|(k, key, c)| {
                    let next = cols.len();
                    (*cols.entry((k, key)).or_insert(next), c)
                })
                .collect();
            v.sort_by_key(|t| t.0);
            v
        };
        let raw: Vec<Vec<(usize, Key, Scalar)>> = lower.par_iter().map(|b| self.commutator_image(b, &gens)).collect();
        let mut solver = TrackedEchelon::new();
        for entries in raw {
            solver.insert(to_vec(entries));
        }
        let rhs: SparseVec = to_vec(self.commutator_image(top, &gens)).into_iter().map(|(i, c)| (i, -c)).collect();
        let lambda = solver.solve(rhs).ok_or_else(|| Error::NotCentral(self.display(top)))?;
        Ok(top.add(&combine(&lower, &lambda)))
    }

    /// Quantized bracket `{z1, z2}`: `[z1, z2] / T` at `T = 0`, computed in
    /// the formal engine with the same `c`, then checked central at `t = 0`.
    pub fn quantized_bracket(&self, z1: &SraElement, z2: &SraElement) -> Result<SraElement> {
        let formal;
        let formal = if self.is_formal() {
            self
        } else {
            formal = self.with_t(TParam::Formal);
            &formal
        };
        let classical = self.with_t(TParam::Value(Scalar::zero()));
        quantized_bracket(formal, &classical, z1, z2)
    }

    /// Generators, relations and the induced Poisson bracket of the center of
    /// `A_{0,c}`. Generators come from `F_degree`; relations are searched up
    /// to twice the top generator degree and certified against the Molien
    /// count of the associated graded.
    pub fn center_presentation(&self, degree: u32) -> Result<CenterPresentation> {
        if !self.t.is_zero() {
            return Err(Error::Unsupported("center presentation needs t = 0".into()));
        }
        let n = self.nletters();
        let sym_ring = self.group.coordinate_ring();
        let center = self.center_basis(degree)?;
        let mut gens: Vec<SraElement> = Vec::new();
        let mut symbols: Vec<Poly> = Vec::new();
        let mut gen_deg: Vec<u32> = Vec::new();
        for d in 1..=degree {
            let monos = {
                let mut m = Monomial::all_of_degree(n, d);
                m.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(b, a));
                m
            };
            let mindex: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let sym_vec = |p: &Poly| -> SparseVec {
                let mut v: SparseVec = p.raw_terms().map(|(m, c)| (mindex[m], c.clone())).collect();
                v.sort_by_key(|t| t.0);
                v
            };
            let mut tops = Echelon::new();
            for z in center.iter().filter(|z| z.degree() == Some(d)) {
                let top = Poly::from_terms(
                    &sym_ring,
                    z.terms().filter(|((m, g), _)| *g == 0 && m.degree() == d).map(|((m, _), c)| (m.clone(), c.as_constant().unwrap())),
                );
                tops.insert(sym_vec(&top));
            }
            let mut span = Echelon::new();
            for e in weighted_exponents(&gen_deg, d, true) {
                let mut p = Poly::one(&sym_ring);
                for (i, &k) in e.iter().enumerate() {
                    p = &p * &symbols[i].pow(k);
                }
                span.insert(sym_vec(&p));
            }
            let mut fresh: Vec<Poly> = Vec::new();
            for v in tops.rref().iter().rev() {
                if span.insert(v.clone()) {
                    fresh.push(Poly::from_terms(&sym_ring, v.iter().map(|(i, c)| (monos[*i].clone(), c.clone()))));
                }
            }
            fresh.sort_by(|a, b| {
                let sa = a.support_vars().len();
                let sb = b.support_vars().len();
                sa.cmp(&sb).then_with(|| MonomialOrder::DegRevLex.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()))
            });
            for f in fresh {
                let top = self.symmetrize(&f);
                gens.push(self.central_lift(&top, d)?);
                symbols.push(f);
                gen_deg.push(d);
            }
        }
        let k = gens.len();
        let names = generator_names(k);
        let target = PolyRing::new(&names, self.group.field().clone())?;
        let weight = 2 * gen_deg.iter().copied().max().unwrap_or(0);
        // products of generators by increasing weight
        let exps = weighted_exponents(&gen_deg, weight, false);
        let mut products: HashMap<Vec<u32>, SraElement> = HashMap::new();
        let mut index = KeyIndex::default();
        let mut solver = TrackedEchelon::new();
        let mut rels: Vec<Poly> = Vec::new();
        for e in &exps {
            let p = match e.iter().position(|&x| x > 0) {
                None => self.one(),
                Some(i) => {
                    let mut prev = e.clone();
                    prev[i] -= 1;
                    self.mul(&products[&prev], &gens[i])
                }
            };
            if let Some(combo) = solver.insert(index.vec(&p)) {
                rels.push(Poly::from_terms(&target, combo.iter().map(|(j, c)| (Monomial(exps[*j].clone()), c.clone()))));
            }
            products.insert(e.clone(), p);
        }
        let molien = molien_series(&self.group, weight as usize);
        let expected: Rational = molien.iter().cloned().sum();
        if Rational::from_integer((solver.rank() as i64).into()) != expected {
            return Err(Error::GenerationNotCertified(degree));
        }
        let relations = Ideal::new(&target, rels)?;
        relations.groebner_basis()?;
        let formal = self.with_t(TParam::Formal);
        let mut matrix = vec![vec![Poly::zero(&target); k]; k];
        let mut brackets = vec![vec![SraElement::zero(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let q = quantized_bracket(&formal, self, &gens[i], &gens[j])?;
                let combo = solver.solve(index.vec(&q)).ok_or(Error::GenerationNotCertified(degree))?;
                let p = Poly::from_terms(&target, combo.iter().map(|(m, c)| (Monomial(exps[*m].clone()), c.clone())));
                matrix[j][i] = -&p;
                matrix[i][j] = p;
                brackets[j][i] = q.scale(&Scalar::from_int(-1));
                brackets[i][j] = q;
            }
        }
        let poisson = PoissonStructure::new(&target, relations.clone(), matrix)?;
        Ok(CenterPresentation { generators: gens, symbols, degrees: gen_deg, target, relations, poisson, brackets, relation_weight: weight })
    }

    /// Sum of the distinct rearrangements of each monomial of `f`.
    fn symmetrize(&self, f: &Poly) -> SraElement {
        let mut out = SraElement::zero();
        for (m, c) in f.raw_terms() {
            let letters = self.word_of(m);
            let mut words = Vec::new();
            distinct_permutations(&letters, &mut Vec::new(), &mut vec![false; letters.len()], &mut words);
            for w in words {
                let word: Vec<Letter> = w.into_iter().map(Letter::V).collect();
                out = out.add(&self.normal_form(&word).scale(c));
            }
        }
        out
    }

    /// `A_{0,c} / m_p A_{0,c}` for a point `p` of the center's spectrum,
    /// in the presentation coordinates.
    pub fn sra_fiber(&self, pres: &CenterPresentation, point: &[Scalar]) -> Result<FiberAlgebra> {
        if !self.t.is_zero() {
            return Err(Error::Unsupported("fibers need t = 0".into()));
        }
        if point.len() != pres.generators.len() {
            return Err(Error::DimensionMismatch { expected: pres.generators.len(), got: point.len() });
        }
        if let Some(bad) = point.iter().find(|c| !self.group.field().contains(c)) {
            return Err(Error::NotInField(bad.to_string()));
        }
        for r in pres.relations.gens() {
            if !r.evaluate(point)?.is_zero() {
                return Err(Error::NotOnVariety(format!("relation {r} does not vanish")));
            }
        }
        let shifted: Vec<(SraElement, u32)> = pres
            .generators
            .iter()
            .zip(point)
            .zip(&pres.degrees)
            .map(|((g, p), &d)| (g.sub(&self.scalar(p.clone())), d))
            .collect();
        let top = pres.degrees.iter().copied().max().unwrap_or(0);
        let mut prev: Option<Vec<Key>> = None;
        for big in 0..=MAX_FIBER_DEGREE {
            let q = self.fiber_quotient(&shifted, big);
            let stable = big > top && prev.as_ref() == Some(&q.standard);
            prev = Some(q.standard.clone());
            if !stable {
                continue;
            }
            let s = q.standard.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
            let wide = if 2 * s > big { self.fiber_quotient(&shifted, 2 * s) } else { q };
            if Some(&wide.standard) != prev.as_ref() {
                continue;
            }
            return Ok(self.fiber_table(&wide));
        }
        Err(Error::Unsupported(format!("fiber stabilization beyond filtration degree {MAX_FIBER_DEGREE}")))
    }

    fn fiber_quotient(&self, shifted: &[(SraElement, u32)], big: u32) -> Quotient {
        let keys = self.pbw_keys(big);
        let mut index = KeyIndex::default();
        for k in &keys {
            index.col(k);
        }
        let products: Vec<SraElement> = shifted
            .iter()
            .filter(|(_, d)| *d <= big)
            .flat_map(|(h, d)| self.pbw_keys(big - d).into_iter().map(move |k| (h, k)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|(h, k)| self.mul(h, &self.key_element(k)))
            .collect();
        let mut ech = Echelon::new();
        for p in &products {
            ech.insert(index.vec(p));
        }
        let standard: Vec<Key> = keys.iter().filter(|k| !ech.is_pivot(index.cols[k])).cloned().collect();
        Quotient { standard, echelon: ech, index }
    }

    fn fiber_table(&self, q: &Quotient) -> FiberAlgebra {
        let nb = q.standard.len();
        let pos: HashMap<usize, usize> = q.standard.iter().enumerate().map(|(i, k)| (q.index.cols[k], i)).collect();
        let elems: Vec<SraElement> = q.standard.iter().map(|k| self.key_element(k)).collect();
        let table: Vec<Vec<Vec<Scalar>>> = (0..nb)
            .into_par_iter()
            .map(|a| {
                (0..nb)
                    .map(|b| {
                        let prod = self.mul(&elems[a], &elems[b]);
                        let v: SparseVec = prod
                            .terms()
                            .map(|(k, c)| (q.index.cols[k], c.as_constant().unwrap()))
                            .collect::<BTreeMap<_, _>>()
                            .into_iter()
                            .collect();
                        let r = q.echelon.reduce(v);
                        let mut row = vec![Scalar::zero(); nb];
                        for (i, c) in r {
                            row[pos[&i]] = c;
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        FiberAlgebra { labels: q.standard.iter().map(|k| self.key_label(k)).collect(), table }
    }
}

const MAX_FIBER_DEGREE: u32 = 16;

struct Quotient {
    standard: Vec<Key>,
    echelon: Echelon,
    index: KeyIndex,
}

/// Quantized bracket with explicit engines: `formal` has `t = T`,
/// `classical` has `t = 0`, both with the same group and `c`.
pub fn quantized_bracket(formal: &SraEngine, classical: &SraEngine, z1: &SraElement, z2: &SraElement) -> Result<SraElement> {
    if !formal.is_formal() || !classical.t.is_zero() {
        return Err(Error::Unsupported("quantized bracket needs a formal and a t = 0 engine".into()));
    }
    for z in [z1, z2] {
        if !classical.is_central(z) {
            return Err(Error::NotCentral(classical.display(z)));
        }
    }
    let comm = formal.commutator(z1, z2);
    if !comm.t_coefficient(0).is_zero() {
        return Err(Error::Divisibility);
    }
    let q = comm.t_coefficient(1);
    if !classical.is_central(&q) {
        return Err(Error::NotCentral(classical.display(&q)));
    }
    Ok(q)
}

/// Presentation of the center of `A_{0,c}` with its Poisson bracket.
#[derive(Clone, Debug)]
pub struct CenterPresentation {
    pub generators: Vec<SraElement>,
    /// Top-degree symbols of the generators in `k[V]`.
    pub symbols: Vec<Poly>,
    pub degrees: Vec<u32>,
    pub target: Ring,
    pub relations: Ideal,
    pub poisson: PoissonStructure,
    /// Quantized brackets of generator pairs as algebra elements.
    pub brackets: Vec<Vec<SraElement>>,
    pub relation_weight: u32,
}

impl CenterPresentation {
    pub fn describe(&self, e: &SraEngine) -> Vec<(String, String)> {
        self.target.vars().iter().cloned().zip(self.generators.iter().map(|g| e.display(g))).collect()
    }
}

#[derive(Default)]
struct KeyIndex {
    cols: HashMap<Key, usize>,
}

impl KeyIndex {
    fn col(&mut self, k: &Key) -> usize {
        let next = self.cols.len();
        *self.cols.entry(k.clone()).or_insert(next)
    }

    fn vec(&mut self, e: &SraElement) -> SparseVec {
        let mut v: SparseVec = e.terms().map(|(k, c)| (self.col(k), c.as_constant().expect("numeric coefficients"))).collect();
        v.sort_by_key(|t| t.0);
        v
    }
}

fn combine(basis: &[SraElement], v: &SparseVec) -> SraElement {
    let mut out = SraElement::zero();
    for (i, c) in v {
        out = out.add(&basis[*i].scale(c));
    }
    out
}

/// Degree, then degrevlex on the monomial, then reversed group index.
fn key_order(a: &Key, b: &Key) -> std::cmp::Ordering {
    MonomialOrder::DegRevLex.cmp(&a.0, &b.0).then_with(|| b.1.cmp(&a.1))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Exponent vectors with `sum e_i w_i` equal to (`exact`) or at most `w`,
/// ordered by weight then lexicographically.
fn weighted_exponents(weights: &[u32], w: u32, exact: bool) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            out.push(cur.clone());
            return;
        }
        let mut k = 0;
        loop {
            cur.push(k);
            go(weights, i + 1, left - k * weights[i], cur, out);
            cur.pop();
            k += 1;
            if weights[i] == 0 || k * weights[i] > left {
                break;
            }
        }
    }
    let mut out = Vec::new();
    go(weights, 0, w, &mut Vec::new(), &mut out);
    let weight = |e: &Vec<u32>| e.iter().zip(weights).map(|(a, b)| a * b).sum::<u32>();
    if exact {
        out.retain(|e| weight(e) == w);
    }
    out.sort_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| b.cmp(a)));
    out
}

fn distinct_permutations(items: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    let mut seen = HashSet::new();
    for i in 0..items.len() {
        if used[i] || !seen.insert(items[i]) {
            continue;
        }
        used[i] = true;
        cur.push(items[i]);
        distinct_permutations(items, cur, used, out);
        cur.pop();
        used[i] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn z2(t: TParam, c: i64) -> SraEngine {
        build_sra(&MatrixGroup::cyclic(2), t, &BTreeMap::from([(0, Scalar::from_int(c))])).unwrap()
    }

    fn weyl(t: TParam) -> SraEngine {
        build_sra(&MatrixGroup::trivial(2), t, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn rules() {
        let e = z2(TParam::Value(Scalar::zero()), 1);
        let w = e.parse_word("y*x").unwrap();
        assert_eq!(e.display(&e.normal_form(&w)), "x*y - g1");
        assert_eq!(e.display(&e.normal_form(&e.parse_word("g1 g1").unwrap())), "1");
        let a1 = weyl(TParam::Value(Scalar::one()));
        assert_eq!(a1.display(&a1.normal_form(&a1.parse_word("y*x*x").unwrap())), "x^2*y - 2*x");
        let comm = weyl(TParam::Value(Scalar::zero()));
        assert_eq!(comm.display(&comm.normal_form(&comm.parse_word("y x").unwrap())), "x*y");
    }

    #[test]
    fn missing_class_parameter() {
        let err = build_sra(&MatrixGroup::cyclic(2), TParam::Formal, &BTreeMap::new()).unwrap_err();
        assert_eq!(err, Error::ClassParameter(0));
    }

    #[test]
    fn reduction_order_independent() {
        let e = build_sra(&MatrixGroup::cyclic(4), TParam::Value(Scalar::one()), &BTreeMap::from([(0, Scalar::one()), (1, Scalar::from_int(2)), (2, Scalar::frac(1, 2))])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let word = e.parse_word("y g1 x y x g3 y x").unwrap();
        let base = e.normal_form(&word);
        for _ in 0..10 {
            assert_eq!(e.normal_form_random(&word, &mut rng), base);
        }
    }

    #[test]
    fn pbw_counts() {
        let r = z2(TParam::Value(Scalar::zero()), 1).pbw_dimension_check(2);
        assert_eq!(r.dims, vec![2, 6, 12]);
        assert!(r.pass);
        let r = weyl(TParam::Value(Scalar::one())).pbw_dimension_check(3);
        assert_eq!(r.dims, vec![1, 3, 6, 10]);
        let bad = z2(TParam::Value(Scalar::zero()), 1).with_flipped_action_sign(0).pbw_dimension_check(3);
        assert!(!bad.pass);
        assert!(bad.first_failure.unwrap() <= 3);
    }

    #[test]
    fn centers() {
        let e = z2(TParam::Value(Scalar::zero()), 1);
        let z = e.center_basis(2).unwrap();
        assert_eq!(z.len(), 4);
        let c = e.parse_element("x*y + y*x").unwrap();
        assert!(e.is_central(&c));
        assert!(!e.is_central(&e.letter(0)));
        assert_eq!(weyl(TParam::Value(Scalar::one())).center_basis(4).unwrap().len(), 1);
        assert_eq!(e.center_basis(0).unwrap().len(), 1);
    }

    #[test]
    fn weyl_quantization() {
        let e = weyl(TParam::Formal);
        let x = e.letter(0);
        let y = e.letter(1);
        assert_eq!(e.display(&e.quantized_bracket(&x, &y).unwrap()), "1");
        let x2 = e.mul(&x, &x);
        let y2 = e.mul(&y, &y);
        assert_eq!(e.display(&e.quantized_bracket(&x2, &y2).unwrap()), "4*x*y");
    }

    #[test]
    fn z2_presentation() {
        for c in [1, 0] {
            let e = z2(TParam::Value(Scalar::zero()), c);
            let p = e.center_presentation(2).unwrap();
            let shown: Vec<String> = p.generators.iter().map(|g| e.display(g)).collect();
            assert_eq!(shown[..2], ["x^2", "y^2"]);
            assert_eq!(p.symbols[2].to_string(), "x*y");
            let rel = if c == 1 { "C^2 - 4*A*B - 1" } else { "C^2 - 4*A*B" };
            let expect = Ideal::parse(&p.target, &[rel]).unwrap();
            assert!(p.relations.equals(&expect).unwrap(), "{}", p.relations);
            assert!(p.poisson.is_valid().unwrap());
        }
    }

    #[test]
    fn fibers() {
        let e = z2(TParam::Value(Scalar::zero()), 1);
        let p = e.center_presentation(2).unwrap();
        // C^2 - 4AB = 1 at (A, B, C) = (0, 0, 1)
        let f = e.sra_fiber(&p, &[Scalar::zero(), Scalar::zero(), Scalar::one()]).unwrap();
        assert_eq!(f.invariants().unwrap().as_tuple(), (4, 1, 0, 4));
        let e0 = z2(TParam::Value(Scalar::zero()), 0);
        let p0 = e0.center_presentation(2).unwrap();
        let cone = e0.sra_fiber(&p0, &[Scalar::zero(), Scalar::zero(), Scalar::zero()]).unwrap();
        let inv = cone.invariants().unwrap();
        assert_eq!((inv.dim, inv.radical_dim, inv.semisimple_dim), (6, 4, 2));
        assert!(matches!(e.sra_fiber(&p, &vec![Scalar::one(); 3]), Err(Error::NotOnVariety(_))));
    }
}
