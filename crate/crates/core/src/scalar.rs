//! Exact coefficient fields: the rationals and cyclotomic extensions `Q(zeta_n)`.
//!
//! A cyclotomic element is a vector of rational coordinates on the power basis
//! `1, zeta, ..., zeta^(phi(n)-1)`, always kept reduced modulo the n-th
//! cyclotomic polynomial. Elements that happen to be rational are stored as
//! plain rationals, so equality is structural.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

/// Builds the rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// The coefficient field of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Cyclotomic(u32),
}

impl Field {
    pub fn cyclotomic(n: u32) -> Field {
        // Q(zeta_1) = Q(zeta_2) = Q
        if n <= 2 {
            Field::Rationals
        } else {
            Field::Cyclotomic(n)
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (&s.0, self) {
            (Repr::Rat(_), _) => true,
            (Repr::Cyc(ctx, _), Field::Cyclotomic(n)) => ctx.n == *n,
            (Repr::Cyc(..), Field::Rationals) => false,
        }
    }

    /// Generator of the field over Q, if any.
    pub fn zeta(&self) -> Option<Scalar> {
        match self {
            Field::Rationals => None,
            Field::Cyclotomic(n) => Some(Scalar::zeta(*n)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Cyclotomic(n) => write!(f, "Q(zeta_{n})"),
        }
    }
}

#[derive(Debug)]
struct CycloCtx {
    n: u32,
    /// Monic cyclotomic polynomial, coefficients from degree 0 upward.
    modulus: Vec<Rational>,
}

impl CycloCtx {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

fn int_poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = &den[dd];
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / lead;
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Integer coefficients of the n-th cyclotomic polynomial, degree 0 upward.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = int_poly_divexact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn context(n: u32) -> Arc<CycloCtx> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloCtx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let modulus = cyclotomic_polynomial(n)
                .into_iter()
                .map(Rational::from_integer)
                .collect();
            Arc::new(CycloCtx { n, modulus })
        })
        .clone()
}

#[derive(Clone, Debug)]
enum Repr {
    Rat(Rational),
    Cyc(Arc<CycloCtx>, Vec<Rational>),
}

/// An exact field element.
#[derive(Clone, Debug)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(Repr::Rat(Rational::zero()))
    }

    pub fn one() -> Scalar {
        Scalar(Repr::Rat(Rational::one()))
    }

    pub fn from_int(v: i64) -> Scalar {
        Scalar(Repr::Rat(Rational::from_integer(BigInt::from(v))))
    }

    pub fn from_rational(r: Rational) -> Scalar {
        Scalar(Repr::Rat(r))
    }

    pub fn frac(p: i64, q: i64) -> Scalar {
        Scalar(Repr::Rat(rat(p, q)))
    }

    /// A primitive n-th root of unity `exp(2 pi i / n)`.
    pub fn zeta(n: u32) -> Scalar {
        match n {
            1 => Scalar::one(),
            2 => Scalar::from_int(-1),
            _ => {
                let ctx = context(n);
                let mut coords = vec![Rational::zero(); ctx.degree()];
                coords[1] = Rational::one();
                Scalar(Repr::Cyc(ctx, coords))
            }
        }
    }

    /// Element of `Q(zeta_n)` from power-basis coordinates (reduced on the fly).
    pub fn from_coords(n: u32, coords: &[Rational]) -> Scalar {
        let z = Scalar::zeta(n);
        let mut acc = Scalar::zero();
        let mut p = Scalar::one();
        for c in coords {
            acc += &(&p * &Scalar::from_rational(c.clone()));
            p = &p * &z;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Cyc(..) => None,
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .and_then(|r| r.numer().to_i64())
    }

    /// Cyclotomic order of the field this element genuinely lives in.
    pub fn cyclotomic_order(&self) -> Option<u32> {
        match &self.0 {
            Repr::Rat(_) => None,
            Repr::Cyc(ctx, _) => Some(ctx.n),
        }
    }

    /// Power-basis coordinates in `Q(zeta_n)`.
    pub fn coords(&self, n: u32) -> Vec<Rational> {
        let deg = if n <= 2 { 1 } else { context(n).degree() };
        let mut out = vec![Rational::zero(); deg];
        match &self.0 {
            Repr::Rat(r) => out[0] = r.clone(),
            Repr::Cyc(ctx, c) => {
                assert_eq!(ctx.n, n, "element of Q(zeta_{}) read in Q(zeta_{n})", ctx.n);
                out.clone_from(c);
            }
        }
        out
    }

    fn normalized(ctx: Arc<CycloCtx>, coords: Vec<Rational>) -> Scalar {
        if coords[1..].iter().all(Zero::is_zero) {
            Scalar(Repr::Rat(coords.into_iter().next().unwrap()))
        } else {
            Scalar(Repr::Cyc(ctx, coords))
        }
    }

    fn cyc_parts<'a>(a: &'a Scalar, b: &'a Scalar) -> Option<Arc<CycloCtx>> {
        match (&a.0, &b.0) {
            (Repr::Cyc(c1, _), Repr::Cyc(c2, _)) => {
                assert_eq!(c1.n, c2.n, "mixing Q(zeta_{}) and Q(zeta_{})", c1.n, c2.n);
                Some(c1.clone())
            }
            (Repr::Cyc(c, _), _) | (_, Repr::Cyc(c, _)) => Some(c.clone()),
            _ => None,
        }
    }

    fn lift(&self, ctx: &CycloCtx) -> Vec<Rational> {
        match &self.0 {
            Repr::Rat(r) => {
                let mut v = vec![Rational::zero(); ctx.degree()];
                v[0] = r.clone();
                v
            }
            Repr::Cyc(_, c) => c.clone(),
        }
    }

    fn reduce_mod(ctx: &CycloCtx, mut prod: Vec<Rational>) -> Vec<Rational> {
        let d = ctx.degree();
        for k in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                let m = &ctx.modulus[i];
                if !m.is_zero() {
                    prod[k - d + i] -= &c * m;
                }
            }
        }
        prod.truncate(d);
        prod
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match &self.0 {
            Repr::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar(Repr::Rat(r.recip())))
                }
            }
            Repr::Cyc(ctx, a) => {
                // solve (multiplication-by-a) * b = e_0
                let d = ctx.degree();
                let cols: Vec<Vec<Rational>> = (0..d)
                    .map(|j| {
                        let mut prod = vec![Rational::zero(); 2 * d - 1];
                        for (i, x) in a.iter().enumerate() {
                            prod[i + j] = x.clone();
                        }
                        Self::reduce_mod(ctx, prod)
                    })
                    .collect();
                // augmented system rows: sum_j cols[j][i] * b_j = delta_{i0}
                let mut m: Vec<Vec<Rational>> = (0..d)
                    .map(|i| {
                        let mut row: Vec<Rational> = (0..d).map(|j| cols[j][i].clone()).collect();
                        row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                        row
                    })
                    .collect();
                for col in 0..d {
                    let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
                    m.swap(col, piv);
                    let p = m[col][col].clone();
                    for v in m[col].iter_mut() {
                        *v /= &p;
                    }
                    for r in 0..d {
                        if r != col && !m[r][col].is_zero() {
                            let f = m[r][col].clone();
                            for k in col..=d {
                                let sub = &f * &m[col][k];
                                m[r][k] -= sub;
                            }
                        }
                    }
                }
                let sol = m.into_iter().map(|row| row[d].clone()).collect();
                Some(Self::normalized(ctx.clone(), sol))
            }
        }
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// True when the element, read as a rational, is negative. Used only for printing.
    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_negative())
    }

    pub(crate) fn is_cyclotomic(&self) -> bool {
        matches!(self.0, Repr::Cyc(..))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Rat(a), Repr::Rat(b)) => a == b,
            (Repr::Cyc(c1, a), Repr::Cyc(c2, b)) => c1.n == c2.n && a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Rat(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Repr::Cyc(ctx, c) => {
                1u8.hash(state);
                ctx.n.hash(state);
                c.hash(state);
            }
        }
    }
}

/// Canonical total order: rationals numerically, then cyclotomic elements by
/// field order and coordinates. It is not compatible with the field operations.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            (Repr::Rat(_), Repr::Cyc(..)) => Ordering::Less,
            (Repr::Cyc(..), Repr::Rat(_)) => Ordering::Greater,
            (Repr::Cyc(c1, a), Repr::Cyc(c2, b)) => c1.n.cmp(&c2.n).then_with(|| a.cmp(b)),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match Scalar::cyc_parts(self, rhs) {
            None => match (&self.0, &rhs.0) {
                (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a + b)),
                _ => unreachable!(),
            },
            Some(ctx) => {
                let mut a = self.lift(&ctx);
                match &rhs.0 {
                    Repr::Rat(r) => a[0] += r,
                    Repr::Cyc(_, b) => {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                    }
                }
                Scalar::normalized(ctx, a)
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a * b)),
            (Repr::Rat(r), Repr::Cyc(ctx, c)) | (Repr::Cyc(ctx, c), Repr::Rat(r)) => {
                if r.is_zero() {
                    return Scalar::zero();
                }
                Scalar(Repr::Cyc(ctx.clone(), c.iter().map(|x| x * r).collect()))
            }
            (Repr::Cyc(c1, a), Repr::Cyc(c2, b)) => {
                assert_eq!(c1.n, c2.n, "mixing Q(zeta_{}) and Q(zeta_{})", c1.n, c2.n);
                let d = c1.degree();
                let mut prod = vec![Rational::zero(); 2 * d - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            prod[i + j] += x * y;
                        }
                    }
                }
                Scalar::normalized(c1.clone(), Scalar::reduce_mod(c1, prod))
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Rat(r) => Scalar(Repr::Rat(-r)),
            Repr::Cyc(ctx, c) => Scalar(Repr::Cyc(ctx.clone(), c.iter().map(|x| -x).collect())),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rat(a), Repr::Rat(b)) = (&mut self.0, &rhs.0) {
            *a += b;
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rat(a), Repr::Rat(b)) = (&mut self.0, &rhs.0) {
            *a -= b;
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rat(r) => fmt_rational(r, f),
            Repr::Cyc(_, coords) => {
                let mut first = true;
                for (k, c) in coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let a = c.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    if k == 0 {
                        fmt_rational(&a, f)?;
                        continue;
                    }
                    if !a.is_one() {
                        fmt_rational(&a, f)?;
                        write!(f, "*")?;
                    }
                    if k == 1 {
                        write!(f, "zeta")?;
                    } else {
                        write!(f, "zeta^{k}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let ints = |v: Vec<BigInt>| v.into_iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(ints(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(ints(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(ints(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(ints(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity() {
        for n in 1..=12u32 {
            let z = Scalar::zeta(n);
            assert!(z.pow(n as i64).is_one(), "zeta_{n}^{n} != 1");
            for k in 1..n {
                if n % k == 0 {
                    assert!(!z.pow(k as i64).is_one(), "zeta_{n} not primitive");
                }
            }
            // Phi_n(zeta_n) = 0
            let phi = cyclotomic_polynomial(n);
            let mut acc = Scalar::zero();
            for (k, c) in phi.iter().enumerate() {
                acc += &(&Scalar::from_rational(Rational::from_integer(c.clone())) * &z.pow(k as i64));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn inverse_and_canonical_equality() {
        let z = Scalar::zeta(5);
        let a = &(&z * &z) + &Scalar::from_int(3);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        // i^2 = -1 collapses to a rational
        let i = Scalar::zeta(4);
        let m = &i * &i;
        assert_eq!(m, Scalar::from_int(-1));
        assert_eq!(m.as_rational(), Some(&rat(-1, 1)));
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn display() {
        assert_eq!(Scalar::frac(-3, 2).to_string(), "-3/2");
        let z = Scalar::zeta(3);
        let e = &Scalar::frac(1, 2) - &(&Scalar::from_int(2) * &z);
        assert_eq!(e.to_string(), "1/2 - 2*zeta");
        assert_eq!(Scalar::zeta(8).pow(3).to_string(), "zeta^3");
    }
}
