//! Random polynomials shared by the integration tests.

#![allow(dead_code)]

use porder::{Monomial, Poly, Ring, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Up to `max_terms` terms of degree `<= max_deg` with small integer coefficients.
pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Ring, max_deg: u32, max_terms: usize) -> Poly {
    let monos = Monomial::all_up_to_degree(ring.nvars(), max_deg);
    let n = rng.gen_range(1..=max_terms);
    let terms = (0..n).map(|_| {
        let m = monos[rng.gen_range(0..monos.len())].clone();
        let c = loop {
            let c: i64 = rng.gen_range(-4..=4);
            if c != 0 {
                break c;
            }
        };
        (m, Scalar::from_int(c))
    });
    Poly::from_terms(ring, terms)
}

/// Another generating set of the same ideal: invertible triangular
/// combinations plus a polynomial multiple of one generator.
pub fn recombine(rng: &mut ChaCha8Rng, gens: &[Poly]) -> Vec<Poly> {
    let ring = gens[0].ring().clone();
    let mut out: Vec<Poly> = gens.to_vec();
    for i in 1..out.len() {
        let k = Scalar::from_int(rng.gen_range(-3..=3));
        let prev = out[i - 1].scale(&k);
        out[i] = &out[i] + &prev;
    }
    let last = out.len() - 1;
    out[last] = out[last].scale(&Scalar::from_int(rng.gen_range(1..=5)));
    let extra = &random_poly(rng, &ring, 1, 2) * &out[0];
    out.push(extra);
    out.reverse();
    out
}
