//! Fixed inputs shared by the benchmarks.

use std::collections::BTreeMap;

use porder::{build_sra, Ideal, MatrixGroup, PolyRing, Scalar, SraEngine, TParam};

/// Cyclic-3 style system in three variables; small but with nontrivial S-pairs.
pub fn cyclic3() -> Ideal {
    let r = PolyRing::rational(&["x", "y", "z"]);
    Ideal::parse(&r, &["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]).unwrap()
}

/// `A_{0,1}` for the cyclic group of order `n` acting on the plane.
pub fn cyclic_sra(n: u32) -> SraEngine {
    let g = MatrixGroup::cyclic(n);
    let classes = g.symplectic_reflections().unwrap().iter().map(|r| r.class + 1).max().unwrap_or(0);
    let c: BTreeMap<usize, Scalar> = (0..classes).map(|k| (k, Scalar::one())).collect();
    build_sra(&g, TParam::Value(Scalar::zero()), &c).unwrap()
}
