//! Exact computation with Poisson orders.
//!
//! Polynomials over the rationals or a cyclotomic field, Gröbner bases and
//! ideal operations, Poisson brackets with cores and rank strata, finite
//! matrix groups with their invariant theory, the stabilizer stratification
//! of symplectic quotients, Weyl-group censuses and PBW arithmetic for
//! symplectic reflection algebras.

pub mod error;
pub mod scalar;
pub mod poly;
pub mod parse;
pub mod linalg;
pub mod groebner;
pub mod ideal;
pub mod poisson;
pub mod groups;
pub mod invariants;
pub mod fiber;
pub mod strata;
pub mod schema;
pub mod sra;
pub mod weyl;

pub use error::{Error, Result};
pub use fiber::{fiber_invariants, FiberAlgebra, FiberInvariants};
pub use groebner::Budget;
pub use groups::{group_closure, MatrixGroup, SubgroupClass, SymplecticReflection};
pub use invariants::{invariant_generators, InvariantPresentation};
pub use ideal::{equal_ideals, ideal_member, Ideal};
pub use linalg::Matrix;
pub use parse::{parse_poly, parse_scalar};
pub use poisson::{CoreComparison, CoreResult, PoissonStructure, ValidationReport};
pub use poly::{Monomial, MonomialOrder, Poly, PolyRing, Ring};
pub use scalar::{Field, Rational, Scalar};
pub use sra::{build_sra, CenterPresentation, SraElement, SraEngine, TParam};
pub use weyl::{build_weyl, CensusTable, RootSystemSpec, WeylGroup};
