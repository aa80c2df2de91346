//! Exact coefficient arithmetic and the rational-function field.

pub mod gauss;
pub mod lattice;
pub mod laurent;
pub mod ratfunc;
pub mod scalar;
pub mod serialize;

pub use gauss::{gauss_reduce, GaussKind, GaussSym};
pub use lattice::{IntMatrix, LatticeVector};
pub use laurent::LaurentPoly;
pub use ratfunc::{Binomial, RatFunc};
pub use scalar::{rat, GaussPoly, SMono, Scalar};

use crate::error::{Error, Result};
use crate::metaplectic::CosetSpace;
use crate::root_datum::WeylElem;

/// f ↦ f(wχ), i.e. x^λ ↦ x^{w⁻¹λ}.
pub fn subst_weyl(f: &RatFunc, w: &WeylElem) -> RatFunc {
    f.map_exponents(&w.inverse_matrix)
}

/// Numerator terms of f in the coset of `gamma`, over the same denominator.
pub fn project_coset(f: &RatFunc, cosets: &CosetSpace, gamma: &LatticeVector) -> Result<RatFunc> {
    if !f.den_exponents().iter().all(|e| cosets.contains(e)) {
        return Err(Error::DenominatorNotOnLattice);
    }
    let target = cosets.reduce(gamma);
    Ok(f.filter_num(|e| cosets.reduce(e) == target))
}
