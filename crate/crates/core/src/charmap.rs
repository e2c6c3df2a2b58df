//! The characteristic map in Picard rank 2.
//!
//! For the lattices here `A_N = N*/N` is cyclic of order `d`. An element of
//! `N*` is pinned down by its pairings `alpha = phi . H` and
//! `beta = phi . delta`; it lies in `N*` iff `mu alpha + beta = 0 (mod 2rs)`
//! and the class `beta mod d` identifies `A_N` with `Z/d`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{big, congruent, divides, mod_inverse, modulo};
use crate::error::{Error, Result};
use crate::lattice::{mukai_m, LatticeVector, Series, Sign, XLattice};

/// A class in `A_N ~ Z/d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscriminantElement {
    pub residue: BigInt,
    pub modulus: BigInt,
}

impl DiscriminantElement {
    pub fn new(value: &BigInt, d: &BigInt) -> Self {
        DiscriminantElement {
            residue: modulo(value, d),
            modulus: d.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// The signs `e` with `residue = e c (mod d)`; condition (ii) holds iff
    /// this is non-empty.
    pub fn condition_ii_signs(&self, c: u64) -> Vec<Sign> {
        Sign::BOTH
            .into_iter()
            .filter(|s| congruent(&self.residue, &s.apply(big(c)), &self.modulus))
            .collect()
    }
}

/// `mu^-1 mod 2rs`, the coefficient of `u*(H) = (mu^-1 / 2rs) delta + K(H)`.
pub fn u_star(l: &XLattice) -> BigInt {
    mod_inverse(l.mu(), l.two_rs()).expect("mu is a unit mod 2rs")
}

/// `nu = m(a,b) mu` for the a-series and `-m(a,b) mu` for the b-series,
/// modulo `2ab`.
pub fn nu_of_series(l: &XLattice, series: Series) -> BigInt {
    let shape = l.shape();
    let m = mukai_m(shape.a(), shape.b()).expect("a, b coprime by construction");
    let nu = match series {
        Series::A => m * l.mu(),
        Series::B => -m * l.mu(),
    };
    modulo(&nu, &shape.two_ab())
}

/// The class of the dual vector with `phi . H = alpha`, `phi . delta = beta`.
pub fn dual_class(l: &XLattice, alpha: &BigInt, beta: &BigInt) -> Result<DiscriminantElement> {
    if !divides(l.two_rs(), &(l.mu() * alpha + beta)) {
        return Err(Error::InvalidVector(format!(
            "pairings ({alpha}, {beta}) do not define an element of N*"
        )));
    }
    Ok(DiscriminantElement::new(beta, l.d()))
}

/// `kappa(H)` on `k delta*`: the dual vector with `delta`-pairing `k`,
/// completed by `H`-pairing `-mu^-1 k`.
pub fn kappa_h(l: &XLattice, k: &BigInt) -> DiscriminantElement {
    let alpha = -(u_star(l) * k);
    dual_class(l, &alpha, k).expect("completed pairing lies in N*")
}

/// The residue `(nu^-1 d y + x) / 2ab mod d` attached to a candidate `h~`,
/// with `nu^-1 = +-m(a,b) mu^-1` read modulo `2ab` for the given series.
///
/// Fails with `InconsistentCandidate` when `2ab` does not divide the
/// numerator, which happens exactly when `v` is not compatible with `nu`.
pub fn kappa_image(l: &XLattice, v: &LatticeVector, series: Series) -> Result<DiscriminantElement> {
    let shape = l.shape();
    let two_ab = shape.two_ab();
    if l.norm(v)? != two_ab {
        return Err(Error::InvalidVector(format!("{v} does not have square 2ab = {two_ab}")));
    }
    let nu = nu_of_series(l, series);
    let nu_inv = mod_inverse(&nu, &two_ab).expect("nu is a unit mod 2ab");
    let num = &nu_inv * l.d() * &v.y + &v.x;
    if !divides(&two_ab, &num) {
        return Err(Error::InconsistentCandidate(format!(
            "{v}: 2ab = {two_ab} does not divide {num} for the {series}-series"
        )));
    }
    Ok(DiscriminantElement::new(&(num / two_ab), l.d()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    fn l2217() -> XLattice {
        XLattice::new(2, 2, 17, 1).unwrap()
    }

    #[test]
    fn u_star_examples() {
        assert_eq!(u_star(&l2217()), big(1));
        assert_eq!(u_star(&XLattice::new(2, 2, 25, 3).unwrap()), big(3));
        assert_eq!(u_star(&XLattice::new(1, 1, 9, 1).unwrap()), big(1));
    }

    #[test]
    fn nu_examples() {
        let l = XLattice::new(1, 1, 5, 1).unwrap();
        assert_eq!(nu_of_series(&l, Series::A), big(1));
        assert_eq!(nu_of_series(&l, Series::B), big(1));
        // (a, b) = (2, 3), mu = 1: 2rs = 12, d = 1 + 24 = 25
        let l = XLattice::new(2, 3, 25, 1).unwrap();
        assert_eq!(nu_of_series(&l, Series::A), big(7));
        assert_eq!(nu_of_series(&l, Series::B), big(5));
    }

    #[test]
    fn kappa_examples() {
        let l = l2217();
        let v = LatticeVector::new(21, 5);
        let k = kappa_image(&l, &v, Series::A).unwrap();
        assert_eq!(k.residue, big(2));
        assert_eq!(k.condition_ii_signs(2), vec![Sign::Plus]);
        let k = kappa_image(&l, &-v, Series::A).unwrap();
        assert_eq!(k.condition_ii_signs(2), vec![Sign::Minus]);
        // x = 2abc (mod d) is the same test after clearing 2ab
        assert!(congruent(&big(21), &big(4), &big(17)));
    }

    #[test]
    fn kappa_h_is_onto() {
        let l = l2217();
        let d = 17u64;
        let mut seen = vec![false; d as usize];
        for k in 0..2 * d {
            let e = kappa_h(&l, &big(k));
            assert_eq!(e.is_zero(), k % d == 0);
            seen[usize::try_from(&e.residue).unwrap()] = true;
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn lattice_vectors_are_zero_classes() {
        let l = XLattice::new(2, 3, 49, 5).unwrap();
        for v in [l.h(), l.delta(), l.glue()] {
            // pairings of a lattice vector with H and delta
            let alpha = l.inner_product(&v, &l.h()).unwrap();
            let beta = l.inner_product(&v, &l.delta()).unwrap();
            assert!(dual_class(&l, &alpha, &beta).unwrap().is_zero());
        }
        assert!(dual_class(&l, &big(1), &big(0)).is_err());
    }
}
