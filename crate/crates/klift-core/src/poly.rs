//! Sparse polynomials: coefficient/monomial term lists.
//!
//! A [`Poly`] owns its terms sorted strictly descending in the ambient
//! ring's term order with no zero coefficients; every constructor in
//! [`crate::ring`] maintains that invariant. `Poly` itself is pure data,
//! all arithmetic lives on [`crate::ring::Ring`] (it needs the order,
//! weights and field).

use alloc::vec::Vec;

use crate::mono::Mono;
use crate::scalar::Scalar;

/// A single `coefficient * monomial` term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    /// Nonzero coefficient.
    pub coef: Scalar,
    /// Monomial part.
    pub mono: Mono,
}

/// Sparse polynomial. Terms are sorted strictly descending in the ring
/// order; the zero polynomial has an empty term list.
///
/// The derived `Ord` is structural (not the ring order); it exists so
/// that sets of polynomials can be sorted canonically for deterministic
/// output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    /// Term list, descending, no zero coefficients, no duplicate monomials.
    pub terms: Vec<Term>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term (greatest in the ring order), if any.
    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when there are no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial is a nonzero constant.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mono.is_one()
    }
}
