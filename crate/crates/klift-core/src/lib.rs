//! Exact computational commutative algebra over graded polynomial quotient
//! rings, with a layer of differential graded (DG) machinery on top.
//!
//! The crate is organised bottom up:
//!
//! * [`scalar`], [`mono`], [`poly`] — arithmetic in `F_p` and `Q`, weighted
//!   monomials, sparse homogeneous polynomials.
//! * [`ring`], [`gb`] — graded polynomial rings, ideals, quotient rings,
//!   Groebner bases for submodules of free modules with representation
//!   tracking and syzygies.
//! * [`module`], [`complex`], [`resolution`] — finitely presented graded
//!   modules (cokernel presentations), maps, kernels/images/pushouts,
//!   graded pieces, chain complexes, minimal free resolutions.
//! * [`homtools`], [`ext`] — Hom modules, split injection tests, torsion
//!   and quotient helpers, Ext/Tor over the discrete rings, hyper Ext of
//!   bounded below complexes.
//! * [`koszul`], [`dg`], [`formulas`] — Koszul complexes and DG algebras,
//!   DG modules, semifree resolutions, DG Ext/Tor, closed form checks for
//!   derived tensor products over hypersurface quotients.
//! * [`lifting`] — the step by step lifting engine: cover presentations,
//!   the connecting map `alpha0`, single lifting steps with certified
//!   split tests, chains of lifts, window reconstruction of the limit,
//!   multi element lifting and the regularity checker.
//!
//! Everything is exact: no floating point anywhere. All computations are
//! deterministic; where a search is involved (isomorphism guessing) the
//! candidate stream comes from a seeded [`rng::SplitMix64`].
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod complex;
pub mod dg;
pub mod error;
pub mod ext;
pub mod formulas;
pub mod gb;
pub mod homtools;
pub mod koszul;
pub mod lifting;
pub mod module;
pub mod mono;
pub mod poly;
pub mod resolution;
pub mod ring;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
