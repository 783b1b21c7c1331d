//! Discrete Dirac-Kähler and Hestenes calculus on a finite periodic 4D lattice.
//!
//! A field is a discrete inhomogeneous form: sixteen complex coefficients per
//! site, one for each basis element of the local Clifford algebra with metric
//! `diag(1, -1, -1, -1)`. On top of that the crate provides
//!
//! * [`lattice`]: periodic geometry and forward differences,
//! * [`algebra`]: blades, product table, constant forms and projectors,
//! * [`fields`]: the [`FormField`] container and generators,
//! * [`calculus`]: `d^c`, `δ^c`, the Dirac-Kähler and Hestenes operators,
//! * [`spectral`]: momentum-space symbols, exact plane-wave solutions and
//!   propagator solves,
//! * [`transfer`]: projector decompositions and the map from Dirac-Kähler
//!   solutions to Hestenes solutions.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod calculus;
pub mod error;
pub mod fields;
pub mod lattice;
pub mod report;
pub mod spectral;
pub mod transfer;

pub use algebra::{Blade, CliffordTable, Multivector, Projector};
pub use calculus::{Equation, EquationParams};
pub use error::Error;
pub use fields::{FormField, SiteVector};
pub use lattice::{LatticeDims, MultiIndex, ScalarField};
pub use num_complex::Complex64;
