//! Exact and numerical verification of affine-Weyl-symmetric Painleve-type
//! systems in dimension three.
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: exact rationals, sparse polynomials, rational functions.
//! * [`systems`]: transcribed vector fields, Hamiltonians, charts, generators
//!   and invariant divisors, keyed by [`systems::WeylType`].
//! * [`birational`]: pointwise and symbolic calculus of birational maps.
//! * [`verify`]: one executable check per structural claim.
//! * [`numerics`]: adaptive Runge-Kutta integration and trajectory checks.
//! * [`cli`]: the `pwl` command-line front end.

pub mod algebra;
pub mod birational;
pub mod cli;
pub mod numerics;
pub mod systems;
pub mod verify;
