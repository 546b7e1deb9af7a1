//! hamcheck — exact symbolic verification of Hamiltonian structures for
//! quasilinear first-order systems.
//!
//! The engine decides, by exact computer algebra over rational functions,
//! whether a candidate non-homogeneous hydrodynamic operator
//! `g^{ij} d_x + b^{ij}_k u^k_x + omega^{ij}` (first order plus ultralocal
//! part, possibly with degenerate leading coefficient) is Hamiltonian, and
//! whether it is compatible with a given evolutionary system
//! `u^i_t = V^i_j(u) u^j_x + W^i(u)`. Two independent routes are provided:
//! tensorial condition sets, and a first-principles expansion of the
//! linearized equations on the cotangent covering that serves as the oracle
//! for the former.

pub mod symbolic;

pub mod jet;

pub mod operators;

pub mod geometry;

pub mod compat;

pub mod covering;

pub mod corpus;

pub mod report;

pub mod cli;
