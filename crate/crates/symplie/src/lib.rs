//! Exact computations on finite-dimensional symplectic Lie algebras over `Q`:
//! reduction by isotropic ideals, central oxidation, Lagrangian extensions of flat
//! Lie algebras, invariant Lagrangian subspaces for nilpotent endomorphism algebras,
//! and a catalogue of worked examples with certificates.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod endoalg;
pub mod exactla;
pub mod lagext;
pub mod liealg;
pub mod oxidation;
pub mod reduction;
pub mod search;
pub mod symplectic;

pub use exactla::{Matrix, Subspace, Vector, Q};
pub use liealg::{Cochain, Connection, LieAlgebra, Representation};
pub use symplectic::SymplecticLieAlgebra;
