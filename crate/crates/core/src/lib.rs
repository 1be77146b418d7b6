//! Qu8it (d = 8) and qubit encodings of 1+1D SU(3) lattice QCD with
//! Kogut-Susskind staggered fermions.

pub mod error;
pub mod evolution;
pub mod fock;
pub mod givens;
pub mod identities;
pub mod io;
pub mod krylov;
pub mod lattice;
pub mod linalg;
pub mod qu8it;
pub mod resources;
pub mod sparse;
pub mod spectrum;
pub mod statespec;
pub mod su3;

pub use error::{Error, Result};
