//! Exact symbolic engine for Gauss decompositions of quantum matrix groups.
//!
//! Elements of tensor products of quantum enveloping algebras are kept in a
//! PBW-style normal form with exact Laurent polynomial coefficients. On top
//! of that sit the Jimbo images of the Gauss factors of `SL_q(n)`, standard
//! R-matrices, matrix representations, the classical limit and a verifier
//! for the RTT, Gauss and quantum determinant relations.

pub mod cartan;
pub mod error;
pub mod jimbo;
pub mod matrixrep;
pub mod opmatrix;
pub mod ring;
pub mod rmatrix;
pub mod slotalg;
pub mod verify;

pub use error::{Error, Result};
pub use opmatrix::{NcEntry, OpMatrix, Shape};
pub use ring::{LaurentPoly, ScaledPoly, VarSet};
pub use rmatrix::{RMatrix, ScalarMatrix};
pub use slotalg::{AlgebraElement, Signature};
