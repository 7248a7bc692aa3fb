//! Two quantum dots coupled through a Majorana pair or through regular
//! fermions: Fock-space models, closed and Lindblad dynamics, two-dot
//! correlation measures and an occupation-readout tomography scheme.
//!
//! Energies are in units of the dot coupling λ and times in units of 1/λ.

pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod models;
pub mod optimize;
pub mod scenario;
pub mod tomography;

pub use error::{Error, Result};
