//! Finite models of posets, simplicial sets, subdivisions, and n-extensions of finite abelian groups.

pub mod coend;
pub mod error;
pub mod extcat;
pub mod extri;
pub mod fex;
pub mod homology;
pub mod modcat;
pub mod poset;
pub mod simplicial;
pub mod snf;
pub mod subdivision;
pub mod verify;

pub use error::{Error, Result};
