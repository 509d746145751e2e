//! Computational non-abelian group cohomology for finite groups.

pub mod cohomology;
pub mod error;
pub mod etale;
pub mod exactness;
pub mod field;
pub mod galois_linear;
pub mod group;
pub mod io;
pub mod limits;
pub mod quad;
pub mod smith;
pub mod twisted;
pub mod verify;

pub use error::{Error, Result};
