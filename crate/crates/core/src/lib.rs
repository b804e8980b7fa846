pub mod algebra;
pub mod constructions;
pub mod error;
pub mod fmodules;
pub mod groebner;
pub mod homology;
pub mod resolutions;
pub mod rings;

pub use error::{Error, Result};
