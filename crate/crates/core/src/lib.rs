pub mod bending;
pub mod cohomology;
pub mod config;
pub mod error;
pub mod isometry;
pub mod json;
pub mod linalg;
pub mod qcore;
pub mod sample;
pub mod surfrep;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
