pub mod analytics;
pub mod error;
pub mod boundary;
pub mod cli;
pub mod lfunc;
pub mod meanper;
pub mod mellin;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use specfun::C64;
