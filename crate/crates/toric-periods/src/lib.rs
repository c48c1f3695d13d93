pub mod characters;
pub mod cli;
pub mod dichotomy;
pub mod error;
pub mod etale;
pub mod global;
pub mod padic;

pub use error::{Error, Result};
