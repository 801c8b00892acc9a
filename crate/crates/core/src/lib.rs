pub mod bidict;
mod binio;
pub mod corpus;
pub mod error;
pub mod lsi;
pub mod retrieval;
pub mod sparse;
pub mod synthetic;
pub mod textprep;
pub mod vsm;

pub use error::{Error, Result};
