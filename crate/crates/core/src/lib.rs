pub mod area;
pub mod bs;
pub mod cancel;
pub mod diagram;
pub mod error;
pub mod family;
pub mod hnn;
pub mod tietze;
pub mod word;

pub use error::{Error, Result};
