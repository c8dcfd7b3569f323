pub mod binary;
pub mod cert;
pub mod classify;
pub mod error;
pub mod examples;
pub mod fieldpoly;
pub mod oracle;
pub mod veronese;

pub use error::{Error, Result};
