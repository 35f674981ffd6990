//! Command line interface, canonical JSON and the on-disk cache for
//! [`cp1_core`].

pub mod cache;
pub mod cli;
pub mod error;
pub mod json;
pub mod output;
pub mod shared;

pub use error::{GwError, Result};
pub use shared::SharedEngine;
