#![allow(clippy::needless_range_loop)]

pub mod characters;
pub mod classify;
pub mod covering;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod modular;
pub mod surface;

pub use error::{Error, Result};
