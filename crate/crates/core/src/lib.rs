#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod exact;
pub mod roots;

pub use error::{Error, Result};
pub mod certify;
pub mod cone;
pub mod parabolic;
pub mod serial;
pub mod sim;
