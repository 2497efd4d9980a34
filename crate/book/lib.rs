//! The guide's code blocks, compiled and run by `cargo test --doc`.
//! One module per chapter so a failure points at its file.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/roots.md")]
pub mod roots {}
#[doc = include_str!("src/weight-bound.md")]
pub mod weight_bound {}
#[doc = include_str!("src/parabolic.md")]
pub mod parabolic {}
#[doc = include_str!("src/divergence.md")]
pub mod divergence {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
