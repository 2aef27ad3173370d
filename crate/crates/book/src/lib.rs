// mdbook cannot run Rust snippets against a workspace crate, so each chapter
// is pulled in here as a module doc and `cargo test --doc` runs them.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/grids.md")]
pub mod grids {}
#[doc = include_str!("../../../book/src/delta.md")]
pub mod delta {}
#[doc = include_str!("../../../book/src/evolution.md")]
pub mod evolution {}
#[doc = include_str!("../../../book/src/theory.md")]
pub mod theory {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
