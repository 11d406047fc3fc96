//! Compiles every snippet of the guide in `book/` as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/spans.md")]
pub mod spans {}

#[doc = include_str!("../../../book/src/doctrines.md")]
pub mod doctrines {}

#[doc = include_str!("../../../book/src/doubling.md")]
pub mod doubling {}

#[doc = include_str!("../../../book/src/extraction.md")]
pub mod extraction {}

#[doc = include_str!("../../../book/src/wiring.md")]
pub mod wiring {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
