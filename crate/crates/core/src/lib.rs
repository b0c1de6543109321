//! Template-based natural-language summaries for Java classes and methods.
//!
//! The pipeline has three steps: [`frontend`] parses sources into a
//! [`model::CodeModel`], [`xml`] stores that model, and [`summarize`] plus
//! [`emit`] turn it into one paragraph per class and per method.

pub mod cli;
pub mod diagnostic;
pub mod emit;
pub mod frontend;
pub mod model;
pub mod summarize;
pub mod xml;
