//! Pattern-based summarization, exploration and visualization data for RDF
//! knowledge graphs annotated with OPLa.
//!
//! The crate is organised by level:
//!
//! - [`graph`]: RDF terms, parsing, indexed storage and basic graph patterns
//! - [`opla`]: pattern registry and TBox pattern implementations
//! - [`occurrence`]: template-driven occurrence detection and instance annotations
//! - [`summary`]: the pattern/key-concept summary graph
//! - [`explore`]: per-pattern tables, semantic filters, open/closed world
//! - [`frames`]: visual frame data and per-resource mosaics
//! - [`dataset`]: configuration and sealed, shareable datasets
//! - [`fixture`]: deterministic synthetic heritage dataset with ground truth

pub mod dataset;
pub mod explore;
pub mod fixture;
pub mod frames;
pub mod graph;
pub mod heritage;
pub mod occurrence;
pub mod opla;
pub mod summary;
pub mod vocab;
