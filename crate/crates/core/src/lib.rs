//! Colorings of complete r-uniform hypergraphs that avoid monochromatic
//! Berge copies of a target graph.
//!
//! * [`coloring`], [`combinatorics`], [`target`], [`graph`], [`witness`]: the
//!   data model, colex ranking, the `BRC1` file format and certificates.
//! * [`geometry`], [`affine`]: affine spaces over prime fields and the
//!   parallel-class colorings built from them.
//! * [`layered`]: layered color-set assignments and their checker.
//! * [`reduction`]: dropping one color and one level of uniformity.
//! * [`detection`]: light/heavy pair analysis and exact Berge detection.
//! * [`search`]: exhaustive and local search for avoiding colorings and tiny
//!   Ramsey numbers.
//!
//! With the default `parallel` feature, core enumeration and exhaustive search
//! split their top-level branches across the rayon pool; results are
//! identical to the sequential path.

pub mod affine;
pub mod coloring;
pub mod combinatorics;
pub mod detection;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod layered;
pub mod matching;
pub mod parallel;
pub mod reduction;
pub mod search;
pub mod target;
pub mod witness;

pub use coloring::{Color, ColoredHypergraph};
pub use error::{Error, Result};
pub use parallel::{Parallelism, Search};
pub use target::{make_target, TargetGraph};
pub use witness::BergeWitness;
