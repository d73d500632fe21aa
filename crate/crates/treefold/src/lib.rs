//! Combinatorics of compact polyhedra in products of trees.
//!
//! The crate has four layers:
//!
//! - [`poset`]: finite graded posets presenting simplicial and cubical
//!   complexes, with the operator calculus (links, stars, joins, prejoins,
//!   products, cones and the two subdivisions) and isomorphism testing.
//! - [`collapse`]: elementary collapses, free-face detection, collapse
//!   search with certificates, cores, and coning.
//! - [`coloring`] and [`embedding`]: properly colored complexes, the
//!   colored-sphere filling oracle, and the embedding constructions that
//!   place collapsible complexes inside products of trees so that the
//!   product collapses onto the image.
//! - [`cohomology`], [`telescope`], [`tower`]: integer simplicial
//!   cohomology via Smith normal form, the telescope complexes built from
//!   degree-two circle covers, and Mittag-Leffler / derived-limit verdicts
//!   for eventually periodic towers of finitely generated abelian groups.
//!
//! Runnable walkthroughs for each capability live in `examples/`; the
//! `treefold` binary is a thin command-line front end over [`cli`].

pub mod cohomology;
pub mod collapse;
pub mod error;
pub mod id;
pub mod matrix;
pub mod poset;
pub mod telescope;
pub mod tower;
pub mod tree;

pub use error::{Error, Result};

/// Entry point used by the `treefold` binary.
pub fn run_cli() -> i32 {
    // Wired up by the `cli` module; placeholder until it lands.
    1
}
