//! Textile systems and rank-2 graphs over finite directed graphs.
//!
//! The crate covers:
//!
//! * [`graph`]: directed graphs, homomorphisms, insplitting, isomorphism search;
//! * [`textile`]: textile systems, path lifting, inversion, textile insplitting;
//! * [`twograph`]: 2-colored graphs with commuting squares, conversion to and
//!   from LR textile systems, the pairing condition and 2-graph insplitting;
//! * [`shift`]: admissible rectangular blocks, row lifting, sliding block
//!   codes and finite conjugacy checks;
//! * [`moves`]: the relations between skeleton, tile and base partitions and
//!   the insplit / invert pipeline;
//! * [`format`]: the line-oriented text format used by fixtures and the CLI;
//! * [`random`]: seeded generators for small 2-graphs and partitions.
//!
//! The guide in `book/` walks through each of these with runnable snippets.

pub mod format;
pub mod graph;
pub mod moves;
pub mod random;
pub mod setpart;
pub mod shift;
pub mod textile;
pub mod twograph;

pub use graph::{DirectedGraph, GraphHom, InsplitPartition};
pub use shift::RectBlock;
pub use textile::{LiftingReport, TextileSystem};
pub use twograph::TwoGraph;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/textiles.md")]
    mod textiles {}
    #[doc = include_str!("../../../book/src/twographs.md")]
    mod twographs {}
    #[doc = include_str!("../../../book/src/blocks.md")]
    mod blocks {}
    #[doc = include_str!("../../../book/src/moves.md")]
    mod moves {}
    #[doc = include_str!("../../../book/src/format.md")]
    mod format {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
