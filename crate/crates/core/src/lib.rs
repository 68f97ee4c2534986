//! Generation, solving and equivalence testing for Swap Planarity puzzles.
//!
//! An instance is a graph drawn on a fixed set of grid points; a move swaps
//! the points of the two endpoints of one edge, and the goal is a drawing
//! with no crossing edges.

pub mod bench;
pub mod equiv;
pub mod generate;
pub mod geom;
pub mod pointgen;
pub mod puzzle;
pub mod solve;
pub mod triangulate;
