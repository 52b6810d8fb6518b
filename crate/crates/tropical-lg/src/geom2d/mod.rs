//! Exact rational planar geometry: scalars, lattice vectors, and convex
//! polyhedral cells.

mod cell;
mod num;

pub use cell::{segment_crossings, Cell};
pub use num::{det2, det2_mixed, primitive, IntVec, Point, Scalar};
