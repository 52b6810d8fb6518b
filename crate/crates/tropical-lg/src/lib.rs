//! Exact enumeration of tropical disks on complete toric surfaces.
//!
//! The crate enumerates families of tropical disks with marked points on a
//! complete toric surface, evaluates the resulting pointed potential over
//! a nilpotent coefficient ring, builds the associated scattering diagram,
//! and verifies its consistency exactly — every coordinate is a rational
//! number and every identity is checked on the nose.
//!
//! ```
//! use tropical_lg::families::{enumerate_families, potential_at};
//! use tropical_lg::geom2d::Point;
//! use tropical_lg::ringalg::{Fan, PotentialElement};
//!
//! // One marked point at the origin of the projective plane.
//! let fan = Fan::projective_plane();
//! let points = [Point::from_ints(0, 0)];
//! let families = enumerate_families(&fan, &points).unwrap();
//!
//! // In a generic chamber the potential is the three toric terms plus
//! // one correction recording the disk through the marked point.
//! let w = potential_at(&families, &Point::from_ints(-2, 1)).unwrap();
//! assert_eq!(w.to_string(), "z2 + z1 + z0 + z0*z2*u1");
//! # let _ = PotentialElement::hori_vafa(&fan);
//! ```

pub mod cli;
pub mod error;
pub mod families;
pub mod geom2d;
pub mod ringalg;
pub mod scattering;
pub mod svg;
pub mod trees;

pub use error::{Error, Result};

/// Entry point for the `tropical-lg` binary; returns the process exit code.
pub fn run() -> i32 {
    cli::run()
}
