//! Enumeration of tropical disk families and evaluation of the pointed
//! potential.
//!
//! Starting from one seed family per fan ray (a single unbounded edge,
//! free to sit anywhere in the plane), the enumeration closes the family
//! set under three productions:
//!
//! 1. pin a Maslov-index-2 family at a marked point inside its locus,
//!    producing a Maslov-index-0 family whose stop sweeps a ray (a wall);
//! 2. join two Maslov-index-0 families where their rays cross, producing a
//!    scattered Maslov-index-0 family;
//! 3. join a Maslov-index-0 family with a Maslov-index-2 family over the
//!    part of the ray inside the region, producing a Maslov-index-2 family
//!    whose stop sweeps a two-dimensional region.
//!
//! Every join with vertex determinant zero is discarded, as is every join
//! whose Maslov index leaves {0, 2}; each Maslov-index-0 family consumes at
//! least one fresh mark, so the closure is finite. The potential at a
//! generic stop is then the sum of the monomials of the Maslov-index-2
//! families whose region contains the stop.

mod oracle;

pub use oracle::brute_force_potential;

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{det2, Cell, Point, Scalar};
use crate::ringalg::{Fan, PotentialElement};
use crate::trees::{make_join, stats, TreeStats, TreeType};

/// A family of tropical disks of one combinatorial type: the tree, its
/// derived statistics, and the locus swept by the stop.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DiskFamily {
    pub tree: TreeType,
    pub stats: TreeStats,
    pub locus: Cell,
}

/// The closed set of disk families for a fan and a tuple of marked points.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FamilySet {
    fan: Fan,
    points: Vec<Point>,
    families: Vec<DiskFamily>,
}

impl FamilySet {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn families(&self) -> &[DiskFamily] {
        &self.families
    }

    /// Maslov-index-0 families: the walls.
    pub fn mi0(&self) -> impl Iterator<Item = &DiskFamily> {
        self.families.iter().filter(|f| f.stats.maslov == 0)
    }

    /// Maslov-index-2 families: the chambers' contributors.
    pub fn mi2(&self) -> impl Iterator<Item = &DiskFamily> {
        self.families.iter().filter(|f| f.stats.maslov == 2)
    }
}

/// A candidate production of one enumeration generation.
enum Candidate {
    /// Pin family `fam` at marked point with label `mark`.
    Mark { fam: usize, mark: usize },
    /// Join families `a` and `b` (unordered).
    Pair { a: usize, b: usize },
}

/// Enumerates the full family set, serially.
pub fn enumerate_families(fan: &Fan, points: &[Point]) -> Result<FamilySet> {
    enumerate(fan, points, false)
}

/// Enumerates the full family set, evaluating each generation's candidate
/// joins in parallel. The result is identical to the serial version.
pub fn enumerate_families_parallel(fan: &Fan, points: &[Point]) -> Result<FamilySet> {
    enumerate(fan, points, true)
}

fn enumerate(fan: &Fan, points: &[Point], parallel: bool) -> Result<FamilySet> {
    for (i, p) in points.iter().enumerate() {
        for q in &points[..i] {
            if p == q {
                return Err(Error::InvalidInput(format!(
                    "marked points must be pairwise distinct, got {p} twice"
                )));
            }
        }
    }
    if points.len() > 64 {
        return Err(Error::InvalidInput(
            "at most 64 marked points are supported".into(),
        ));
    }

    // Seeds: one unbounded-edge family per ray, stop anywhere.
    let mut families: Vec<DiskFamily> = (0..fan.len())
        .map(|rho| {
            let tree = TreeType::Leaf(rho);
            DiskFamily {
                stats: stats(fan, &tree),
                tree,
                locus: Cell::full_plane(),
            }
        })
        .collect();
    families.sort_by_key(|f| f.tree.encode());
    let mut seen: BTreeSet<String> =
        families.iter().map(|f| f.tree.encode()).collect();

    let mut gen_start = 0;
    while gen_start < families.len() {
        let mut cands: Vec<Candidate> = vec![];
        for i in gen_start..families.len() {
            for mark in 1..=points.len() {
                cands.push(Candidate::Mark { fam: i, mark });
            }
            for j in 0..i {
                cands.push(Candidate::Pair { a: j, b: i });
            }
        }
        let eval = |c: &Candidate| -> Result<Option<DiskFamily>> {
            match *c {
                Candidate::Mark { fam, mark } => {
                    try_pin(fan, points, &families[fam], mark)
                }
                Candidate::Pair { a, b } => {
                    try_join(fan, &families[a], &families[b])
                }
            }
        };
        let results: Vec<Result<Option<DiskFamily>>> = if parallel {
            cands.par_iter().map(eval).collect()
        } else {
            cands.iter().map(eval).collect()
        };
        let mut fresh: Vec<DiskFamily> = vec![];
        for r in results {
            if let Some(f) = r? {
                if seen.insert(f.tree.encode()) {
                    fresh.push(f);
                }
            }
        }
        fresh.sort_by_key(|f| f.tree.encode());
        gen_start = families.len();
        families.extend(fresh);
    }

    let fs = FamilySet {
        fan: fan.clone(),
        points: points.to_vec(),
        families,
    };
    check_marks_off_walls(&fs)?;
    debug_assert!(fs
        .families()
        .iter()
        .all(|f| i64::from(f.locus.dim()) == f.stats.maslov / 2 + 1));
    Ok(fs)
}

/// Production 1: pin a Maslov-index-2 family at a marked point.
fn try_pin(
    fan: &Fan,
    points: &[Point],
    f: &DiskFamily,
    mark: usize,
) -> Result<Option<DiskFamily>> {
    if f.stats.maslov != 2 || f.stats.marks.contains(mark) {
        return Ok(None);
    }
    let p = &points[mark - 1];
    if !f.locus.contains(p, false) {
        return Ok(None);
    }
    if !f.locus.contains(p, true) {
        return Err(Error::NonGenericConfiguration(format!(
            "marked point {p} lies on the boundary of the locus of {}",
            f.tree
        )));
    }
    let tree = make_join(f.tree.clone(), TreeType::Mark(mark))?;
    let stats = stats(fan, &tree);
    let locus = Cell::point(p).sweep(&stats.mbar)?;
    Ok(Some(DiskFamily { tree, stats, locus }))
}

/// Productions 2 and 3: join two families along their loci.
fn try_join(fan: &Fan, f: &DiskFamily, g: &DiskFamily) -> Result<Option<DiskFamily>> {
    match (f.stats.maslov, g.stats.maslov) {
        (0, 0) => join_walls(fan, f, g),
        (0, 2) => join_wall_region(fan, f, g),
        (2, 0) => join_wall_region(fan, g, f),
        _ => Ok(None), // Maslov index 4 or higher contributes nothing
    }
}

/// Common preconditions of both join productions; returns the joined tree's
/// statistics when the join survives.
fn join_precheck(
    fan: &Fan,
    f: &DiskFamily,
    g: &DiskFamily,
) -> Result<Option<(TreeType, TreeStats)>> {
    if f.stats.marks.intersects(&g.stats.marks) {
        return Ok(None);
    }
    let vertex_det = det2(&f.stats.mbar, &g.stats.mbar);
    if vertex_det.is_zero() {
        // Zero vertex multiplicity: the joined family would not count.
        // This also covers parallel loci, so no overlap analysis is needed.
        return Ok(None);
    }
    let tree = make_join(f.tree.clone(), g.tree.clone())?;
    let stats = stats(fan, &tree);
    debug_assert!(stats.mult >= BigInt::from(1));
    Ok(Some((tree, stats)))
}

/// Production 2: two walls crossing at a point scatter a new wall.
fn join_walls(fan: &Fan, f: &DiskFamily, g: &DiskFamily) -> Result<Option<DiskFamily>> {
    let Some((tree, stats)) = join_precheck(fan, f, g)? else {
        return Ok(None);
    };
    let Some((cell, transversal)) = f.locus.intersect(&g.locus) else {
        return Ok(None);
    };
    debug_assert!(transversal, "non-parallel rays meet transversally");
    debug_assert_eq!(cell.dim(), 0);
    let x = cell.a_point().expect("point cell has a point");
    let locus = Cell::point(&x).sweep(&stats.mbar)?;
    Ok(Some(DiskFamily { tree, stats, locus }))
}

/// Production 3: a wall passing through a region sweeps a new region from
/// the overlapping stretch.
fn join_wall_region(
    fan: &Fan,
    wall: &DiskFamily,
    region: &DiskFamily,
) -> Result<Option<DiskFamily>> {
    let Some((tree, stats)) = join_precheck(fan, wall, region)? else {
        return Ok(None);
    };
    let Some((cell, _)) = wall.locus.intersect(&region.locus) else {
        return Ok(None);
    };
    if cell.dim() == 0 {
        // The wall only grazes a corner of the region: the overlap sweeps
        // nothing of full dimension, so the family does not arise.
        return Ok(None);
    }
    let locus = cell.sweep(&stats.mbar)?;
    Ok(Some(DiskFamily { tree, stats, locus }))
}

/// A marked point on a wall that does not start at it is a non-generic
/// configuration: the counts become ill-defined there, so the whole
/// enumeration is rejected rather than silently perturbed.
fn check_marks_off_walls(fs: &FamilySet) -> Result<()> {
    for w in fs.mi0() {
        let base = w
            .locus
            .endpoints()
            .map(|(b, _)| b)
            .expect("walls are rays");
        for (j, p) in fs.points.iter().enumerate() {
            if !w.locus.contains(p, false) {
                continue;
            }
            let own_base = *p == base && w.stats.marks.contains(j + 1);
            if !own_base {
                return Err(Error::NonGenericConfiguration(format!(
                    "marked point {p} lies on the wall of {} which does not \
                     emanate from it",
                    w.tree
                )));
            }
        }
    }
    Ok(())
}

/// The pointed potential at a generic stop `q`: the sum of
/// `mult * z^m * u_marks` over Maslov-index-2 families whose locus contains
/// `q` in its interior. The seed families contribute the undeformed
/// potential.
pub fn potential_at(fs: &FamilySet, q: &Point) -> Result<PotentialElement> {
    for w in fs.mi0() {
        if w.locus.contains(q, false) {
            return Err(Error::NonGenericQuery(format!(
                "stop {q} lies on the wall of {}",
                w.tree
            )));
        }
    }
    let mut out = PotentialElement::zero();
    for f in fs.mi2() {
        if !f.locus.contains(q, false) {
            continue;
        }
        if !f.locus.contains(q, true) {
            return Err(Error::NonGenericQuery(format!(
                "stop {q} lies on the locus boundary of {}",
                f.tree
            )));
        }
        out.add_term(
            f.stats.m.clone(),
            f.stats.marks,
            Scalar::from_bigint(f.stats.mult.clone()),
        );
    }
    Ok(out)
}

/// Nudges each point by a small random rational offset, to escape a
/// non-generic configuration. Offsets have numerators below a thousand and
/// denominators of the form `10^6 * prime`, so they cannot cancel against
/// the simple rationals of typical inputs.
pub fn perturb(points: &[Point], seed: u64) -> Vec<Point> {
    const PRIMES: [i64; 8] = [101, 103, 107, 109, 113, 127, 131, 137];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points
        .iter()
        .map(|p| {
            let mut coord = |c: &Scalar| {
                let num = rng.gen_range(-999..=999i64);
                let den = 1_000_000 * PRIMES[rng.gen_range(0..PRIMES.len())];
                c + &Scalar::ratio(num, den)
            };
            let x = coord(&p.x);
            let y = coord(&p.y);
            Point::new(x, y)
        })
        .collect()
}
