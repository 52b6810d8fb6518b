//! Scattering diagrams, path-ordered products, and the consistency and
//! wall-crossing checks.
//!
//! Every Maslov-index-0 family contributes a wall: its stop locus as
//! support, with the automorphism `exp(k_div * mult * z^m d_n u_I)` where
//! `n` is the clockwise primitive normal of the propagation direction.
//! Crossing a wall along a path applies the automorphism with a sign given
//! by the orientation of the crossing; consistency says the composite
//! around any joint is the identity, and the wall-crossing theorem says the
//! potential at one generic stop transports exactly to the potential at
//! another.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{enumerate_families, potential_at, FamilySet};
use crate::geom2d::{det2, det2_mixed, Cell, IntVec, Point, Scalar};
use crate::ringalg::{
    angle_lt, clockwise_normal, exp_apply, Fan, LieElement, MarkSet, PWeight,
    PotentialElement,
};
use crate::trees::TreeType;

/// A wall: an oriented ray carrying a single-term wall automorphism.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Wall {
    pub support: Cell,
    pub m: PWeight,
    pub n: IntVec,
    pub log_theta: LieElement,
    pub source_tree: TreeType,
    pub marks: MarkSet,
}

/// A transversal crossing point of two or more walls, away from the marked
/// points.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Joint {
    pub point: Point,
    /// Indices into `Diagram::walls` of every wall through the point.
    pub walls: Vec<usize>,
}

/// Which way the wall normal points relative to the propagation direction.
/// `Clockwise` is the correct convention; `Counterclockwise` flips every
/// normal while leaving the crossing signs alone and exists purely as a
/// negative-control hook for the verification suite.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum NormalConvention {
    #[default]
    Clockwise,
    Counterclockwise,
}

/// The scattering diagram of a family set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Diagram {
    fan: Fan,
    walls: Vec<Wall>,
    joints: Vec<Joint>,
    marked_points: Vec<Point>,
}

impl Diagram {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn marked_points(&self) -> &[Point] {
        &self.marked_points
    }

    /// Rebuilds the diagram without wall `k` (joints recomputed). This is a
    /// test hook: the resulting diagram is inconsistent whenever the
    /// dropped wall was scattered from a joint.
    pub fn drop_wall(&self, k: usize) -> Result<Diagram> {
        if k >= self.walls.len() {
            return Err(Error::InvalidInput(format!(
                "wall index {k} out of range (diagram has {})",
                self.walls.len()
            )));
        }
        let mut walls = self.walls.clone();
        walls.remove(k);
        let joints = compute_joints(&walls, &self.marked_points);
        Ok(Diagram {
            fan: self.fan.clone(),
            walls,
            joints,
            marked_points: self.marked_points.clone(),
        })
    }
}

/// Builds the scattering diagram of a complete family set.
///
/// ```
/// use tropical_lg::families::enumerate_families;
/// use tropical_lg::geom2d::Point;
/// use tropical_lg::ringalg::Fan;
/// use tropical_lg::scattering::{build_diagram, check_joint_consistency};
///
/// let fan = Fan::projective_plane();
/// let points = [Point::from_ints(0, 0), Point::from_ints(-1, 2)];
/// let fs = enumerate_families(&fan, &points).unwrap();
/// let d = build_diagram(&fs);
/// // Two initial walls cross and scatter; the diagram is consistent at
/// // every joint.
/// assert!(!d.joints().is_empty());
/// assert!((0..d.joints().len()).all(|j| check_joint_consistency(&d, j)));
/// ```
pub fn build_diagram(fs: &FamilySet) -> Diagram {
    build_diagram_with(fs, NormalConvention::Clockwise)
}

/// Builds the diagram with an explicit normal convention (see
/// [`NormalConvention`]).
pub fn build_diagram_with(fs: &FamilySet, convention: NormalConvention) -> Diagram {
    let fan = fs.fan();
    let walls: Vec<Wall> = fs
        .mi0()
        .map(|f| {
            let t = f.locus.tangent().expect("walls are one-dimensional");
            let mut n = clockwise_normal(t).expect("wall tangent is nonzero");
            if convention == NormalConvention::Counterclockwise {
                n = -&n;
            }
            let coeff =
                Scalar::from_bigint(&f.stats.mult * num::BigInt::from(f.stats.k_div));
            let log_theta = LieElement::term(
                fan,
                coeff,
                f.stats.m.clone(),
                n.clone(),
                f.stats.marks,
            )
            .expect("wall normal is orthogonal to the propagation direction");
            Wall {
                support: f.locus.clone(),
                m: f.stats.m.clone(),
                n,
                log_theta,
                source_tree: f.tree.clone(),
                marks: f.stats.marks,
            }
        })
        .collect();
    let joints = compute_joints(&walls, fs.points());
    Diagram {
        fan: fan.clone(),
        walls,
        joints,
        marked_points: fs.points().to_vec(),
    }
}

fn compute_joints(walls: &[Wall], marked_points: &[Point]) -> Vec<Joint> {
    let mut by_point: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for i in 0..walls.len() {
        for j in (i + 1)..walls.len() {
            let Some((cell, transversal)) = walls[i].support.intersect(&walls[j].support)
            else {
                continue;
            };
            if !transversal || cell.dim() != 0 {
                continue;
            }
            let p = cell.a_point().expect("point cell has a point");
            if marked_points.contains(&p) {
                continue;
            }
            let entry = by_point.entry(p).or_default();
            for k in [i, j] {
                if !entry.contains(&k) {
                    entry.push(k);
                }
            }
        }
    }
    by_point
        .into_iter()
        .map(|(point, mut walls)| {
            walls.sort_unstable();
            Joint { point, walls }
        })
        .collect()
}

/// One wall crossing along a polyline: the leg index, the time within the
/// leg, the crossing point, and the wall index.
struct Crossing {
    leg: usize,
    time: Scalar,
    point: Point,
    wall: usize,
}

/// Applies the path-ordered product of wall automorphisms along the
/// polyline to `f`. The polyline endpoints must lie off the diagram's
/// support and the path must avoid joints and marked points.
pub fn path_ordered_apply(
    d: &Diagram,
    path: &[Point],
    f: &PotentialElement,
) -> Result<PotentialElement> {
    if path.len() < 2 {
        return Ok(f.clone());
    }
    let mut crossings: Vec<Crossing> = vec![];
    for leg in 0..path.len() - 1 {
        let (a, b) = (&path[leg], &path[leg + 1]);
        if a == b {
            continue;
        }
        for (wi, wall) in d.walls.iter().enumerate() {
            for (time, point) in crate::geom2d::segment_crossings(a, b, &wall.support)? {
                crossings.push(Crossing {
                    leg,
                    time,
                    point,
                    wall: wi,
                });
            }
        }
    }
    crossings.sort_by(|x, y| {
        (x.leg, &x.time, x.wall).cmp(&(y.leg, &y.time, y.wall))
    });
    // A shared crossing point of two non-parallel walls is a joint (or a
    // wall endpoint, which segment_crossings already rejects).
    for pair in crossings.windows(2) {
        if pair[0].leg == pair[1].leg && pair[0].point == pair[1].point {
            let t0 = d.walls[pair[0].wall].support.tangent().unwrap();
            let t1 = d.walls[pair[1].wall].support.tangent().unwrap();
            if !det2(t0, t1).is_zero() {
                return Err(Error::NonGenericPath(format!(
                    "path passes through the joint at {}",
                    pair[0].point
                )));
            }
        }
    }
    let mut g = f.clone();
    for c in &crossings {
        let (a, b) = (&path[c.leg], &path[c.leg + 1]);
        let dx = &b.x - &a.x;
        let dy = &b.y - &a.y;
        let t = d.walls[c.wall].support.tangent().unwrap();
        let orient = det2_mixed(t, &dx, &dy);
        debug_assert!(!orient.is_zero(), "tangential crossings are rejected");
        let sigma = if orient.is_positive() { 1 } else { -1 };
        g = exp_apply(&d.fan, &d.walls[c.wall].log_theta, &g, sigma)?;
    }
    Ok(g)
}

/// Does the wall's support extend from `p` in direction `u` (`u` must span
/// the support's tangent line)? Exact: every inequality active at `p` must
/// stay satisfied to first order.
fn germ_exists(support: &Cell, p: &Point, u: &IntVec) -> bool {
    for (a, b) in support.inequalities() {
        if &a.eval(p) == b && a.dot(u).is_negative() {
            return false;
        }
    }
    true
}

/// Checks that the composite of wall automorphisms around a joint, taken
/// counterclockwise with the orientation signs, fixes every generator of
/// the ring exactly.
pub fn check_joint_consistency(d: &Diagram, joint_index: usize) -> bool {
    let joint = &d.joints[joint_index];
    // Each wall through the joint contributes one germ per side it extends
    // to; crossing the germ on the +tangent side counterclockwise gives
    // sign +1, on the -tangent side -1.
    let mut germs: Vec<(IntVec, usize, i8)> = vec![];
    for &wi in &joint.walls {
        let wall = &d.walls[wi];
        let t = wall.support.tangent().expect("walls are one-dimensional");
        for (u, sigma) in [(t.clone(), 1i8), (-t, -1i8)] {
            if germ_exists(&wall.support, &joint.point, &u) {
                germs.push((u, wi, sigma));
            }
        }
    }
    // Counterclockwise angular order; coincident directions carry commuting
    // factors, so ties may be broken arbitrarily (wall index keeps it
    // deterministic).
    germs.sort_by(|a, b| {
        if a.0 == b.0 {
            a.1.cmp(&b.1)
        } else if angle_lt(&a.0, &b.0) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    for rho in 0..d.fan.len() {
        let gen = PotentialElement::monomial(
            PWeight::basis(d.fan.len(), rho),
            MarkSet::empty(),
            Scalar::one(),
        );
        let mut g = gen.clone();
        for (_, wi, sigma) in &germs {
            g = exp_apply(&d.fan, &d.walls[*wi].log_theta, &g, *sigma)
                .expect("wall automorphisms are nilpotent");
        }
        if g != gen {
            return false;
        }
    }
    true
}

/// Transports the potential at `q` to `q2` through the diagram and compares
/// with the potential enumerated at `q2` directly. A straight segment is
/// tried first; if it hits a joint or a marked point, a deterministic
/// family of two-leg detours is tried before giving up.
pub fn check_wall_crossing_with(
    d: &Diagram,
    fs: &FamilySet,
    q: &Point,
    q2: &Point,
) -> Result<bool> {
    let w_q = potential_at(fs, q)?;
    let w_q2 = potential_at(fs, q2)?;
    if q == q2 {
        return Ok(true);
    }
    let transported = transport(d, q, q2, &w_q)?;
    Ok(transported == w_q2)
}

/// Like [`check_wall_crossing_with`], enumerating the families and building
/// the diagram from scratch.
pub fn check_wall_crossing(
    fan: &Fan,
    points: &[Point],
    q: &Point,
    q2: &Point,
) -> Result<bool> {
    let fs = enumerate_families(fan, points)?;
    let d = build_diagram(&fs);
    check_wall_crossing_with(&d, &fs, q, q2)
}

fn transport(
    d: &Diagram,
    q: &Point,
    q2: &Point,
    f: &PotentialElement,
) -> Result<PotentialElement> {
    let direct = path_ordered_apply(d, &[q.clone(), q2.clone()], f);
    let mut last_err = match direct {
        Ok(g) => return Ok(g),
        Err(e @ Error::NonGenericPath(_)) => e,
        Err(e) => return Err(e),
    };
    // Two-leg detours through waypoints offset perpendicular to the
    // segment, with offsets chosen to avoid the simple rationals of
    // typical wall positions.
    let half = Scalar::ratio(1, 2);
    let mid = Point::new(
        &(&q.x + &q2.x) * &half,
        &(&q.y + &q2.y) * &half,
    );
    let dx = &q2.x - &q.x;
    let dy = &q2.y - &q.y;
    for (num, den) in [(1, 3), (-1, 3), (2, 5), (-2, 5), (5, 7), (-5, 7), (9, 11), (-9, 11)] {
        let s = Scalar::ratio(num, den);
        // perpendicular offset: (-dy, dx) * s
        let w = Point::new(&mid.x - &(&dy * &s), &mid.y + &(&dx * &s));
        match path_ordered_apply(d, &[q.clone(), w, q2.clone()], f) {
            Ok(g) => return Ok(g),
            Err(e @ Error::NonGenericPath(_)) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}
