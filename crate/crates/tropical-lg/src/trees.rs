//! Combinatorial types of tropical disks: canonical weighted pointed trees
//! and their derived statistics.
//!
//! A tree is built from ray leaves `L:<ray index>`, mark leaves
//! `M:<mark label>`, and binary joins. Trees are counted up to isomorphism,
//! so a join stores its two children in a canonical order; the bracketed
//! text encoding (e.g. `J(L:0, J(L:1, M:1))`) doubles as the canonical key
//! used for deduplication and serialization.

use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{det2, primitive, IntVec};
use crate::ringalg::{Fan, MarkSet, PWeight};

/// A canonical weighted pointed tree (or a bare leaf).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TreeType {
    /// An unmarked incoming leaf carrying the basis weight of a fan ray.
    Leaf(usize),
    /// A marked leaf pinned at the marked point with the given label.
    Mark(usize),
    /// An internal trivalent vertex joining two subtrees.
    Join(Box<TreeType>, Box<TreeType>),
}

impl TreeType {
    pub fn is_mark(&self) -> bool {
        matches!(self, TreeType::Mark(_))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeType::Leaf(_))
    }

    /// The canonical bracketed encoding, e.g. `J(L:0, M:1)`.
    pub fn encode(&self) -> String {
        match self {
            TreeType::Leaf(rho) => format!("L:{rho}"),
            TreeType::Mark(i) => format!("M:{i}"),
            TreeType::Join(a, b) => format!("J({}, {})", a.encode(), b.encode()),
        }
    }

    /// Parses the bracketed encoding back into a tree, re-validating all
    /// construction invariants.
    pub fn parse(s: &str) -> Result<TreeType> {
        let (t, rest) = parse_node(s.trim())?;
        if !rest.trim().is_empty() {
            return Err(Error::InvalidInput(format!(
                "trailing input after tree encoding: {rest:?}"
            )));
        }
        Ok(t)
    }

    /// The set of mark labels appearing in the tree.
    pub fn marks(&self) -> MarkSet {
        match self {
            TreeType::Leaf(_) => MarkSet::empty(),
            TreeType::Mark(i) => MarkSet::singleton(*i),
            TreeType::Join(a, b) => a
                .marks()
                .try_union(&b.marks())
                .expect("constructed trees have disjoint marks"),
        }
    }
}

fn parse_node(s: &str) -> Result<(TreeType, &str)> {
    let bad = |msg: &str| Error::InvalidInput(format!("bad tree encoding: {msg}"));
    if let Some(rest) = s.strip_prefix("L:") {
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let rho = rest[..end].parse().map_err(|_| bad("leaf index"))?;
        return Ok((TreeType::Leaf(rho), &rest[end..]));
    }
    if let Some(rest) = s.strip_prefix("M:") {
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let i = rest[..end].parse().map_err(|_| bad("mark label"))?;
        if !(1..=64).contains(&i) {
            return Err(bad("mark label out of range"));
        }
        return Ok((TreeType::Mark(i), &rest[end..]));
    }
    if let Some(rest) = s.strip_prefix("J(") {
        let (a, rest) = parse_node(rest.trim_start())?;
        let rest = rest
            .trim_start()
            .strip_prefix(',')
            .ok_or_else(|| bad("expected ',' in join"))?;
        let (b, rest) = parse_node(rest.trim_start())?;
        let rest = rest
            .trim_start()
            .strip_prefix(')')
            .ok_or_else(|| bad("expected ')' closing join"))?;
        return Ok((make_join(a, b)?, rest));
    }
    Err(bad("expected L:, M:, or J("))
}

impl fmt::Display for TreeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl fmt::Debug for TreeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl TryFrom<String> for TreeType {
    type Error = Error;
    fn try_from(s: String) -> Result<TreeType> {
        TreeType::parse(&s)
    }
}

impl From<TreeType> for String {
    fn from(t: TreeType) -> String {
        t.encode()
    }
}

/// Joins two subtrees at a new trivalent vertex, in canonical child order.
///
/// Two bare ray leaves cannot be joined (the new outgoing edge would have no
/// vertex below it on the unmarked side), nor can two mark leaves (the
/// joined edge would carry weight zero without being marked). Mark labels
/// must be disjoint across the two children.
pub fn make_join(c1: TreeType, c2: TreeType) -> Result<TreeType> {
    if c1.is_leaf() && c2.is_leaf() {
        return Err(Error::ForbiddenJoin(
            "cannot join two unmarked leaves".into(),
        ));
    }
    if c1.is_mark() && c2.is_mark() {
        return Err(Error::ForbiddenJoin("cannot join two mark leaves".into()));
    }
    if c1.marks().intersects(&c2.marks()) {
        return Err(Error::MarkCollision);
    }
    let (a, b) = if c1.encode() <= c2.encode() {
        (c1, c2)
    } else {
        (c2, c1)
    };
    Ok(TreeType::Join(Box::new(a), Box::new(b)))
}

/// Derived statistics of a tree over a fixed fan.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TreeStats {
    /// Number of unmarked incoming leaves.
    pub k: usize,
    /// Number of mark leaves.
    pub d: usize,
    pub marks: MarkSet,
    /// Total weight: the sum of basis weights over the ray leaves.
    pub m: PWeight,
    /// Direction of the total weight.
    pub mbar: IntVec,
    /// Divisibility index: `mbar = k_div * primitive(mbar)`; zero exactly
    /// when `mbar` itself vanishes (which forces `mult = 0`).
    pub k_div: u64,
    /// Product of `|det|` over joins of two non-mark subtrees.
    #[serde(with = "bigint_string")]
    pub mult: BigInt,
    /// Maslov index `2 (k - d)`.
    pub maslov: i64,
}

mod bigint_string {
    use num::bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Computes all derived statistics of a canonical tree.
///
/// ```
/// use tropical_lg::ringalg::Fan;
/// use tropical_lg::trees::{stats, TreeType};
///
/// let fan = Fan::projective_plane();
/// // Two unmarked leaves on rays 0 and 1 joined through marked point 1.
/// let t = TreeType::parse("J(J(L:0, M:1), L:1)").unwrap();
/// let s = stats(&fan, &t);
/// assert_eq!((s.k, s.d), (2, 1));
/// assert_eq!(s.maslov, 2);
/// assert_eq!(s.mult.to_string(), "1");
/// ```
pub fn stats(fan: &Fan, t: &TreeType) -> TreeStats {
    let (k, d, marks, m, _mbar, mult) = walk(fan, t);
    let mbar = fan.theta(&m);
    let k_div = match primitive(&mbar) {
        Ok((_, g)) => u64::try_from(&g).expect("divisibility index fits in u64"),
        Err(_) => 0,
    };
    TreeStats {
        k,
        d,
        marks,
        m,
        mbar,
        k_div,
        mult,
        maslov: 2 * (k as i64 - d as i64),
    }
}

/// Bottom-up pass: `(k, d, marks, m, mbar, mult)` of a subtree.
fn walk(fan: &Fan, t: &TreeType) -> (usize, usize, MarkSet, PWeight, IntVec, BigInt) {
    match t {
        TreeType::Leaf(rho) => {
            let m = PWeight::basis(fan.len(), *rho);
            let mbar = fan.theta(&m);
            (1, 0, MarkSet::empty(), m, mbar, BigInt::one())
        }
        TreeType::Mark(i) => (
            0,
            1,
            MarkSet::singleton(*i),
            PWeight::zero(fan.len()),
            IntVec::zero(),
            BigInt::one(),
        ),
        TreeType::Join(a, b) => {
            let (k1, d1, i1, m1, mbar1, mult1) = walk(fan, a);
            let (k2, d2, i2, m2, mbar2, mult2) = walk(fan, b);
            let marks = i1.try_union(&i2).expect("constructed trees have disjoint marks");
            let mut mult = mult1 * mult2;
            // The new vertex contributes only when neither incoming edge is
            // a bare marked edge.
            if !a.is_mark() && !b.is_mark() {
                mult *= det2(&mbar1, &mbar2).abs();
            }
            (
                k1 + k2,
                d1 + d2,
                marks,
                &m1 + &m2,
                &mbar1 + &mbar2,
                mult,
            )
        }
    }
}
