//! Convex rational polyhedral cells of the plane in H-representation.
//!
//! A [`Cell`] is a nonempty convex subset of the plane cut out by exact
//! affine equalities and inequalities, with its dimension cached and, for
//! one-dimensional cells, an oriented primitive tangent. Intersection,
//! membership, sweeping by a ray, and transversal segment crossings are all
//! pure linear algebra over exact rationals; no epsilon appears anywhere in
//! this module.

use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::num::{det2, primitive, IntVec, Point, Scalar};
use crate::error::{Error, Result};

/// Constraint relation, used internally by the feasibility solver.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Rel {
    Eq,
    Ge,
    Gt,
}

#[derive(Clone, Debug)]
struct Con {
    a: IntVec,
    b: Scalar,
    rel: Rel,
}

/// Normalizes `a . x (rel) b` to an integral constraint with content 1.
/// For equalities the sign is fixed so the first nonzero coefficient of `a`
/// is positive.
fn normalize_con(a: &IntVec, b: &Scalar, is_eq: bool) -> (IntVec, Scalar) {
    let den = b.denom().clone();
    let mut ax = &a.x * &den;
    let mut ay = &a.y * &den;
    let mut bi = b.numer().clone();
    let g = ax.gcd(&ay).gcd(&bi);
    if !g.is_zero() && !g.is_one() {
        ax /= &g;
        ay /= &g;
        bi /= &g;
    }
    if is_eq {
        let neg = if !ax.is_zero() {
            ax.is_negative()
        } else {
            ay.is_negative()
        };
        if neg {
            ax = -ax;
            ay = -ay;
            bi = -bi;
        }
    }
    (IntVec { x: ax, y: ay }, Scalar::from_bigint(bi))
}

/// A nonempty convex rational polyhedral cell.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Cell {
    dim: u8,
    #[serde(rename = "eq")]
    eqs: Vec<(IntVec, Scalar)>,
    #[serde(rename = "ineq")]
    ineqs: Vec<(IntVec, Scalar)>,
    #[serde(rename = "t", skip_serializing_if = "Option::is_none", default)]
    tangent: Option<IntVec>,
}

/// The affine shape underlying a cell, recovered by the solver.
#[derive(Clone, Debug)]
enum Shape {
    Point(Point),
    /// `base + s * t` for `s` in the given interval; `lo` is normalized to
    /// `Some(0)` whenever any endpoint is finite.
    Line {
        base: Point,
        t: IntVec,
        hi: Option<Scalar>,
        unbounded_below: bool,
    },
    Region(Vec<(IntVec, Scalar)>),
}

impl Cell {
    /// The whole plane.
    pub fn full_plane() -> Cell {
        Cell {
            dim: 2,
            eqs: vec![],
            ineqs: vec![],
            tangent: None,
        }
    }

    /// The single point `p`.
    pub fn point(p: &Point) -> Cell {
        let (a1, b1) = normalize_con(&IntVec::new(1, 0), &p.x, true);
        let (a2, b2) = normalize_con(&IntVec::new(0, 1), &p.y, true);
        Cell {
            dim: 0,
            eqs: vec![(a1, b1), (a2, b2)],
            ineqs: vec![],
            tangent: None,
        }
    }

    /// The ray `{ base + s * t : s >= 0 }`. `t` must be nonzero and is
    /// reduced to its primitive representative.
    pub fn ray(base: &Point, t: &IntVec) -> Result<Cell> {
        let (t, _) = primitive(t)?;
        let n = t.rot90_ccw();
        let eq = normalize_con(&n, &n.eval(base), true);
        let ineq = normalize_con(&t, &t.eval(base), false);
        Ok(Cell {
            dim: 1,
            eqs: vec![eq],
            ineqs: vec![ineq],
            tangent: Some(t),
        })
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn equalities(&self) -> &[(IntVec, Scalar)] {
        &self.eqs
    }

    pub fn inequalities(&self) -> &[(IntVec, Scalar)] {
        &self.ineqs
    }

    /// Oriented primitive tangent; present exactly on dim-1 cells.
    pub fn tangent(&self) -> Option<&IntVec> {
        self.tangent.as_ref()
    }

    fn constraints(&self) -> Vec<Con> {
        let mut out = Vec::with_capacity(self.eqs.len() + self.ineqs.len());
        for (a, b) in &self.eqs {
            out.push(Con {
                a: a.clone(),
                b: b.clone(),
                rel: Rel::Eq,
            });
        }
        for (a, b) in &self.ineqs {
            out.push(Con {
                a: a.clone(),
                b: b.clone(),
                rel: Rel::Ge,
            });
        }
        out
    }

    /// Membership test; `strict` asks for the relative interior.
    pub fn contains(&self, p: &Point, strict: bool) -> bool {
        for (a, b) in &self.eqs {
            if &a.eval(p) != b {
                return false;
            }
        }
        for (a, b) in &self.ineqs {
            let v = a.eval(p);
            if strict {
                if &v <= b {
                    return false;
                }
            } else if &v < b {
                return false;
            }
        }
        true
    }

    /// Point-set equality, ignoring the tangent orientation of dim-1 cells.
    pub fn same_set(&self, other: &Cell) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        a.tangent = None;
        b.tangent = None;
        a == b
    }

    /// For a dim-1 cell, returns `(base, tangent, hi, unbounded_below)` of
    /// its parametrization `base + s*t`, `s` in the interval.
    fn line_shape(&self) -> Option<Shape> {
        if self.dim != 1 {
            return None;
        }
        analyze(&self.constraints())
    }

    /// The finite endpoints of a dim-1 cell (base, and the far endpoint for
    /// segments).
    pub fn endpoints(&self) -> Option<(Point, Option<Point>)> {
        match self.line_shape()? {
            Shape::Line {
                base,
                t,
                hi,
                unbounded_below,
            } => {
                if unbounded_below {
                    None // full line: no finite endpoint
                } else {
                    let far = hi.map(|h| base.translate(&t, &h));
                    Some((base, far))
                }
            }
            _ => None,
        }
    }

    /// Intersection of two cells. Returns `None` when empty, otherwise the
    /// intersection cell together with transversality of the two affine
    /// hulls (a dim-0 or dim-2 hull is transversal to anything it meets;
    /// two lines are transversal iff their tangents are independent).
    pub fn intersect(&self, other: &Cell) -> Option<(Cell, bool)> {
        let mut cons = self.constraints();
        cons.extend(other.constraints());
        let shape = analyze(&cons)?;
        let transversal = match (self.dim, other.dim) {
            (1, 1) => {
                let t1 = self.tangent.as_ref().expect("dim-1 cell has tangent");
                let t2 = other.tangent.as_ref().expect("dim-1 cell has tangent");
                !det2(t1, t2).is_zero()
            }
            _ => true,
        };
        let prefer = self.tangent.as_ref().or(other.tangent.as_ref());
        Some((Cell::from_shape(shape, prefer), transversal))
    }

    /// Minkowski difference with the ray spanned by `d`: returns
    /// `{ x - s*d : x in self, s >= 0 }`, one dimension higher.
    pub fn sweep(&self, d: &IntVec) -> Result<Cell> {
        if d.is_zero() {
            return Err(Error::ZeroVector);
        }
        match self.dim {
            0 => {
                // Recover the point from the two equalities.
                let p = self
                    .a_point()
                    .ok_or_else(|| Error::InvalidInput("malformed point cell".into()))?;
                Cell::ray(&p, &-d)
            }
            1 => {
                let t = self.tangent.clone().expect("dim-1 cell has tangent");
                if det2(&t, d).is_zero() {
                    return Err(Error::DegenerateSweep { dir: d.to_string() });
                }
                let Some(Shape::Line {
                    base,
                    t,
                    hi,
                    unbounded_below,
                }) = self.line_shape()
                else {
                    return Err(Error::InvalidInput("malformed dim-1 cell".into()));
                };
                // Facets pass through the cell's endpoints; orient each one
                // by a strictly interior sample of the swept region.
                let mut facets: Vec<(IntVec, Point)> = vec![];
                let sample;
                if unbounded_below {
                    // Full line swept by a ray: a half-plane.
                    facets.push((t.rot90_ccw(), base.clone()));
                    sample = base.translate(d, &Scalar::from(-1));
                } else if let Some(h) = hi {
                    // Segment [base, far].
                    let far = base.translate(&t, &h);
                    facets.push((t.rot90_ccw(), base.clone()));
                    facets.push((d.rot90_ccw(), base.clone()));
                    facets.push((d.rot90_ccw(), far));
                    let mid = base.translate(&t, &(&h / &Scalar::from(2)));
                    sample = mid.translate(d, &Scalar::from(-1));
                } else {
                    // Ray: the cone at `base` spanned by `t` and `-d`.
                    facets.push((t.rot90_ccw(), base.clone()));
                    facets.push((d.rot90_ccw(), base.clone()));
                    sample = base
                        .translate(&t, &Scalar::one())
                        .translate(d, &Scalar::from(-1));
                }
                let mut ineqs = vec![];
                for (n, through) in facets {
                    let rhs = n.eval(&through);
                    let v = n.eval(&sample);
                    debug_assert!(v != rhs, "sample on facet");
                    let (a, b) = if v > rhs {
                        normalize_con(&n, &rhs, false)
                    } else {
                        normalize_con(&-&n, &-&rhs, false)
                    };
                    ineqs.push((a, b));
                }
                ineqs.sort();
                ineqs.dedup();
                Ok(Cell {
                    dim: 2,
                    eqs: vec![],
                    ineqs,
                    tangent: None,
                })
            }
            _ => Err(Error::InvalidInput(
                "cannot sweep a full-dimensional cell".into(),
            )),
        }
    }

    /// Any point of the cell (for dim-0 cells, the point itself).
    pub fn a_point(&self) -> Option<Point> {
        match analyze(&self.constraints())? {
            Shape::Point(p) => Some(p),
            Shape::Line { base, .. } => Some(base),
            Shape::Region(_) => None,
        }
    }

    fn from_shape(shape: Shape, prefer_tangent: Option<&IntVec>) -> Cell {
        match shape {
            Shape::Point(p) => Cell::point(&p),
            Shape::Line {
                base,
                mut t,
                mut hi,
                unbounded_below,
            } => {
                let mut base = base;
                if unbounded_below {
                    // Full line; orient by preference if given.
                    if let Some(p) = prefer_tangent {
                        if det2(p, &t).is_zero() && p.dot(&t).is_negative() {
                            t = -&t;
                        }
                    }
                    let n = t.rot90_ccw();
                    let eq = normalize_con(&n, &n.eval(&base), true);
                    Cell {
                        dim: 1,
                        eqs: vec![eq],
                        ineqs: vec![],
                        tangent: Some(t),
                    }
                } else if let Some(h) = hi.take() {
                    // Segment; orientation is free, follow the preference.
                    let mut far = base.translate(&t, &h);
                    if let Some(p) = prefer_tangent {
                        if det2(p, &t).is_zero() && p.dot(&t).is_negative() {
                            t = -&t;
                            std::mem::swap(&mut base, &mut far);
                        }
                    }
                    let n = t.rot90_ccw();
                    let eq = normalize_con(&n, &n.eval(&base), true);
                    let i1 = normalize_con(&t, &t.eval(&base), false);
                    let nt = -&t;
                    let i2 = normalize_con(&nt, &nt.eval(&far), false);
                    let mut ineqs = vec![i1, i2];
                    ineqs.sort();
                    Cell {
                        dim: 1,
                        eqs: vec![eq],
                        ineqs,
                        tangent: Some(t),
                    }
                } else {
                    // Ray: the tangent is forced to point toward infinity.
                    Cell::ray(&base, &t).expect("primitive tangent")
                }
            }
            Shape::Region(mut ineqs) => {
                ineqs.sort();
                ineqs.dedup();
                Cell {
                    dim: 2,
                    eqs: vec![],
                    ineqs,
                    tangent: None,
                }
            }
        }
    }
}

/// One-variable constraint `coef * y (>= / >) bound`.
struct YCon {
    coef: Scalar,
    bound: Scalar,
    strict: bool,
}

fn interval_feasible(ycons: &[YCon]) -> bool {
    let mut lo: Option<(Scalar, bool)> = None;
    let mut hi: Option<(Scalar, bool)> = None;
    for c in ycons {
        if c.coef.is_zero() {
            if c.bound.is_positive() || (c.bound.is_zero() && c.strict) {
                return false;
            }
            continue;
        }
        let v = &c.bound / &c.coef;
        if c.coef.is_positive() {
            lo = Some(match lo {
                None => (v, c.strict),
                Some((cur, cs)) => {
                    if v > cur {
                        (v, c.strict)
                    } else if v == cur {
                        (cur, cs || c.strict)
                    } else {
                        (cur, cs)
                    }
                }
            });
        } else {
            hi = Some(match hi {
                None => (v, c.strict),
                Some((cur, cs)) => {
                    if v < cur {
                        (v, c.strict)
                    } else if v == cur {
                        (cur, cs || c.strict)
                    } else {
                        (cur, cs)
                    }
                }
            });
        }
    }
    match (lo, hi) {
        (Some((l, ls)), Some((h, hs))) => l < h || (l == h && !ls && !hs),
        _ => true,
    }
}

/// Exact feasibility of a 2-variable system by Fourier-Motzkin elimination.
fn feasible(cons: &[Con]) -> bool {
    // x-bounds of the form x >= p + q*y (lowers) or x <= p + q*y (uppers).
    let mut lowers: Vec<(Scalar, Scalar, bool)> = vec![];
    let mut uppers: Vec<(Scalar, Scalar, bool)> = vec![];
    let mut ycons: Vec<YCon> = vec![];

    let push = |a: &IntVec, b: &Scalar, strict: bool,
                    lowers: &mut Vec<(Scalar, Scalar, bool)>,
                    uppers: &mut Vec<(Scalar, Scalar, bool)>,
                    ycons: &mut Vec<YCon>|
     -> bool {
        if a.x.is_zero() {
            if a.y.is_zero() {
                // 0 >= b (or >)
                return !(b.is_positive() || (b.is_zero() && strict));
            }
            ycons.push(YCon {
                coef: Scalar::from_bigint(a.y.clone()),
                bound: b.clone(),
                strict,
            });
            return true;
        }
        let ax = Scalar::from_bigint(a.x.clone());
        let p = b / &ax;
        let q = &-&Scalar::from_bigint(a.y.clone()) / &ax;
        if a.x.is_positive() {
            lowers.push((p, q, strict));
        } else {
            uppers.push((p, q, strict));
        }
        true
    };

    for c in cons {
        match c.rel {
            Rel::Eq => {
                if !push(&c.a, &c.b, false, &mut lowers, &mut uppers, &mut ycons) {
                    return false;
                }
                let na = -&c.a;
                let nb = -&c.b;
                if !push(&na, &nb, false, &mut lowers, &mut uppers, &mut ycons) {
                    return false;
                }
            }
            Rel::Ge | Rel::Gt => {
                if !push(
                    &c.a,
                    &c.b,
                    c.rel == Rel::Gt,
                    &mut lowers,
                    &mut uppers,
                    &mut ycons,
                ) {
                    return false;
                }
            }
        }
    }

    // Eliminate x: each (lower, upper) pair yields a constraint on y.
    for (lp, lq, ls) in &lowers {
        for (up, uq, us) in &uppers {
            // lp + lq*y <= up + uq*y  =>  (uq - lq)*y >= lp - up
            ycons.push(YCon {
                coef: uq - lq,
                bound: lp - up,
                strict: *ls || *us,
            });
        }
    }
    interval_feasible(&ycons)
}

/// Finds the exact shape of the solution set, or `None` when empty.
fn analyze(cons: &[Con]) -> Option<Shape> {
    if !feasible(cons) {
        return None;
    }
    // Detect implicit equalities among the inequalities.
    let mut eq_normals: Vec<(IntVec, Scalar)> = vec![];
    let mut live_ineqs: Vec<(IntVec, Scalar)> = vec![];
    for (i, c) in cons.iter().enumerate() {
        match c.rel {
            Rel::Eq => {
                if !c.a.is_zero() {
                    eq_normals.push((c.a.clone(), c.b.clone()));
                }
            }
            Rel::Ge => {
                let mut probe: Vec<Con> = cons.to_vec();
                probe[i].rel = Rel::Gt;
                if feasible(&probe) {
                    live_ineqs.push((c.a.clone(), c.b.clone()));
                } else {
                    eq_normals.push((c.a.clone(), c.b.clone()));
                }
            }
            Rel::Gt => unreachable!("public cells carry closed constraints"),
        }
    }

    // Rank of the equality system.
    let first = eq_normals.iter().find(|(a, _)| !a.is_zero());
    match first {
        None => {
            // Full-dimensional: prune redundant inequalities.
            let mut kept: Vec<(IntVec, Scalar)> = live_ineqs
                .iter()
                .map(|(a, b)| normalize_con(a, b, false))
                .collect();
            kept.sort();
            kept.dedup();
            let mut i = 0;
            while i < kept.len() {
                let (a, b) = kept[i].clone();
                let mut probe: Vec<Con> = kept
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, (a, b))| Con {
                        a: a.clone(),
                        b: b.clone(),
                        rel: Rel::Ge,
                    })
                    .collect();
                probe.push(Con {
                    a: -&a,
                    b: -&b,
                    rel: Rel::Gt,
                });
                if feasible(&probe) {
                    i += 1;
                } else {
                    kept.remove(i);
                }
            }
            Some(Shape::Region(kept))
        }
        Some((a1, b1)) => {
            let second = eq_normals
                .iter()
                .find(|(a, _)| !det2(a1, a).is_zero())
                .cloned();
            if let Some((a2, b2)) = second {
                // Rank 2: a unique point, by Cramer's rule.
                let det = Scalar::from_bigint(det2(a1, &a2));
                let x = &(&(b1 * &Scalar::from_bigint(a2.y.clone()))
                    - &(&b2 * &Scalar::from_bigint(a1.y.clone())))
                    / &det;
                let y = &(&(&Scalar::from_bigint(a1.x.clone()) * &b2)
                    - &(&Scalar::from_bigint(a2.x.clone()) * b1))
                    / &det;
                return Some(Shape::Point(Point::new(x, y)));
            }
            // Rank 1: a line, restricted to an interval by the inequalities.
            let (t0, _) = primitive(&a1.rot90_ccw()).expect("nonzero normal");
            let p = if !a1.x.is_zero() {
                Point::new(b1 / &Scalar::from_bigint(a1.x.clone()), Scalar::zero())
            } else {
                Point::new(Scalar::zero(), b1 / &Scalar::from_bigint(a1.y.clone()))
            };
            let mut lo: Option<Scalar> = None;
            let mut hi: Option<Scalar> = None;
            for (a, b) in &live_ineqs {
                let coef = Scalar::from_bigint(a.dot(&t0));
                let rhs = b - &a.eval(&p);
                if coef.is_zero() {
                    continue; // satisfied identically on the line
                }
                let v = &rhs / &coef;
                if coef.is_positive() {
                    lo = Some(match lo {
                        None => v,
                        Some(cur) => {
                            if v > cur {
                                v
                            } else {
                                cur
                            }
                        }
                    });
                } else {
                    hi = Some(match hi {
                        None => v,
                        Some(cur) => {
                            if v < cur {
                                v
                            } else {
                                cur
                            }
                        }
                    });
                }
            }
            // Normalize so a finite endpoint sits at parameter 0 with the
            // tangent pointing into the cell.
            let (base, t, hi, unbounded_below) = match (lo, hi) {
                (Some(l), Some(h)) => {
                    debug_assert!(l < h, "implicit-equality pass missed a point");
                    let base = p.translate(&t0, &l);
                    (base, t0, Some(&h - &l), false)
                }
                (Some(l), None) => (p.translate(&t0, &l), t0, None, false),
                (None, Some(h)) => (p.translate(&t0, &h), -&t0, None, false),
                (None, None) => (p, t0, None, true),
            };
            Some(Shape::Line {
                base,
                t,
                hi,
                unbounded_below,
            })
        }
    }
}

/// Transversal crossings of the open segment `(a, b)` with a dim-1 cell,
/// as `(time, point)` pairs sorted by increasing time.
pub fn segment_crossings(a: &Point, b: &Point, c: &Cell) -> Result<Vec<(Scalar, Point)>> {
    if c.dim() != 1 {
        return Err(Error::InvalidInput(
            "segment_crossings expects a dim-1 cell".into(),
        ));
    }
    if c.contains(a, false) || c.contains(b, false) {
        return Err(Error::NonGenericPath(format!(
            "segment endpoint lies on the support of a wall ({a} - {b})"
        )));
    }
    let (n, beta) = &c.eqs[0];
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    let dir = &(&Scalar::from_bigint(n.x.clone()) * &dx) + &(&Scalar::from_bigint(n.y.clone()) * &dy);
    let va = n.eval(a);
    if dir.is_zero() {
        if &va != beta {
            return Ok(vec![]); // parallel, disjoint lines
        }
        // Segment lies in the cell's line; non-generic if they actually meet.
        // Sample membership at a subdivision of the segment (the overlap of
        // a segment and a ray/segment, if nonempty, contains one of these
        // dyadic samples or an endpoint region around them).
        // Exact route: restrict c's inequalities to the segment parameter.
        let mut lo = Scalar::zero();
        let mut hi = Scalar::one();
        let mut empty = false;
        for (ai, bi) in &c.ineqs {
            let coef = &(&Scalar::from_bigint(ai.x.clone()) * &dx)
                + &(&Scalar::from_bigint(ai.y.clone()) * &dy);
            let rhs = bi - &ai.eval(a);
            if coef.is_zero() {
                if rhs.is_positive() {
                    empty = true;
                }
                continue;
            }
            let v = &rhs / &coef;
            if coef.is_positive() {
                if v > lo {
                    lo = v;
                }
            } else if v < hi {
                hi = v;
            }
        }
        if !empty && lo < hi {
            return Err(Error::NonGenericPath(format!(
                "segment ({a} - {b}) overlaps a wall support"
            )));
        }
        return Ok(vec![]);
    }
    let time = &(beta - &va) / &dir;
    if !(time.is_positive() && time < Scalar::one()) {
        return Ok(vec![]);
    }
    let point = Point::new(&a.x + &(&time * &dx), &a.y + &(&time * &dy));
    if !c.contains(&point, false) {
        return Ok(vec![]);
    }
    if !c.contains(&point, true) {
        return Err(Error::NonGenericPath(format!(
            "segment ({a} - {b}) passes through an endpoint of a wall at {point}"
        )));
    }
    Ok(vec![(time, point)])
}
