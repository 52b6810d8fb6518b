//! Independent brute-force evaluation of the pointed potential.
//!
//! Instead of sweeping stop loci, this oracle enumerates every candidate
//! combinatorial type directly and solves, for each, the exact linear
//! system realizing it as a concrete disk: marked vertices pinned at the
//! marked points, the stop pinned at the query, every bounded edge of
//! strictly positive length. It shares no geometry with the sweeping
//! enumeration, which is what makes the agreement of the two a meaningful
//! check.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::error::{Error, Result};
use crate::geom2d::{IntVec, Point, Scalar};
use crate::ringalg::{Fan, PotentialElement};
use crate::trees::{make_join, stats, TreeType};

/// A linear expression `c0 + sum coefs[v] * x_v` over exact rationals.
#[derive(Clone, Debug)]
struct LinExpr {
    c0: Scalar,
    coefs: BTreeMap<usize, Scalar>,
}

impl LinExpr {
    fn constant(c0: Scalar) -> LinExpr {
        LinExpr {
            c0,
            coefs: BTreeMap::new(),
        }
    }

    fn add_var(&mut self, v: usize, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        let e = self.coefs.entry(v).or_insert_with(Scalar::zero);
        *e = &*e + &coef;
        if e.is_zero() {
            self.coefs.remove(&v);
        }
    }

    /// `self - other` as an equation `... = 0`, flattened to a row.
    fn minus(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.c0 = &out.c0 - &other.c0;
        for (v, c) in &other.coefs {
            out.add_var(*v, -c);
        }
        out
    }
}

/// Outcome of exact Gaussian elimination.
enum Solution {
    Unique(Vec<Scalar>),
    Underdetermined,
    Inconsistent,
}

/// Solves `rows * x = rhs` exactly, where each equation is given as a
/// `LinExpr` required to vanish (`c0` is the negated right-hand side).
fn solve(equations: &[LinExpr], num_vars: usize) -> Solution {
    // Augmented matrix [A | -c0].
    let mut mat: Vec<Vec<Scalar>> = equations
        .iter()
        .map(|e| {
            let mut row = vec![Scalar::zero(); num_vars + 1];
            for (v, c) in &e.coefs {
                row[*v] = c.clone();
            }
            row[num_vars] = -&e.c0;
            row
        })
        .collect();
    let rows = mat.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; num_vars];
    let mut r = 0;
    for col in 0..num_vars {
        let Some(p) = (r..rows).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][col].clone();
        for c in col..=num_vars {
            mat[r][c] = &mat[r][c] / &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][col].is_zero() {
                let factor = mat[i][col].clone();
                for c in col..=num_vars {
                    mat[i][c] = &mat[i][c] - &(&factor * &mat[r][c]);
                }
            }
        }
        pivot_of_col[col] = Some(r);
        r += 1;
    }
    for row in mat.iter().skip(r) {
        if !row[num_vars].is_zero() {
            return Solution::Inconsistent;
        }
    }
    if pivot_of_col.iter().any(|p| p.is_none()) {
        return Solution::Underdetermined;
    }
    let x = pivot_of_col
        .iter()
        .map(|p| mat[p.unwrap()][num_vars].clone())
        .collect();
    Solution::Unique(x)
}

/// Generates every canonical tree over the fan with at most `max_k`
/// unmarked leaves and marks drawn from `1..=n`, grouped by total leaf
/// count.
fn all_trees(fan: &Fan, n: usize, max_k: usize) -> Vec<TreeType> {
    let max_size = max_k + n;
    let mut by_size: Vec<Vec<TreeType>> = vec![vec![]];
    let mut first: Vec<TreeType> = (0..fan.len()).map(TreeType::Leaf).collect();
    first.extend((1..=n).map(TreeType::Mark));
    by_size.push(first);
    for size in 2..=max_size {
        let mut level: BTreeSet<TreeType> = BTreeSet::new();
        for s1 in 1..size {
            let s2 = size - s1;
            if s2 < s1 {
                break;
            }
            for t1 in &by_size[s1] {
                for t2 in &by_size[s2] {
                    let Ok(t) = make_join(t1.clone(), t2.clone()) else {
                        continue;
                    };
                    let (k, d) = counts(&t);
                    if k <= max_k && d <= n {
                        level.insert(t);
                    }
                }
            }
        }
        by_size.push(level.into_iter().collect());
    }
    by_size.into_iter().flatten().collect()
}

fn counts(t: &TreeType) -> (usize, usize) {
    match t {
        TreeType::Leaf(_) => (1, 0),
        TreeType::Mark(_) => (0, 1),
        TreeType::Join(a, b) => {
            let (k1, d1) = counts(a);
            let (k2, d2) = counts(b);
            (k1 + k2, d1 + d2)
        }
    }
}

/// Tries to realize a tree as a disk stopping at `q`. Returns whether a
/// realization with all bounded edges of positive length exists.
fn realizes(fan: &Fan, tree: &TreeType, points: &[Point], q: &Point) -> Result<bool> {
    if let TreeType::Leaf(_) = tree {
        // A single unbounded edge passes through every stop.
        return Ok(true);
    }
    let mut equations: Vec<LinExpr> = vec![];
    let mut num_vars = 0;
    let apex = apex_position(fan, tree, points, &mut equations, &mut num_vars)
        .expect("root is not a bare mark or leaf");
    // The outgoing edge: q = apex - l * mbar, l a fresh variable.
    let mbar = stats(fan, tree).mbar;
    let root_var = num_vars;
    num_vars += 1;
    push_edge_equation(&mut equations, &apex, &mbar, root_var, q);
    match solve(&equations, num_vars) {
        Solution::Inconsistent => Ok(false),
        Solution::Underdetermined => Err(Error::AmbiguousRealization(tree.encode())),
        Solution::Unique(x) => {
            if x.iter().any(|l| l.is_zero()) {
                return Err(Error::NonGenericQuery(format!(
                    "a realization of {tree} stopping at {q} collapses an edge"
                )));
            }
            Ok(x.iter().all(|l| l.is_positive()))
        }
    }
}

/// Adds the two coordinate equations `target = apex - l * mbar`.
fn push_edge_equation(
    equations: &mut Vec<LinExpr>,
    apex: &[LinExpr; 2],
    mbar: &IntVec,
    len_var: usize,
    target: &Point,
) {
    let coords = [
        (&target.x, Scalar::from_bigint(mbar.x.clone())),
        (&target.y, Scalar::from_bigint(mbar.y.clone())),
    ];
    for (axis, (t, m)) in coords.into_iter().enumerate() {
        let mut e = apex[axis].minus(&LinExpr::constant(t.clone()));
        e.add_var(len_var, -&m);
        equations.push(e);
    }
}

/// The position of a subtree's top vertex as linear expressions in the
/// edge-length variables, accumulating the matching equations. Returns
/// `None` for subtrees (bare leaves) that impose no constraint.
fn apex_position(
    fan: &Fan,
    tree: &TreeType,
    points: &[Point],
    equations: &mut Vec<LinExpr>,
    num_vars: &mut usize,
) -> Option<[LinExpr; 2]> {
    match tree {
        TreeType::Leaf(_) => None,
        TreeType::Mark(i) => {
            let p = &points[*i - 1];
            Some([
                LinExpr::constant(p.x.clone()),
                LinExpr::constant(p.y.clone()),
            ])
        }
        TreeType::Join(a, b) => {
            // Each determined child reaches the new vertex through its
            // subtree's edge: vertex = child apex - l * mbar(child), with
            // marked edges contracted (no length variable).
            let reach = |t: &TreeType,
                             equations: &mut Vec<LinExpr>,
                             num_vars: &mut usize|
             -> Option<[LinExpr; 2]> {
                let apex = apex_position(fan, t, points, equations, num_vars)?;
                if t.is_mark() {
                    return Some(apex);
                }
                let mbar = stats(fan, t).mbar;
                let v = *num_vars;
                *num_vars += 1;
                let mut out = apex;
                out[0].add_var(v, -&Scalar::from_bigint(mbar.x.clone()));
                out[1].add_var(v, -&Scalar::from_bigint(mbar.y.clone()));
                Some(out)
            };
            let ra = reach(a, equations, num_vars);
            let rb = reach(b, equations, num_vars);
            match (ra, rb) {
                (Some(ea), Some(eb)) => {
                    equations.push(ea[0].minus(&eb[0]));
                    equations.push(ea[1].minus(&eb[1]));
                    Some(ea)
                }
                (Some(e), None) | (None, Some(e)) => Some(e),
                (None, None) => unreachable!("two bare leaves cannot be joined"),
            }
        }
    }
}

/// Evaluates the pointed potential at `q` from first principles: sums
/// `mult * z^m * u_marks` over every realizable Maslov-index-2 type.
/// Intended for small numbers of marked points; agreement with the
/// sweeping enumeration is an exact cross-check.
pub fn brute_force_potential(fan: &Fan, points: &[Point], q: &Point) -> Result<PotentialElement> {
    let n = points.len();
    let mut out = PotentialElement::zero();
    for tree in all_trees(fan, n, n + 1) {
        if tree.is_mark() {
            continue;
        }
        let s = stats(fan, &tree);
        if s.maslov != 2 || s.mult.is_zero() {
            continue;
        }
        if realizes(fan, &tree, points, q)? {
            out.add_term(s.m, s.marks, Scalar::from_bigint(s.mult));
        }
    }
    Ok(out)
}
