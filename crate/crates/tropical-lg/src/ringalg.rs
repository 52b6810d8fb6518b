//! The ambient algebra: complete fans, the weight monoid, the nilpotent
//! mark ring, potentials, and the tropical Lie algebra with its
//! exponentiated wall automorphisms.
//!
//! Weights live in the free monoid on the rays of a fixed complete fan; the
//! boundary map [`Fan::theta`] sends a weight to its total lattice direction.
//! Marks live in the ring `C[u_1..u_n]/(u_i^2)`: a product of monomials with
//! a shared mark is zero, which makes every derivation appearing on a wall
//! nilpotent and every exponential a finite sum.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{det2, primitive, IntVec, Scalar};

/// A complete rational fan in the plane, given by its primitive ray
/// generators in counterclockwise order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<IntVec>", into = "Vec<IntVec>")]
pub struct Fan {
    rays: Vec<IntVec>,
}

/// Orders directions counterclockwise starting just above the positive
/// x-axis: returns 0 for the open upper half plane including +x, 1 below.
fn half(v: &IntVec) -> u8 {
    if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Strict counterclockwise "angle of a < angle of b" for non-parallel rays.
pub(crate) fn angle_lt(a: &IntVec, b: &IntVec) -> bool {
    match half(a).cmp(&half(b)) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => det2(a, b).is_positive(),
    }
}

impl Fan {
    /// Validates and builds a fan. Rays must be at least three, primitive,
    /// pairwise distinct, listed counterclockwise, and every cyclically
    /// consecutive angular gap must be less than a half turn (completeness).
    ///
    /// ```
    /// use tropical_lg::geom2d::IntVec;
    /// use tropical_lg::ringalg::Fan;
    ///
    /// let fan = Fan::new(vec![
    ///     IntVec::new(1, 0),
    ///     IntVec::new(0, 1),
    ///     IntVec::new(-1, -1),
    /// ])
    /// .unwrap();
    /// assert_eq!(fan, Fan::projective_plane());
    ///
    /// // A fan that leaves a half plane uncovered is rejected.
    /// assert!(Fan::new(vec![
    ///     IntVec::new(1, 0),
    ///     IntVec::new(1, 1),
    ///     IntVec::new(0, 1),
    /// ])
    /// .is_err());
    /// ```
    pub fn new(rays: Vec<IntVec>) -> Result<Fan> {
        if rays.len() < 3 {
            return Err(Error::InvalidFan(format!(
                "need at least 3 rays, got {}",
                rays.len()
            )));
        }
        for r in &rays {
            if r.is_zero() {
                return Err(Error::InvalidFan("zero ray".into()));
            }
            let (p, k) = primitive(r)?;
            if &p != r || k != BigInt::from(1) {
                return Err(Error::InvalidFan(format!(
                    "ray {r} is not primitive; use {p}"
                )));
            }
        }
        for i in 0..rays.len() {
            for j in (i + 1)..rays.len() {
                // Opposite rays span distinct 1-cones and are fine; only a
                // repeated direction is degenerate.
                if rays[i] == rays[j] {
                    return Err(Error::InvalidFan(format!(
                        "ray {} is repeated",
                        rays[i]
                    )));
                }
            }
        }
        // Counterclockwise in cyclic order: at most one "descent" when the
        // listing wraps past the positive x-axis. Together with every cyclic
        // gap being under a half turn, this pins the winding to one turn.
        let mut descents = 0;
        for i in 0..rays.len() {
            let a = &rays[i];
            let b = &rays[(i + 1) % rays.len()];
            if !angle_lt(a, b) {
                descents += 1;
            }
            if !det2(a, b).is_positive() {
                return Err(Error::InvalidFan(format!(
                    "angular gap from {a} to {b} is at least a half turn; \
                     the fan is not complete"
                )));
            }
        }
        if descents != 1 {
            return Err(Error::InvalidFan(
                "rays not sorted counterclockwise; list them by increasing \
                 angle"
                    .into(),
            ));
        }
        Ok(Fan { rays })
    }

    /// The fan of the projective plane: rays `(1,0)`, `(0,1)`, `(-1,-1)`.
    pub fn projective_plane() -> Fan {
        Fan::new(vec![IntVec::new(1, 0), IntVec::new(0, 1), IntVec::new(-1, -1)])
            .expect("valid fan")
    }

    /// The fan of the first Hirzebruch surface: rays `(0,1)`, `(-1,0)`,
    /// `(0,-1)`, `(1,1)`.
    pub fn hirzebruch_one() -> Fan {
        Fan::new(vec![
            IntVec::new(0, 1),
            IntVec::new(-1, 0),
            IntVec::new(0, -1),
            IntVec::new(1, 1),
        ])
        .expect("valid fan")
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid fan always has rays
    }

    /// The boundary map: the total lattice direction of a weight.
    pub fn theta(&self, m: &PWeight) -> IntVec {
        let mut out = IntVec::zero();
        for (w, ray) in m.0.iter().zip(&self.rays) {
            out = &out + &ray.scale(&BigInt::from(*w));
        }
        out
    }
}

impl TryFrom<Vec<IntVec>> for Fan {
    type Error = Error;
    fn try_from(rays: Vec<IntVec>) -> Result<Fan> {
        Fan::new(rays)
    }
}

impl From<Fan> for Vec<IntVec> {
    fn from(f: Fan) -> Vec<IntVec> {
        f.rays
    }
}

/// A square-free monomial in the mark variables, as a set of mark labels
/// from `1..=64`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MarkSet(u64);

impl MarkSet {
    pub fn empty() -> MarkSet {
        MarkSet(0)
    }

    /// The singleton `{i}`; labels are 1-based and at most 64.
    pub fn singleton(i: usize) -> MarkSet {
        assert!((1..=64).contains(&i), "mark label out of range: {i}");
        MarkSet(1 << (i - 1))
    }

    pub fn from_labels(labels: &[usize]) -> MarkSet {
        let mut s = MarkSet::empty();
        for &i in labels {
            s.0 |= MarkSet::singleton(i).0;
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        !(*self & MarkSet::singleton(i)).is_empty()
    }

    pub fn intersects(&self, other: &MarkSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Disjoint union; overlapping sets are the zero product.
    pub fn try_union(&self, other: &MarkSet) -> Result<MarkSet> {
        if self.intersects(other) {
            return Err(Error::MarkCollision);
        }
        Ok(MarkSet(self.0 | other.0))
    }

    pub fn labels(&self) -> Vec<usize> {
        (1..=64).filter(|&i| self.contains(i)).collect()
    }
}

impl std::ops::BitAnd for MarkSet {
    type Output = MarkSet;
    fn bitand(self, rhs: MarkSet) -> MarkSet {
        MarkSet(self.0 & rhs.0)
    }
}

impl fmt::Display for MarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for i in self.labels() {
            write!(f, "u{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for MarkSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        for &i in &labels {
            if !(1..=64).contains(&i) {
                return Err(serde::de::Error::custom(format!(
                    "mark label out of range: {i}"
                )));
            }
        }
        Ok(MarkSet::from_labels(&labels))
    }
}

/// A weight: a formal nonnegative combination of the fan's rays, indexed
/// compatibly with `Fan::rays`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PWeight(Vec<u64>);

impl PWeight {
    pub fn zero(num_rays: usize) -> PWeight {
        PWeight(vec![0; num_rays])
    }

    /// The basis weight `e_rho` of a single ray.
    pub fn basis(num_rays: usize, rho: usize) -> PWeight {
        assert!(rho < num_rays, "ray index out of range");
        let mut v = vec![0; num_rays];
        v[rho] = 1;
        PWeight(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// Total degree, i.e. the number of unmarked leaves contributing.
    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl std::ops::Add for &PWeight {
    type Output = PWeight;
    fn add(self, rhs: &PWeight) -> PWeight {
        assert_eq!(self.0.len(), rhs.0.len(), "weights over different fans");
        PWeight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for PWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for (rho, &w) in self.0.iter().enumerate() {
            if w == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if w == 1 {
                write!(f, "z{rho}")?;
            } else {
                write!(f, "z{rho}^{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite sum of terms `c * z^m * u_I` with exact rational coefficients.
///
/// Zero coefficients are never stored and keys are kept in a canonical
/// order, so structural equality is exact algebraic equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PotentialElement {
    terms: BTreeMap<(PWeight, MarkSet), Scalar>,
}

impl PotentialElement {
    pub fn zero() -> PotentialElement {
        PotentialElement::default()
    }

    pub fn monomial(m: PWeight, marks: MarkSet, coeff: Scalar) -> PotentialElement {
        let mut p = PotentialElement::zero();
        p.add_term(m, marks, coeff);
        p
    }

    /// The undeformed potential: the sum of one monomial per ray.
    pub fn hori_vafa(fan: &Fan) -> PotentialElement {
        let mut p = PotentialElement::zero();
        for rho in 0..fan.len() {
            p.add_term(
                PWeight::basis(fan.len(), rho),
                MarkSet::empty(),
                Scalar::one(),
            );
        }
        p
    }

    pub fn add_term(&mut self, m: PWeight, marks: MarkSet, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((m, marks)).or_insert_with(Scalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            // re-fetch the key: remove the now-zero entry
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PWeight, &MarkSet, &Scalar)> {
        self.terms.iter().map(|((m, i), c)| (m, i, c))
    }

    pub fn coeff(&self, m: &PWeight, marks: &MarkSet) -> Scalar {
        self.terms
            .get(&(m.clone(), *marks))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &PotentialElement) -> PotentialElement {
        let mut out = self.clone();
        for (m, i, c) in other.terms() {
            out.add_term(m.clone(), *i, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> PotentialElement {
        let mut out = PotentialElement::zero();
        for (m, i, c) in self.terms() {
            out.add_term(m.clone(), *i, c * k);
        }
        out
    }

    /// Ring product; terms with colliding marks vanish.
    pub fn mul(&self, other: &PotentialElement) -> PotentialElement {
        let mut out = PotentialElement::zero();
        for (m1, i1, c1) in self.terms() {
            for (m2, i2, c2) in other.terms() {
                if let Ok(marks) = i1.try_union(i2) {
                    out.add_term(m1 + m2, marks, c1 * c2);
                }
            }
        }
        out
    }

    /// Sets every mark variable to zero, keeping only unmarked terms.
    pub fn drop_marked(&self) -> PotentialElement {
        let mut out = PotentialElement::zero();
        for (m, i, c) in self.terms() {
            if i.is_empty() {
                out.add_term(m.clone(), *i, c.clone());
            }
        }
        out
    }
}

/// Shared pretty-printer for term sums.
macro_rules! fmt_sum_impl {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.is_zero() {
                return write!(f, "0");
            }
            let mut first = true;
            for piece in self.display_terms() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{piece}")?;
            }
            Ok(())
        }
    };
}

impl fmt::Display for PotentialElement {
    fmt_sum_impl!();
}

impl PotentialElement {
    fn display_terms(&self) -> Vec<String> {
        self.terms()
            .map(|(m, i, c)| {
                let mut s = String::new();
                if c != &Scalar::one() || (m.is_zero() && i.is_empty()) {
                    s.push_str(&c.to_string());
                }
                if !m.is_zero() {
                    if !s.is_empty() {
                        s.push('*');
                    }
                    s.push_str(&m.to_string());
                }
                if !i.is_empty() {
                    if !s.is_empty() {
                        s.push('*');
                    }
                    s.push_str(&i.to_string());
                }
                s
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    m: PWeight,
    marks: MarkSet,
    coeff: Scalar,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    n: Option<IntVec>,
}

impl Serialize for PotentialElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let docs: Vec<TermDoc> = self
            .terms()
            .map(|(m, i, c)| TermDoc {
                m: m.clone(),
                marks: *i,
                coeff: c.clone(),
                n: None,
            })
            .collect();
        docs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PotentialElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let docs = Vec::<TermDoc>::deserialize(d)?;
        let mut p = PotentialElement::zero();
        for t in docs {
            p.add_term(t.m, t.marks, t.coeff);
        }
        Ok(p)
    }
}

/// A finite sum of derivation terms `c * z^m * d_n * u_I` with `n`
/// orthogonal to the direction of `m` — the tropical Lie algebra.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LieElement {
    // key: (m, n, marks); merging is only valid with identical n
    terms: BTreeMap<(PWeight, IntVec, MarkSet), Scalar>,
}

impl LieElement {
    pub fn zero() -> LieElement {
        LieElement::default()
    }

    /// A single derivation term. Enforces `m` nonzero and `<n, theta(m)> = 0`.
    pub fn term(
        fan: &Fan,
        coeff: Scalar,
        m: PWeight,
        n: IntVec,
        marks: MarkSet,
    ) -> Result<LieElement> {
        if m.is_zero() {
            return Err(Error::InvalidInput(
                "derivation term with zero weight".into(),
            ));
        }
        let mbar = fan.theta(&m);
        if !n.dot(&mbar).is_zero() {
            return Err(Error::InvalidInput(format!(
                "derivation direction {n} is not orthogonal to the weight \
                 direction {mbar}"
            )));
        }
        let mut h = LieElement::zero();
        h.add_term(m, n, marks, coeff);
        Ok(h)
    }

    fn add_term(&mut self, m: PWeight, n: IntVec, marks: MarkSet, coeff: Scalar) {
        if coeff.is_zero() || n.is_zero() {
            return;
        }
        // The pair (n, coeff) is redundant: c d_{kn} = ck d_n. Store the
        // canonical representative with primitive n whose first nonzero
        // coordinate is positive, so that equal derivations merge (and
        // opposite ones cancel).
        let (mut n, content) = primitive(&n).expect("nonzero direction");
        let mut coeff = &coeff * &Scalar::from_bigint(content);
        if n.x.is_negative() || (n.x.is_zero() && n.y.is_negative()) {
            n = -&n;
            coeff = -&coeff;
        }
        let entry = self.terms.entry((m, n, marks)).or_insert_with(Scalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PWeight, &IntVec, &MarkSet, &Scalar)> {
        self.terms.iter().map(|((m, n, i), c)| (m, n, i, c))
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (m, n, i, c) in other.terms() {
            out.add_term(m.clone(), n.clone(), *i, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> LieElement {
        let mut out = LieElement::zero();
        for (m, n, i, c) in self.terms() {
            out.add_term(m.clone(), n.clone(), *i, c * k);
        }
        out
    }

    fn display_terms(&self) -> Vec<String> {
        self.terms()
            .map(|(m, n, i, c)| {
                let mut s = String::new();
                if c != &Scalar::one() {
                    s.push_str(&c.to_string());
                    s.push('*');
                }
                s.push_str(&format!("{m}*d{n}"));
                if !i.is_empty() {
                    s.push('*');
                    s.push_str(&i.to_string());
                }
                s
            })
            .collect()
    }
}

impl fmt::Display for LieElement {
    fmt_sum_impl!();
}

impl Serialize for LieElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let docs: Vec<TermDoc> = self
            .terms()
            .map(|(m, n, i, c)| TermDoc {
                m: m.clone(),
                marks: *i,
                coeff: c.clone(),
                n: Some(n.clone()),
            })
            .collect();
        docs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let docs = Vec::<TermDoc>::deserialize(d)?;
        let mut h = LieElement::zero();
        for t in docs {
            let n = t
                .n
                .ok_or_else(|| serde::de::Error::custom("derivation term missing n"))?;
            h.add_term(t.m, n, t.marks, t.coeff);
        }
        Ok(h)
    }
}

/// The Lie bracket
/// `[z^m d_n, z^m' d_n'] = z^{m+m'} d_{<n,mbar'> n' - <n',mbar> n}`,
/// extended bilinearly; terms with colliding marks vanish.
pub fn bracket(fan: &Fan, h1: &LieElement, h2: &LieElement) -> LieElement {
    let mut out = LieElement::zero();
    for (m1, n1, i1, c1) in h1.terms() {
        let mbar1 = fan.theta(m1);
        for (m2, n2, i2, c2) in h2.terms() {
            let Ok(marks) = i1.try_union(i2) else {
                continue;
            };
            let mbar2 = fan.theta(m2);
            let a = n1.dot(&mbar2); // <n, mbar'>
            let b = n2.dot(&mbar1); // <n', mbar>
            let n = &n2.scale(&a) - &n1.scale(&b);
            out.add_term(m1 + m2, n, marks, c1 * c2);
        }
    }
    out
}

/// Applies the ring automorphism `exp(sign * D)` to `f`, where `D` is the
/// derivation given by `log_theta` acting by
/// `z^m d_n (z^m') = <n, mbar'> z^{m+m'}`.
///
/// Every term of `log_theta` must carry marks, so that each application of
/// `D` strictly grows the mark sets and the series terminates.
///
/// ```
/// use tropical_lg::geom2d::{IntVec, Scalar};
/// use tropical_lg::ringalg::{
///     exp_apply, Fan, LieElement, MarkSet, PWeight, PotentialElement,
/// };
///
/// let fan = Fan::projective_plane();
/// // The wall automorphism with log z^{e_0} d_(0,1) u_1 ...
/// let h = LieElement::term(
///     &fan,
///     Scalar::one(),
///     PWeight::basis(3, 0),
///     IntVec::new(0, 1),
///     MarkSet::singleton(1),
/// )
/// .unwrap();
/// // ... sends z^{e_1} to z^{e_1} + z^{e_0 + e_1} u_1 and fixes z^{e_0}.
/// let zb = PotentialElement::monomial(PWeight::basis(3, 1), MarkSet::empty(), Scalar::one());
/// let out = exp_apply(&fan, &h, &zb, 1).unwrap();
/// assert_eq!(out.to_string(), "z1 + z0*z1*u1");
/// // The inverse automorphism undoes it exactly.
/// assert_eq!(exp_apply(&fan, &h, &out, -1).unwrap(), zb);
/// ```
pub fn exp_apply(
    fan: &Fan,
    log_theta: &LieElement,
    f: &PotentialElement,
    sign: i8,
) -> Result<PotentialElement> {
    for (_, _, marks, _) in log_theta.terms() {
        if marks.is_empty() {
            return Err(Error::NonNilpotent);
        }
    }
    let apply_d = |g: &PotentialElement| -> PotentialElement {
        let mut out = PotentialElement::zero();
        for (m, n, i, c) in log_theta.terms() {
            for (m2, i2, c2) in g.terms() {
                let Ok(marks) = i.try_union(i2) else {
                    continue;
                };
                let pair = n.dot(&fan.theta(m2));
                if pair.is_zero() {
                    continue;
                }
                out.add_term(m + m2, marks, &(c * c2) * &Scalar::from_bigint(pair));
            }
        }
        out
    };
    let sign = Scalar::from(i64::from(sign));
    let mut total = f.clone();
    let mut power = f.clone();
    let mut j: i64 = 0;
    loop {
        j += 1;
        power = apply_d(&power).scale(&(&sign / &Scalar::from(j)));
        if power.is_zero() {
            return Ok(total);
        }
        total = total.add(&power);
    }
}

/// The primitive clockwise normal of a nonzero tangent direction: the
/// primitive representative of `(t.y, -t.x)`.
pub fn clockwise_normal(t: &IntVec) -> Result<IntVec> {
    let (n, _) = primitive(&-&t.rot90_ccw())?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::projective_plane()
    }

    fn e(rho: usize) -> PWeight {
        PWeight::basis(3, rho)
    }

    fn u(i: usize) -> MarkSet {
        MarkSet::singleton(i)
    }

    #[test]
    fn fan_validation() {
        assert!(Fan::new(vec![IntVec::new(1, 0), IntVec::new(0, 1)]).is_err());
        assert!(Fan::new(vec![
            IntVec::new(2, 0),
            IntVec::new(0, 1),
            IntVec::new(-1, -1)
        ])
        .is_err());
        assert!(Fan::new(vec![
            IntVec::new(1, 0),
            IntVec::new(0, 1),
            IntVec::new(1, 0)
        ])
        .is_err()); // repeated ray
        assert!(Fan::new(vec![
            IntVec::new(0, 1),
            IntVec::new(1, 0),
            IntVec::new(-1, -1)
        ])
        .is_err()); // not sorted counterclockwise
        assert!(Fan::new(vec![
            IntVec::new(1, 0),
            IntVec::new(1, 1),
            IntVec::new(0, 1)
        ])
        .is_err()); // not complete: gap from (0,1) back to (1,0) exceeds pi
        assert!(Fan::hirzebruch_one().len() == 4);
    }

    #[test]
    fn theta_examples() {
        let fan = p2();
        assert_eq!(fan.theta(&(&e(0) + &e(1))), IntVec::new(1, 1));
        assert_eq!(fan.theta(&PWeight::zero(3)), IntVec::zero());
        let f1 = Fan::hirzebruch_one();
        let m = &PWeight::basis(4, 1) + &PWeight::basis(4, 3);
        assert_eq!(f1.theta(&m), IntVec::new(0, 1));
    }

    #[test]
    fn bracket_example() {
        let fan = p2();
        let h1 = LieElement::term(&fan, Scalar::one(), e(0), IntVec::new(0, 1), u(1)).unwrap();
        let h2 = LieElement::term(&fan, Scalar::one(), e(1), IntVec::new(-1, 0), u(2)).unwrap();
        let b = bracket(&fan, &h1, &h2);
        let expect = LieElement::term(
            &fan,
            Scalar::one(),
            &e(0) + &e(1),
            IntVec::new(-1, 1),
            u(1).try_union(&u(2)).unwrap(),
        )
        .unwrap();
        assert_eq!(b, expect);
    }

    #[test]
    fn bracket_antisymmetry_and_collision() {
        let fan = p2();
        let h = LieElement::term(&fan, Scalar::one(), e(0), IntVec::new(0, 1), u(1)).unwrap();
        assert!(bracket(&fan, &h, &h).is_zero());
        let h2 = LieElement::term(&fan, Scalar::one(), e(1), IntVec::new(-1, 0), u(1)).unwrap();
        assert!(bracket(&fan, &h, &h2).is_zero()); // u1^2 = 0
    }

    #[test]
    fn exp_apply_examples() {
        let fan = p2();
        let h = LieElement::term(&fan, Scalar::one(), e(0), IntVec::new(0, 1), u(1)).unwrap();
        let zb = PotentialElement::monomial(e(1), MarkSet::empty(), Scalar::one());
        let out = exp_apply(&fan, &h, &zb, 1).unwrap();
        let mut expect = zb.clone();
        expect.add_term(&e(0) + &e(1), u(1), Scalar::one());
        assert_eq!(out, expect);

        let za = PotentialElement::monomial(e(0), MarkSet::empty(), Scalar::one());
        assert_eq!(exp_apply(&fan, &h, &za, 1).unwrap(), za);

        let back = exp_apply(&fan, &h, &out, -1).unwrap();
        assert_eq!(back, zb);
    }

    #[test]
    fn exp_apply_requires_marks() {
        let fan = p2();
        let h = LieElement::term(
            &fan,
            Scalar::one(),
            e(0),
            IntVec::new(0, 1),
            MarkSet::empty(),
        )
        .unwrap();
        let f = PotentialElement::hori_vafa(&fan);
        assert!(matches!(exp_apply(&fan, &h, &f, 1), Err(Error::NonNilpotent)));
    }

    #[test]
    fn exp_is_ring_automorphism() {
        let fan = p2();
        let h = LieElement::term(&fan, Scalar::from(2), e(0), IntVec::new(0, 1), u(1)).unwrap();
        let f = PotentialElement::hori_vafa(&fan);
        let g = PotentialElement::monomial(e(1), u(2), Scalar::from(3));
        let lhs = exp_apply(&fan, &h, &f.mul(&g), 1).unwrap();
        let rhs = exp_apply(&fan, &h, &f, 1)
            .unwrap()
            .mul(&exp_apply(&fan, &h, &g, 1).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn clockwise_normal_examples() {
        assert_eq!(
            clockwise_normal(&IntVec::new(-1, 0)).unwrap(),
            IntVec::new(0, 1)
        );
        assert_eq!(
            clockwise_normal(&IntVec::new(0, -1)).unwrap(),
            IntVec::new(-1, 0)
        );
        assert_eq!(
            clockwise_normal(&IntVec::new(-2, -2)).unwrap(),
            IntVec::new(-1, 1)
        );
        // n . t = 0 and det2(t, ccw-normal) > 0 for every nonzero t
        for t in [
            IntVec::new(1, 0),
            IntVec::new(-3, 5),
            IntVec::new(0, 7),
            IntVec::new(-2, -2),
        ] {
            let n = clockwise_normal(&t).unwrap();
            assert!(n.dot(&t).is_zero());
            assert!(det2(&t, &-&n).is_positive());
        }
    }

    #[test]
    fn mark_set_semantics() {
        let a = MarkSet::from_labels(&[1, 3]);
        let b = MarkSet::from_labels(&[2]);
        assert_eq!(a.try_union(&b).unwrap().labels(), vec![1, 2, 3]);
        assert!(a.try_union(&a).is_err());
        assert_eq!(a.len(), 2);
        assert!(a.contains(3) && !a.contains(2));
    }

    #[test]
    fn potential_serde_round_trip() {
        let fan = p2();
        let mut p = PotentialElement::hori_vafa(&fan);
        p.add_term(&e(0) + &e(1), u(1), Scalar::from(2));
        let s = serde_json::to_string(&p).unwrap();
        let back: PotentialElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
