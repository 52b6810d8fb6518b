//! End-to-end acceptance suite. Each test covers one criterion and prints
//! a single pass line; a failing criterion fails its test.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropical_lg::error::Error;
use tropical_lg::families::{
    brute_force_potential, enumerate_families, enumerate_families_parallel, potential_at,
    FamilySet,
};
use tropical_lg::geom2d::{primitive, IntVec, Point, Scalar};
use tropical_lg::ringalg::{
    bracket, exp_apply, Fan, LieElement, MarkSet, PWeight, PotentialElement,
};
use tropical_lg::scattering::{
    build_diagram, build_diagram_with, check_joint_consistency, check_wall_crossing_with,
    Diagram, NormalConvention,
};

fn rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Scalar {
    Scalar::ratio(rng.gen_range(lo..=hi), den)
}

/// A random marked-point configuration accepted by the enumeration.
fn random_config(fan: &Fan, n: usize, rng: &mut ChaCha8Rng) -> (Vec<Point>, FamilySet) {
    for _ in 0..100 {
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rat(rng, -300, 300, 97), rat(rng, -300, 300, 97)))
            .collect();
        if (1..pts.len()).any(|i| pts[..i].contains(&pts[i])) {
            continue;
        }
        match enumerate_families(fan, &pts) {
            Ok(fs) => return (pts, fs),
            Err(e) if e.is_non_generic() => continue,
            Err(e) => panic!("unexpected enumeration error: {e}"),
        }
    }
    panic!("no generic configuration found in 100 tries");
}

/// A random stop at which the potential is defined.
fn generic_q(fs: &FamilySet, rng: &mut ChaCha8Rng) -> Point {
    for _ in 0..200 {
        let q = Point::new(rat(rng, -9970, 9970, 997), rat(rng, -9970, 9970, 997));
        if potential_at(fs, &q).is_ok() {
            return q;
        }
    }
    panic!("no generic stop found in 200 tries");
}

#[test]
fn criterion_1_hori_vafa_degeneration() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut fans = vec![Fan::projective_plane(), Fan::hirzebruch_one()];
    // a random complete 5-ray fan
    'outer: loop {
        let mut rays: Vec<IntVec> = vec![];
        while rays.len() < 5 {
            let v = IntVec::new(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            if v.is_zero() {
                continue;
            }
            let (p, _) = primitive(&v).unwrap();
            if !rays.contains(&p) {
                rays.push(p);
            }
        }
        rays.sort_by(|a, b| {
            let ang = |v: &IntVec| {
                let x: f64 = v.x.to_string().parse().unwrap();
                let y: f64 = v.y.to_string().parse().unwrap();
                y.atan2(x)
            };
            ang(a).partial_cmp(&ang(b)).unwrap()
        });
        if let Ok(fan) = Fan::new(rays) {
            fans.push(fan);
            break 'outer;
        }
    }
    for fan in &fans {
        let fs = enumerate_families(fan, &[]).unwrap();
        let d = build_diagram(&fs);
        assert!(d.walls().is_empty());
        assert!(d.joints().is_empty());
        let hv = PotentialElement::hori_vafa(fan);
        for _ in 0..10 {
            let q = generic_q(&fs, &mut rng);
            assert_eq!(potential_at(&fs, &q).unwrap(), hv);
        }
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "criterion 1 too slow");
    println!("criterion 1: pass");
}

#[test]
fn criterion_2_one_pointed_fixture() {
    let start = Instant::now();
    let fan = Fan::projective_plane();
    let pts = [Point::from_ints(0, 0)];
    let fs = enumerate_families(&fan, &pts).unwrap();
    assert_eq!(fs.mi0().count(), 3);
    assert_eq!(
        fs.mi2().filter(|f| f.stats.k == 2 && f.stats.d == 1).count(),
        6
    );
    let d = build_diagram(&fs);
    assert_eq!(d.joints().len(), 0);

    // the two equal-monomial loci abut along the diagonal, which is not a
    // wall
    let m_ab = &PWeight::basis(3, 0) + &PWeight::basis(3, 1);
    let loci: Vec<_> = fs
        .mi2()
        .filter(|f| f.stats.m == m_ab)
        .map(|f| &f.locus)
        .collect();
    assert_eq!(loci.len(), 2);
    let diag = Point::from_ints(-2, -2);
    assert!(loci.iter().all(|c| c.contains(&diag, false)));
    assert!(d.walls().iter().all(|w| !w.support.contains(&diag, false)));

    // chamber table, re-checked against the oracle
    let hv = PotentialElement::hori_vafa(&fan);
    let with = |r1: usize, r2: usize| {
        hv.add(&PotentialElement::monomial(
            &PWeight::basis(3, r1) + &PWeight::basis(3, r2),
            MarkSet::singleton(1),
            Scalar::one(),
        ))
    };
    let table = [
        (Point::from_ints(-2, 1), with(0, 2)),  // upper sector
        (Point::from_ints(-1, -2), with(0, 1)), // south-west sector
        (Point::from_ints(3, 1), with(1, 2)),   // east sector
    ];
    for (q, expect) in &table {
        assert_eq!(&potential_at(&fs, q).unwrap(), expect);
        assert_eq!(&brute_force_potential(&fan, &pts, q).unwrap(), expect);
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "criterion 2 too slow");
    println!("criterion 2: pass");
}

/// The shared random configurations of criteria 3 and 4: three of n = 2
/// and two of n = 3 on each surface, ten in total.
fn consistency_configs() -> Vec<(Fan, Vec<Point>, FamilySet, Diagram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut out = vec![];
    for fan in [Fan::projective_plane(), Fan::hirzebruch_one()] {
        for (n, reps) in [(2, 3), (3, 2)] {
            for _ in 0..reps {
                let (pts, fs) = random_config(&fan, n, &mut rng);
                let d = build_diagram(&fs);
                out.push((fan.clone(), pts, fs, d));
            }
        }
    }
    out
}

#[test]
fn criterion_3_joint_consistency() {
    let start = Instant::now();
    let mut joints_total = 0;
    for (_, pts, _, d) in consistency_configs() {
        for j in 0..d.joints().len() {
            assert!(
                check_joint_consistency(&d, j),
                "inconsistent joint {:?} for points {pts:?}",
                d.joints()[j].point
            );
            joints_total += 1;
        }
    }
    assert!(joints_total > 0, "no joints arose; configurations too trivial");
    assert!(start.elapsed().as_secs_f64() < 60.0, "criterion 3 too slow");
    println!("criterion 3: pass ({joints_total} joints)");
}

#[test]
fn criterion_4_wall_crossing() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (_, pts, fs, d) in consistency_configs() {
        for _ in 0..20 {
            let q = generic_q(&fs, &mut rng);
            let q2 = generic_q(&fs, &mut rng);
            let ok = check_wall_crossing_with(&d, &fs, &q, &q2)
                .unwrap_or_else(|e| panic!("transport failed for {pts:?}: {e}"));
            assert!(ok, "wall-crossing identity failed: {pts:?}, {q} -> {q2}");
        }
    }
    assert!(start.elapsed().as_secs_f64() < 60.0, "criterion 4 too slow");
    println!("criterion 4: pass");
}

#[test]
fn criterion_5_oracle_equivalence() {
    let start = Instant::now();
    let fan = Fan::projective_plane();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in [1usize, 2] {
        let (pts, fs) = random_config(&fan, n, &mut rng);
        let mut checked = 0;
        while checked < 10 {
            let q = generic_q(&fs, &mut rng);
            match brute_force_potential(&fan, &pts, &q) {
                Ok(w) => {
                    assert_eq!(w, potential_at(&fs, &q).unwrap(), "oracle disagrees at {q}");
                    checked += 1;
                }
                // the oracle's stratification is finer; redraw
                Err(e) if e.is_non_generic() => continue,
                Err(e) => panic!("oracle error: {e}"),
            }
        }
    }
    assert!(start.elapsed().as_secs_f64() < 120.0, "criterion 5 too slow");
    println!("criterion 5: pass");
}

fn random_lie(fan: &Fan, rng: &mut ChaCha8Rng, marks_from: u64) -> LieElement {
    let mut h = LieElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let mut entries = vec![0u64; fan.len()];
        loop {
            for e in entries.iter_mut() {
                *e = rng.gen_range(0..=2);
            }
            if entries.iter().any(|&e| e > 0) {
                break;
            }
        }
        let mut m = PWeight::zero(fan.len());
        for (rho, &e) in entries.iter().enumerate() {
            for _ in 0..e {
                m = &m + &PWeight::basis(fan.len(), rho);
            }
        }
        let mbar = fan.theta(&m);
        let n = if mbar.is_zero() {
            loop {
                let v = IntVec::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                if !v.is_zero() {
                    break v;
                }
            }
        } else {
            let k = num::BigInt::from(rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 });
            mbar.rot90_ccw().scale(&k)
        };
        let marks = loop {
            let labels: Vec<usize> = (1..=marks_from as usize)
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            if !labels.is_empty() {
                break MarkSet::from_labels(&labels);
            }
        };
        let coeff = loop {
            let c = Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3));
            if !c.is_zero() {
                break c;
            }
        };
        h = h.add(&LieElement::term(fan, coeff, m, n, marks).unwrap());
    }
    h
}

fn random_potential(fan: &Fan, rng: &mut ChaCha8Rng, marks_from: u64) -> PotentialElement {
    let mut f = PotentialElement::hori_vafa(fan);
    for _ in 0..rng.gen_range(1..=3) {
        let mut m = PWeight::zero(fan.len());
        for rho in 0..fan.len() {
            for _ in 0..rng.gen_range(0..=2) {
                m = &m + &PWeight::basis(fan.len(), rho);
            }
        }
        let labels: Vec<usize> = (1..=marks_from as usize)
            .filter(|_| rng.gen_bool(0.3))
            .collect();
        f.add_term(
            m,
            MarkSet::from_labels(&labels),
            Scalar::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=2)),
        );
    }
    f
}

#[test]
fn criterion_6_algebra_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let fans = [Fan::projective_plane(), Fan::hirzebruch_one()];
    for round in 0..200 {
        let fan = &fans[round % 2];
        let a = random_lie(fan, &mut rng, 4);
        let b = random_lie(fan, &mut rng, 4);
        let c = random_lie(fan, &mut rng, 4);
        // antisymmetry
        assert!(bracket(fan, &a, &b).add(&bracket(fan, &b, &a)).is_zero());
        // Jacobi
        let jac = bracket(fan, &bracket(fan, &a, &b), &c)
            .add(&bracket(fan, &bracket(fan, &b, &c), &a))
            .add(&bracket(fan, &bracket(fan, &c, &a), &b));
        assert!(jac.is_zero());
        // exp is a ring automorphism
        let f = random_potential(fan, &mut rng, 4);
        let g = random_potential(fan, &mut rng, 4);
        let lhs = exp_apply(fan, &a, &f.mul(&g), 1).unwrap();
        let rhs = exp_apply(fan, &a, &f, 1)
            .unwrap()
            .mul(&exp_apply(fan, &a, &g, 1).unwrap());
        assert_eq!(lhs, rhs);
        // exp then its inverse is the identity
        let back = exp_apply(fan, &a, &exp_apply(fan, &a, &f, 1).unwrap(), -1).unwrap();
        assert_eq!(back, f);
        // same-direction wall factors commute
        let rho = rng.gen_range(0..fan.len());
        let mbar = fan.theta(&PWeight::basis(fan.len(), rho));
        let n = mbar.rot90_ccw();
        let mk = |k: u64, mark: usize, n: IntVec, rng: &mut ChaCha8Rng| {
            let mut m = PWeight::zero(fan.len());
            for _ in 0..k {
                m = &m + &PWeight::basis(fan.len(), rho);
            }
            LieElement::term(
                fan,
                Scalar::from(rng.gen_range(1..=3i64)),
                m,
                n,
                MarkSet::singleton(mark),
            )
            .unwrap()
        };
        let h1 = mk(rng.gen_range(1..=3), 1, n.clone(), &mut rng);
        let h2 = mk(rng.gen_range(1..=3), 2, -&n, &mut rng);
        let one_way =
            exp_apply(fan, &h2, &exp_apply(fan, &h1, &f, 1).unwrap(), 1).unwrap();
        let other_way =
            exp_apply(fan, &h1, &exp_apply(fan, &h2, &f, 1).unwrap(), 1).unwrap();
        assert_eq!(one_way, other_way);
    }
    assert!(start.elapsed().as_secs_f64() < 10.0, "criterion 6 too slow");
    println!("criterion 6: pass (1000 checks)");
}

#[test]
fn criterion_7_negative_controls() {
    let fan = Fan::projective_plane();
    let pts = [Point::from_ints(0, 0), Point::from_ints(-1, 2)];
    let fs = enumerate_families(&fan, &pts).unwrap();
    let d = build_diagram(&fs);

    // dropping the scattered wall breaks joint consistency
    let m_ab = &PWeight::basis(3, 0) + &PWeight::basis(3, 1);
    let k = d
        .walls()
        .iter()
        .position(|w| w.m == m_ab && w.marks.len() == 2)
        .expect("scattered wall exists");
    let broken = d.drop_wall(k).unwrap();
    let bad_joint = (0..broken.joints().len())
        .any(|j| !check_joint_consistency(&broken, j));
    assert!(bad_joint, "dropping the scattered wall went unnoticed");

    // and also breaks wall-crossing across a pair straddling that wall
    let q = Point::new(Scalar::from(-3), Scalar::ratio(-8, 7));
    let q2 = Point::new(Scalar::from(-3), Scalar::ratio(-22, 7));
    assert!(check_wall_crossing_with(&d, &fs, &q, &q2).unwrap());
    assert!(!check_wall_crossing_with(&broken, &fs, &q, &q2).unwrap());

    // flipping every normal while keeping the crossing signs breaks
    // wall-crossing
    let qf = Point::new(Scalar::ratio(-7, 2), Scalar::ratio(-31, 7));
    let qf2 = Point::new(Scalar::from(4), Scalar::ratio(10, 3));
    assert!(check_wall_crossing_with(&d, &fs, &qf, &qf2).unwrap());
    let flipped = build_diagram_with(&fs, NormalConvention::Counterclockwise);
    assert!(!check_wall_crossing_with(&flipped, &fs, &qf, &qf2).unwrap());
    println!("criterion 7: pass");
}

#[test]
fn criterion_8_determinism_and_performance() {
    let fan = Fan::projective_plane();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let (pts, _) = random_config(&fan, 3, &mut rng);
    let start = Instant::now();
    let serial = enumerate_families(&fan, &pts).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "enumeration took {elapsed:.1}s");
    let serial2 = enumerate_families(&fan, &pts).unwrap();
    let parallel = enumerate_families_parallel(&fan, &pts).unwrap();
    let bytes = serde_json::to_vec(&serial).unwrap();
    assert_eq!(bytes, serde_json::to_vec(&serial2).unwrap());
    assert_eq!(bytes, serde_json::to_vec(&parallel).unwrap());
    println!("criterion 8: pass ({elapsed:.2}s for n = 3)");
}

#[test]
fn enumeration_rejects_degenerate_input() {
    let fan = Fan::projective_plane();
    let pts = [Point::from_ints(1, 1), Point::from_ints(1, 1)];
    assert!(matches!(
        enumerate_families(&fan, &pts),
        Err(Error::InvalidInput(_))
    ));
}
