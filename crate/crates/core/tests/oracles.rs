//! Cross-checks against test-local brute force, independent of the
//! library's reflection and membership paths.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_rational::Rational64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weylkit::hull::{HullOracle, LatticeBox};
use weylkit::*;

const CAP: usize = 2_000_000;

fn sys(label: &str) -> RootSystem {
    build_root_system(label.parse().unwrap())
}

fn lv(c: &[i64]) -> LatticeVector {
    Vector::new(c.to_vec())
}

/// Orbit by BFS, reflecting with the raw Cartan rows.
fn brute_orbit(a: &[Vec<i64>], u: &[i64]) -> BTreeSet<Vec<i64>> {
    let n = a.len();
    let mut seen = HashSet::from([u.to_vec()]);
    let mut queue = VecDeque::from([u.to_vec()]);
    while let Some(v) = queue.pop_front() {
        for i in 0..n {
            let p: i64 = (0..n).map(|j| a[i][j] * v[j]).sum();
            let mut w = v.clone();
            w[i] -= p;
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().collect()
}

fn brute_dominant(a: &[Vec<i64>], u: &[i64]) -> Vec<i64> {
    let n = a.len();
    let dominant: Vec<_> = brute_orbit(a, u)
        .into_iter()
        .filter(|v| (0..n).all(|i| (0..n).map(|j| a[i][j] * v[j]).sum::<i64>() >= 0))
        .collect();
    assert_eq!(dominant.len(), 1);
    dominant[0].clone()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn weyl_orders_match_closed_forms() {
    for n in 1..=5 {
        assert_eq!(weyl_group_order(&sys(&format!("A{n}")), CAP).unwrap(), factorial(n + 1));
    }
    for n in 2..=5 {
        assert_eq!(weyl_group_order(&sys(&format!("B{n}")), CAP).unwrap(), (1 << n) * factorial(n));
    }
    for n in 3..=5 {
        assert_eq!(weyl_group_order(&sys(&format!("C{n}")), CAP).unwrap(), (1 << n) * factorial(n));
    }
    for n in 4..=6 {
        assert_eq!(weyl_group_order(&sys(&format!("D{n}")), CAP).unwrap(), (1 << (n - 1)) * factorial(n));
    }
    assert_eq!(weyl_group_order(&sys("G2"), CAP).unwrap(), 12);
    assert_eq!(weyl_group_order(&sys("F4"), CAP).unwrap(), 1152);
    assert_eq!(weyl_group_order(&sys("E6"), CAP).unwrap(), 51840);
}

#[test]
fn dominant_rep_of_negative_simple_root() {
    let a2 = sys("A2");
    let expected = brute_dominant(a2.cartan().rows(), &[-1, 0]);
    assert_eq!(expected, vec![1, 1]);
    assert_eq!(a2.dominant_representative(&lv(&[-1, 0])).0, lv(&expected));
}

#[test]
fn orbit_matches_brute_force() {
    for (label, u) in [("A2", vec![1, 1]), ("G2", vec![1, 0]), ("B3", vec![1, 2, 2]), ("F4", vec![1, 2, 3, 2])] {
        let s = sys(label);
        let ours: BTreeSet<Vec<i64>> = weyl_orbit(&s, &lv(&u), CAP)
            .unwrap()
            .members
            .into_iter()
            .map(|v| v.into_coords())
            .collect();
        assert_eq!(ours, brute_orbit(s.cartan().rows(), &u), "{label}");
    }
    assert_eq!(brute_orbit(sys("A2").cartan().rows(), &[1, 1]).len(), 6);
    assert_eq!(brute_orbit(sys("G2").cartan().rows(), &[1, 0]).len(), 6);
}

#[test]
fn a2_hexagon_by_explicit_half_spaces() {
    // Conv{±α1, ±α2, ±(α1+α2)} = {|a| ≤ 1, |b| ≤ 1, |a − b| ≤ 1}
    let a2 = sys("A2");
    let x = lv(&[1, 1]);
    let inside = |a: Rational64, b: Rational64| {
        let one = Rational64::from_integer(1);
        a.abs() <= one && b.abs() <= one && (a - b).abs() <= one
    };
    let mut count = 0;
    for p in -8..=8 {
        for q in -8..=8 {
            let (a, b) = (Rational64::new(p, 4), Rational64::new(q, 4));
            let qy = HullQuery::new(&a2, x.clone(), Vector::new(vec![a, b])).unwrap();
            assert_eq!(hull_contains_fast(&a2, &qy), inside(a, b), "({a}, {b})");
            if p % 4 == 0 && q % 4 == 0 && inside(a, b) {
                count += 1;
            }
        }
    }
    assert_eq!(count, 7);
    assert_eq!(enumerate_lattice_points(&a2, &x, CAP).unwrap().len(), 7);
    let q = HullQuery::new(&a2, x.clone(), lv(&[2, 0]).to_rational()).unwrap();
    assert!(!hull_contains_oracle(&a2, &q, CAP).unwrap());
}

#[test]
fn lattice_points_match_oracle_scan() {
    for (label, x) in [("B3", vec![1, 2, 2]), ("G2", vec![2, 3]), ("C3", vec![1, 2, 1]), ("A3", vec![1, 1, 1])] {
        let s = sys(label);
        let x = lv(&x);
        let oracle = HullOracle::new(&s, CAP).unwrap();
        let bx = weyl_orbit(&s, &x, CAP).unwrap().bounding_box();
        let m = bx.hi.iter().copied().max().unwrap() + 1;
        let wide = LatticeBox::new(vec![-m; s.rank()], vec![m; s.rank()]);
        let brute: BTreeSet<LatticeVector> = wide
            .iter()
            .map(Vector::new)
            .filter(|v: &LatticeVector| oracle.contains(&HullQuery::new(&s, x.clone(), v.to_rational()).unwrap()))
            .collect();
        assert_eq!(enumerate_lattice_points(&s, &x, CAP).unwrap(), brute, "{label}");
    }
}

#[test]
fn line_interval_matches_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for label in ["A2", "B3", "G2", "C3"] {
        let s = sys(label);
        let n = s.rank();
        for _ in 0..40 {
            let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            let x = s.dominant_representative(&lv(&raw)).0;
            let base: RationalVector =
                Vector::new((0..n).map(|_| Rational64::new(rng.gen_range(-8..=8), rng.gen_range(1..=2))).collect());
            let dir = rng.gen_range(0..n);
            let iv = line_meets_hull(&s, &x, &base, dir, CAP).unwrap();
            // endpoint denominators divide 2·|⟨w·α, ϖ_i⟩| ≤ 2·6
            for k in -12 * 60..=12 * 60 {
                let t = Rational64::new(k, 60);
                let p = base.add_root(dir, t);
                let member = hull_contains_fast(&s, &HullQuery::new(&s, x.clone(), p).unwrap());
                assert_eq!(member, iv.is_some_and(|iv| iv.contains(t)), "{label} x={x} base={base} t={t}");
            }
        }
    }
}

#[test]
fn a2_line_spot_value() {
    let a2 = sys("A2");
    let x = lv(&[1, 1]);
    let base = Vector::new(vec![Rational64::new(3, 2), Rational64::from_integer(1)]);
    let iv = line_meets_hull(&a2, &x, &base, 0, CAP).unwrap();
    let sampled = (-240..=240).any(|k| {
        let p = base.add_root(0, Rational64::new(k, 60));
        hull_contains_fast(&a2, &HullQuery::new(&a2, x.clone(), p).unwrap())
    });
    assert_eq!(iv.is_some(), sampled);
    assert!(sampled);
}

#[test]
fn far_line_still_decided_correctly() {
    // base pushed far along the fiber: the same line, so the same answer
    let b3 = sys("B3");
    let x = lv(&[1, 2, 2]);
    for dir in 0..3 {
        let near = line_meets_hull(&b3, &x, &x.to_rational(), dir, CAP).unwrap();
        let far_base = x.to_rational().add_root(dir, Rational64::from_integer(50));
        let far = line_meets_hull(&b3, &x, &far_base, dir, CAP).unwrap().unwrap();
        let near = near.unwrap();
        assert_eq!(far.lo + Rational64::from_integer(50), near.lo);
        assert_eq!(far.hi + Rational64::from_integer(50), near.hi);
    }
}

#[test]
fn chain_reaches_the_brute_force_dominant_point() {
    for (label, b) in [("G2", 4), ("C3", 4), ("C4", 3), ("F4", 4), ("C5", 3)] {
        let s = sys(label);
        for inst in enumerate_lemma_instances(&s, b, CAP).unwrap() {
            let r = dominance_chain(&inst).unwrap();
            assert_eq!(r.w0z.coords(), brute_dominant(s.cartan().rows(), inst.z.coords()).as_slice());
        }
    }
}

#[test]
fn rhs_cosets_match_sampled_fibers() {
    for (label, mu) in [("A2", vec![1, 1]), ("G2", vec![2, 3]), ("B3", vec![1, 2, 2])] {
        let s = sys(label);
        let mu = lv(&mu);
        for i0 in 0..s.rank() {
            let rhs = wall_cosets_rhs(&s, &mu, i0, CAP).unwrap();
            let bx = weyl_orbit(&s, &mu, CAP).unwrap().bounding_box();
            let mut keys = bx.clone();
            keys.lo[i0] = 0;
            keys.hi[i0] = 0;
            let sampled: BTreeSet<Vec<i64>> = keys
                .iter()
                .filter(|c| {
                    (-20 * 60..=20 * 60).any(|k| {
                        let p = lv(c).to_rational().add_root(i0, Rational64::new(k, 60));
                        hull_contains_fast(&s, &HullQuery::new(&s, mu.clone(), p).unwrap())
                    })
                })
                .map(|c| c.iter().enumerate().filter(|&(k, _)| k != i0).map(|(_, &v)| v).collect())
                .collect();
            let ours: BTreeSet<Vec<i64>> = rhs.into_iter().map(|c| c.key).collect();
            assert_eq!(ours, sampled, "{label} i0={i0}");
        }
    }
}
