//! Weyl orbits and membership in the orbit polytope `Conv(W·x)`.
//!
//! Two independent membership routes are provided. [`hull_contains_fast`]
//! moves the query point to the dominant chamber and compares coweight
//! coordinates with those of `x`. [`HullOracle`] enumerates the whole Weyl
//! group as reflection words and checks every inequality
//! `⟨w·v, ϖ_i⟩ ≤ ⟨x, ϖ_i⟩`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::rootsys::{LatticeVector, RationalVector, RootError, RootSystem, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("{what} exceeded cap {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("x = {0} is not dominant")]
    NotDominant(String),
}

/// The orbit `W·u` together with its dominant point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSet {
    pub base: LatticeVector,
    pub members: BTreeSet<LatticeVector>,
    pub cap: usize,
}

impl OrbitSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Per-coordinate `[min, max]` over the orbit.
    pub fn bounding_box(&self) -> LatticeBox {
        let n = self.base.len();
        let mut lo = self.base.coords().to_vec();
        let mut hi = lo.clone();
        for m in &self.members {
            for k in 0..n {
                lo[k] = lo[k].min(m.coords()[k]);
                hi[k] = hi[k].max(m.coords()[k]);
            }
        }
        LatticeBox::new(lo, hi)
    }
}

/// BFS closure of `{u}` under the simple reflections.
pub fn weyl_orbit(spec: &RootSystem, u: &LatticeVector, cap: usize) -> Result<OrbitSet, HullError> {
    spec.check_dim(u)?;
    let mut seen: HashSet<LatticeVector> = HashSet::from([u.clone()]);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(v) = queue.pop_front() {
        for i in 0..spec.rank() {
            let mut w = v.clone();
            spec.reflect_raw(w.coords_mut(), i);
            if !seen.contains(&w) {
                if seen.len() >= cap {
                    return Err(HullError::CapExceeded { what: "orbit size", cap });
                }
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    let (base, _) = spec.dominant_representative(u);
    Ok(OrbitSet {
        base,
        members: seen.into_iter().collect(),
        cap,
    })
}

/// `|W|`, as the orbit size of a vector with trivial stabilizer.
pub fn weyl_group_order(spec: &RootSystem, cap: usize) -> Result<usize, HullError> {
    Ok(weyl_orbit(spec, &spec.strictly_dominant_vector(), cap)?.len())
}

/// Every element of `W`, stored as a BFS tree over the regular orbit:
/// element `e` equals `s_{letter[e]} · parent[e]`, element `0` is the identity.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    parent: Vec<usize>,
    letter: Vec<usize>,
}

impl WeylGroup {
    pub fn enumerate(spec: &RootSystem, cap: usize) -> Result<Self, HullError> {
        let rho = spec.strictly_dominant_vector();
        let mut index = std::collections::HashMap::from([(rho.clone(), 0usize)]);
        let mut points = vec![rho];
        let mut parent = vec![usize::MAX];
        let mut letter = vec![usize::MAX];
        let mut head = 0;
        while head < points.len() {
            for i in 0..spec.rank() {
                let mut w = points[head].clone();
                spec.reflect_raw(w.coords_mut(), i);
                if !index.contains_key(&w) {
                    if points.len() >= cap {
                        return Err(HullError::CapExceeded { what: "Weyl group order", cap });
                    }
                    index.insert(w.clone(), points.len());
                    points.push(w);
                    parent.push(head);
                    letter.push(i);
                }
            }
            head += 1;
        }
        Ok(WeylGroup {
            rank: spec.rank(),
            parent,
            letter,
        })
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    /// Reduced word of element `e`, first letter applied first.
    pub fn word(&self, mut e: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while e != 0 {
            w.push(self.letter[e]);
            e = self.parent[e];
        }
        w.reverse();
        w
    }

    /// `w·v` for every group element, concatenated in element order.
    pub fn images<T: Scalar>(&self, spec: &RootSystem, v: &[T]) -> Vec<T> {
        let n = self.rank;
        let mut out: Vec<T> = Vec::with_capacity(self.order() * n);
        out.extend_from_slice(v);
        for e in 1..self.order() {
            let p = self.parent[e];
            let start = out.len();
            out.extend_from_within(p * n..(p + 1) * n);
            spec.reflect_raw(&mut out[start..], self.letter[e]);
        }
        out
    }
}

/// A validated membership query: `x` dominant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullQuery {
    pub x: LatticeVector,
    pub v: RationalVector,
}

impl HullQuery {
    pub fn new(spec: &RootSystem, x: LatticeVector, v: RationalVector) -> Result<Self, HullError> {
        spec.check_dim(&x)?;
        spec.check_dim(&v)?;
        if !spec.is_dominant(&x) {
            return Err(HullError::NotDominant(x.to_string()));
        }
        Ok(HullQuery { x, v })
    }
}

/// Membership via the dominant representative: `v ∈ Conv(W·x)` iff the
/// dominant point of `W·v` is coordinatewise below `x`.
pub fn hull_contains_fast(spec: &RootSystem, q: &HullQuery) -> bool {
    let (mut v, d) = q.v.clear_denominators();
    contains_scaled(spec, &q.x, v.coords_mut(), d)
}

/// Fast membership for a lattice point.
pub fn lattice_point_in_hull(spec: &RootSystem, x: &LatticeVector, v: &LatticeVector) -> bool {
    let mut c = v.coords().to_vec();
    contains_scaled(spec, x, &mut c, 1)
}

/// Tests whether `v/d` lies in `Conv(W·x)`; `v` is overwritten.
fn contains_scaled(spec: &RootSystem, x: &LatticeVector, v: &mut [i64], d: i64) -> bool {
    spec.dominant_raw(v);
    v.iter().zip(x.coords()).all(|(&a, &b)| a <= b * d)
}

/// Half-space oracle over an enumerated Weyl group.
#[derive(Debug, Clone)]
pub struct HullOracle<'a> {
    spec: &'a RootSystem,
    group: WeylGroup,
}

/// A closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    #[serde(with = "crate::report::rational")]
    pub lo: Rational64,
    #[serde(with = "crate::report::rational")]
    pub hi: Rational64,
}

impl Interval {
    pub fn contains(&self, t: Rational64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

impl<'a> HullOracle<'a> {
    pub fn new(spec: &'a RootSystem, cap: usize) -> Result<Self, HullError> {
        Ok(HullOracle {
            spec,
            group: WeylGroup::enumerate(spec, cap)?,
        })
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    /// Checks all `|W|·n` inequalities `⟨w·v, ϖ_i⟩ ≤ ⟨x, ϖ_i⟩`.
    pub fn contains(&self, q: &HullQuery) -> bool {
        let (v, d) = q.v.clear_denominators();
        let n = self.spec.rank();
        let images = self.group.images(self.spec, v.coords());
        images
            .chunks_exact(n)
            .all(|img| img.iter().zip(q.x.coords()).all(|(&a, &b)| a <= b * d))
    }

    /// Intersects the line `{base + t·α_dir}` with `Conv(W·x)`.
    ///
    /// Each inequality `⟨w·base, ϖ_i⟩ + t·⟨w·α_dir, ϖ_i⟩ ≤ ⟨x, ϖ_i⟩` is linear
    /// in `t`; their intersection is a single interval, returned when nonempty.
    pub fn line_interval(
        &self,
        x: &LatticeVector,
        base: &RationalVector,
        dir: usize,
    ) -> Result<Option<Interval>, HullError> {
        let spec = self.spec;
        spec.check_dim(x)?;
        spec.check_dim(base)?;
        if dir >= spec.rank() {
            return Err(RootError::IndexOutOfRange { index: dir, rank: spec.rank() }.into());
        }
        let n = spec.rank();
        let (b, d) = base.clear_denominators();
        let base_images = self.group.images(spec, b.coords());
        let dir_images = self.group.images(spec, spec.simple_root(dir).coords());
        let mut lo: Option<Rational64> = None;
        let mut hi: Option<Rational64> = None;
        for (k, (&bw, &aw)) in base_images.iter().zip(&dir_images).enumerate() {
            // d·x_i − (w·d·base)_i, constraint: t·d·aw ≤ slack
            let slack = x.coords()[k % n] * d - bw;
            if aw == 0 {
                if slack < 0 {
                    return Ok(None);
                }
                continue;
            }
            let bound = Rational64::new(slack, d * aw);
            if aw > 0 {
                hi = Some(hi.map_or(bound, |h| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound, |l| l.max(bound)));
            }
        }
        // w = 1 and w = s_dir give coefficients +1 and −1, so both ends exist
        let (lo, hi) = (lo.expect("lower bound"), hi.expect("upper bound"));
        Ok((lo <= hi).then_some(Interval { lo, hi }))
    }
}

/// Brute-force membership over every group element.
pub fn hull_contains_oracle(spec: &RootSystem, q: &HullQuery, cap: usize) -> Result<bool, HullError> {
    Ok(HullOracle::new(spec, cap)?.contains(q))
}

/// Decides whether `{base + t·α_dir : t ∈ ℚ}` meets `Conv(W·x)`.
pub fn line_meets_hull(
    spec: &RootSystem,
    x: &LatticeVector,
    base: &RationalVector,
    dir: usize,
    cap: usize,
) -> Result<Option<Interval>, HullError> {
    if !spec.is_dominant(x) {
        return Err(HullError::NotDominant(x.to_string()));
    }
    HullOracle::new(spec, cap)?.line_interval(x, base, dir)
}

/// An axis-aligned integer box `lo ≤ v ≤ hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        LatticeBox { lo, hi }
    }

    /// Number of lattice points, saturating.
    pub fn volume(&self) -> u128 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| if h < l { 0 } else { (h - l + 1) as u128 })
            .fold(1u128, |acc, s| acc.saturating_mul(s))
    }

    pub fn check_cap(&self, cap: usize) -> Result<(), HullError> {
        if self.volume() > cap as u128 {
            Err(HullError::CapExceeded { what: "lattice box volume", cap })
        } else {
            Ok(())
        }
    }

    /// Points in lexicographic order (first coordinate slowest).
    pub fn iter(&self) -> BoxIter<'_> {
        let empty = self.lo.iter().zip(&self.hi).any(|(l, h)| h < l);
        BoxIter {
            bx: self,
            next: (!empty).then(|| self.lo.clone()),
        }
    }

    /// Splits along the first coordinate for parallel scans.
    pub fn slices(&self) -> Vec<LatticeBox> {
        if self.lo.is_empty() {
            return vec![self.clone()];
        }
        (self.lo[0]..=self.hi[0])
            .map(|a| {
                let mut lo = self.lo.clone();
                let mut hi = self.hi.clone();
                lo[0] = a;
                hi[0] = a;
                LatticeBox { lo, hi }
            })
            .collect()
    }
}

pub struct BoxIter<'a> {
    bx: &'a LatticeBox,
    next: Option<Vec<i64>>,
}

impl Iterator for BoxIter<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut k = succ.len();
        let mut advanced = false;
        while k > 0 {
            k -= 1;
            if succ[k] < self.bx.hi[k] {
                succ[k] += 1;
                advanced = true;
                break;
            }
            succ[k] = self.bx.lo[k];
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

/// All lattice points of `Conv(W·x)`, scanned over the orbit's bounding box.
pub fn enumerate_lattice_points(
    spec: &RootSystem,
    x: &LatticeVector,
    cap: usize,
) -> Result<BTreeSet<LatticeVector>, HullError> {
    spec.check_dim(x)?;
    if !spec.is_dominant(x) {
        return Err(HullError::NotDominant(x.to_string()));
    }
    let bx = weyl_orbit(spec, x, cap)?.bounding_box();
    bx.check_cap(cap)?;
    let points = bx
        .slices()
        .into_par_iter()
        .flat_map_iter(|slice| {
            slice
                .iter()
                .map(Vector::new)
                .filter(|v| lattice_point_in_hull(spec, x, v))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    Ok(points.into_iter().collect())
}
