//! Rank-1 wall lifting for orbit polytopes.
//!
//! A `W`-invariant, globally generated line bundle on the toric variety of
//! the Weyl fan is modeled by its section polytope `Conv(W·μ)` for a
//! dominant `μ ∈ Q(R)`. Its sections are the lattice points of the
//! polytope (`h0_total`). Restricting to the divisor attached to `α_{i0}`
//! amounts to projecting along `α_{i0}`. The sections on the divisor are the
//! classes of `Q(R)/ℤα_{i0}` whose fiber line meets the polytope
//! (`h0_wall`). The restriction map is surjective exactly when every such
//! class contains an actual lattice point of the polytope. `h1` counts the
//! classes that do not.
//!
//! The `X_G` condition is vacuous here: for the root lattice
//! (simply-connected group) `X_G` is trivial.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;

use crate::hull::{enumerate_lattice_points, lattice_point_in_hull, weyl_orbit, HullError, HullOracle};
use crate::rootsys::{LatticeVector, RationalVector, RootError, RootSystem, Vector};
use crate::shift::{dominant_points, make_instance};

/// `v − (⟨v, α_{i0}^∨⟩/2)·α_{i0}`, the projection onto the wall
/// `⟨·, α_{i0}^∨⟩ = 0` along `α_{i0}`.
pub fn project_to_wall(spec: &RootSystem, i0: usize, v: &RationalVector) -> Result<RationalVector, RootError> {
    let p = spec.pair_coroot(v, i0)?;
    Ok(v.add_root(i0, -p / Rational64::from_integer(2)))
}

/// A class of `Q(R)/ℤα_{i0}`.
///
/// Adding `α_{i0}` changes only coordinate `i0`, so the remaining `n − 1`
/// coordinates identify the class exactly. `rep` is the wall projection of
/// any member; it does not depend on the member chosen.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WallCoset {
    pub key: Vec<i64>,
    #[serde(with = "crate::report::label")]
    pub i0: usize,
    pub rep: RationalVector,
}

impl WallCoset {
    pub fn of(spec: &RootSystem, i0: usize, v: &LatticeVector) -> Result<Self, RootError> {
        let rep = project_to_wall(spec, i0, &v.to_rational())?;
        Ok(WallCoset {
            key: key_of(v.coords(), i0),
            i0,
            rep,
        })
    }

    /// The lattice member closest to the wall on the `+α_{i0}` side:
    /// `rep` itself when integral, otherwise `rep + α_{i0}/2`.
    pub fn lift(&self) -> LatticeVector {
        match self.rep.to_lattice() {
            Some(v) => v,
            None => self
                .rep
                .add_root(self.i0, Rational64::new(1, 2))
                .to_lattice()
                .expect("wall projection of a lattice vector is half-integral"),
        }
    }
}

fn key_of(coords: &[i64], i0: usize) -> Vec<i64> {
    coords
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i0)
        .map(|(_, &c)| c)
        .collect()
}

fn check(spec: &RootSystem, mu: &LatticeVector, i0: usize) -> Result<(), HullError> {
    spec.check_dim(mu)?;
    if i0 >= spec.rank() {
        return Err(RootError::IndexOutOfRange {
            index: i0,
            rank: spec.rank(),
        }
        .into());
    }
    if !spec.is_dominant(mu) {
        return Err(HullError::NotDominant(mu.to_string()));
    }
    Ok(())
}

fn rhs_with(
    spec: &RootSystem,
    oracle: &HullOracle<'_>,
    mu: &LatticeVector,
    i0: usize,
    cap: usize,
) -> Result<BTreeSet<WallCoset>, HullError> {
    let bx = weyl_orbit(spec, mu, cap)?.bounding_box();
    bx.check_cap(cap)?;
    let mut out = BTreeSet::new();
    // every class meeting the polytope has its other coordinates in the box
    let mut fiber = bx.clone();
    fiber.lo[i0] = 0;
    fiber.hi[i0] = 0;
    for c in fiber.iter() {
        let coset = WallCoset::of(spec, i0, &Vector::new(c))?;
        if oracle.line_interval(mu, &coset.rep, i0)?.is_some() {
            out.insert(coset);
        }
    }
    Ok(out)
}

fn lhs_from(spec: &RootSystem, points: &BTreeSet<LatticeVector>, i0: usize) -> Result<BTreeSet<WallCoset>, RootError> {
    points.iter().map(|p| WallCoset::of(spec, i0, p)).collect()
}

/// Classes whose fiber line meets `Conv(W·μ)`.
pub fn wall_cosets_rhs(
    spec: &RootSystem,
    mu: &LatticeVector,
    i0: usize,
    cap: usize,
) -> Result<BTreeSet<WallCoset>, HullError> {
    check(spec, mu, i0)?;
    let oracle = HullOracle::new(spec, cap)?;
    rhs_with(spec, &oracle, mu, i0, cap)
}

/// Classes containing a lattice point of `Conv(W·μ)`.
pub fn wall_cosets_lhs(
    spec: &RootSystem,
    mu: &LatticeVector,
    i0: usize,
    cap: usize,
) -> Result<BTreeSet<WallCoset>, HullError> {
    check(spec, mu, i0)?;
    Ok(lhs_from(spec, &enumerate_lattice_points(spec, mu, cap)?, i0)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KrToricReport {
    pub root_type: String,
    pub mu: LatticeVector,
    #[serde(with = "crate::report::label")]
    pub i0: usize,
    /// Lattice points of `Conv(W·μ)`.
    pub h0_total: usize,
    /// Classes whose fiber meets the polytope.
    pub h0_wall: usize,
    /// Classes hit by a lattice point of the polytope.
    pub image: usize,
    pub h1: usize,
    pub sets_equal: bool,
    pub lhs_subset_of_rhs: bool,
    /// Classes meeting the polytope with no lattice point in it.
    pub missing: Vec<WallCoset>,
    /// Classes whose nearest lift fails to be a valid shift instance inside
    /// the polytope.
    pub bridge_failures: Vec<WallCoset>,
    /// The `X_G` condition, recorded rather than computed.
    pub x_g_condition: &'static str,
    pub verdict: bool,
}

pub const X_G_NOTE: &str = "vacuous: root lattice (simply connected), X_G trivial";

fn report_with(
    spec: &RootSystem,
    oracle: &HullOracle<'_>,
    mu: &LatticeVector,
    i0: usize,
    cap: usize,
) -> Result<KrToricReport, HullError> {
    let points = enumerate_lattice_points(spec, mu, cap)?;
    let lhs = lhs_from(spec, &points, i0)?;
    let rhs = rhs_with(spec, oracle, mu, i0, cap)?;
    let missing: Vec<WallCoset> = rhs.difference(&lhs).cloned().collect();
    let mut bridge_failures = Vec::new();
    for coset in &rhs {
        let lift = coset.lift();
        let ok = if coset.rep.to_lattice().is_some() {
            lattice_point_in_hull(spec, mu, &lift)
        } else {
            make_instance(spec, mu.clone(), lift.clone(), i0).is_ok() && lattice_point_in_hull(spec, mu, &lift)
        };
        if !ok {
            bridge_failures.push(coset.clone());
        }
    }
    let image = lhs.intersection(&rhs).count();
    let h1 = rhs.len() - image;
    let sets_equal = lhs == rhs;
    Ok(KrToricReport {
        root_type: spec.root_type().to_string(),
        mu: mu.clone(),
        i0,
        h0_total: points.len(),
        h0_wall: rhs.len(),
        image,
        h1,
        sets_equal,
        lhs_subset_of_rhs: lhs.is_subset(&rhs),
        missing,
        bridge_failures,
        x_g_condition: X_G_NOTE,
        verdict: h1 == 0 && sets_equal,
    })
}

/// Section counts and the lifting deficit for `(μ, α_{i0})`.
pub fn verify_kr_rank1(
    spec: &RootSystem,
    mu: &LatticeVector,
    i0: usize,
    cap: usize,
) -> Result<KrToricReport, HullError> {
    check(spec, mu, i0)?;
    let oracle = HullOracle::new(spec, cap)?;
    report_with(spec, &oracle, mu, i0, cap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KrSweepReport {
    pub root_type: String,
    pub bound: i64,
    pub cases: usize,
    pub max_h1: usize,
    pub reports: Vec<KrToricReport>,
    /// Reports with a false verdict or a bridge failure.
    pub failures: Vec<KrToricReport>,
}

/// [`verify_kr_rank1`] for every dominant `μ ≤ bound` and every `i0`.
pub fn kr_sweep(spec: &RootSystem, bound: i64, cap: usize) -> Result<KrSweepReport, HullError> {
    let oracle = HullOracle::new(spec, cap)?;
    let mut reports = Vec::new();
    for mu in dominant_points(spec, bound) {
        for i0 in 0..spec.rank() {
            reports.push(report_with(spec, &oracle, &mu, i0, cap)?);
        }
    }
    let failures: Vec<KrToricReport> = reports
        .iter()
        .filter(|r| !r.verdict || !r.bridge_failures.is_empty())
        .cloned()
        .collect();
    Ok(KrSweepReport {
        root_type: spec.root_type().to_string(),
        bound,
        cases: reports.len(),
        max_h1: reports.iter().map(|r| r.h1).max().unwrap_or(0),
        reports,
        failures,
    })
}
