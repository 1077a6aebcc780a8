//! Half-root shifts `z = y + α_{i0}/2` and the reflection chain that
//! carries `z` to the dominant chamber.
//!
//! For a dominant `x`, a simple root `α_{i0}` and `y` dominant on the wall
//! `⟨y, α_{i0}^∨⟩ = 0` with `y ≤ x` coordinatewise, the chain is built as
//! follows. If `z` is not dominant there is exactly one `i1` with
//! `⟨α_{i0}, α_{i1}^∨⟩ < −1` and `⟨z, α_{i1}^∨⟩ = −1`. After that each new
//! index `i_{j+1}` is the unique unused one with
//! `⟨α_{i_j}, α_{i_{j+1}}^∨⟩ = −1` and `⟨z, α_{i_{j+1}}^∨⟩ = 0`. The result is
//! `w0·z = z + α_{i1} + … + α_{ik}`, which is dominant. The chain length `k`
//! is the defect of `z`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hull::{lattice_point_in_hull, HullError, HullOracle, HullQuery, LatticeBox};
use crate::rootsys::{Family, LatticeVector, RationalVector, RootError, RootSystem, RootSystemType, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error("x = {0} is not dominant")]
    NotDominantX(String),
    #[error("⟨z, α_i0^∨⟩ = {pairing}, expected 1")]
    BadCorootPairing { pairing: i64 },
    #[error("y = {0} lies outside Conv(W·x)")]
    YOutsideHull(String),
    #[error("not a dominant-y instance: {0}")]
    NotLemmaInstance(String),
    #[error("z = {0} is not dominant but no chain start exists")]
    NoChainStart(String),
    #[error("chain step {step} has candidates {candidates:?}, expected exactly one")]
    ChainStepNotUnique { step: usize, candidates: Vec<usize> },
    #[error("chain stopped after {steps} steps with a non-dominant vector")]
    ChainDidNotTerminate { steps: usize },
    #[error("bound must be at least 1")]
    BadBound,
}

/// A validated triple `(x, z, i0)` with derived `y = z − α_{i0}/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftInstance<'a> {
    pub spec: &'a RootSystem,
    pub x: LatticeVector,
    pub z: LatticeVector,
    pub i0: usize,
    pub y: RationalVector,
}

/// Validates `x` dominant, `⟨z, α_{i0}^∨⟩ = 1` and `y ∈ Conv(W·x)`.
pub fn make_instance<'a>(
    spec: &'a RootSystem,
    x: LatticeVector,
    z: LatticeVector,
    i0: usize,
) -> Result<ShiftInstance<'a>, ShiftError> {
    spec.check_dim(&x)?;
    spec.check_dim(&z)?;
    if !spec.is_dominant(&x) {
        return Err(ShiftError::NotDominantX(x.to_string()));
    }
    let pairing = spec.pair_coroot(&z, i0)?;
    if pairing != 1 {
        return Err(ShiftError::BadCorootPairing { pairing });
    }
    let y = z.to_rational().add_root(i0, Rational64::new(-1, 2));
    let q = HullQuery::new(spec, x.clone(), y.clone())?;
    if !crate::hull::hull_contains_fast(spec, &q) {
        return Err(ShiftError::YOutsideHull(y.to_string()));
    }
    Ok(ShiftInstance { spec, x, z, i0, y })
}

/// A shift instance with `y` dominant and `y ≤ x` coordinatewise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaInstance<'a>(ShiftInstance<'a>);

impl<'a> LemmaInstance<'a> {
    pub fn new(inst: ShiftInstance<'a>) -> Result<Self, ShiftError> {
        if !inst.spec.is_dominant(&inst.y) {
            return Err(ShiftError::NotLemmaInstance(format!("y = {} is not dominant", inst.y)));
        }
        if !inst.y.le_coords(&inst.x.to_rational()) {
            return Err(ShiftError::NotLemmaInstance(format!("y = {} exceeds x = {}", inst.y, inst.x)));
        }
        Ok(LemmaInstance(inst))
    }

    pub fn instance(&self) -> &ShiftInstance<'a> {
        &self.0
    }
}

impl<'a> std::ops::Deref for LemmaInstance<'a> {
    type Target = ShiftInstance<'a>;
    fn deref(&self) -> &ShiftInstance<'a> {
        &self.0
    }
}

/// Conditions (a)–(d) on a chain, plus the bookkeeping checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainFlags {
    /// (a) chain indices are distinct and differ from `i0`.
    pub distinct: bool,
    /// (b) `⟨z, α_{i1}^∨⟩ = −1`.
    pub start_pairing: bool,
    /// (c) `⟨z, α_{ij}^∨⟩ = 0` for `j ≥ 2`.
    pub zero_pairings: bool,
    /// (d) `⟨α_{ij}, α_{i(j+1)}^∨⟩ = −1`.
    pub linked: bool,
    /// `w0·z = z + Σ_j α_{ij}`.
    pub sum_form: bool,
    /// After step `j`, `⟨z_j, α_i^∨⟩ ≥ 0` for `i ∈ {i0, i1, …, ij}`.
    pub intermediate_nonnegative: bool,
}

impl ChainFlags {
    pub fn all(&self) -> bool {
        self.distinct
            && self.start_pairing
            && self.zero_pairings
            && self.linked
            && self.sum_form
            && self.intermediate_nonnegative
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    #[serde(with = "crate::report::label")]
    pub i0: usize,
    #[serde(with = "crate::report::labels")]
    pub chain: Vec<usize>,
    pub defect: usize,
    /// `z_1, …, z_k`.
    pub intermediates: Vec<LatticeVector>,
    pub w0z: LatticeVector,
    pub dominant: bool,
    pub flags: ChainFlags,
    /// `⟨z, ϖ_i⟩ ≤ ⟨x, ϖ_i⟩` for all `i`.
    pub below_x: bool,
    /// `⟨z, ϖ_{ij}⟩ < ⟨x, ϖ_{ij}⟩` for every chain index.
    pub strict_on_chain: bool,
    /// `w0·z ∈ Conv(W·x)` by the fast criterion.
    pub membership: bool,
}

/// Builds the reflection chain for a lemma instance.
pub fn dominance_chain(inst: &LemmaInstance<'_>) -> Result<ChainReport, ShiftError> {
    let spec = inst.spec;
    let n = spec.rank();
    let a = spec.cartan();
    let z = &inst.z;
    let pair_z = spec.coroot_pairings(z);

    let mut chain: Vec<usize> = Vec::new();
    let mut intermediates = Vec::new();
    let mut current = z.clone();
    let mut intermediate_nonnegative = true;

    if !spec.is_dominant(z) {
        let starts: Vec<usize> = (0..n)
            .filter(|&i| i != inst.i0 && a.entry(i, inst.i0) < -1 && pair_z[i] == -1)
            .collect();
        match starts.as_slice() {
            [] => return Err(ShiftError::NoChainStart(z.to_string())),
            [i1] => chain.push(*i1),
            _ => return Err(ShiftError::ChainStepNotUnique { step: 1, candidates: starts }),
        }
        loop {
            let last = *chain.last().expect("chain is nonempty");
            spec.reflect_raw(current.coords_mut(), last);
            intermediates.push(current.clone());
            intermediate_nonnegative &= std::iter::once(inst.i0)
                .chain(chain.iter().copied())
                .all(|i| spec.pairing_raw(current.coords(), i) >= 0);
            if spec.is_dominant(&current) {
                break;
            }
            if chain.len() >= n - 1 {
                return Err(ShiftError::ChainDidNotTerminate { steps: chain.len() });
            }
            let next: Vec<usize> = (0..n)
                .filter(|&i| i != inst.i0 && !chain.contains(&i) && a.entry(i, last) == -1 && pair_z[i] == 0)
                .collect();
            match next.as_slice() {
                [] => return Err(ShiftError::ChainDidNotTerminate { steps: chain.len() }),
                [i] => chain.push(*i),
                _ => {
                    return Err(ShiftError::ChainStepNotUnique {
                        step: chain.len() + 1,
                        candidates: next,
                    })
                }
            }
        }
    }

    let w0z = current;
    let k = chain.len();
    let distinct = {
        let set: BTreeSet<_> = chain.iter().collect();
        set.len() == k && !chain.contains(&inst.i0)
    };
    let start_pairing = chain.first().is_none_or(|&i1| pair_z[i1] == -1);
    let zero_pairings = chain.iter().skip(1).all(|&i| pair_z[i] == 0);
    let linked = chain.windows(2).all(|w| a.entry(w[1], w[0]) == -1);
    let sum_form = {
        let mut s = z.clone();
        for &i in &chain {
            s.coords_mut()[i] += 1;
        }
        s == w0z
    };
    let below_x = z.le_coords(&inst.x);
    let strict_on_chain = chain.iter().all(|&i| z.coords()[i] < inst.x.coords()[i]);
    let membership = lattice_point_in_hull(spec, &inst.x, &w0z);
    Ok(ChainReport {
        i0: inst.i0,
        chain,
        defect: k,
        intermediates,
        dominant: spec.is_dominant(&w0z),
        w0z,
        flags: ChainFlags {
            distinct,
            start_pairing,
            zero_pairings,
            linked,
            sum_form,
            intermediate_nonnegative,
        },
        below_x,
        strict_on_chain,
        membership,
    })
}

/// All ordered pairs `(i0, i1)` with `⟨α_{i0}, α_{i1}^∨⟩ < −1`.
pub fn chain_start_pairs(spec: &RootSystem) -> BTreeSet<(usize, usize)> {
    let n = spec.rank();
    let a = spec.cartan();
    (0..n)
        .flat_map(|i0| (0..n).map(move |i1| (i0, i1)))
        .filter(|&(i0, i1)| i0 != i1 && a.entry(i1, i0) < -1)
        .collect()
}

/// Structural upper bound on the chain length for each family.
pub fn defect_bound(ty: RootSystemType) -> usize {
    match ty.family() {
        Family::A | Family::D | Family::E => 0,
        Family::B | Family::G => 1,
        Family::F => 2,
        Family::C => ty.rank() - 2,
    }
}

/// Dominant `x` with every coordinate in `[0, bound]`, in lexicographic order.
///
/// Dominant vectors have nonnegative coordinates, so the box is exhaustive.
pub fn dominant_points(spec: &RootSystem, bound: i64) -> Vec<LatticeVector> {
    let n = spec.rank();
    LatticeBox::new(vec![0; n], vec![bound; n])
        .iter()
        .map(Vector::new)
        .filter(|x| spec.is_dominant(x))
        .collect()
}

fn check_sweep(spec: &RootSystem, bound: i64, cap: usize) -> Result<(), ShiftError> {
    if bound < 1 {
        return Err(ShiftError::BadBound);
    }
    let n = spec.rank();
    LatticeBox::new(vec![0; n], vec![bound; n]).check_cap(cap)?;
    Ok(())
}

/// Lemma instances for one dominant `x`, ordered by `z` then `i0`.
///
/// `y` dominant forces `y ≥ 0`; together with `y ≤ x` and integrality of
/// `z`, every instance has `0 ≤ z ≤ x`, so scanning that box is exhaustive.
pub fn lemma_instances_for<'a>(spec: &'a RootSystem, x: &LatticeVector) -> impl Iterator<Item = LemmaInstance<'a>> + 'a {
    let n = spec.rank();
    let x = x.clone();
    let bx = LatticeBox::new(vec![0; n], x.coords().to_vec());
    let zs: Vec<Vec<i64>> = bx.iter().collect();
    zs.into_iter().flat_map(move |zc| {
        let x = x.clone();
        (0..n).filter_map(move |i0| {
            // cheap prefilter: ⟨z, α_i0^∨⟩ = 1 and 2⟨z, α_i^∨⟩ − a[i][i0] ≥ 0
            if spec.pairing_raw(&zc, i0) != 1 {
                return None;
            }
            let y_dominant = (0..n).all(|i| 2 * spec.pairing_raw(&zc, i) - spec.cartan().entry(i, i0) >= 0);
            if !y_dominant {
                return None;
            }
            let inst = make_instance(spec, x.clone(), Vector::new(zc.clone()), i0).ok()?;
            LemmaInstance::new(inst).ok()
        })
    })
}

/// Every lemma instance with dominant `x ≤ bound` coordinatewise.
pub fn enumerate_lemma_instances(
    spec: &RootSystem,
    bound: i64,
    cap: usize,
) -> Result<impl Iterator<Item = LemmaInstance<'_>> + '_, ShiftError> {
    check_sweep(spec, bound, cap)?;
    Ok(dominant_points(spec, bound)
        .into_iter()
        .flat_map(move |x| lemma_instances_for(spec, &x)))
}

/// A lemma instance together with its chain, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x: LatticeVector,
    pub z: LatticeVector,
    pub y: RationalVector,
    pub report: ChainReport,
}

impl Witness {
    fn new(inst: &LemmaInstance<'_>, report: ChainReport) -> Self {
        Witness {
            x: inst.x.clone(),
            z: inst.z.clone(),
            y: inst.y.clone(),
            report,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectSummary {
    pub root_type: String,
    pub bound: i64,
    pub instances: u64,
    pub max_defect: usize,
    pub structural_bound: usize,
    /// First instance in sweep order attaining `max_defect`.
    pub witness: Option<Witness>,
}

/// Maximum chain length over the bounded sweep, with a witness.
pub fn defect_sweep(spec: &RootSystem, bound: i64, cap: usize) -> Result<DefectSummary, ShiftError> {
    check_sweep(spec, bound, cap)?;
    let per_x = dominant_points(spec, bound)
        .into_par_iter()
        .map(|x| {
            let mut count = 0u64;
            let mut best: Option<Witness> = None;
            for inst in lemma_instances_for(spec, &x) {
                count += 1;
                let report = dominance_chain(&inst)?;
                if best.as_ref().is_none_or(|b| report.defect > b.report.defect) {
                    best = Some(Witness::new(&inst, report));
                }
            }
            Ok((count, best))
        })
        .collect::<Result<Vec<_>, ShiftError>>()?;
    let mut instances = 0;
    let mut witness: Option<Witness> = None;
    for (count, best) in per_x {
        instances += count;
        if let Some(b) = best {
            if witness.as_ref().is_none_or(|w| b.report.defect > w.report.defect) {
                witness = Some(b);
            }
        }
    }
    Ok(DefectSummary {
        root_type: spec.root_type().to_string(),
        bound,
        instances,
        max_defect: witness.as_ref().map_or(0, |w| w.report.defect),
        structural_bound: defect_bound(spec.root_type()),
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub x: LatticeVector,
    pub z: LatticeVector,
    #[serde(with = "crate::report::label")]
    pub i0: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremSweepReport {
    pub root_type: String,
    pub bound: i64,
    pub weyl_order: usize,
    pub instances: u64,
    /// Number of `(instance, chain index)` pairs checked for strictness.
    pub strict_checks: u64,
    pub max_defect: usize,
    /// Instance count per chain length.
    pub defect_histogram: BTreeMap<usize, u64>,
    pub failures: Vec<SweepFailure>,
}

#[derive(Default)]
struct SweepAcc {
    instances: u64,
    strict_checks: u64,
    histogram: BTreeMap<usize, u64>,
    failures: Vec<SweepFailure>,
}

fn check_instance(inst: &LemmaInstance<'_>, oracle: &HullOracle<'_>, acc: &mut SweepAcc) {
    let spec = inst.spec;
    let n = spec.rank();
    let bound = defect_bound(spec.root_type());
    let mut fail = |reason: String| {
        acc.failures.push(SweepFailure {
            x: inst.x.clone(),
            z: inst.z.clone(),
            i0: inst.i0,
            reason,
        })
    };
    let report = match dominance_chain(inst) {
        Ok(r) => r,
        Err(e) => {
            fail(format!("chain: {e}"));
            return;
        }
    };
    let k = report.defect;
    if !report.flags.all() {
        fail(format!("chain flags violated: {:?}", report.flags));
    }
    if !report.dominant {
        fail(format!("w0z = {} is not dominant", report.w0z));
    }
    if n > 0 && k > n - 1 {
        fail(format!("defect {k} exceeds n − 1"));
    }
    if k > bound {
        fail(format!("defect {k} exceeds family bound {bound}"));
    }
    if !report.below_x {
        fail("z exceeds x in some coordinate".into());
    }
    if !report.strict_on_chain {
        fail("strict inequality fails on a chain index".into());
    }
    let fast_w0z = report.membership;
    let fast_z = lattice_point_in_hull(spec, &inst.x, &inst.z);
    let oracle_z = oracle.contains(&HullQuery {
        x: inst.x.clone(),
        v: inst.z.to_rational(),
    });
    let oracle_w0z = oracle.contains(&HullQuery {
        x: inst.x.clone(),
        v: report.w0z.to_rational(),
    });
    if !(fast_w0z && fast_z && oracle_z && oracle_w0z) {
        fail(format!(
            "membership: fast(z)={fast_z} fast(w0z)={fast_w0z} oracle(z)={oracle_z} oracle(w0z)={oracle_w0z}"
        ));
    }
    acc.instances += 1;
    acc.strict_checks += k as u64;
    *acc.histogram.entry(k).or_default() += 1;
}

/// Checks every lemma instance of the bounded sweep: membership of `z` and
/// `w0·z` by both routes, chain conditions, family bounds and strictness.
pub fn verify_theorem_sweep(spec: &RootSystem, bound: i64, cap: usize) -> Result<TheoremSweepReport, ShiftError> {
    check_sweep(spec, bound, cap)?;
    let oracle = HullOracle::new(spec, cap)?;
    let parts: Vec<SweepAcc> = dominant_points(spec, bound)
        .into_par_iter()
        .map(|x| {
            let mut acc = SweepAcc::default();
            for inst in lemma_instances_for(spec, &x) {
                check_instance(&inst, &oracle, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = SweepAcc::default();
    for p in parts {
        total.instances += p.instances;
        total.strict_checks += p.strict_checks;
        for (k, c) in p.histogram {
            *total.histogram.entry(k).or_default() += c;
        }
        total.failures.extend(p.failures);
    }
    Ok(TheoremSweepReport {
        root_type: spec.root_type().to_string(),
        bound,
        weyl_order: oracle.group().order(),
        instances: total.instances,
        strict_checks: total.strict_checks,
        max_defect: total.histogram.keys().next_back().copied().unwrap_or(0),
        defect_histogram: total.histogram,
        failures: total.failures,
    })
}
