//! Exact root-system combinatorics.
//!
//! * [`rootsys`]: Cartan matrices, pairings and simple reflections in
//!   simple-root coordinates.
//! * [`hull`]: Weyl orbits, membership in `Conv(W·x)` (fast criterion and a
//!   group-enumeration oracle), lattice points and line intersections.
//! * [`shift`]: half-root shifts `z = y + α/2`, the reflection chain that
//!   makes `z` dominant, defects and exhaustive sweeps.
//! * [`krtoric`]: rank-1 wall lifting (section counts and the deficit `h1`).
//! * [`cli`]: the batch driver behind the `weylkit` binary.
//!
//! No floating point is used anywhere.

pub mod cli;
pub mod hull;
pub mod krtoric;
pub mod report;
pub mod rootsys;
pub mod shift;

pub use hull::{
    enumerate_lattice_points, hull_contains_fast, hull_contains_oracle, line_meets_hull, weyl_group_order, weyl_orbit,
    HullError, HullOracle, HullQuery, Interval, OrbitSet,
};
pub use krtoric::{project_to_wall, verify_kr_rank1, wall_cosets_lhs, wall_cosets_rhs, KrToricReport, WallCoset};
pub use rootsys::{
    build_root_system, coweight_coordinate, CartanMatrix, Family, LatticeVector, RationalVector, RootError, RootSystem,
    RootSystemType, Vector,
};
pub use shift::{
    chain_start_pairs, defect_sweep, dominance_chain, enumerate_lemma_instances, make_instance, verify_theorem_sweep,
    ChainReport, LemmaInstance, ShiftError, ShiftInstance,
};
