//! Classical multi-agent pathfinding (MAPF) on 4-connected grids.
//!
//! The crate is organized around the lifecycle of a MAPF problem:
//!
//! * [`model`] — grids, instances, plans, and the semantics profile that
//!   fixes which conflict types are forbidden, how agents behave at their
//!   targets, and which objective is optimized.
//! * [`conflict`] — detection of vertex, edge, following, cycle, and
//!   swapping conflicts between plans.
//! * [`objective`] — makespan and sum-of-costs.
//! * [`validate`] — full solution validation against an instance and a
//!   semantics profile.
//! * [`io`] — the `.map` / `.scen` benchmark file formats, scenario
//!   generation, and the solution file format.
//! * [`solve`] — space-time A*, prioritized planning, and conflict-based
//!   search (CBS).
//! * [`oracle`] — an exhaustive optimal solver for small instances, used to
//!   cross-check the search algorithms.
//! * [`harness`] — the incremental-agent evaluation protocol and its
//!   CSV/table reports.

pub mod conflict;
pub mod harness;
pub mod io;
pub mod model;
pub mod objective;
pub mod oracle;
pub mod solve;
pub mod validate;

pub use model::{
    ConflictKind, Grid, Instance, Move, MoveTable, Objective, Plan, SemanticsProfile, Solution,
    TargetBehavior, Vertex,
};
