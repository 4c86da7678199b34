//! Dense full-tableau simplex with a column-partitioned multi-lane engine.
//!
//! * [`lp_core`]: problem types, standardization, the tableau, phase one and
//!   optimality certificates.
//! * [`partition`]: the theta-weighted column split over lanes.
//! * [`engine`]: the lane-parallel phase loop and the sequential reference.
//! * [`mps`]: MPS reading and writing.
//! * [`generator`]: seeded dense random instances.
//! * [`bench`]: speedup, efficiency and theta sweeps.

pub mod bench;
pub mod engine;
pub mod generator;
pub mod lp_core;
pub mod mps;
pub mod partition;
