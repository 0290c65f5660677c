//! Trajectories, ω-limits, limit cycles, saddle manifolds, saddle
//! connections and basins.

pub mod basin;
pub mod cycles;
pub mod homoclinic;
pub mod integrate;
pub mod manifolds;
pub mod omega;

pub use basin::{basin_raster, basin_raster_with, BasinRaster, GridSpec};
pub use cycles::{find_limit_cycles, find_limit_cycles_with, return_map, CycleOptions, LimitCycle, Section};
pub use homoclinic::{
    connection_separation, homoclinic_q, homoclinic_q_with, ConnectionKind, HomoclinicOptions, HomoclinicResult,
};
pub use integrate::{integrate, integrate_dir, integrate_events, Direction, Flow, Trajectory};
pub use manifolds::{saddle_manifolds, saddle_manifolds_with, ManifoldBranch, ManifoldOptions, Orientation, SaddleManifolds};
pub use omega::{omega_limit, omega_limit_with, origin_certificate, Attractors, OmegaLabel, OmegaOptions, OmegaResult};
