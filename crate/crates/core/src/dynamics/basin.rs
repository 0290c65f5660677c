//! Basin-of-attraction raster over a rectangle of initial conditions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Params, State};
use crate::scalar::{lit, Scalar};

use super::omega::{omega_limit_with, Attractors, OmegaLabel, OmegaOptions};

/// Environment variable capping the number of raster worker threads.
pub const THREADS_ENV: &str = "BAZYKIN_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u_lo: f64,
    pub u_hi: f64,
    pub v_lo: f64,
    pub v_hi: f64,
    pub n_u: usize,
    pub n_v: usize,
}

impl GridSpec {
    pub fn square(hi: f64, n: usize) -> Self {
        Self { u_lo: 0.0, u_hi: hi, v_lo: 0.0, v_hi: hi, n_u: n, n_v: n }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.u_lo >= 0.0
            && self.v_lo >= 0.0
            && self.u_hi > self.u_lo
            && self.v_hi > self.v_lo
            && self.u_hi.is_finite()
            && self.v_hi.is_finite()
            && self.n_u > 0
            && self.n_v > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid raster grid {self:?}")))
        }
    }

    pub fn cell_width(&self) -> (f64, f64) {
        ((self.u_hi - self.u_lo) / self.n_u as f64, (self.v_hi - self.v_lo) / self.n_v as f64)
    }

    /// Centre of cell `(i, j)`, `i` along `u`.
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let (du, dv) = self.cell_width();
        (self.u_lo + (i as f64 + 0.5) * du, self.v_lo + (j as f64 + 0.5) * dv)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinRaster<T> {
    pub grid: GridSpec,
    /// Row-major labels: index `j * n_u + i`.
    pub labels: Vec<OmegaLabel>,
    /// Final state of each cell's trajectory.
    pub endpoints: Vec<State<T>>,
    pub undetermined: usize,
}

impl<T: Scalar> BasinRaster<T> {
    pub fn label(&self, i: usize, j: usize) -> OmegaLabel {
        self.labels[j * self.grid.n_u + i]
    }

    pub fn count(&self, label: OmegaLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

/// Worker count from `BAZYKIN_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok().filter(|&n| n > 0)
}

/// Runs `f` on a pool capped by `BAZYKIN_THREADS`, or on the global pool.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

pub fn basin_raster<T: Scalar>(p: &Params<T>, grid: &GridSpec) -> Result<BasinRaster<T>> {
    basin_raster_with(p, grid, &OmegaOptions::default())
}

pub fn basin_raster_with<T: Scalar>(p: &Params<T>, grid: &GridSpec, opts: &OmegaOptions) -> Result<BasinRaster<T>> {
    grid.validate()?;
    let att = Attractors::of(p);
    let cells: Vec<(usize, usize)> = (0..grid.n_v).flat_map(|j| (0..grid.n_u).map(move |i| (i, j))).collect();
    let results: Vec<Result<(OmegaLabel, State<T>)>> = with_thread_cap(|| {
        cells
            .par_iter()
            .map(|&(i, j)| {
                let (u, v) = grid.center(i, j);
                let r = omega_limit_with(p, State::new(lit(u), lit(v)), &att, opts)?;
                Ok((r.label, r.endpoint))
            })
            .collect()
    });
    let mut labels = Vec::with_capacity(cells.len());
    let mut endpoints = Vec::with_capacity(cells.len());
    for r in results {
        let (l, e) = r?;
        labels.push(l);
        endpoints.push(e);
    }
    let undetermined = labels.iter().filter(|&&l| l == OmegaLabel::Undetermined).count();
    Ok(BasinRaster { grid: *grid, labels, endpoints, undetermined })
}
