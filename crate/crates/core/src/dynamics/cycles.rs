//! Limit cycles around P₂ from the first-return map on the section
//! `v = v₂, u > u₂`.
//!
//! Stable cycles are fixed points of the forward map; unstable ones are
//! found as stable fixed points of the backward map.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibria::{interior_equilibria, EquilibriumKind};
use crate::error::{Error, Result};
use crate::model::{Params, State};
use crate::scalar::{lit, Scalar};

use super::integrate::{integrate_dir, integrate_events, Direction, Flow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCycle<T> {
    pub section_point: State<T>,
    pub period: T,
    pub points: Vec<State<T>>,
    /// Derivative of the forward return map at `section_point`.
    pub floquet: T,
    pub stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleOptions {
    pub tol: f64,
    /// Number of section samples in the scan.
    pub n_scan: usize,
    /// Smallest scanned offset `u − u₂`, as a fraction of `u_max − u₂`.
    pub min_offset: f64,
    pub u_max: f64,
    /// Time cap for one return.
    pub t_return: f64,
    /// Required return residual of a refined cycle.
    pub residual: f64,
}

impl Default for CycleOptions {
    fn default() -> Self {
        Self { tol: 1e-12, n_scan: 120, min_offset: 1e-4, u_max: 1.0, t_return: 1e4, residual: 1e-9 }
    }
}

/// Horizontal section through P₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section<T> {
    pub p2: State<T>,
}

impl<T: Scalar> Section<T> {
    pub fn of(p: &Params<T>) -> Result<Self> {
        interior_equilibria(p)
            .into_iter()
            .find(|e| e.kind == EquilibriumKind::P2)
            .map(|e| Self { p2: e.point })
            .ok_or_else(|| Error::Precondition("no interior equilibrium P2".into()))
    }
}

/// One return to the section from `(s, v₂)`: `(s', time)`.
pub fn return_map<T: Scalar>(
    p: &Params<T>,
    sec: &Section<T>,
    s: T,
    dir: Direction,
    opts: &CycleOptions,
) -> Option<(T, T)> {
    let (u2, v2) = (sec.p2.u, sec.p2.v);
    let tiny = lit::<T>(1e-9);
    let mut hit = None;
    let res = integrate_events(
        p,
        State::new(s, v2),
        lit(opts.t_return),
        lit(opts.tol),
        dir,
        |y| y[1] - v2,
        |t, st, rising| {
            // Forward orbits cross upward at u > u₂; the reversed flow crosses downward there.
            let wanted = match dir {
                Direction::Forward => rising,
                Direction::Backward => !rising,
            };
            if wanted && st.u > u2 {
                hit = Some((st.u, t));
                return Flow::Stop;
            }
            Flow::Continue
        },
        |_, st| {
            if st.norm() < tiny || st.dist(&sec.p2) < tiny || st.u > lit(10.0) || st.v > lit(100.0) {
                Flow::Stop
            } else {
                Flow::Continue
            }
        },
    );
    res.ok()?;
    hit
}

fn displacement<T: Scalar>(p: &Params<T>, sec: &Section<T>, s: T, dir: Direction, opts: &CycleOptions) -> Option<T> {
    return_map(p, sec, s, dir, opts).map(|(r, _)| r - s)
}

/// Illinois refinement of a sign change of `R(s) − s` on `[a, b]`.
fn refine<T: Scalar>(
    p: &Params<T>,
    sec: &Section<T>,
    dir: Direction,
    opts: &CycleOptions,
    (mut a, mut fa): (T, T),
    (mut b, mut fb): (T, T),
) -> Option<T> {
    let tol = lit::<T>(opts.residual) * lit(1e-2);
    let mut side = 0i8;
    for _ in 0..100 {
        let c = if fb != fa { b - fb * (b - a) / (fb - fa) } else { (a + b) / lit(2.0) };
        let c = if c > a.min(b) && c < a.max(b) { c } else { (a + b) / lit(2.0) };
        let fc = displacement(p, sec, c, dir, opts)?;
        if fc.abs() < tol || (b - a).abs() < lit(1e-14) {
            return Some(c);
        }
        if (fc < T::zero()) == (fb < T::zero()) {
            b = c;
            fb = fc;
            if side == 1 {
                fa = fa / lit(2.0);
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb = fb / lit(2.0);
            }
            side = -1;
        }
    }
    None
}

fn scan_points<T: Scalar>(sec: &Section<T>, opts: &CycleOptions) -> Vec<T> {
    let u2 = sec.p2.u.as_f64();
    let span = opts.u_max - u2;
    let n = opts.n_scan.max(3);
    let lo = opts.min_offset.log10();
    (0..n)
        .map(|i| {
            let x = 10f64.powf(lo * (1.0 - i as f64 / (n - 1) as f64));
            lit(u2 + span * x * (1.0 - 1e-9))
        })
        .collect()
}

fn brackets<T: Scalar>(
    p: &Params<T>,
    sec: &Section<T>,
    dir: Direction,
    opts: &CycleOptions,
    grid: &[T],
) -> Vec<((T, T), (T, T))> {
    let d: Vec<Option<T>> = grid.par_iter().map(|&s| displacement(p, sec, s, dir, opts)).collect();
    let mut out = Vec::new();
    for i in 1..grid.len() {
        if let (Some(fa), Some(fb)) = (d[i - 1], d[i]) {
            // Attracting fixed points of the map in use: displacement goes from + to −.
            if fa > T::zero() && fb <= T::zero() {
                out.push(((grid[i - 1], fa), (grid[i], fb)));
            }
        }
    }
    out
}

fn orbit_points<T: Scalar>(p: &Params<T>, start: State<T>, period: T, dir: Direction, tol: T) -> Result<Vec<State<T>>> {
    let tr = integrate_dir(p, start, period, tol, dir)?;
    let mut pts: Vec<State<T>> = tr.states().collect();
    if dir == Direction::Backward {
        pts.reverse();
    }
    Ok(pts)
}

/// All limit cycles crossing the section, ordered by section coordinate.
pub fn find_limit_cycles<T: Scalar>(p: &Params<T>) -> Result<Vec<LimitCycle<T>>> {
    find_limit_cycles_with(p, &CycleOptions::default())
}

pub fn find_limit_cycles_with<T: Scalar>(p: &Params<T>, opts: &CycleOptions) -> Result<Vec<LimitCycle<T>>> {
    let sec = Section::of(p)?;
    let grid = scan_points(&sec, opts);
    let mut found: Vec<(T, Direction)> = Vec::new();
    for dir in [Direction::Forward, Direction::Backward] {
        for (a, b) in brackets(p, &sec, dir, opts, &grid) {
            if let Some(s) = refine(p, &sec, dir, opts, a, b) {
                if !found.iter().any(|(f, _)| (*f - s).abs() < lit(1e-6)) {
                    found.push((s, dir));
                }
            }
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    let tol = lit::<T>(opts.tol);
    let h = lit::<T>(1e-6);
    let mut cycles = Vec::new();
    for (s, dir) in found {
        let Some((r, period)) = return_map(p, &sec, s, dir, opts) else { continue };
        if (r - s).abs() >= lit(opts.residual) {
            continue;
        }
        let (Some((rp, _)), Some((rm, _))) =
            (return_map(p, &sec, s + h, dir, opts), return_map(p, &sec, s - h, dir, opts))
        else {
            continue;
        };
        let slope = (rp - rm) / (h + h);
        let floquet = match dir {
            Direction::Forward => slope,
            Direction::Backward => T::one() / slope,
        };
        let start = State::new(s, sec.p2.v);
        cycles.push(LimitCycle {
            section_point: start,
            period,
            points: orbit_points(p, start, period, dir, tol)?,
            floquet,
            stable: floquet.abs() < T::one(),
        });
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_is_increasing_and_inside() {
        let p = Params::new(0.363, 0.16, 0.25, 1.705).unwrap();
        let sec = Section::of(&p).unwrap();
        let g: Vec<f64> = scan_points(&sec, &CycleOptions::default());
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] > sec.p2.u && *g.last().unwrap() < 1.0);
    }

    #[test]
    fn no_p2_is_precondition_error() {
        let p = Params::new(0.205, 0.22, 0.25, 1.8).unwrap();
        assert!(matches!(find_limit_cycles(&p), Err(Error::Precondition(_))));
    }
}
