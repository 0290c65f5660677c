//! Stable and unstable manifolds of the interior saddle P₁.

use serde::{Deserialize, Serialize};

use crate::equilibria::{classify_interior, interior_equilibria, EquilibriumKind, StabilityTag};
use crate::error::{Error, Result};
use crate::model::{jacobian, Eigenvalues, Params, State};
use crate::scalar::{lit, Scalar};

use super::integrate::{integrate_events, Direction, Flow, Trajectory};

/// Seed offset from the saddle along each eigendirection.
pub const SEED: f64 = 1e-6;

/// Longest time any branch is followed, however weak the saddle.
pub const T_CAP: f64 = 1e7;

/// Time cap long enough to leave a saddle of rate `lambda` from the seed, at least `base`.
pub fn branch_time(lambda: f64, base: f64) -> f64 {
    (40.0 / lambda.abs()).max(base).min(T_CAP)
}

/// Branch direction of motion: `NE` moves along `+e`, `SW` along `−e`,
/// where `e` is the unit eigenvector with positive first component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    NE,
    SW,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldBranch<T> {
    pub stable: bool,
    pub orientation: Orientation,
    /// Unit eigenvector `e` of `J(P₁)` used for seeding.
    pub eigenvector: (T, T),
    pub eigenvalue: T,
    /// Orbit from the seed, in the direction of integration.
    pub trajectory: Trajectory<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleManifolds<T> {
    pub saddle: State<T>,
    pub unstable_ne: ManifoldBranch<T>,
    pub unstable_sw: ManifoldBranch<T>,
    pub stable_ne: ManifoldBranch<T>,
    pub stable_sw: ManifoldBranch<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldOptions {
    pub seed: f64,
    pub tol: f64,
    /// Minimum integration time cap, raised to `40/|λ|` for weak saddles.
    pub t_max: f64,
}

impl Default for ManifoldOptions {
    fn default() -> Self {
        Self { seed: SEED, tol: 1e-11, t_max: 1e4 }
    }
}

/// Saddle P₁ with its eigenpairs `(λ_s, e_s), (λ_u, e_u)`.
pub fn saddle_eigen<T: Scalar>(p: &Params<T>) -> Result<(State<T>, (T, (T, T)), (T, (T, T)))> {
    let p1 = interior_equilibria(p)
        .into_iter()
        .find(|e| e.kind == EquilibriumKind::P1)
        .ok_or_else(|| Error::Precondition("no interior saddle P1".into()))?;
    if classify_interior(p, &p1)?.tag != StabilityTag::Saddle {
        return Err(Error::Precondition("P1 is not a saddle".into()));
    }
    let j = jacobian(p, p1.point);
    let Eigenvalues::Real(ls, lu) = j.eigenvalues() else {
        return Err(Error::Precondition("complex eigenvalues at P1".into()));
    };
    Ok((p1.point, (ls, j.eigenvector(ls)), (lu, j.eigenvector(lu))))
}

/// Orbit from `seed` until the time cap, an approach to the origin or P₂ neighbourhood, or leaving the box.
pub fn trace_branch<T: Scalar>(
    p: &Params<T>,
    seed: State<T>,
    dir: Direction,
    opts: &ManifoldOptions,
) -> Result<Trajectory<T>> {
    let mut samples = vec![(T::zero(), seed)];
    let tiny = lit::<T>(1e-9);
    integrate_events(
        p,
        seed,
        lit(opts.t_max),
        lit(opts.tol),
        dir,
        |_| T::one(),
        |_, _, _| Flow::Continue,
        |t, s| {
            samples.push((t, s));
            if s.norm() < tiny || s.u > lit(2.0) || s.v > lit(50.0) {
                Flow::Stop
            } else {
                Flow::Continue
            }
        },
    )?;
    Ok(Trajectory { samples, tolerance: lit(opts.tol) })
}

pub fn saddle_manifolds<T: Scalar>(p: &Params<T>) -> Result<SaddleManifolds<T>> {
    saddle_manifolds_with(p, &ManifoldOptions::default())
}

pub fn saddle_manifolds_with<T: Scalar>(p: &Params<T>, opts: &ManifoldOptions) -> Result<SaddleManifolds<T>> {
    let (p1, (ls, es), (lu, eu)) = saddle_eigen(p)?;
    let eps = lit::<T>(opts.seed);
    let branch_opts = |lambda: T| ManifoldOptions { t_max: branch_time(lambda.as_f64(), opts.t_max), ..*opts };
    let seed = |e: (T, T), sign: T| State::new(p1.u + sign * eps * e.0, p1.v + sign * eps * e.1);
    let branch = |stable: bool, sign: T| -> Result<ManifoldBranch<T>> {
        let (lambda, e) = if stable { (ls, es) } else { (lu, eu) };
        let dir = if stable { Direction::Backward } else { Direction::Forward };
        // Unstable orbits move away from P₁ along the seed side; stable ones move toward it.
        let moves_plus = (sign > T::zero()) != stable;
        Ok(ManifoldBranch {
            stable,
            orientation: if moves_plus { Orientation::NE } else { Orientation::SW },
            eigenvector: e,
            eigenvalue: lambda,
            trajectory: trace_branch(p, seed(e, sign), dir, &branch_opts(lambda))?,
        })
    };
    let one = T::one();
    Ok(SaddleManifolds {
        saddle: p1,
        unstable_ne: branch(false, one)?,
        unstable_sw: branch(false, -one)?,
        stable_ne: branch(true, -one)?,
        stable_sw: branch(true, one)?,
    })
}
