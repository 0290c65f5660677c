//! Location in `Q` of the saddle connection that bounds the basin of P₂.
//!
//! When P₁ is an interior saddle the connection is its homoclinic loop,
//! `W^u_NE(P₁) = W^s_SW(P₁)`. When P₁ has merged into the origin (Σ₂ < 0)
//! and the origin is of saddle-attracting type, the loop becomes the
//! polycycle `(0,0) → (1,0) → (0,0)`: the unstable manifold of `(1,0)`
//! meets the separatrix entering the origin along the ray
//! `u/v = (Q−1−M)/(1+M−C)`.

use serde::{Deserialize, Serialize};

use crate::equilibria::{interior_equilibria, EquilibriumKind};
use crate::error::{Error, Result};
use crate::model::{Params, State};
use crate::scalar::{lit, Scalar};

use super::integrate::{integrate_events, Direction, Flow};
use super::manifolds::{branch_time, saddle_eigen};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConnectionKind {
    /// Loop of the interior saddle P₁.
    Homoclinic,
    /// Polycycle through the origin and `(1, 0)`.
    Heteroclinic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomoclinicResult<T> {
    pub q: T,
    pub kind: ConnectionKind,
    pub separation: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomoclinicOptions {
    pub tol: f64,
    /// Seed offset along the saddle eigenvectors.
    pub seed: f64,
    /// Distance from the origin of the seed on its separatrix.
    pub origin_seed: f64,
    pub t_max: f64,
    /// Time cap for the origin separatrix, which leaves the origin at speed O(r²).
    pub t_max_origin: f64,
    pub sep_tol: f64,
    pub q_tol: f64,
}

impl Default for HomoclinicOptions {
    fn default() -> Self {
        Self { tol: 1e-11, seed: 1e-6, origin_seed: 1e-2, t_max: 1e4, t_max_origin: 2e5, sep_tol: 1e-8, q_tol: 1e-12 }
    }
}

/// Manifold pair and test ray at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionSetup<T> {
    pub kind: ConnectionKind,
    /// Seed of the unstable branch, integrated forward.
    pub unstable_seed: State<T>,
    /// Seed of the stable branch, integrated backward.
    pub stable_seed: State<T>,
    pub ray_origin: State<T>,
    /// Unit direction of the test ray.
    pub ray_dir: (T, T),
    /// Integration time caps for the unstable and stable branches.
    pub t_unstable: f64,
    pub t_stable: f64,
}

/// Picks the connection type available at `p`.
pub fn connection_setup<T: Scalar>(p: &Params<T>, opts: &HomoclinicOptions) -> Result<ConnectionSetup<T>> {
    let eqs = interior_equilibria(p);
    let p2 = eqs
        .iter()
        .find(|e| e.kind == EquilibriumKind::P2)
        .map(|e| e.point)
        .ok_or_else(|| Error::Precondition("no interior equilibrium P2".into()))?;
    let eps = lit::<T>(opts.seed);
    if let Ok((p1, (ls, es), (lu, eu))) = saddle_eigen(p) {
        let (du, dv) = (p2.u - p1.u, p2.v - p1.v);
        let len = du.hypot(dv);
        return Ok(ConnectionSetup {
            kind: ConnectionKind::Homoclinic,
            unstable_seed: State::new(p1.u + eps * eu.0, p1.v + eps * eu.1),
            stable_seed: State::new(p1.u + eps * es.0, p1.v + eps * es.1),
            ray_origin: p2,
            ray_dir: (du / len, dv / len),
            t_unstable: branch_time(lu.as_f64(), opts.t_max),
            t_stable: branch_time(ls.as_f64(), opts.t_max),
        });
    }
    let one = T::one();
    let (c, m, q) = (p.c, p.m, p.q);
    let saddle_attracting = q > one + m && c < one + m && c > m && c * (q - one) < m * q;
    if !saddle_attracting {
        return Err(Error::Precondition(
            "neither an interior saddle nor a saddle-attracting origin: no connection to locate".into(),
        ));
    }
    // Unstable eigenvector of (1,0) for λ = C − M, pointing into v > 0.
    let (eu0, eu1) = (-q, one + c - m);
    let nu = eu0.hypot(eu1);
    let r = (q - one - m) / (one + m - c);
    let nr = r.hypot(one);
    let rho = lit::<T>(opts.origin_seed);
    let len = p2.norm();
    Ok(ConnectionSetup {
        kind: ConnectionKind::Heteroclinic,
        unstable_seed: State::new(one + eps * eu0 / nu, eps * eu1 / nu),
        stable_seed: State::new(rho * r / nr, rho / nr),
        ray_origin: p2,
        ray_dir: (p2.u / len, p2.v / len),
        t_unstable: branch_time((c - m).as_f64(), opts.t_max),
        t_stable: opts.t_max_origin,
    })
}

/// Distance along the ray of the first crossing of the orbit from `seed`.
fn ray_crossing<T: Scalar>(
    p: &Params<T>,
    seed: State<T>,
    dir: Direction,
    setup: &ConnectionSetup<T>,
    opts: &HomoclinicOptions,
    t_max: f64,
) -> Result<Option<T>> {
    let o = setup.ray_origin;
    let (dx, dy) = setup.ray_dir;
    let tiny = lit::<T>(1e-10);
    let mut hit = None;
    integrate_events(
        p,
        seed,
        lit(t_max),
        lit(opts.tol),
        dir,
        |y| (y[0] - o.u) * dy - (y[1] - o.v) * dx,
        |_, s, _| {
            let along = (s.u - o.u) * dx + (s.v - o.v) * dy;
            if along > T::zero() {
                hit = Some(along);
                return Flow::Stop;
            }
            Flow::Continue
        },
        |_, s| {
            if s.norm() < tiny || s.dist(&o) < tiny || s.u > lit(2.0) || s.v > lit(50.0) {
                Flow::Stop
            } else {
                Flow::Continue
            }
        },
    )?;
    Ok(hit)
}

/// Signed separation (unstable minus stable crossing distance along the ray).
///
/// A missing unstable crossing gives `+∞`, a missing stable crossing `−∞`.
pub fn connection_separation<T: Scalar>(p: &Params<T>, opts: &HomoclinicOptions) -> Result<(T, ConnectionKind)> {
    let setup = connection_setup(p, opts)?;
    let a = ray_crossing(p, setup.unstable_seed, Direction::Forward, &setup, opts, setup.t_unstable)?;
    let b = ray_crossing(p, setup.stable_seed, Direction::Backward, &setup, opts, setup.t_stable)?;
    let sep = match (a, b) {
        (Some(a), Some(b)) => a - b,
        (None, Some(_)) => T::infinity(),
        (Some(_), None) => T::neg_infinity(),
        (None, None) => T::nan(),
    };
    Ok((sep, setup.kind))
}

/// Bisection in `Q` on `[q_lo, q_hi]` for a zero of the connection separation.
pub fn homoclinic_q<T: Scalar>(c: T, m: T, n: T, q_lo: T, q_hi: T) -> Result<HomoclinicResult<T>> {
    homoclinic_q_with(c, m, n, q_lo, q_hi, &HomoclinicOptions::default())
}

pub fn homoclinic_q_with<T: Scalar>(c: T, m: T, n: T, q_lo: T, q_hi: T, opts: &HomoclinicOptions) -> Result<HomoclinicResult<T>> {
    if !(q_lo < q_hi) {
        return Err(Error::Domain(format!("empty Q bracket [{q_lo}, {q_hi}]")));
    }
    let base = Params::new(c, m, n, q_lo)?;
    let eval = |q: T| connection_separation(&base.with_q(q), opts);
    let (mut a, mut b) = (q_lo, q_hi);
    let (fa, _) = eval(a)?;
    let (fb, _) = eval(b)?;
    if fa.is_nan() || fb.is_nan() || (fa < T::zero()) == (fb < T::zero()) {
        return Err(Error::NotFound(format!("separation has no sign change on [{q_lo}, {q_hi}]: {fa}, {fb}")));
    }
    let neg_at_a = fa < T::zero();
    let mut best: Option<(T, T, ConnectionKind)> = None;
    for _ in 0..200 {
        let mid = (a + b) / lit(2.0);
        let (fm, kind) = eval(mid)?;
        if fm.is_nan() {
            return Err(Error::NotFound(format!("separation undefined at Q = {mid}")));
        }
        if best.is_none_or(|(_, f, _)| fm.abs() < f.abs()) {
            best = Some((mid, fm, kind));
        }
        if fm.abs() < lit(opts.sep_tol) || (b - a).abs() < lit(opts.q_tol) {
            break;
        }
        if (fm < T::zero()) == neg_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    let (q, separation, kind) = best.expect("at least one bisection step");
    if !separation.is_finite() {
        return Err(Error::NotFound(format!("separation jumps across Q = {q} without a connection")));
    }
    Ok(HomoclinicResult { q, kind, separation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setup_kind_follows_sigma2() {
        let opts = HomoclinicOptions::default();
        let p = Params::new(0.363, 0.16, 0.25, 1.7).unwrap();
        assert_eq!(connection_setup(&p, &opts).unwrap().kind, ConnectionKind::Heteroclinic);
        let p = Params::new(0.363, 0.16, 0.25, 1.82).unwrap();
        assert_eq!(connection_setup(&p, &opts).unwrap().kind, ConnectionKind::Homoclinic);
    }

    #[test]
    fn empty_bracket_is_domain_error() {
        assert!(matches!(homoclinic_q(0.363, 0.16, 0.25, 1.7, 1.6), Err(Error::Domain(_))));
    }
}
