//! Forward ω-limit classification.

use serde::{Deserialize, Serialize};

use crate::equilibria::{classify_carrying_capacity, classify_interior, interior_equilibria, EquilibriumKind};
use crate::error::{Error, Result};
use crate::model::{Params, State};
use crate::scalar::{lit, Scalar};

use super::integrate::{integrate_events, Direction, Flow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaLabel {
    Origin,
    CarryingCapacity,
    P2,
    StableCycle,
    Undetermined,
}

impl OmegaLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            OmegaLabel::Origin => "Origin",
            OmegaLabel::CarryingCapacity => "CarryingCapacity",
            OmegaLabel::P2 => "P2",
            OmegaLabel::StableCycle => "StableCycle",
            OmegaLabel::Undetermined => "Undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaOptions {
    pub tol: f64,
    /// Distance to an equilibrium counted as arrival.
    pub proximity: f64,
    /// Time the trajectory must stay within `proximity`.
    pub sustain: f64,
    /// Distance to the origin required on top of the attraction certificate.
    pub origin_radius: f64,
    pub t_max: f64,
    pub max_steps: usize,
    /// Relative change of successive section returns accepted as periodic.
    pub cycle_rel: f64,
    /// Smallest section amplitude `u − u₂` reported as a cycle.
    pub min_amplitude: f64,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            proximity: 1e-6,
            sustain: 50.0,
            origin_radius: 1e-4,
            t_max: 1e13,
            max_steps: 2_000_000,
            cycle_rel: 1e-6,
            min_amplitude: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaResult<T> {
    pub label: OmegaLabel,
    pub endpoint: State<T>,
    pub t: T,
}

/// Attracting equilibria of a parameter point, computed once per raster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attractors<T> {
    pub carrying_capacity: bool,
    pub p2: Option<State<T>>,
    /// Interior equilibrium used for the return section, attracting or not.
    pub section: Option<State<T>>,
}

impl<T: Scalar> Attractors<T> {
    pub fn of(p: &Params<T>) -> Self {
        let carrying_capacity = classify_carrying_capacity(p).map(|c| c.is_attractor()).unwrap_or(false);
        let mut p2 = None;
        let mut section = None;
        for e in interior_equilibria(p) {
            if e.kind == EquilibriumKind::P2 {
                section = Some(e.point);
                if classify_interior(p, &e).map(|c| c.is_attractor()).unwrap_or(false) {
                    p2 = Some(e.point);
                }
            }
        }
        Self { carrying_capacity, p2, section }
    }
}

/// Sufficient condition for convergence to the origin: `u/v` and `v` both
/// decrease from `s` on, which keeps the condition true for all later times.
pub fn origin_certificate<T: Scalar>(p: &Params<T>, s: State<T>) -> bool {
    if !(s.v > T::zero()) || s.u < T::zero() {
        return false;
    }
    let one = T::one();
    let r = s.u / s.v;
    if !(p.c * r < p.m) {
        return false;
    }
    let drift = r * (one + p.m - p.c).max(T::zero()) + (one + p.m - p.q) + p.n * s.v * (r + one);
    drift < T::zero()
}

fn pick_label<T: Scalar>(att: &Attractors<T>, s: State<T>, prox: T) -> Option<OmegaLabel> {
    if att.carrying_capacity && s.dist(&State::new(T::one(), T::zero())) < prox {
        return Some(OmegaLabel::CarryingCapacity);
    }
    if let Some(p2) = att.p2 {
        if s.dist(&p2) < prox {
            return Some(OmegaLabel::P2);
        }
    }
    None
}

struct CycleWatch<T> {
    returns: Vec<T>,
    ratios: Vec<T>,
}

impl<T: Scalar> CycleWatch<T> {
    fn push(&mut self, s: T, u2: T, opts: &OmegaOptions) -> bool {
        self.returns.push(s);
        let k = self.returns.len();
        if k < 3 {
            return false;
        }
        let d1 = self.returns[k - 1] - self.returns[k - 2];
        let d0 = self.returns[k - 2] - self.returns[k - 3];
        let amp = s - u2;
        if amp < lit(opts.min_amplitude) {
            return false;
        }
        let rel = lit::<T>(opts.cycle_rel);
        if d1.abs() <= rel * s {
            return true;
        }
        if d0 == T::zero() {
            return false;
        }
        let rho = d1 / d0;
        self.ratios.push(rho);
        let n = self.ratios.len();
        if n < 2 || !(rho.abs() < T::one()) {
            return false;
        }
        let consistent = (rho - self.ratios[n - 2]).abs() < lit::<T>(0.05) * rho.abs().max(lit(1e-3));
        let remaining = d1.abs() * rho.abs() / (T::one() - rho.abs());
        let limit = s + d1 * rho / (T::one() - rho);
        consistent && remaining <= rel * s && limit - u2 > lit(opts.min_amplitude)
    }
}

/// ω-limit of the forward orbit through `s0`.
pub fn omega_limit<T: Scalar>(p: &Params<T>, s0: State<T>) -> Result<OmegaLabel> {
    Ok(omega_limit_with(p, s0, &Attractors::of(p), &OmegaOptions::default())?.label)
}

pub fn omega_limit_with<T: Scalar>(
    p: &Params<T>,
    s0: State<T>,
    att: &Attractors<T>,
    opts: &OmegaOptions,
) -> Result<OmegaResult<T>> {
    if !(s0.u > T::zero() && s0.v > T::zero()) {
        return Err(Error::Domain(format!("omega_limit needs a start in the open quadrant, got ({}, {})", s0.u, s0.v)));
    }
    let prox = lit::<T>(opts.proximity);
    let sustain = lit::<T>(opts.sustain);
    let origin_radius = lit::<T>(opts.origin_radius);
    let tiny = lit::<T>(1e-10);
    let (u2, v2) = att.section.map(|s| (s.u, s.v)).unwrap_or((T::zero(), -T::one()));
    let has_section = att.section.is_some();

    let mut label = OmegaLabel::Undetermined;
    let mut near: Option<(OmegaLabel, T)> = None;
    let mut certified = false;
    let mut prev_norm = s0.norm();
    let mut steps = 0usize;
    let mut watch = CycleWatch { returns: Vec::new(), ratios: Vec::new() };
    let mut cycle_found = false;

    let res = integrate_events(
        p,
        s0,
        lit(opts.t_max),
        lit(opts.tol),
        Direction::Forward,
        |y| if has_section { y[1] - v2 } else { T::one() },
        |_, s, rising| {
            if rising && s.u > u2 && watch.push(s.u, u2, opts) {
                cycle_found = true;
                return Flow::Stop;
            }
            Flow::Continue
        },
        |t, s| {
            steps += 1;
            if steps > opts.max_steps {
                return Flow::Stop;
            }
            let norm = s.norm();
            if !certified && origin_certificate(p, s) {
                certified = true;
            }
            if (certified && norm < origin_radius) || (norm < tiny && norm < prev_norm) {
                label = OmegaLabel::Origin;
                return Flow::Stop;
            }
            prev_norm = norm;
            match (pick_label(att, s, prox), near) {
                (Some(l), Some((nl, t0))) if l == nl => {
                    if t - t0 >= sustain {
                        label = l;
                        return Flow::Stop;
                    }
                }
                (Some(l), _) => near = Some((l, t)),
                (None, _) => near = None,
            }
            Flow::Continue
        },
    );
    match res {
        Ok((t, end)) => {
            if cycle_found {
                label = OmegaLabel::StableCycle;
            }
            Ok(OmegaResult { label, endpoint: end, t })
        }
        Err(Error::Stiffness { t, u, v }) => {
            let end = State::new(lit::<T>(u), lit::<T>(v));
            let label = if end.norm() < tiny { OmegaLabel::Origin } else { OmegaLabel::Undetermined };
            Ok(OmegaResult { label, endpoint: end, t: lit(t) })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_requires_small_ratio() {
        let p = Params::new(0.363, 0.16, 0.25, 1.8).unwrap();
        assert!(origin_certificate(&p, State::new(0.001, 0.1)));
        assert!(!origin_certificate(&p, State::new(0.5, 0.1)));
    }

    #[test]
    fn extinction_example() {
        let p = Params::new(10.05, 1.05, 10.0, 3.05).unwrap();
        assert_eq!(omega_limit(&p, State::new(0.5, 0.5)).unwrap(), OmegaLabel::Origin);
    }

    #[test]
    fn prey_only_example() {
        let p = Params::new(0.205, 0.22, 0.25, 1.8).unwrap();
        assert_eq!(omega_limit(&p, State::new(0.5, 0.5)).unwrap(), OmegaLabel::CarryingCapacity);
    }
}
