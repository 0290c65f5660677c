//! Dormand-Prince 5(4) integrator with dense output and event location.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{vector_field, Params, State};
use crate::scalar::{lit, Scalar};

/// Largest negative coordinate silently clipped to zero.
pub const CLIP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub samples: Vec<(T, State<T>)>,
    pub tolerance: T,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last(&self) -> State<T> {
        self.samples.last().map(|s| s.1).unwrap_or_default()
    }

    pub fn states(&self) -> impl Iterator<Item = State<T>> + '_ {
        self.samples.iter().map(|s| s.1)
    }
}

/// Time direction of the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperOptions<T> {
    /// Relative and absolute local error tolerance.
    pub tol: T,
    pub h_init: T,
    pub h_max: T,
    /// Steps shorter than `h_min · max(1, |t|)` abort with a stiffness error.
    pub h_min: T,
}

impl<T: Scalar> StepperOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { tol, h_init: lit(1e-3), h_max: lit(1e6), h_min: lit(1e-14) }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type V2<T> = [T; 2];

#[inline]
fn axpy<T: Scalar>(y: V2<T>, terms: &[(f64, V2<T>)], h: T) -> V2<T> {
    let mut out = y;
    for &(c, k) in terms {
        let c = lit::<T>(c) * h;
        out[0] = out[0] + c * k[0];
        out[1] = out[1] + c * k[1];
    }
    out
}

/// Adaptive explicit stepper for an autonomous planar field.
pub struct Dopri<T: Scalar, F: Fn(V2<T>) -> V2<T>> {
    f: F,
    opts: StepperOptions<T>,
    pub t: T,
    pub y: V2<T>,
    h: T,
    k1: V2<T>,
    // Data of the last accepted step for dense output.
    t_prev: T,
    y_prev: V2<T>,
    h_last: T,
    cont: [V2<T>; 5],
    k1_prev: V2<T>,
    pub steps: usize,
}

impl<T: Scalar, F: Fn(V2<T>) -> V2<T>> Dopri<T, F> {
    pub fn new(f: F, t0: T, y0: V2<T>, opts: StepperOptions<T>) -> Self {
        let k1 = f(y0);
        Self {
            f,
            h: opts.h_init,
            opts,
            t: t0,
            y: y0,
            k1,
            t_prev: t0,
            y_prev: y0,
            h_last: T::zero(),
            cont: [y0; 5],
            k1_prev: k1,
            steps: 0,
        }
    }

    /// One trial step of size `h` from `(y, k1)`: returns `(y_new, k7, err_norm, stages)`.
    fn trial(&self, y: V2<T>, k1: V2<T>, h: T) -> (V2<T>, V2<T>, T, [V2<T>; 7]) {
        let f = &self.f;
        let k2 = f(axpy(y, &[(A21, k1)], h));
        let k3 = f(axpy(y, &[(A31, k1), (A32, k2)], h));
        let k4 = f(axpy(y, &[(A41, k1), (A42, k2), (A43, k3)], h));
        let k5 = f(axpy(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], h));
        let k6 = f(axpy(y, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)], h));
        let y_new = axpy(y, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)], h);
        let k7 = f(y_new);
        let err = axpy(
            [T::zero(); 2],
            &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
            h,
        );
        let tol = self.opts.tol;
        let mut norm = T::zero();
        for i in 0..2 {
            let sc = tol + tol * y[i].abs().max(y_new[i].abs());
            norm = norm.max((err[i] / sc).abs());
        }
        (y_new, k7, norm, [k1, k2, k3, k4, k5, k6, k7])
    }

    /// Advances by one accepted step, never beyond `t_stop`.
    pub fn step(&mut self, t_stop: T) -> Result<()> {
        let remaining = t_stop - self.t;
        if remaining <= T::zero() {
            return Ok(());
        }
        let mut h = self.h.min(self.opts.h_max);
        let mut hit_stop = false;
        if h >= remaining {
            h = remaining;
            hit_stop = true;
        }
        loop {
            let h_min = self.opts.h_min * self.t.abs().max(T::one());
            if h < h_min && !hit_stop {
                return Err(Error::Stiffness {
                    t: self.t.as_f64(),
                    u: self.y[0].as_f64(),
                    v: self.y[1].as_f64(),
                });
            }
            let (y_new, k7, err, k) = self.trial(self.y, self.k1, h);
            let finite = y_new[0].is_finite() && y_new[1].is_finite() && err.is_finite();
            if finite && err <= T::one() {
                let ydiff = [y_new[0] - self.y[0], y_new[1] - self.y[1]];
                let bspl = [h * k[0][0] - ydiff[0], h * k[0][1] - ydiff[1]];
                let r4 = [ydiff[0] - h * k7[0] - bspl[0], ydiff[1] - h * k7[1] - bspl[1]];
                let r5 = axpy(
                    [T::zero(); 2],
                    &[(D1, k[0]), (D3, k[2]), (D4, k[3]), (D5, k[4]), (D6, k[5]), (D7, k[6])],
                    h,
                );
                self.cont = [self.y, ydiff, bspl, r4, r5];
                self.t_prev = self.t;
                self.y_prev = self.y;
                self.k1_prev = self.k1;
                self.h_last = h;
                self.t = if hit_stop { t_stop } else { self.t + h };
                self.y = clip(y_new);
                self.k1 = if self.y == y_new { k7 } else { (self.f)(self.y) };
                self.steps += 1;
                let fac = if err == T::zero() {
                    lit(10.0)
                } else {
                    (lit::<T>(0.9) * err.powf(lit(-0.2))).min(lit(10.0)).max(lit(0.2))
                };
                let h_next = h * fac;
                // Keep the pre-truncation size when the step was shortened to hit t_stop.
                self.h = if hit_stop { self.h.max(h_next) } else { h_next };
                return Ok(());
            }
            let fac = if finite { (lit::<T>(0.9) * err.powf(lit(-0.2))).max(lit(0.1)) } else { lit(0.1) };
            h = h * fac.min(lit(0.9));
            hit_stop = false;
        }
    }

    /// Dense-output state at `t` inside the last accepted step.
    pub fn dense(&self, t: T) -> V2<T> {
        if self.h_last == T::zero() {
            return self.y;
        }
        let th = (t - self.t_prev) / self.h_last;
        let th1 = T::one() - th;
        let c = &self.cont;
        let mut out = [T::zero(); 2];
        for i in 0..2 {
            out[i] = c[0][i] + th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
        }
        out
    }

    /// Start of the last accepted step.
    pub fn prev(&self) -> (T, V2<T>) {
        (self.t_prev, self.y_prev)
    }

    /// Accurate state at `t` inside the last accepted step by a single fresh step
    /// from its start (the step is no longer than the accepted one).
    pub fn exact_in_step(&self, t: T) -> V2<T> {
        let h = t - self.t_prev;
        if h == T::zero() {
            return self.y_prev;
        }
        self.trial(self.y_prev, self.k1_prev, h).0
    }

    /// Locates a zero of `g` inside the last accepted step, given its values at both ends.
    pub fn locate<G: Fn(V2<T>) -> T>(&self, g: &G, g0: T, g1: T) -> (T, V2<T>) {
        let (mut ta, mut tb) = (self.t_prev, self.t);
        let (mut ga, mut gb) = (g0, g1);
        // Illinois iteration on the dense interpolant.
        let mut side = 0i8;
        for _ in 0..60 {
            let tc = if gb != ga { tb - gb * (tb - ta) / (gb - ga) } else { (ta + tb) / lit(2.0) };
            let tc = tc.max(ta.min(tb)).min(ta.max(tb));
            let gc = g(self.dense(tc));
            if gc == T::zero() || (tb - ta).abs() <= lit::<T>(4.0) * T::epsilon() * tb.abs().max(T::one()) {
                ta = tc;
                tb = tc;
                break;
            }
            if (gc < T::zero()) == (gb < T::zero()) {
                tb = tc;
                gb = gc;
                if side == 1 {
                    ga = ga / lit(2.0);
                }
                side = 1;
            } else {
                ta = tc;
                ga = gc;
                if side == -1 {
                    gb = gb / lit(2.0);
                }
                side = -1;
            }
        }
        let mut t = if ga.abs() < gb.abs() { ta } else { tb };
        // Polish against the step map itself (dense output is only 4th order).
        let mut y = self.exact_in_step(t);
        for _ in 0..4 {
            let gy = g(y);
            if gy == T::zero() {
                break;
            }
            let [du, dv] = (self.f)(y);
            let eps = lit::<T>(1e-7) * du.abs().max(dv.abs()).max(T::one());
            let yp = [y[0] + eps * du, y[1] + eps * dv];
            let slope = (g(yp) - gy) / eps;
            if slope == T::zero() {
                break;
            }
            let dt = -gy / slope;
            if dt.abs() > (self.t - self.t_prev).abs() {
                break;
            }
            t = t + dt;
            y = self.exact_in_step(t);
        }
        (t, y)
    }
}

fn clip<T: Scalar>(y: V2<T>) -> V2<T> {
    let mut out = y;
    for c in out.iter_mut() {
        if *c < T::zero() && *c > -lit::<T>(CLIP) {
            *c = T::zero();
        }
    }
    out
}

/// Planar field of the model in the requested time direction.
pub fn field<T: Scalar>(p: Params<T>, dir: Direction) -> impl Fn(V2<T>) -> V2<T> {
    move |y: V2<T>| {
        let (du, dv) = vector_field(&p, State::new(y[0], y[1]));
        match dir {
            Direction::Forward => [du, dv],
            Direction::Backward => [-du, -dv],
        }
    }
}

fn check_tol<T: Scalar>(tol: T) -> Result<()> {
    if !(tol >= lit(1e-13) && tol <= lit(1e-3)) {
        return Err(Error::Domain(format!("tolerance must lie in [1e-13, 1e-3], got {tol}")));
    }
    Ok(())
}

fn check_start<T: Scalar>(s0: State<T>) -> Result<()> {
    if !(s0.u >= T::zero() && s0.v >= T::zero() && s0.u.is_finite() && s0.v.is_finite()) {
        return Err(Error::Domain(format!("initial state must lie in the closed first quadrant, got ({}, {})", s0.u, s0.v)));
    }
    Ok(())
}

/// Trajectory from `s0` over `[0, t_end]`, one sample per accepted step.
pub fn integrate<T: Scalar>(p: &Params<T>, s0: State<T>, t_end: T, tol: T) -> Result<Trajectory<T>> {
    integrate_dir(p, s0, t_end, tol, Direction::Forward)
}

/// As [`integrate`], in either time direction (time is reported as elapsed time).
pub fn integrate_dir<T: Scalar>(p: &Params<T>, s0: State<T>, t_end: T, tol: T, dir: Direction) -> Result<Trajectory<T>> {
    check_tol(tol)?;
    check_start(s0)?;
    let mut solver = Dopri::new(field(*p, dir), T::zero(), [s0.u, s0.v], StepperOptions::with_tol(tol));
    let mut samples = vec![(T::zero(), s0)];
    while solver.t < t_end {
        solver.step(t_end)?;
        samples.push((solver.t, State::new(solver.y[0], solver.y[1])));
    }
    Ok(Trajectory { samples, tolerance: tol })
}

/// Event callback outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

/// Integrates until `t_end`, calling `on_step` after every accepted step and
/// `on_event` at every zero of `g` (crossing direction given by `rising`).
pub fn integrate_events<T, G, S, E>(
    p: &Params<T>,
    s0: State<T>,
    t_end: T,
    tol: T,
    dir: Direction,
    g: G,
    mut on_event: E,
    mut on_step: S,
) -> Result<(T, State<T>)>
where
    T: Scalar,
    G: Fn(V2<T>) -> T,
    E: FnMut(T, State<T>, bool) -> Flow,
    S: FnMut(T, State<T>) -> Flow,
{
    check_tol(tol)?;
    check_start(s0)?;
    let mut solver = Dopri::new(field(*p, dir), T::zero(), [s0.u, s0.v], StepperOptions::with_tol(tol));
    let mut g_prev = g(solver.y);
    while solver.t < t_end {
        solver.step(t_end)?;
        let g_new = g(solver.y);
        if (g_prev < T::zero() && g_new >= T::zero()) || (g_prev > T::zero() && g_new <= T::zero()) {
            let rising = g_new > g_prev;
            let (te, ye) = solver.locate(&g, g_prev, g_new);
            if on_event(te, State::new(ye[0], ye[1]), rising) == Flow::Stop {
                return Ok((te, State::new(ye[0], ye[1])));
            }
        }
        g_prev = g_new;
        if on_step(solver.t, State::new(solver.y[0], solver.y[1])) == Flow::Stop {
            break;
        }
    }
    Ok((solver.t, State::new(solver.y[0], solver.y[1])))
}
