//! Hopf set in the `(U, V)` chart, the first Lyapunov quantity and the
//! Bautin point.
//!
//! With `(C, M)` fixed, the equilibrium coordinates `(U, V)` parametrise
//! `(N, Q)` through [`psi_map`]; the Hopf set is `T(C, M, U, V) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Mat2;
use crate::scalar::{compensated_sum, lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum L1Sign {
    Supercritical,
    Subcritical,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfData<T> {
    #[serde(rename = "U")]
    pub u: T,
    #[serde(rename = "V")]
    pub v: T,
    #[serde(rename = "M_hopf")]
    pub m_hopf: T,
    /// Determinant factor `D` at `M = M_hopf`.
    #[serde(rename = "D_H")]
    pub d_h: T,
    pub w: T,
    pub l1: T,
    /// Scaled quantity `U³·l₁ / (8C(U+V)w²)`.
    #[serde(rename = "L1")]
    pub big_l1: T,
    #[serde(rename = "L1_sign")]
    pub l1_sign: L1Sign,
}

/// Trace factor: `tr J_H = V·T`.
pub fn hopf_t<T: Scalar>(c: T, m: T, u: T, v: T) -> T {
    let s = u + v;
    m * s * s - c * u * (u + lit::<T>(2.0) * v) - u * s * (-T::one() + lit::<T>(2.0) * u + v)
}

/// Determinant factor: `det J_H = U·V²(U+V)²·D`.
pub fn hopf_d<T: Scalar>(c: T, m: T, u: T, v: T) -> T {
    let two = lit::<T>(2.0);
    c * (two * u * u + two * u * v - u) + m * (u - two * u * u + v - lit::<T>(3.0) * u * v - v * v)
}

/// `M` solving `T = 0`.
pub fn hopf_m<T: Scalar>(c: T, u: T, v: T) -> T {
    let s = u + v;
    c * u * (u + lit::<T>(2.0) * v) / (s * s) + u * (-T::one() + lit::<T>(2.0) * u + v) / s
}

/// Jacobian of the system written in the `(U, V)` chart.
pub fn hopf_matrix<T: Scalar>(c: T, m: T, u: T, v: T) -> Mat2<T> {
    let s = u + v;
    let two = lit::<T>(2.0);
    Mat2::new(
        -u * v * s * (-T::one() + two * u + v),
        (u - T::one()) * s * u * u,
        c * v * v * v,
        v * (m * s * s - c * u * (u + two * v)),
    )
}

fn admissible<T: Scalar>(c: T, m: T, u: T, v: T) -> Result<()> {
    if !(u > T::zero() && v > T::zero()) {
        return Err(Error::Admissibility(format!("U, V must be positive, got ({u}, {v})")));
    }
    if !(u < T::one()) {
        return Err(Error::Admissibility(format!("U < 1 required, got {u}")));
    }
    if !(c * u - m * (u + v) > T::zero()) {
        return Err(Error::Admissibility(format!("CU − M(U+V) > 0 violated at ({u}, {v})")));
    }
    Ok(())
}

/// `(N, Q)` for which `(U, V)` is an interior equilibrium.
pub fn psi_map<T: Scalar>(c: T, m: T, u: T, v: T) -> Result<(T, T)> {
    admissible(c, m, u, v)?;
    let s = u + v;
    Ok(((c * u - m * s) / (v * s), (T::one() - u) * s / v))
}

/// Numerator polynomial of the first Lyapunov quantity on the Hopf set.
pub fn l1_polynomial<T: Scalar>(c: T, u: T, v: T) -> T {
    let k = |x: f64| lit::<T>(x);
    let (u2, v2) = (u * u, v * v);
    let (u3, v3) = (u2 * u, v2 * v);
    let (u4, v4) = (u3 * u, v3 * v);
    let u5 = u4 * u;
    let v5 = v4 * v;
    let s = u + v;
    let s2 = s * s;
    let c2 = c * c;

    let b3 = compensated_sum(&[-u, u2, -k(2.0) * u * v, -k(2.0) * v2]);
    let b0 = compensated_sum(&[
        -k(2.0) * u3,
        k(4.0) * u4,
        v,
        -k(9.0) * u * v,
        k(20.0) * u2 * v,
        -k(10.0) * u3 * v,
        -k(6.0) * v2,
        k(28.0) * u * v2,
        -k(28.0) * u2 * v2,
        k(9.0) * v3,
        -k(19.0) * u * v3,
        -k(4.0) * v4,
    ]);
    let b2 = compensated_sum(&[
        k(3.0) * u2,
        -k(12.0) * u3,
        k(12.0) * u4,
        k(3.0) * u * v,
        -k(14.0) * u2 * v,
        k(16.0) * u3 * v,
        k(2.0) * u * v2,
        k(4.0) * v3,
        -k(13.0) * u * v3,
        -k(4.0) * v4,
        -k(5.0) * u2 * v2,
    ]);
    let b1 = compensated_sum(&[
        -k(2.0) * u4,
        k(2.0) * u5,
        k(3.0) * u * v,
        -k(21.0) * u2 * v,
        k(41.0) * u3 * v,
        -k(27.0) * u4 * v,
        -k(10.0) * u * v2,
        k(38.0) * u2 * v2,
        -k(38.0) * u3 * v2,
        k(2.0) * v3,
        -k(8.0) * u2 * v3,
        -k(4.0) * v4,
        k(6.0) * u * v4,
        k(2.0) * v5,
    ]);
    compensated_sum(&[
        -c2 * c * v4 * b3,
        -u * (T::one() - u) * s2 * s * b0,
        -c2 * v3 * b2,
        c * v * s2 * b1,
    ])
}

/// Hopf data at `(U, V)` with `M` placed on the Hopf set.
pub fn lyapunov_l1<T: Scalar>(c: T, u: T, v: T) -> Result<HopfData<T>> {
    let m = hopf_m(c, u, v);
    admissible(c, m, u, v)?;
    let d_h = hopf_d(c, m, u, v);
    if !(d_h > T::zero()) {
        return Err(Error::Precondition(format!("not a Hopf point: D_H = {d_h} <= 0")));
    }
    let s = u + v;
    let w = v * s * (u * d_h).sqrt();
    let l1 = l1_polynomial(c, u, v);
    let big_l1 = u * u * u * l1 / (lit::<T>(8.0) * c * s * w * w);
    let l1_sign = if l1 < T::zero() {
        L1Sign::Supercritical
    } else if l1 > T::zero() {
        L1Sign::Subcritical
    } else {
        L1Sign::Degenerate
    };
    Ok(HopfData { u, v, m_hopf: m, d_h, w, l1, big_l1, l1_sign })
}

/// Sampling of the `(U, V)` chart: `n_u` values of `U` on `[u_lo, u_hi]`, `V` in `(0, v_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UvGrid {
    pub u_lo: f64,
    pub u_hi: f64,
    pub n_u: usize,
    pub v_max: f64,
}

impl Default for UvGrid {
    fn default() -> Self {
        Self { u_lo: 1e-3, u_hi: 1.0 - 1e-3, n_u: 2000, v_max: 10.0 }
    }
}

/// Positive roots `V` of `T(C, M, U, V) = 0` at fixed `U`, branch index 0 then 1.
fn t_roots<T: Scalar>(c: T, m: T, u: T) -> [Option<T>; 2] {
    let two = lit::<T>(2.0);
    // T = (M−U)V² + (2MU − 2CU − 3U² + U)V + U²(M − C − 2U + 1)
    let a = m - u;
    let b = two * m * u - two * c * u - lit::<T>(3.0) * u * u + u;
    let cc = u * u * (m - c - two * u + T::one());
    let mut out = [None, None];
    if a == T::zero() {
        if b != T::zero() {
            out[0] = Some(-cc / b);
        }
    } else {
        let disc = b * b - lit::<T>(4.0) * a * cc;
        if disc >= T::zero() {
            let sq = disc.sqrt();
            // Stable pair: q = −(b + sign(b)√disc)/2, roots q/a and cc/q.
            let qq = -(b + b.signum() * sq) / two;
            let (r1, r2) = if qq == T::zero() { (T::zero(), T::zero()) } else { (qq / a, cc / qq) };
            out = [Some(r1.min(r2)), Some(r1.max(r2))];
        }
    }
    out
}

/// Samples of `T = 0` inside `Λ ∩ {D_H > 0}`, ordered by branch then `U`.
pub fn hopf_curve_uv<T: Scalar>(c: T, m: T, grid: &UvGrid) -> Vec<HopfData<T>> {
    let n = grid.n_u.max(2);
    let mut branches: [Vec<HopfData<T>>; 2] = [Vec::new(), Vec::new()];
    for i in 0..n {
        let u = lit::<T>(grid.u_lo + (grid.u_hi - grid.u_lo) * i as f64 / (n - 1) as f64);
        for (b, root) in t_roots(c, m, u).into_iter().enumerate() {
            let Some(v) = root else { continue };
            if !(v > T::zero() && v < lit(grid.v_max)) {
                continue;
            }
            if let Ok(h) = lyapunov_l1(c, u, v) {
                branches[b].push(h);
            }
        }
    }
    let [mut a, b] = branches;
    a.extend(b);
    a
}

fn branch_point<T: Scalar>(c: T, m: T, u: T, branch: usize) -> Option<HopfData<T>> {
    let v = t_roots(c, m, u)[branch]?;
    lyapunov_l1(c, u, v).ok()
}

/// Point of the Hopf set where `l₁` vanishes.
pub fn bautin_point<T: Scalar>(c: T, m: T) -> Result<(T, T)> {
    bautin_point_on(c, m, &UvGrid::default())
}

pub fn bautin_point_on<T: Scalar>(c: T, m: T, grid: &UvGrid) -> Result<(T, T)> {
    let n = grid.n_u.max(2);
    for branch in 0..2 {
        let mut prev: Option<HopfData<T>> = None;
        for i in 0..n {
            let u = lit::<T>(grid.u_lo + (grid.u_hi - grid.u_lo) * i as f64 / (n - 1) as f64);
            let cur = branch_point(c, m, u, branch).filter(|h| h.v < lit(grid.v_max));
            if let (Some(a), Some(b)) = (prev, cur) {
                if a.l1 == T::zero() {
                    return Ok((a.u, a.v));
                }
                if (a.l1 < T::zero()) != (b.l1 < T::zero()) {
                    return bisect_l1(c, m, a, b, branch);
                }
            }
            prev = cur;
        }
    }
    Err(Error::NotFound(format!("no sign change of l1 on the Hopf set at C = {c}, M = {m}")))
}

fn bisect_l1<T: Scalar>(c: T, m: T, mut a: HopfData<T>, mut b: HopfData<T>, branch: usize) -> Result<(T, T)> {
    let tol = lit::<T>(1e-10);
    for _ in 0..200 {
        if b.l1.abs() < tol {
            return Ok((b.u, b.v));
        }
        if a.l1.abs() < tol {
            return Ok((a.u, a.v));
        }
        let mid = (a.u + b.u) / lit(2.0);
        if mid == a.u || mid == b.u {
            break;
        }
        let h = branch_point(c, m, mid, branch)
            .ok_or_else(|| Error::NotFound("Hopf branch left the admissible set during bisection".into()))?;
        if (h.l1 < T::zero()) == (a.l1 < T::zero()) {
            a = h;
        } else {
            b = h;
        }
    }
    let best = if a.l1.abs() < b.l1.abs() { a } else { b };
    Ok((best.u, best.v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_m_zeroes_t() {
        let (c, u, v) = (0.363f64, 0.4, 0.2);
        let m = hopf_m(c, u, v);
        assert!(hopf_t(c, m, u, v).abs() < 1e-15);
    }

    #[test]
    fn matrix_trace_and_det_factor() {
        let (c, m, u, v) = (0.5f64, 0.21, 0.3, 0.45);
        let j = hopf_matrix(c, m, u, v);
        let s = u + v;
        assert!((j.trace() - v * hopf_t(c, m, u, v)).abs() < 1e-14);
        assert!((j.det() - u * v * v * s * s * hopf_d(c, m, u, v)).abs() < 1e-14);
    }

    #[test]
    fn roots_solve_t() {
        let (c, m) = (0.363f64, 0.16);
        for u in [0.2, 0.25, 0.3] {
            for v in t_roots(c, m, u).into_iter().flatten() {
                assert!(hopf_t(c, m, u, v).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn psi_rejects_inadmissible() {
        assert!(matches!(psi_map(0.363, 0.16, 1.2, 0.1), Err(Error::Admissibility(_))));
        assert!(matches!(psi_map(0.1, 0.16, 0.3, 0.1), Err(Error::Admissibility(_))));
    }
}
