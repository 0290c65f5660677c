//! Saddle-node locus Δ = 0 and the Sotomayor transversality test.

use serde::{Deserialize, Serialize};

use crate::equilibria::{collapsed_equilibrium, sigma_delta, Tolerances};
use crate::error::{Error, Result};
use crate::model::{jacobian, Params};
use crate::scalar::{lit, Scalar};

/// Magnitude below which a Sotomayor quantity counts as zero.
pub const SOTOMAYOR_TOL: f64 = 1e-12;

/// `Q` on the saddle-node curve for given `(C, M, N)`.
pub fn saddle_node_q<T: Scalar>(c: T, m: T, n: T) -> Result<T> {
    if !(c > m) {
        return Err(Error::Domain(format!("saddle-node locus requires C > M, got C = {c}, M = {m}")));
    }
    if !(n > T::zero()) {
        return Err(Error::Domain(format!("N must be positive, got {n}")));
    }
    let four = lit::<T>(4.0);
    Ok((m * m + four * c * n - lit::<T>(2.0) * m * n + n * n) / (four * n * (c - m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SotomayorCheck<T> {
    /// Closed form `W·F_C = −Σ₁Σ₃/(4N(C+NQ)²)`.
    pub wfc: T,
    /// Closed-form quadratic coefficient.
    pub quad: T,
    pub nondegenerate: bool,
    /// `W·F_C` from the exact left null vector `W = (−J₂₁, J₁₁)` of `J(E)`.
    pub wfc_exact: T,
    /// `W·D²F(V, V)` with the right null vector `V = (−J₁₂, J₁₁)`.
    pub quad_exact: T,
    pub nondegenerate_exact: bool,
}

/// Sotomayor conditions at the collapsed equilibrium.
pub fn sotomayor_check<T: Scalar>(p: &Params<T>) -> Result<SotomayorCheck<T>> {
    let tol = Tolerances::default();
    let s = sigma_delta(p);
    let scale = {
        let d = p.m - p.n;
        (d * d).max(T::one())
    };
    if s.delta.abs() >= lit::<T>(tol.collapse) * scale {
        return Err(Error::Precondition(format!("Sotomayor check needs Δ ≈ 0, got Δ = {}", s.delta)));
    }
    let (c, m, n, q) = (p.c, p.m, p.n, p.q);
    let k = |x: f64| lit::<T>(x);
    let cn = c + n * q;
    let wfc = -s.sigma1 * s.sigma3 / (k(4.0) * n * cn * cn);
    let mn = m + n;
    let quad = c - k(3.0) * m - k(10.0) * n + k(4.0) * n * (q + k(7.0)) * (c - m) * (c - m) / (mn * mn);

    let e = collapsed_equilibrium(p);
    let (u, v) = (e.u, e.v);
    let j = jacobian(p, e);
    let (w1, w2) = (-j.c, j.a);
    let (r1, r2) = (-j.b, j.a);
    let wfc_exact = w2 * u * v;
    let f_uu = k(2.0) - k(6.0) * u - k(2.0) * v;
    let f_uv = T::one() - k(2.0) * u - q;
    let g_uv = c - m - k(2.0) * n * v;
    let g_vv = -k(2.0) * n * u - k(2.0) * m - k(6.0) * n * v;
    let d2f = f_uu * r1 * r1 + k(2.0) * f_uv * r1 * r2;
    let d2g = k(2.0) * g_uv * r1 * r2 + g_vv * r2 * r2;
    let quad_exact = w1 * d2f + w2 * d2g;
    let nz = |x: T| x.abs() >= k(SOTOMAYOR_TOL);
    Ok(SotomayorCheck {
        wfc,
        quad,
        nondegenerate: nz(wfc) && nz(quad),
        wfc_exact,
        quad_exact,
        nondegenerate_exact: nz(wfc_exact) && nz(quad_exact),
    })
}
