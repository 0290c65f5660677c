//! Bogdanov-Takens point on the saddle-node curve and its genericity constants.

use serde::{Deserialize, Serialize};

use crate::equilibria::{c_star, collapsed_equilibrium};
use crate::error::{Error, Result};
use crate::model::{jacobian, Params, State};
use crate::scalar::{lit, Scalar};

use super::saddle_node::saddle_node_q;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BtData<T> {
    #[serde(rename = "C_star")]
    pub c_star: T,
    #[serde(rename = "Q_star")]
    pub q_star: T,
    #[serde(rename = "E_point")]
    pub e_point: State<T>,
    pub z1: T,
    pub z2: T,
    #[serde(rename = "G1")]
    pub g1: T,
    #[serde(rename = "G2")]
    pub g2: T,
    #[serde(rename = "G3")]
    pub g3: T,
    #[serde(rename = "G4")]
    pub g4: T,
    pub a20: T,
    pub b20: T,
    pub b11: T,
    /// Sign of `b₂₀(a₂₀ + b₁₁)`, in `{−1, 0, 1}`.
    pub nf_sign: i8,
}

/// Threshold below which a genericity constant counts as zero.
pub const GENERICITY_TOL: f64 = 1e-10;

fn det4<T: Scalar>(m: [[T; 4]; 4]) -> T {
    let minor = |r: usize, c: usize| -> T {
        let mut s = [[T::zero(); 3]; 3];
        let mut ii = 0;
        for i in 0..4 {
            if i == r {
                continue;
            }
            let mut jj = 0;
            for j in 0..4 {
                if j == c {
                    continue;
                }
                s[ii][jj] = m[i][j];
                jj += 1;
            }
            ii += 1;
        }
        s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) - s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0])
            + s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0])
    };
    let mut det = T::zero();
    for c in 0..4 {
        let sign = if c % 2 == 0 { T::one() } else { -T::one() };
        det = det + sign * m[0][c] * minor(0, c);
    }
    det
}

/// Jacobian of `(f, g, tr J, det J)` with respect to `(u, v, C, Q)`.
pub fn transversality_matrix<T: Scalar>(p: &Params<T>, s: State<T>) -> [[T; 4]; 4] {
    let (c, m, n, q) = (p.c, p.m, p.n, p.q);
    let (u, v) = (s.u, s.v);
    let k = |x: f64| lit::<T>(x);
    let z = T::zero();
    let j = jacobian(p, s);
    // Partial derivatives of the Jacobian entries, ordered (u, v, C, Q).
    let da = [k(2.0) - k(2.0) * v - k(6.0) * u, T::one() - q - k(2.0) * u, z, -v];
    let db = [T::one() - q - k(2.0) * u, z, z, -u];
    let dc = [z, c - m - k(2.0) * n * v, v, z];
    let dd = [c - m - k(2.0) * n * v, -k(6.0) * n * v - k(2.0) * m - k(2.0) * n * u, u, z];
    let mut tr = [z; 4];
    let mut det = [z; 4];
    for i in 0..4 {
        tr[i] = da[i] + dd[i];
        det[i] = da[i] * j.d + j.a * dd[i] - db[i] * j.c - j.b * dc[i];
    }
    [[j.a, j.b, z, -u * v], [j.c, j.d, u * v, z], tr, det]
}

/// Bogdanov-Takens point for `0 < M < N`.
pub fn bt_point<T: Scalar>(m: T, n: T) -> Result<BtData<T>> {
    if !(m > T::zero() && n > T::zero()) {
        return Err(Error::Domain(format!("M, N must be positive, got M = {m}, N = {n}")));
    }
    if m >= n {
        return Err(Error::Domain(format!("Bogdanov-Takens point requires M < N, got M = {m}, N = {n}")));
    }
    let k = |x: f64| lit::<T>(x);
    let one = T::one();
    let cs = c_star(m, n);
    let qs = saddle_node_q(cs, m, n)?;
    let p = Params::new(cs, m, n, qs)?;
    let e = collapsed_equilibrium(&p);
    let (ue, ve) = (e.u, e.v);

    let a = -k(8.0) * m * n * n - (one - n) * (m + n) * (m + n);
    let w2 = (k(16.0) * m * n * n * n * (m - n) * (m - n) + a * a).sqrt();
    let w1 = (one + n) * (m + n) * (m + n);
    let n2 = n * n;
    let n3 = n2 * n;
    let w3 = m * m * m * (m * (n - one) * (n - one) + k(4.0) * n * (one + n))
        + k(2.0) * m * n * (one + n) * (k(2.0) * n2 + w2)
        - (n - one) * n2 * (n2 - n3 + w2)
        - m * m * (k(2.0) * n2 * (-k(3.0) - k(6.0) * n + n2) - w2 + n * w2);
    if w3 == T::zero() {
        return Err(Error::NonGeneric("w3 = 0 in the eigenvector z1".into()));
    }
    let z1 = k(4.0) * n3 * (w1 + w2) / w3;
    let z2_den = (cs - m) * (m - n) * (m * m - k(2.0) * m * n + n * (k(4.0) * cs + n));
    if z2_den == T::zero() {
        return Err(Error::NonGeneric("(C−M)(M−N)(M²−2MN+N(4C+N)) = 0 in the eigenvector z2".into()));
    }
    let z2 = (k(2.0) * n * (k(2.0) * cs - m + n) * (k(2.0) * cs - m + n)
        + k(4.0) * cs * (cs - m) * (cs - m) * (m - n))
        / z2_den;

    let (c, q) = (cs, qs);
    let g1 = det4(transversality_matrix(&p, e)) / (-ue * ve);
    let g2 = q - one - m + k(2.0) * ue - n * ue - z1 + c * z1 - m * z1 + k(3.0) * ue * z1 - k(3.0) * n * ve
        + z1 * ve
        - k(2.0) * n * z1 * ve;
    let g3 = k(2.0) * ue - one + q + k(2.0) * n * ue - k(2.0) * z1 - c * z1 + k(6.0) * ue * z1
        + m * (k(2.0) + z1)
        + k(6.0) * n * ve
        + k(2.0) * ve * z1
        + k(2.0) * n * ve * z1;
    let g4 = z1 * z2 - one;
    let zz = z1 * z2;
    let z1s = z1 * z1;
    let a20 = k(2.0)
        * (c * z1 - m - n * ue - m * z1 - k(3.0) * n * ve - k(2.0) * n * z1 * ve - zz
            + q * zz
            + k(2.0) * ue * zz
            - z1s * z2
            + k(3.0) * ue * z1s * z2
            + z1s * ve * z2);
    let b20 = -k(2.0) * z1 * g2;
    let b11 = one - q - k(2.0) * ue + k(2.0) * z1 - c * z1 + m * z1 - k(6.0) * ue * z1 - k(2.0) * z1 * ve
        + k(2.0) * n * z1 * ve
        + zz
        + k(2.0) * m * zz
        - q * zz
        - k(2.0) * ue * zz
        + k(2.0) * n * ue * zz
        - c * z1s * z2
        + m * z1s * z2
        + k(6.0) * n * ve * zz
        + k(2.0) * n * z1s * ve * z2;

    for (name, g) in [("G1", g1), ("G2", g2), ("G3", g3), ("G4", g4)] {
        if g.abs() < k(GENERICITY_TOL) {
            return Err(Error::Degenerate(format!("{name} = {g} vanishes at the Bogdanov-Takens point")));
        }
    }
    let prod = b20 * (a20 + b11);
    let nf_sign = if prod > T::zero() {
        1
    } else if prod < T::zero() {
        -1
    } else {
        0
    };
    Ok(BtData {
        c_star: cs,
        q_star: qs,
        e_point: e,
        z1,
        z2,
        g1,
        g2,
        g3,
        g4,
        a20,
        b20,
        b11,
        nf_sign,
    })
}
