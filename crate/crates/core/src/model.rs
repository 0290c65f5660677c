//! Dimensional and nondimensional Bazykin systems: parameters, vector field,
//! Jacobian and nullclines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Absolute guard used when comparing against the prey-nullcline pole.
pub const POLE_GUARD: f64 = 1e-12;

/// Seven-parameter dimensional model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalParams<T> {
    pub r: T,
    #[serde(rename = "K")]
    pub k: T,
    pub q: T,
    pub a: T,
    pub c: T,
    pub mu0: T,
    pub mu1: T,
}

/// Nondimensional parameters `(C, M, N, Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params<T> {
    #[serde(rename = "C")]
    pub c: T,
    #[serde(rename = "M")]
    pub m: T,
    #[serde(rename = "N")]
    pub n: T,
    #[serde(rename = "Q")]
    pub q: T,
}

impl<T: Scalar> Params<T> {
    /// Validated constructor; every parameter must be finite and positive.
    pub fn new(c: T, m: T, n: T, q: T) -> Result<Self> {
        let p = Self { c, m, n, q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("C", self.c), ("M", self.m), ("N", self.n), ("Q", self.q)] {
            if !(x.is_finite() && x > T::zero()) {
                return Err(Error::Domain(format!("parameter {name} must be positive, got {x}")));
            }
        }
        Ok(())
    }

    pub fn with_q(self, q: T) -> Self {
        Self { q, ..self }
    }

    pub fn with_c(self, c: T) -> Self {
        Self { c, ..self }
    }
}

/// Point of the nondimensional phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State<T> {
    pub u: T,
    pub v: T,
}

impl<T: Scalar> State<T> {
    pub fn new(u: T, v: T) -> Self {
        Self { u, v }
    }

    pub fn norm(&self) -> T {
        self.u.hypot(self.v)
    }

    pub fn dist(&self, other: &Self) -> T {
        (self.u - other.u).hypot(self.v - other.v)
    }

    pub fn max_dist(&self, other: &Self) -> T {
        (self.u - other.u).abs().max((self.v - other.v).abs())
    }
}

/// Dense 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

/// Eigenvalues of a real 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Eigenvalues<T> {
    /// Real pair, ordered `lo <= hi`.
    Real(T, T),
    /// Complex-conjugate pair `re ± i·im` with `im > 0`.
    Complex { re: T, im: T },
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn trace(&self) -> T {
        self.a + self.d
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    /// `tr² − 4·det`; negative for a focus.
    pub fn discriminant(&self) -> T {
        let t = self.trace();
        t * t - lit::<T>(4.0) * self.det()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn apply(&self, x: T, y: T) -> (T, T) {
        (self.a * x + self.b * y, self.c * x + self.d * y)
    }

    pub fn max_norm(&self) -> T {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn eigenvalues(&self) -> Eigenvalues<T> {
        let half = lit::<T>(0.5);
        let mid = half * self.trace();
        // (a−d)²/4 + bc avoids cancellation in tr²/4 − det.
        let diff = half * (self.a - self.d);
        let disc = diff * diff + self.b * self.c;
        if disc >= T::zero() {
            let s = disc.sqrt();
            Eigenvalues::Real(mid - s, mid + s)
        } else {
            Eigenvalues::Complex { re: mid, im: (-disc).sqrt() }
        }
    }

    /// Unit eigenvector for a real eigenvalue `lambda`, oriented so the first
    /// component is non-negative (second positive if the first vanishes).
    pub fn eigenvector(&self, lambda: T) -> (T, T) {
        let r1 = (self.b, lambda - self.a);
        let r2 = (lambda - self.d, self.c);
        let n1 = r1.0.hypot(r1.1);
        let n2 = r2.0.hypot(r2.1);
        let (mut x, mut y) = if n1 >= n2 {
            (r1.0 / n1, r1.1 / n1)
        } else {
            (r2.0 / n2, r2.1 / n2)
        };
        if x < T::zero() || (x == T::zero() && y < T::zero()) {
            x = -x;
            y = -y;
        }
        (x, y)
    }
}

/// Maps the dimensional parameters onto `(C, M, N, Q)`.
pub fn nondimensionalize<T: Scalar>(p: &DimensionalParams<T>) -> Result<Params<T>> {
    let fields = [
        ("r", p.r),
        ("K", p.k),
        ("q", p.q),
        ("a", p.a),
        ("c", p.c),
        ("mu0", p.mu0),
        ("mu1", p.mu1),
    ];
    for (name, x) in fields {
        if !(x.is_finite() && x > T::zero()) {
            return Err(Error::Domain(format!("dimensional parameter {name} must be positive, got {x}")));
        }
    }
    let ar = p.a * p.r;
    Params::new(p.c, p.mu0 / p.r, p.mu1 * p.k / ar, p.q / ar)
}

/// Right-hand side `(du, dv)` of the nondimensional system.
#[inline]
pub fn vector_field<T: Scalar>(p: &Params<T>, s: State<T>) -> (T, T) {
    let (u, v) = (s.u, s.v);
    let w = u + v;
    let du = u * (T::one() - u) * w - p.q * u * v;
    let dv = p.c * u * v - v * w * (p.m + p.n * v);
    (du, dv)
}

/// Analytic Jacobian of [`vector_field`].
pub fn jacobian<T: Scalar>(p: &Params<T>, s: State<T>) -> Mat2<T> {
    let (u, v) = (s.u, s.v);
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    Mat2 {
        a: two * u + v - p.q * v - two * u * v - three * u * u,
        b: -u * (p.q + u - T::one()),
        c: -v * (p.m - p.c + p.n * v),
        d: p.c * u - three * p.n * v * v - p.m * u - two * p.m * v - two * p.n * u * v,
    }
}

/// Non-trivial prey nullcline `v = u(1−u)/(Q−1+u)`.
pub fn prey_nullcline<T: Scalar>(p: &Params<T>, u: T) -> Result<T> {
    let den = p.q - T::one() + u;
    if den.abs() < lit(POLE_GUARD) {
        return Err(Error::Domain(format!("prey nullcline pole at u = 1 − Q = {}", T::one() - p.q)));
    }
    Ok(u * (T::one() - u) / den)
}

/// Non-negative branch of the predator nullcline.
pub fn predator_nullcline<T: Scalar>(p: &Params<T>, u: T) -> Result<T> {
    if u < T::zero() {
        return Err(Error::Domain(format!("predator nullcline requires u >= 0, got {u}")));
    }
    let b = p.m + p.n * u;
    let disc = b * b + lit::<T>(4.0) * p.n * u * (p.c - p.m);
    let two_n = lit::<T>(2.0) * p.n;
    // Rationalised root; identical to (−b + √disc)/(2N) but free of cancellation.
    let num = lit::<T>(4.0) * p.n * u * (p.c - p.m);
    let root = disc.max(T::zero()).sqrt();
    if b + root == T::zero() {
        return Ok(T::zero());
    }
    let v = num / (two_n * (b + root));
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig5() -> Params<f64> {
        Params::new(0.363, 0.16, 0.25, 1.6).unwrap()
    }

    #[test]
    fn rejects_non_positive_parameters() {
        assert!(Params::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(Params::new(1.0, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn jacobian_at_carrying_capacity() {
        let p = fig5();
        let j = jacobian(&p, State::new(1.0, 0.0));
        assert_eq!((j.a, j.b, j.c), (-1.0, -p.q, 0.0));
        assert!((j.d - (p.c - p.m)).abs() < 1e-15);
    }

    #[test]
    fn jacobian_vanishes_at_origin() {
        let j = jacobian(&fig5(), State::new(0.0, 0.0));
        assert_eq!(j.max_norm(), 0.0);
    }

    #[test]
    fn u_axis_field() {
        let p = fig5();
        let u = 0.37;
        let (du, dv) = vector_field(&p, State::new(u, 0.0));
        assert!((du - u * u * (1.0 - u)).abs() < 1e-15);
        assert_eq!(dv, 0.0);
    }

    #[test]
    fn eigen_decomposition_of_triangular_matrix() {
        let m = Mat2::new(-1.0f64, 2.0, 0.0, 0.5);
        match m.eigenvalues() {
            Eigenvalues::Real(lo, hi) => {
                assert!((lo + 1.0).abs() < 1e-15 && (hi - 0.5).abs() < 1e-15)
            }
            _ => panic!("expected real eigenvalues"),
        }
        let (x, y) = m.eigenvector(0.5);
        let (ax, ay) = m.apply(x, y);
        assert!((ax - 0.5 * x).abs() < 1e-14 && (ay - 0.5 * y).abs() < 1e-14);
        assert!(x >= 0.0);
    }

    #[test]
    fn complex_pair_for_rotation() {
        let m = Mat2::new(0.0, -2.0, 2.0, 0.0);
        assert_eq!(m.eigenvalues(), Eigenvalues::Complex { re: 0.0, im: 2.0 });
    }

    #[test]
    fn predator_nullcline_is_zero_when_c_equals_m() {
        let p = Params::new(0.3, 0.3, 0.25, 1.6).unwrap();
        for u in [0.0, 0.2, 0.9] {
            assert_eq!(predator_nullcline(&p, u).unwrap(), 0.0);
        }
    }
}
