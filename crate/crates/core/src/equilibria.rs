//! Closed-form equilibria, the case analysis on Σ₁, Σ₂, Σ₃, Δ and stability
//! classification of every equilibrium type, including the degenerate origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{jacobian, Eigenvalues, Params, State};
use crate::scalar::{lit, Scalar};

/// Classification tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|Δ| < delta · max(1, (M−N)²)` counts as Δ = 0.
    pub delta: f64,
    /// `|Σ₂| < sigma2` counts as Σ₂ = 0.
    pub sigma2: f64,
    /// `|tr J(P₂)| < trace` counts as a weak focus.
    pub trace: f64,
    /// Largest `|Δ|` (same scaling as `delta`) accepted as a collapsed equilibrium
    /// by [`classify_collapsed`]; parameters quoted to four decimals sit ~1e−5 away.
    pub collapse: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { delta: 1e-9, sigma2: 1e-9, trace: 1e-9, collapse: 1e-4 }
    }
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    NoInterior_ClessM,
    OneInterior_Sigma2Neg,
    Collision_Sigma2Zero,
    NoInterior_DeltaNeg,
    DoubleRoot_DeltaZero,
    TwoInterior,
    NoInterior_NleM,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaSet<T> {
    pub sigma1: T,
    pub sigma2: T,
    pub sigma3: T,
    pub delta: T,
    pub case_label: CaseLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquilibriumKind {
    Origin,
    CarryingCapacity,
    P1,
    P2,
    CollapsedE,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium<T> {
    pub point: State<T>,
    pub multiplicity: u8,
    pub kind: EquilibriumKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilityTag {
    Saddle,
    StableNode,
    UnstableNode,
    StableFocus,
    UnstableFocus,
    WeakFocus,
    SaddleNodeAttractor,
    SaddleNodeRepeller,
    DegenerateOrigin,
}

/// Local structure of the origin in the six regions of the `(Q, C)` plane.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OriginSectors {
    SaddleRepelling_I,
    AttractingElliptic_II,
    Elliptic_III,
    Saddle_IV,
    AttractingSaddle_V,
    EllipticRepelling_VI,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilityClass {
    pub tag: StabilityTag,
    pub origin_sectors: Option<OriginSectors>,
}

impl StabilityClass {
    pub fn of(tag: StabilityTag) -> Self {
        Self { tag, origin_sectors: None }
    }

    pub fn is_attractor(&self) -> bool {
        matches!(
            self.tag,
            StabilityTag::StableNode | StabilityTag::StableFocus | StabilityTag::SaddleNodeAttractor
        )
    }
}

fn delta_scale<T: Scalar>(p: &Params<T>) -> T {
    let d = p.m - p.n;
    (d * d).max(T::one())
}

/// Σ₁, Σ₂, Σ₃, Δ and the case label, with default tolerances.
pub fn sigma_delta<T: Scalar>(p: &Params<T>) -> SigmaSet<T> {
    sigma_delta_tol(p, &Tolerances::default())
}

pub fn sigma_delta_tol<T: Scalar>(p: &Params<T>, tol: &Tolerances) -> SigmaSet<T> {
    let (c, m, n, q) = (p.c, p.m, p.n, p.q);
    let two = lit::<T>(2.0);
    let sigma1 = two * c * (q - T::one()) - q * (m + n);
    let sigma2 = q * (c - m) - c;
    let sigma3 = -two * n * sigma2 + c * (m - n);
    let delta = (m - n) * (m - n) - lit::<T>(4.0) * n * sigma2;
    let case_label = if c <= m {
        CaseLabel::NoInterior_ClessM
    } else if sigma2.abs() < lit(tol.sigma2) {
        CaseLabel::Collision_Sigma2Zero
    } else if sigma2 < T::zero() {
        CaseLabel::OneInterior_Sigma2Neg
    } else if delta.abs() < lit::<T>(tol.delta) * delta_scale(p) {
        CaseLabel::DoubleRoot_DeltaZero
    } else if delta < T::zero() {
        CaseLabel::NoInterior_DeltaNeg
    } else if n > m {
        CaseLabel::TwoInterior
    } else {
        CaseLabel::NoInterior_NleM
    };
    SigmaSet { sigma1, sigma2, sigma3, delta, case_label }
}

/// `(0,0)` and `(1,0)`.
pub fn boundary_equilibria<T: Scalar>(_p: &Params<T>) -> Vec<Equilibrium<T>> {
    vec![
        Equilibrium {
            point: State::new(T::zero(), T::zero()),
            multiplicity: 1,
            kind: EquilibriumKind::Origin,
        },
        Equilibrium {
            point: State::new(T::one(), T::zero()),
            multiplicity: 1,
            kind: EquilibriumKind::CarryingCapacity,
        },
    ]
}

fn interior_point<T: Scalar>(p: &Params<T>, s: &SigmaSet<T>, sign: T) -> State<T> {
    let two = lit::<T>(2.0);
    let den = two * (p.c + p.n * p.q);
    let sd = s.delta.max(T::zero()).sqrt();
    State::new(
        (-s.sigma1 + sign * p.q * sd) / den,
        (-s.sigma3 + sign * p.c * sd) / (p.n * den),
    )
}

fn positive<T: Scalar>(s: &State<T>) -> bool {
    s.u > T::zero() && s.v > T::zero()
}

/// Interior equilibria in the open first quadrant, ordered P₁ before P₂.
pub fn interior_equilibria<T: Scalar>(p: &Params<T>) -> Vec<Equilibrium<T>> {
    interior_equilibria_tol(p, &Tolerances::default())
}

pub fn interior_equilibria_tol<T: Scalar>(p: &Params<T>, tol: &Tolerances) -> Vec<Equilibrium<T>> {
    let s = sigma_delta_tol(p, tol);
    let mk = |point: State<T>, multiplicity, kind| Equilibrium { point, multiplicity, kind };
    let mut out = Vec::new();
    match s.case_label {
        CaseLabel::TwoInterior => {
            let p1 = interior_point(p, &s, -T::one());
            let p2 = interior_point(p, &s, T::one());
            if positive(&p1) {
                out.push(mk(p1, 1, EquilibriumKind::P1));
            }
            if positive(&p2) {
                out.push(mk(p2, 1, EquilibriumKind::P2));
            }
        }
        CaseLabel::OneInterior_Sigma2Neg => {
            let p2 = interior_point(p, &s, T::one());
            if positive(&p2) {
                out.push(mk(p2, 1, EquilibriumKind::P2));
            }
        }
        CaseLabel::Collision_Sigma2Zero if p.n > p.m => {
            out.push(mk(sigma2zero_point(p), 1, EquilibriumKind::P2));
        }
        CaseLabel::DoubleRoot_DeltaZero if p.n > p.m => {
            let e = collapsed_point(p, &s);
            if positive(&e) {
                out.push(mk(e, 2, EquilibriumKind::CollapsedE));
            }
        }
        _ => {}
    }
    out
}

fn collapsed_point<T: Scalar>(p: &Params<T>, s: &SigmaSet<T>) -> State<T> {
    let den = lit::<T>(2.0) * (p.c + p.n * p.q);
    State::new(-s.sigma1 / den, -s.sigma3 / (p.n * den))
}

/// Stability of `(1, 0)`: a saddle when `C > M`, a stable node when `C < M`.
pub fn classify_carrying_capacity<T: Scalar>(p: &Params<T>) -> Result<StabilityClass> {
    if p.c > p.m {
        Ok(StabilityClass::of(StabilityTag::Saddle))
    } else if p.c < p.m {
        Ok(StabilityClass::of(StabilityTag::StableNode))
    } else {
        Err(Error::NonHyperbolic("(1,0) has a zero eigenvalue when C = M".into()))
    }
}

fn check_origin_scope<T: Scalar>(p: &Params<T>) -> Result<()> {
    if p.q <= T::one() {
        return Err(Error::OutOfScope(format!("origin classification requires Q > 1, got {}", p.q)));
    }
    if p.c <= p.m {
        return Err(Error::OutOfScope(format!("origin classification requires C > M, got C = {}, M = {}", p.c, p.m)));
    }
    Ok(())
}

/// Region I–VI of the `(Q, C)` plane for the origin.
pub fn classify_origin<T: Scalar>(p: &Params<T>) -> Result<StabilityClass> {
    check_origin_scope(p)?;
    let m1 = p.m + T::one();
    let threshold = p.m * p.q / (p.q - T::one());
    if p.q == m1 {
        return Err(Error::NonGeneric("Q = M + 1 separates the origin regions".into()));
    }
    if p.c == m1 {
        return Err(Error::NonGeneric("C = M + 1 separates the origin regions".into()));
    }
    if p.c == threshold {
        return Err(Error::NonGeneric("C = MQ/(Q−1) separates the origin regions".into()));
    }
    let sector = if p.q < m1 {
        if p.c < m1 {
            OriginSectors::Saddle_IV
        } else if p.c < threshold {
            OriginSectors::SaddleRepelling_I
        } else {
            OriginSectors::AttractingElliptic_II
        }
    } else if p.c > m1 {
        OriginSectors::Elliptic_III
    } else if p.c < threshold {
        OriginSectors::AttractingSaddle_V
    } else {
        OriginSectors::EllipticRepelling_VI
    };
    Ok(StabilityClass { tag: StabilityTag::DegenerateOrigin, origin_sectors: Some(sector) })
}

/// Equilibrium eigenvalues of the horizontal and vertical blow-ups of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupEigenvalues<T> {
    pub o_xy: (T, T),
    pub i_x: Option<(T, T)>,
    pub o_big_xy: (T, T),
    pub i_y: Option<(T, T)>,
}

pub fn blowup_eigenvalues<T: Scalar>(p: &Params<T>) -> Result<BlowupEigenvalues<T>> {
    check_origin_scope(p)?;
    let one = T::one();
    let d_x = one + p.m - p.c;
    let d_y = p.m - p.q + one;
    if d_x == T::zero() {
        return Err(Error::NonGeneric("1 + M − C = 0 in the I_x eigenvalue".into()));
    }
    if d_y == T::zero() {
        return Err(Error::NonGeneric("M − Q + 1 = 0 in the I_Y eigenvalue".into()));
    }
    let sigma2 = p.q * (p.c - p.m) - p.c;
    let m1 = p.m + one;
    let region_iii_or_iv = (p.c > m1 && p.q > m1) || (p.c < m1 && p.q < m1);
    let (i_x, i_y) = if region_iii_or_iv {
        (None, None)
    } else {
        (Some((-one - p.m + p.q, sigma2 / d_x)), Some((-sigma2 / d_y, one + p.m - p.c)))
    };
    Ok(BlowupEigenvalues {
        o_xy: (one + p.m - p.q, -p.m),
        i_x,
        o_big_xy: (one, p.c - one - p.m),
        i_y,
    })
}

/// Recovers the origin region from the signs of the blow-up eigenvalues alone.
pub fn sectors_from_blowup<T: Scalar>(e: &BlowupEigenvalues<T>) -> Option<OriginSectors> {
    let q_small = e.o_xy.0 > T::zero();
    let c_large = e.o_big_xy.1 > T::zero();
    match e.i_x {
        None => Some(if c_large { OriginSectors::Elliptic_III } else { OriginSectors::Saddle_IV }),
        Some((_, l2)) => {
            // sign(Σ₂) = sign(λ₂(I_x)) · sign(1 + M − C), and 1 + M − C = −λ₂(O_XY).
            let sigma2_pos = (l2 > T::zero()) != c_large;
            Some(match (q_small, c_large, sigma2_pos) {
                (true, true, false) => OriginSectors::SaddleRepelling_I,
                (true, true, true) => OriginSectors::AttractingElliptic_II,
                (false, false, false) => OriginSectors::AttractingSaddle_V,
                (false, false, true) => OriginSectors::EllipticRepelling_VI,
                _ => return None,
            })
        }
    }
}

fn classify_by_linearisation<T: Scalar>(p: &Params<T>, s: State<T>, trace_tol: f64) -> Result<StabilityClass> {
    let j = jacobian(p, s);
    let det = j.det();
    let tr = j.trace();
    if det < T::zero() {
        return Ok(StabilityClass::of(StabilityTag::Saddle));
    }
    if det == T::zero() {
        return Err(Error::NonHyperbolic(format!("zero determinant at ({}, {})", s.u, s.v)));
    }
    let focus = j.discriminant() < T::zero();
    let tag = if tr.abs() < lit(trace_tol) {
        StabilityTag::WeakFocus
    } else if tr < T::zero() {
        if focus { StabilityTag::StableFocus } else { StabilityTag::StableNode }
    } else if focus {
        StabilityTag::UnstableFocus
    } else {
        StabilityTag::UnstableNode
    };
    Ok(StabilityClass::of(tag))
}

/// Stability of a simple interior equilibrium from the trace and determinant.
pub fn classify_interior<T: Scalar>(p: &Params<T>, e: &Equilibrium<T>) -> Result<StabilityClass> {
    classify_interior_tol(p, e, &Tolerances::default())
}

pub fn classify_interior_tol<T: Scalar>(p: &Params<T>, e: &Equilibrium<T>, tol: &Tolerances) -> Result<StabilityClass> {
    if e.multiplicity != 1 {
        return Err(Error::Precondition("collapsed equilibrium: use classify_collapsed".into()));
    }
    classify_by_linearisation(p, e.point, tol.trace)
}

/// `C*` for the collapsed equilibrium: trace of J(E) changes sign there.
pub fn c_star<T: Scalar>(m: T, n: T) -> T {
    let a = -lit::<T>(8.0) * m * n * n - (T::one() - n) * (m + n) * (m + n);
    let rad = lit::<T>(16.0) * m * n * n * n * (m - n) * (m - n) + a * a;
    (-a + rad.sqrt()) / (lit::<T>(8.0) * n * n)
}

/// Saddle-node attractor or repeller for the collapsed equilibrium `E`.
pub fn classify_collapsed<T: Scalar>(p: &Params<T>) -> Result<StabilityClass> {
    classify_collapsed_tol(p, &Tolerances::default())
}

pub fn classify_collapsed_tol<T: Scalar>(p: &Params<T>, tol: &Tolerances) -> Result<StabilityClass> {
    let s = sigma_delta_tol(p, tol);
    if p.c <= p.m || s.sigma2 <= T::zero() || s.delta.abs() >= lit::<T>(tol.collapse) * delta_scale(p) {
        return Err(Error::Precondition(format!("no collapsed equilibrium: Δ = {}", s.delta)));
    }
    if p.n <= p.m {
        return Err(Error::NonGeneric("collapsed equilibrium requires N > M".into()));
    }
    let cs = c_star(p.m, p.n);
    let gap = p.c - cs;
    if gap.abs() < lit::<T>(1e-9) * cs.max(T::one()) {
        return Err(Error::Degenerate(format!("C = C* = {cs}: Bogdanov-Takens candidate")));
    }
    let tag = if gap < T::zero() { StabilityTag::SaddleNodeRepeller } else { StabilityTag::SaddleNodeAttractor };
    Ok(StabilityClass::of(tag))
}

/// Collapsed equilibrium `E = P₁ = P₂` when Δ ≈ 0.
pub fn collapsed_equilibrium<T: Scalar>(p: &Params<T>) -> State<T> {
    collapsed_point(p, &sigma_delta(p))
}

/// Stability of the single interior equilibrium P₂ when Σ₂ = 0.
///
/// Decided from the Jacobian at P₂; the closed form in
/// [`reference_sigma2zero_trace`] is always negative and is not the trace.
pub fn classify_sigma2zero<T: Scalar>(p: &Params<T>) -> Result<StabilityClass> {
    classify_sigma2zero_tol(p, &Tolerances::default())
}

pub fn classify_sigma2zero_tol<T: Scalar>(p: &Params<T>, tol: &Tolerances) -> Result<StabilityClass> {
    let s = sigma_delta_tol(p, tol);
    if p.c <= p.m || s.sigma2.abs() >= lit(tol.sigma2) {
        return Err(Error::Precondition(format!("requires C > M and Σ₂ = 0, got Σ₂ = {}", s.sigma2)));
    }
    if p.n <= p.m {
        return Err(Error::NonGeneric("no interior equilibrium when Σ₂ = 0 and N <= M".into()));
    }
    classify_by_linearisation(p, sigma2zero_point(p), tol.trace)
}

/// P₂ = (Q(N−M)/(C+NQ), C(N−M)/(N(C+NQ))) when Σ₂ = 0.
pub fn sigma2zero_point<T: Scalar>(p: &Params<T>) -> State<T> {
    let den = p.c + p.n * p.q;
    State::new(p.q * (p.n - p.m) / den, p.c * (p.n - p.m) / (p.n * den))
}

/// Reference closed form `−(N−M)²(2NQ²+CQ+C²)/(N(C+NQ)²)` for the trace at P₂ when Σ₂ = 0.
pub fn reference_sigma2zero_trace<T: Scalar>(p: &Params<T>) -> T {
    let (c, m, n, q) = (p.c, p.m, p.n, p.q);
    let den = n * (c + n * q) * (c + n * q);
    -(n - m) * (n - m) * (lit::<T>(2.0) * n * q * q + c * q + c * c) / den
}

/// Reference decomposition `T₁√Δ + T₂` for the trace sign at P₂.
///
/// These polynomials do not factor the trace; see [`trace_sign_quantity`].
pub fn reference_trace_quantity<T: Scalar>(p: &Params<T>) -> T {
    let (c, m, n, q) = (p.c, p.m, p.n, p.q);
    let k = |x: f64| lit::<T>(x);
    let n2 = n * n;
    let n3 = n2 * n;
    let n4 = n3 * n;
    let t1 = n * q * q * (k(3.0) * c - m - n - c * n2 + m * n2)
        + c * q * (c - k(3.0) * n - c * n2 - k(2.0) * c * n3 + m * n2 + k(2.0) * m * n3)
        + c * c * (m * n2 + n3 - T::one());
    let t2 = k(4.0) * n2 * q * q * q * (c - m)
        - n * q * q
            * (c * n3 - m * n3 - k(2.0) * c * c * n2 + k(2.0) * c * c * n3 - m * m * n2 + k(2.0) * m * m * n3 + c * m
                + k(3.0) * c * n
                - k(2.0) * m * n
                + m * m
                + n2
                + k(3.0) * c * m * n2
                - k(4.0) * c * m * n3)
        + c * q
            * (-k(3.0) * c * n3 + k(2.0) * c * n4 + k(3.0) * m * n3 - k(2.0) * m * n4 + k(2.0) * c * c * n2
                + k(2.0) * c * c * n3
                + m * m * n2
                - k(2.0) * m * m * n3
                - c * m
                + c * n
                + m * n
                - n2
                - k(3.0) * c * m * n2)
        - c * c * (-m + n + k(2.0) * c * n2 + k(2.0) * c * n3 - k(2.0) * m * n2 + m * m * n2 + n4);
    let delta = sigma_delta(p).delta.max(T::zero());
    t1 * delta.sqrt() + t2
}

/// `N(C+NQ)²·tr J(P₂)` written as `T₁√Δ + T₂` with polynomial `T₁`, `T₂`.
pub fn trace_sign_quantity<T: Scalar>(p: &Params<T>) -> T {
    let (c, m, n, q) = (p.c, p.m, p.n, p.q);
    let k = |x: f64| lit::<T>(x);
    let c2 = c * c;
    let n2 = n * n;
    let q2 = q * q;
    let t1 = (c2 * m - k(3.0) * c2 * n * q + c2 * n + c2 * q - c2 + k(3.0) * c * m * n * q - c * n2 * q2
        + k(3.0) * c * n * q2
        - k(3.0) * c * n * q
        + m * n2 * q2
        - m * n * q2
        - n2 * q2)
        * k(0.5);
    let t2 = (k(4.0) * c2 * c * n * q - k(4.0) * c2 * c * n - c2 * m * m - k(3.0) * c2 * m * n * q
        + k(2.0) * c2 * m * n
        - c2 * m * q
        + c2 * m
        - c2 * n2 * q
        - c2 * n2
        + c2 * n * q
        - c2 * n
        - c * m * m * n * q
        + c * m * n2 * q2
        + c * m * n2 * q
        - c * m * n * q2
        + c * m * n * q
        - c * n2 * n * q2
        + k(4.0) * c * n2 * q2 * q
        - k(3.0) * c * n2 * q2
        - c * n2 * q
        - m * m * n2 * q2
        - m * m * n * q2
        + m * n2 * n * q2
        - k(4.0) * m * n2 * q2 * q
        + k(2.0) * m * n2 * q2
        - n2 * n * q2)
        * k(0.5);
    let delta = sigma_delta(p).delta.max(T::zero());
    t1 * delta.sqrt() + t2
}

/// Eigenvalues of the Jacobian at an equilibrium.
pub fn equilibrium_eigenvalues<T: Scalar>(p: &Params<T>, e: &Equilibrium<T>) -> Eigenvalues<T> {
    jacobian(p, e.point).eigenvalues()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: f64, m: f64, n: f64, q: f64) -> Params<f64> {
        Params::new(c, m, n, q).unwrap()
    }

    #[test]
    fn sigma2_at_q16() {
        let s = sigma_delta(&p(0.363, 0.16, 0.25, 1.6));
        assert!((s.sigma2 - (0.363 * 0.6 - 0.16 * 1.6)).abs() < 1e-15);
        assert_eq!(s.case_label, CaseLabel::OneInterior_Sigma2Neg);
    }

    #[test]
    fn region_iii_example() {
        let pp = p(10.05, 1.05, 10.0, 3.05);
        assert_eq!(sigma_delta(&pp).case_label, CaseLabel::NoInterior_DeltaNeg);
        let c = classify_origin(&pp).unwrap();
        assert_eq!(c.origin_sectors, Some(OriginSectors::Elliptic_III));
    }

    #[test]
    fn origin_boundary_is_non_generic() {
        let err = classify_origin(&p(3.0, 1.0, 0.25, 1.5)).unwrap_err();
        assert!(matches!(err, Error::NonGeneric(_)));
    }

    #[test]
    fn sigma2_zero_uses_the_jacobian() {
        let (m, n, q) = (0.16, 0.25, 1.8);
        let c = m * q / (q - 1.0);
        let pp = p(c, m, n, q);
        assert!(reference_sigma2zero_trace(&pp) < 0.0);
        assert_eq!(classify_sigma2zero(&pp).unwrap().tag, StabilityTag::UnstableFocus);
    }
}
