use approx::assert_abs_diff_eq;
use bazykin::bifurcation::saddle_node_q;
use bazykin::equilibria::*;
use bazykin::model::{jacobian, predator_nullcline, prey_nullcline, vector_field};
use bazykin::{Error, Params, State};
use proptest::prelude::*;

fn params(c: f64, m: f64, n: f64, q: f64) -> Params<f64> {
    Params::new(c, m, n, q).unwrap()
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn residual(p: &Params<f64>, s: State<f64>) -> f64 {
    let (du, dv) = vector_field(p, s);
    du.abs().max(dv.abs())
}

/// Interior equilibria as sign changes of prey minus predator nullcline on (0, 1).
fn nullcline_intersections(p: &Params<f64>) -> Vec<State<f64>> {
    let h = |u: f64| prey_nullcline(p, u).unwrap() - predator_nullcline(p, u).unwrap();
    let n = 20_000;
    let mut out = Vec::new();
    let mut prev = (1e-9, h(1e-9));
    for i in 1..=n {
        let u = 1e-9 + (1.0 - 2e-9) * i as f64 / n as f64;
        let hu = h(u);
        if (prev.1 < 0.0) != (hu < 0.0) {
            let (mut a, mut b, fa) = (prev.0, u, prev.1);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                if (h(mid) < 0.0) == (fa < 0.0) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let r = 0.5 * (a + b);
            let v = prey_nullcline(p, r).unwrap();
            if v > 0.0 {
                out.push(State::new(r, v));
            }
        }
        prev = (u, hu);
    }
    out
}

#[test]
fn closed_form_matches_nullcline_oracle() {
    let (m, n) = (0.16, 0.25);
    let mut checked = [0usize; 3];
    for q in linspace(1.02, 2.4, 50) {
        for c in linspace(0.1, 1.0, 50) {
            let p = params(c, m, n, q);
            let closed = interior_equilibria(&p);
            let brute = nullcline_intersections(&p);
            assert_eq!(closed.len(), brute.len(), "count mismatch at Q = {q}, C = {c}");
            for (e, b) in closed.iter().zip(&brute) {
                assert!(e.point.max_dist(b) < 1e-8, "position mismatch at Q = {q}, C = {c}: {e:?} vs {b:?}");
            }
            checked[closed.len()] += 1;
        }
    }
    assert!(checked.iter().all(|&k| k > 0), "grid misses a count: {checked:?}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sigma_identities(c in 0.01f64..5.0, m in 0.01f64..5.0, n in 0.01f64..5.0, q in 0.01f64..5.0) {
        let s = sigma_delta(&params(c, m, n, q));
        let scale = 1.0 + c.abs() * q + q * (m + n);
        prop_assert!((s.sigma1 - (2.0 * s.sigma2 + q * (m - n))).abs() < 1e-13 * scale * 4.0);
        prop_assert!((s.sigma3 - (-n * s.sigma1 + (q * n + c) * (m - n))).abs() < 1e-12 * scale * (1.0 + n) * 4.0);
        prop_assert!((s.delta - ((m - n) * (m - n) - 4.0 * n * s.sigma2)).abs() == 0.0);
    }

    #[test]
    fn two_interior_ordering_and_signs(c in 0.17f64..1.5, n in 0.17f64..1.0, t in 0.001f64..0.999) {
        // Two interior points lie between Σ₂ = 0 and Δ = 0 in Q.
        let m = 0.16;
        let (q_lo, q_hi) = (c / (c - m), saddle_node_q(c, m, n).unwrap());
        let p = params(c, m, n, q_lo + t * (q_hi - q_lo));
        prop_assume!(sigma_delta(&p).case_label == CaseLabel::TwoInterior);
        let eqs = interior_equilibria(&p);
        prop_assume!(eqs.len() == 2);
        let (p1, p2) = (eqs[0], eqs[1]);
        prop_assert_eq!((p1.kind, p2.kind), (EquilibriumKind::P1, EquilibriumKind::P2));
        prop_assert!(p1.point.u < p2.point.u && p2.point.u < 1.0 && p1.point.v < p2.point.v);
        prop_assert!(jacobian(&p, p1.point).det() < 0.0);
        prop_assert!(jacobian(&p, p2.point).det() > 0.0);
        prop_assert_eq!(classify_interior(&p, &p1).unwrap().tag, StabilityTag::Saddle);
        for e in eqs {
            prop_assert!(residual(&p, e.point) < 1e-10);
        }
    }

    #[test]
    fn origin_regions_agree_with_blowup_signs(c in 0.05f64..4.0, m in 0.05f64..2.0, q in 1.01f64..5.0) {
        let p = params(c, m, 0.25, q);
        prop_assume!(c > m);
        let (Ok(cls), Ok(bl)) = (classify_origin(&p), blowup_eigenvalues(&p)) else { return Ok(()) };
        prop_assert_eq!(cls.tag, StabilityTag::DegenerateOrigin);
        prop_assert_eq!(cls.origin_sectors, sectors_from_blowup(&bl));
        if let (Some(ix), Some(iy)) = (bl.i_x, bl.i_y) {
            prop_assert_eq!(ix.1 > 0.0, iy.0 > 0.0);
        }
        prop_assert_eq!(bl.o_big_xy.1 > 0.0, c > m + 1.0);
    }
}

#[test]
fn every_origin_region_is_reached() {
    let m = 0.5;
    let samples = [
        (2.0, 1.2, OriginSectors::SaddleRepelling_I),
        (4.0, 1.2, OriginSectors::AttractingElliptic_II),
        (4.0, 2.0, OriginSectors::Elliptic_III),
        (1.0, 1.2, OriginSectors::Saddle_IV),
        (0.6, 2.0, OriginSectors::AttractingSaddle_V),
        (1.2, 2.0, OriginSectors::EllipticRepelling_VI),
    ];
    for (c, q, want) in samples {
        let p = params(c, m, 0.25, q);
        assert_eq!(classify_origin(&p).unwrap().origin_sectors, Some(want), "C = {c}, Q = {q}");
        assert_eq!(sectors_from_blowup(&blowup_eigenvalues(&p).unwrap()), Some(want));
    }
}

#[test]
fn sigma_delta_examples() {
    let s = sigma_delta(&params(0.363, 0.16, 0.25, 1.6));
    assert_abs_diff_eq!(s.sigma2, -0.0382, epsilon = 1e-12);
    assert_eq!(s.case_label, CaseLabel::OneInterior_Sigma2Neg);

    let loose = Tolerances { delta: 1e-4, ..Tolerances::default() };
    let s = sigma_delta_tol(&params(0.363, 0.16, 0.25, 1.8281), &loose);
    assert!(s.delta.abs() < 1e-4);
    assert_eq!(s.case_label, CaseLabel::DoubleRoot_DeltaZero);

    let s = sigma_delta(&params(10.05, 1.05, 10.0, 3.05));
    assert_eq!(s.case_label, CaseLabel::NoInterior_DeltaNeg);

    assert_eq!(sigma_delta(&params(0.1, 0.16, 0.25, 1.6)).case_label, CaseLabel::NoInterior_ClessM);
    assert_eq!(sigma_delta(&params(0.6, 0.5, 0.1, 6.5)).case_label, CaseLabel::NoInterior_NleM);
}

#[test]
fn interior_examples() {
    // Σ₂ < 0 below Q = C/(C−M) = 1.78818: only P₂ exists.
    let p = params(0.363, 0.16, 0.25, 1.695);
    let eqs = interior_equilibria(&p);
    assert_eq!(eqs.len(), 1);
    assert_eq!(eqs[0].kind, EquilibriumKind::P2);
    assert!(residual(&p, eqs[0].point) < 1e-10);

    let p = params(0.363, 0.16, 0.25, 1.8);
    let eqs = interior_equilibria(&p);
    assert_eq!(eqs.len(), 2);
    assert_abs_diff_eq!(eqs[0].point.u, 0.01310, epsilon = 1e-4);
    assert_abs_diff_eq!(eqs[1].point.u, 0.180256469763144830, epsilon = 1e-13);
    assert_abs_diff_eq!(eqs[1].point.v, 0.150740218942270163, epsilon = 1e-13);

    assert!(interior_equilibria(&params(0.205, 0.22, 0.25, 1.8)).is_empty());
    for q in [0.5, 1.2, 2.5] {
        assert!(interior_equilibria(&params(0.15, 0.16, 0.25, q)).is_empty());
    }
}

#[test]
fn boundary_examples() {
    let p = params(0.363, 0.16, 0.25, 1.6);
    let b = boundary_equilibria(&p);
    assert_eq!(b.len(), 2);
    assert_eq!(b[0].kind, EquilibriumKind::Origin);
    assert_eq!(b[1].kind, EquilibriumKind::CarryingCapacity);
    for e in b {
        assert_eq!(vector_field(&p, e.point), (0.0, 0.0));
    }
}

#[test]
fn carrying_capacity_examples() {
    assert_eq!(classify_carrying_capacity(&params(10.05, 1.05, 10.0, 3.05)).unwrap().tag, StabilityTag::Saddle);
    assert_eq!(classify_carrying_capacity(&params(0.205, 0.22, 0.25, 1.8)).unwrap().tag, StabilityTag::StableNode);
    assert!(matches!(classify_carrying_capacity(&params(1.0, 1.0, 1.0, 1.0)), Err(Error::NonHyperbolic(_))));
}

#[test]
fn origin_examples() {
    let cls = classify_origin(&params(10.05, 1.05, 10.0, 3.05)).unwrap();
    assert_eq!(cls.tag, StabilityTag::DegenerateOrigin);
    assert_eq!(cls.origin_sectors, Some(OriginSectors::Elliptic_III));
    let cls = classify_origin(&params(0.363, 0.16, 0.25, 1.77)).unwrap();
    assert_eq!(cls.origin_sectors, Some(OriginSectors::AttractingSaddle_V));
    assert!(matches!(classify_origin(&params(3.0, 1.0, 0.25, 1.5)), Err(Error::NonGeneric(_))));
    assert!(matches!(classify_origin(&params(0.363, 0.16, 0.25, 0.9)), Err(Error::OutOfScope(_))));
    assert!(matches!(classify_origin(&params(0.1, 0.16, 0.25, 1.5)), Err(Error::OutOfScope(_))));
}

#[test]
fn blowup_examples() {
    let b = blowup_eigenvalues(&params(10.05, 1.05, 10.0, 3.05)).unwrap();
    assert_abs_diff_eq!(b.o_xy.0, -1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(b.o_xy.1, -1.05, epsilon = 1e-14);
    assert!(b.i_x.is_none() && b.i_y.is_none());
    assert!(matches!(blowup_eigenvalues(&params(1.16, 0.16, 0.25, 1.5)), Err(Error::NonGeneric(_))));
}

#[test]
fn interior_classification_from_trace() {
    let eq = |q| {
        let p = params(0.363, 0.16, 0.25, q);
        let e = *interior_equilibria(&p).iter().find(|e| e.kind == EquilibriumKind::P2).unwrap();
        classify_interior(&p, &e).unwrap()
    };
    assert!(eq(1.6).is_attractor());
    assert!(matches!(eq(1.8).tag, StabilityTag::UnstableFocus | StabilityTag::UnstableNode));
}

#[test]
fn trace_sign_quantities_are_pinned() {
    // High-precision evaluation of the printed and of the corrected decomposition.
    let at = |q| params(0.363, 0.16, 0.25, q);
    assert_abs_diff_eq!(reference_trace_quantity(&at(1.6)), -0.003616533456107215, epsilon = 1e-14);
    assert_abs_diff_eq!(reference_trace_quantity(&at(1.8)), 0.025974998895382144, epsilon = 1e-14);
    assert_abs_diff_eq!(trace_sign_quantity(&at(1.6)), -0.011977782066710939, epsilon = 1e-14);
    assert_abs_diff_eq!(trace_sign_quantity(&at(1.8)), 0.007572567083423893, epsilon = 1e-14);
    assert_abs_diff_eq!(trace_sign_quantity(&at(1.7)), -0.001655746089418507, epsilon = 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    /// The corrected decomposition equals N(C+NQ)²·tr J(P₂) wherever P₂ exists.
    #[test]
    fn corrected_decomposition_is_scaled_trace(c in 0.2f64..1.0, n in 0.17f64..1.0, q in 1.0f64..3.0) {
        let p = params(c, 0.16, n, q);
        let Some(p2) = interior_equilibria(&p).into_iter().find(|e| e.kind == EquilibriumKind::P2) else { return Ok(()) };
        let scaled = n * (c + n * q).powi(2) * jacobian(&p, p2.point).trace();
        prop_assert!((trace_sign_quantity(&p) - scaled).abs() < 1e-11 * (1.0 + scaled.abs()));
    }
}

#[test]
fn collapsed_classification() {
    let p = params(0.363, 0.16, 0.25, 1.8281);
    assert_eq!(classify_collapsed(&p).unwrap().tag, StabilityTag::SaddleNodeRepeller);

    let cs = c_star(0.16, 0.25);
    assert_abs_diff_eq!(cs, 0.82586925565532963, epsilon = 1e-14);

    let c = cs + 0.01;
    let p = params(c, 0.16, 0.25, saddle_node_q(c, 0.16, 0.25).unwrap());
    assert_eq!(classify_collapsed(&p).unwrap().tag, StabilityTag::SaddleNodeAttractor);
    let e = collapsed_equilibrium(&p);
    assert!(jacobian(&p, e).trace() < 0.0);

    let p = params(cs, 0.16, 0.25, saddle_node_q(cs, 0.16, 0.25).unwrap());
    assert!(matches!(classify_collapsed(&p), Err(Error::Degenerate(_))));
    assert!(matches!(classify_collapsed(&params(0.363, 0.16, 0.25, 1.6)), Err(Error::Precondition(_))));
}

#[test]
fn collapsed_point_has_zero_determinant() {
    for c in [0.3, 0.363, 0.5, 0.7, 0.9] {
        let p = params(c, 0.16, 0.25, saddle_node_q(c, 0.16, 0.25).unwrap());
        let eqs = interior_equilibria(&p);
        assert_eq!(eqs.len(), 1, "C = {c}");
        assert_eq!((eqs[0].kind, eqs[0].multiplicity), (EquilibriumKind::CollapsedE, 2));
        assert!(jacobian(&p, eqs[0].point).det().abs() < 1e-8);
        assert!(residual(&p, eqs[0].point) < 1e-10);
        assert!(matches!(classify_interior(&p, &eqs[0]), Err(Error::Precondition(_))));
    }
}

/// Trace at P₂ for Σ₂ = 0, eliminating C = MQ/(Q−1), from a symbolic computation.
fn sigma2zero_trace_oracle(m: f64, n: f64, q: f64) -> f64 {
    let poly = m.powi(3) - 2.0 * m * m * n + m * m * q - m * m - m * n * n * q + m * n * n + 2.0 * m * n * q * q
        - 4.0 * m * n * q
        + 2.0 * m * n
        - n * n * q * q
        + 2.0 * n * n * q
        - n * n;
    -(m - n) * poly / (n * (m + n * q - n).powi(2))
}

#[test]
fn sigma2_zero_case() {
    let (m, n, q) = (0.16, 0.25, 1.8);
    let c = m * q / (q - 1.0);
    let p = params(c, m, n, q);
    let s = sigma_delta(&p);
    assert!(s.sigma2.abs() < 1e-12);
    assert_eq!(s.case_label, CaseLabel::Collision_Sigma2Zero);
    let eqs = interior_equilibria(&p);
    assert_eq!(eqs.len(), 1);
    assert_eq!(eqs[0].point, sigma2zero_point(&p));
    assert!(residual(&p, eqs[0].point) < 1e-12);

    // The printed closed form is negative but the Jacobian trace is not.
    let j = jacobian(&p, eqs[0].point);
    assert!(reference_sigma2zero_trace(&p) < 0.0);
    assert_abs_diff_eq!(j.trace(), 0.0416, epsilon = 1e-14);
    assert_abs_diff_eq!(j.det(), 0.0010368, epsilon = 1e-15);
    assert_eq!(classify_sigma2zero(&p).unwrap().tag, StabilityTag::UnstableFocus);

    // Far from the Hopf set P₂ is stable.
    let (m, n, q) = (0.05, 0.6, 3.0);
    let p = params(m * q / (q - 1.0), m, n, q);
    assert!(classify_sigma2zero(&p).unwrap().is_attractor());

    let p = params(0.4, 0.3, 0.25, 0.4 / 0.1);
    assert!(matches!(classify_sigma2zero(&p), Err(Error::NonGeneric(_))));
    assert!(matches!(classify_sigma2zero(&params(0.363, 0.16, 0.25, 1.6)), Err(Error::Precondition(_))));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sigma2_zero_point_properties(m in 0.01f64..1.0, dn in 0.01f64..1.0, q in 1.05f64..4.0) {
        let n = m + dn;
        let c = m * q / (q - 1.0);
        let p = params(c, m, n, q);
        prop_assert!(reference_sigma2zero_trace(&p) < 0.0);
        let e = interior_equilibria(&p);
        prop_assert_eq!(e.len(), 1);
        prop_assert!(residual(&p, e[0].point) < 1e-12);
        let j = jacobian(&p, e[0].point);
        prop_assert!(j.det() > 0.0);
        let tr = sigma2zero_trace_oracle(m, n, q);
        prop_assert!((j.trace() - tr).abs() < 1e-10 * (1.0 + tr.abs()));
    }
}
