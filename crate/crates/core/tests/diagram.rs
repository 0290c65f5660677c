use bazykin::bifurcation::diagram::{hom_q, hopf_q};
use bazykin::bifurcation::{bt_point, saddle_node_q, trace_diagram, trace_diagram_with, DiagramOptions, DiagramRegion};
use bazykin::dynamics::homoclinic::HomoclinicOptions;
use bazykin::equilibria::{interior_equilibria, sigma_delta, EquilibriumKind};
use bazykin::model::jacobian;
use bazykin::{BifDiagram64, Error, Params};

const M: f64 = 0.16;
const N: f64 = 0.25;

fn diagram() -> BifDiagram64 {
    trace_diagram(M, N, (1.01, 3.0), (0.2, 0.9)).unwrap()
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

#[test]
fn curves_ordered_at_reference_c() {
    let c = 0.363;
    let sn = saddle_node_q(c, M, N).unwrap();
    let h = hopf_q(c, M, N, 1.01, 3.0, 400).unwrap().unwrap();
    let hom = hom_q(c, M, N, h, 1.01, &HomoclinicOptions::default()).unwrap();
    assert!((sn - 1.8281).abs() < 5e-5);
    assert!(h > 1.6 && h < 1.8, "Q_H = {h}");
    assert!((hom - 1.70).abs() < 0.005);
    assert!(sn > h && h > hom, "{sn} {h} {hom}");
}

#[test]
fn diagram_skeleton() {
    let d = diagram();
    let bt = bt_point(M, N).unwrap();
    assert_eq!(d.bt_point, (bt.q_star, bt.c_star));

    for &(q, c) in &d.sn_curve {
        assert!(sigma_delta(&Params::new(c, M, N, q).unwrap()).delta.abs() < 1e-10);
    }
    // Hopf samples: P2 has zero trace, away from the appended BT vertex.
    for &(q, c) in d.hopf_curve.iter().filter(|&&p| p != d.bt_point) {
        let p = Params::new(c, M, N, q).unwrap();
        let e = interior_equilibria(&p).into_iter().find(|e| e.kind == EquilibriumKind::P2).unwrap();
        assert!(jacobian(&p, e.point).trace().abs() < 1e-9, "trace at ({q}, {c})");
    }
    // Every curve reaches the Bogdanov-Takens point.
    let near = |curve: &[(f64, f64)]| {
        curve.iter().filter(|&&p| p != d.bt_point).map(|&p| dist(p, d.bt_point)).fold(f64::INFINITY, f64::min)
    };
    assert!(near(&d.sn_curve) < 1e-2);
    assert!(near(&d.hopf_curve) < 1e-2);
    assert!(near(&d.hom_curve) < 1e-2);

    // Pointwise ordering SN > H > Hom wherever all three exist.
    for &(q_hom, c) in &d.hom_curve {
        let (q_h, _) = *d.hopf_curve.iter().find(|p| (p.1 - c).abs() < 1e-12).unwrap();
        let q_sn = saddle_node_q(c, M, N).unwrap();
        assert!(q_sn > q_h && q_h > q_hom, "at C = {c}: {q_sn} {q_h} {q_hom}");
    }
}

#[test]
fn region_labels_follow_the_curves() {
    let opts = DiagramOptions { label_grid: (10, 10), ..DiagramOptions::default() };
    let d = trace_diagram_with(M, N, (1.01, 3.0), (0.2, 0.9), &opts).unwrap();
    assert!(!d.region_labels.is_empty());
    for s in &d.region_labels {
        let q_sn = saddle_node_q(s.c, M, N).unwrap();
        if s.q > q_sn + 1e-6 {
            assert_eq!(s.region, DiagramRegion::GlobalExtinction, "({}, {})", s.q, s.c);
        }
        if s.region == DiagramRegion::P2StableNoCycle || s.region == DiagramRegion::UnstableCycleAroundP2 {
            let q_h = hopf_q(s.c, M, N, 1.01, 3.0, 400).unwrap();
            if let Some(q_h) = q_h {
                assert!(s.q < q_h, "stable P2 above the Hopf curve at ({}, {})", s.q, s.c);
            }
        }
    }
}

#[test]
fn diagram_rejects_empty_ranges() {
    assert!(matches!(trace_diagram(M, N, (2.0, 1.0), (0.2, 0.9)), Err(Error::Domain(_))));
    assert!(matches!(trace_diagram(M, N, (1.0, 2.0), (0.0, 0.9)), Err(Error::Domain(_))));
}
