use bazykin::bifurcation::{bt_point, lyapunov_l1, sotomayor_check, trace_diagram_with, DiagramOptions, UvGrid};
use bazykin::dynamics::*;
use bazykin::equilibria::*;
use bazykin::model::{jacobian, nondimensionalize};
use bazykin::{DimensionalParams, Params, State};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt::Debug;

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + Debug>(x: &T) {
    let s = serde_json::to_string(x).unwrap();
    let back: T = serde_json::from_str(&s).unwrap();
    assert_eq!(&back, x, "via {s}");
}

#[test]
fn parameter_types() {
    let d = DimensionalParams { r: 2.0, k: 3.0, q: 1.6, a: 0.5, c: 0.363, mu0: 0.32, mu1: 1.0 / 12.0 };
    round_trip(&d);
    let p = nondimensionalize(&d).unwrap();
    round_trip(&p);
    let v = serde_json::to_value(p).unwrap();
    for key in ["C", "M", "N", "Q"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    round_trip(&State::new(0.1f64, 1.0 / 3.0));
    round_trip(&Tolerances::default());
    round_trip(&UvGrid::default());
    round_trip(&GridSpec::square(1.0, 7));
    round_trip(&CycleOptions::default());
    round_trip(&OmegaOptions::default());
    round_trip(&DiagramOptions::default());
}

#[test]
fn equilibrium_products() {
    let p = Params::new(0.363f64, 0.16, 0.25, 1.82).unwrap();
    round_trip(&sigma_delta(&p));
    for e in interior_equilibria(&p) {
        round_trip(&e);
        round_trip(&classify_interior(&p, &e).unwrap());
    }
    for e in boundary_equilibria(&p) {
        round_trip(&e);
    }
    round_trip(&classify_origin(&p).unwrap());
    round_trip(&blowup_eigenvalues(&p).unwrap());
    round_trip(&jacobian(&p, State::new(0.3, 0.2)));
    round_trip(&jacobian(&p, State::new(0.3, 0.2)).eigenvalues());
    let q = bazykin::bifurcation::saddle_node_q(0.363, 0.16, 0.25).unwrap();
    round_trip(&sotomayor_check(&p.with_q(q)).unwrap());
}

#[test]
fn bifurcation_products() {
    round_trip(&bt_point(0.16f64, 0.25).unwrap());
    round_trip(&lyapunov_l1(0.363f64, 0.27, 0.22).unwrap());
    let opts = DiagramOptions { n_c: 8, label_grid: (2, 2), ..DiagramOptions::default() };
    round_trip(&trace_diagram_with(0.16f64, 0.25, (1.01, 3.0), (0.2, 0.9), &opts).unwrap());
}

#[test]
fn dynamics_products() {
    let p = Params::new(0.363f64, 0.16, 0.25, 1.705).unwrap();
    round_trip(&integrate(&p, State::new(0.5, 0.3), 10.0, 1e-9).unwrap());
    for c in find_limit_cycles(&p).unwrap() {
        round_trip(&c);
    }
    round_trip(&basin_raster(&p, &GridSpec::square(1.0, 4)).unwrap());
    round_trip(&homoclinic_q(0.363f64, 0.16, 0.25, 1.695, 1.705).unwrap());
    round_trip(&saddle_manifolds(&p.with_q(1.82)).unwrap());
    let att = Attractors::of(&p);
    round_trip(&omega_limit_with(&p, State::new(0.5, 0.3), &att, &OmegaOptions::default()).unwrap());
}

#[test]
fn single_precision_round_trip() {
    let p = Params::new(0.363f32, 0.16, 0.25, 1.6).unwrap();
    round_trip(&p);
    round_trip(&sigma_delta(&p));
}
