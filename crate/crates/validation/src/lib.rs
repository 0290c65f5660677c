//! Acceptance criteria for the `bazykin` library, each evaluated into a
//! [`Report`] of named checks.

use std::fmt::Write;
use std::time::Duration;

use bazykin::bifurcation::diagram::{hom_q, hopf_q};
use bazykin::bifurcation::{self as bif, DiagramOptions, UvGrid};
use bazykin::dynamics::homoclinic::HomoclinicOptions;
use bazykin::dynamics::{self as dynm, GridSpec, OmegaLabel};
use bazykin::equilibria::{self as eq, EquilibriumKind, OriginSectors, StabilityTag};
use bazykin::model::{jacobian, predator_nullcline, prey_nullcline, vector_field};
use bazykin::{Eigenvalues, Params, State};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// One criterion: a title, a runtime budget and its individual checks.
pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub budget: Duration,
    pub run: fn() -> Report,
}

#[derive(Debug, Default)]
pub struct Report {
    pub checks: Vec<(String, bool)>,
}

impl Report {
    pub fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.checks.push((detail.into(), ok));
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.1)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (d, ok) in &self.checks {
            let _ = write!(s, "\n    [{}] {d}", if *ok { "ok" } else { "FAIL" });
        }
        s
    }
}

fn params(c: f64, m: f64, n: f64, q: f64) -> Params<f64> {
    Params::new(c, m, n, q).expect("fixed parameters are valid")
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "trace-sign regression", budget: Duration::from_secs(1), run: trace_sign },
    Criterion { id: 2, title: "saddle-node location", budget: Duration::from_secs(1), run: saddle_node },
    Criterion { id: 3, title: "homoclinic location", budget: Duration::from_secs(60), run: homoclinic },
    Criterion { id: 4, title: "limit-cycle census", budget: Duration::from_secs(120), run: cycle_census },
    Criterion { id: 5, title: "qualitative phase portraits", budget: Duration::from_secs(60), run: phase_portraits },
    Criterion { id: 6, title: "bifurcation diagram skeleton", budget: Duration::from_secs(600), run: diagram },
    Criterion { id: 7, title: "Bogdanov-Takens certificate", budget: Duration::from_secs(1), run: bt_certificate },
    Criterion { id: 8, title: "property suites", budget: Duration::from_secs(900), run: properties },
];

pub fn trace_sign() -> Report {
    let mut r = Report::default();
    for (q, expected) in [(1.6, -0.036091), (1.8, 0.025983)] {
        let got = eq::reference_trace_quantity(&params(0.363, 0.16, 0.25, q));
        r.check(
            (got - expected).abs() < 1e-5,
            format!("Q = {q}: T1·√Δ + T2 = {got:.7} (expected {expected}, tol 1e-5)"),
        );
    }
    r
}

pub fn saddle_node() -> Report {
    let mut r = Report::default();
    let q = bif::saddle_node_q(0.363, 0.16, 0.25).unwrap_or(f64::NAN);
    r.check((q - 1.8281).abs() < 5e-5, format!("Q_SN = {q:.10} (expected 1.8281 to 4 d.p.)"));
    let class = eq::classify_collapsed(&params(0.363, 0.16, 0.25, q));
    r.check(
        matches!(class, Ok(c) if c.tag == StabilityTag::SaddleNodeRepeller),
        format!("collapsed equilibrium: {class:?} (expected SaddleNodeRepeller)"),
    );
    r
}

pub fn homoclinic() -> Report {
    let mut r = Report::default();
    match dynm::homoclinic_q(0.363f64, 0.16, 0.25, 1.695, 1.705) {
        Ok(h) => {
            r.check((1.695..=1.705).contains(&h.q), format!("Q_hom = {:.10} in [1.695, 1.705]", h.q));
            r.check((h.q - 1.70).abs() <= 0.005, format!("|Q_hom − 1.70| = {:.2e} <= 0.005", (h.q - 1.70).abs()));
        }
        Err(e) => r.check(false, format!("homoclinic_Q failed: {e}")),
    }
    r
}

pub fn cycle_census() -> Report {
    let mut r = Report::default();
    match dynm::find_limit_cycles(&params(0.363, 0.16, 0.25, 1.705)) {
        Ok(c) => {
            let desc: Vec<String> = c.iter().map(|c| format!("{} (floquet {:.3})", stab(c.stable), c.floquet)).collect();
            r.check(c.len() == 1 && !c[0].stable, format!("Q = 1.705: {} cycle(s) {desc:?} (expected one unstable)", c.len()));
        }
        Err(e) => r.check(false, format!("Q = 1.705: {e}")),
    }
    match dynm::find_limit_cycles(&params(0.363, 0.17, 0.25, 1.77)) {
        Ok(c) => {
            let desc: Vec<String> = c
                .iter()
                .map(|c| format!("{} at u = {:.5} (floquet {:.3})", stab(c.stable), c.section_point.u, c.floquet))
                .collect();
            // Cycles are ordered by distance from P₂ along the section.
            let ok = c.len() == 2 && !c[0].stable && c[1].stable;
            r.check(ok, format!("M = 0.17, Q = 1.77: {} cycle(s) {desc:?} (expected inner unstable, outer stable)", c.len()));
        }
        Err(e) => r.check(false, format!("M = 0.17, Q = 1.77: {e}")),
    }
    r
}

fn stab(stable: bool) -> &'static str {
    if stable {
        "stable"
    } else {
        "unstable"
    }
}

pub fn phase_portraits() -> Report {
    let mut r = Report::default();
    let grid = GridSpec::square(1.0, 50);

    let p = params(10.05, 1.05, 10.0, 3.05);
    r.check(eq::interior_equilibria(&p).is_empty(), "extinction case: no interior equilibria");
    let cc = eq::classify_carrying_capacity(&p);
    r.check(matches!(cc, Ok(c) if c.tag == StabilityTag::Saddle), format!("extinction case: (1,0) is {cc:?}"));
    let o = eq::classify_origin(&p);
    r.check(
        matches!(o, Ok(c) if c.origin_sectors == Some(OriginSectors::Elliptic_III)),
        format!("extinction case: origin is {o:?} (expected region III elliptic)"),
    );
    match dynm::basin_raster(&p, &grid) {
        Ok(b) => {
            let k = b.count(OmegaLabel::Origin);
            r.check(k == 2500, format!("extinction case: {k}/2500 cells reach the origin"));
        }
        Err(e) => r.check(false, format!("extinction raster: {e}")),
    }

    let p = params(0.205, 0.22, 0.25, 1.8);
    r.check(eq::interior_equilibria(&p).is_empty(), "predator-free case: no interior equilibria");
    let cc = eq::classify_carrying_capacity(&p);
    r.check(matches!(cc, Ok(c) if c.tag == StabilityTag::StableNode), format!("predator-free case: (1,0) is {cc:?}"));
    match dynm::basin_raster(&p, &grid) {
        Ok(b) => {
            let k = b.count(OmegaLabel::CarryingCapacity);
            let o = b.count(OmegaLabel::Origin);
            r.check(k == 2500, format!("predator-free case: {k}/2500 cells reach (1,0), {o} reach the origin"));
        }
        Err(e) => r.check(false, format!("predator-free raster: {e}")),
    }
    r
}

pub fn diagram() -> Report {
    let mut r = Report::default();
    let (m, n) = (0.16, 0.25);
    let c = 0.363;
    let sn = bif::saddle_node_q(c, m, n).unwrap_or(f64::NAN);
    let h = hopf_q(c, m, n, 1.01, 3.0, DiagramOptions::default().n_q_scan).ok().flatten().unwrap_or(f64::NAN);
    let hom = hom_q(c, m, n, h, 1.01, &HomoclinicOptions::default()).unwrap_or(f64::NAN);
    r.check(sn > h && h > hom, format!("C = 0.363: SN {sn:.6} > H {h:.6} > Hom {hom:.6}"));
    r.check(h > 1.6 && h < 1.8, format!("C = 0.363: Q_H = {h:.6} in (1.6, 1.8)"));

    match bif::trace_diagram(m, n, (1.01, 3.0), (0.2, 0.9)) {
        Ok(d) => {
            let bt = d.bt_point;
            // The Hopf curve ends at the BT point; that appended vertex is not evidence.
            let near = |curve: &[(f64, f64)]| {
                curve
                    .iter()
                    .filter(|&&p| p != bt)
                    .map(|&(q, c)| (q - bt.0).hypot(c - bt.1))
                    .fold(f64::INFINITY, f64::min)
            };
            for (name, curve) in [("SN", &d.sn_curve), ("H", &d.hopf_curve), ("Hom", &d.hom_curve)] {
                let dist = near(curve);
                r.check(dist < 1e-2, format!("{name} curve ({} points) reaches BT within {dist:.2e} (tol 1e-2)", curve.len()));
            }
        }
        Err(e) => r.check(false, format!("trace_diagram: {e}")),
    }
    r
}

pub fn bt_certificate() -> Report {
    let mut r = Report::default();
    let bt = match bif::bt_point(0.16, 0.25) {
        Ok(b) => b,
        Err(e) => {
            r.check(false, format!("bt_point: {e}"));
            return r;
        }
    };
    let j = jacobian(&params(bt.c_star, 0.16, 0.25, bt.q_star), bt.e_point);
    r.check(j.trace().abs() < 1e-8, format!("|tr J| = {:.2e} < 1e-8", j.trace().abs()));
    r.check(j.det().abs() < 1e-8, format!("|det J| = {:.2e} < 1e-8", j.det().abs()));
    r.check(j.max_norm() > 1e-3, format!("J nonzero (max |entry| = {:.3e})", j.max_norm()));
    let rel = j.mul(&j).max_norm() / j.max_norm().powi(2);
    r.check(rel < 1e-8, format!("|J²| / |J|² = {rel:.2e} < 1e-8"));
    for (name, g) in [("G1", bt.g1), ("G2", bt.g2), ("G3", bt.g3), ("G4", bt.g4)] {
        r.check(g.abs() >= 1e-10, format!("{name} = {g:.6e} nonzero"));
    }
    r
}

/// Interior equilibria as sign changes of prey minus predator nullcline on (0, 1).
fn nullcline_intersections(p: &Params<f64>) -> Vec<State<f64>> {
    let h = |u: f64| prey_nullcline(p, u).unwrap_or(f64::NAN) - predator_nullcline(p, u).unwrap_or(f64::NAN);
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
            let root = 0.5 * (a + b);
            let v = prey_nullcline(p, root).unwrap_or(f64::NAN);
            if v > 0.0 {
                out.push(State::new(root, v));
            }
        }
        prev = (u, hu);
    }
    out
}

fn equilibrium_oracle(r: &mut Report) {
    let (m, n) = (0.16, 0.25);
    let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / 49.0;
    let (mut bad, mut worst, mut counts) = (0usize, 0.0f64, [0usize; 3]);
    for i in 0..50 {
        for k in 0..50 {
            let p = params(lin(0.1, 1.0, k), m, n, lin(1.02, 2.4, i));
            let closed = eq::interior_equilibria(&p);
            let brute = nullcline_intersections(&p);
            if closed.len() != brute.len() {
                bad += 1;
                continue;
            }
            counts[closed.len().min(2)] += 1;
            for (e, b) in closed.iter().zip(&brute) {
                worst = worst.max(e.point.max_dist(b));
            }
        }
    }
    r.check(
        bad == 0 && worst < 1e-8,
        format!("equilibrium oracle on 50×50 (Q, C): {bad} count mismatches, max position error {worst:.1e} (tol 1e-8), counts 0/1/2 = {counts:?}"),
    );
}

fn jacobian_fd(r: &mut Report, rng: &mut StdRng) {
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = params(rng.gen_range(0.05..3.0), rng.gen_range(0.05..3.0), rng.gen_range(0.05..3.0), rng.gen_range(0.05..3.0));
        let s = State::new(rng.gen_range(0.0..1.5), rng.gen_range(0.0..2.0));
        let f = |u: f64, v: f64| vector_field(&p, State::new(u, v));
        let (fu1, fu0) = (f(s.u + h, s.v), f(s.u - h, s.v));
        let (fv1, fv0) = (f(s.u, s.v + h), f(s.u, s.v - h));
        let fd = [
            (fu1.0 - fu0.0) / (2.0 * h),
            (fv1.0 - fv0.0) / (2.0 * h),
            (fu1.1 - fu0.1) / (2.0 * h),
            (fv1.1 - fv0.1) / (2.0 * h),
        ];
        let j = jacobian(&p, s);
        let exact = [j.a, j.b, j.c, j.d];
        let scale = exact.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        for (x, y) in exact.iter().zip(fd) {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    r.check(worst < 1e-6, format!("Jacobian vs central differences, 1000 samples: max relative error {worst:.1e} (tol 1e-6)"));
}

fn gamma_invariance(r: &mut Report, rng: &mut StdRng) {
    let mut failures = Vec::new();
    for k in 0..100 {
        let (c, m, n, q) = (rng.gen_range(0.1..1.0), rng.gen_range(0.05..0.5), rng.gen_range(0.05..0.5), rng.gen_range(1.01..3.0));
        let p = params(c, m, n, q);
        let s0 = State::new(rng.gen_range(0.01..2.0), rng.gen_range(0.01..2.0));
        let tr = match dynm::integrate(&p, s0, 400.0, 1e-9) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("#{k}: {e}"));
                continue;
            }
        };
        let Some(entry) = tr.samples.iter().position(|(_, s)| s.u <= 1.0) else {
            failures.push(format!("#{k}: never entered u <= 1"));
            continue;
        };
        // For u <= 1 and N v² + M v > C the predator declines.
        let v_star = (-m + (m * m + 4.0 * n * c).sqrt()) / (2.0 * n);
        let v_cap = tr.samples[entry].1.v.max(v_star) + 1e-9;
        if let Some((t, s)) = tr.samples[entry..].iter().find(|(_, s)| !(s.u >= 0.0 && s.u <= 1.0 + 1e-9 && s.v >= 0.0 && s.v <= v_cap)) {
            failures.push(format!("#{k}: left Γ at t = {t:.3}: {s:?}"));
        }
    }
    r.check(
        failures.is_empty(),
        format!("Γ-invariance on 100 random trajectories: {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    );
}

fn hopf_consistency(r: &mut Report) {
    let (c, m): (f64, f64) = (0.363, 0.16);
    let curve = bif::hopf_curve_uv::<f64>(c, m, &UvGrid::default());
    let stride = (curve.len() / 20).max(1);
    let mut worst = 0.0f64;
    let mut checked = 0;
    for h in curve.iter().step_by(stride).take(20) {
        checked += 1;
        match bif::hopf_matrix(c, h.m_hopf, h.u, h.v).eigenvalues() {
            Eigenvalues::Complex { re, im } => worst = worst.max(re.abs() / im.abs()),
            Eigenvalues::Real(..) => worst = f64::INFINITY,
        }
    }
    r.check(
        checked == 20 && worst < 1e-9,
        format!("{checked} Hopf-curve samples: max |Re λ|/|Im λ| = {worst:.1e} (tol 1e-9)"),
    );

    // Two Hopf points per predicted criticality, one on each side of the Bautin point.
    for n in [0.03, 0.05, 0.15, 0.25] {
        r.check_hopf_sample(c, m, n);
    }
}

impl Report {
    fn check_hopf_sample(&mut self, c: f64, m: f64, n: f64) {
        let Some(q_h) = hopf_q(c, m, n, 1.0001, 2.5, 400).ok().flatten() else {
            self.check(false, format!("N = {n}: no Hopf value"));
            return;
        };
        let p = params(c, m, n, q_h);
        let Some(e) = eq::interior_equilibria(&p).into_iter().find(|e| e.kind == EquilibriumKind::P2) else {
            self.check(false, format!("N = {n}: no P2 at Q_H"));
            return;
        };
        let Ok(h) = bif::lyapunov_l1(c, e.point.u, e.point.v) else {
            self.check(false, format!("N = {n}: l1 undefined at P2"));
            return;
        };
        let dq = 5e-4;
        let small = |q: f64| -> Vec<(bool, f64)> {
            dynm::find_limit_cycles(&p.with_q(q))
                .unwrap_or_default()
                .iter()
                .map(|cy| (cy.stable, cy.section_point.u - e.point.u))
                .filter(|&(_, a)| a < 0.25)
                .collect()
        };
        let (before, after) = (small(q_h - dq), small(q_h + dq));
        let (ok, expect) = if h.l1 < 0.0 {
            (before.is_empty() && after.len() == 1 && after[0].0, "stable small cycle for Q > Q_H only")
        } else {
            (after.is_empty() && before.len() == 1 && !before[0].0, "unstable small cycle for Q < Q_H only")
        };
        self.check(
            ok,
            format!("N = {n}: Q_H = {q_h:.6}, l1 = {:.3e}; expect {expect}; cycles below {before:?}, above {after:?}", h.l1),
        );
    }
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq>(x: &T) -> bool {
    serde_json::to_string(x).ok().and_then(|s| serde_json::from_str::<T>(&s).ok()).is_some_and(|y| &y == x)
}

fn serialization(r: &mut Report) {
    let p = params(0.363, 0.16, 0.25, 1.82);
    let mut ok = vec![("Params", round_trip(&p))];
    ok.push(("SigmaSet", round_trip(&eq::sigma_delta(&p))));
    ok.push(("Equilibrium", eq::interior_equilibria(&p).iter().chain(&eq::boundary_equilibria(&p)).all(round_trip)));
    ok.push(("StabilityClass", eq::classify_origin(&p).is_ok_and(|c| round_trip(&c))));
    ok.push(("BlowupEigenvalues", eq::blowup_eigenvalues(&p).is_ok_and(|b| round_trip(&b))));
    let q_sn = bif::saddle_node_q(0.363, 0.16, 0.25).unwrap_or(f64::NAN);
    ok.push(("SotomayorCheck", bif::sotomayor_check(&p.with_q(q_sn)).is_ok_and(|s| round_trip(&s))));
    ok.push(("HopfData", bif::hopf_curve_uv(0.363, 0.16, &UvGrid::default()).iter().all(round_trip)));
    ok.push(("BtData", bif::bt_point(0.16, 0.25).is_ok_and(|b| round_trip(&b))));
    let opts = DiagramOptions { n_c: 8, label_grid: (2, 2), ..DiagramOptions::default() };
    ok.push(("BifDiagram", bif::trace_diagram_with(0.16, 0.25, (1.01, 3.0), (0.2, 0.9), &opts).is_ok_and(|d| round_trip(&d))));
    let pc = p.with_q(1.705);
    ok.push(("Trajectory", dynm::integrate(&pc, State::new(0.5, 0.3), 10.0, 1e-9).is_ok_and(|t| round_trip(&t))));
    ok.push(("LimitCycle", dynm::find_limit_cycles(&pc).is_ok_and(|c| !c.is_empty() && c.iter().all(round_trip))));
    ok.push(("BasinRaster", dynm::basin_raster(&pc, &GridSpec::square(1.0, 4)).is_ok_and(|b| round_trip(&b))));
    ok.push(("HomoclinicResult", dynm::homoclinic_q(0.363, 0.16, 0.25, 1.695, 1.705).is_ok_and(|h| round_trip(&h))));
    ok.push(("SaddleManifolds", dynm::saddle_manifolds(&p).is_ok_and(|s| round_trip(&s))));
    let failed: Vec<&str> = ok.iter().filter(|x| !x.1).map(|x| x.0).collect();
    r.check(failed.is_empty(), format!("JSON round-trip of {} product types; failed: {failed:?}", ok.len()));
}

pub fn properties() -> Report {
    let mut r = Report::default();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    equilibrium_oracle(&mut r);
    jacobian_fd(&mut r, &mut rng);
    gamma_invariance(&mut r, &mut rng);
    hopf_consistency(&mut r);
    serialization(&mut r);
    r
}
