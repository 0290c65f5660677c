//! `(Q, C)` bifurcation diagram at fixed `(M, N)`: saddle-node, Hopf and
//! homoclinic curves, the Bogdanov-Takens point and sampled region labels.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::basin::with_thread_cap;
use crate::dynamics::cycles::find_limit_cycles;
use crate::dynamics::homoclinic::{connection_separation, homoclinic_q_with, HomoclinicOptions};
use crate::equilibria::{classify_interior, interior_equilibria, EquilibriumKind};
use crate::error::{Error, Result};
use crate::model::{jacobian, Params, State};
use crate::scalar::{lit, Scalar};

use super::bt::bt_point;
use super::saddle_node::saddle_node_q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagramRegion {
    GlobalExtinction,
    P2Unstable,
    UnstableCycleAroundP2,
    P2StableNoCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSample<T> {
    #[serde(rename = "Q")]
    pub q: T,
    #[serde(rename = "C")]
    pub c: T,
    pub region: DiagramRegion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifDiagram<T> {
    /// Points `(Q, C)`.
    pub sn_curve: Vec<(T, T)>,
    pub hopf_curve: Vec<(T, T)>,
    pub hom_curve: Vec<(T, T)>,
    pub bt_point: (T, T),
    pub region_labels: Vec<RegionSample<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramOptions {
    /// Number of `C` samples for the curves.
    pub n_c: usize,
    /// Number of `Q` samples scanned for the Hopf root at each `C`.
    pub n_q_scan: usize,
    pub with_hom: bool,
    /// Region label grid `(n_q, n_c)`; zero disables labelling.
    pub label_grid: (usize, usize),
}

impl Default for DiagramOptions {
    fn default() -> Self {
        Self { n_c: 71, n_q_scan: 400, with_hom: true, label_grid: (8, 8) }
    }
}

/// P₂ with Δ clamped at zero, so that it exists up to the saddle-node curve.
fn p2_clamped<T: Scalar>(p: &Params<T>) -> Option<State<T>> {
    let two = lit::<T>(2.0);
    let (c, m, n, q) = (p.c, p.m, p.n, p.q);
    let s1 = two * c * (q - T::one()) - q * (m + n);
    let s2 = q * (c - m) - c;
    let s3 = -two * n * s2 + c * (m - n);
    let d = (m - n) * (m - n) - lit::<T>(4.0) * n * s2;
    let scale = ((m - n) * (m - n)).max(T::one());
    if d < -lit::<T>(1e-12) * scale || c <= m {
        return None;
    }
    let sd = d.max(T::zero()).sqrt();
    let den = two * (c + n * q);
    let s = State::new((-s1 + q * sd) / den, (-s3 + c * sd) / (n * den));
    (s.u > T::zero() && s.v > T::zero()).then_some(s)
}

fn p2_trace<T: Scalar>(p: &Params<T>) -> Option<T> {
    p2_clamped(p).map(|s| jacobian(p, s).trace())
}

/// Hopf root `Q_H(C)`: the sign change of `tr J(P₂)` on `[q_lo, min(q_hi, Q_SN)]`.
pub fn hopf_q<T: Scalar>(c: T, m: T, n: T, q_lo: T, q_hi: T, n_scan: usize) -> Result<Option<T>> {
    let q_sn = saddle_node_q(c, m, n)?;
    let top = q_hi.min(q_sn);
    if !(top > q_lo) {
        return Ok(None);
    }
    let base = Params::new(c, m, n, q_lo)?;
    let tr = |q: T| p2_trace(&base.with_q(q));
    let n = n_scan.max(2);
    let mut roots = Vec::new();
    let mut prev: Option<(T, T)> = None;
    for i in 0..=n {
        let q = q_lo + (top - q_lo) * lit(i as f64 / n as f64);
        let Some(t) = tr(q) else {
            prev = None;
            continue;
        };
        if let Some((qa, ta)) = prev {
            if (ta < T::zero()) != (t < T::zero()) {
                roots.push(bisect(&tr, qa, ta, q)?);
            }
        }
        prev = Some((q, t));
    }
    match roots.len() {
        0 => Ok(None),
        1 => Ok(Some(roots[0])),
        _ => Err(Error::Degenerate(format!("Hopf set is not a graph over C at C = {c}: {} roots", roots.len()))),
    }
}

fn bisect<T: Scalar, F: Fn(T) -> Option<T>>(f: &F, mut a: T, fa: T, mut b: T) -> Result<T> {
    let neg_a = fa < T::zero();
    for _ in 0..200 {
        let mid = (a + b) / lit(2.0);
        if mid == a || mid == b {
            break;
        }
        let fm = f(mid).ok_or_else(|| Error::NotFound("P2 vanished during Hopf bisection".into()))?;
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm < T::zero()) == neg_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((a + b) / lit(2.0))
}

/// Homoclinic root below `Q_H(C)`: log-spaced scan of `δ = Q_H − Q`, then bisection.
pub fn hom_q<T: Scalar>(c: T, m: T, n: T, q_h: T, q_lo: T, opts: &HomoclinicOptions) -> Option<T> {
    let base = Params::new(c, m, n, q_h).ok()?;
    let span = (q_h - q_lo).as_f64();
    if !(span > 1e-7) {
        return None;
    }
    let (lo, hi) = (-7.0f64, span.log10());
    let k = 40;
    let mut prev: Option<(T, T)> = None;
    for i in 0..=k {
        let delta = 10f64.powf(lo + (hi - lo) * i as f64 / k as f64);
        let q = q_h - lit::<T>(delta);
        let Ok((sep, _)) = connection_separation(&base.with_q(q), opts) else {
            prev = None;
            continue;
        };
        if sep.is_nan() {
            prev = None;
            continue;
        }
        if let Some((qa, sa)) = prev {
            if (sa < T::zero()) != (sep < T::zero()) {
                return homoclinic_q_with(c, m, n, q, qa, opts).ok().map(|r| r.q);
            }
        }
        prev = Some((q, sep));
    }
    None
}

fn region_at<T: Scalar>(p: &Params<T>) -> Result<DiagramRegion> {
    let p2 = interior_equilibria(p).into_iter().find(|e| e.kind == EquilibriumKind::P2);
    let Some(p2) = p2 else { return Ok(DiagramRegion::GlobalExtinction) };
    if !classify_interior(p, &p2)?.is_attractor() {
        return Ok(DiagramRegion::P2Unstable);
    }
    let cycles = find_limit_cycles(p)?;
    Ok(if cycles.iter().any(|c| !c.stable) {
        DiagramRegion::UnstableCycleAroundP2
    } else {
        DiagramRegion::P2StableNoCycle
    })
}

fn linspace<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * lit(i as f64 / (n - 1) as f64)).collect()
}

pub fn trace_diagram<T: Scalar>(m: T, n: T, q_range: (T, T), c_range: (T, T)) -> Result<BifDiagram<T>> {
    trace_diagram_with(m, n, q_range, c_range, &DiagramOptions::default())
}

pub fn trace_diagram_with<T: Scalar>(
    m: T,
    n: T,
    q_range: (T, T),
    c_range: (T, T),
    opts: &DiagramOptions,
) -> Result<BifDiagram<T>> {
    let (q_lo, q_hi) = q_range;
    let (c_lo, c_hi) = c_range;
    if !(q_lo > T::zero() && q_hi > q_lo && c_lo > T::zero() && c_hi > c_lo) {
        return Err(Error::Domain("diagram ranges must be positive and non-empty".into()));
    }
    let bt = bt_point(m, n)?;
    let cs: Vec<T> = linspace(c_lo, c_hi, opts.n_c).into_iter().filter(|&c| c > m).collect();

    let mut sn_curve = Vec::new();
    for &c in &cs {
        let q = saddle_node_q(c, m, n)?;
        if q >= q_lo && q <= q_hi {
            sn_curve.push((q, c));
        }
    }

    let hopf: Vec<Option<T>> = cs
        .iter()
        .map(|&c| hopf_q(c, m, n, q_lo, q_hi, opts.n_q_scan))
        .collect::<Result<_>>()?;
    let mut hopf_curve: Vec<(T, T)> = cs.iter().zip(&hopf).filter_map(|(&c, q)| q.map(|q| (q, c))).collect();
    // The Hopf set ends on the saddle-node curve at the Bogdanov-Takens point.
    if bt.c_star >= c_lo && bt.c_star <= c_hi {
        hopf_curve.push((bt.q_star, bt.c_star));
        hopf_curve.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    }

    let hom_curve = if opts.with_hom {
        let hopts = HomoclinicOptions::default();
        let pairs: Vec<(T, T)> = hopf_curve.iter().copied().filter(|&(_, c)| c < bt.c_star).collect();
        let homs: Vec<Option<(T, T)>> = with_thread_cap(|| {
            pairs
                .par_iter()
                .map(|&(q_h, c)| hom_q(c, m, n, q_h, q_lo, &hopts).map(|q| (q, c)))
                .collect()
        });
        homs.into_iter().flatten().collect()
    } else {
        Vec::new()
    };

    let mut region_labels = Vec::new();
    let (nq, nc) = opts.label_grid;
    if nq > 0 && nc > 0 {
        let pts: Vec<(T, T)> = linspace(c_lo, c_hi, nc + 2)[1..=nc]
            .iter()
            .filter(|&&c| c > m)
            .flat_map(|&c| linspace(q_lo, q_hi, nq + 2)[1..=nq].iter().map(move |&q| (q, c)).collect::<Vec<_>>())
            .collect();
        let regions: Vec<Result<DiagramRegion>> = with_thread_cap(|| {
            pts.par_iter()
                .map(|&(q, c)| region_at(&Params::new(c, m, n, q)?))
                .collect()
        });
        for ((q, c), r) in pts.into_iter().zip(regions) {
            region_labels.push(RegionSample { q, c, region: r? });
        }
    }

    Ok(BifDiagram { sn_curve, hopf_curve, hom_curve, bt_point: (bt.q_star, bt.c_star), region_labels })
}
