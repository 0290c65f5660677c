//! Command-line surface and the mapping of each subcommand onto the library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use bazykin::bifurcation::{self as bif, DiagramOptions, UvGrid};
use bazykin::dynamics::{self as dyn_, GridSpec, OmegaLabel};
use bazykin::equilibria::{self as eq, Equilibrium, EquilibriumKind};
use bazykin::{DimensionalParams, Params, State};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value as Json};

use crate::error::{CliError, CliResult};
use crate::output::{Cell, Format, Product, Status, Table};
use crate::svg::Plot;
use crate::value::Value;

#[derive(Debug, Parser)]
#[command(name = "bazykin", version, about = "Equilibrium, bifurcation and basin analysis of the Bazykin predator-prey system")]
#[command(args_override_self = true)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output file (default: stdout).
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Omit the generator/timestamp header.
    #[arg(long, global = true)]
    pub no_meta: bool,
    /// Also write a static SVG plot to this path.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Read flags from a `key = value` file; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Nondimensional `--C --M --N --Q`, or the dimensional set.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(id = "C", long = "C", allow_hyphen_values = true)]
    pub c: Option<Value>,
    #[arg(id = "M", long = "M", allow_hyphen_values = true)]
    pub m: Option<Value>,
    #[arg(id = "N", long = "N", allow_hyphen_values = true)]
    pub n: Option<Value>,
    #[arg(id = "Q", long = "Q", allow_hyphen_values = true)]
    pub q: Option<Value>,
    #[arg(long = "r", allow_hyphen_values = true)]
    pub dim_r: Option<f64>,
    #[arg(long = "K", allow_hyphen_values = true)]
    pub dim_k: Option<f64>,
    #[arg(long = "q", allow_hyphen_values = true)]
    pub dim_q: Option<f64>,
    #[arg(long = "a", allow_hyphen_values = true)]
    pub dim_a: Option<f64>,
    #[arg(long = "c", allow_hyphen_values = true)]
    pub dim_c: Option<f64>,
    #[arg(long = "mu0", allow_hyphen_values = true)]
    pub dim_mu0: Option<f64>,
    #[arg(long = "mu1", allow_hyphen_values = true)]
    pub dim_mu1: Option<f64>,
}

#[derive(Debug, Subcommand)]
#[command(args_override_self = true)]
pub enum Command {
    /// Σ-quantities, all equilibria and their classification.
    Equilibria(#[command(flatten)] ParamArgs),
    /// Case label and local structure of the boundary and collapsed equilibria.
    Classify(#[command(flatten)] ParamArgs),
    /// Saddle-node value Q_SN over a range of C.
    SweepSn(#[command(flatten)] ParamArgs),
    /// Hopf set in the (U, V) chart for fixed C and M.
    HopfCurve {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2000)]
        n_u: usize,
        #[arg(long, default_value_t = 10.0)]
        v_max: f64,
    },
    /// Point of the Hopf set where the first Lyapunov quantity vanishes.
    Bautin(#[command(flatten)] ParamArgs),
    /// Bogdanov-Takens point and its genericity constants.
    Bt(#[command(flatten)] ParamArgs),
    /// Limit cycles around the interior equilibrium.
    Cycles {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Homoclinic/heteroclinic connection value of Q in a bracket `--Q lo:hi`.
    Homoclinic(#[command(flatten)] ParamArgs),
    /// ω-limit labels on a raster of initial conditions.
    Basin {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "0:1")]
        u: Value,
        #[arg(long, default_value = "0:1")]
        v: Value,
        /// Cells per axis.
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
    /// Trajectories from one or more starting points `u,v`.
    Phase {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "start", required = true, value_parser = parse_point)]
        starts: Vec<(f64, f64)>,
        #[arg(long, default_value_t = 200.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Saddle-node, Hopf and homoclinic curves in the (Q, C) plane.
    Diagram {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 71)]
        n_c: usize,
        #[arg(long)]
        no_hom: bool,
        /// Region label grid per axis; 0 disables labelling.
        #[arg(long, default_value_t = 8)]
        labels: usize,
    },
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected u,v, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("not a number: {x:?}"));
    Ok((num(a)?, num(b)?))
}

impl ParamArgs {
    fn get(&self, name: &str) -> Option<&Value> {
        match name {
            "C" => self.c.as_ref(),
            "M" => self.m.as_ref(),
            "N" => self.n.as_ref(),
            "Q" => self.q.as_ref(),
            _ => None,
        }
    }

    fn require(&self, name: &str) -> CliResult<&Value> {
        self.get(name).ok_or_else(|| CliError::Usage(format!("missing --{name}")))
    }

    fn scalar(&self, name: &str) -> CliResult<f64> {
        self.require(name)?.scalar(name)
    }

    fn dimensional(&self) -> [(&'static str, Option<f64>); 7] {
        [
            ("r", self.dim_r),
            ("K", self.dim_k),
            ("q", self.dim_q),
            ("a", self.dim_a),
            ("c", self.dim_c),
            ("mu0", self.dim_mu0),
            ("mu1", self.dim_mu1),
        ]
    }

    fn reject_dimensional(&self) -> CliResult<()> {
        match self.dimensional().iter().find(|(_, v)| v.is_some()) {
            Some((k, _)) => Err(CliError::Usage(format!("--{k} is only accepted by commands taking a full parameter set"))),
            None => Ok(()),
        }
    }

    /// Full parameter set, nondimensional or converted from dimensional flags.
    fn params(&self) -> CliResult<Params<f64>> {
        let dims = self.dimensional();
        let n_dim = dims.iter().filter(|(_, v)| v.is_some()).count();
        let n_nd = ["C", "M", "N", "Q"].iter().filter(|k| self.get(k).is_some()).count();
        if n_dim > 0 {
            if n_nd > 0 {
                return Err(CliError::Usage("give either --C --M --N --Q or the dimensional flags, not both".into()));
            }
            if let Some((k, _)) = dims.iter().find(|(_, v)| v.is_none()) {
                return Err(CliError::Usage(format!("missing --{k}")));
            }
            let v = |i: usize| dims[i].1.unwrap_or_default();
            let d = DimensionalParams { r: v(0), k: v(1), q: v(2), a: v(3), c: v(4), mu0: v(5), mu1: v(6) };
            return Ok(bazykin::model::nondimensionalize(&d)?);
        }
        Ok(Params::new(self.scalar("C")?, self.scalar("M")?, self.scalar("N")?, self.scalar("Q")?)?)
    }

    fn input(&self) -> Map<String, Json> {
        let mut m = Map::new();
        for k in ["C", "M", "N", "Q"] {
            if let Some(v) = self.get(k) {
                m.insert(k.into(), value_json(v));
            }
        }
        for (k, v) in self.dimensional() {
            if let Some(x) = v {
                m.insert(k.into(), json!(x));
            }
        }
        m
    }
}

fn value_json(v: &Value) -> Json {
    match *v {
        Value::Scalar(x) => json!(x),
        Value::Range { lo, hi, step, .. } => {
            let mut m = Map::new();
            m.insert("lo".into(), json!(lo));
            m.insert("hi".into(), json!(hi));
            if let Some(s) = step {
                m.insert("step".into(), json!(s));
            }
            Json::Object(m)
        }
    }
}

fn to_json<S: Serialize>(x: &S) -> Json {
    serde_json::to_value(x).expect("library types serialise to JSON")
}

fn params_json(p: &Params<f64>) -> Json {
    json!({ "C": p.c, "M": p.m, "N": p.n, "Q": p.q })
}

fn product(command: &'static str, input: Map<String, Json>, result: Json, table: Option<Table>, default_format: Format) -> Product {
    Product { command, input: Json::Object(input), result, table, svg: None, default_format, status: Status::Ok }
}

/// Runs the selected command; `want_svg` requests a plot.
pub fn execute(cmd: &Command, want_svg: bool) -> CliResult<Product> {
    let mut p = match cmd {
        Command::Equilibria(a) => equilibria(a)?,
        Command::Classify(a) => classify(a)?,
        Command::SweepSn(a) => sweep_sn(a, want_svg)?,
        Command::HopfCurve { params, n_u, v_max } => hopf_curve(params, *n_u, *v_max, want_svg)?,
        Command::Bautin(a) => bautin(a)?,
        Command::Bt(a) => bt(a)?,
        Command::Cycles { params, tol } => cycles(params, *tol, want_svg)?,
        Command::Homoclinic(a) => homoclinic(a)?,
        Command::Basin { params, u, v, n } => basin(params, u, v, *n, want_svg)?,
        Command::Phase { params, starts, t_end, tol } => phase(params, starts, *t_end, *tol, want_svg)?,
        Command::Diagram { params, n_c, no_hom, labels } => diagram(params, *n_c, *no_hom, *labels, want_svg)?,
    };
    if want_svg && p.svg.is_none() {
        return Err(CliError::Usage(format!("{} has no plot; --svg is not available", p.command)));
    }
    if !want_svg {
        p.svg = None;
    }
    Ok(p)
}

fn classified<C: Serialize>(r: bazykin::Result<C>) -> Json {
    match r {
        Ok(c) => to_json(&c),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn kind_name(k: EquilibriumKind) -> String {
    to_json(&k).as_str().unwrap_or_default().to_string()
}

fn equilibria(a: &ParamArgs) -> CliResult<Product> {
    let p = a.params()?;
    let sigma = eq::sigma_delta(&p);
    let mut table = Table::new(&["kind", "u", "v", "multiplicity", "stability"]);
    let mut entry = |e: &Equilibrium<f64>, class: Json, eig: Option<Json>| {
        let tag = class.get("tag").and_then(Json::as_str).unwrap_or("error").to_string();
        table.push(vec![
            Cell::Text(kind_name(e.kind)),
            e.point.u.into(),
            e.point.v.into(),
            Cell::Int(e.multiplicity as i64),
            Cell::Text(tag),
        ]);
        let mut m = Map::new();
        m.insert("equilibrium".into(), to_json(e));
        m.insert("classification".into(), class);
        if let Some(x) = eig {
            m.insert("eigenvalues".into(), x);
        }
        Json::Object(m)
    };
    let boundary: Vec<Json> = eq::boundary_equilibria(&p)
        .iter()
        .map(|e| {
            let class = match e.kind {
                EquilibriumKind::Origin => classified(eq::classify_origin(&p)),
                _ => classified(eq::classify_carrying_capacity(&p)),
            };
            entry(e, class, None)
        })
        .collect();
    let interior: Vec<Json> = eq::interior_equilibria(&p)
        .iter()
        .map(|e| {
            let class = match e.kind {
                EquilibriumKind::CollapsedE => classified(eq::classify_collapsed(&p)),
                _ => classified(eq::classify_interior(&p, e)),
            };
            entry(e, class, Some(to_json(&eq::equilibrium_eigenvalues(&p, e))))
        })
        .collect();
    let result = json!({
        "params": params_json(&p),
        "sigma": to_json(&sigma),
        "boundary": boundary,
        "interior": interior,
    });
    Ok(product("equilibria", a.input(), result, Some(table), Format::Json))
}

fn classify(a: &ParamArgs) -> CliResult<Product> {
    let p = a.params()?;
    let sigma = eq::sigma_delta(&p);
    let mut result = Map::new();
    result.insert("params".into(), params_json(&p));
    result.insert("case_label".into(), to_json(&sigma.case_label));
    result.insert("sigma".into(), to_json(&sigma));
    result.insert("origin".into(), classified(eq::classify_origin(&p)));
    result.insert("origin_blowup".into(), classified(eq::blowup_eigenvalues(&p)));
    result.insert("carrying_capacity".into(), classified(eq::classify_carrying_capacity(&p)));
    if sigma.case_label == eq::CaseLabel::DoubleRoot_DeltaZero {
        result.insert("collapsed".into(), classified(eq::classify_collapsed(&p)));
        result.insert("sotomayor".into(), classified(bif::sotomayor_check(&p)));
    }
    if sigma.case_label == eq::CaseLabel::Collision_Sigma2Zero {
        result.insert("sigma2_zero".into(), classified(eq::classify_sigma2zero(&p)));
    }
    Ok(product("classify", a.input(), Json::Object(result), None, Format::Json))
}

fn sweep_sn(a: &ParamArgs, want_svg: bool) -> CliResult<Product> {
    a.reject_dimensional()?;
    let (m, n) = (a.scalar("M")?, a.scalar("N")?);
    let cs = a.require("C")?.points("C")?;
    let mut table = Table::new(&["C", "Q_SN"]);
    let mut curve = Vec::new();
    let mut skipped = Vec::new();
    for c in cs {
        match bif::saddle_node_q(c, m, n) {
            Ok(q) => {
                table.push(vec![c.into(), q.into()]);
                curve.push((c, q));
            }
            Err(bazykin::Error::Domain(_)) if n > 0.0 => skipped.push(c),
            Err(e) => return Err(e.into()),
        }
    }
    let result = json!({
        "curve": curve.iter().map(|&(c, q)| json!({ "C": c, "Q_SN": q })).collect::<Vec<_>>(),
        "skipped_C": skipped,
    });
    let mut p = product("sweep-sn", a.input(), result, Some(table), Format::Csv);
    if want_svg {
        let mut plot = Plot::fit(&curve, "C", "Q_SN");
        plot.polyline(&curve, "black");
        p.svg = Some(plot.finish());
    }
    Ok(p)
}

fn hopf_curve(a: &ParamArgs, n_u: usize, v_max: f64, want_svg: bool) -> CliResult<Product> {
    a.reject_dimensional()?;
    let (c, m) = (a.scalar("C")?, a.scalar("M")?);
    if !(c > 0.0 && m > 0.0) || !(v_max > 0.0) || n_u < 2 {
        return Err(CliError::Domain("hopf-curve needs C, M, v-max positive and n-u >= 2".into()));
    }
    let grid = UvGrid { n_u, v_max, ..UvGrid::default() };
    let samples = bif::hopf_curve_uv(c, m, &grid);
    let mut table = Table::new(&["U", "V", "N", "Q", "l1", "L1_sign"]);
    let mut rows = Vec::new();
    for h in &samples {
        let (nn, qq) = bif::psi_map(c, m, h.u, h.v).unwrap_or((f64::NAN, f64::NAN));
        let sign = to_json(&h.l1_sign).as_str().unwrap_or_default().to_string();
        table.push(vec![h.u.into(), h.v.into(), nn.into(), qq.into(), h.l1.into(), Cell::Text(sign)]);
        let mut row = to_json(h);
        if let Json::Object(o) = &mut row {
            o.insert("N".into(), json!(nn));
            o.insert("Q".into(), json!(qq));
        }
        rows.push(row);
    }
    let mut input = a.input();
    input.insert("n_u".into(), json!(n_u));
    input.insert("v_max".into(), json!(v_max));
    let mut p = product("hopf-curve", input, json!({ "samples": rows }), Some(table), Format::Csv);
    if want_svg {
        let pts: Vec<(f64, f64)> = samples.iter().map(|h| (h.u, h.v)).collect();
        let mut plot = Plot::fit(&pts, "U", "V");
        for h in &samples {
            let color = match h.l1_sign {
                bif::L1Sign::Supercritical => "blue",
                bif::L1Sign::Subcritical => "red",
                bif::L1Sign::Degenerate => "black",
            };
            plot.marker(h.u, h.v, color);
        }
        p.svg = Some(plot.finish());
    }
    Ok(p)
}

fn bautin(a: &ParamArgs) -> CliResult<Product> {
    a.reject_dimensional()?;
    let (c, m) = (a.scalar("C")?, a.scalar("M")?);
    let (u, v) = bif::bautin_point(c, m)?;
    let (n, q) = bif::psi_map(c, m, u, v)?;
    let l1 = bif::lyapunov_l1(c, u, v).map(|h| h.l1).ok();
    let result = json!({ "U": u, "V": v, "N": n, "Q": q, "l1": l1 });
    Ok(product("bautin", a.input(), result, None, Format::Json))
}

fn bt(a: &ParamArgs) -> CliResult<Product> {
    a.reject_dimensional()?;
    let d = bif::bt_point(a.scalar("M")?, a.scalar("N")?)?;
    Ok(product("bt", a.input(), to_json(&d), None, Format::Json))
}

fn cycles(a: &ParamArgs, tol: Option<f64>, want_svg: bool) -> CliResult<Product> {
    let p = a.params()?;
    let mut opts = dyn_::CycleOptions::default();
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(CliError::Domain("--tol must be positive".into()));
        }
        opts.tol = t;
    }
    let found = dyn_::find_limit_cycles_with(&p, &opts)?;
    let mut table = Table::new(&["cycle", "u0", "v0", "period", "floquet", "stable"]);
    for (i, c) in found.iter().enumerate() {
        table.push(vec![
            Cell::Int(i as i64),
            c.section_point.u.into(),
            c.section_point.v.into(),
            c.period.into(),
            c.floquet.into(),
            Cell::Text(c.stable.to_string()),
        ]);
    }
    let mut input = a.input();
    input.insert("tol".into(), json!(opts.tol));
    let result = json!({ "params": params_json(&p), "count": found.len(), "cycles": to_json(&found) });
    let mut prod = product("cycles", input, result, Some(table), Format::Json);
    if want_svg {
        let all: Vec<(f64, f64)> = found.iter().flat_map(|c| c.points.iter().map(|s| (s.u, s.v))).collect();
        let mut plot = Plot::fit(&all, "u", "v");
        for c in &found {
            let mut pts: Vec<(f64, f64)> = c.points.iter().map(|s| (s.u, s.v)).collect();
            if let Some(&first) = pts.first() {
                pts.push(first);
            }
            plot.polyline(&pts, if c.stable { "blue" } else { "red" });
        }
        if let Ok(sec) = dyn_::Section::of(&p) {
            plot.marker(sec.p2.u, sec.p2.v, "black");
        }
        prod.svg = Some(plot.finish());
    }
    Ok(prod)
}

fn homoclinic(a: &ParamArgs) -> CliResult<Product> {
    a.reject_dimensional()?;
    let (c, m, n) = (a.scalar("C")?, a.scalar("M")?, a.scalar("N")?);
    let (lo, hi) = a.require("Q")?.bounds("Q")?;
    let result = match dyn_::homoclinic_q(c, m, n, lo, hi) {
        Ok(r) => r,
        Err(bazykin::Error::NotFound(msg)) => {
            let mut p = product("homoclinic", a.input(), json!({ "found": false, "reason": msg }), None, Format::Json);
            p.status = Status::Incomplete(format!("no connection in Q ∈ [{lo}, {hi}]: {msg}"));
            return Ok(p);
        }
        Err(e) => return Err(e.into()),
    };
    let mut r = to_json(&result);
    if let Json::Object(o) = &mut r {
        o.insert("found".into(), json!(true));
    }
    Ok(product("homoclinic", a.input(), r, None, Format::Json))
}

fn label_color(l: OmegaLabel) -> &'static str {
    match l {
        OmegaLabel::Origin => "#d9d9d9",
        OmegaLabel::CarryingCapacity => "#f4a582",
        OmegaLabel::P2 => "#92c5de",
        OmegaLabel::StableCycle => "#4393c3",
        OmegaLabel::Undetermined => "#000000",
    }
}

fn basin(a: &ParamArgs, u: &Value, v: &Value, n: usize, want_svg: bool) -> CliResult<Product> {
    let p = a.params()?;
    let (u_lo, u_hi) = u.bounds("u")?;
    let (v_lo, v_hi) = v.bounds("v")?;
    let grid = GridSpec { u_lo, u_hi, v_lo, v_hi, n_u: n, n_v: n };
    let raster = dyn_::basin_raster(&p, &grid)?;
    let mut table = Table::new(&["u", "v", "label"]);
    for j in 0..grid.n_v {
        for i in 0..grid.n_u {
            let (cu, cv) = grid.center(i, j);
            table.push(vec![cu.into(), cv.into(), Cell::Text(raster.label(i, j).as_str().into())]);
        }
    }
    let labels = [
        OmegaLabel::Origin,
        OmegaLabel::CarryingCapacity,
        OmegaLabel::P2,
        OmegaLabel::StableCycle,
        OmegaLabel::Undetermined,
    ];
    let counts: Map<String, Json> = labels.iter().map(|l| (l.as_str().to_string(), json!(raster.count(*l)))).collect();
    let mut input = a.input();
    input.insert("u".into(), value_json(u));
    input.insert("v".into(), value_json(v));
    input.insert("n".into(), json!(n));
    let result = json!({
        "params": params_json(&p),
        "counts": counts,
        "raster": to_json(&raster),
    });
    let mut prod = product("basin", input, result, Some(table), Format::Csv);
    if raster.undetermined > 0 {
        prod.status = Status::Incomplete(format!("{} of {} cells undetermined", raster.undetermined, raster.labels.len()));
    }
    if want_svg {
        let mut plot = Plot::new((u_lo, u_hi), (v_lo, v_hi), "u", "v");
        let (du, dv) = grid.cell_width();
        for j in 0..grid.n_v {
            for i in 0..grid.n_u {
                let (x0, y0) = (u_lo + i as f64 * du, v_lo + j as f64 * dv);
                plot.cell(x0, y0, x0 + du, y0 + dv, label_color(raster.label(i, j)));
            }
        }
        prod.svg = Some(plot.finish());
    }
    Ok(prod)
}

fn phase(a: &ParamArgs, starts: &[(f64, f64)], t_end: f64, tol: f64, want_svg: bool) -> CliResult<Product> {
    let p = a.params()?;
    if !(t_end > 0.0 && t_end.is_finite()) || !(tol > 0.0) {
        return Err(CliError::Domain("--t-end and --tol must be positive".into()));
    }
    let mut table = Table::new(&["orbit", "t", "u", "v"]);
    let mut orbits = Vec::new();
    let mut curves = Vec::new();
    for (k, &(u, v)) in starts.iter().enumerate() {
        let traj = dyn_::integrate(&p, State::new(u, v), t_end, tol)?;
        for (t, s) in &traj.samples {
            table.push(vec![Cell::Int(k as i64), (*t).into(), s.u.into(), s.v.into()]);
        }
        curves.push(traj.states().map(|s| (s.u, s.v)).collect::<Vec<_>>());
        orbits.push(to_json(&traj));
    }
    let mut input = a.input();
    input.insert("start".into(), json!(starts.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>()));
    input.insert("t_end".into(), json!(t_end));
    input.insert("tol".into(), json!(tol));
    let result = json!({ "params": params_json(&p), "orbits": orbits });
    let mut prod = product("phase", input, result, Some(table), Format::Csv);
    if want_svg {
        let mut plot = Plot::fit(curves.iter().flatten(), "u", "v");
        for c in &curves {
            plot.polyline(c, "black");
            if let Some(&(u, v)) = c.first() {
                plot.marker(u, v, "red");
            }
        }
        prod.svg = Some(plot.finish());
    }
    Ok(prod)
}

/// Default bounds of the diagram axes.
const DIAGRAM_Q: (f64, f64) = (1.01, 3.0);
const DIAGRAM_C: (f64, f64) = (0.2, 0.9);

fn diagram(a: &ParamArgs, n_c: usize, no_hom: bool, labels: usize, want_svg: bool) -> CliResult<Product> {
    a.reject_dimensional()?;
    let (m, n) = (a.scalar("M")?, a.scalar("N")?);
    let q_range = a.q.as_ref().map_or(Ok(DIAGRAM_Q), |v| v.bounds("Q"))?;
    let c_range = a.c.as_ref().map_or(Ok(DIAGRAM_C), |v| v.bounds("C"))?;
    if n_c < 2 {
        return Err(CliError::Domain("--n-c must be at least 2".into()));
    }
    let opts = DiagramOptions { n_c, with_hom: !no_hom, label_grid: (labels, labels), ..DiagramOptions::default() };
    let d = bif::trace_diagram_with(m, n, q_range, c_range, &opts)?;
    let mut table = Table::new(&["curve", "Q", "C"]);
    for (name, curve) in [("sn", &d.sn_curve), ("hopf", &d.hopf_curve), ("hom", &d.hom_curve)] {
        for &(q, c) in curve {
            table.push(vec![Cell::Text(name.into()), q.into(), c.into()]);
        }
    }
    table.push(vec![Cell::Text("bt".into()), d.bt_point.0.into(), d.bt_point.1.into()]);
    let mut input = a.input();
    input.insert("Q".into(), json!({ "lo": q_range.0, "hi": q_range.1 }));
    input.insert("C".into(), json!({ "lo": c_range.0, "hi": c_range.1 }));
    input.insert("n_c".into(), json!(n_c));
    input.insert("hom".into(), json!(!no_hom));
    input.insert("labels".into(), json!(labels));
    let mut prod = product("diagram", input, to_json(&d), Some(table), Format::Json);
    if want_svg {
        let mut plot = Plot::new(q_range, c_range, "Q", "C");
        plot.polyline(&d.sn_curve, "black");
        plot.polyline(&d.hopf_curve, "blue");
        plot.polyline(&d.hom_curve, "red");
        plot.marker(d.bt_point.0, d.bt_point.1, "black");
        prod.svg = Some(plot.finish());
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        RunConfig::command().debug_assert();
    }

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("0.1, 0.2").unwrap(), (0.1, 0.2));
        assert!(parse_point("0.1").is_err());
    }
}
