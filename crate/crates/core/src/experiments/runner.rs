use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::estimators::{
    cerf_check, est_pc, est_piv, est_sphere_connection, est_two_ghost, fit_slope, floor_cbrt, McEstimate,
    PcCriterion, PcEstimate, PcOptions,
};
use crate::experiments::config::ExperimentConfig;
use crate::experiments::record::{Appender, ResultRecord, VERSION};
use crate::ghost::{est_pivotal_influence, snowball_chain, EventSpec};
use crate::graph::{exposed_sphere, geodesic, GraphFamily, GraphPatch};
use crate::multiscale::{eval_full_space, hamming_bound_check, make_schedule, orange_peel_trace, p_infinity, two_point_zone};
use crate::percolation::sprinkle;
use crate::walks::{
    build_radial_tubes, cool_inequality_check, export_tubes, iron, kernel_decay_constant, lazy_walk_replica,
    vc_check, verify_plentiful, KernelDecay,
};

/// Collects the records of one run, stamping each with the time since the previous one.
struct Sink<'a> {
    cfg: &'a ExperimentConfig,
    hash: String,
    clock: Instant,
    records: Vec<ResultRecord>,
}

/// Fields of one record before stamping.
#[derive(Default)]
struct Rec {
    operation: &'static str,
    family: Option<String>,
    inputs: Value,
    x: Option<f64>,
    value: Option<f64>,
    ci: Option<f64>,
    verdict: Option<bool>,
    detail: Value,
}

impl Rec {
    fn new(operation: &'static str, inputs: Value) -> Rec {
        Rec { operation, inputs, detail: Value::Null, ..Rec::default() }
    }

    fn estimate(mut self, e: &McEstimate) -> Rec {
        self.value = Some(e.mean);
        self.ci = Some(e.ci_halfwidth);
        self
    }

    fn value(mut self, v: f64) -> Rec {
        self.value = Some(v);
        self
    }

    fn x(mut self, x: f64) -> Rec {
        self.x = Some(x);
        self
    }

    fn verdict(mut self, v: bool) -> Rec {
        self.verdict = Some(v);
        self
    }

    fn detail<T: Serialize>(mut self, d: &T) -> Rec {
        self.detail = serde_json::to_value(d).unwrap_or(Value::Null);
        self
    }

    fn family(mut self, f: GraphFamily) -> Rec {
        self.family = Some(f.to_string());
        self
    }
}

impl<'a> Sink<'a> {
    fn push(&mut self, rec: Rec) {
        let now = Instant::now();
        let wall_ms = now.duration_since(self.clock).as_secs_f64() * 1e3;
        self.clock = now;
        self.records.push(ResultRecord {
            config_hash: self.hash.clone(),
            experiment: self.cfg.experiment.clone(),
            family: rec.family.unwrap_or_else(|| self.cfg.family.clone()),
            operation: rec.operation.to_string(),
            seed: self.cfg.seed,
            inputs: rec.inputs,
            x: rec.x,
            value: rec.value,
            ci_halfwidth: rec.ci,
            verdict: rec.verdict,
            detail: rec.detail,
            wall_ms,
            version: VERSION.to_string(),
        });
    }
}

type Runner = fn(&ExperimentConfig, &mut Sink) -> Result<()>;

fn runner(name: &str) -> Option<Runner> {
    Some(match name {
        "pc-estimate" => pc_estimate,
        "locality-sweep" => locality_sweep,
        "two-ghost-scaling" => two_ghost_scaling,
        "piv-decay" => piv_decay,
        "cerf-check" => cerf,
        "walk-checks" => walk_checks,
        "tubes-demo" => tubes_demo,
        "ghost-influence" => ghost_influence,
        "snowball-demo" => snowball_demo,
        "multiscale-demo" => multiscale_demo,
        "orange-peel" => orange_peel,
        _ => return None,
    })
}

/// Runs the experiment and returns its records without writing them.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let f = runner(&cfg.experiment).ok_or_else(|| Error::Config(format!("unknown experiment '{}'", cfg.experiment)))?;
    let mut sink = Sink { cfg, hash: cfg.hash(), clock: Instant::now(), records: Vec::new() };
    f(cfg, &mut sink)?;
    Ok(sink.records)
}

/// Runs the experiment and appends its records under the configured output directory.
pub fn run_and_write(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let records = run(cfg)?;
    let mut out = Appender::open(&cfg.output, &cfg.experiment)?;
    for r in &records {
        out.write(r)?;
    }
    Ok(records)
}

fn pc_options(cfg: &ExperimentConfig) -> Result<PcOptions> {
    let d = PcOptions::default();
    Ok(PcOptions {
        tolerance: cfg.opt_f64("tolerance", d.tolerance)?,
        confidence: cfg.opt_f64("confidence", d.confidence)?,
        min_replicas: cfg.opt_usize("min_replicas", d.min_replicas as usize)? as u64,
        max_replicas: cfg.opt_usize("max_replicas", d.max_replicas as usize)? as u64,
    })
}

fn criterion(cfg: &ExperimentConfig, family: GraphFamily) -> Result<PcCriterion> {
    match cfg.opt_str("criterion")? {
        Some(s) => s.parse(),
        None => Ok(PcCriterion::default_for(family)),
    }
}

fn pc_record(est: &PcEstimate, family: GraphFamily) -> Rec {
    let half = 0.5 * (est.bracket.1 - est.bracket.0);
    let mut rec = Rec::new("est_pc", json!({ "scale": est.scale, "criterion": est.criterion.to_string() }))
        .value(est.p_hat)
        .x(est.scale as f64)
        .family(family);
    rec.ci = Some(half);
    rec.detail = json!({ "bracket": est.bracket, "replicas": est.replicas, "converged": est.converged });
    rec
}

/// Families from the `families` option, else the configured family; scales
/// pair up with families (one shared scale list when a single family is run).
fn family_scales(cfg: &ExperimentConfig) -> Result<Vec<(GraphFamily, usize)>> {
    match cfg.opt_list::<String>("families")? {
        Some(names) => {
            if names.len() != cfg.scales.len() {
                return Err(Error::Config("families and scales must have the same length".into()));
            }
            names.iter().zip(&cfg.scales).map(|(n, &l)| Ok((n.parse()?, l))).collect()
        }
        None => {
            let f = cfg.family()?;
            if cfg.scales.is_empty() {
                return Err(Error::Config("pc-estimate needs at least one scale".into()));
            }
            Ok(cfg.scales.iter().map(|&l| (f, l)).collect())
        }
    }
}

/// Options: criterion, tolerance, confidence, min/max_replicas, expected +
/// expected_tol (verdict per record), families (paired with scales), kesten
/// (verdict that p_hat (degree - 1) decreases along the list).
fn pc_estimate(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let opts = pc_options(cfg)?;
    let expected = cfg.options.get("expected").map(|_| cfg.opt_f64("expected", 0.0)).transpose()?;
    let tol = cfg.opt_f64("expected_tol", 0.01)?;
    let mut trend: Vec<(f64, f64)> = Vec::new();
    for (family, l) in family_scales(cfg)? {
        let est = est_pc(family, l, criterion(cfg, family)?, &opts, cfg.seed)?;
        let mut rec = pc_record(&est, family);
        if let Some(target) = expected {
            rec = rec.verdict((est.p_hat - target).abs() <= tol);
        }
        let scale = (family.degree() - 1) as f64;
        trend.push((est.p_hat * scale, rec.ci.unwrap_or(0.0) * scale));
        sink.push(rec);
    }
    if cfg.opt_bool("kesten", false)? {
        // Strict decrease beyond the combined half-widths.
        let ok = trend.windows(2).all(|w| w[1].0 + w[1].1 < w[0].0 - w[0].1);
        let values: Vec<f64> = trend.iter().map(|t| t.0).collect();
        sink.push(Rec::new("kesten_trend", json!({ "scaled_by": "degree - 1" })).verdict(ok).detail(&values));
    }
    Ok(())
}

/// Options: mode ("slab" or "cylinder"), ms, reference (family for the slab
/// limit), scale, max_slope (cylinder verdict), radii (cylinder).
fn locality_sweep(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let ms: Vec<usize> = cfg.opt_list("ms")?.ok_or_else(|| Error::Config("locality-sweep needs ms".into()))?;
    match cfg.opt_str("mode")?.as_deref().unwrap_or("slab") {
        "slab" => {
            let opts = pc_options(cfg)?;
            let l = cfg.opt_usize("scale", 16)?;
            let reference: GraphFamily = cfg.opt_str("reference")?.unwrap_or_else(|| "hypercubic(3)".into()).parse()?;
            let crit = criterion(cfg, reference)?;
            let base = cfg.family()?;
            let (dim, periodic) = match base {
                GraphFamily::Slab { dim, periodic, .. } => (dim, periodic),
                _ => return Err(Error::Config("slab mode needs a slab family".into())),
            };
            let zref = est_pc(reference, l, crit, &opts, cfg.seed)?;
            let half_ref = 0.5 * (zref.bracket.1 - zref.bracket.0);
            sink.push(pc_record(&zref, reference));
            let mut gaps = Vec::new();
            for &m in &ms {
                let fam = GraphFamily::Slab { dim, periodic, period: m };
                let est = est_pc(fam, l, crit, &opts, cfg.seed)?;
                let half = 0.5 * (est.bracket.1 - est.bracket.0);
                gaps.push((est.p_hat - zref.p_hat, half + half_ref));
                sink.push(pc_record(&est, fam).x(m as f64));
            }
            // Distances to the reference never grow by more than the combined half-widths.
            let ok = gaps.windows(2).all(|w| w[1].0.abs() <= w[0].0.abs() + w[0].1 + w[1].1);
            let detail: Vec<f64> = gaps.iter().map(|g| g.0).collect();
            sink.push(Rec::new("monotone_convergence", json!({ "ms": ms, "scale": l })).verdict(ok).detail(&detail));
        }
        "cylinder" => {
            let p = cfg.need_p()?;
            let radii: Vec<usize> = cfg.opt_list("radii")?.unwrap_or_else(|| vec![8, 16, 32, 64]);
            let max_slope = cfg.opt_f64("max_slope", -0.01)?;
            let rmax = *radii.iter().max().unwrap_or(&1);
            for &m in &ms {
                let fam = GraphFamily::Cylinder(m);
                let patch = GraphPatch::build(fam, rmax)?;
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for &r in &radii {
                    let est = est_sphere_connection(&patch, p, r, cfg.replicas, cfg.seed)?;
                    xs.push(r as f64);
                    ys.push(est.mean.ln());
                    sink.push(Rec::new("sphere_connection", json!({ "m": m, "r": r, "p": p })).estimate(&est).x(r as f64).family(fam));
                }
                let slope = fit_slope(&xs, &ys);
                sink.push(
                    Rec::new("decay_slope", json!({ "m": m, "p": p, "radii": radii }))
                        .value(slope)
                        .x(m as f64)
                        .verdict(slope <= max_slope)
                        .family(fam),
                );
            }
        }
        other => return Err(Error::Config(format!("unknown locality mode '{other}'"))),
    }
    Ok(())
}

/// Scales are the n values; option max_slope (default -0.4).
fn two_ghost_scaling(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let p = cfg.need_p()?;
    let radius = cfg.need_radius()?;
    let max_slope = cfg.opt_f64("max_slope", -0.4)?;
    let patch = GraphPatch::build(cfg.family()?, radius)?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for &n in &cfg.scales {
        let est = est_two_ghost(&patch, p, n, cfg.replicas, cfg.seed)?;
        if est.mean > 0.0 {
            xs.push((n as f64).ln());
            ys.push(est.mean.ln());
        }
        sink.push(Rec::new("est_two_ghost", json!({ "n": n, "p": p })).estimate(&est).x(n as f64));
    }
    if xs.len() >= 2 {
        let slope = fit_slope(&xs, &ys);
        sink.push(Rec::new("loglog_slope", json!({ "ns": cfg.scales })).value(slope).verdict(slope <= max_slope));
    }
    Ok(())
}

/// Scales are the outer radii n; option m (default floor(n^{1/3})).
fn piv_decay(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let radius = cfg.need_radius()?;
    let patch = GraphPatch::build(cfg.family()?, radius)?;
    for &p in &cfg.p {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for &n in &cfg.scales {
            let m = cfg.opt_usize("m", 0)?;
            let m = if m == 0 { floor_cbrt(n).max(1) } else { m };
            let est = est_piv(&patch, p, m, n, cfg.replicas, cfg.seed, None)?.estimate;
            if est.mean > 0.0 {
                xs.push((n as f64).ln());
                ys.push(est.mean.ln());
            }
            sink.push(Rec::new("est_piv", json!({ "p": p, "m": m, "n": n })).estimate(&est).x(n as f64));
        }
        if xs.len() >= 2 {
            sink.push(Rec::new("loglog_slope", json!({ "p": p })).value(fit_slope(&xs, &ys)));
        }
    }
    Ok(())
}

/// Options r, m, n.
fn cerf(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let radius = cfg.need_radius()?;
    let patch = GraphPatch::build(cfg.family()?, radius)?;
    let n = cfg.opt_usize("n", radius)?;
    let m = cfg.opt_usize("m", n / 2)?;
    let r = cfg.opt_usize("r", 2)?;
    for &p in &cfg.p {
        let c = cerf_check(&patch, p, r, m, n, cfg.replicas, cfg.seed)?;
        sink.push(
            Rec::new("cerf_check", json!({ "p": p, "r": r, "m": m, "n": n }))
                .estimate(&c.lhs)
                .x(p)
                .verdict(c.holds)
                .detail(&json!({ "rhs": c.rhs, "rhs_upper": c.rhs_upper })),
        );
    }
    Ok(())
}

/// Option t_max. Exact kernels: any violation is a failing verdict.
fn walk_checks(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let t_max = cfg.opt_usize("t_max", 15)?;
    let patch = GraphPatch::build(cfg.family()?, cfg.radius.unwrap_or(t_max + 1).max(t_max + 1))?;
    let vc = vc_check(&patch, t_max)?;
    sink.push(
        Rec::new("varopoulos_carne", json!({ "t_max": t_max }))
            .value(vc.violations as f64)
            .verdict(vc.violations == 0)
            .detail(&json!({ "rows": vc.rows.len() })),
    );
    sink.push(
        Rec::new("ball_escape", json!({ "t_max": t_max }))
            .value(vc.escape_violations as f64)
            .verdict(vc.escape_violations == 0)
            .detail(&json!({ "rows": vc.escape.len() })),
    );
    let cool = cool_inequality_check(&patch, t_max)?;
    sink.push(
        Rec::new("cool_inequality", json!({ "t_max": t_max }))
            .value(cool.violations as f64)
            .verdict(cool.violations == 0)
            .detail(&json!({ "entropy_constant": cool.entropy_constant })),
    );
    for row in &cool.rows {
        sink.push(Rec::new("entropy", json!({ "t": row.t })).value(row.entropy).x(row.t as f64));
    }
    if t_max >= 4 {
        let ts: Vec<usize> = (4..=t_max).collect();
        for kd in kernel_decay_constant(&patch, &ts)? {
            let (t, value) = match kd {
                KernelDecay::Vacuous { t, .. } => (t, None),
                KernelDecay::Bound { t, c_sup, .. } => (t, Some(c_sup)),
            };
            let mut rec = Rec::new("kernel_decay", json!({ "t": t })).x(t as f64).detail(&kd);
            rec.value = value;
            sink.push(rec);
        }
    }
    Ok(())
}

/// Every simple path from S_r \ E that avoids the exposed sphere E, stays in
/// B_{2r+1} and stops on reaching S_{2r+1}. Returns (paths explored, paths reaching S_{2r+1}).
pub fn exposed_counterexamples(patch: &GraphPatch, r: usize, limit: usize) -> Result<(usize, usize)> {
    let exposed = exposed_sphere(patch, r, patch.radius())?.vertices;
    let top = 2 * r + 1;
    patch.check_radius(top)?;
    let g = patch.graph();
    let blocked = |v: usize| exposed.binary_search(&v).is_ok() || patch.dist(v) > top;
    let mut explored = 0;
    let mut bad = 0;
    let mut on_path = vec![false; patch.vertex_count()];
    fn dfs(
        v: usize,
        g: &crate::graph::Graph,
        patch: &GraphPatch,
        top: usize,
        blocked: &dyn Fn(usize) -> bool,
        on_path: &mut [bool],
        explored: &mut usize,
        bad: &mut usize,
        limit: usize,
    ) {
        *explored += 1;
        if patch.dist(v) == top {
            *bad += 1;
            return;
        }
        if *explored >= limit {
            return;
        }
        on_path[v] = true;
        for &(w, _) in g.neighbors(v) {
            let w = w as usize;
            if !on_path[w] && !blocked(w) {
                dfs(w, g, patch, top, blocked, on_path, explored, bad, limit);
            }
        }
        on_path[v] = false;
    }
    for s in patch.sphere(r).filter(|&s| !blocked(s)) {
        dfs(s, g, patch, top, &blocked, &mut on_path, &mut explored, &mut bad, limit);
    }
    if explored >= limit {
        return Err(Error::Argument(format!("more than {limit} paths; lower r")));
    }
    Ok((explored, bad))
}

/// Options: n, k, r, t, attempts, export (write the tube file),
/// exposed_r (exhaustive exposed-sphere check up to this r),
/// iron_paths, iron_r, iron_t (ironing containments on random walks).
fn tubes_demo(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let radius = cfg.need_radius()?;
    let family = cfg.family()?;
    let patch = GraphPatch::build(family, radius)?;
    let n = cfg.opt_usize("n", 2)?;
    let k = cfg.opt_usize("k", 3)?;
    let r = cfg.opt_usize("r", 1)?;
    let t = cfg.opt_usize("t", 200)?;
    let attempts = cfg.opt_usize("attempts", 5)?;
    if k > 0 {
        let fam = build_radial_tubes(&patch, n, k, r, t, cfg.seed, attempts)?;
        let chk = verify_plentiful(&patch, &fam, fam.achieved_k() as f64, r, fam.achieved_ell() as f64)?;
        sink.push(
            Rec::new("radial_tubes", json!({ "n": n, "k": k, "r": r, "t": t, "attempts": attempts }))
                .value(fam.achieved_k() as f64)
                .verdict(chk.holds())
                .detail(&json!({ "status": fam.status, "ell": fam.achieved_ell(), "check": chk })),
        );
        if cfg.opt_bool("export", false)? {
            std::fs::create_dir_all(&cfg.output)?;
            std::fs::write(cfg.output.join(format!("tubes-{}.txt", cfg.hash())), export_tubes(&patch, &fam))?;
        }
    }
    let exposed_r = cfg.opt_usize("exposed_r", 0)?;
    for rr in 1..=exposed_r {
        let (explored, bad) = exposed_counterexamples(&patch, rr, 50_000_000)?;
        sink.push(
            Rec::new("exposed_sphere_crossings", json!({ "r": rr }))
                .value(bad as f64)
                .verdict(bad == 0)
                .detail(&json!({ "avoiding_paths": explored })),
        );
    }
    let iron_paths = cfg.opt_usize("iron_paths", 0)?;
    if iron_paths > 0 {
        let ir = cfg.opt_usize("iron_r", 2)?;
        let it = cfg.opt_usize("iron_t", radius.saturating_sub(2 * ir + 1))?;
        let mut failures = 0;
        let mut unverified = 0;
        for rep in 0..iron_paths as u64 {
            let walk = lazy_walk_replica(&patch, patch.root(), it, cfg.seed, rep)?;
            match iron(&walk, ir, &patch) {
                Ok(ip) if ip.verified => {}
                Ok(_) => unverified += 1,
                Err(Error::Invariant(_)) => failures += 1,
                Err(e) => return Err(e),
            }
        }
        sink.push(
            Rec::new("ironing_containment", json!({ "paths": iron_paths, "r": ir, "t": it }))
                .value(failures as f64)
                .verdict(failures == 0 && unverified == 0)
                .detail(&json!({ "unverified": unverified })),
        );
    }
    Ok(())
}

/// Options: event (grammar string), h.
fn ghost_influence(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let radius = cfg.need_radius()?;
    let patch = GraphPatch::build(cfg.family()?, radius)?;
    let event: EventSpec = cfg
        .opt_str("event")?
        .ok_or_else(|| Error::Config("ghost-influence needs an event".into()))?
        .parse()?;
    let h = cfg.opt_f64("h", 0.0)?;
    for &p in &cfg.p {
        let inf = est_pivotal_influence(&patch, p, h, &event, cfg.replicas, cfg.seed)?;
        let inputs = json!({ "p": p, "h": h, "event": event.to_string() });
        sink.push(Rec::new("event_probability", inputs.clone()).estimate(&inf.probability).x(p));
        sink.push(Rec::new("russo_sum", inputs.clone()).estimate(&inf.russo).x(p));
        sink.push(
            Rec::new("max_influence", inputs).estimate(&inf.max).x(p).detail(&json!({ "edge": inf.max_edge })),
        );
    }
    Ok(())
}

/// Options: b, links (number of balls). Centers lie on a root geodesic, 2b+1 apart.
fn snowball_demo(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let radius = cfg.need_radius()?;
    let patch = GraphPatch::build(cfg.family()?, radius)?;
    let b = cfg.opt_usize("b", 1)?;
    let links = cfg.opt_usize("links", 3)?;
    let reach = (links - 1) * (2 * b + 1);
    if reach + b > radius {
        return Err(Error::Config(format!("{links} balls of radius {b} need a patch of radius {}", reach + b)));
    }
    let spine = geodesic(&patch, patch.root(), patch.sphere(reach).start)?;
    let centers: Vec<usize> = (0..links).map(|i| spine[i * (2 * b + 1)]).collect();
    if cfg.p.len() < 2 {
        return Err(Error::Config("snowball-demo needs p = [p1, p2]".into()));
    }
    let c = snowball_chain(&patch, cfg.p[0], cfg.p[1], &centers, b, cfg.replicas, cfg.seed)?;
    sink.push(
        Rec::new("snowball_chain", json!({ "p1": cfg.p[0], "p2": cfg.p[1], "b": b, "links": links }))
            .estimate(&c.lhs)
            .detail(&json!({ "rhs": c.rhs, "ratio": c.ratio })),
    );
    Ok(())
}

/// Options: n0, p0, K, burnin, i_max, zone_m, zone_n, hamming_q, hamming_a_radius,
/// hamming_a_count, hamming_b. Scales are full-space n values.
fn multiscale_demo(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let n0 = cfg.opt_f64("n0", 16.0)?;
    let p0 = cfg.opt_f64("p0", 0.5)?;
    let k = cfg.opt_f64("K", 1.0)?;
    let burnin = cfg.opt_f64("burnin", 0.0)?;
    let i_max = cfg.opt_usize("i_max", 8)?;
    let s = make_schedule(n0, p0, k, burnin, i_max)?;
    let pinf = p_infinity(&s)?;
    // Identities the schedule satisfies by construction.
    let nine = 9f64.ln();
    let mut ok = true;
    for i in 0..i_max {
        ok &= (s.logloglog_n[i + 1] - s.logloglog_n[i] - nine).abs() < 1e-12;
        ok &= (s.p[i + 1] - sprinkle(s.p[i], s.delta[i])?).abs() < 1e-12;
        if i >= 1 {
            ok &= (s.delta[i] / s.delta[i + 1] - 3.0).abs() < 1e-12;
        }
    }
    ok &= s.p.iter().all(|&p| p <= pinf + 1e-15);
    sink.push(
        Rec::new("schedule", json!({ "n0": n0, "p0": p0, "K": k, "burnin": burnin, "i_max": i_max }))
            .value(pinf)
            .verdict(ok)
            .detail(&s),
    );
    if let Some(radius) = cfg.radius {
        let patch = GraphPatch::build(cfg.family()?, radius)?;
        for &p in &cfg.p {
            for &n in &cfg.scales {
                let v = eval_full_space(&patch, n, p, cfg.replicas, cfg.seed)?;
                sink.push(
                    Rec::new("full_space", json!({ "p": p, "n": n }))
                        .estimate(&v.min)
                        .x(n as f64)
                        .detail(&json!({ "threshold": v.threshold, "holds": v.holds, "decisive": v.decisive, "pairs": v.pairs_checked })),
                );
            }
            let hq = cfg.opt_f64("hamming_q", 0.0)?;
            if hq > p {
                let a = spread_on_sphere(&patch, cfg.opt_usize("hamming_a_radius", 5)?, cfg.opt_usize("hamming_a_count", 6)?);
                let b: Vec<usize> = patch.sphere(cfg.opt_usize("hamming_b", radius)?).collect();
                let h = hamming_bound_check(&patch, p, hq, &a, &b, cfg.replicas, cfg.seed)?;
                sink.push(
                    Rec::new("hamming_bound", json!({ "p": p, "q": hq, "A": a }))
                        .estimate(&h.lhs)
                        .verdict(h.holds)
                        .detail(&json!({ "rhs": h.rhs, "theta": h.theta, "hypothesis_met": h.hypothesis_met })),
                );
            }
            let zm = cfg.opt_usize("zone_m", 0)?;
            if zm > 0 {
                let zn = cfg.opt_f64("zone_n", (zm as f64).powi(3))?;
                let tz = two_point_zone(&patch, p, zm, zn, cfg.replicas, cfg.seed)?;
                sink.push(Rec::new("two_point_zone", json!({ "p": p, "m": zm, "n": zn })).value(tz as f64).x(p));
            }
        }
    }
    Ok(())
}

/// `count` vertices of S_r at evenly spaced positions in id order.
pub fn spread_on_sphere(patch: &GraphPatch, r: usize, count: usize) -> Vec<usize> {
    let s = patch.sphere(r);
    let len = s.len();
    let mut out: Vec<usize> = (0..count.min(len)).map(|i| s.start + i * len / count.min(len).max(1)).collect();
    out.dedup();
    out
}

/// Options: m, p_start, p_end, D, n, seeds, min_fraction, export.
/// Seeds run from the config seed upwards.
fn orange_peel(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let m = cfg.opt_usize("m", 64)?;
    let radius = cfg.radius.unwrap_or(m / 8);
    let patch = GraphPatch::build(cfg.family()?, radius)?;
    let p_start = cfg.opt_f64("p_start", 0.55)?;
    let p_end = cfg.opt_f64("p_end", 0.65)?;
    let big_d = cfg.opt_f64("D", 2.0)?;
    let n = cfg.options.get("n").map(|_| cfg.opt_f64("n", 0.0)).transpose()?;
    let seeds = cfg.opt_usize("seeds", 100)? as u64;
    let min_fraction = cfg.opt_f64("min_fraction", 0.9)?;
    let mut merged = 0;
    for s in cfg.seed..cfg.seed + seeds {
        let trace = orange_peel_trace(&patch, m, p_start, p_end, big_d, n, s)?;
        if s == cfg.seed && cfg.opt_bool("export", false)? {
            std::fs::create_dir_all(&cfg.output)?;
            std::fs::write(cfg.output.join(format!("orange-peel-{}.txt", cfg.hash())), trace.to_rows())?;
        }
        merged += usize::from(trace.final_size() <= 1);
        sink.push(
            Rec::new("orange_peel_trace", json!({ "seed": s, "m": m, "p_start": p_start, "p_end": p_end, "D": big_d }))
                .value(trace.final_size() as f64)
                .x(s as f64)
                .detail(&json!({ "k": trace.k, "eps": trace.eps, "eps_capped": trace.eps_capped, "truncated": trace.truncated, "first": trace.rows[0].clusters })),
        );
    }
    let fraction = merged as f64 / seeds.max(1) as f64;
    sink.push(
        Rec::new("merge_fraction", json!({ "seeds": seeds, "min_fraction": min_fraction }))
            .value(fraction)
            .verdict(fraction >= min_fraction),
    );
    Ok(())
}

pub fn load_and_run(path: &Path) -> Result<Vec<ResultRecord>> {
    run_and_write(&ExperimentConfig::load(path)?)
}
