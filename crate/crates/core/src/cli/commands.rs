use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::Value;

use super::config::{
    require, BacklundParams, JetOrders, Model, RunConfig, Seed, Sigma2Params, SolitonParams,
    TriangularParams,
};
use super::report::{
    fmt17, parse_solution_csv, solution_csv, write_atomic, Check, SingularPoint, VerificationReport, Worst,
    ENERGY_HEADER,
};
use super::CliError;
use crate::error::{Error, Result};
use crate::field::{cnl_residual, sample_field, scnl_residual, FieldPair, PointJets, SampleGrid, Vacuum};
use crate::laxpair::zero_curvature_residual;
use crate::numkit::{Orders, C64};
use crate::sigma2::{
    from_sigma2, resolve_convention, s2_literal_residual, s2_residual, schl1_literal_residual, schl1_residual,
    sigma2_backlund_constraints, sigma2_nsoliton, PhaseConvention, Sigma2Branch, Sigma2Spec, TriangularGaugeState,
    TriangularVacuum,
};
use crate::soliton_engine::{direct_n_dressing, DressingChain, NSoliton, SolitonSpec};
use crate::transforms::{
    appendix_residuals, energy, iterate_jets, one_soliton_energy, relative_spread, Discrete, ExponentialSeed,
    BOUNDARY_DECAY,
};

/// Spectral parameter at which zero curvature is checked.
pub const ZERO_CURVATURE_PROBE: C64 = C64::new(0.3, 0.7);

/// Sample defects are relative to `max(|a|, |b|, SAMPLE_FLOOR·max|sample|)`.
pub const SAMPLE_FLOOR: f64 = 1e-12;

const SOLUTION_FILE: &str = "solution.csv";
const ENERGY_FILE: &str = "energy.csv";
const REPORT_FILE: &str = "report.json";

pub struct Context {
    pub config: RunConfig,
    /// The config document as parsed JSON, for echoing parameter blocks.
    pub raw: Value,
    pub config_dir: PathBuf,
    pub out: PathBuf,
    pub input: Option<PathBuf>,
}

impl Context {
    fn report(&self, command: &str, block: &str, orders: Orders) -> VerificationReport {
        VerificationReport::new(
            command,
            self.config.tolerances,
            JetOrders {
                ox: orders.x,
                ot: orders.t,
            },
            self.config.grid,
            self.raw.get(block).cloned().unwrap_or(Value::Null),
        )
    }

    fn write(&self, report: &mut VerificationReport, name: &str, contents: &str) -> std::result::Result<(), CliError> {
        write_atomic(&self.out.join(name), contents.as_bytes())?;
        report.outputs.push(name.to_string());
        Ok(())
    }

    fn finish(&self, mut report: VerificationReport) -> std::result::Result<VerificationReport, CliError> {
        report.outputs.push(REPORT_FILE.to_string());
        write_atomic(&self.out.join(REPORT_FILE), report.to_json().as_bytes())?;
        Ok(report)
    }
}

struct PointEval {
    values: Option<(C64, C64)>,
    defects: Vec<f64>,
    aux: Vec<C64>,
}

impl PointEval {
    fn new(values: Option<(C64, C64)>, defects: Vec<f64>) -> Self {
        PointEval {
            values,
            defects,
            aux: Vec::new(),
        }
    }
}

struct Evaluation {
    rows: Vec<(f64, f64, C64, C64)>,
    worst: Vec<Worst>,
    aux: Vec<Vec<C64>>,
    singular: Vec<SingularPoint>,
}

/// Evaluates `f` at every point in parallel and folds the defects in point order.
fn evaluate<F>(points: &[(f64, f64)], ndefects: usize, f: F) -> Evaluation
where
    F: Fn(usize, f64, f64) -> Result<PointEval> + Sync,
{
    let results: Vec<Result<PointEval>> = points.par_iter().enumerate().map(|(i, &(x, t))| f(i, x, t)).collect();
    let mut ev = Evaluation {
        rows: Vec::new(),
        worst: vec![Worst::default(); ndefects],
        aux: Vec::new(),
        singular: Vec::new(),
    };
    for (&(x, t), r) in points.iter().zip(results) {
        match r {
            Ok(p) => {
                if let Some((u, v)) = p.values {
                    ev.rows.push((x, t, u, v));
                }
                for (w, d) in ev.worst.iter_mut().zip(&p.defects) {
                    w.update(*d, x, t);
                }
                ev.aux.push(p.aux);
            }
            Err(e) => ev.singular.push(SingularPoint {
                x,
                t,
                error: e.to_string(),
            }),
        }
    }
    ev
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

fn rel_pair(a: (C64, C64), b: (C64, C64)) -> f64 {
    rel(a.0, b.0).max(rel(a.1, b.1))
}

fn scnl_max(j: &PointJets) -> Result<f64> {
    let (a, b) = scnl_residual(j)?;
    Ok(a.norm().max(b.norm()))
}

fn zero_curvature(field: &dyn FieldPair, x: f64, t: f64) -> Result<f64> {
    Ok(zero_curvature_residual(field, ZERO_CURVATURE_PROBE, x, t)?.frobenius())
}

fn model_error(e: Error) -> CliError {
    CliError::Config(e.to_string())
}

fn nonempty_spec(p: &SolitonParams, block: &str) -> std::result::Result<SolitonSpec, CliError> {
    if p.pairs.is_empty() {
        return Err(CliError::Config(format!("`{block}.pairs` is empty")));
    }
    p.spec()
}

/// Checks shared by every construction producing `(u, v)`.
fn soliton_checks(report: &mut VerificationReport, ev: &Evaluation, residual: f64, invariant: f64) {
    report.push(Check::from_worst("cnl_residual", &ev.worst[0], residual));
    report.push(Check::from_worst("scnl_residual", &ev.worst[1], residual));
    report.push(Check::from_worst("sigma1_reality", &ev.worst[2], invariant));
    report.push(Check::from_worst("zero_curvature", &ev.worst[3], residual));
}

fn soliton_point(field: &dyn FieldPair, orders: Orders, x: f64, t: f64) -> Result<PointEval> {
    let j = field.jets(x, t, orders)?;
    let (u, v) = j.values();
    let defects = vec![
        cnl_residual(&j.u)?.norm(),
        scnl_max(&j)?,
        (u - v.conj()).norm(),
        zero_curvature(field, x, t)?,
    ];
    Ok(PointEval::new(Some((u, v)), defects))
}

pub fn cmd_soliton(ctx: &Context) -> std::result::Result<VerificationReport, CliError> {
    let cfg = &ctx.config;
    let p = require(&cfg.soliton, "soliton")?;
    let spec = nonempty_spec(p, "soliton")?;
    let orders = cfg.orders(Orders::new(2, 1))?;
    let field = NSoliton::on_vacuum(spec.clone());
    let ev = evaluate(&cfg.grid.points(), 4, |_, x, t| soliton_point(&field, orders, x, t));
    let mut report = ctx.report("soliton", "soliton", orders);
    let tol = cfg.tolerances;
    soliton_checks(&mut report, &ev, tol.residual, tol.invariant);
    report.meta("n", spec.n());
    report.meta("sigma1", spec.enforce_sigma1);
    report.meta("zero_curvature_lambda", ZERO_CURVATURE_PROBE);
    report.singular_points = ev.singular;
    ctx.write(&mut report, SOLUTION_FILE, &solution_csv(&ev.rows))?;
    ctx.finish(report)
}

fn seed_field(seed: &Seed) -> std::result::Result<Arc<dyn FieldPair>, CliError> {
    Ok(match seed {
        Seed::Exponential { ks, cs } => {
            if ks.is_empty() {
                return Err(CliError::Config("exponential seed needs at least one term".into()));
            }
            Arc::new(ExponentialSeed::new(ks.clone(), cs.clone()).map_err(model_error)?)
        }
        Seed::Soliton(p) => Arc::new(NSoliton::on_vacuum(p.spec()?)),
    })
}

pub fn cmd_discrete(ctx: &Context) -> std::result::Result<VerificationReport, CliError> {
    let cfg = &ctx.config;
    let p = require(&cfg.discrete, "discrete")?;
    let seed = seed_field(&p.seed)?;
    let orders = cfg.orders(Orders::new(2, 1))?;
    let k = p.steps.unsigned_abs() as usize;
    let ev = evaluate(&cfg.grid.points(), 2, |_, x, t| {
        let j0 = seed.jets(x, t, orders.plus(4 * k, 0))?;
        let moved = iterate_jets(&j0, p.steps, (x, t))?;
        let back = iterate_jets(&moved, -p.steps, (x, t))?;
        let out = moved.truncate(orders);
        Ok(PointEval::new(
            Some(out.values()),
            vec![scnl_max(&out)?, rel_pair(back.values(), j0.values())],
        ))
    });
    let mut report = ctx.report("discrete", "discrete", orders);
    report.push(Check::from_worst("scnl_residual", &ev.worst[0], cfg.tolerances.residual));
    report.push(Check::from_worst("round_trip", &ev.worst[1], cfg.tolerances.invariant));
    report.meta("steps", p.steps);
    report.singular_points = ev.singular;
    ctx.write(&mut report, SOLUTION_FILE, &solution_csv(&ev.rows))?;
    ctx.finish(report)
}

fn chain_of(p: &BacklundParams) -> std::result::Result<(SolitonSpec, DressingChain), CliError> {
    let spec = nonempty_spec(
        &SolitonParams {
            pairs: p.pairs.clone(),
            sigma1: p.sigma1,
        },
        "backlund",
    )?;
    let mut steps = spec.steps();
    if let Some([i, j]) = p.swap {
        if i >= steps.len() || j >= steps.len() {
            return Err(CliError::Config(format!("swap ({i}, {j}) outside {} steps", steps.len())));
        }
        steps.swap(i, j);
    }
    Ok((spec, DressingChain::new(Arc::new(Vacuum), steps)))
}

pub fn cmd_backlund(ctx: &Context) -> std::result::Result<VerificationReport, CliError> {
    let cfg = &ctx.config;
    let p = require(&cfg.backlund, "backlund")?;
    let (spec, chain) = chain_of(p)?;
    let plain = DressingChain::new(Arc::new(Vacuum), spec.steps());
    let orders = cfg.orders(Orders::new(2, 1))?;
    let ev = evaluate(&cfg.grid.points(), 7, |_, x, t| {
        let j = chain.jets(x, t, orders)?;
        let vals = j.values();
        let direct = direct_n_dressing(&spec, &Vacuum, x, t)?;
        let swap = match p.swap {
            Some(_) => rel_pair(vals, plain.jets(x, t, Orders::new(0, 0))?.values()),
            None => 0.0,
        };
        let mut roots = 0f64;
        let mut trace = 0f64;
        let mut minor = 0f64;
        let mut reality = 0f64;
        let mut aux = Vec::new();
        for f in chain.factors(x, t, Orders::new(0, 0))? {
            let (l1, l2) = (f.lambda1, f.lambda2);
            roots = roots.max(f.p_value(l1).det().norm()).max(f.p_value(l2).det().norm());
            trace = trace.max((f.trace() + l1 + l2).norm());
            minor = minor.max((f.minor() - l1 * l2).norm());
            reality = reality.max((f.b.value() + f.c.value().conj()).norm());
            aux.extend([f.trace(), f.minor()]);
        }
        Ok(PointEval {
            values: Some(vals),
            defects: vec![scnl_max(&j)?, rel_pair(vals, direct), roots, trace, minor, reality, swap],
            aux,
        })
    });
    let tol = cfg.tolerances;
    let mut report = ctx.report("backlund", "backlund", orders);
    report.push(Check::from_worst("scnl_residual", &ev.worst[0], tol.residual));
    report.push(Check::from_worst("chain_vs_direct", &ev.worst[1], tol.invariant));
    report.push(Check::from_worst("det_p_roots", &ev.worst[2], tol.invariant));
    report.push(Check::from_worst("trace_defect", &ev.worst[3], tol.invariant));
    report.push(Check::from_worst("minor_defect", &ev.worst[4], tol.invariant));
    if spec.enforce_sigma1 {
        report.push(Check::from_worst("sigma1_single_step", &ev.worst[5], tol.invariant));
    }
    if p.swap.is_some() {
        report.push(Check::from_worst("order_swap", &ev.worst[6], tol.invariant));
    }
    let (mut ts, mut ms) = (Worst::default(), Worst::default());
    for k in 0..chain.steps.len() {
        let col = |i: usize| ev.aux.iter().map(|a| a[2 * k + i]).collect::<Vec<_>>();
        if !ev.aux.is_empty() {
            ts.set(relative_spread(&col(0)));
            ms.set(relative_spread(&col(1)));
        }
    }
    report.push(Check::from_worst("trace_spread", &ts, tol.invariant));
    report.push(Check::from_worst("minor_spread", &ms, tol.invariant));
    if p.appendix {
        match appendix_residuals(&Vacuum, &chain.steps[0], &cfg.grid) {
            Ok(a) => {
                report.push(Check::new("appendix_system", Some(a.system_residual), tol.residual, None));
                report.push(Check::new("appendix_reconstruction", Some(a.reconstruction_defect), tol.residual, None));
                report.meta("appendix_literal_system_residual", a.literal_system_residual);
                report.meta("appendix_literal_reconstruction_defect", a.literal_reconstruction_defect);
                report.meta("appendix_branch_map", &a.branch_map);
            }
            Err(e) => {
                report.push(Check::new("appendix_system", None, tol.residual, None));
                report.meta("appendix_error", e.to_string());
            }
        }
    }
    report.meta("n", spec.n());
    report.meta("swap", p.swap);
    report.singular_points = ev.singular;
    ctx.write(&mut report, SOLUTION_FILE, &solution_csv(&ev.rows))?;
    ctx.finish(report)
}

/// Fixed interior points at which conventions are compared.
fn probe_points(grid: &SampleGrid) -> Vec<(f64, f64)> {
    [(0.37, 0.41), (0.52, 0.63), (0.71, 0.29)]
        .iter()
        .map(|(a, b)| {
            (
                grid.x_min + a * (grid.x_max - grid.x_min),
                grid.t_min + b * (grid.t_max - grid.t_min),
            )
        })
        .collect()
}

enum Resolved {
    Convention(PhaseConvention, Value),
    Unresolved(String),
}

/// The configured convention, or the one under which the probe specs
/// (a single-term spec and the configured one) satisfy the σ₂ equations.
fn resolve(p: &Sigma2Params, grid: &SampleGrid, tolerance: f64) -> std::result::Result<(Sigma2Spec, Resolved), CliError> {
    let spec = Sigma2Spec::normalized(p.lambdas.clone(), &p.free, PhaseConvention::FullPhase).map_err(model_error)?;
    if let Some(c) = p.convention.fixed() {
        return Ok((spec.with_convention(c), Resolved::Convention(c, Value::Null)));
    }
    let base = p.lambdas.iter().find(|l| l.im == 0.0).copied().unwrap_or(C64::new(0.5, 0.0));
    let single = Sigma2Spec::normalized(vec![base], &[C64::new(1.0, 0.0)], PhaseConvention::FullPhase).map_err(model_error)?;
    let probes = if spec.n() == 0 { vec![spec.clone()] } else { vec![single, spec.clone()] };
    Ok(match resolve_convention(&probes, &probe_points(grid), tolerance) {
        Ok(r) => {
            let res: Vec<Value> = r
                .residuals
                .iter()
                .map(|(c, i, d)| serde_json::json!({"convention": c.name(), "probe": i, "max_residual": d}))
                .collect();
            (spec.with_convention(r.selected), Resolved::Convention(r.selected, Value::Array(res)))
        }
        Err(e) => (spec, Resolved::Unresolved(e.to_string())),
    })
}

/// `(u, v)` of a σ₂ solution.
struct Sigma2Field(Sigma2Spec);

impl FieldPair for Sigma2Field {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        from_sigma2(&sigma2_nsoliton(&self.0, x, t, orders.plus(2, 0))?).map(|j| j.truncate(orders))
    }
}

fn branch_code(b: Option<Sigma2Branch>) -> f64 {
    match b {
        None => 0.0,
        Some(Sigma2Branch::RealPair) => 1.0,
        Some(Sigma2Branch::ConjugatePair) => 2.0,
    }
}

fn triangular_point(tp: &TriangularParams, x: f64, t: f64) -> Result<(Vec<f64>, f64)> {
    let s1 = TriangularGaugeState::new(tp.lambda1, tp.lambda0, tp.nu1, x, t)?;
    let s2 = TriangularGaugeState::new(tp.lambda2, tp.lambda0, tp.nu2, x, t)?;
    let v = TriangularVacuum { lambda0: tp.lambda0 }.jets(x, t, Orders::new(0, 0))?.v;
    let r = sigma2_backlund_constraints(&s1, &s2, &v)?;
    let branch = [r.real_pair_defect, r.conjugate_pair_defect]
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    Ok((vec![r.cc_defect, r.vic_defect, r.extra_defect, branch], branch_code(r.branch)))
}

pub fn cmd_sigma2(ctx: &Context) -> std::result::Result<VerificationReport, CliError> {
    let cfg = &ctx.config;
    let tol = cfg.tolerances;
    let p = require(&cfg.sigma2, "sigma2")?;
    let orders = cfg.orders(Orders::new(4, 2))?;
    let mut report = ctx.report("sigma2", "sigma2", orders);
    let (spec, resolved) = resolve(p, &cfg.grid, tol.residual)?;
    report.meta("convention_mode", p.convention);
    match resolved {
        Resolved::Convention(c, residuals) => {
            report.meta("convention", c.name());
            report.meta("convention_residuals", residuals);
        }
        Resolved::Unresolved(msg) => {
            report.push(Check::new("convention", None, tol.residual, None));
            report.meta("convention", Value::Null);
            report.meta("convention_error", msg);
            return ctx.finish(report);
        }
    }
    report.meta("n", spec.n());
    report.meta("c", &spec.cs);
    let ev = evaluate(&cfg.grid.points(), 10, |_, x, t| {
        let f = sigma2_nsoliton(&spec, x, t, orders)?;
        let (a, b) = schl1_residual(&f)?;
        let s2 = s2_residual(&f.theta)?.norm();
        let (_, lit) = schl1_literal_residual(&f)?;
        let lit_s2 = s2_literal_residual(&f.theta)?.norm();
        let j = from_sigma2(&f)?;
        let (u, v) = j.values();
        let mut defects = vec![a.norm().max(b.norm()), s2, scnl_max(&j)?, (v.norm() - 1.0).abs(), lit.norm(), lit_s2];
        let mut aux = Vec::new();
        if let Some(tp) = &cfg.sigma2.as_ref().and_then(|s| s.triangular) {
            let (d, code) = triangular_point(tp, x, t)?;
            defects.extend(d);
            aux.push(C64::new(code, 0.0));
        }
        Ok(PointEval {
            values: Some((u, v)),
            defects,
            aux,
        })
    });
    report.push(Check::from_worst("schl1_residual", &ev.worst[0], tol.residual));
    report.push(Check::from_worst("s2_residual", &ev.worst[1], tol.residual));
    report.push(Check::from_worst("scnl_residual", &ev.worst[2], tol.residual));
    report.push(Check::from_worst("sigma2_reality", &ev.worst[3], tol.invariant));
    report.meta("literal_schl1_second_residual", ev.worst[4].value);
    report.meta("literal_s2_residual", ev.worst[5].value);
    if p.triangular.is_some() {
        report.push(Check::from_worst("cc_defect", &ev.worst[6], tol.residual));
        report.push(Check::from_worst("vic_defect", &ev.worst[7], tol.residual));
        report.push(Check::from_worst("extra_defect", &ev.worst[8], tol.residual));
        let mut names: Vec<&str> = ev
            .aux
            .iter()
            .map(|a| match a[0].re as u8 {
                1 => "real_pair",
                2 => "conjugate_pair",
                _ => "none",
            })
            .collect();
        names.sort_unstable();
        names.dedup();
        report.meta("branches", names);
        report.push(Check::from_worst("branch_condition", &ev.worst[9], tol.invariant));
    }
    report.singular_points = ev.singular;
    ctx.write(&mut report, SOLUTION_FILE, &solution_csv(&ev.rows))?;
    ctx.finish(report)
}

pub fn cmd_energy(ctx: &Context) -> std::result::Result<VerificationReport, CliError> {
    let cfg = &ctx.config;
    let grid = &cfg.grid;
    let p = require(&cfg.energy, "energy")?;
    let spec = nonempty_spec(p, "energy")?;
    let etol = cfg
        .tolerances
        .energy
        .ok_or_else(|| CliError::Config("`tolerances.energy` is required by energy".into()))?;
    let sampled = sample_field(&NSoliton::on_vacuum(spec.clone()), grid);
    let refs: Vec<f64> = spec
        .pairs
        .iter()
        .map(|(l, _)| one_soliton_energy(*l, grid))
        .collect::<Result<_>>()
        .map_err(model_error)?;
    let total: f64 = refs.iter().sum();
    let mut csv = format!("{ENERGY_HEADER}\n");
    let mut raws = Vec::with_capacity(grid.nt);
    let mut boundary = Worst::default();
    for j in 0..grid.nt {
        let row: Vec<C64> = sampled.u_row(j).into_iter().map(|v| v.unwrap_or_default()).collect();
        let (raw, b) = energy(&row, grid.dx());
        let normalized = spec.n() as f64 * raw / total;
        boundary.update(b, f64::NAN, grid.t(j));
        csv.push_str(&format!("{},{},{}\n", fmt17(grid.t(j)), fmt17(raw), fmt17(normalized)));
        raws.push(raw);
    }
    let spread = raws.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - raws.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut report = ctx.report("energy", "energy", Orders::new(0, 0));
    report.push(Check::new("energy_conservation", Some(spread), etol, None));
    boundary.at = None;
    report.push(Check::from_worst("boundary_decay", &boundary, BOUNDARY_DECAY));
    report.meta("one_soliton_energies", &refs);
    report.meta("n", spec.n());
    report.singular_points = sampled
        .missing()
        .map(|s| SingularPoint {
            x: s.x,
            t: s.t,
            error: s.value.as_ref().err().map(|e| e.to_string()).unwrap_or_default(),
        })
        .collect();
    ctx.write(&mut report, ENERGY_FILE, &csv)?;
    ctx.finish(report)
}

pub fn cmd_verify(ctx: &Context) -> std::result::Result<VerificationReport, CliError> {
    let cfg = &ctx.config;
    let tol = cfg.tolerances;
    let vp = require(&cfg.verify, "verify")?;
    let path = ctx.input.clone().unwrap_or_else(|| ctx.config_dir.join(&vp.input));
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let rows = parse_solution_csv(&text)?;
    let orders = cfg.orders(Orders::new(2, 1))?;
    let mut report = ctx.report("verify", "verify", orders);
    let mut sigma1 = false;
    let field: Arc<dyn FieldPair> = match vp.model {
        Model::Soliton => {
            let p = require(&cfg.soliton, "soliton")?;
            sigma1 = p.sigma1;
            Arc::new(NSoliton::on_vacuum(p.spec()?))
        }
        Model::Backlund => Arc::new(chain_of(require(&cfg.backlund, "backlund")?)?.1),
        Model::Discrete => {
            let p = require(&cfg.discrete, "discrete")?;
            Arc::new(Discrete::new(seed_field(&p.seed)?, p.steps))
        }
        Model::Sigma2 => {
            let p = require(&cfg.sigma2, "sigma2")?;
            match resolve(p, &cfg.grid, tol.residual)? {
                (spec, Resolved::Convention(c, _)) => {
                    report.meta("convention", c.name());
                    Arc::new(Sigma2Field(spec))
                }
                (_, Resolved::Unresolved(msg)) => {
                    report.push(Check::new("convention", None, tol.residual, None));
                    report.meta("convention_error", msg);
                    return ctx.finish(report);
                }
            }
        }
    };
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    let scale = rows.iter().map(|r| r.2.norm().max(r.3.norm())).fold(0.0, f64::max);
    let floor = SAMPLE_FLOOR * scale;
    let sample_rel = |a: C64, b: C64| (a - b).norm() / a.norm().max(b.norm()).max(floor).max(f64::MIN_POSITIVE);
    let ev = evaluate(&points, 5, |i, x, t| {
        let j = field.jets(x, t, orders)?;
        let (u, v) = j.values();
        let file = (rows[i].2, rows[i].3);
        Ok(PointEval::new(
            None,
            vec![
                sample_rel(file.0, u).max(sample_rel(file.1, v)),
                scnl_max(&j)?,
                zero_curvature(field.as_ref(), x, t)?,
                cnl_residual(&j.u)?.norm(),
                (u - v.conj()).norm(),
            ],
        ))
    });
    report.push(Check::from_worst("sample_defect", &ev.worst[0], tol.residual));
    report.push(Check::from_worst("scnl_residual", &ev.worst[1], tol.residual));
    report.push(Check::from_worst("zero_curvature", &ev.worst[2], tol.residual));
    if sigma1 {
        report.push(Check::from_worst("cnl_residual", &ev.worst[3], tol.residual));
        report.push(Check::from_worst("sigma1_reality", &ev.worst[4], tol.invariant));
    }
    let unevaluated = ev.singular.len() as f64;
    report.push(Check::new("unevaluated_rows", Some(unevaluated), 0.0, None));
    let (xs, ts): (Vec<f64>, Vec<f64>) = points.iter().cloned().unzip();
    let range = |v: &[f64]| [v.iter().cloned().fold(f64::INFINITY, f64::min), v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)];
    report.meta("input", vp.input.to_string_lossy());
    report.meta("model", vp.model);
    report.meta("rows", rows.len());
    report.meta("x_range", range(&xs));
    report.meta("t_range", range(&ts));
    report.meta("zero_curvature_lambda", ZERO_CURVATURE_PROBE);
    report.singular_points = ev.singular;
    ctx.finish(report)
}
