//! The four single-model analyses. Each returns an [`Outcome`]: verdict rows
//! that decide the exit status, the artifact in both formats, and a short
//! human-readable summary.

use monotone_markov::analysis::{transient_mean_curve, transient_variance_curve};
use monotone_markov::check::{check_supermodular, CheckReport};
use monotone_markov::zoo::ZooModel;
use monotone_markov::{
    certify_shape, check_kernel, covariance_curve, difference_curve, stationary, supermod_curve, Curve,
    Distribution, Estimate, PathEnsemble, ShapeCertificate,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Analysis, ConfigError, CurveKind, RunConfig, DEFAULT_PATHS};
use crate::functions::{BoundFn, BoundH};
use crate::models::ModelConfig;

/// Monte Carlo points further than this many standard errors from the exact
/// value fail.
pub const SE_BOUND: f64 = 4.0;
/// Agreement required between the counterexample curve and its oracle.
pub const ORACLE_TOL: f64 = 1e-8;
/// Tolerance of the stationary solve.
pub const STATIONARY_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub property: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Row {
    fn new(property: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Row {
            property: property.into(),
            verdict: if passed { Verdict::Pass } else { Verdict::Fail },
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub model: String,
    pub rows: Vec<Row>,
    /// CSV header line and records, without the provenance header.
    pub csv: Vec<Vec<String>>,
    pub json: Value,
    pub summary: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Pass)
    }
}

struct Ctx {
    cfg: RunConfig,
    model_cfg: ModelConfig,
    model: ZooModel,
    f1: BoundFn,
    f2: BoundFn,
    h: BoundH,
}

impl Ctx {
    fn new(cfg: &RunConfig, analysis: Analysis) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let model_cfg = match (&cfg.model, analysis) {
            (Some(m), _) => m.clone(),
            (None, Analysis::Counterexample) => ModelConfig::default_counterexample(),
            (None, _) => return Err(ConfigError("config has no [model] block".into())),
        };
        let model = model_cfg.build()?;
        let space = model.kernel.space().clone();
        let f1 = BoundFn::new(cfg.functions.f1.resolve()?, &space)?;
        let f2 = BoundFn::new(cfg.functions.f2.resolve()?, &space)?;
        let h = BoundH::new(cfg.functions.h.resolve()?, f1.clone(), f2.clone(), &space)?;
        Ok(Ctx {
            cfg: cfg.clone(),
            model_cfg,
            model,
            f1,
            f2,
            h,
        })
    }

    fn init(&self) -> Result<Distribution, ConfigError> {
        if let Some(d) = &self.model.init {
            return Ok(d.clone());
        }
        let pi = stationary(&self.model.kernel, STATIONARY_TOL)?;
        if pi.non_unique {
            return Err(ConfigError(format!(
                "{} has more than one stationary law; give the model an initial law",
                self.model.name
            )));
        }
        Ok(pi)
    }

    fn x0(&self) -> f64 {
        self.cfg.x0.unwrap_or_else(|| self.model.kernel.space().min())
    }

    fn time_step(&self) -> f64 {
        self.cfg.time_step.or_else(|| self.model_cfg.time_step()).unwrap_or(1.0)
    }

    fn model_json(&self) -> Value {
        json!({
            "name": self.model.name,
            "states": self.model.kernel.len(),
            "truncation_mass": self.model.truncation_mass,
            "predicted": self.model.predicted,
            "notes": self.model.notes,
        })
    }
}

pub fn run(cfg: &RunConfig, analysis: Analysis) -> Result<Outcome, ConfigError> {
    let ctx = Ctx::new(cfg, analysis)?;
    match analysis {
        Analysis::Check => check(&ctx),
        Analysis::Curve => curve(&ctx),
        Analysis::Simulate => simulate(&ctx),
        Analysis::Counterexample => counterexample(&ctx),
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

fn witness_cells(r: &CheckReport) -> Vec<String> {
    match &r.witness {
        Some(w) => vec![fmt_num(w.x1), fmt_num(w.x2), fmt_num(w.threshold), fmt_num(w.gap)],
        None => vec![String::new(); 4],
    }
}

fn check(ctx: &Ctx) -> Result<Outcome, ConfigError> {
    let tol = ctx.cfg.tol();
    let (mono, c1) = check_kernel(&ctx.model.kernel, tol);
    let mut reports = vec![mono, c1];
    if ctx.cfg.functions.h != crate::functions::HSpec::product() {
        let grid = ctx.model.kernel.space().states();
        reports.push(check_supermodular(|x, y| ctx.h.eval(x, y), grid, grid, tol)?);
    }

    let mut csv = vec![vec![
        "property".into(),
        "basis".into(),
        "passed".into(),
        "x1".into(),
        "x2".into(),
        "threshold".into(),
        "gap".into(),
    ]];
    let mut summary = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        let mut rec = vec![r.property.to_string(), format!("{:?}", r.basis).to_lowercase(), r.passed.to_string()];
        rec.extend(witness_cells(r));
        csv.push(rec);
        summary.push_str(&format!("{r}\n"));
        let detail = r
            .witness
            .map(|w| format!("x1={} x2={} threshold={} gap={:e}", w.x1, w.x2, w.threshold, w.gap))
            .unwrap_or_default();
        rows.push(Row::new(r.property.to_string(), r.passed, detail));
    }
    if reports.iter().any(|r| r.witness.is_some()) {
        summary.push_str(&format!("{:<16} {:>12} {:>12} {:>12} {:>12}\n", "property", "x1", "x2", "threshold", "gap"));
        for r in reports.iter().filter(|r| r.witness.is_some()) {
            let w = r.witness.unwrap();
            summary.push_str(&format!(
                "{:<16} {:>12} {:>12} {:>12} {:>12.3e}\n",
                r.property.to_string(),
                w.x1,
                w.x2,
                w.threshold,
                w.gap
            ));
        }
    }
    Ok(Outcome {
        model: ctx.model.name.clone(),
        rows,
        csv,
        json: json!({ "model": ctx.model_json(), "reports": reports }),
        summary,
    })
}

/// The shape flags the theory predicts for a curve, given the verdicts of
/// the two kernel checks.
fn theory_expectations(ctx: &Ctx, kind: CurveKind, monotone: bool, condition1: bool) -> Vec<&'static str> {
    let both = monotone && condition1;
    match kind {
        CurveKind::Covariance if both && ctx.f2.is_identity() => vec!["nonnegative", "nonincreasing", "convex"],
        CurveKind::Covariance if both => vec!["nonnegative", "nonincreasing"],
        CurveKind::Autocorrelation if both => vec!["nonnegative", "nonincreasing", "convex"],
        CurveKind::Supermod | CurveKind::Difference if both => vec!["nonincreasing"],
        CurveKind::Mean if monotone && condition1 => vec!["nondecreasing", "concave"],
        CurveKind::Mean if monotone => vec!["nondecreasing"],
        _ => Vec::new(),
    }
}

fn exact_curve(ctx: &Ctx, kind: CurveKind) -> Result<Curve, ConfigError> {
    let (k, t_max) = (&ctx.model.kernel, ctx.cfg.horizon);
    let curve = match kind {
        CurveKind::Covariance => {
            covariance_curve(k, &ctx.init()?, |x| ctx.f1.eval(x), |x| ctx.f2.eval(x), t_max)?
        }
        CurveKind::Autocorrelation => covariance_curve(k, &ctx.init()?, |x| x, |x| x, t_max)?.normalized()?,
        CurveKind::Supermod => supermod_curve(k, &ctx.init()?, |x, y| ctx.h.eval(x, y), t_max)?,
        CurveKind::Difference => {
            if !ctx.h.defined_off_grid() {
                return Err(ConfigError("difference curves need an h defined off the grid".into()));
            }
            difference_curve(k, &ctx.init()?, |x, d| ctx.h.eval(x, d), ctx.cfg.lag, t_max)?
        }
        CurveKind::Mean => transient_mean_curve(k, ctx.x0(), t_max)?,
        CurveKind::Variance => transient_variance_curve(k, ctx.x0(), t_max)?,
    };
    Ok(curve.with_time_step(ctx.time_step()))
}

fn certificate_json(cert: &ShapeCertificate) -> Value {
    serde_json::to_value(cert).expect("certificate serializes")
}

fn flag_table(cert: &ShapeCertificate) -> String {
    let mut s = String::new();
    for (name, ok) in cert.flags() {
        s.push_str(&format!("{name:<14} {}\n", if ok { "yes" } else { "no" }));
    }
    s
}

fn curve(ctx: &Ctx) -> Result<Outcome, ConfigError> {
    let tol = ctx.cfg.tol();
    let kind = ctx.cfg.curve;
    let c = exact_curve(ctx, kind)?;
    let cert = certify_shape(&c, tol);
    let (mono, c1) = check_kernel(&ctx.model.kernel, tol);
    let expected: Vec<String> = match &ctx.cfg.expect {
        Some(e) => e.clone(),
        None => theory_expectations(ctx, kind, mono.passed, c1.passed)
            .into_iter()
            .map(String::from)
            .collect(),
    };
    let flags = cert.flags();
    let mut rows: Vec<Row> = expected
        .iter()
        .map(|e| {
            let ok = flags.iter().find(|(n, _)| n == e).map(|f| f.1).unwrap_or(false);
            let detail = match witness_of(&cert, e) {
                Some(i) if !ok => format!("first violation at index {i}"),
                _ => String::new(),
            };
            Row::new(format!("{}:{e}", kind_name(kind)), ok, detail)
        })
        .collect();
    if rows.is_empty() {
        rows.push(Row::new(kind_name(kind), true, "no shape claimed"));
    }

    let mut csv = vec![vec!["t".to_string(), "value".to_string()]];
    csv.extend(c.times.iter().zip(&c.values).map(|(t, v)| vec![fmt_num(*t), fmt_num(*v)]));
    let mut summary = format!("{} ({} points)\n", c.meta, c.len());
    summary.push_str(&flag_table(&cert));
    Ok(Outcome {
        model: ctx.model.name.clone(),
        rows,
        csv,
        json: json!({
            "model": ctx.model_json(),
            "kind": kind_name(kind),
            "curve": c,
            "certificate": certificate_json(&cert),
            "expected": expected,
        }),
        summary,
    })
}

fn witness_of(cert: &ShapeCertificate, flag: &str) -> Option<usize> {
    let w = &cert.witnesses;
    match flag {
        "nonnegative" => w.nonnegative,
        "nonincreasing" => w.nonincreasing,
        "nondecreasing" => w.nondecreasing,
        "convex" => w.convex,
        "concave" => w.concave,
        _ => None,
    }
}

fn kind_name(kind: CurveKind) -> &'static str {
    match kind {
        CurveKind::Covariance => "covariance",
        CurveKind::Autocorrelation => "autocorrelation",
        CurveKind::Supermod => "supermod",
        CurveKind::Difference => "difference",
        CurveKind::Mean => "mean",
        CurveKind::Variance => "variance",
    }
}

fn simulate(ctx: &Ctx) -> Result<Outcome, ConfigError> {
    let kind = ctx.cfg.curve;
    let t_max = ctx.cfg.horizon;
    let n_paths = ctx.cfg.paths.unwrap_or(DEFAULT_PATHS);
    let seed = ctx.cfg.seed();
    let k = &ctx.model.kernel;
    let init = match kind {
        CurveKind::Mean => Distribution::point(k.space().clone(), ctx.x0())?,
        _ => ctx.init()?,
    };
    let extra = if kind == CurveKind::Difference { ctx.cfg.lag as usize } else { 0 };
    let ens = PathEnsemble::simulate(k, &init, t_max + extra, n_paths, seed)?;
    let estimates: Vec<Estimate> = match kind {
        CurveKind::Covariance => ens.covariance(|x| ctx.f1.eval(x), |x| ctx.f2.eval(x), t_max)?,
        CurveKind::Autocorrelation => ens.autocorrelation(t_max)?,
        CurveKind::Supermod => ens.supermod(|x, y| ctx.h.eval(x, y), t_max)?,
        CurveKind::Difference => {
            if !ctx.h.defined_off_grid() {
                return Err(ConfigError("difference curves need an h defined off the grid".into()));
            }
            ens.difference(|x, d| ctx.h.eval(x, d), ctx.cfg.lag as usize, t_max)?
        }
        CurveKind::Mean => ens.supermod(|_, y| y, t_max)?,
        CurveKind::Variance => {
            return Err(ConfigError("simulate does not estimate variance curves".into()));
        }
    };
    let exact = exact_curve(ctx, kind)?;
    let z: Vec<f64> = estimates.iter().zip(&exact.values).map(|(e, x)| e.z_score(*x)).collect();
    let worst = z.iter().copied().fold(0.0, f64::max);
    let bad = z.iter().filter(|&&z| z > SE_BOUND).count();

    let mut csv = vec![["t", "value", "std_error", "n"].map(String::from).to_vec()];
    csv.extend(estimates.iter().zip(&exact.times).map(|(e, t)| {
        vec![fmt_num(*t), fmt_num(e.value), fmt_num(e.std_error), e.n_samples.to_string()]
    }));
    let points: Vec<Value> = estimates
        .iter()
        .zip(&exact.times)
        .zip(exact.values.iter().zip(&z))
        .map(|((e, t), (x, z))| {
            json!({ "t": t, "value": e.value, "std_error": e.std_error, "n": e.n_samples, "exact": x, "z": z })
        })
        .collect();
    Ok(Outcome {
        model: ctx.model.name.clone(),
        rows: vec![Row::new(
            "mc-agreement",
            bad == 0,
            format!("{bad} of {} points beyond {SE_BOUND} SE; worst z {worst:.2}", z.len()),
        )],
        csv,
        json: json!({ "model": ctx.model_json(), "kind": kind_name(kind), "paths": n_paths, "estimates": points }),
        summary: format!(
            "{} paths, {} points, worst |z| {worst:.2} ({bad} beyond {SE_BOUND})\n",
            n_paths,
            z.len()
        ),
    })
}

/// `Var(min(k + N, m))` for `N ~ Poisson(mean)`, by direct summation.
pub fn capped_poisson_variance(k: u32, m: u32, mean: f64) -> f64 {
    let room = m - k;
    let mut pmf = (-mean).exp();
    let (mut below, mut e1, mut e2) = (0.0, 0.0, 0.0);
    for j in 0..room {
        let x = (k + j) as f64;
        below += pmf;
        e1 += pmf * x;
        e2 += pmf * x * x;
        pmf *= mean / (j + 1) as f64;
    }
    let top = (1.0 - below).max(0.0);
    e1 += top * m as f64;
    e2 += top * (m as f64).powi(2);
    e2 - e1 * e1
}

fn counterexample(ctx: &Ctx) -> Result<Outcome, ConfigError> {
    let tol = ctx.cfg.tol();
    let k = &ctx.model.kernel;
    let x0 = ctx.x0();
    let dt = ctx.time_step();
    let var = transient_variance_curve(k, x0, ctx.cfg.horizon)?.with_time_step(dt);
    let mean = transient_mean_curve(k, x0, ctx.cfg.horizon)?.with_time_step(dt);
    let var_cert = certify_shape(&var, tol);
    let mean_cert = certify_shape(&mean, tol);

    let oracle: Option<Vec<f64>> = match &ctx.model_cfg {
        ModelConfig::AbsorbedPoisson { k: k0, m, lambda, .. } if ctx.cfg.x0.is_none() => Some(
            var.times
                .iter()
                .map(|t| capped_poisson_variance(*k0, *m, lambda * t))
                .collect(),
        ),
        _ => None,
    };

    let mut rows = vec![
        Row::new(
            "variance-not-monotone",
            !var_cert.nonincreasing && !var_cert.nondecreasing,
            match (var_cert.witnesses.nonincreasing, var_cert.witnesses.nondecreasing) {
                (Some(up), Some(down)) => format!("rises at index {up}, falls at index {down}"),
                _ => "monotone".into(),
            },
        ),
        Row::new("mean-nondecreasing", mean_cert.nondecreasing, ""),
        Row::new("mean-concave", mean_cert.concave, ""),
    ];
    let mut header = ["t", "variance", "mean"].map(String::from).to_vec();
    if let Some(o) = &oracle {
        let err = o.iter().zip(&var.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        rows.push(Row::new(
            "variance-oracle",
            err <= ORACLE_TOL,
            format!("max error {err:e} against the Poisson closed form"),
        ));
        header.push("oracle".into());
    }
    let mut csv = vec![header];
    for i in 0..var.len() {
        let mut rec = vec![fmt_num(var.times[i]), fmt_num(var.values[i]), fmt_num(mean.values[i])];
        if let Some(o) = &oracle {
            rec.push(fmt_num(o[i]));
        }
        csv.push(rec);
    }
    let summary = format!(
        "variance:\n{}mean:\n{}",
        flag_table(&var_cert),
        flag_table(&mean_cert)
    );
    Ok(Outcome {
        model: ctx.model.name.clone(),
        rows,
        csv,
        json: json!({
            "model": ctx.model_json(),
            "variance": var,
            "variance_certificate": certificate_json(&var_cert),
            "mean": mean,
            "mean_certificate": certificate_json(&mean_cert),
            "oracle": oracle,
        }),
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capped_poisson_variance_limits() {
        assert_eq!(capped_poisson_variance(0, 2, 0.0), 0.0);
        assert!(capped_poisson_variance(0, 2, 60.0).abs() < 1e-20);
        // m = 1 is a Bernoulli(1 - e^{-μ}) variable
        let q = 1.0 - (-0.7f64).exp();
        assert!((capped_poisson_variance(0, 1, 0.7) - q * (1.0 - q)).abs() < 1e-15);
    }
}
