//! Experiment configs, runs, parameter sweeps and their output files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use adasmooth::problems::{as_l1l1, reference_optimum, ReferenceMethod, GRID_MAX_DIM, LP_MAX_DIM};
use adasmooth::solvers::{
    fixed_gamma_for_budget, run_adaptive, run_bot_hendrich, run_double_prox, run_dual_primal, run_nonadaptive,
    run_smooth_g,
};
use adasmooth::{vector, CompositeProblem, Provenance, Reference, Schedule, Trace, TraceOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::image::{clamp_unit, psnr};
use crate::instance::{
    build_problem, constrained_reference, double_prox_variant, gen_instance, ridge_variant, BuiltProblem, Family,
    Instance, InstanceSpec,
};

/// Iteration counts at which deblurring runs also report PSNR.
pub const PSNR_CHECKPOINTS: [usize; 3] = [300, 500, 1000];

/// Largest `p` for which the constrained family gets an LP reference automatically.
const CONSTRAINED_LP_MAX_DIM: usize = 200;

/// Parameters a sweep may vary.
pub const SWEEP_PARAMS: [&str; 5] = ["gamma1", "gamma", "c_a", "c_b", "lambda"];

fn one() -> usize {
    1
}
fn one_f() -> f64 {
    1.0
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}
fn default_reference_iters() -> usize {
    100_000
}
fn default_grid_radius() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    /// Omitted `gamma1` means `‖A‖R₀/√(6D)`.
    Adaptive {
        gamma1: Option<f64>,
        #[serde(default = "one_f")]
        c_bar: f64,
    },
    /// Omitted `gamma` means the value matched to the iteration budget.
    Nonadaptive {
        gamma: Option<f64>,
    },
    /// Runs on the ridge variant `g = (λ/2)‖x‖²`.
    SmoothG,
    DualPrimal {
        #[serde(default = "one_f")]
        gamma1: f64,
    },
    BotHendrich {
        c_a: f64,
        c_b: f64,
    },
    DoubleProx {
        gamma1: Option<f64>,
    },
}

impl AlgorithmSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            AlgorithmSpec::Adaptive { .. } => "adaptive",
            AlgorithmSpec::Nonadaptive { .. } => "nonadaptive",
            AlgorithmSpec::SmoothG => "smooth-g",
            AlgorithmSpec::DualPrimal { .. } => "dual-primal",
            AlgorithmSpec::BotHendrich { .. } => "bot-hendrich",
            AlgorithmSpec::DoubleProx { .. } => "double-prox",
        }
    }

    fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match (self, name) {
            (AlgorithmSpec::Adaptive { gamma1, .. } | AlgorithmSpec::DoubleProx { gamma1 }, "gamma1") => {
                *gamma1 = Some(value);
                return Ok(());
            }
            (AlgorithmSpec::DualPrimal { gamma1 }, "gamma1") => gamma1,
            (AlgorithmSpec::Nonadaptive { gamma }, "gamma") => {
                *gamma = Some(value);
                return Ok(());
            }
            (AlgorithmSpec::BotHendrich { c_a, .. }, "c_a") => c_a,
            (AlgorithmSpec::BotHendrich { c_b, .. }, "c_b") => c_b,
            (alg, _) => {
                return Err(HarnessError::config(format!("{} has no parameter {name}", alg.kind())));
            }
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceChoice {
    /// LP for the l1-l1 family and the constrained family, grid for `p <= 3`, otherwise none.
    #[default]
    Auto,
    Lp,
    Grid,
    LongRun,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Kind of the algorithm entry the grid applies to.
    pub algorithm: String,
    /// One or two parameter grids, keyed by name.
    #[serde(flatten)]
    pub grid: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    #[serde(rename = "algorithm", default)]
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "one")]
    pub iters: usize,
    #[serde(default = "one")]
    pub report_every: usize,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub reference: ReferenceChoice,
    #[serde(default = "default_reference_iters")]
    pub reference_iters: usize,
    #[serde(default = "default_grid_radius")]
    pub grid_radius: f64,
    /// Fill the elapsed column with wall-clock nanoseconds (breaks byte reproducibility).
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment configs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        self.instance.validate()?;
        if self.iters == 0 {
            return Err(HarnessError::config("iters must be at least 1"));
        }
        if self.report_every == 0 {
            return Err(HarnessError::config("report_every must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::config("no [[algorithm]] sections"));
        }
        if self.reference_iters == 0 || !(self.grid_radius > 0.0 && self.grid_radius.is_finite()) {
            return Err(HarnessError::config("reference_iters and grid_radius must be positive"));
        }
        for alg in &self.algorithms {
            let positive = |v: f64, name: &str| {
                if v > 0.0 && v.is_finite() {
                    Ok(())
                } else {
                    Err(HarnessError::config(format!("{} needs {name} > 0", alg.kind())))
                }
            };
            match alg {
                AlgorithmSpec::Adaptive { gamma1, c_bar } => {
                    gamma1.map_or(Ok(()), |g| positive(g, "gamma1"))?;
                    if !(*c_bar >= 1.0 && c_bar.is_finite()) {
                        return Err(HarnessError::config("adaptive needs c_bar >= 1"));
                    }
                }
                AlgorithmSpec::Nonadaptive { gamma } => gamma.map_or(Ok(()), |g| positive(g, "gamma"))?,
                AlgorithmSpec::DoubleProx { gamma1 } => gamma1.map_or(Ok(()), |g| positive(g, "gamma1"))?,
                AlgorithmSpec::DualPrimal { gamma1 } => positive(*gamma1, "gamma1")?,
                AlgorithmSpec::BotHendrich { c_a, c_b } => {
                    positive(*c_a, "c_a")?;
                    positive(*c_b, "c_b")?;
                }
                AlgorithmSpec::SmoothG => {}
            }
        }
        if let Some(sweep) = &self.sweep {
            self.sweep_target(sweep)?;
            if sweep.grid.is_empty() || sweep.grid.len() > 2 {
                return Err(HarnessError::config("a sweep varies one or two parameters"));
            }
            for (name, values) in &sweep.grid {
                if !SWEEP_PARAMS.contains(&name.as_str()) {
                    return Err(HarnessError::config(format!(
                        "unknown sweep parameter {name}; expected one of {SWEEP_PARAMS:?}"
                    )));
                }
                if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                    return Err(HarnessError::config(format!(
                        "sweep grid {name} must be nonempty and finite"
                    )));
                }
            }
        }
        Ok(())
    }

    fn sweep_target(&self, sweep: &SweepSpec) -> Result<&AlgorithmSpec> {
        self.algorithms
            .iter()
            .find(|a| a.kind() == sweep.algorithm)
            .ok_or_else(|| {
                HarnessError::config(format!(
                    "sweep algorithm {} has no [[algorithm]] section",
                    sweep.algorithm
                ))
            })
    }

    /// Keeps only the algorithms of the given kind.
    pub fn select_algorithm(&mut self, kind: &str) -> Result<()> {
        self.algorithms.retain(|a| a.kind() == kind);
        if self.algorithms.is_empty() {
            return Err(HarnessError::config(format!("no [[algorithm]] of kind {kind}")));
        }
        if self.sweep.as_ref().is_some_and(|s| s.algorithm != kind) {
            self.sweep = None;
        }
        Ok(())
    }
}

/// An instance with its built problem and reference optimum.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub spec: InstanceSpec,
    pub instance: Instance,
    pub problem: BuiltProblem,
    /// `‖x0 - x*‖` when a reference minimizer is known, else `‖x_natural‖` as a proxy.
    pub r0: f64,
    pub r0_source: &'static str,
    /// PSNR of the degraded image, for the image families.
    pub observed_psnr: Option<f64>,
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let spec = cfg.instance.clone();
    let instance = gen_instance(&spec)?;
    prepare_with(cfg, spec, instance)
}

fn prepare_with(cfg: &ExperimentConfig, spec: InstanceSpec, instance: Instance) -> Result<Prepared> {
    let mut problem = build_problem(&spec, &instance)?;
    let mut x_star = None;
    match &mut problem {
        BuiltProblem::Composite(p) => {
            if let Some(method) = reference_method(cfg, p)? {
                let r = reference_optimum(p, method)?;
                x_star = r.x_star.clone();
                *p = p.clone().with_reference(r)?;
            }
        }
        BuiltProblem::Constrained(cp) => {
            let use_lp = match cfg.reference {
                ReferenceChoice::Auto => spec.p <= CONSTRAINED_LP_MAX_DIM,
                ReferenceChoice::Lp => true,
                ReferenceChoice::None => false,
                ReferenceChoice::Grid | ReferenceChoice::LongRun => {
                    return Err(HarnessError::config(
                        "the constrained family supports reference = \"lp\" or \"none\"",
                    ));
                }
            };
            if use_lp {
                let (phi_star, y) = constrained_reference(cp, &instance)?;
                x_star = y.clone();
                *cp = cp.clone().with_solution(phi_star, y)?;
            }
        }
    }
    let (r0, r0_source) = match &x_star {
        Some(xs) => (vector::norm2(xs), "reference minimizer"),
        None if spec.family == Family::ConstrainedLp => (0.0, "unavailable"),
        None => (vector::norm2(&instance.natural), "generating vector (no reference)"),
    };
    let observed_psnr = if spec.family.is_image() {
        Some(psnr(&clamp_unit(&instance.rhs), &instance.natural)?)
    } else {
        None
    };
    Ok(Prepared {
        spec,
        instance,
        problem,
        r0,
        r0_source,
        observed_psnr,
    })
}

fn reference_method(cfg: &ExperimentConfig, p: &CompositeProblem<f64>) -> Result<Option<ReferenceMethod>> {
    let grid = ReferenceMethod::Grid {
        radius: cfg.grid_radius,
        resolution: 1e-9,
    };
    Ok(match cfg.reference {
        ReferenceChoice::None => None,
        ReferenceChoice::Lp => Some(ReferenceMethod::Lp),
        ReferenceChoice::Grid => Some(grid),
        ReferenceChoice::LongRun => Some(ReferenceMethod::LongRun {
            iters: cfg.reference_iters,
        }),
        ReferenceChoice::Auto if as_l1l1(p).is_some() && p.dim() <= LP_MAX_DIM => Some(ReferenceMethod::Lp),
        ReferenceChoice::Auto if p.dim() <= GRID_MAX_DIM => Some(grid),
        ReferenceChoice::Auto => None,
    })
}

/// `‖A‖R₀/√(6D)`, the adaptive choice that balances the rate bound; 1 when undefined.
pub fn default_gamma1(problem: &CompositeProblem<f64>, r0: f64) -> f64 {
    let d = problem.f.prox_diameter();
    let g = problem.opnorm * r0 / (6.0 * d).sqrt();
    if g > 0.0 && g.is_finite() {
        g
    } else {
        1.0
    }
}

/// One row of `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub label: String,
    pub algorithm: String,
    /// Resolved parameters, e.g. `gamma1=1.2e1`.
    pub params: Vec<(String, f64)>,
    pub iters: usize,
    pub final_objective: f64,
    /// Smallest objective over the reported rows; NaN for dual-primal.
    pub best_objective: f64,
    pub final_gap: f64,
    /// Constraint violation of the averaged primal point (dual-primal only).
    pub final_feasibility: f64,
    /// `(k, dB)` for the image families, including the final iterate.
    pub psnr: Vec<(usize, f64)>,
}

impl SummaryRow {
    pub fn final_psnr(&self) -> Option<f64> {
        self.psnr.last().map(|p| p.1)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: SummaryRow,
    pub trace: Trace,
    /// Final iterate; the averaged primal point for dual-primal.
    pub x: Vec<f64>,
}

/// Runs one algorithm on a prepared instance.
pub fn run_algorithm(
    prep: &Prepared,
    alg: &AlgorithmSpec,
    iters: usize,
    opts: &TraceOptions<f64>,
) -> Result<RunOutput> {
    let (trace, x, params) = execute(prep, alg, iters, opts)?;
    let last = *trace
        .last()
        .ok_or_else(|| HarnessError::config("the run produced no trace rows"))?;
    let best = trace.rows.iter().map(|r| r.objective).fold(f64::INFINITY, f64::min);
    let mut summary = SummaryRow {
        label: alg.kind().to_string(),
        algorithm: alg.kind().to_string(),
        params,
        iters,
        final_objective: last.objective,
        best_objective: best,
        final_gap: last.gap,
        final_feasibility: f64::NAN,
        psnr: Vec::new(),
    };
    if let AlgorithmSpec::DualPrimal { .. } = alg {
        let cp = prep.problem.constrained()?;
        summary.final_objective = cp.objective(&x)?;
        summary.final_feasibility = cp.feasibility(&x)?;
        summary.final_gap = cp.phi_star.map_or(f64::NAN, |s| summary.final_objective - s);
        // The trace rows hold the dual objective, so no primal minimum is available.
        summary.best_objective = f64::NAN;
    }
    if prep.spec.family.is_image() {
        for k in PSNR_CHECKPOINTS.into_iter().filter(|&k| k < iters) {
            let quiet = TraceOptions {
                report_every: k,
                ..TraceOptions::default()
            };
            let (_, xk, _) = execute(prep, alg, k, &quiet)?;
            summary.psnr.push((k, psnr(&clamp_unit(&xk), &prep.instance.natural)?));
        }
        summary
            .psnr
            .push((iters, psnr(&clamp_unit(&x), &prep.instance.natural)?));
    }
    Ok(RunOutput { summary, trace, x })
}

type Executed = (Trace, Vec<f64>, Vec<(String, f64)>);

fn execute(prep: &Prepared, alg: &AlgorithmSpec, iters: usize, opts: &TraceOptions<f64>) -> Result<Executed> {
    let x0 = |p: &CompositeProblem<f64>| vector::zeros(p.dim());
    let (mut trace, x, params) = match alg {
        AlgorithmSpec::Adaptive { gamma1, c_bar } => {
            let p = prep.problem.composite()?;
            let g1 = gamma1.unwrap_or_else(|| default_gamma1(p, prep.r0));
            let (state, trace) = run_adaptive(p, &Schedule::adaptive(g1, *c_bar)?, x0(p), iters, opts)?;
            (trace, state.x, vec![("gamma1".into(), g1), ("c_bar".into(), *c_bar)])
        }
        AlgorithmSpec::Nonadaptive { gamma } => {
            let p = prep.problem.composite()?;
            let g = match gamma {
                Some(g) => *g,
                None => fixed_gamma_for_budget(p.opnorm, prep.r0, p.f.prox_diameter(), iters)?,
            };
            let (state, trace) = run_nonadaptive(p, g, x0(p), iters, opts)?;
            (trace, state.x, vec![("gamma".into(), g)])
        }
        AlgorithmSpec::SmoothG => {
            let q = ridge_variant(prep.problem.composite()?, prep.spec.lambda)?;
            let (state, trace) = run_smooth_g(&q, x0(&q), iters, opts)?;
            (trace, state.x, vec![("lg".into(), prep.spec.lambda)])
        }
        AlgorithmSpec::DualPrimal { gamma1 } => {
            let cp = prep.problem.constrained()?;
            let dim = cp.map.out_dim();
            let run = run_dual_primal(cp, &Schedule::adaptive(*gamma1, 1.0)?, vector::zeros(dim), iters, opts)?;
            let u_bar = run
                .state
                .average
                .map(|a| a.u_bar)
                .ok_or_else(|| HarnessError::config("dual-primal produced no primal average"))?;
            (run.trace, u_bar, vec![("gamma1".into(), *gamma1)])
        }
        AlgorithmSpec::BotHendrich { c_a, c_b } => {
            let p = prep.problem.composite()?;
            let (state, trace) = run_bot_hendrich(p, *c_a, *c_b, x0(p), iters, opts)?;
            (trace, state.x, vec![("c_a".into(), *c_a), ("c_b".into(), *c_b)])
        }
        AlgorithmSpec::DoubleProx { gamma1 } => {
            let mut q = double_prox_variant(&prep.spec, &prep.instance)?;
            if let Some(r) = &prep.problem.composite()?.reference {
                q = q.with_reference(r.clone())?;
            }
            let g1 = gamma1.unwrap_or_else(|| default_gamma1(&q, prep.r0));
            let (state, trace) = run_double_prox(&q, &Schedule::adaptive(g1, 1.0)?, x0(&q), iters, opts)?;
            (trace, state.x, vec![("gamma1".into(), g1)])
        }
    };
    let mut header = prep.spec.notes();
    header.push(("r0".into(), format!("{:.16e} ({})", prep.r0, prep.r0_source)));
    header.append(&mut trace.header);
    trace.header = header;
    Ok((trace, x, params))
}

fn trace_options(cfg: &ExperimentConfig) -> TraceOptions<f64> {
    TraceOptions {
        timing: cfg.timing,
        report_every: cfg.report_every,
        ..TraceOptions::default()
    }
}

/// Runs every configured algorithm, writing `NN-kind.csv` traces and `summary.csv`
/// into the output directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SummaryRow>> {
    cfg.validate()?;
    let prep = prepare(cfg)?;
    let opts = trace_options(cfg);
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut rows = Vec::with_capacity(cfg.algorithms.len());
    for (i, alg) in cfg.algorithms.iter().enumerate() {
        let mut out = run_algorithm(&prep, alg, cfg.iters, &opts)?;
        out.summary.label = format!("{i:02}-{}", alg.kind());
        write_file(&dir.join(format!("{}.csv", out.summary.label)), &out.trace.to_csv())?;
        rows.push(out.summary);
    }
    write_file(&dir.join("summary.csv"), &summary_csv(&rows, prep.observed_psnr))?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// Parameter values in name order.
    pub params: Vec<(String, f64)>,
    pub summary: SummaryRow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// All points, sorted by parameter values.
    pub points: Vec<SweepPoint>,
    /// Index into `points` of the winner.
    pub best: usize,
}

impl SweepResult {
    pub fn best_point(&self) -> &SweepPoint {
        &self.points[self.best]
    }
}

/// Score of a point; higher is better. PSNR for images, minus the final objective otherwise.
fn score(image: bool, s: &SummaryRow) -> f64 {
    let v = if image {
        s.final_psnr().unwrap_or(f64::NAN)
    } else {
        -s.final_objective
    };
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Evaluates the sweep grid in parallel. Each point is scored after `iters` iterations;
/// ties go to the smallest parameter values.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| HarnessError::config("no [sweep] section"))?;
    let base_alg = cfg.sweep_target(spec)?.clone();
    let names: Vec<&String> = spec.grid.keys().collect();
    let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
    for name in &names {
        let mut values = spec.grid[*name].clone();
        values.sort_by(f64::total_cmp);
        values.dedup();
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    let varies_lambda = spec.grid.contains_key("lambda");
    let shared = if varies_lambda { None } else { Some(prepare(cfg)?) };
    let instance = if varies_lambda {
        Some(gen_instance(&cfg.instance)?)
    } else {
        None
    };
    let opts = trace_options(cfg);
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|values| {
            let mut alg = base_alg.clone();
            let mut inst_spec = cfg.instance.clone();
            let params: Vec<(String, f64)> = names.iter().zip(values).map(|(n, v)| (n.to_string(), *v)).collect();
            for (name, v) in &params {
                if name == "lambda" {
                    inst_spec.lambda = *v;
                } else {
                    alg.set(name, *v)?;
                }
            }
            let local;
            let prep = match &shared {
                Some(p) => p,
                None => {
                    inst_spec.validate()?;
                    let inst = instance.clone().expect("instance generated for lambda sweeps");
                    local = prepare_with(cfg, inst_spec, inst)?;
                    &local
                }
            };
            let mut summary = run_algorithm(prep, &alg, cfg.iters, &opts)?.summary;
            summary.label = params
                .iter()
                .map(|(n, v)| format!("{n}={v:e}"))
                .collect::<Vec<_>>()
                .join(" ");
            Ok(SweepPoint { params, summary })
        })
        .collect::<Result<_>>()?;
    // The cartesian product of sorted grids is already in lexicographic order.
    let image = cfg.instance.family.is_image();
    let scores: Vec<f64> = points.iter().map(|p| score(image, &p.summary)).collect();
    Ok(SweepResult {
        best: best_index(&scores),
        points,
    })
}

/// Index of the highest score; the first one wins ties.
fn best_index(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

/// Runs the sweep and writes `sweep_summary.csv` (one row per point) and `sweep_best.txt`.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let result = sweep(cfg)?;
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let rows: Vec<SummaryRow> = result.points.iter().map(|p| p.summary.clone()).collect();
    write_file(&dir.join("sweep_summary.csv"), &summary_csv(&rows, None))?;
    write_file(
        &dir.join("sweep_best.txt"),
        &format!("{}\n", result.best_point().summary.label),
    )?;
    Ok(result)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub const SUMMARY_COLUMNS: [&str; 12] = [
    "label",
    "algorithm",
    "params",
    "iters",
    "final_objective",
    "best_objective",
    "final_gap",
    "final_feasibility",
    "psnr_300",
    "psnr_500",
    "psnr_1000",
    "psnr_final",
];

pub fn summary_csv(rows: &[SummaryRow], observed_psnr: Option<f64>) -> String {
    let mut out = String::new();
    if let Some(db) = observed_psnr {
        let _ = writeln!(out, "# observed_psnr: {}", fmt_f64(db));
    }
    out.push_str(&SUMMARY_COLUMNS.join(","));
    out.push('\n');
    for r in rows {
        let params = r
            .params
            .iter()
            .map(|(n, v)| format!("{n}={v:e}"))
            .collect::<Vec<_>>()
            .join(";");
        let at = |k: usize| r.psnr.iter().find(|p| p.0 == k).map_or(f64::NAN, |p| p.1);
        let fields = [
            r.label.clone(),
            r.algorithm.clone(),
            params,
            r.iters.to_string(),
            fmt_f64(r.final_objective),
            fmt_f64(r.best_objective),
            fmt_f64(r.final_gap),
            fmt_f64(r.final_feasibility),
            fmt_f64(at(300)),
            fmt_f64(at(500)),
            fmt_f64(at(1000)),
            fmt_f64(r.final_psnr().unwrap_or(f64::NAN)),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Reference optimum of the prepared composite problem, if one was computed.
pub fn prepared_reference(prep: &Prepared) -> Option<&Reference<f64>> {
    match &prep.problem {
        BuiltProblem::Composite(p) => p.reference.as_ref(),
        BuiltProblem::Constrained(_) => None,
    }
}

/// Provenance tag of the reference used for gaps and bounds.
pub fn reference_provenance(prep: &Prepared) -> Option<Provenance> {
    match &prep.problem {
        BuiltProblem::Composite(p) => p.reference.as_ref().map(|r| r.provenance),
        BuiltProblem::Constrained(cp) => cp.phi_star.map(|_| Provenance::LpOracle),
    }
}
