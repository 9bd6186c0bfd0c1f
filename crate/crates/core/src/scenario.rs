//! Declarative scenario files and the analysis pipeline behind the CLI.
//!
//! A scenario names a process, anchor points, an optional simulation setup
//! and a list of analyses. Analyses run in stage order (symbol, norming,
//! classify, simulate, verify) and, within a stage, in file order. Each one
//! writes `NN-<kind>.json` and `NN-<kind>.csv` into the output directory;
//! `report.json` lists them all. Every file carries the scenario hash and the
//! master seed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{
    classify_integral_at_zero, lower_tail_test, symbol_liminf_test, upper_function_test, upper_function_test_with,
    TestVerdict,
};
use crate::error::{Error, Result};
use crate::measure::{eval_exponent, LevyMeasureSpec, LevyTriplet, ScaleSpec};
use crate::mc::{
    chung_statistic, empirical_charfn_bound, estimate_sup_probability, etemadi_check, maximal_inequality_check,
    multi_interval_decay, spitzer_estimate, CheckStatus, Direction,
};
use crate::norming::{kappa_estimate, kappa_power_law_bound, LogCorrection, NormingFunction, NormingKind};
use crate::profile::Profile;
use crate::simulate::{sha256_hex, simulate_ensemble, GridLayout, PathEnsemble, PathGrid, RecordPolicy, Scheme, SimulationConfig};
use crate::stats::Quartiles;
use crate::symbol::{default_envelope_grid, sector_estimate, LowerEnvelope, SymbolFamily};

fn default_anchors() -> Vec<f64> {
    vec![0.0]
}

fn default_output_dir() -> String {
    "out".into()
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Master seed of every random stream.
    pub seed: u64,
    pub process: LevyTriplet,
    /// Anchor points `x`; simulations start at the first one.
    #[serde(default = "default_anchors")]
    pub x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSpec>,
    pub analyses: Vec<Analysis>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    pub paths: usize,
    pub grid: PathGrid,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub record: RecordPolicy,
}

impl SimulationSpec {
    pub fn config(&self) -> SimulationConfig {
        SimulationConfig {
            scheme: self.scheme,
            resolution: self.resolution,
            record: self.record.clone(),
        }
    }
}

/// `f(t) = coefficient · t^power · |log t|^log_power · (log|log t|)^loglog_power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct TimeFunction {
    #[serde(default = "one")]
    pub coefficient: f64,
    pub power: f64,
    #[serde(default)]
    pub log_power: f64,
    #[serde(default)]
    pub loglog_power: f64,
}

impl TimeFunction {
    pub fn eval(&self, t: f64) -> f64 {
        let mut v = self.coefficient * t.powf(self.power);
        if self.log_power != 0.0 {
            v *= t.ln().abs().powf(self.log_power);
        }
        if self.loglog_power != 0.0 {
            v *= t.ln().abs().ln().powf(self.loglog_power);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Analysis {
    /// Table of `p(x, ξ)` and `p^U(x, ξ)`; optional sector constant and lower envelope.
    Symbol {
        xi: Vec<f64>,
        #[serde(default)]
        sector: bool,
        #[serde(default)]
        envelope: bool,
    },
    Norming {
        function: NormingKind,
        /// Increasing arguments (`R`, `ρ` or `t`).
        arguments: Vec<f64>,
        #[serde(default)]
        correction: LogCorrection,
    },
    Kappa {
        radii: Vec<f64>,
    },
    Classify(ClassifySpec),
    Simulate {
        /// Also write the ensemble as JSON lines.
        #[serde(default)]
        save_paths: bool,
    },
    Verify(VerifySpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifySpec {
    /// `∫ sup_{|y−x|≤v} p^U(y, 1/v) dt` with `v` built from `ℓ_{ε,n}`.
    UpperFunction { epsilon: f64, n: usize, t_max: f64, levels: usize },
    /// The same integral with `ℓ ≡ 1`.
    UpperFunctionPlain { t_max: f64, levels: usize },
    /// `∫ ν{|y| > 2C·v(t)} dt`.
    LowerTail { v: TimeFunction, c: f64, t_max: f64, levels: usize },
    /// `liminf t·g(1/w(t))` with `g` the lower envelope of the symbol.
    SymbolLiminf { w: TimeFunction, t_max: f64, levels: usize },
    /// `∫ f(t) dt` for an explicit integrand.
    Integral { integrand: TimeFunction, t_max: f64, levels: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum VerifySpec {
    SupProbability { t: Vec<f64>, r: Vec<f64>, direction: Direction },
    MaximalInequality { t: Vec<f64>, r: Vec<f64> },
    Decay { r: f64, m_max: usize },
    Spitzer { t: Vec<f64> },
    Etemadi { v: TimeFunction, c: f64, t: Vec<f64> },
    Charfn {
        xi: Vec<f64>,
        t: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
    },
    /// Chung statistic per window; `rate_alpha` replaces the index in the rate.
    Chung {
        windows: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rate_alpha: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Symbol,
    Norming,
    Classify,
    Simulate,
    Verify,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Symbol, Stage::Norming, Stage::Classify, Stage::Simulate, Stage::Verify];
}

impl Analysis {
    pub fn stage(&self) -> Stage {
        match self {
            Analysis::Symbol { .. } => Stage::Symbol,
            Analysis::Norming { .. } | Analysis::Kappa { .. } => Stage::Norming,
            Analysis::Classify(_) => Stage::Classify,
            Analysis::Simulate { .. } => Stage::Simulate,
            Analysis::Verify(_) => Stage::Verify,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Analysis::Symbol { .. } => "symbol",
            Analysis::Norming { .. } => "norming",
            Analysis::Kappa { .. } => "kappa",
            Analysis::Classify(c) => match c {
                ClassifySpec::UpperFunction { .. } => "classify-upper-function",
                ClassifySpec::UpperFunctionPlain { .. } => "classify-upper-function-plain",
                ClassifySpec::LowerTail { .. } => "classify-lower-tail",
                ClassifySpec::SymbolLiminf { .. } => "classify-symbol-liminf",
                ClassifySpec::Integral { .. } => "classify-integral",
            },
            Analysis::Simulate { .. } => "simulate",
            Analysis::Verify(v) => match v {
                VerifySpec::SupProbability { .. } => "verify-sup-probability",
                VerifySpec::MaximalInequality { .. } => "verify-maximal-inequality",
                VerifySpec::Decay { .. } => "verify-decay",
                VerifySpec::Spitzer { .. } => "verify-spitzer",
                VerifySpec::Etemadi { .. } => "verify-etemadi",
                VerifySpec::Charfn { .. } => "verify-charfn",
                VerifySpec::Chung { .. } => "verify-chung",
            },
        }
    }
}

fn schema_error(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// JSON Schema of scenario files.
pub fn scenario_schema() -> Value {
    serde_json::to_value(schemars::schema_for!(Scenario)).expect("schema serializes")
}

/// Command-line overrides applied after parsing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub paths: Option<usize>,
    /// Uniform step count or geometric points per level.
    pub steps: Option<usize>,
    pub output_dir: Option<String>,
}

impl Scenario {
    /// Parses and validates; schema errors carry the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            schema_error(&path, e.into_inner().to_string())
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.process.validate()?;
        if self.x.is_empty() || self.x.iter().any(|x| !x.is_finite()) {
            return Err(schema_error("x", "anchor points must be finite and nonempty"));
        }
        if self.analyses.is_empty() {
            return Err(schema_error("analyses", "at least one analysis is required"));
        }
        let needs_sim = self.analyses.iter().any(|a| a.stage() >= Stage::Simulate);
        match &self.simulation {
            Some(sim) => {
                if sim.paths == 0 {
                    return Err(schema_error("simulation.paths", "must be positive"));
                }
                sim.grid.validate()?;
            }
            None if needs_sim => {
                return Err(schema_error("simulation", "required by simulate and verify analyses"));
            }
            None => {}
        }
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(dir) = &o.output_dir {
            self.output_dir = dir.clone();
        }
        if o.paths.is_some() || o.steps.is_some() {
            let sim = self
                .simulation
                .as_mut()
                .ok_or_else(|| schema_error("simulation", "--paths/--steps need a simulation section"))?;
            if let Some(p) = o.paths {
                sim.paths = p;
            }
            if let Some(s) = o.steps {
                match &mut sim.grid.layout {
                    GridLayout::Uniform { steps } => *steps = s,
                    GridLayout::Geometric { points_per_level, .. } => *points_per_level = s,
                }
            }
        }
        self.validate()
    }

    /// SHA-256 of the canonical JSON form after overrides, without the output directory.
    pub fn hash(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("output_dir");
        }
        Ok(sha256_hex(&serde_json::to_vec(&v)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisRecord {
    pub index: usize,
    pub kind: &'static str,
    pub json: String,
    pub csv: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub scenario_hash: String,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub analyses: Vec<AnalysisRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Omit timestamps so reruns are byte-identical.
    pub canonical: bool,
}

/// Writes `contents` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

struct Output {
    result: Value,
    csv_header: &'static str,
    csv_rows: String,
    status: Option<String>,
    extra: Option<(String, Vec<u8>)>,
}

struct Context<'a> {
    scenario: &'a Scenario,
    hash: String,
    ensemble: Option<PathEnsemble>,
}

fn csv_line(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

fn status_name(s: CheckStatus) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn verdict_name(v: &TestVerdict) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.get("verdict").and_then(|s| s.as_str().map(str::to_owned)))
        .unwrap_or_default()
}

fn verdict_rows(out: &mut String, x: Option<f64>, v: &TestVerdict) {
    for (k, (t, b)) in v.times.iter().zip(&v.blocks).enumerate() {
        csv_line(out, &[x.map_or(String::new(), |x| x.to_string()), k.to_string(), t.to_string(), b.to_string()]);
    }
}

impl<'a> Context<'a> {
    fn window(&self) -> (f64, f64) {
        let x = &self.scenario.x;
        let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    fn ensemble(&mut self) -> Result<&PathEnsemble> {
        if self.ensemble.is_none() {
            let sim = self
                .scenario
                .simulation
                .as_ref()
                .ok_or_else(|| schema_error("simulation", "required by simulate and verify analyses"))?;
            self.ensemble = Some(simulate_ensemble(
                &self.scenario.process,
                self.scenario.x[0],
                &sim.grid,
                &sim.config(),
                self.scenario.seed,
                sim.paths,
            )?);
        }
        Ok(self.ensemble.as_ref().expect("just built"))
    }

    fn run(&mut self, analysis: &Analysis, index: usize) -> Result<Output> {
        let triplet = &self.scenario.process;
        let measure = &triplet.measure;
        let anchors = self.scenario.x.clone();
        match analysis {
            Analysis::Symbol { xi, sector, envelope } => {
                let mut rows = String::new();
                let mut table = Vec::new();
                for &x in &anchors {
                    for &k in xi {
                        let p = eval_exponent(triplet, x, k)?;
                        let pu = measure.pu(x, k)?;
                        csv_line(&mut rows, &[x.to_string(), k.to_string(), p.re.to_string(), p.im.to_string(), pu.to_string()]);
                        table.push(json!({ "x": x, "xi": k, "re_p": p.re, "im_p": p.im, "p_u": pu }));
                    }
                }
                let grid: Vec<f64> = xi.iter().copied().filter(|k| *k != 0.0).collect();
                let sector = if *sector {
                    Some(sector_estimate(triplet, self.window(), &grid)?)
                } else {
                    None
                };
                let envelope = if *envelope {
                    Some(LowerEnvelope::from_symbol(triplet, self.window(), &default_envelope_grid())?)
                } else {
                    None
                };
                Ok(Output {
                    result: json!({ "rows": table, "sector": sector, "envelope": envelope }),
                    csv_header: "x,xi,re_p,im_p,p_u",
                    csv_rows: rows,
                    status: None,
                    extra: None,
                })
            }
            Analysis::Norming {
                function,
                arguments,
                correction,
            } => {
                let mut rows = String::new();
                let mut fns = Vec::new();
                for &x in &anchors {
                    let f = NormingFunction::tabulate(*function, measure, x, arguments, *correction)?;
                    for &a in arguments {
                        csv_line(&mut rows, &[x.to_string(), a.to_string(), f.eval(a)?.to_string()]);
                    }
                    fns.push(f);
                }
                Ok(Output {
                    result: json!({ "functions": fns }),
                    csv_header: "x,argument,value",
                    csv_rows: rows,
                    status: None,
                    extra: None,
                })
            }
            Analysis::Kappa { radii } => {
                let mut rows = String::new();
                let mut estimates = Vec::new();
                for &x in &anchors {
                    let k = kappa_estimate(measure, x, radii)?;
                    for (r, v) in k.r_grid.iter().zip(&k.kappa_values) {
                        csv_line(&mut rows, &[x.to_string(), r.to_string(), v.to_string()]);
                    }
                    estimates.push(json!({ "estimate": k, "power_law_bound": kappa_power_law_bound(measure, x) }));
                }
                Ok(Output {
                    result: json!({ "estimates": estimates }),
                    csv_header: "x,r,kappa",
                    csv_rows: rows,
                    status: None,
                    extra: None,
                })
            }
            Analysis::Classify(spec) => self.classify(spec, &anchors),
            Analysis::Simulate { save_paths } => {
                let hash = self.hash.clone();
                let label = analysis.label();
                let e = self.ensemble()?;
                let mut rows = String::new();
                let mut summary = Vec::new();
                for (k, t) in e.times.iter().enumerate() {
                    let sups: Vec<f64> = e.paths.iter().map(|p| p.running_sup[k]).collect();
                    let q = Quartiles::of(&sups);
                    csv_line(&mut rows, &[t.to_string(), q.q1.to_string(), q.median.to_string(), q.q3.to_string()]);
                    summary.push(json!({ "t": t, "running_sup": q }));
                }
                let extra = if *save_paths {
                    let mut buf = Vec::new();
                    e.write_jsonl(&mut buf, Some(&hash))?;
                    Some((format!("{index:02}-{label}.jsonl"), buf))
                } else {
                    None
                };
                Ok(Output {
                    result: json!({ "ensemble": e.metadata, "summary": summary }),
                    csv_header: "t,running_sup_q1,running_sup_median,running_sup_q3",
                    csv_rows: rows,
                    status: None,
                    extra,
                })
            }
            Analysis::Verify(spec) => self.verify(spec),
        }
    }

    fn classify(&self, spec: &ClassifySpec, anchors: &[f64]) -> Result<Output> {
        let triplet = &self.scenario.process;
        let measure = &triplet.measure;
        let mut rows = String::new();
        let mut verdicts = Vec::new();
        let mut push = |x: Option<f64>, v: TestVerdict| {
            verdict_rows(&mut rows, x, &v);
            verdicts.push((x, v));
        };
        match *spec {
            ClassifySpec::UpperFunction { epsilon, n, t_max, levels } => {
                for &x in anchors {
                    push(Some(x), upper_function_test(measure, x, epsilon, n, t_max, levels)?);
                }
            }
            ClassifySpec::UpperFunctionPlain { t_max, levels } => {
                for &x in anchors {
                    push(Some(x), upper_function_test_with(measure, x, LogCorrection::None, t_max, levels)?);
                }
            }
            ClassifySpec::LowerTail { v, c, t_max, levels } => {
                push(None, lower_tail_test(measure, |t| v.eval(t), c, t_max, levels)?);
            }
            ClassifySpec::SymbolLiminf { w, t_max, levels } => {
                let env = LowerEnvelope::from_symbol(triplet, self.window(), &default_envelope_grid())?;
                push(None, symbol_liminf_test(|xi| env.eval(xi), |t| w.eval(t), t_max, levels)?);
            }
            ClassifySpec::Integral { integrand, t_max, levels } => {
                push(None, classify_integral_at_zero(|t| Ok(integrand.eval(t)), t_max, levels)?);
            }
        }
        let status = verdicts.iter().map(|(_, v)| verdict_name(v)).collect::<Vec<_>>().join(";");
        let result: Vec<Value> = verdicts.iter().map(|(x, v)| json!({ "x": x, "verdict": v })).collect();
        Ok(Output {
            result: json!({ "verdicts": result }),
            csv_header: "x,level,t,value",
            csv_rows: rows,
            status: Some(status),
            extra: None,
        })
    }

    fn verify(&mut self, spec: &VerifySpec) -> Result<Output> {
        let scenario = self.scenario;
        let triplet = scenario.process.clone();
        let x = scenario.x[0];
        let window = self.window();
        let e = self.ensemble()?;
        let provenance = json!({
            "master_seed": e.metadata.master_seed,
            "spec_hash": e.metadata.spec_hash,
            "grid": e.metadata.grid,
            "paths": e.len(),
        });
        let mut rows = String::new();
        let (result, header, status) = match spec {
            VerifySpec::SupProbability { t, r, direction } => {
                let mut out = Vec::new();
                for &tt in t {
                    for &rr in r {
                        let p = estimate_sup_probability(e, tt, rr, *direction)?;
                        csv_line(&mut rows, &[tt.to_string(), rr.to_string(), p.p_hat.to_string(), p.standard_error.to_string()]);
                        out.push(json!({ "t": tt, "r": rr, "estimate": p }));
                    }
                }
                (json!({ "direction": direction, "estimates": out }), "t,r,p_hat,standard_error", None)
            }
            VerifySpec::MaximalInequality { t, r } => {
                let rep = maximal_inequality_check(e, &triplet.measure, x, t, r)?;
                for row in &rep.rows {
                    csv_line(
                        &mut rows,
                        &[
                            row.t.to_string(),
                            row.r.to_string(),
                            row.p_at_least.p_hat.to_string(),
                            row.p_below.p_hat.to_string(),
                            row.upper_ratio.to_string(),
                            row.lower_product.to_string(),
                        ],
                    );
                }
                let s = status_name(rep.status);
                (serde_json::to_value(&rep)?, "t,r,p_at_least,p_below,upper_ratio,lower_product", Some(s))
            }
            VerifySpec::Decay { r, m_max } => {
                let rep = multi_interval_decay(e, &triplet.measure, x, *r, *m_max)?;
                for (m, q) in rep.q.iter().enumerate() {
                    csv_line(&mut rows, &[(m + 1).to_string(), q.p_hat.to_string(), q.standard_error.to_string()]);
                }
                let s = status_name(rep.status);
                (serde_json::to_value(&rep)?, "m,q,standard_error", Some(s))
            }
            VerifySpec::Spitzer { t } => {
                let pts = spitzer_estimate(e, x, t)?;
                for p in &pts {
                    csv_line(&mut rows, &[p.t.to_string(), p.estimate.p_hat.to_string(), p.estimate.standard_error.to_string()]);
                }
                (json!({ "estimates": pts }), "t,p_hat,standard_error", None)
            }
            VerifySpec::Etemadi { v, c, t } => {
                let rep = etemadi_check(e, |s| v.eval(s), *c, t)?;
                for r in &rep.rows {
                    csv_line(
                        &mut rows,
                        &[
                            r.t.to_string(),
                            r.v.to_string(),
                            r.p_endpoint.p_hat.to_string(),
                            r.p_sup.p_hat.to_string(),
                            r.poisson_lower.to_string(),
                            r.first_holds.to_string(),
                            r.second_holds.to_string(),
                        ],
                    );
                }
                let s = status_name(rep.status);
                (
                    serde_json::to_value(&rep)?,
                    "t,v,p_endpoint,p_sup,poisson_lower,first_holds,second_holds",
                    Some(s),
                )
            }
            VerifySpec::Charfn { xi, t, epsilon } => {
                let family = SymbolFamily::new(triplet.clone(), window)?;
                let rep = empirical_charfn_bound(e, &family, xi, t, *epsilon)?;
                for p in &rep.points {
                    csv_line(
                        &mut rows,
                        &[
                            p.t.to_string(),
                            p.xi.to_string(),
                            p.lambda.re.to_string(),
                            p.lambda.im.to_string(),
                            p.modulus.to_string(),
                            p.bound.to_string(),
                            p.reference.map_or(String::new(), |r| r.to_string()),
                            p.violation.to_string(),
                        ],
                    );
                }
                let s = status_name(rep.status);
                (serde_json::to_value(&rep)?, "t,xi,re,im,modulus,bound,reference,violation", Some(s))
            }
            VerifySpec::Chung { windows, rate_alpha } => {
                let rate_measure = match rate_alpha {
                    Some(a) => LevyMeasureSpec::power_law(Profile::Constant(*a), ScaleSpec::Stable)?,
                    None => triplet.measure.clone(),
                };
                let mut out = Vec::new();
                for &(lo, hi) in windows {
                    let s = chung_statistic(e, &rate_measure, x, lo, hi)?;
                    csv_line(
                        &mut rows,
                        &[
                            lo.to_string(),
                            hi.to_string(),
                            s.summary.q1.to_string(),
                            s.summary.median.to_string(),
                            s.summary.q3.to_string(),
                            s.exit_summary.q1.to_string(),
                            s.exit_summary.median.to_string(),
                            s.exit_summary.q3.to_string(),
                        ],
                    );
                    out.push(json!({
                        "window": [lo, hi],
                        "probes": s.probes,
                        "summary": s.summary,
                        "exit_radii": s.exit_radii,
                        "exit_summary": s.exit_summary,
                    }));
                }
                (
                    json!({ "rate_alpha": rate_alpha, "windows": out }),
                    "t_lo,t_hi,q1,median,q3,exit_q1,exit_median,exit_q3",
                    None,
                )
            }
        };
        Ok(Output {
            result: json!({ "provenance": provenance, "report": result }),
            csv_header: header,
            csv_rows: rows,
            status,
            extra: None,
        })
    }
}

/// Runs the analyses of the selected stages and writes their outputs.
pub fn run_scenario(scenario: &Scenario, stages: &[Stage], options: RunOptions) -> Result<RunSummary> {
    scenario.validate()?;
    let hash = scenario.hash()?;
    let dir = PathBuf::from(&scenario.output_dir);
    fs::create_dir_all(&dir)?;
    let mut order: Vec<(usize, &Analysis)> = scenario
        .analyses
        .iter()
        .enumerate()
        .filter(|(_, a)| stages.contains(&a.stage()))
        .map(|(i, a)| (i + 1, a))
        .collect();
    order.sort_by_key(|(i, a)| (a.stage(), *i));
    let mut ctx = Context {
        scenario,
        hash: hash.clone(),
        ensemble: None,
    };
    let mut records = Vec::new();
    for (index, analysis) in order {
        let out = ctx.run(analysis, index)?;
        let label = analysis.label();
        let json_name = format!("{index:02}-{label}.json");
        let csv_name = format!("{index:02}-{label}.csv");
        let doc = json!({
            "scenario_hash": hash,
            "seed": scenario.seed,
            "analysis": index,
            "kind": label,
            "parameters": analysis,
            "status": out.status,
            "result": out.result,
        });
        write_atomic(&dir.join(&json_name), &pretty(&doc)?)?;
        let mut csv = String::new();
        let _ = writeln!(csv, "# scenario_hash={hash}\n# seed={}", scenario.seed);
        csv.push_str(out.csv_header);
        csv.push('\n');
        csv.push_str(&out.csv_rows);
        write_atomic(&dir.join(&csv_name), csv.as_bytes())?;
        if let Some((name, bytes)) = out.extra {
            write_atomic(&dir.join(name), &bytes)?;
        }
        records.push(AnalysisRecord {
            index,
            kind: label,
            json: json_name,
            csv: csv_name,
            status: out.status,
        });
    }
    let mut report = json!({
        "scenario_hash": hash,
        "seed": scenario.seed,
        "name": scenario.name,
        "stages": stages,
        "analyses": records,
    });
    if !options.canonical {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        report["generated_at_unix"] = json!(now);
    }
    write_atomic(&dir.join("report.json"), &pretty(&report)?)?;
    Ok(RunSummary {
        scenario_hash: hash,
        seed: scenario.seed,
        output_dir: dir,
        analyses: records,
    })
}

fn pretty(v: &Value) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "seed": 1,
        "process": { "measure": { "kind": { "power_law": { "alpha": { "constant": 1.5 } } } } },
        "analyses": [ { "symbol": { "xi": [0.5, 1, 2, 4] } } ]
    }"#;

    #[test]
    fn minimal_scenario_parses() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(s.x, vec![0.0]);
        assert_eq!(s.output_dir, "out");
        assert_eq!(s.analyses[0].stage(), Stage::Symbol);
    }

    #[test]
    fn misspelled_key_names_field_path() {
        let bad = MINIMAL.replace("\"alpha\"", "\"alhpa\"");
        match Scenario::from_json(&bad).unwrap_err() {
            Error::Schema { path, message } => {
                assert!(message.contains("alhpa"), "{message}");
                assert!(path.starts_with("process.measure.kind"), "{path}");
            }
            other => panic!("{other:?}"),
        }
        let no_seed = MINIMAL.replace("\"seed\": 1,", "");
        assert!(matches!(Scenario::from_json(&no_seed), Err(Error::Schema { .. })));
    }

    #[test]
    fn verify_needs_simulation() {
        let s = MINIMAL.replace(
            r#"{ "symbol": { "xi": [0.5, 1, 2, 4] } }"#,
            r#"{ "verify": { "spitzer": { "t": [1.0] } } }"#,
        );
        match Scenario::from_json(&s).unwrap_err() {
            Error::Schema { path, .. } => assert_eq!(path, "simulation"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn time_function() {
        let f = TimeFunction {
            coefficient: 2.0,
            power: 0.5,
            log_power: 1.0,
            loglog_power: 0.0,
        };
        let t: f64 = 1e-2;
        assert!((f.eval(t) - 2.0 * 0.1 * t.ln().abs()).abs() < 1e-14);
    }

    #[test]
    fn overrides_and_hash() {
        let mut s = Scenario::from_json(MINIMAL).unwrap();
        let h0 = s.hash().unwrap();
        s.apply(&Overrides {
            seed: Some(9),
            ..Default::default()
        })
        .unwrap();
        assert_ne!(s.hash().unwrap(), h0);
        let h1 = s.hash().unwrap();
        s.apply(&Overrides {
            output_dir: Some("elsewhere".into()),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(s.hash().unwrap(), h1);
        assert!(s
            .apply(&Overrides {
                paths: Some(10),
                ..Default::default()
            })
            .is_err());
    }

    #[test]
    fn schema_document_is_current() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/scenario.schema.json");
        let mut text = serde_json::to_string_pretty(&scenario_schema()).unwrap();
        text.push('\n');
        if std::env::var_os("UPDATE_SCHEMA").is_some() {
            fs::write(&path, &text).unwrap();
        }
        let on_disk = fs::read_to_string(&path).unwrap_or_default();
        assert_eq!(on_disk, text, "regenerate with UPDATE_SCHEMA=1 cargo test -p levy-lil schema_document");
    }
}
