//! Path simulation for pure-jump Lévy and stable-like processes.
//!
//! * constant-coefficient power laws: exact stable increments;
//! * atomic and tabulated measures: compound Poisson with exact jump epochs;
//! * state-dependent power laws: frozen-coefficient Euler steps
//!   `X += −l(X)h + (κ(X)h)^{1/α(X)}·S`, `S` standard symmetric `α(X)`-stable.
//!
//! Each path draws from its own ChaCha8 stream (`seed = master seed`,
//! `stream = path index`), so ensembles are reproducible bit for bit and
//! independent of scheduling.

use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::measure::{stable_scale, DensityTable, LevyTriplet, MeasureKind};

const MAX_POINTS: usize = 1 << 32;
const MAX_SUBSTEPS: f64 = 1e12;
const CDF_SUBDIVISIONS: usize = 32;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "stable index in (0, 2)", arg: alpha })
    }
}

/// Chambers–Mallows–Stuck draw with `E e^{iξS} = e^{−|ξ|^α}`.
pub fn sample_symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(cms(alpha, rng))
}

#[inline]
fn cms<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let mut u: f64 = rng.random();
    while u == 0.0 {
        u = rng.random();
    }
    let v = PI * (u - 0.5);
    if alpha == 1.0 {
        return v.tan();
    }
    let w: f64 = rng.sample(Exp1);
    let inv = 1.0 / alpha;
    (alpha * v).sin() / v.cos().powf(inv) * ((v * (1.0 - alpha)).cos() / w).powf((1.0 - alpha) * inv)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GridLayout {
    /// `steps` equal steps; `steps` must be a power of two.
    Uniform { steps: usize },
    /// `points_per_level` log-spaced points per octave on `[t_max 2^{-levels}, t_max]`.
    Geometric { levels: usize, points_per_level: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PathGrid {
    pub t_max: f64,
    pub layout: GridLayout,
}

impl PathGrid {
    pub fn uniform(t_max: f64, steps: usize) -> Result<Self> {
        let g = Self {
            t_max,
            layout: GridLayout::Uniform { steps },
        };
        g.validate()?;
        Ok(g)
    }

    pub fn geometric(t_max: f64, levels: usize, points_per_level: usize) -> Result<Self> {
        let g = Self {
            t_max,
            layout: GridLayout::Geometric { levels, points_per_level },
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidSpec(format!("grid t_max must be positive, got {}", self.t_max)));
        }
        match self.layout {
            GridLayout::Uniform { steps } => {
                if steps == 0 || !steps.is_power_of_two() {
                    return Err(Error::InvalidSpec(format!("uniform steps must be a power of two, got {steps}")));
                }
                if steps > MAX_POINTS {
                    return Err(Error::Precondition(format!("step count overflow: {steps}")));
                }
            }
            GridLayout::Geometric { levels, points_per_level } => {
                if levels == 0 || points_per_level == 0 || levels > 1000 {
                    return Err(Error::InvalidSpec("geometric grid needs 1..=1000 levels and points per level".into()));
                }
                if levels.checked_mul(points_per_level).is_none_or(|n| n >= MAX_POINTS) {
                    return Err(Error::Precondition("step count overflow".into()));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        match self.layout {
            GridLayout::Uniform { steps } => steps,
            GridLayout::Geometric { levels, points_per_level } => levels * points_per_level + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn times(&self) -> Vec<f64> {
        match self.layout {
            GridLayout::Uniform { steps } => {
                let h = self.t_max / steps as f64;
                (1..=steps).map(|k| if k == steps { self.t_max } else { h * k as f64 }).collect()
            }
            GridLayout::Geometric { levels, points_per_level } => {
                let n = levels * points_per_level;
                (0..=n)
                    .map(|i| {
                        if i == n {
                            self.t_max
                        } else {
                            let e = -((n - i) as f64) / points_per_level as f64;
                            self.t_max * e.exp2()
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Which grid points are stored; the running supremum always covers every step.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum RecordPolicy {
    #[default]
    All,
    /// Every `k`-th grid point counted back from `t_max` (times `k·h, 2k·h, …`
    /// on a uniform grid with `k | steps`).
    Every(usize),
    Indices(Vec<usize>),
}

impl RecordPolicy {
    fn indices(&self, n: usize) -> Result<Vec<usize>> {
        let idx: Vec<usize> = match self {
            RecordPolicy::All => (0..n).collect(),
            RecordPolicy::Every(k) => {
                if *k == 0 {
                    return Err(Error::InvalidSpec("record every 0 steps".into()));
                }
                every_from_end(n, *k)
            }
            RecordPolicy::Indices(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                if v.last().is_some_and(|&i| i >= n) {
                    return Err(Error::InvalidSpec(format!("recorded index beyond grid of {n} points")));
                }
                v
            }
        };
        if idx.is_empty() {
            return Err(Error::InvalidSpec("record policy selects no grid point".into()));
        }
        Ok(idx)
    }
}

/// Indices `i < n` with `(n − 1 − i) mod k = 0`, increasing.
fn every_from_end(n: usize, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).rev().step_by(k).collect();
    v.reverse();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Exact where available, frozen coefficients otherwise.
    #[default]
    Auto,
    Exact,
    FrozenCoefficient,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default)]
    pub scheme: Scheme,
    /// Target spatial resolution `δ`: frozen-coefficient steps are split
    /// until `h ≤ δ^{α₁}`.
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub record: RecordPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedTag {
    pub master_seed: u64,
    pub path_index: u64,
}

impl SeedTag {
    fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.path_index);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub x0: f64,
    /// Recorded times, shared across an ensemble.
    #[serde(skip)]
    pub times: Arc<Vec<f64>>,
    pub positions: Vec<f64>,
    /// `sup_{s ≤ t}|X_s − x₀|` over all simulated points up to each recorded time.
    pub running_sup: Vec<f64>,
    pub seed_tag: SeedTag,
}

impl PathSample {
    /// Keeps every `factor`-th recorded point counted back from the last one
    /// and recomputes the running supremum from the retained positions only.
    pub fn coarsen(&self, factor: usize) -> PathSample {
        let keep = every_from_end(self.positions.len(), factor.max(1));
        let positions: Vec<f64> = keep.iter().map(|&i| self.positions[i]).collect();
        let mut sup = 0.0f64;
        let running_sup = positions
            .iter()
            .map(|p| {
                sup = sup.max((p - self.x0).abs());
                sup
            })
            .collect();
        PathSample {
            x0: self.x0,
            times: Arc::new(keep.iter().map(|&i| self.times[i]).collect()),
            positions,
            running_sup,
            seed_tag: self.seed_tag,
        }
    }
}

/// First recorded time with `running_sup ≥ a`, per radius.
pub fn path_statistics(sample: &PathSample, radii: &[f64]) -> Vec<Option<f64>> {
    radii
        .iter()
        .map(|&a| {
            let k = sample.running_sup.partition_point(|&s| s < a);
            sample.times.get(k).copied()
        })
        .collect()
}

enum Jumps {
    Atoms { cumulative: Vec<f64>, locations: Vec<f64> },
    Table { cumulative: Vec<f64>, radii: Vec<f64>, symmetric: bool },
}

impl Jumps {
    fn rate(&self) -> f64 {
        match self {
            Jumps::Atoms { cumulative, .. } | Jumps::Table { cumulative, .. } => *cumulative.last().unwrap_or(&0.0),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Jumps::Atoms { cumulative, locations } => {
                let u = rng.random::<f64>() * self.rate();
                let k = cumulative.partition_point(|&c| c <= u).min(locations.len() - 1);
                locations[k]
            }
            Jumps::Table {
                cumulative,
                radii,
                symmetric,
            } => {
                let u = rng.random::<f64>() * self.rate();
                let k = cumulative.partition_point(|&c| c <= u).clamp(1, radii.len() - 1);
                let (c0, c1) = (cumulative[k - 1], cumulative[k]);
                let w = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
                let y = radii[k - 1] + w * (radii[k] - radii[k - 1]);
                if *symmetric && rng.random::<bool>() {
                    -y
                } else {
                    y
                }
            }
        }
    }
}

/// Trapezoid CDF of `|y|` on a refined log grid.
fn density_cdf(t: &DensityTable) -> (Vec<f64>, Vec<f64>) {
    let mut radii = vec![t.radii[0]];
    for w in t.radii.windows(2) {
        let ratio = (w[1] / w[0]).powf(1.0 / CDF_SUBDIVISIONS as f64);
        for j in 1..=CDF_SUBDIVISIONS {
            radii.push(if j == CDF_SUBDIVISIONS { w[1] } else { w[0] * ratio.powi(j as i32) });
        }
    }
    let sides = t.sides();
    let mut cumulative = vec![0.0];
    for w in radii.windows(2) {
        let (f0, f1) = (t.density_at(w[0]), t.density_at(w[1]));
        cumulative.push(cumulative.last().unwrap() + sides * 0.5 * (f0 + f1) * (w[1] - w[0]));
    }
    (cumulative, radii)
}

enum Stepper {
    Stable {
        drift: f64,
        alpha: f64,
        kappa: f64,
    },
    Frozen {
        triplet: LevyTriplet,
        max_h: Option<f64>,
    },
    Poisson {
        triplet: LevyTriplet,
        /// `∫_{|y|≤1} y ν(dy)`, added to the drift.
        compensator: f64,
        jumps: Jumps,
    },
}

#[derive(Clone, Copy)]
struct State {
    x: f64,
    sup: f64,
    next_jump: f64,
    cached_h: f64,
    cached_scale: f64,
}

impl Stepper {
    fn new(triplet: &LevyTriplet, config: &SimulationConfig) -> Result<Self> {
        triplet.validate()?;
        let m = &triplet.measure;
        match &m.kind {
            MeasureKind::PowerLaw { .. } => {
                let exact = triplet.is_levy();
                match (config.scheme, exact) {
                    (Scheme::Exact, false) => Err(Error::Precondition(
                        "exact simulation needs constant coefficients; use the frozen-coefficient scheme".into(),
                    )),
                    (Scheme::Exact | Scheme::Auto, true) => {
                        let alpha = m.alpha_at(0.0).expect("power law");
                        Ok(Stepper::Stable {
                            drift: triplet.drift.value(0.0),
                            alpha,
                            kappa: m.scale_at(0.0).expect("power law") / stable_scale(alpha),
                        })
                    }
                    _ => {
                        let max_h = match config.resolution {
                            Some(r) if r > 0.0 => Some(r.powf(m.alpha_range().expect("power law").1)),
                            Some(r) => return Err(Error::InvalidSpec(format!("resolution must be positive, got {r}"))),
                            None => None,
                        };
                        Ok(Stepper::Frozen {
                            triplet: triplet.clone(),
                            max_h,
                        })
                    }
                }
            }
            MeasureKind::Atomic { atoms } => {
                if config.scheme == Scheme::FrozenCoefficient {
                    return Err(Error::Precondition("frozen-coefficient scheme applies to power laws only".into()));
                }
                let mut cumulative = Vec::with_capacity(atoms.len());
                let mut acc = 0.0;
                for a in atoms {
                    acc += a.mass;
                    cumulative.push(acc);
                }
                Ok(Stepper::Poisson {
                    triplet: triplet.clone(),
                    compensator: m.small_jump_mean()?,
                    jumps: Jumps::Atoms {
                        cumulative,
                        locations: atoms.iter().map(|a| a.location).collect(),
                    },
                })
            }
            MeasureKind::Tabulated(t) => {
                if config.scheme == Scheme::FrozenCoefficient {
                    return Err(Error::Precondition("frozen-coefficient scheme applies to power laws only".into()));
                }
                let (cumulative, radii) = density_cdf(t);
                Ok(Stepper::Poisson {
                    triplet: triplet.clone(),
                    compensator: m.small_jump_mean()?,
                    jumps: Jumps::Table {
                        cumulative,
                        radii,
                        symmetric: t.symmetric,
                    },
                })
            }
        }
    }

    fn start<R: Rng + ?Sized>(&self, x0: f64, rng: &mut R) -> State {
        let next_jump = match self {
            Stepper::Poisson { jumps, .. } if jumps.rate() > 0.0 => rng.sample::<f64, _>(Exp1) / jumps.rate(),
            _ => f64::INFINITY,
        };
        State {
            x: x0,
            sup: 0.0,
            next_jump,
            cached_h: f64::NAN,
            cached_scale: 0.0,
        }
    }

    #[inline]
    fn advance<R: Rng + ?Sized>(&self, s: &mut State, x0: f64, t0: f64, t1: f64, rng: &mut R) {
        let h = t1 - t0;
        match self {
            Stepper::Stable { drift, alpha, kappa } => {
                if h != s.cached_h {
                    s.cached_h = h;
                    s.cached_scale = (kappa * h).powf(1.0 / alpha);
                }
                s.x += -drift * h + s.cached_scale * cms(*alpha, rng);
                s.sup = s.sup.max((s.x - x0).abs());
            }
            Stepper::Frozen { triplet, max_h } => {
                let n = max_h.map_or(1.0, |m| (h / m).ceil().max(1.0));
                let hs = h / n;
                let m = &triplet.measure;
                for _ in 0..n as u64 {
                    let alpha = m.alpha_at(s.x).expect("power law");
                    let kappa = m.scale_at(s.x).expect("power law") / stable_scale(alpha);
                    s.x += -triplet.drift.value(s.x) * hs + (kappa * hs).powf(1.0 / alpha) * cms(alpha, rng);
                    s.sup = s.sup.max((s.x - x0).abs());
                }
            }
            Stepper::Poisson {
                triplet,
                compensator,
                jumps,
            } => {
                let rate = jumps.rate();
                let mut t = t0;
                while s.next_jump <= t1 {
                    let dt = s.next_jump - t;
                    s.x -= (triplet.drift.value(s.x) + compensator) * dt;
                    s.sup = s.sup.max((s.x - x0).abs());
                    s.x += jumps.sample(rng);
                    s.sup = s.sup.max((s.x - x0).abs());
                    t = s.next_jump;
                    s.next_jump += rng.sample::<f64, _>(Exp1) / rate;
                }
                s.x -= (triplet.drift.value(s.x) + compensator) * (t1 - t);
                s.sup = s.sup.max((s.x - x0).abs());
            }
        }
    }

    fn run(&self, x0: f64, grid_times: &[f64], record: &[usize], recorded: &Arc<Vec<f64>>, tag: SeedTag) -> PathSample {
        let mut rng = tag.rng();
        let mut s = self.start(x0, &mut rng);
        let mut positions = Vec::with_capacity(record.len());
        let mut running_sup = Vec::with_capacity(record.len());
        let mut next = record.iter().peekable();
        let mut t0 = 0.0;
        for (i, &t1) in grid_times.iter().enumerate() {
            self.advance(&mut s, x0, t0, t1, &mut rng);
            if next.peek() == Some(&&i) {
                next.next();
                positions.push(s.x);
                running_sup.push(s.sup);
            }
            t0 = t1;
        }
        PathSample {
            x0,
            times: Arc::clone(recorded),
            positions,
            running_sup,
            seed_tag: tag,
        }
    }
}

fn check_substeps(stepper: &Stepper, grid: &PathGrid, times: &[f64]) -> Result<()> {
    if let Stepper::Frozen { max_h: Some(m), .. } = stepper {
        let first = times[0];
        let total = grid.t_max / m + times.len() as f64 + first / m;
        if total > MAX_SUBSTEPS {
            return Err(Error::Precondition(format!("step count overflow: about {total:.3e} substeps per path")));
        }
    }
    Ok(())
}

struct Prepared {
    stepper: Stepper,
    times: Vec<f64>,
    record: Vec<usize>,
    recorded: Arc<Vec<f64>>,
}

fn prepare(triplet: &LevyTriplet, x0: f64, grid: &PathGrid, config: &SimulationConfig) -> Result<Prepared> {
    if !x0.is_finite() {
        return Err(Error::InvalidSpec(format!("start point must be finite, got {x0}")));
    }
    grid.validate()?;
    let stepper = Stepper::new(triplet, config)?;
    let times = grid.times();
    check_substeps(&stepper, grid, &times)?;
    let record = config.record.indices(times.len())?;
    let recorded = Arc::new(record.iter().map(|&i| times[i]).collect());
    Ok(Prepared {
        stepper,
        times,
        record,
        recorded,
    })
}

/// Simulates one path; deterministic in `seed_tag`.
pub fn simulate_path(
    triplet: &LevyTriplet,
    x0: f64,
    grid: &PathGrid,
    config: &SimulationConfig,
    seed_tag: SeedTag,
) -> Result<PathSample> {
    let p = prepare(triplet, x0, grid, config)?;
    Ok(p.stepper.run(x0, &p.times, &p.record, &p.recorded, seed_tag))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMetadata {
    pub process: LevyTriplet,
    pub x0: f64,
    pub grid: PathGrid,
    pub config: SimulationConfig,
    pub master_seed: u64,
    pub n_paths: usize,
    /// SHA-256 of the canonical JSON of process, start point, grid and config.
    pub spec_hash: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub metadata: EnsembleMetadata,
    pub times: Arc<Vec<f64>>,
    pub paths: Vec<PathSample>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn spec_hash(triplet: &LevyTriplet, x0: f64, grid: &PathGrid, config: &SimulationConfig) -> Result<String> {
    let v = serde_json::json!({ "process": triplet, "x0": x0, "grid": grid, "config": config });
    Ok(sha256_hex(&serde_json::to_vec(&v)?))
}

/// Generates `n_paths` paths in parallel; path `i` uses stream `i` of `master_seed`.
pub fn simulate_ensemble(
    triplet: &LevyTriplet,
    x0: f64,
    grid: &PathGrid,
    config: &SimulationConfig,
    master_seed: u64,
    n_paths: usize,
) -> Result<PathEnsemble> {
    if n_paths == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let p = prepare(triplet, x0, grid, config)?;
    let paths: Vec<PathSample> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            p.stepper.run(
                x0,
                &p.times,
                &p.record,
                &p.recorded,
                SeedTag {
                    master_seed,
                    path_index: i,
                },
            )
        })
        .collect();
    Ok(PathEnsemble {
        metadata: EnsembleMetadata {
            process: triplet.clone(),
            x0,
            grid: grid.clone(),
            config: config.clone(),
            master_seed,
            n_paths,
            spec_hash: spec_hash(triplet, x0, grid, config)?,
        },
        times: p.recorded,
        paths,
    })
}

#[derive(Serialize, Deserialize)]
struct JsonlHeader {
    metadata: EnsembleMetadata,
    times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scenario_hash: Option<String>,
}

impl PathEnsemble {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Index of the recorded time matching `t` to relative precision `1e-9`.
    pub fn time_index(&self, t: f64) -> Result<usize> {
        let k = self.times.partition_point(|&s| s < t * (1.0 - 1e-9));
        match self.times.get(k) {
            Some(&s) if (s - t).abs() <= 1e-9 * t.abs() => Ok(k),
            _ => Err(Error::TimeNotOnGrid(t)),
        }
    }

    /// Nested coarse grid keeping every `factor`-th grid point counted back
    /// from `t_max`; running suprema are recomputed from the kept points.
    /// Requires a fully recorded ensemble whose layout divides by `factor`.
    pub fn coarsen(&self, factor: usize) -> Result<PathEnsemble> {
        if self.metadata.config.record != RecordPolicy::All {
            return Err(Error::Precondition("grid coarsening needs a fully recorded ensemble".into()));
        }
        let grid = &self.metadata.grid;
        let layout = match grid.layout {
            GridLayout::Uniform { steps } if factor > 0 && steps % factor == 0 => GridLayout::Uniform { steps: steps / factor },
            GridLayout::Geometric { levels, points_per_level } if factor > 0 && points_per_level % factor == 0 => {
                GridLayout::Geometric {
                    levels,
                    points_per_level: points_per_level / factor,
                }
            }
            _ => return Err(Error::Precondition(format!("grid does not coarsen by factor {factor}"))),
        };
        let paths: Vec<PathSample> = self.paths.iter().map(|p| p.coarsen(factor)).collect();
        let times = paths.first().map_or_else(|| Arc::new(Vec::new()), |p| Arc::clone(&p.times));
        let paths = paths
            .into_iter()
            .map(|mut p| {
                p.times = Arc::clone(&times);
                p
            })
            .collect();
        let mut metadata = self.metadata.clone();
        metadata.grid = PathGrid { t_max: grid.t_max, layout };
        metadata.spec_hash = spec_hash(&metadata.process, metadata.x0, &metadata.grid, &metadata.config)?;
        Ok(PathEnsemble { metadata, times, paths })
    }

    /// The Lévy case: constant drift and state-independent measure.
    pub fn is_levy(&self) -> bool {
        self.metadata.process.is_levy()
    }

    /// One header line (metadata, times, optional scenario hash), then one
    /// line per path.
    pub fn write_jsonl<W: Write>(&self, mut out: W, scenario_hash: Option<&str>) -> Result<()> {
        let header = JsonlHeader {
            metadata: self.metadata.clone(),
            times: self.times.to_vec(),
            scenario_hash: scenario_hash.map(str::to_owned),
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for p in &self.paths {
            serde_json::to_writer(&mut out, p)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header: JsonlHeader = match lines.next() {
            Some(line) => serde_json::from_str(&line?)?,
            None => return Err(Error::EmptyEnsemble),
        };
        let times = Arc::new(header.times);
        let mut paths = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut p: PathSample = serde_json::from_str(&line)?;
            if p.positions.len() != times.len() || p.running_sup.len() != times.len() {
                return Err(Error::Serde(format!("path {} does not match the time grid", p.seed_tag.path_index)));
            }
            p.times = Arc::clone(&times);
            paths.push(p);
        }
        if paths.len() != header.metadata.n_paths {
            return Err(Error::Serde(format!(
                "expected {} paths, found {}",
                header.metadata.n_paths,
                paths.len()
            )));
        }
        Ok(Self {
            metadata: header.metadata,
            times,
            paths,
        })
    }

    /// CSV for one path: `#` metadata lines, then `t,position,running_sup`.
    pub fn path_csv(&self, index: usize) -> Option<String> {
        let p = self.paths.get(index)?;
        let mut out = format!(
            "# spec_hash={}\n# master_seed={}\n# path_index={}\nt,position,running_sup\n",
            self.metadata.spec_hash, p.seed_tag.master_seed, p.seed_tag.path_index
        );
        for ((t, x), s) in self.times.iter().zip(&p.positions).zip(&p.running_sup) {
            out.push_str(&format!("{t:e},{x:e},{s:e}\n"));
        }
        Some(out)
    }
}
