//! Lévy measures `ν(x, dy)`, Lévy triplets and the integrals built on them:
//! the characteristic exponent / symbol `p(x, ξ)`, the maximal symbol
//! `p^U(x, ξ) = ∫ min(|ξy|², 1) ν(x, dy)` and tail masses `ν(x, {|y| > r})`.
//!
//! Three measure families are supported:
//!
//! * `PowerLaw`: symmetric density `c(x)|y|^{-1-α(x)}`, the stable-like case;
//! * `Atomic`: finitely many point masses (compound Poisson);
//! * `Tabulated`: a density sampled on a `|y|` grid, interpolated log-log and
//!   zero outside the grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::quad::{self, QuadConfig, QuadResult};

pub type ComplexValue = Complex64;

/// Number of full oscillation periods integrated numerically before the
/// asymptotic tail of an oscillatory power-law integral takes over.
const OSCILLATION_PERIODS: f64 = 64.0;
/// Upper bound on half-period panels for oscillatory tabulated integrals.
const MAX_OSCILLATORY_PANELS: f64 = 200_000.0;

fn default_truncation() -> f64 {
    1.0e3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(location: f64, mass: f64) -> Self {
        Self { location, mass }
    }
}

/// How the power-law coefficient `c(x)` is chosen.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScaleSpec {
    /// `c = α(2 − α)/4`, which makes `p^U(x, ξ) = |ξ|^{α(x)}`.
    #[default]
    Canonical,
    /// `c = Γ(1 + α) sin(πα/2)/π`, which makes the exponent exactly `|ξ|^α`
    /// (standard symmetric stable law).
    Stable,
    /// Explicit profile `x ↦ c(x)`.
    Profile(Profile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DensityTable {
    /// Strictly increasing positive `|y|` nodes (normally log-spaced).
    pub radii: Vec<f64>,
    /// Positive density values at the nodes.
    pub density: Vec<f64>,
    /// Symmetric tables describe both half-lines; otherwise the measure lives
    /// on `y > 0` only.
    pub symmetric: bool,
}

impl DensityTable {
    /// Log-log interpolated density at `y > 0`, zero off the grid.
    pub fn density_at(&self, y: f64) -> f64 {
        let r = &self.radii;
        let n = r.len();
        if n == 0 || y < r[0] || y > r[n - 1] {
            return 0.0;
        }
        let i = match r.binary_search_by(|v| v.total_cmp(&y)) {
            Ok(i) => return self.density[i],
            Err(i) => i - 1,
        };
        let (f0, f1) = (self.density[i], self.density[i + 1]);
        let slope = (f1 / f0).ln() / (r[i + 1] / r[i]).ln();
        f0 * (y / r[i]).powf(slope)
    }

    pub(crate) fn sides(&self) -> f64 {
        if self.symmetric {
            2.0
        } else {
            1.0
        }
    }

    pub(crate) fn support(&self) -> (f64, f64) {
        (self.radii[0], self.radii[self.radii.len() - 1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureKind {
    PowerLaw {
        alpha: Profile,
        #[serde(default)]
        scale: ScaleSpec,
    },
    Atomic {
        atoms: Vec<Atom>,
    },
    Tabulated(DensityTable),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct LevyMeasureSpec {
    pub kind: MeasureKind,
    /// Quadrature cutoff for unbounded supports; the remainder is added
    /// analytically for power laws.
    #[serde(default = "default_truncation")]
    pub truncation_radius: f64,
}

/// The measure frozen at one state `x`.
#[derive(Debug, Clone, Copy)]
enum Frozen<'a> {
    PowerLaw { alpha: f64, c: f64, truncation: f64 },
    Atomic(&'a [Atom]),
    Tabulated(&'a DensityTable),
}

/// `c` for which the symmetric power law has exponent exactly `|ξ|^α`.
pub fn stable_scale(alpha: f64) -> f64 {
    statrs::function::gamma::gamma(1.0 + alpha) * (PI * alpha / 2.0).sin() / PI
}

/// `c` for which `p^U(ξ) = |ξ|^α`.
pub fn canonical_scale(alpha: f64) -> f64 {
    alpha * (2.0 - alpha) / 4.0
}

impl LevyMeasureSpec {
    pub fn new(kind: MeasureKind) -> Result<Self> {
        let m = Self {
            kind,
            truncation_radius: default_truncation(),
        };
        m.validate()?;
        Ok(m)
    }

    /// Symmetric power law with builtin index profile.
    pub fn power_law(alpha: Profile, scale: ScaleSpec) -> Result<Self> {
        Self::new(MeasureKind::PowerLaw { alpha, scale })
    }

    /// Power law with constant index and `p^U(ξ) = |ξ|^α`.
    pub fn stable_like_constant(alpha: f64) -> Result<Self> {
        Self::power_law(Profile::Constant(alpha), ScaleSpec::Canonical)
    }

    /// Lévy measure of the standard symmetric α-stable law, `ψ(ξ) = |ξ|^α`.
    pub fn symmetric_stable(alpha: f64) -> Result<Self> {
        Self::power_law(Profile::Constant(alpha), ScaleSpec::Stable)
    }

    pub fn atomic(atoms: Vec<Atom>) -> Result<Self> {
        Self::new(MeasureKind::Atomic { atoms })
    }

    pub fn tabulated(radii: Vec<f64>, density: Vec<f64>, symmetric: bool) -> Result<Self> {
        Self::new(MeasureKind::Tabulated(DensityTable {
            radii,
            density,
            symmetric,
        }))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if !(self.truncation_radius > 0.0 && self.truncation_radius.is_finite()) {
            return bad(format!("truncation_radius must be positive, got {}", self.truncation_radius));
        }
        match &self.kind {
            MeasureKind::PowerLaw { alpha, scale } => {
                if !alpha.is_finite() {
                    return bad("alpha profile is not finite".into());
                }
                let (lo, hi) = alpha.range();
                if !(lo > 0.0 && hi < 2.0) {
                    return bad(format!("alpha range [{lo}, {hi}] is not inside (0, 2)"));
                }
                if let ScaleSpec::Profile(c) = scale {
                    let (clo, _) = c.range();
                    if !(c.is_finite() && clo > 0.0) {
                        return bad("scale profile must be positive and finite".into());
                    }
                }
            }
            MeasureKind::Atomic { atoms } => {
                for a in atoms {
                    if a.location == 0.0 || !a.location.is_finite() {
                        return bad(format!("atom location {} must be finite and nonzero", a.location));
                    }
                    if !(a.mass > 0.0 && a.mass.is_finite()) {
                        return bad(format!("atom mass {} must be positive", a.mass));
                    }
                }
            }
            MeasureKind::Tabulated(t) => {
                if t.radii.len() < 2 || t.radii.len() != t.density.len() {
                    return bad("tabulated density needs at least two (radius, density) pairs".into());
                }
                if !(t.radii[0] > 0.0) || t.radii.windows(2).any(|w| !(w[1] > w[0])) {
                    return bad("tabulated radii must be positive and strictly increasing".into());
                }
                if t.radii.iter().chain(&t.density).any(|v| !v.is_finite())
                    || t.density.iter().any(|&f| !(f > 0.0))
                {
                    return bad("tabulated densities must be positive and finite".into());
                }
            }
        }
        // ∫ min(1, y²) ν(dy) = p^U(x, 1).
        let mass = self.pu(0.0, 1.0)?;
        if !mass.is_finite() {
            return bad("measure does not integrate min(1, y^2)".into());
        }
        Ok(())
    }

    /// Closed range `[α₀, α₁]` of the index for power laws.
    pub fn alpha_range(&self) -> Option<(f64, f64)> {
        match &self.kind {
            MeasureKind::PowerLaw { alpha, .. } => Some(alpha.range()),
            _ => None,
        }
    }

    pub fn alpha_at(&self, x: f64) -> Option<f64> {
        match &self.kind {
            MeasureKind::PowerLaw { alpha, .. } => Some(alpha.value(x)),
            _ => None,
        }
    }

    /// Power-law coefficient `c(x)`.
    pub fn scale_at(&self, x: f64) -> Option<f64> {
        match &self.kind {
            MeasureKind::PowerLaw { alpha, scale } => {
                let a = alpha.value(x);
                Some(match scale {
                    ScaleSpec::Canonical => canonical_scale(a),
                    ScaleSpec::Stable => stable_scale(a),
                    ScaleSpec::Profile(c) => c.value(x),
                })
            }
            _ => None,
        }
    }

    pub fn is_state_independent(&self) -> bool {
        match &self.kind {
            MeasureKind::PowerLaw { alpha, scale } => {
                alpha.is_constant()
                    && match scale {
                        ScaleSpec::Profile(c) => c.is_constant(),
                        _ => true,
                    }
            }
            _ => true,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            MeasureKind::PowerLaw { .. } => true,
            MeasureKind::Tabulated(t) => t.symmetric,
            MeasureKind::Atomic { atoms } => {
                let mut pos: Vec<(f64, f64)> =
                    atoms.iter().filter(|a| a.location > 0.0).map(|a| (a.location, a.mass)).collect();
                let mut neg: Vec<(f64, f64)> =
                    atoms.iter().filter(|a| a.location < 0.0).map(|a| (-a.location, a.mass)).collect();
                pos.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
                neg.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
                pos == neg
            }
        }
    }

    /// Total mass, infinite for power laws.
    pub fn total_mass(&self) -> f64 {
        match &self.kind {
            MeasureKind::PowerLaw { .. } => f64::INFINITY,
            MeasureKind::Atomic { atoms } => atoms.iter().map(|a| a.mass).sum(),
            MeasureKind::Tabulated(t) => {
                let (lo, hi) = t.support();
                t.sides()
                    * quad::integrate_panels(
                        &|y| t.density_at(y),
                        &geometric_points(lo, hi),
                        &QuadConfig::default(),
                    )
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN)
            }
        }
    }

    fn frozen(&self, x: f64) -> Frozen<'_> {
        match &self.kind {
            MeasureKind::PowerLaw { .. } => Frozen::PowerLaw {
                alpha: self.alpha_at(x).unwrap_or(1.0),
                c: self.scale_at(x).unwrap_or(0.0),
                truncation: self.truncation_radius,
            },
            MeasureKind::Atomic { atoms } => Frozen::Atomic(atoms),
            MeasureKind::Tabulated(t) => Frozen::Tabulated(t),
        }
    }

    /// Maximal symbol `p^U(x, ξ)`; closed form `4c/(α(2−α))·|ξ|^α` for power laws.
    pub fn pu(&self, x: f64, xi: f64) -> Result<f64> {
        if xi == 0.0 {
            return Ok(0.0);
        }
        match self.frozen(x) {
            Frozen::PowerLaw { alpha, c, .. } => {
                Ok(4.0 * c / (alpha * (2.0 - alpha)) * xi.abs().powf(alpha))
            }
            _ => self.pu_quadrature(x, xi, &QuadConfig::default()),
        }
    }

    /// `p^U(x, ξ)` by quadrature split at the kink `|y| = 1/|ξ|`, for every
    /// variant (atoms are summed exactly).
    pub fn pu_quadrature(&self, x: f64, xi: f64, cfg: &QuadConfig) -> Result<f64> {
        let xi = xi.abs();
        if xi == 0.0 {
            return Ok(0.0);
        }
        let kernel = |y: f64| (xi * xi * y * y).min(1.0);
        match self.frozen(x) {
            Frozen::Atomic(atoms) => Ok(atoms.iter().map(|a| a.mass * kernel(a.location)).sum()),
            Frozen::Tabulated(t) => {
                let (lo, hi) = t.support();
                let pts = with_breaks(geometric_points(lo, hi), &[1.0 / xi]);
                let r = quad::integrate_panels(&|y| kernel(y) * t.density_at(y), &pts, cfg)?;
                Ok(t.sides() * r.value)
            }
            Frozen::PowerLaw { alpha, c, truncation } => {
                let kink = 1.0 / xi;
                let y_lo = 1e-6 * kink.min(1.0);
                let y_hi = truncation.max(2.0 * y_lo);
                let dens = |y: f64| c * y.powf(-1.0 - alpha);
                let pts = with_breaks(geometric_points(y_lo, y_hi), &[kink, 1.0]);
                let body = quad::integrate_panels(&|y| kernel(y) * dens(y), &pts, cfg)?.value;
                // [0, y_lo]: quadratic regime, exact.
                let head = xi * xi * c * y_lo.powf(2.0 - alpha) / (2.0 - alpha);
                // [y_hi, ∞): exact, split at the kink if it lies beyond the cutoff.
                let tail = if y_hi >= kink {
                    c * y_hi.powf(-alpha) / alpha
                } else {
                    xi * xi * c * (kink.powf(2.0 - alpha) - y_hi.powf(2.0 - alpha)) / (2.0 - alpha)
                        + c * kink.powf(-alpha) / alpha
                };
                Ok(2.0 * (head + body + tail))
            }
        }
    }

    /// Tail mass `ν(x, {|y| > r})`.
    pub fn tail_mass(&self, x: f64, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain {
                what: "tail_mass",
                arg: r,
            });
        }
        match self.frozen(x) {
            Frozen::PowerLaw { alpha, c, .. } => Ok(2.0 * c * r.powf(-alpha) / alpha),
            Frozen::Atomic(atoms) => Ok(atoms.iter().filter(|a| a.location.abs() > r).map(|a| a.mass).sum()),
            Frozen::Tabulated(t) => {
                let (lo, hi) = t.support();
                let start = r.max(lo);
                if start >= hi {
                    return Ok(0.0);
                }
                let r = quad::integrate_panels(
                    &|y| t.density_at(y),
                    &geometric_points(start, hi),
                    &QuadConfig::default(),
                )?;
                Ok(t.sides() * r.value)
            }
        }
    }

    /// `∫_{|y|≤1} y ν(dy)` for finite measures; zero for symmetric ones.
    pub fn small_jump_mean(&self) -> Result<f64> {
        match &self.kind {
            MeasureKind::PowerLaw { .. } => Ok(0.0),
            MeasureKind::Atomic { atoms } => Ok(atoms
                .iter()
                .filter(|a| a.location.abs() <= 1.0)
                .map(|a| a.location * a.mass)
                .sum()),
            MeasureKind::Tabulated(t) => {
                let (lo, hi) = t.support();
                if t.symmetric || lo >= 1.0 {
                    return Ok(0.0);
                }
                let r = quad::integrate_panels(
                    &|y| y * t.density_at(y),
                    &geometric_points(lo, hi.min(1.0)),
                    &QuadConfig::default(),
                )?;
                Ok(r.value)
            }
        }
    }

    /// Jump part of the symbol, `∫ (1 − e^{iξy} + iξy·1_{|y|≤1}) ν(x, dy)`.
    pub fn jump_exponent(&self, x: f64, xi: f64, cfg: &QuadConfig) -> Result<ComplexValue> {
        if xi == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let symmetric = self.is_symmetric();
        match self.frozen(x) {
            Frozen::Atomic(atoms) => {
                let re = atoms.iter().map(|a| a.mass * one_minus_cos(xi * a.location)).sum();
                let im = if symmetric {
                    0.0
                } else {
                    atoms
                        .iter()
                        .map(|a| {
                            let comp = if a.location.abs() <= 1.0 { xi * a.location } else { 0.0 };
                            a.mass * (comp - (xi * a.location).sin())
                        })
                        .sum()
                };
                Ok(Complex64::new(re, im))
            }
            Frozen::PowerLaw { alpha, c, .. } => {
                Ok(Complex64::new(power_law_real_part(alpha, c, xi.abs(), cfg)?, 0.0))
            }
            Frozen::Tabulated(t) => {
                let (lo, hi) = t.support();
                let axi = xi.abs();
                let pts = oscillatory_points(lo, hi, axi)?;
                let re = t.sides()
                    * quad::integrate_panels(&|y| one_minus_cos(axi * y) * t.density_at(y), &pts, cfg)?.value;
                let im = if symmetric {
                    0.0
                } else {
                    quad::integrate_panels(
                        &|y| {
                            let comp = if y <= 1.0 { xi * y } else { 0.0 };
                            (comp - (xi * y).sin()) * t.density_at(y)
                        },
                        &pts,
                        cfg,
                    )?
                    .value
                };
                Ok(Complex64::new(re, im))
            }
        }
    }
}

/// `1 − cos z` without cancellation for small `z`.
fn one_minus_cos(z: f64) -> f64 {
    let s = (0.5 * z).sin();
    2.0 * s * s
}

/// Geometric panel boundaries with ratio at most `e`.
fn geometric_points(lo: f64, hi: f64) -> Vec<f64> {
    let n = ((hi / lo).ln().ceil() as usize).max(1);
    let ratio = (hi / lo).powf(1.0 / n as f64);
    let mut pts: Vec<f64> = (0..n).map(|i| lo * ratio.powi(i as i32)).collect();
    pts.push(hi);
    pts
}

/// Inserts interior breakpoints.
fn with_breaks(mut pts: Vec<f64>, breaks: &[f64]) -> Vec<f64> {
    let (lo, hi) = (pts[0], pts[pts.len() - 1]);
    for &b in breaks {
        if b > lo && b < hi {
            pts.push(b);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Geometric panels up to `1/ξ`, then half-period panels for the
/// oscillatory region, with a breakpoint at `|y| = 1`.
fn oscillatory_points(lo: f64, hi: f64, xi: f64) -> Result<Vec<f64>> {
    let kink = 1.0 / xi;
    let mut pts = if kink > lo { geometric_points(lo, kink.min(hi)) } else { vec![lo] };
    let start = *pts.last().unwrap_or(&lo);
    if hi > start {
        let step = PI / xi;
        let count = ((hi - start) / step).ceil();
        if count > MAX_OSCILLATORY_PANELS {
            return Err(Error::QuadratureFailure {
                estimate: f64::NAN,
                error: f64::INFINITY,
                evaluations: 0,
            });
        }
        for k in 1..count as usize {
            pts.push(start + k as f64 * step);
        }
        pts.push(hi);
    }
    Ok(with_breaks(pts, &[1.0]))
}

/// One-sided `∫₀^∞ (1 − cos ξy) c y^{-1-α} dy`, doubled. Quadrature over
/// `[10⁻³/ξ, 1/ξ + 64 periods]`, series below, two-term asymptotic expansion
/// of the cosine integral above.
fn power_law_real_part(alpha: f64, c: f64, xi: f64, cfg: &QuadConfig) -> Result<f64> {
    let y_lo = 1e-3 / xi;
    let y_cut = 1.0 / xi + OSCILLATION_PERIODS * 2.0 * PI / xi;
    let dens = |y: f64| c * y.powf(-1.0 - alpha);
    let pts = oscillatory_points(y_lo, y_cut, xi)?;
    let body: QuadResult = quad::integrate_panels(&|y| one_minus_cos(xi * y) * dens(y), &pts, cfg)?;
    let head = c * xi * xi * y_lo.powf(2.0 - alpha) / (2.0 * (2.0 - alpha))
        - c * xi.powi(4) * y_lo.powf(4.0 - alpha) / (24.0 * (4.0 - alpha));
    let s = 1.0 + alpha;
    let cos_tail = -y_cut.powf(-s) * (xi * y_cut).sin() / xi
        + s * y_cut.powf(-s - 1.0) * (xi * y_cut).cos() / (xi * xi);
    let tail = c * y_cut.powf(-alpha) / alpha - c * cos_tail;
    Ok(2.0 * (head + body.value + tail))
}

/// Lévy triplet `(l(x), σ²(x), ν(x, dy))` of a pure-jump symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct LevyTriplet {
    #[serde(default)]
    pub drift: Profile,
    /// Must be zero: symbols with a diffusion part are not supported.
    #[serde(default)]
    pub gaussian_variance: f64,
    pub measure: LevyMeasureSpec,
}

impl LevyTriplet {
    pub fn new(drift: Profile, measure: LevyMeasureSpec) -> Result<Self> {
        let t = Self {
            drift,
            gaussian_variance: 0.0,
            measure,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn pure_jump(measure: LevyMeasureSpec) -> Self {
        Self {
            drift: Profile::Constant(0.0),
            gaussian_variance: 0.0,
            measure,
        }
    }

    /// Compound Poisson process with exponent `Σ m(1 − e^{iξy})`: the drift
    /// cancels the compensator of atoms with `|y| ≤ 1`.
    pub fn compound_poisson(atoms: Vec<Atom>) -> Result<Self> {
        Self::uncompensated(LevyMeasureSpec::atomic(atoms)?)
    }

    /// Finite measure without compensation: `X_t` is the plain sum of jumps.
    pub fn uncompensated(measure: LevyMeasureSpec) -> Result<Self> {
        if !measure.total_mass().is_finite() {
            return Err(Error::InvalidSpec("uncompensated triplets need a finite Lévy measure".into()));
        }
        let l = -measure.small_jump_mean()?;
        Self::new(Profile::Constant(l), measure)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gaussian_variance != 0.0 {
            return Err(Error::InvalidSpec(format!(
                "gaussian variance must be 0, got {}",
                self.gaussian_variance
            )));
        }
        if !self.drift.is_finite() {
            return Err(Error::InvalidSpec("drift profile is not finite".into()));
        }
        self.measure.validate()
    }

    /// Constant coefficients: the triplet describes a Lévy process.
    pub fn is_levy(&self) -> bool {
        self.drift.is_constant() && self.measure.is_state_independent()
    }

    pub fn is_symmetric(&self) -> bool {
        self.measure.is_symmetric() && self.drift.range() == (0.0, 0.0)
    }

    /// `p(x, ξ) = i l(x) ξ + ∫ (1 − e^{iξy} + iξy·1_{|y|≤1}) ν(x, dy)`.
    pub fn exponent(&self, x: f64, xi: f64, cfg: &QuadConfig) -> Result<ComplexValue> {
        if xi == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let jump = self.measure.jump_exponent(x, xi, cfg)?;
        Ok(Complex64::new(jump.re.max(0.0), jump.im + self.drift.value(x) * xi))
    }
}

/// Characteristic exponent / symbol `p(x, ξ)` with default quadrature settings.
pub fn eval_exponent(triplet: &LevyTriplet, x: f64, xi: f64) -> Result<ComplexValue> {
    triplet.exponent(x, xi, &QuadConfig::default())
}

/// Maximal symbol `p^U(x, ξ)`.
pub fn eval_pu(measure: &LevyMeasureSpec, x: f64, xi: f64) -> Result<f64> {
    measure.pu(x, xi)
}

/// `ν(x, {|y| > r})`.
pub fn tail_mass(measure: &LevyMeasureSpec, x: f64, r: f64) -> Result<f64> {
    measure.tail_mass(x, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_pair() -> LevyMeasureSpec {
        LevyMeasureSpec::atomic(vec![Atom::new(1.0, 1.0), Atom::new(-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn atomic_exponent_at_pi() {
        let t = LevyTriplet::pure_jump(unit_pair());
        let p = eval_exponent(&t, 0.0, PI).unwrap();
        assert!((p.re - 4.0).abs() < 1e-15);
        assert_eq!(p.im, 0.0);
    }

    #[test]
    fn exponent_vanishes_at_origin() {
        let t = LevyTriplet::new(Profile::Constant(0.3), LevyMeasureSpec::stable_like_constant(1.3).unwrap()).unwrap();
        assert_eq!(eval_exponent(&t, 0.2, 0.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn power_law_exponent_scales() {
        let t = LevyTriplet::pure_jump(LevyMeasureSpec::stable_like_constant(1.5).unwrap());
        let p1 = eval_exponent(&t, 0.0, 1.0).unwrap();
        let p2 = eval_exponent(&t, 0.0, 2.0).unwrap();
        assert!((p2.re / p1.re - 2f64.powf(1.5)).abs() < 1e-7);
        assert_eq!(p1.im, 0.0);
    }

    #[test]
    fn stable_scale_gives_unit_exponent() {
        for &a in &[0.5, 1.0, 1.5, 1.9] {
            let t = LevyTriplet::pure_jump(LevyMeasureSpec::symmetric_stable(a).unwrap());
            for &xi in &[0.3, 1.0, 7.0] {
                let p = eval_exponent(&t, 0.0, xi).unwrap();
                let want = xi.powf(a);
                assert!((p.re / want - 1.0).abs() < 1e-7, "alpha={a} xi={xi}: {} vs {want}", p.re);
            }
        }
    }

    #[test]
    fn pu_examples() {
        let m = LevyMeasureSpec::stable_like_constant(1.5).unwrap();
        assert!((eval_pu(&m, 0.0, 2.0).unwrap() - 2.0f64.powf(1.5)).abs() < 1e-14);
        assert_eq!(eval_pu(&m, 0.0, 0.0).unwrap(), 0.0);
        assert!((eval_pu(&unit_pair(), 0.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tail_mass_examples() {
        let m = LevyMeasureSpec::power_law(Profile::Constant(1.0), ScaleSpec::Profile(Profile::Constant(0.25))).unwrap();
        assert!((tail_mass(&m, 0.0, 2.0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(tail_mass(&unit_pair(), 0.0, 1.5).unwrap(), 0.0);
        assert_eq!(tail_mass(&unit_pair(), 0.0, 0.5).unwrap(), 2.0);
        assert!(tail_mass(&unit_pair(), 0.0, 0.0).is_err());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(LevyMeasureSpec::atomic(vec![Atom::new(0.0, 1.0)]).is_err());
        assert!(LevyMeasureSpec::atomic(vec![Atom::new(1.0, -1.0)]).is_err());
        assert!(LevyMeasureSpec::stable_like_constant(2.0).is_err());
        assert!(LevyMeasureSpec::tabulated(vec![1.0, 0.5], vec![1.0, 1.0], true).is_err());
        let mut t = LevyTriplet::pure_jump(unit_pair());
        t.gaussian_variance = 0.5;
        assert!(t.validate().is_err());
    }

    #[test]
    fn tabulated_power_law_matches_closed_form_inside_support() {
        // c y^{-2.5} on [1e-3, 1e2], symmetric: log-log interpolation is exact.
        let radii: Vec<f64> = (0..=50).map(|i| 1e-3 * 10f64.powf(i as f64 / 10.0)).collect();
        let dens: Vec<f64> = radii.iter().map(|y| 0.2 * y.powf(-2.5)).collect();
        let m = LevyMeasureSpec::tabulated(radii, dens, true).unwrap();
        let want_tail = 2.0 * 0.2 * (0.5f64.powf(-1.5) - 100f64.powf(-1.5)) / 1.5;
        assert!((m.tail_mass(0.0, 0.5).unwrap() / want_tail - 1.0).abs() < 1e-8);
        // p^U at xi = 2: kink at 0.5.
        let a: f64 = 1.5;
        let inner = 4.0 * 0.2 * (0.5f64.powf(2.0 - a) - 1e-3f64.powf(2.0 - a)) / (2.0 - a);
        let outer = 0.2 * (0.5f64.powf(-a) - 100f64.powf(-a)) / a;
        let want = 2.0 * (inner + outer);
        assert!((m.pu(0.0, 2.0).unwrap() / want - 1.0).abs() < 1e-8);
    }

    #[test]
    fn compensated_single_atom_symbol() {
        let m = LevyMeasureSpec::atomic(vec![Atom::new(1.0, 1.0)]).unwrap();
        let t = LevyTriplet::pure_jump(m);
        let xi = 2.3;
        let p = eval_exponent(&t, 0.0, xi).unwrap();
        assert!((p.re - (1.0 - xi.cos())).abs() < 1e-14);
        assert!((p.im - (xi - xi.sin())).abs() < 1e-14);
        let cp = LevyTriplet::compound_poisson(vec![Atom::new(1.0, 1.0)]).unwrap();
        let q = eval_exponent(&cp, 0.0, xi).unwrap();
        assert!((q.im + xi.sin()).abs() < 1e-14);
    }
}
