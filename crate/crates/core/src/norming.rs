//! Norming functions built from the maximal symbol:
//!
//! * `u(x, R) = 1 / inf_{|y−x| ≤ 3R} p^U(y, 1/R)` and its generalized
//!   inverse `u⁻¹(x, ρ) = inf{r : u(x, r) ≥ ρ}`;
//! * the Chung rate `u⁻¹(x, t / log|log t|)`;
//! * upper functions `v(x, t) = 1/χ(x, 1/(t·ℓ_{ε,n}(t)))` with `χ(x, ·)` the
//!   inverse of `ξ ↦ p^U(x, ξ)`;
//! * the regularity ratio `κ(x)`.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{LevyMeasureSpec, MeasureKind};

const BALL_GRID: usize = 257;
const GOLDEN_TOL: f64 = 1e-12;
const INVERSE_SCAN_START: f64 = 1e-12;
const INVERSE_REL_WIDTH: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Inf,
    Sup,
}

/// Ball radius as a multiple of `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadiusMultiple {
    Two,
    Three,
    Six,
}

impl RadiusMultiple {
    pub fn factor(self) -> f64 {
        match self {
            RadiusMultiple::Two => 2.0,
            RadiusMultiple::Three => 3.0,
            RadiusMultiple::Six => 6.0,
        }
    }
}

fn better(mode: Extremum, a: f64, b: f64) -> bool {
    match mode {
        Extremum::Inf => a < b,
        Extremum::Sup => a > b,
    }
}

/// Extremum of `y ↦ p^U(y, ξ)` over `|y − center| ≤ radius`: 257-point scan
/// followed by golden-section refinement around the best grid point.
pub fn ball_extremum(measure: &LevyMeasureSpec, center: f64, radius: f64, xi: f64, mode: Extremum) -> Result<f64> {
    if measure.is_state_independent() || radius <= 0.0 {
        return measure.pu(center, xi);
    }
    let lo = center - radius;
    let step = 2.0 * radius / (BALL_GRID - 1) as f64;
    let mut best_i = 0;
    let mut best = measure.pu(lo, xi)?;
    for i in 1..BALL_GRID {
        let y = if i == (BALL_GRID - 1) / 2 { center } else { lo + step * i as f64 };
        let v = measure.pu(y, xi)?;
        if better(mode, v, best) {
            best = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(center + radius);
    let refined = golden_section(|y| measure.pu(y, xi), a, b, mode)?;
    Ok(if better(mode, refined, best) { refined } else { best })
}

fn golden_section<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, mode: Extremum) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let sign = match mode {
        Extremum::Inf => 1.0,
        Extremum::Sup => -1.0,
    };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = sign * f(c)?;
    let mut fd = sign * f(d)?;
    let mut iterations = 0;
    while (b - a) > GOLDEN_TOL && iterations < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sign * f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sign * f(d)?;
        }
        iterations += 1;
    }
    Ok(sign * fc.min(fd))
}

/// `inf` or `sup` of `y ↦ p^U(y, 1/R)` over `|x − y| ≤ k·R`.
pub fn pu_ball_extremum(
    measure: &LevyMeasureSpec,
    x: f64,
    r: f64,
    multiple: RadiusMultiple,
    mode: Extremum,
) -> Result<f64> {
    check_radius(r)?;
    ball_extremum(measure, x, multiple.factor() * r, 1.0 / r, mode)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "R in (0, 1]", arg: r })
    }
}

/// `u(x, R) = 1 / inf_{|x−y| ≤ 3R} p^U(y, 1/R)`.
pub fn u_of_r(measure: &LevyMeasureSpec, x: f64, r: f64) -> Result<f64> {
    let inf = pu_ball_extremum(measure, x, r, RadiusMultiple::Three, Extremum::Inf)?;
    if inf <= 0.0 {
        return Err(Error::DegenerateMeasure { x, radius: r });
    }
    Ok(1.0 / inf)
}

/// Generalized inverse `inf{r : u(x, r) ≥ ρ}`: ascending geometric scan
/// (ratio 2) from `r = 10⁻¹²`, then bisection to relative width `10⁻¹⁰`.
pub fn u_inverse(measure: &LevyMeasureSpec, x: f64, rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain { what: "u_inverse", arg: rho });
    }
    let u = |r: f64| u_of_r(measure, x, r);
    let u_max = u(1.0)?;
    if rho > u_max {
        return Err(Error::RhoOutOfRange { rho, max: u_max });
    }
    let (mut lo, mut hi);
    let mut r = INVERSE_SCAN_START;
    if u(r)? >= rho {
        // Scan downward until the level is crossed.
        hi = r;
        loop {
            lo = 0.5 * hi;
            if lo < 1e-300 {
                return Ok(hi);
            }
            if u(lo)? < rho {
                break;
            }
            hi = lo;
        }
    } else {
        loop {
            let next = (2.0 * r).min(1.0);
            if u(next)? >= rho {
                lo = r;
                hi = next;
                break;
            }
            if next == 1.0 {
                // u(1) >= rho was checked above; only reachable through NaN.
                return Err(Error::RhoOutOfRange { rho, max: u_max });
            }
            r = next;
        }
    }
    while hi - lo > INVERSE_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if u(mid)? >= rho {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `log|log t|` for `t ∈ (0, e⁻¹)`.
pub fn log_abs_log(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < (-1f64).exp()) {
        return Err(Error::Domain { what: "log|log t| (t in (0, 1/e))", arg: t });
    }
    Ok(t.ln().abs().ln())
}

/// Chung rate `u⁻¹(x, t / log|log t|)`.
pub fn chung_rate(measure: &LevyMeasureSpec, x: f64, t: f64) -> Result<f64> {
    let ll = log_abs_log(t)?;
    u_inverse(measure, x, t / ll)
}

/// `ℓ_{ε,n}(t) = L₁·L₂·…·L_n^{1+ε}` with `L₁ = |log t|`, `L_{k+1} = |log L_k|`;
/// every level must exceed 1.
pub fn iterated_log_factor(t: f64, epsilon: f64, n: usize) -> Result<f64> {
    if !(t > 0.0) || n == 0 || !(epsilon >= 0.0) {
        return Err(Error::Domain { what: "iterated_log_factor", arg: t });
    }
    let mut level = t;
    let mut product = 1.0;
    for k in 1..=n {
        level = level.ln().abs();
        if !(level > 1.0) {
            return Err(Error::IteratedLogUndefined { t, level: k });
        }
        product *= if k == n { level.powf(1.0 + epsilon) } else { level };
    }
    Ok(product)
}

/// Logarithmic correction used in upper functions.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LogCorrection {
    /// `ℓ ≡ 1`.
    #[default]
    None,
    IteratedLog { epsilon: f64, n: usize },
}

impl LogCorrection {
    pub fn factor(&self, t: f64) -> Result<f64> {
        match *self {
            LogCorrection::None => Ok(1.0),
            LogCorrection::IteratedLog { epsilon, n } => iterated_log_factor(t, epsilon, n),
        }
    }
}

/// `χ(x, s)`: inverse of `ξ ↦ p^U(x, ξ)` on `[1, ∞)` by doubling and bisection.
pub fn pu_inverse(measure: &LevyMeasureSpec, x: f64, s: f64) -> Result<f64> {
    let p1 = measure.pu(x, 1.0)?;
    if !(s >= p1) {
        return Err(Error::Domain { what: "inverse of p^U on [1, inf)", arg: s });
    }
    let mut lo = 1.0;
    let mut plo = p1;
    let mut hi = 1.0;
    while measure.pu(x, hi)? < s {
        let next = 2.0 * hi;
        let pn = measure.pu(x, next)?;
        if !(pn > plo) {
            return Err(Error::InverseUndefined { xi: hi });
        }
        lo = hi;
        plo = pn;
        hi = next;
        if !hi.is_finite() {
            return Err(Error::InverseUndefined { xi: lo });
        }
    }
    // Strictness between the bracket ends is checked at the midpoint probes.
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if measure.pu(x, mid)? >= s {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Upper function `v(x, t) = 1/χ(x, 1/(t·ℓ(t)))`, by numeric inversion.
pub fn upper_v_numeric(measure: &LevyMeasureSpec, x: f64, t: f64, corr: LogCorrection) -> Result<f64> {
    let ell = corr.factor(t)?;
    Ok(1.0 / pu_inverse(measure, x, 1.0 / (t * ell))?)
}

/// Upper function; closed form `(k·t·ℓ(t))^{1/α(x)}` for power laws, where
/// `p^U(x, ξ) = k|ξ|^α`, numeric inversion otherwise.
pub fn upper_v(measure: &LevyMeasureSpec, x: f64, t: f64, corr: LogCorrection) -> Result<f64> {
    match &measure.kind {
        MeasureKind::PowerLaw { .. } => {
            let ell = corr.factor(t)?;
            let k = measure.pu(x, 1.0)?;
            let alpha = measure.alpha_at(x).unwrap_or(1.0);
            Ok((k * t * ell).powf(1.0 / alpha))
        }
        _ => upper_v_numeric(measure, x, t, corr),
    }
}

pub fn upper_norming_v(measure: &LevyMeasureSpec, x: f64, t: f64, epsilon: f64, n: usize) -> Result<f64> {
    upper_v(measure, x, t, LogCorrection::IteratedLog { epsilon, n })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub x: f64,
    pub r_grid: Vec<f64>,
    pub kappa_values: Vec<f64>,
    pub kappa: f64,
}

/// Per radius `sup_{|x−y|≤2R} p^U(y, 1/R) / inf_{|x−y|≤3R} p^U(y, 1/R)`.
pub fn kappa_estimate(measure: &LevyMeasureSpec, x: f64, r_grid: &[f64]) -> Result<KappaEstimate> {
    let mut kappa_values = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let sup = pu_ball_extremum(measure, x, r, RadiusMultiple::Two, Extremum::Sup)?;
        let inf = pu_ball_extremum(measure, x, r, RadiusMultiple::Three, Extremum::Inf)?;
        if inf <= 0.0 {
            return Err(Error::DegenerateMeasure { x, radius: r });
        }
        kappa_values.push(sup / inf);
    }
    let kappa = kappa_values.iter().copied().fold(1.0, f64::max);
    Ok(KappaEstimate {
        x,
        r_grid: r_grid.to_vec(),
        kappa_values,
        kappa,
    })
}

/// Analytic bound `64^{max |α'| over B(x, 1)}` for power laws.
pub fn kappa_power_law_bound(measure: &LevyMeasureSpec, x: f64) -> Option<f64> {
    match &measure.kind {
        MeasureKind::PowerLaw { alpha, .. } => Some(64f64.powf(alpha.max_abs_derivative_on(x - 1.0, x + 1.0))),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum NormingKind {
    U,
    UInverse,
    ChungRate,
    UpperV,
    SymbolW,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormingForm {
    /// `value = coefficient · argument^exponent`.
    Power { coefficient: f64, exponent: f64 },
    /// Values on an increasing argument grid, interpolated log-log.
    Numeric { arguments: Vec<f64>, values: Vec<f64> },
}

/// A scalar norming function of one argument at a fixed anchor `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormingFunction {
    pub kind: NormingKind,
    pub x: f64,
    pub form: NormingForm,
    pub domain: (f64, f64),
}

impl NormingFunction {
    /// Evaluates `kind` on `arguments` (which must be increasing). `SymbolW`
    /// uses `w(t) = 1/χ(x, 1/t)`; `UpperV` uses `correction`.
    pub fn tabulate(
        kind: NormingKind,
        measure: &LevyMeasureSpec,
        x: f64,
        arguments: &[f64],
        correction: LogCorrection,
    ) -> Result<Self> {
        if arguments.is_empty() || arguments.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Precondition("norming arguments must be increasing and nonempty".into()));
        }
        let values = arguments
            .iter()
            .map(|&a| evaluate(kind, measure, x, a, correction))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind,
            x,
            form: NormingForm::Numeric {
                arguments: arguments.to_vec(),
                values,
            },
            domain: (arguments[0], arguments[arguments.len() - 1]),
        })
    }

    /// Closed form of `u` or `u⁻¹` for a state-independent power law.
    pub fn closed_form(kind: NormingKind, measure: &LevyMeasureSpec) -> Option<Self> {
        if !measure.is_state_independent() {
            return None;
        }
        let alpha = measure.alpha_at(0.0)?;
        let k = measure.pu(0.0, 1.0).ok()?;
        let form = match kind {
            NormingKind::U => NormingForm::Power {
                coefficient: 1.0 / k,
                exponent: alpha,
            },
            NormingKind::UInverse => NormingForm::Power {
                coefficient: k.powf(1.0 / alpha),
                exponent: 1.0 / alpha,
            },
            _ => return None,
        };
        Some(Self {
            kind,
            x: 0.0,
            form,
            domain: (0.0, 1.0),
        })
    }

    pub fn eval(&self, arg: f64) -> Result<f64> {
        if arg < self.domain.0 || arg > self.domain.1 {
            return Err(Error::Domain { what: "norming function", arg });
        }
        match &self.form {
            NormingForm::Power { coefficient, exponent } => Ok(coefficient * arg.powf(*exponent)),
            NormingForm::Numeric { arguments, values } => {
                let i = match arguments.binary_search_by(|v| v.total_cmp(&arg)) {
                    Ok(i) => return Ok(values[i]),
                    Err(i) => i - 1,
                };
                let (a0, a1) = (arguments[i], arguments[i + 1]);
                let (v0, v1) = (values[i], values[i + 1]);
                if a0 > 0.0 && v0 > 0.0 && v1 > 0.0 {
                    let w = (arg / a0).ln() / (a1 / a0).ln();
                    Ok(v0 * (v1 / v0).powf(w))
                } else {
                    Ok(v0 + (v1 - v0) * (arg - a0) / (a1 - a0))
                }
            }
        }
    }

    /// CSV with columns `argument,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("argument,value\n");
        if let NormingForm::Numeric { arguments, values } = &self.form {
            for (a, v) in arguments.iter().zip(values) {
                out.push_str(&format!("{a:e},{v:e}\n"));
            }
        }
        out
    }
}

fn evaluate(kind: NormingKind, measure: &LevyMeasureSpec, x: f64, arg: f64, correction: LogCorrection) -> Result<f64> {
    match kind {
        NormingKind::U => u_of_r(measure, x, arg),
        NormingKind::UInverse => u_inverse(measure, x, arg),
        NormingKind::ChungRate => chung_rate(measure, x, arg),
        NormingKind::UpperV => upper_v(measure, x, arg, correction),
        NormingKind::SymbolW => upper_v(measure, x, arg, LogCorrection::None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Atom, ScaleSpec};
    use crate::profile::Profile;
    use std::f64::consts::{E, FRAC_PI_2};

    fn sinusoidal() -> LevyMeasureSpec {
        LevyMeasureSpec::power_law(
            Profile::Sinusoidal {
                mean: 1.5,
                amplitude: 0.3,
                frequency: 1.0,
                phase: 0.0,
            },
            ScaleSpec::Canonical,
        )
        .unwrap()
    }

    #[test]
    fn ball_extremum_constant_alpha() {
        let m = LevyMeasureSpec::stable_like_constant(1.2).unwrap();
        for mode in [Extremum::Inf, Extremum::Sup] {
            let v = pu_ball_extremum(&m, 0.3, 0.1, RadiusMultiple::Three, mode).unwrap();
            assert!((v / 0.1f64.powf(-1.2) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ball_inf_at_local_minimum_is_exact() {
        let m = sinusoidal();
        let x = -FRAC_PI_2;
        for &r in &[0.05, 0.01, 1e-3] {
            let v = pu_ball_extremum(&m, x, r, RadiusMultiple::Three, Extremum::Inf).unwrap();
            let want = (1.0 / r).powf(m.alpha_at(x).unwrap());
            assert!((v / want - 1.0).abs() < 1e-12, "{v} vs {want}");
            let u = u_of_r(&m, x, r).unwrap();
            assert!((u / r.powf(1.2) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn ball_extremum_finds_interior_max_between_grid_points() {
        // α maximal at π/2 + 2π k; ball around 1.5 of radius 0.3 contains π/2.
        let m = sinusoidal();
        let v = ball_extremum(&m, 1.5, 0.3, 10.0, Extremum::Sup).unwrap();
        assert!((v - 10f64.powf(1.8)).abs() < 1e-9 * v);
    }

    #[test]
    fn u_inverse_examples() {
        let m1 = LevyMeasureSpec::stable_like_constant(1.0).unwrap();
        assert!((u_inverse(&m1, 0.0, 1e-3).unwrap() / 1e-3 - 1.0).abs() < 1e-9);
        let mh = LevyMeasureSpec::stable_like_constant(0.5).unwrap();
        assert!((u_inverse(&mh, 0.0, 1e-3).unwrap() / 1e-6 - 1.0).abs() < 1e-9);
        assert!(matches!(u_inverse(&m1, 0.0, 2.0), Err(Error::RhoOutOfRange { .. })));
        assert!(u_inverse(&m1, 0.0, 0.0).is_err());
    }

    #[test]
    fn generalized_inverse_sandwich() {
        let m = LevyMeasureSpec::power_law(
            Profile::TanhRamp {
                mean: 1.0,
                amplitude: 0.25,
                slope: 1.0,
                center: 0.0,
            },
            ScaleSpec::Canonical,
        )
        .unwrap();
        for &rho in &[1e-7, 1e-5, 1e-3, 0.1] {
            let r = u_inverse(&m, 0.0, rho).unwrap();
            assert!(u_of_r(&m, 0.0, r * (1.0 + 1e-9)).unwrap() >= rho);
            assert!(u_of_r(&m, 0.0, r * (1.0 - 1e-6)).unwrap() < rho);
        }
    }

    #[test]
    fn degenerate_measure_is_reported() {
        let zero = LevyMeasureSpec::atomic(vec![]).unwrap();
        assert!(matches!(u_of_r(&zero, 0.0, 0.5), Err(Error::DegenerateMeasure { .. })));
    }

    #[test]
    fn chung_rate_examples() {
        let m1 = LevyMeasureSpec::stable_like_constant(1.0).unwrap();
        // 1e-4 / ln(ln(1e4)), computed independently.
        let want = 1e-4 / (1e4f64.ln()).ln();
        assert!((chung_rate(&m1, 0.0, 1e-4).unwrap() / want - 1.0).abs() < 1e-9);
        let t = (-E).exp();
        assert!((chung_rate(&m1, 0.0, t).unwrap() / t - 1.0).abs() < 1e-9);
        let m15 = LevyMeasureSpec::stable_like_constant(1.5).unwrap();
        assert!((chung_rate(&m15, 0.0, 1e-4).unwrap() / want.powf(2.0 / 3.0) - 1.0).abs() < 1e-9);
        assert!(chung_rate(&m1, 0.0, 0.5).is_err());
    }

    #[test]
    fn iterated_log_examples() {
        assert!((iterated_log_factor((-E).exp(), 0.0, 1).unwrap() - E).abs() < 1e-14);
        let t = (-(E.exp())).exp();
        let want = (E + 2.0).exp();
        assert!((iterated_log_factor(t, 1.0, 2).unwrap() / want - 1.0).abs() < 1e-13);
        assert!(matches!(iterated_log_factor(0.9, 0.3, 2), Err(Error::IteratedLogUndefined { .. })));
    }

    #[test]
    fn upper_v_closed_and_numeric_agree() {
        let t = (-E).exp();
        let m = LevyMeasureSpec::stable_like_constant(1.5).unwrap();
        let v = upper_norming_v(&m, 0.0, t, 0.5, 1).unwrap();
        assert!((v - ((1.5 - E) * 2.0 / 3.0).exp()).abs() < 1e-12);
        let m1 = LevyMeasureSpec::stable_like_constant(1.0).unwrap();
        assert!((upper_norming_v(&m1, 0.0, t, 0.0, 1).unwrap() - t * E).abs() < 1e-15);
        let s = sinusoidal();
        for &x in &[-0.7, 0.0, 0.4] {
            for &tt in &[1e-3, 1e-6, 1e-10] {
                let corr = LogCorrection::IteratedLog { epsilon: 0.5, n: 1 };
                let a = upper_v(&s, x, tt, corr).unwrap();
                let b = upper_v_numeric(&s, x, tt, corr).unwrap();
                assert!((a / b - 1.0).abs() < 1e-8, "{a} {b}");
            }
        }
    }

    #[test]
    fn upper_v_needs_strictly_increasing_pu() {
        let m = LevyMeasureSpec::atomic(vec![Atom::new(1.0, 1.0), Atom::new(-1.0, 1.0)]).unwrap();
        let err = upper_v_numeric(&m, 0.0, 1e-3, LogCorrection::None).unwrap_err();
        assert!(matches!(err, Error::InverseUndefined { .. }), "{err:?}");
    }

    #[test]
    fn kappa_examples() {
        let c = LevyMeasureSpec::stable_like_constant(1.3).unwrap();
        let grid: Vec<f64> = (3..=12).map(|k| 2f64.powi(-k)).collect();
        assert_eq!(kappa_estimate(&c, 0.0, &grid).unwrap().kappa, 1.0);
        let s = sinusoidal();
        let k = kappa_estimate(&s, 0.0, &grid).unwrap();
        let bound = kappa_power_law_bound(&s, 0.0).unwrap();
        assert!((bound - 64f64.powf(0.3)).abs() < 1e-9);
        assert!(k.kappa <= bound * 1.05);
        assert!(k.kappa_values.windows(2).all(|w| w[1] <= w[0]));
        assert!(k.kappa_values.last().unwrap() - 1.0 < 0.01);
    }

    #[test]
    fn norming_function_table() {
        let m = LevyMeasureSpec::stable_like_constant(1.5).unwrap();
        let args: Vec<f64> = (1..=8).map(|k| 10f64.powi(-k)).rev().collect();
        let f = NormingFunction::tabulate(NormingKind::UInverse, &m, 0.0, &args, LogCorrection::None).unwrap();
        let closed = NormingFunction::closed_form(NormingKind::UInverse, &m).unwrap();
        for &a in &[1e-8, 3e-6, 1e-4, 0.05] {
            assert!((f.eval(a).unwrap() / closed.eval(a).unwrap() - 1.0).abs() < 1e-8);
        }
        assert!(f.to_csv().starts_with("argument,value\n"));
        assert_eq!(f.to_csv().lines().count(), 9);
    }
}
