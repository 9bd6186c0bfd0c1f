//! Numerical convergence tests for integrals at `0⁺` and the liminf
//! dichotomy of `t·g(1/w(t))` as `t → 0`.
//!
//! Integral tests integrate over dyadic blocks `[t_max 2^{-k-1}, t_max 2^{-k}]`
//! and compare the block integrals `I_k` with `|log t|^{-p}`: a fitted
//! exponent `p ≥ 1.25` means convergence, `p ≤ 0.75` (without geometric
//! decay) divergence. Geometric decay of `I_k` in `k` shows up as a large
//! fitted `p`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::LevyMeasureSpec;
use crate::norming::{ball_extremum, upper_v, Extremum, LogCorrection};
use crate::quad::gk15;
use crate::stats::{linear_fit, median};

pub const MIN_LEVELS: usize = 8;
pub const RATIO_MARGIN: f64 = 0.05;
pub const CONVERGENT_EXPONENT: f64 = 1.25;
pub const DIVERGENT_EXPONENT: f64 = 0.75;
pub const ZERO_THRESHOLD: f64 = 1e-3;
pub const STABLE_SPREAD: f64 = 0.10;
pub const TREND_SLOPE: f64 = 0.1;
const PANELS_PER_BLOCK: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
    Zero,
    PositiveFinite { c: f64 },
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Block integrals `I_k`, or the per-level values `t_j·g(1/w(t_j))`.
    pub blocks: Vec<f64>,
    /// Right end point of each block, or the probe time of each level.
    pub times: Vec<f64>,
    /// Polylog exponent `p` for integral tests, log-log slope for liminf tests.
    pub fitted_exponent: f64,
    /// Fitted `I_{k+1}/I_k`; `NaN` for liminf tests.
    #[serde(default)]
    pub fitted_ratio: f64,
    pub confidence_note: String,
}

impl TestVerdict {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,t,value\n");
        for (k, (t, v)) in self.times.iter().zip(&self.blocks).enumerate() {
            out.push_str(&format!("{k},{t:e},{v:e}\n"));
        }
        out
    }
}

fn check_levels(t_max: f64, levels: usize) -> Result<()> {
    if levels < MIN_LEVELS {
        return Err(Error::Precondition(format!("at least {MIN_LEVELS} levels required, got {levels}")));
    }
    if !(t_max > 0.0 && t_max < 1.0) {
        return Err(Error::Domain { what: "t_max in (0, 1)", arg: t_max });
    }
    Ok(())
}

/// `∫ f` over `[a, b]` in the variable `s = log t`, fixed-order GK15 on four panels.
fn block_integral<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<f64> {
    let (la, lb) = (a.ln(), b.ln());
    let h = (lb - la) / PANELS_PER_BLOCK as f64;
    let failure = std::cell::RefCell::new(None);
    let g = |s: f64| {
        let t = s.exp();
        match f(t) {
            Ok(v) if v >= 0.0 && v.is_finite() => v * t,
            Ok(v) => {
                failure.borrow_mut().get_or_insert(Error::Precondition(format!(
                    "integrand value {v} at t = {t:e} is not finite and nonnegative"
                )));
                0.0
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let mut sum = 0.0;
    for i in 0..PANELS_PER_BLOCK {
        let lo = la + h * i as f64;
        sum += gk15(&g, lo, lo + h).0;
    }
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(sum),
    }
}

/// Classifies `∫_{0+} f(t) dt` from the block integrals over `levels + 1`
/// dyadic blocks below `t_max`.
pub fn classify_integral_at_zero<F>(integrand: F, t_max: f64, levels: usize) -> Result<TestVerdict>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_levels(t_max, levels)?;
    let times: Vec<f64> = (0..=levels).map(|k| t_max * 0.5f64.powi(k as i32)).collect();
    let blocks = times
        .par_iter()
        .enumerate()
        .map(|(k, &hi)| {
            block_integral(&integrand, 0.5 * hi, hi).map_err(|e| Error::Block {
                block: k,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(decide_integral(blocks, times))
}

/// Decision rule for block integrals; deterministic in `blocks` and `times`.
pub fn decide_integral(blocks: Vec<f64>, times: Vec<f64>) -> TestVerdict {
    let n = blocks.len();
    let start = n - (n / 2).max(4).min(n);
    let mut ks = Vec::new();
    let mut log_l = Vec::new();
    let mut log_i = Vec::new();
    for k in start..n {
        if blocks[k] > 0.0 {
            // Geometric midpoint of the block.
            let mid = times[k] * std::f64::consts::FRAC_1_SQRT_2;
            ks.push(k as f64);
            log_l.push(mid.ln().abs().ln());
            log_i.push(blocks[k].ln());
        }
    }
    let make = |verdict, p: f64, ratio: f64, note: String| TestVerdict {
        verdict,
        blocks: blocks.clone(),
        times: times.clone(),
        fitted_exponent: p,
        fitted_ratio: ratio,
        confidence_note: note,
    };
    if ks.len() < 3 {
        return if blocks[n - 1] == 0.0 {
            make(Verdict::Convergent, f64::INFINITY, 0.0, "integrand vanishes on the last blocks".into())
        } else {
            make(Verdict::Inconclusive, f64::NAN, f64::NAN, "too few positive blocks in the decision window".into())
        };
    }
    let (Some(fit_k), Some(fit_l)) = (linear_fit(&ks, &log_i), linear_fit(&log_l, &log_i)) else {
        return make(Verdict::Inconclusive, f64::NAN, f64::NAN, "degenerate fit".into());
    };
    let ratio = fit_k.slope.exp();
    let p = -fit_l.slope;
    let verdict = if p >= CONVERGENT_EXPONENT {
        Verdict::Convergent
    } else if p <= DIVERGENT_EXPONENT && ratio > 1.0 - RATIO_MARGIN {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    let note = format!(
        "blocks {start}..{}: I_k ~ |log t|^(-{p:.3}) (R^2 {:.4}), ratio I_(k+1)/I_k = {ratio:.4}",
        n - 1,
        fit_l.r_squared
    );
    make(verdict, p, ratio, note)
}

/// Tests `∫_{0+} sup_{|y−x|≤v(t)} p^U(y, 1/v(t)) dt < ∞` with `v` the upper
/// function for the given log correction.
pub fn upper_function_test_with(
    measure: &LevyMeasureSpec,
    x: f64,
    correction: LogCorrection,
    t_max: f64,
    levels: usize,
) -> Result<TestVerdict> {
    classify_integral_at_zero(
        |t| {
            let v = upper_v(measure, x, t, correction)?;
            ball_extremum(measure, x, v, 1.0 / v, Extremum::Sup)
        },
        t_max,
        levels,
    )
}

pub fn upper_function_test(
    measure: &LevyMeasureSpec,
    x: f64,
    epsilon: f64,
    n: usize,
    t_max: f64,
    levels: usize,
) -> Result<TestVerdict> {
    if !(epsilon > 0.0) || n == 0 {
        return Err(Error::Precondition("upper function test needs epsilon > 0 and n >= 1".into()));
    }
    upper_function_test_with(measure, x, LogCorrection::IteratedLog { epsilon, n }, t_max, levels)
}

/// Tests `∫_{0+} ν{|y| > 2C·v(t)} dt = ∞` (divergence certifies the lower bound).
pub fn lower_tail_test<V>(measure: &LevyMeasureSpec, v: V, c: f64, t_max: f64, levels: usize) -> Result<TestVerdict>
where
    V: Fn(f64) -> f64 + Sync,
{
    if !measure.is_state_independent() {
        return Err(Error::LevyOnly("lower_tail_test"));
    }
    if !(c > 0.0) {
        return Err(Error::Domain { what: "lower_tail_test constant C", arg: c });
    }
    classify_integral_at_zero(|t| measure.tail_mass(0.0, 2.0 * c * v(t)), t_max, levels)
}

fn log_log_slope(values: &[f64], ls: &[f64]) -> f64 {
    let pts: (Vec<f64>, Vec<f64>) = values
        .iter()
        .zip(ls)
        .filter(|(v, _)| **v > 0.0 && v.is_finite())
        .map(|(v, l)| (l.ln(), v.ln()))
        .unzip();
    linear_fit(&pts.0, &pts.1).map_or(f64::NAN, |f| f.slope)
}

/// Liminf classification of `m_j = t_j·g(1/w(t_j))` on `t_j = t_max 2^{-j}`.
///
/// `w` must not increase along the probe sequence (`w(t_{j+1}) ≤ w(t_j)`).
/// Over the last quarter of levels: suffix minima growing like
/// `|log t|^{≥0.1}` give `Infinite`; prefix minima decaying like
/// `|log t|^{≤−0.1}` or dropping below `10⁻³` give `Zero`; suffix minima
/// within 10% relative spread give `PositiveFinite(median)`.
pub fn symbol_liminf_test<G, W>(g: G, w: W, t_max: f64, levels: usize) -> Result<TestVerdict>
where
    G: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    check_levels(t_max, levels)?;
    let times: Vec<f64> = (0..=levels).map(|j| t_max * 0.5f64.powi(j as i32)).collect();
    let ws: Vec<f64> = times.iter().map(|&t| w(t)).collect();
    if ws.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return Err(Error::Precondition("w must be positive and finite on the probe grid".into()));
    }
    if let Some(j) = ws.windows(2).position(|p| p[1] > p[0]) {
        return Err(Error::Precondition(format!(
            "w increases along the probe sequence between t = {:e} and t = {:e}",
            times[j],
            times[j + 1]
        )));
    }
    let blocks: Vec<f64> = times.iter().zip(&ws).map(|(&t, &w)| t * g(1.0 / w)).collect();
    if blocks.iter().any(|m| !(*m >= 0.0)) {
        return Err(Error::Precondition("t·g(1/w(t)) must be nonnegative".into()));
    }
    Ok(decide_liminf(blocks, times))
}

/// Decision rule of [`symbol_liminf_test`]; deterministic in its inputs.
pub fn decide_liminf(blocks: Vec<f64>, times: Vec<f64>) -> TestVerdict {
    let n = blocks.len();
    let start = n - (n / 4).max(3).min(n);
    let mut suffix = blocks.clone();
    for j in (0..n.saturating_sub(1)).rev() {
        suffix[j] = suffix[j].min(suffix[j + 1]);
    }
    let mut prefix = blocks.clone();
    for j in 1..n {
        prefix[j] = prefix[j].min(prefix[j - 1]);
    }
    let ls: Vec<f64> = times[start..].iter().map(|t| t.ln().abs()).collect();
    let win_suffix = &suffix[start..];
    let win_prefix = &prefix[start..];
    let up = log_log_slope(win_suffix, &ls);
    let down = log_log_slope(win_prefix, &ls);
    let make = |verdict, slope: f64, note: String| TestVerdict {
        verdict,
        blocks: blocks.clone(),
        times: times.clone(),
        fitted_exponent: slope,
        fitted_ratio: f64::NAN,
        confidence_note: note,
    };
    if win_prefix.iter().all(|&m| m < ZERO_THRESHOLD) {
        return make(Verdict::Zero, down, format!("prefix minima below {ZERO_THRESHOLD:e}"));
    }
    if up >= TREND_SLOPE {
        return make(Verdict::Infinite, up, format!("suffix minima grow like |log t|^{up:.3}"));
    }
    if down <= -TREND_SLOPE {
        return make(Verdict::Zero, down, format!("prefix minima decay like |log t|^{down:.3}"));
    }
    let c = median(win_suffix);
    let lo = win_suffix.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = win_suffix.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / c;
    if c > 0.0 && spread <= STABLE_SPREAD {
        make(
            Verdict::PositiveFinite { c },
            up,
            format!("suffix minima stable: relative spread {spread:.4}"),
        )
    } else {
        make(
            Verdict::Inconclusive,
            up,
            format!("no trend (slopes {up:.3}, {down:.3}) and spread {spread:.4}"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Atom, ScaleSpec};
    use crate::profile::Profile;

    fn t_max() -> f64 {
        (-2.0f64).exp()
    }

    fn classify(f: impl Fn(f64) -> f64 + Sync, levels: usize) -> Verdict {
        classify_integral_at_zero(|t| Ok(f(t)), t_max(), levels).unwrap().verdict
    }

    #[test]
    fn analytic_integrals() {
        for levels in [20, 40] {
            assert_eq!(classify(|t| 1.0 / (t * t.ln().powi(2)), levels), Verdict::Convergent);
            assert_eq!(classify(|t| 1.0 / t, levels), Verdict::Divergent);
            assert_eq!(classify(|t| t.powf(-0.5), levels), Verdict::Convergent);
            assert_eq!(classify(|t| 1.0 / (t * t.ln().abs().sqrt()), levels), Verdict::Divergent);
            assert_eq!(classify(|t| t.powf(-1.5), levels), Verdict::Divergent);
            assert_eq!(classify(|_| 0.0, levels), Verdict::Convergent);
        }
    }

    #[test]
    fn scale_invariance() {
        for lambda in [1e-6, 0.3, 1e5] {
            let a = classify_integral_at_zero(|t| Ok(lambda / (t * t.ln().powi(2))), t_max(), 20).unwrap();
            assert_eq!(a.verdict, Verdict::Convergent);
            assert!((a.fitted_exponent - classify_integral_at_zero(|t| Ok(1.0 / (t * t.ln().powi(2))), t_max(), 20).unwrap().fitted_exponent).abs() < 1e-9);
        }
    }

    #[test]
    fn block_values_and_errors() {
        let v = classify_integral_at_zero(|t| Ok(1.0 / t), t_max(), 10).unwrap();
        assert!(v.blocks.iter().all(|b| (b - 2f64.ln()).abs() < 1e-12));
        let err = classify_integral_at_zero(
            |t| if t < 1e-3 { Err(Error::Domain { what: "test", arg: t }) } else { Ok(1.0) },
            t_max(),
            10,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Block { block, .. } if block > 0));
        assert!(classify_integral_at_zero(|_| Ok(1.0), t_max(), 4).is_err());
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["verdict"], "divergent");
        assert_eq!(json["blocks"].as_array().unwrap().len(), 11);
        assert!(v.to_csv().starts_with("level,t,value\n"));
    }

    #[test]
    fn upper_function_examples() {
        let c = LevyMeasureSpec::stable_like_constant(1.5).unwrap();
        assert_eq!(upper_function_test(&c, 0.0, 0.5, 1, t_max(), 20).unwrap().verdict, Verdict::Convergent);
        let plain = upper_function_test_with(&c, 0.0, LogCorrection::None, t_max(), 20).unwrap();
        assert_eq!(plain.verdict, Verdict::Divergent);
        let s = LevyMeasureSpec::power_law(
            Profile::Sinusoidal {
                mean: 1.5,
                amplitude: 0.3,
                frequency: 1.0,
                phase: 0.0,
            },
            ScaleSpec::Canonical,
        )
        .unwrap();
        assert_eq!(upper_function_test(&s, 0.0, 0.5, 1, t_max(), 20).unwrap().verdict, Verdict::Convergent);
        let stable = LevyMeasureSpec::symmetric_stable(1.2).unwrap();
        assert_eq!(upper_function_test(&stable, 0.0, 0.5, 2, 1e-3, 20).unwrap().verdict, Verdict::Convergent);
    }

    #[test]
    fn lower_tail_examples() {
        let alpha = 1.5;
        let m = LevyMeasureSpec::stable_like_constant(alpha).unwrap();
        let v = lower_tail_test(&m, |t| t.powf(1.0 / alpha), 1.0, t_max(), 20).unwrap();
        assert_eq!(v.verdict, Verdict::Divergent);
        let v = lower_tail_test(&m, |t| t.powf(1.0 / alpha) * t.ln().abs().powf(2.0 / alpha), 1.0, t_max(), 20).unwrap();
        assert_eq!(v.verdict, Verdict::Convergent);
        let atoms = LevyMeasureSpec::atomic(vec![Atom::new(1.0, 1.0), Atom::new(-1.0, 1.0)]).unwrap();
        let v = lower_tail_test(&atoms, |t| t.sqrt(), 1.0, t_max(), 20).unwrap();
        assert_eq!(v.verdict, Verdict::Convergent);
        let s = LevyMeasureSpec::power_law(Profile::AffineClamped { intercept: 1.0, slope: 0.1, lo: 0.5, hi: 1.5 }, ScaleSpec::Canonical)
            .unwrap();
        assert!(matches!(lower_tail_test(&s, |t| t, 1.0, t_max(), 20), Err(Error::LevyOnly(_))));
    }

    #[test]
    fn liminf_examples() {
        let alpha = 1.5;
        let g = |xi: f64| xi.powf(alpha);
        for levels in [20, 40] {
            let v = symbol_liminf_test(g, |t| t.powf(1.0 / alpha), t_max(), levels).unwrap();
            match v.verdict {
                Verdict::PositiveFinite { c } => assert!((c - 1.0).abs() < 1e-12),
                other => panic!("{other:?}"),
            }
            let inf = symbol_liminf_test(g, |t| (t / t.ln().abs().ln()).powf(1.0 / alpha), t_max(), levels).unwrap();
            assert_eq!(inf.verdict, Verdict::Infinite);
            let zero = symbol_liminf_test(g, |t| (t * t.ln().abs()).powf(1.0 / alpha), t_max(), levels).unwrap();
            assert_eq!(zero.verdict, Verdict::Zero);
        }
        let err = symbol_liminf_test(g, |t| 1.0 / t, t_max(), 20).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
