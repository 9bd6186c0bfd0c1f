//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Integrals over Lévy measures are piecewise smooth with kinks at known
//! points, so callers pass explicit breakpoints and every panel is refined
//! independently by global bisection of the worst subinterval.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals per panel.
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// One 15-point Kronrod rule on `[a, b]`; returns `(value, error estimate)`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    (value, err)
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gk15(f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::QuadratureFailure {
                estimate: value,
                error,
                evaluations,
            });
        }
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
            });
        }
        if parts.len() >= cfg.max_subdivisions {
            return Err(Error::QuadratureFailure {
                estimate: value,
                error,
                evaluations,
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            // Interval cannot be split further in floating point.
            return Err(Error::QuadratureFailure {
                estimate: value,
                error,
                evaluations,
            });
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        evaluations += 30;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Integrates over consecutive panels `[points[i], points[i + 1]]`.
///
/// The absolute tolerance is shared evenly between panels.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, points: &[f64], cfg: &QuadConfig) -> Result<QuadResult> {
    let panels = points.len().saturating_sub(1).max(1);
    let panel_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / panels as f64,
        ..*cfg
    };
    let mut total = QuadResult {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    for w in points.windows(2) {
        let r = integrate(f, w[0], w[1], &panel_cfg)?;
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(&|x: f64| 3.0 * x * x, 0.0, 2.0, &QuadConfig::default()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let cfg = QuadConfig {
            max_subdivisions: 500,
            ..QuadConfig::default()
        };
        let r = integrate(&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn oscillatory_with_panels() {
        let pts: Vec<f64> = (0..=20).map(|k| k as f64 * std::f64::consts::PI).collect();
        let r = integrate_panels(&|x: f64| x.sin().abs(), &pts, &QuadConfig::default()).unwrap();
        assert!((r.value - 40.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let cfg = QuadConfig {
            abs_tol: 0.0,
            rel_tol: 1e-15,
            max_subdivisions: 3,
        };
        let err = integrate(&|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure { .. }));
    }
}
