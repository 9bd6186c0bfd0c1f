//! Builtin coefficient profiles `x ↦ f(x)` used for state-dependent indices,
//! scales and drifts. There is deliberately no expression parser.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    /// `f(x) = value`.
    Constant(f64),
    /// `f(x) = clamp(intercept + slope·x, lo, hi)`.
    AffineClamped {
        intercept: f64,
        slope: f64,
        lo: f64,
        hi: f64,
    },
    /// `f(x) = mean + amplitude·sin(frequency·x + phase)`.
    Sinusoidal {
        mean: f64,
        amplitude: f64,
        #[serde(default = "one")]
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `f(x) = mean + amplitude·tanh(slope·(x − center))`.
    TanhRamp {
        mean: f64,
        amplitude: f64,
        #[serde(default = "one")]
        slope: f64,
        #[serde(default)]
        center: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Default for Profile {
    fn default() -> Self {
        Profile::Constant(0.0)
    }
}

impl Profile {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Profile::Constant(v) => v,
            Profile::AffineClamped {
                intercept,
                slope,
                lo,
                hi,
            } => (intercept + slope * x).clamp(lo, hi),
            Profile::Sinusoidal {
                mean,
                amplitude,
                frequency,
                phase,
            } => mean + amplitude * (frequency * x + phase).sin(),
            Profile::TanhRamp {
                mean,
                amplitude,
                slope,
                center,
            } => mean + amplitude * (slope * (x - center)).tanh(),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Profile::Constant(_) => 0.0,
            Profile::AffineClamped {
                intercept,
                slope,
                lo,
                hi,
            } => {
                let raw = intercept + slope * x;
                if raw > lo && raw < hi {
                    slope
                } else {
                    0.0
                }
            }
            Profile::Sinusoidal {
                amplitude,
                frequency,
                phase,
                ..
            } => amplitude * frequency * (frequency * x + phase).cos(),
            Profile::TanhRamp {
                amplitude,
                slope,
                center,
                ..
            } => {
                let c = (slope * (x - center)).cosh();
                amplitude * slope / (c * c)
            }
        }
    }

    /// Closed interval containing every value of the profile.
    pub fn range(&self) -> (f64, f64) {
        match *self {
            Profile::Constant(v) => (v, v),
            Profile::AffineClamped {
                slope, lo, hi, intercept,
            } => {
                if slope == 0.0 {
                    let v = intercept.clamp(lo, hi);
                    (v, v)
                } else {
                    (lo, hi)
                }
            }
            Profile::Sinusoidal {
                mean, amplitude, ..
            }
            | Profile::TanhRamp {
                mean, amplitude, ..
            } => (mean - amplitude.abs(), mean + amplitude.abs()),
        }
    }

    /// Global Lipschitz bound.
    pub fn derivative_bound(&self) -> f64 {
        match *self {
            Profile::Constant(_) => 0.0,
            Profile::AffineClamped { slope, .. } => slope.abs(),
            Profile::Sinusoidal {
                amplitude,
                frequency,
                ..
            } => (amplitude * frequency).abs(),
            Profile::TanhRamp {
                amplitude, slope, ..
            } => (amplitude * slope).abs(),
        }
    }

    /// `max |f'|` over `[lo, hi]`, by dense sampling (exact for the constant
    /// and affine cases).
    pub fn max_abs_derivative_on(&self, lo: f64, hi: f64) -> f64 {
        match self {
            Profile::Constant(_) => 0.0,
            Profile::AffineClamped { .. } => self.derivative_bound(),
            _ => {
                const N: usize = 4096;
                (0..=N)
                    .map(|i| self.derivative(lo + (hi - lo) * i as f64 / N as f64).abs())
                    .fold(0.0, f64::max)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        let (lo, hi) = self.range();
        lo == hi
    }

    pub fn is_finite(&self) -> bool {
        let (lo, hi) = self.range();
        lo.is_finite() && hi.is_finite() && self.derivative_bound().is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_matches_finite_difference() {
        let profiles = [
            Profile::Sinusoidal {
                mean: 1.5,
                amplitude: 0.3,
                frequency: 1.0,
                phase: 0.0,
            },
            Profile::TanhRamp {
                mean: 1.0,
                amplitude: 0.25,
                slope: 1.0,
                center: 0.0,
            },
            Profile::AffineClamped {
                intercept: 1.2,
                slope: 0.1,
                lo: 0.5,
                hi: 1.8,
            },
        ];
        for p in &profiles {
            for &x in &[-1.3, -0.2, 0.0, 0.7, 2.1] {
                let h = 1e-6;
                let fd = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
                assert!((fd - p.derivative(x)).abs() < 1e-7, "{p:?} at {x}");
            }
        }
    }

    #[test]
    fn range_contains_samples() {
        let p = Profile::Sinusoidal {
            mean: 1.5,
            amplitude: -0.3,
            frequency: 2.0,
            phase: 0.4,
        };
        let (lo, hi) = p.range();
        for i in 0..1000 {
            let v = p.value(-10.0 + 0.02 * i as f64);
            assert!(v >= lo - 1e-15 && v <= hi + 1e-15);
        }
        assert!((p.derivative_bound() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn serde_shape() {
        let p: Profile = serde_json::from_str(r#"{"constant": 1.5}"#).unwrap();
        assert_eq!(p, Profile::Constant(1.5));
        let p: Profile =
            serde_json::from_str(r#"{"tanh_ramp": {"mean": 1.0, "amplitude": 0.25}}"#).unwrap();
        assert_eq!(p.value(0.0), 1.0);
        assert!(serde_json::from_str::<Profile>(r#"{"tanh_ramp": {"mean": 1.0, "amplitude": 0.25, "slop": 1}}"#).is_err());
    }
}
