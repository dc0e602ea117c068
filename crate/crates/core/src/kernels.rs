//! Bell-shaped kernels built from sigmoidal activations.
//!
//! A sigmoid `d` with `d(-inf) = 0`, `d(+inf) = 1` and the centered symmetry
//! `d(s) + d(-s) = 1` induces the density
//! `Psi(z) = (d(log z + 1) - d(log z - 1)) / 2` on the positive half line.
//! Everything downstream only ever needs `Psi` at a log-argument
//! `s = n log z - k`, so the kernel is evaluated directly in `s` and the
//! exp/log round trip never happens.

use crate::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmoidKind {
    Logistic,
    HyperbolicTangent,
    Ramp,
    ThreeLevel,
    Custom,
}

impl fmt::Display for SigmoidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SigmoidKind::Logistic => "logistic",
            SigmoidKind::HyperbolicTangent => "tanh",
            SigmoidKind::Ramp => "ramp",
            SigmoidKind::ThreeLevel => "three-level",
            SigmoidKind::Custom => "custom",
        };
        f.write_str(name)
    }
}

/// A nondecreasing activation with limits 0 and 1, carrying the structural
/// metadata the rate theory needs.
#[derive(Clone)]
pub struct SigmoidalActivation {
    pub kind: SigmoidKind,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Conservative tail-decay witness: any finite exponent works for the
    /// built-ins (the smooth ones decay super-polynomially, the piecewise
    /// ones are compactly supported).
    pub decay_exponent_v: f64,
    pub smooth: bool,
    pub satisfies_delta2_concavity: bool,
}

impl SigmoidalActivation {
    pub fn logistic() -> Self {
        SigmoidalActivation {
            kind: SigmoidKind::Logistic,
            eval: Arc::new(|z| 1.0 / (1.0 + (-z).exp())),
            decay_exponent_v: 2.0,
            smooth: true,
            satisfies_delta2_concavity: true,
        }
    }

    pub fn hyperbolic_tangent() -> Self {
        SigmoidalActivation {
            kind: SigmoidKind::HyperbolicTangent,
            eval: Arc::new(|z| 0.5 * (z.tanh() + 1.0)),
            decay_exponent_v: 2.0,
            smooth: true,
            satisfies_delta2_concavity: true,
        }
    }

    /// Piecewise-linear ramp; fails concavity on the positive half line but
    /// still induces a centered bell kernel.
    pub fn ramp() -> Self {
        SigmoidalActivation {
            kind: SigmoidKind::Ramp,
            eval: Arc::new(|z| (z + 0.5).clamp(0.0, 1.0)),
            decay_exponent_v: 2.0,
            smooth: false,
            satisfies_delta2_concavity: false,
        }
    }

    /// Step sigmoid taking the three values 0, 1/2, 1.
    pub fn three_level() -> Self {
        SigmoidalActivation {
            kind: SigmoidKind::ThreeLevel,
            eval: Arc::new(|z| {
                if z < -0.5 {
                    0.0
                } else if z <= 0.5 {
                    0.5
                } else {
                    1.0
                }
            }),
            decay_exponent_v: 2.0,
            smooth: false,
            satisfies_delta2_concavity: false,
        }
    }

    pub fn custom(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        decay_exponent_v: f64,
        smooth: bool,
        satisfies_delta2_concavity: bool,
    ) -> Self {
        SigmoidalActivation {
            kind: SigmoidKind::Custom,
            eval: Arc::new(eval),
            decay_exponent_v,
            smooth,
            satisfies_delta2_concavity,
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        (self.eval)(z)
    }

    /// Largest sampled `|d(s) + d(-s) - 1|`, the symmetry residual.
    pub fn symmetry_residual(&self) -> (f64, f64) {
        let mut worst = 0.0;
        let mut at = 0.0;
        for i in 0..=2000 {
            let s = -20.0 + 0.02 * i as f64;
            let r = (self.eval(s) + self.eval(-s) - 1.0).abs();
            if r > worst {
                worst = r;
                at = s;
            }
        }
        (worst, at)
    }
}

impl fmt::Debug for SigmoidalActivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigmoidalActivation")
            .field("kind", &self.kind)
            .field("decay_exponent_v", &self.decay_exponent_v)
            .field("smooth", &self.smooth)
            .finish()
    }
}

/// The bell density induced by a sigmoid, evaluated in log-argument form.
#[derive(Clone, Debug)]
pub struct LogKernel {
    source: SigmoidalActivation,
    /// `Some(r)` when the kernel vanishes for `|s| > r`.
    support_radius: Option<f64>,
    value_at_e: f64,
}

/// Builds the bell kernel for an activation, rejecting sigmoids whose sampled
/// symmetry residual exceeds `1e-9`.
pub fn make_kernel(activation: SigmoidalActivation) -> Result<LogKernel> {
    let (residual, at) = activation.symmetry_residual();
    if residual > 1e-9 {
        return Err(Error::AsymmetricActivation { residual, at });
    }
    let support_radius = match activation.kind {
        SigmoidKind::Ramp | SigmoidKind::ThreeLevel => Some(1.5),
        _ => None,
    };
    let value_at_e = eval_log_raw(&activation, 1.0);
    Ok(LogKernel {
        source: activation,
        support_radius,
        value_at_e,
    })
}

fn eval_log_raw(activation: &SigmoidalActivation, s: f64) -> f64 {
    // Branch on s for the piecewise kinds so the support boundary is exact.
    match activation.kind {
        SigmoidKind::Ramp => {
            let t = s.abs();
            if t <= 0.5 {
                0.5
            } else if t <= 1.5 {
                0.5 * (1.5 - t)
            } else {
                0.0
            }
        }
        SigmoidKind::ThreeLevel => {
            // Open at |s| = 1/2: the defining difference gives 1/4 there,
            // which keeps the translates an exact partition of unity.
            let t = s.abs();
            if t < 0.5 {
                0.5
            } else if t <= 1.5 {
                0.25
            } else {
                0.0
            }
        }
        _ => 0.5 * (activation.eval(s + 1.0) - activation.eval(s - 1.0)),
    }
}

impl LogKernel {
    /// Kernel value at log-argument `s`, i.e. `Psi(e^s)`.
    pub fn eval_log(&self, s: f64) -> f64 {
        eval_log_raw(&self.source, s)
    }

    pub fn source(&self) -> &SigmoidalActivation {
        &self.source
    }

    pub fn kind(&self) -> SigmoidKind {
        self.source.kind
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }

    /// `Psi(e)`, the denominator floor of the normalized weights.
    pub fn value_at_e(&self) -> f64 {
        self.value_at_e
    }
}

/// `|sum_{k=-K}^{K} Psi(e^{s-k}) - 1|`: how far the truncated translates are
/// from a partition of unity.
pub fn partition_of_unity_residual(kernel: &LogKernel, s: f64, truncation: u32) -> f64 {
    assert!(truncation >= 2, "truncation must be at least 2");
    let k = truncation as i64;
    let mut sum = 0.0;
    for j in -k..=k {
        sum += kernel.eval_log(s - j as f64);
    }
    (sum - 1.0).abs()
}

/// Grid estimate of the generalized absolute moment of order `j`:
/// `sup_s max_k Psi(e^{s-k}) |s-k|^j`, scanning one period `s in [0, 1)`.
pub fn moment(kernel: &LogKernel, order: f64, truncation: u32, grid: u32) -> Result<f64> {
    if order < 0.0 {
        return Err(Error::invalid(format!("moment order must be >= 0, got {order}")));
    }
    if grid == 0 {
        return Err(Error::invalid("moment grid must be positive"));
    }
    let k = truncation as i64;
    let mut sup = 0.0f64;
    for i in 0..grid {
        let s = i as f64 / grid as f64;
        for j in -k..=k {
            let t = s - j as f64;
            let v = kernel.eval_log(t);
            if v == 0.0 {
                continue;
            }
            let weight = if order == 0.0 { 1.0 } else { t.abs().powf(order) };
            sup = sup.max(v * weight);
        }
    }
    Ok(sup)
}

pub const DEFAULT_MOMENT_TRUNCATION: u32 = 60;
pub const DEFAULT_MOMENT_GRID: u32 = 4096;

#[derive(Serialize)]
pub struct MomentTriple {
    #[serde(rename = "0")]
    pub order_0: f64,
    #[serde(rename = "1")]
    pub order_1: f64,
    #[serde(rename = "2")]
    pub order_2: f64,
}

/// One exportable catalogue line per kernel.
#[derive(Serialize)]
pub struct KernelCatalogueEntry {
    pub kind: SigmoidKind,
    pub support_radius: Option<f64>,
    pub value_at_e: f64,
    pub moments: MomentTriple,
}

/// Looks up a built-in activation by its user-facing name.
pub fn activation_by_name(name: &str) -> Result<SigmoidalActivation> {
    match name {
        "logistic" => Ok(SigmoidalActivation::logistic()),
        "tanh" | "hyperbolic-tangent" => Ok(SigmoidalActivation::hyperbolic_tangent()),
        "ramp" => Ok(SigmoidalActivation::ramp()),
        "three-level" => Ok(SigmoidalActivation::three_level()),
        other => Err(Error::invalid(format!(
            "unknown activation '{other}' (expected logistic, tanh, ramp or three-level)"
        ))),
    }
}

pub fn builtin_activations() -> Vec<SigmoidalActivation> {
    vec![
        SigmoidalActivation::logistic(),
        SigmoidalActivation::hyperbolic_tangent(),
        SigmoidalActivation::ramp(),
        SigmoidalActivation::three_level(),
    ]
}

/// Catalogue of the four built-in kernels with their first three moments.
pub fn catalogue() -> Result<Vec<KernelCatalogueEntry>> {
    builtin_activations()
        .into_iter()
        .map(|activation| {
            let kernel = make_kernel(activation)?;
            Ok(KernelCatalogueEntry {
                kind: kernel.kind(),
                support_radius: kernel.support_radius(),
                value_at_e: kernel.value_at_e(),
                moments: MomentTriple {
                    order_0: moment(&kernel, 0.0, DEFAULT_MOMENT_TRUNCATION, DEFAULT_MOMENT_GRID)?,
                    order_1: moment(&kernel, 1.0, DEFAULT_MOMENT_TRUNCATION, DEFAULT_MOMENT_GRID)?,
                    order_2: moment(&kernel, 2.0, DEFAULT_MOMENT_TRUNCATION, DEFAULT_MOMENT_GRID)?,
                },
            })
        })
        .collect()
}
