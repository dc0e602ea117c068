//! The two nonlinear sampling operators: the sample-based max-min operator
//! and its Kantorovich variant built on cell means.

use crate::kernels::LogKernel;
use crate::lattice::{self, IndexWindow};
use crate::quad;
use crate::{Error, Result};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre,
    CompositeSimpson,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub points: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: QuadratureRule::GaussLegendre,
            points: 8,
        }
    }
}

/// What to do when the top Kantorovich cell pokes past `log b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// Freeze the integrand at `F(b)` beyond the right endpoint. Preserves
    /// exact constant reproduction.
    ClampAtB,
    /// Renormalize the mean over the part of the cell inside `[log a, log b]`.
    TruncateCell,
}

/// How sample values are forced into the unit range the lattice needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangePolicy {
    /// Error out on any value outside `[0, 1]`.
    AssertUnitRange,
    /// Clip values into `[0, 1]` before combining.
    ClipToUnit,
    /// Map the declared range onto `[0, 1]`, combine, then invert.
    AffineRescale,
}

#[derive(Clone, Debug)]
pub struct OperatorConfig {
    pub kernel: LogKernel,
    pub a: f64,
    pub b: f64,
    pub n: u32,
    pub quadrature: QuadratureSpec,
    pub extension: Extension,
    pub range_policy: RangePolicy,
}

impl OperatorConfig {
    pub fn new(kernel: LogKernel, a: f64, b: f64, n: u32) -> Self {
        OperatorConfig {
            kernel,
            a,
            b,
            n,
            quadrature: QuadratureSpec::default(),
            extension: Extension::ClampAtB,
            range_policy: RangePolicy::ClipToUnit,
        }
    }

    pub fn window(&self) -> Result<IndexWindow> {
        lattice::index_window(self.a, self.b, self.n)
    }
}

/// A function on `[a, b] subset R_+` with enough metadata for the operators:
/// a declared range (for affine rescaling) and the discontinuity locations
/// (so quadrature cells can be split there).
#[derive(Clone)]
pub struct TargetFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub domain: (f64, f64),
    pub declared_range: (f64, f64),
    /// Breakpoints in `z` where the function is non-smooth.
    pub breakpoints: Vec<f64>,
}

impl TargetFunction {
    pub fn new(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
        declared_range: (f64, f64),
    ) -> Self {
        TargetFunction {
            eval: Arc::new(eval),
            domain,
            declared_range,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn constant(c: f64, domain: (f64, f64)) -> Self {
        TargetFunction::new(move |_| c, domain, (c, c))
    }

    pub fn eval(&self, z: f64) -> f64 {
        (self.eval)(z)
    }
}

impl std::fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TargetFunction")
            .field("domain", &self.domain)
            .field("declared_range", &self.declared_range)
            .finish()
    }
}

/// Range policy applied pointwise to raw function values.
fn transform(policy: RangePolicy, range: (f64, f64), value: f64, z: f64) -> Result<f64> {
    match policy {
        RangePolicy::AssertUnitRange => {
            if !(-1e-12..=1.0 + 1e-12).contains(&value) {
                Err(Error::RangeViolation { value, z })
            } else {
                Ok(value.clamp(0.0, 1.0))
            }
        }
        RangePolicy::ClipToUnit => Ok(value.clamp(0.0, 1.0)),
        RangePolicy::AffineRescale => {
            let (lo, hi) = range;
            if hi <= lo {
                return Err(Error::invalid(format!(
                    "declared range [{lo}, {hi}] cannot be rescaled"
                )));
            }
            Ok(((value - lo) / (hi - lo)).clamp(0.0, 1.0))
        }
    }
}

fn untransform(policy: RangePolicy, range: (f64, f64), value: f64) -> f64 {
    match policy {
        RangePolicy::AffineRescale => {
            let (lo, hi) = range;
            value * (hi - lo) + lo
        }
        _ => value,
    }
}

/// The target as the operator sees it: with the range policy applied
/// pointwise. Useful for like-with-like error comparisons.
pub fn transformed_target(
    target: &TargetFunction,
    cfg: &OperatorConfig,
    z: f64,
) -> Result<f64> {
    transform(cfg.range_policy, target.declared_range, target.eval(z), z)
}

/// Max-min operator at a point: `max_k ( F(e^{k/n}) min w_k(z) )`.
pub fn gm_apply(target: &TargetFunction, cfg: &OperatorConfig, z: f64) -> Result<f64> {
    GmOperator::new(target, cfg)?.eval(z)
}

/// Kantorovich operator at a point: cell means instead of samples.
pub fn mk_apply(target: &TargetFunction, cfg: &OperatorConfig, z: f64) -> Result<f64> {
    MkOperator::new(target, cfg)?.eval(z)
}

/// Sample-based operator with the per-index samples computed once.
pub struct GmOperator<'a> {
    cfg: &'a OperatorConfig,
    window: IndexWindow,
    samples: Vec<f64>,
    range: (f64, f64),
}

impl<'a> GmOperator<'a> {
    pub fn new(target: &TargetFunction, cfg: &'a OperatorConfig) -> Result<Self> {
        let window = cfg.window()?;
        let samples = window
            .indices()
            .map(|k| {
                let node = (k as f64 / cfg.n as f64).exp();
                transform(cfg.range_policy, target.declared_range, target.eval(node), node)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GmOperator {
            cfg,
            window,
            samples,
            range: target.declared_range,
        })
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        let wv = lattice::weights(&self.cfg.kernel, &self.window, z)?;
        let combined = lattice::maxmin_combine(&self.samples, &wv)?;
        Ok(untransform(self.cfg.range_policy, self.range, combined))
    }
}

/// Kantorovich operator with all cell means computed once.
pub struct MkOperator<'a> {
    cfg: &'a OperatorConfig,
    window: IndexWindow,
    means: Vec<f64>,
    range: (f64, f64),
}

impl<'a> MkOperator<'a> {
    pub fn new(target: &TargetFunction, cfg: &'a OperatorConfig) -> Result<Self> {
        let window = cfg.window()?;
        let means = window
            .indices()
            .map(|k| cell_mean(target, cfg, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(MkOperator {
            cfg,
            window,
            means,
            range: target.declared_range,
        })
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        let wv = lattice::weights(&self.cfg.kernel, &self.window, z)?;
        let combined = lattice::maxmin_combine(&self.means, &wv)?;
        Ok(untransform(self.cfg.range_policy, self.range, combined))
    }
}

/// `n * integral_{k/n}^{(k+1)/n} F(e^u) du` with the range policy applied to
/// the integrand and the configured extension past `log b`.
pub fn cell_mean(target: &TargetFunction, cfg: &OperatorConfig, k: i64) -> Result<f64> {
    if cfg.quadrature.points < 2 {
        return Err(Error::invalid("quadrature needs at least 2 points"));
    }
    let n = cfg.n as f64;
    let lo = k as f64 / n;
    let hi = (k + 1) as f64 / n;
    let log_b = cfg.b.ln();
    let policy = cfg.range_policy;
    let range = target.declared_range;

    // The integrand in u, with the clamp extension folded in.
    let clamp_at = if cfg.extension == Extension::ClampAtB { Some(log_b) } else { None };
    let violation: std::cell::Cell<Option<(f64, f64)>> = std::cell::Cell::new(None);
    let integrand = |u: f64| {
        let u_eff = match clamp_at {
            Some(cap) if u > cap => cap,
            _ => u,
        };
        let z = u_eff.exp();
        match transform(policy, range, target.eval(z), z) {
            Ok(v) => v,
            Err(Error::RangeViolation { value, z }) => {
                if violation.get().is_none() {
                    violation.set(Some((value, z)));
                }
                0.0
            }
            Err(_) => 0.0,
        }
    };

    // Cut at function breakpoints (mapped into u) and at the clamp boundary.
    let mut cuts: Vec<f64> = target
        .breakpoints
        .iter()
        .filter(|&&bp| bp > 0.0)
        .map(|bp| bp.ln())
        .collect();
    if let Some(cap) = clamp_at {
        cuts.push(cap);
    }

    let spec = cfg.quadrature;
    let rule = move |f: &dyn Fn(f64) -> f64, a: f64, b: f64| match spec.rule {
        QuadratureRule::GaussLegendre => quad::integrate_gl(f, a, b, spec.points as usize),
        QuadratureRule::CompositeSimpson => quad::integrate_simpson(f, a, b, spec.points as usize),
    };

    let (upper, scale) = match cfg.extension {
        Extension::ClampAtB => (hi, n),
        Extension::TruncateCell => {
            let upper = hi.min(log_b);
            if upper <= lo {
                // Degenerate truncated cell: fall back to the boundary value.
                let v = transform(policy, range, target.eval(cfg.b), cfg.b)?;
                return Ok(v);
            }
            (upper, 1.0 / (upper - lo))
        }
    };

    let integral = quad::integrate_split(&integrand, lo, upper, &cuts, rule);
    if let Some((value, z)) = violation.get() {
        return Err(Error::RangeViolation { value, z });
    }
    Ok(scale * integral)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Gm,
    Mk,
}

/// Elementwise operator evaluation on a sorted grid, with the offending index
/// attached to any point-level failure.
pub fn apply_on_grid(
    target: &TargetFunction,
    cfg: &OperatorConfig,
    grid: &[f64],
    which: OperatorKind,
) -> Result<Vec<f64>> {
    let eval: Box<dyn Fn(f64) -> Result<f64>> = match which {
        OperatorKind::Gm => {
            let op = GmOperator::new(target, cfg)?;
            Box::new(move |z| op.eval(z))
        }
        OperatorKind::Mk => {
            let op = MkOperator::new(target, cfg)?;
            Box::new(move |z| op.eval(z))
        }
    };
    grid.iter()
        .enumerate()
        .map(|(index, &z)| {
            eval(z).map_err(|source| Error::AtGridPoint {
                index,
                z,
                source: Box::new(source),
            })
        })
        .collect()
}
