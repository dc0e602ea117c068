//! Orlicz-space machinery over the Haar measure `dz/z`: convex phi-functions,
//! the modular functional, the Luxemburg norm and modular-convergence
//! experiments for the Kantorovich operator.
//!
//! All modulars integrate over `[a, b]` only; the built-in targets vanish
//! outside, so the half-line integral reduces to this range.

use crate::operators::{transformed_target, MkOperator, OperatorConfig, TargetFunction};
use crate::quad;
use crate::{Error, Result};
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone)]
pub enum PhiKind {
    /// `u^p`, `p > 1`. Satisfies the doubling condition with `M = 2^p`.
    Power(f64),
    /// `exp(u^alpha) - 1`, `alpha > 0`. Fails the doubling condition.
    Exponential(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// Whether `eta(2u) <= M eta(u)` holds on the diagnostic grid.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Delta2Verdict {
    pub holds: bool,
    /// Witness constant `M` when the condition holds, else the `u` at which
    /// the ratio was still growing.
    pub m_or_witness: f64,
}

/// A convex function with `eta(0) = 0`, positive and nondecreasing on the
/// positive half line.
#[derive(Clone)]
pub struct PhiFunction {
    pub kind: PhiKind,
    pub delta2: Delta2Verdict,
}

impl PhiFunction {
    pub fn power(p: f64) -> Result<Self> {
        if p <= 1.0 {
            return Err(Error::invalid(format!("power exponent must be > 1, got {p}")));
        }
        let mut phi = PhiFunction {
            kind: PhiKind::Power(p),
            delta2: Delta2Verdict {
                holds: true,
                m_or_witness: 0.0,
            },
        };
        phi.delta2 = delta2_check(&phi, &default_delta2_grid());
        Ok(phi)
    }

    pub fn exponential(alpha: f64) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(Error::invalid(format!("alpha must be > 0, got {alpha}")));
        }
        let mut phi = PhiFunction {
            kind: PhiKind::Exponential(alpha),
            delta2: Delta2Verdict {
                holds: false,
                m_or_witness: 0.0,
            },
        };
        phi.delta2 = delta2_check(&phi, &default_delta2_grid());
        Ok(phi)
    }

    pub fn custom(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let mut phi = PhiFunction {
            kind: PhiKind::Custom(Arc::new(eval)),
            delta2: Delta2Verdict {
                holds: false,
                m_or_witness: 0.0,
            },
        };
        phi.delta2 = delta2_check(&phi, &default_delta2_grid());
        phi
    }

    pub fn eval(&self, u: f64) -> f64 {
        match &self.kind {
            PhiKind::Power(p) => u.powf(*p),
            PhiKind::Exponential(alpha) => (u.powf(*alpha)).exp() - 1.0,
            PhiKind::Custom(f) => f(u),
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            PhiKind::Power(p) => format!("power-{p}"),
            PhiKind::Exponential(alpha) => format!("exp-{alpha}"),
            PhiKind::Custom(_) => "custom".to_string(),
        }
    }
}

pub fn default_delta2_grid() -> Vec<f64> {
    // Log-uniform span of [1e-3, 1e3].
    (0..=120)
        .map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 120.0))
        .collect()
}

/// Grid diagnostic for the doubling condition: the sup of `eta(2u)/eta(u)`.
///
/// Holds when the ratio stays flat (variation under 10%) across the top
/// decade of the grid; otherwise the largest `u` scanned is the witness of
/// divergence.
pub fn delta2_check(eta: &PhiFunction, u_grid: &[f64]) -> Delta2Verdict {
    let mut ratios: Vec<(f64, f64)> = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        if u <= 0.0 {
            continue;
        }
        let denom = eta.eval(u);
        if denom <= 0.0 || !denom.is_finite() {
            continue;
        }
        let num = eta.eval(2.0 * u);
        if !num.is_finite() {
            // Doubling already overflows: unbounded ratio.
            return Delta2Verdict {
                holds: false,
                m_or_witness: u,
            };
        }
        ratios.push((u, num / denom));
    }
    let sup = ratios.iter().map(|&(_, r)| r).fold(0.0f64, f64::max);
    let u_max = ratios.last().map(|&(u, _)| u).unwrap_or(0.0);
    let top_decade: Vec<f64> = ratios
        .iter()
        .filter(|&&(u, _)| u >= u_max / 10.0)
        .map(|&(_, r)| r)
        .collect();
    let top_min = top_decade.iter().cloned().fold(f64::INFINITY, f64::min);
    let top_max = top_decade.iter().cloned().fold(0.0f64, f64::max);
    if top_max <= top_min * 1.10 {
        Delta2Verdict {
            holds: true,
            m_or_witness: sup,
        }
    } else {
        Delta2Verdict {
            holds: false,
            m_or_witness: u_max,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ModularValue {
    pub value: f64,
    pub divergent: bool,
    pub integrand_cells: u32,
}

/// `integral_a^b eta(|F(z)|) dz/z`, computed in `u = log z` with
/// Gauss-Legendre panels on uniform cells.
pub fn modular(
    eta: &PhiFunction,
    target: &TargetFunction,
    a: f64,
    b: f64,
    cells: u32,
) -> Result<ModularValue> {
    modular_of(eta, |z| target.eval(z), a, b, cells)
}

/// Modular of an arbitrary integrand, same discretization as [`modular`].
pub fn modular_of(
    eta: &PhiFunction,
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    cells: u32,
) -> Result<ModularValue> {
    if a >= b {
        return Err(Error::invalid(format!("need a < b, got [{a}, {b}]")));
    }
    if cells < 16 {
        return Err(Error::invalid("modular integration needs at least 16 cells"));
    }
    let (la, lb) = (a.ln(), b.ln());
    let h = (lb - la) / cells as f64;
    let integrand = |u: f64| eta.eval(f(u.exp()).abs());
    let mut value = 0.0;
    for i in 0..cells {
        let lo = la + i as f64 * h;
        value += quad::integrate_gl(&integrand, lo, lo + h, 8);
    }
    Ok(ModularValue {
        value,
        divergent: !value.is_finite(),
        integrand_cells: cells,
    })
}

const LUXEMBURG_CELLS: u32 = 256;

/// `inf { l > 0 : modular(F / l) <= 1 }` by bracketing and bisection to the
/// requested relative tolerance.
pub fn luxemburg_norm(
    eta: &PhiFunction,
    target: &TargetFunction,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    if tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let modular_at = |ell: f64| -> Result<f64> {
        Ok(modular_of(eta, |z| target.eval(z) / ell, a, b, LUXEMBURG_CELLS)?.value)
    };

    // Start the bracket at sup|F| on a scan grid.
    let mut sup = 0.0f64;
    for i in 0..=512 {
        let u = a.ln() + (b.ln() - a.ln()) * i as f64 / 512.0;
        sup = sup.max(target.eval(u.exp()).abs());
    }
    if sup == 0.0 {
        return Ok(0.0);
    }

    let mut hi = sup;
    let mut iterations = 0u32;
    while modular_at(hi)? > 1.0 {
        hi *= 2.0;
        iterations += 1;
        if iterations > 200 {
            return Err(Error::BracketFailure { iterations });
        }
    }
    let mut lo = hi;
    while modular_at(lo * 0.5)? <= 1.0 {
        lo *= 0.5;
        iterations += 1;
        if iterations > 200 {
            // The modular stays below 1 for arbitrarily small scalings:
            // the norm is 0 (F vanishes a.e. on the grid).
            return Ok(0.0);
        }
    }
    lo *= 0.5;
    // Invariant: modular(lo) > 1 possibly at lo, <= 1 at hi.
    while (hi - lo) / hi > tol {
        let mid = 0.5 * (lo + hi);
        if modular_at(mid)? <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `I_eta[ lambda (MK_n F - F) ]` over `[a, b]`, with the error measured
/// against the range-policy-transformed target.
pub fn modular_error(
    eta: &PhiFunction,
    lambda: f64,
    target: &TargetFunction,
    cfg: &OperatorConfig,
    grid_cells: u32,
) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::invalid("lambda must be positive"));
    }
    let op = MkOperator::new(target, cfg)?;
    let err: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let value = modular_of(
        eta,
        |z| match (op.eval(z), transformed_target(target, cfg, z)) {
            (Ok(approx), Ok(reference)) => lambda * (approx - reference),
            (Err(e), _) | (_, Err(e)) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        cfg.a,
        cfg.b,
        grid_cells,
    )?
    .value;
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}
