//! Index windows, normalized max-min weights and the lattice combination
//! shared by both operators.
//!
//! All weight arithmetic happens in log-argument space `s = n log z - k`;
//! `z^n` is never formed, so large `n` cannot overflow.

use crate::kernels::LogKernel;
use crate::{Error, Result};

/// Exactness slack for snapping `n log a` to an integer endpoint.
const SNAP_TOL: f64 = 1e-9;

/// The integer sample indices `k` with `a <= e^{k/n} <= b`.
#[derive(Clone, Copy, Debug)]
pub struct IndexWindow {
    pub a: f64,
    pub b: f64,
    pub n: u32,
    pub k_lo: i64,
    pub k_hi: i64,
}

impl IndexWindow {
    pub fn len(&self) -> usize {
        (self.k_hi - self.k_lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty windows
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.k_lo..=self.k_hi
    }
}

fn snapped_ceil(x: f64, tol: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= tol {
        r as i64
    } else {
        x.ceil() as i64
    }
}

fn snapped_floor(x: f64, tol: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= tol {
        r as i64
    } else {
        x.floor() as i64
    }
}

/// `k_lo = ceil(n log a)`, `k_hi = floor(n log b)`, with an integrality snap
/// so exactly representable endpoints do not drift off by one.
pub fn index_window(a: f64, b: f64, n: u32) -> Result<IndexWindow> {
    if !(a > 0.0 && a < b) {
        return Err(Error::invalid(format!(
            "interval must satisfy 0 < a < b, got [{a}, {b}]"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("sample density n must be positive"));
    }
    let tol = SNAP_TOL * n as f64;
    let k_lo = snapped_ceil(n as f64 * a.ln(), tol);
    let k_hi = snapped_floor(n as f64 * b.ln(), tol);
    if k_lo > k_hi {
        return Err(Error::EmptyWindow { a, b, n });
    }
    Ok(IndexWindow { a, b, n, k_lo, k_hi })
}

/// Self-normalized kernel weights at a point: `w_k = Psi_k / max_j Psi_j`.
#[derive(Clone, Debug)]
pub struct WeightVector {
    pub window: IndexWindow,
    pub z: f64,
    pub weights: Vec<f64>,
    pub denominator: f64,
}

/// Computes the normalized weight vector at `z in [a, b]`.
///
/// Errors with `DegenerateDenominator` if the maximum raw kernel value falls
/// below `Psi(e)`, which a correct kernel cannot produce inside the window.
pub fn weights(kernel: &LogKernel, window: &IndexWindow, z: f64) -> Result<WeightVector> {
    let s0 = window.n as f64 * z.ln();
    let raw: Vec<f64> = window
        .indices()
        .map(|k| kernel.eval_log(s0 - k as f64))
        .collect();
    let denominator = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if denominator < kernel.value_at_e() - 1e-12 {
        return Err(Error::DegenerateDenominator {
            denominator,
            value_at_e: kernel.value_at_e(),
            z,
        });
    }
    let weights = raw.iter().map(|v| v / denominator).collect();
    Ok(WeightVector {
        window: *window,
        z,
        weights,
        denominator,
    })
}

/// The near-diagonal index set: window indices with `|k/n - log z| <= gamma`.
pub fn gamma_window(window: &IndexWindow, z: f64, gamma: f64) -> Vec<i64> {
    let lz = z.ln();
    window
        .indices()
        .filter(|&k| (k as f64 / window.n as f64 - lz).abs() <= gamma)
        .collect()
}

/// `max_k (values[k] min weights[k])`, the core lattice combination.
pub fn maxmin_combine(values: &[f64], weights: &WeightVector) -> Result<f64> {
    combine(values, &weights.weights)
}

/// Same combination over two raw slices.
pub fn combine(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} values vs {} weights",
            values.len(),
            weights.len()
        )));
    }
    Ok(values
        .iter()
        .zip(weights)
        .map(|(v, w)| v.min(*w))
        .fold(0.0f64, f64::max))
}
