//! The error-table experiment driver: run both operators over a list of
//! resolutions on a shared evaluation grid and collect sup/L1 errors.

use crate::analysis::{error_norms_of, ErrorNorms};
use crate::harness::builtins::{target_for, FunctionId};
use crate::kernels::{activation_by_name, make_kernel};
use crate::operators::{
    apply_on_grid, transformed_target, Extension, OperatorConfig, OperatorKind, QuadratureSpec,
    RangePolicy, TargetFunction,
};
use crate::{Error, Result};
use serde::Serialize;

pub const DEFAULT_INTERVAL: (f64, f64) = (0.05, 2.0);
pub const DEFAULT_GRID_POINTS: u32 = 400;
pub const DEFAULT_N_LIST: [u32; 6] = [10, 25, 45, 75, 100, 120];

/// Full description of one table run. Deterministic: the same experiment
/// always produces bit-identical rows.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub function: FunctionId,
    pub activation: String,
    pub interval: (f64, f64),
    pub n_list: Vec<u32>,
    pub grid_points: u32,
    pub quadrature: QuadratureSpec,
    pub extension: Extension,
    pub range_policy: RangePolicy,
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment {
            function: FunctionId::FPiecewise,
            activation: "ramp".into(),
            interval: DEFAULT_INTERVAL,
            n_list: DEFAULT_N_LIST.to_vec(),
            grid_points: DEFAULT_GRID_POINTS,
            quadrature: QuadratureSpec::default(),
            extension: Extension::ClampAtB,
            range_policy: RangePolicy::ClipToUnit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    /// The lattice window `[n log a, n log b]` held no integer for this `n`;
    /// the row is kept but carries no errors.
    EmptyWindow,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ErrorReportRow {
    pub n: u32,
    pub gm_l1: f64,
    pub mk_l1: f64,
    pub gm_sup: f64,
    pub mk_sup: f64,
    pub status: RowStatus,
}

/// Uniform grid of `points` values on `[a, b]`, endpoints included.
pub fn uniform_grid(a: f64, b: f64, points: u32) -> Vec<f64> {
    assert!(points >= 2, "grid needs at least 2 points");
    (0..points)
        .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
        .collect()
}

fn norms_for(
    target: &TargetFunction,
    cfg: &OperatorConfig,
    grid: &[f64],
    which: OperatorKind,
) -> Result<ErrorNorms> {
    let approx = apply_on_grid(target, cfg, grid, which)?;
    // Compare like with like: against the clipped target under clipping,
    // against the raw target once affine rescaling has been inverted.
    match cfg.range_policy {
        RangePolicy::AffineRescale => error_norms_of(|z| target.eval(z), &approx, grid),
        _ => error_norms_of(
            |z| transformed_target(target, cfg, z).unwrap_or(f64::NAN),
            &approx,
            grid,
        ),
    }
}

/// Runs the experiment and returns one row per requested `n`.
pub fn run_error_table(experiment: &Experiment) -> Result<Vec<ErrorReportRow>> {
    let (a, b) = experiment.interval;
    if experiment.grid_points < 2 {
        return Err(Error::invalid("evaluation grid needs at least 2 points"));
    }
    if experiment.n_list.is_empty() {
        return Err(Error::invalid("n list must not be empty"));
    }
    if experiment.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("n list must be strictly increasing"));
    }
    let target = target_for(&experiment.function, a, b)?;
    let grid = uniform_grid(a, b, experiment.grid_points);

    let mut rows = Vec::with_capacity(experiment.n_list.len());
    for &n in &experiment.n_list {
        let activation = activation_by_name(&experiment.activation)?;
        let kernel = make_kernel(activation)?;
        let mut cfg = OperatorConfig::new(kernel, a, b, n);
        cfg.quadrature = experiment.quadrature;
        cfg.extension = experiment.extension;
        cfg.range_policy = experiment.range_policy;

        if let Err(Error::EmptyWindow { .. }) = cfg.window() {
            rows.push(ErrorReportRow {
                n,
                gm_l1: f64::NAN,
                mk_l1: f64::NAN,
                gm_sup: f64::NAN,
                mk_sup: f64::NAN,
                status: RowStatus::EmptyWindow,
            });
            continue;
        }

        let gm = norms_for(&target, &cfg, &grid, OperatorKind::Gm)?;
        let mk = norms_for(&target, &cfg, &grid, OperatorKind::Mk)?;
        rows.push(ErrorReportRow {
            n,
            gm_l1: gm.l1,
            mk_l1: mk.l1,
            gm_sup: gm.sup,
            mk_sup: mk.sup,
            status: RowStatus::Ok,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_endpoints() {
        let g = uniform_grid(0.05, 2.0, 400);
        assert_eq!(g.len(), 400);
        assert_eq!(g[0], 0.05);
        assert_eq!(*g.last().unwrap(), 2.0);
    }

    #[test]
    fn constant_target_has_zero_error() {
        let experiment = Experiment {
            function: FunctionId::Constant(0.4),
            activation: "ramp".into(),
            interval: (0.5, 2.0),
            n_list: vec![5, 10],
            grid_points: 50,
            ..Experiment::default()
        };
        let rows = run_error_table(&experiment).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert_eq!(row.status, RowStatus::Ok);
            assert!(row.gm_sup < 1e-12 && row.mk_sup < 1e-12);
            assert!(row.gm_l1 < 1e-12 && row.mk_l1 < 1e-12);
        }
    }

    #[test]
    fn empty_window_rows_are_flagged() {
        let experiment = Experiment {
            function: FunctionId::LogLinear,
            activation: "ramp".into(),
            interval: (1.9, 2.0),
            n_list: vec![5, 50],
            grid_points: 16,
            range_policy: RangePolicy::AffineRescale,
            ..Experiment::default()
        };
        let rows = run_error_table(&experiment).unwrap();
        assert_eq!(rows[0].status, RowStatus::EmptyWindow);
        assert!(rows[0].gm_l1.is_nan());
        assert_eq!(rows[1].status, RowStatus::Ok);
    }

    #[test]
    fn errors_shrink_with_n_for_log_target() {
        let experiment = Experiment {
            function: FunctionId::LogLinear,
            activation: "logistic".into(),
            interval: (1.0, std::f64::consts::E),
            n_list: vec![10, 80],
            grid_points: 100,
            range_policy: RangePolicy::AffineRescale,
            ..Experiment::default()
        };
        let rows = run_error_table(&experiment).unwrap();
        assert!(rows[1].gm_sup < rows[0].gm_sup);
        assert!(rows[1].mk_l1 < rows[0].mk_l1);
    }

    #[test]
    fn deterministic_rows() {
        let experiment = Experiment {
            n_list: vec![10],
            grid_points: 60,
            ..Experiment::default()
        };
        let first = run_error_table(&experiment).unwrap();
        let second = run_error_table(&experiment).unwrap();
        assert_eq!(first[0].gm_l1.to_bits(), second[0].gm_l1.to_bits());
        assert_eq!(first[0].mk_sup.to_bits(), second[0].mk_sup.to_bits());
    }

    #[test]
    fn unknown_activation_rejected() {
        let experiment = Experiment {
            activation: "step".into(),
            n_list: vec![10],
            ..Experiment::default()
        };
        assert!(run_error_table(&experiment).is_err());
    }
}
