//! The built-in target functions used by the experiments.

use crate::harness::expr::Expression;
use crate::operators::TargetFunction;
use crate::{Error, Result};

/// Branch points of the piecewise target `f`.
pub const F_BREAKPOINTS: [f64; 3] = [0.4, 0.75, 1.25];

/// Piecewise target on `[0, 2]`: four branches with jumps at 0.4, 0.75, 1.25.
pub fn builtin_f(x: f64) -> f64 {
    assert!(
        (0.0..=2.0).contains(&x),
        "builtin f is defined on [0, 2], got {x}"
    );
    if x <= 0.4 {
        0.25 + 0.1 * x
    } else if x <= 0.75 {
        0.85 - 0.05 * (5.0 * x).sin()
    } else if x <= 1.25 {
        0.4 + 0.1 * x * x
    } else {
        0.65 + 0.02 * (3.0 * x).cos()
    }
}

/// Smooth oscillatory target on `[0, 2]` with decaying amplitude. Peaks
/// above 1 near `x ~ 1.1`.
pub fn builtin_g(x: f64) -> f64 {
    assert!(
        (0.0..=2.0).contains(&x),
        "builtin g is defined on [0, 2], got {x}"
    );
    0.2 + x.sin().exp() * (x * x).sin() / (1.0 + x.powi(4))
}

/// Jump magnitudes of `f` at its branch points (left limit minus right
/// limit); the function is genuinely discontinuous, these are reported
/// rather than assumed zero.
pub fn f_branch_jumps() -> Vec<(f64, f64)> {
    let eps = 1e-9;
    F_BREAKPOINTS
        .iter()
        .map(|&bp| (bp, (builtin_f(bp) - builtin_f(bp + eps)).abs()))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionId {
    FPiecewise,
    GOscillatory,
    LogLinear,
    Constant(f64),
    CustomExpression(String),
}

impl FunctionId {
    pub fn parse(spec: &str) -> Result<FunctionId> {
        match spec {
            "f" | "f-piecewise" => Ok(FunctionId::FPiecewise),
            "g" | "g-oscillatory" => Ok(FunctionId::GOscillatory),
            "log" | "log-linear" => Ok(FunctionId::LogLinear),
            other => {
                if let Some(c) = other
                    .strip_prefix("constant(")
                    .and_then(|rest| rest.strip_suffix(')'))
                {
                    let value: f64 = c.parse().map_err(|_| {
                        Error::invalid(format!("bad constant value in '{other}'"))
                    })?;
                    Ok(FunctionId::Constant(value))
                } else if let Some(e) = other
                    .strip_prefix("expr(")
                    .and_then(|rest| rest.strip_suffix(')'))
                {
                    Ok(FunctionId::CustomExpression(e.to_string()))
                } else {
                    // Fall back to treating the string as an expression.
                    Ok(FunctionId::CustomExpression(other.to_string()))
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            FunctionId::FPiecewise => "f-piecewise".into(),
            FunctionId::GOscillatory => "g-oscillatory".into(),
            FunctionId::LogLinear => "log-linear".into(),
            FunctionId::Constant(c) => format!("constant({c})"),
            FunctionId::CustomExpression(e) => format!("expr({e})"),
        }
    }
}

/// Numerically scanned range of `eval` on `[a, b]` (4096 samples).
fn scan_range(eval: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..=4096 {
        let x = a + (b - a) * i as f64 / 4096.0;
        let v = eval(x);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Builds the target function for an id on the interval `[a, b]`.
pub fn target_for(id: &FunctionId, a: f64, b: f64) -> Result<TargetFunction> {
    if !(a > 0.0 && a < b) {
        return Err(Error::invalid(format!(
            "interval must satisfy 0 < a < b, got [{a}, {b}]"
        )));
    }
    let target = match id {
        FunctionId::FPiecewise => {
            let range = scan_range(&builtin_f, a, b);
            TargetFunction::new(builtin_f, (a, b), range)
                .with_breakpoints(F_BREAKPOINTS.to_vec())
        }
        FunctionId::GOscillatory => {
            let range = scan_range(&builtin_g, a, b);
            TargetFunction::new(builtin_g, (a, b), range)
        }
        FunctionId::LogLinear => TargetFunction::new(|z: f64| z.ln(), (a, b), (a.ln(), b.ln())),
        FunctionId::Constant(c) => TargetFunction::constant(*c, (a, b)),
        FunctionId::CustomExpression(text) => {
            let expression = Expression::parse(text)?;
            let eval = move |x: f64| expression.eval(x);
            let range = scan_range(&eval, a, b);
            TargetFunction::new(eval, (a, b), range)
        }
    };
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_branch_values() {
        assert!((builtin_f(0.0) - 0.25).abs() < 1e-15);
        assert!((builtin_f(1.0) - 0.5).abs() < 1e-15);
        assert!((builtin_f(2.0) - (0.65 + 0.02 * 6.0f64.cos())).abs() < 1e-15);
        assert!((builtin_f(2.0) - 0.669204).abs() < 1e-6);
    }

    #[test]
    fn f_closed_branch_boundaries() {
        assert!((builtin_f(0.4) - 0.29).abs() < 1e-15);
        assert!((builtin_f(0.75) - (0.85 - 0.05 * 3.75f64.sin())).abs() < 1e-15);
        assert!((builtin_f(1.25) - (0.4 + 0.1 * 1.25 * 1.25)).abs() < 1e-15);
    }

    #[test]
    fn g_values() {
        assert!((builtin_g(0.0) - 0.2).abs() < 1e-15);
        assert!((builtin_g(1.0) - 1.17606).abs() < 1e-4);
        assert!((builtin_g(2.0) - 0.08948).abs() < 1e-4);
        assert!(builtin_g(2.0) > 0.0);
    }

    #[test]
    fn g_exceeds_unit_range() {
        let (_, hi) = scan_range(&builtin_g, 0.05, 2.0);
        assert!(hi > 1.0 && hi < 1.2);
    }

    #[test]
    #[should_panic]
    fn f_rejects_out_of_domain() {
        builtin_f(2.5);
    }

    #[test]
    fn f_jumps_reported() {
        let jumps = f_branch_jumps();
        assert_eq!(jumps.len(), 3);
        // The 0.4 branch point carries a genuine jump.
        assert!(jumps[0].1 > 0.1);
    }

    #[test]
    fn id_parsing() {
        assert_eq!(FunctionId::parse("f").unwrap(), FunctionId::FPiecewise);
        assert_eq!(
            FunctionId::parse("g-oscillatory").unwrap(),
            FunctionId::GOscillatory
        );
        assert_eq!(
            FunctionId::parse("constant(0.4)").unwrap(),
            FunctionId::Constant(0.4)
        );
        assert!(matches!(
            FunctionId::parse("sin(x)+1").unwrap(),
            FunctionId::CustomExpression(_)
        ));
    }

    #[test]
    fn target_for_expression() {
        let id = FunctionId::parse("expr(0.5*x)").unwrap();
        let t = target_for(&id, 0.5, 2.0).unwrap();
        assert!((t.eval(1.0) - 0.5).abs() < 1e-15);
    }
}
