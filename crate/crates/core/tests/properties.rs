//! Property-based checks of the algebraic inequalities behind the operators:
//! lattice lemmas, kernel shape, modulus bounds and Orlicz modular laws.

use mmexp_core::analysis::log_modulus;
use mmexp_core::harness::builtins::{builtin_f, builtin_g, target_for, FunctionId};
use mmexp_core::kernels::{make_kernel, LogKernel, SigmoidKind, SigmoidalActivation};
use mmexp_core::lattice::{self, index_window};
use mmexp_core::operators::{
    apply_on_grid, gm_apply, mk_apply, MkOperator, OperatorConfig, OperatorKind, TargetFunction,
};
use mmexp_core::orlicz::{luxemburg_norm, modular, modular_of, PhiFunction};
use proptest::prelude::*;

const E: f64 = std::f64::consts::E;

fn kernel(kind: SigmoidKind) -> LogKernel {
    let activation = match kind {
        SigmoidKind::Logistic => SigmoidalActivation::logistic(),
        SigmoidKind::HyperbolicTangent => SigmoidalActivation::hyperbolic_tangent(),
        SigmoidKind::Ramp => SigmoidalActivation::ramp(),
        SigmoidKind::ThreeLevel => SigmoidalActivation::three_level(),
        SigmoidKind::Custom => unreachable!(),
    };
    make_kernel(activation).unwrap()
}

fn any_kind() -> impl Strategy<Value = SigmoidKind> {
    prop_oneof![
        Just(SigmoidKind::Logistic),
        Just(SigmoidKind::HyperbolicTangent),
        Just(SigmoidKind::Ramp),
        Just(SigmoidKind::ThreeLevel),
    ]
}

fn unit_values(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, 1..=max_len)
}

proptest! {
    #[test]
    fn lattice_monotone_in_values(v in unit_values(16), bump in 0.0f64..=0.5) {
        let w: Vec<f64> = (0..v.len()).map(|i| if i == 0 { 1.0 } else { 0.3 }).collect();
        let higher: Vec<f64> = v.iter().map(|x| (x + bump).min(1.0)).collect();
        let lo = lattice::combine(&v, &w).unwrap();
        let hi = lattice::combine(&higher, &w).unwrap();
        prop_assert!(lo <= hi + 1e-12);
    }

    #[test]
    fn lattice_subadditive(v1 in unit_values(16), v2 in unit_values(16)) {
        let len = v1.len().min(v2.len());
        let a: Vec<f64> = v1[..len].iter().map(|x| 0.5 * x).collect();
        let b: Vec<f64> = v2[..len].iter().map(|x| 0.5 * x).collect();
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let mut w = vec![0.4; len];
        w[len / 2] = 1.0;
        let lhs = lattice::combine(&sum, &w).unwrap();
        let rhs = lattice::combine(&a, &w).unwrap() + lattice::combine(&b, &w).unwrap();
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn lattice_lipschitz_in_values(v1 in unit_values(16), v2 in unit_values(16)) {
        let len = v1.len().min(v2.len());
        let mut w = vec![0.25; len];
        w[0] = 1.0;
        let d: Vec<f64> = v1[..len]
            .iter()
            .zip(&v2[..len])
            .map(|(a, b)| (a - b).abs())
            .collect();
        let c1 = lattice::combine(&v1[..len], &w).unwrap();
        let c2 = lattice::combine(&v2[..len], &w).unwrap();
        prop_assert!((c1 - c2).abs() <= lattice::combine(&d, &w).unwrap() + 1e-12);
    }

    #[test]
    fn lattice_pseudo_linear(
        v1 in unit_values(12),
        v2 in unit_values(12),
        alpha in 0.0f64..=1.0,
        beta in 0.0f64..=1.0,
    ) {
        let len = v1.len().min(v2.len());
        let mut w = vec![0.6; len];
        w[len - 1] = 1.0;
        let mixed: Vec<f64> = v1[..len]
            .iter()
            .zip(&v2[..len])
            .map(|(a, b)| alpha.min(*a).max(beta.min(*b)))
            .collect();
        let lhs = lattice::combine(&mixed, &w).unwrap();
        let c1 = lattice::combine(&v1[..len], &w).unwrap();
        let c2 = lattice::combine(&v2[..len], &w).unwrap();
        prop_assert!((lhs - alpha.min(c1).max(beta.min(c2))).abs() <= 1e-12);
    }

    #[test]
    fn weights_normalized(kind in any_kind(), t in 0.0f64..=1.0, n in 2u32..=40) {
        let k = kernel(kind);
        let window = index_window(1.0, E, n).unwrap();
        let z = (t).exp().min(E).max(1.0);
        let wv = lattice::weights(&k, &window, z).unwrap();
        let max = wv.weights.iter().cloned().fold(0.0f64, f64::max);
        prop_assert!((max - 1.0).abs() <= 1e-12);
        prop_assert!(wv.weights.iter().all(|&w| (-1e-15..=1.0 + 1e-12).contains(&w)));
    }

    #[test]
    fn kernel_even_and_unimodal(kind in any_kind(), s1 in -6.0f64..=0.0, s2 in -6.0f64..=0.0) {
        let k = kernel(kind);
        prop_assert!((k.eval_log(s1) - k.eval_log(-s1)).abs() <= 1e-12);
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        prop_assert!(k.eval_log(lo) <= k.eval_log(hi) + 1e-12);
    }

    #[test]
    fn modulus_beta_scaling(beta in 0.1f64..=4.0, rho in 0.05f64..=0.5) {
        // Definition 4 (b): Omega(F, beta rho) <= (beta + 1) Omega(F, rho).
        let target = TargetFunction::new(|z: f64| z.ln(), (1.0, E), (0.0, 1.0));
        let scaled = log_modulus(&target, beta * rho, 256).unwrap().value;
        let base = log_modulus(&target, rho, 256).unwrap().value;
        prop_assert!(scaled <= (beta + 1.0) * base + 1e-6);
    }

    #[test]
    fn modulus_pointwise_bound(u in 0.0f64..=1.0, t in 0.0f64..=1.0, rho in 0.05f64..=0.5) {
        // Definition 4 (c): |F(s) - F(t)| <= Omega(F, rho) (1 + |log s - log t| / rho).
        let target = TargetFunction::new(|z: f64| (2.0 * z.ln()).sin().abs(), (1.0, E), (0.0, 1.0));
        let omega = log_modulus(&target, rho, 512).unwrap().value;
        let (s, z) = (u.exp(), t.exp());
        let lhs = (target.eval(s) - target.eval(z)).abs();
        prop_assert!(lhs <= omega * (1.0 + (u - t).abs() / rho) + 1e-6);
    }

    #[test]
    fn modular_monotone_and_convex_in_lambda(l1 in 0.1f64..=2.0, step in 0.05f64..=1.0) {
        let eta = PhiFunction::power(2.0).unwrap();
        let target = target_for(&FunctionId::GOscillatory, 0.05, 2.0).unwrap();
        let l2 = l1 + step;
        let l3 = l2 + step;
        let at = |l: f64| {
            modular_of(&eta, |z| l * target.eval(z), 0.05, 2.0, 64)
                .unwrap()
                .value
        };
        let (m1, m2, m3) = (at(l1), at(l2), at(l3));
        prop_assert!(m1 <= m2 + 1e-12 && m2 <= m3 + 1e-12);
        // Midpoint convexity along the equally spaced triple.
        prop_assert!(m2 <= 0.5 * (m1 + m3) + 1e-9);
    }

    #[test]
    fn luxemburg_homogeneous(c in 0.1f64..=10.0) {
        let eta = PhiFunction::power(2.0).unwrap();
        let base = TargetFunction::new(|z: f64| z.ln(), (1.0, E), (0.0, 1.0));
        let scaled = TargetFunction::new(move |z: f64| c * z.ln(), (1.0, E), (0.0, c));
        let n1 = luxemburg_norm(&eta, &base, 1.0, E, 1e-9).unwrap();
        let n2 = luxemburg_norm(&eta, &scaled, 1.0, E, 1e-9).unwrap();
        prop_assert!((n2 - c * n1).abs() <= 1e-6 * (1.0 + c * n1));
    }

    #[test]
    fn operator_monotone_and_bounded(
        kind in any_kind(),
        scale in 0.2f64..=1.0,
        shift in 0.0f64..=0.3,
        t in 0.0f64..=1.0,
    ) {
        let k = kernel(kind);
        let cfg = OperatorConfig::new(k, 1.0, E, 8);
        let f1 = TargetFunction::new(move |z: f64| scale * 0.6 * z.ln(), (1.0, E), (0.0, 1.0));
        let f2 = TargetFunction::new(
            move |z: f64| (scale * 0.6 * z.ln() + shift).min(1.0),
            (1.0, E),
            (0.0, 1.0),
        );
        let z = t.exp();
        for apply in [gm_apply, mk_apply] {
            let lo = apply(&f1, &cfg, z).unwrap();
            let hi = apply(&f2, &cfg, z).unwrap();
            prop_assert!(lo <= hi + 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&lo));
        }
    }

    #[test]
    fn operator_stability_in_target(
        kind in any_kind(),
        d in 0.0f64..=0.4,
        t in 0.0f64..=1.0,
    ) {
        // |Op(F1) - Op(F2)| <= Op(|F1 - F2|) with |F1 - F2| constant d.
        let k = kernel(kind);
        let cfg = OperatorConfig::new(k, 1.0, E, 6);
        let f1 = TargetFunction::new(|z: f64| 0.5 * z.ln(), (1.0, E), (0.0, 1.0));
        let f2 = TargetFunction::new(move |z: f64| 0.5 * z.ln() + d, (1.0, E), (0.0, 1.0));
        let diff = TargetFunction::constant(d, (1.0, E));
        let z = t.exp();
        for apply in [gm_apply, mk_apply] {
            let a = apply(&f1, &cfg, z).unwrap();
            let b = apply(&f2, &cfg, z).unwrap();
            let bound = apply(&diff, &cfg, z).unwrap();
            prop_assert!((a - b).abs() <= bound + 1e-12);
        }
    }
}

#[test]
fn uniform_convergence_trend() {
    // Continuous targets only: sup error shrinks from n = 10 to n = 120.
    let grid: Vec<f64> = (0..400).map(|i| 1.0 + (E - 1.0) * i as f64 / 399.0).collect();
    let target = TargetFunction::new(|z: f64| z.ln(), (1.0, E), (0.0, 1.0));
    for which in [OperatorKind::Gm, OperatorKind::Mk] {
        let sup = |n: u32| {
            let cfg = OperatorConfig::new(kernel(SigmoidKind::Ramp), 1.0, E, n);
            let out = apply_on_grid(&target, &cfg, &grid, which).unwrap();
            grid.iter()
                .zip(&out)
                .map(|(&z, &v)| (target.eval(z) - v).abs())
                .fold(0.0f64, f64::max)
        };
        assert!(sup(120) < sup(10));
    }
}

#[test]
fn orlicz_stability_inequality() {
    // Desk-scale version of the section 4.3 stability estimate with beta = 1:
    // I[lambda (MkF - MkG)] <= 2 I[lambda (F - G)]^(1/2) + slack, where the
    // uncomputable kernel-tail epsilon is replaced by a fixed 0.05 factor.
    let eta = PhiFunction::power(2.0).unwrap();
    let (a, b) = (0.05, 2.0);
    let pairs = [
        (FunctionId::FPiecewise, FunctionId::GOscillatory),
        (FunctionId::FPiecewise, FunctionId::Constant(0.4)),
        (FunctionId::GOscillatory, FunctionId::Constant(0.7)),
    ];
    for lambda in [1.0, 0.5] {
        for n in [10u32, 40] {
            for (id_f, id_g) in &pairs {
                let f = target_for(id_f, a, b).unwrap();
                let g = target_for(id_g, a, b).unwrap();
                let k = kernel(SigmoidKind::Ramp);
                let psi_e = k.value_at_e();
                let cfg = OperatorConfig::new(k, a, b, n);
                let mk_f = MkOperator::new(&f, &cfg).unwrap();
                let mk_g = MkOperator::new(&g, &cfg).unwrap();
                let lhs = modular_of(
                    &eta,
                    |z| lambda * (mk_f.eval(z).unwrap() - mk_g.eval(z).unwrap()),
                    a,
                    b,
                    128,
                )
                .unwrap()
                .value;
                let base = modular_of(&eta, |z| lambda * (f.eval(z) - g.eval(z)), a, b, 128)
                    .unwrap()
                    .value;
                let slack = 0.05 * eta.eval(lambda) * (b / a).ln() / psi_e;
                assert!(
                    lhs <= 2.0 * base.sqrt() + slack,
                    "n={n} lambda={lambda}: {lhs} vs 2*sqrt({base}) + {slack}"
                );
            }
        }
    }
}

#[test]
fn builtin_targets_stay_in_declared_ranges() {
    for x in (0..=2000).map(|i| i as f64 * 0.001) {
        let f = builtin_f(x);
        assert!((0.25..=0.9).contains(&f), "f({x}) = {f}");
        let g = builtin_g(x);
        assert!((0.05..=1.2).contains(&g), "g({x}) = {g}");
    }
}

#[test]
fn power_modular_matches_hand_value() {
    // I[u^2] of F = ln z on [1, e]: integral of u^2 du = 1/3.
    let eta = PhiFunction::power(2.0).unwrap();
    let target = TargetFunction::new(|z: f64| z.ln(), (1.0, E), (0.0, 1.0));
    let value = modular(&eta, &target, 1.0, E, 64).unwrap().value;
    assert!((value - 1.0 / 3.0).abs() < 1e-12);
}
