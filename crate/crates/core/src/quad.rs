//! Small quadrature toolbox shared by the operators and the modular
//! functionals: Gauss-Legendre nodes on `[-1, 1]` and composite Simpson.

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, located by Newton
/// iteration from the Chebyshev initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "at least one node required");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over `[lo, hi]` with an `n`-point Gauss-Legendre rule.
pub fn integrate_gl(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Composite Simpson with `n` subintervals (rounded up to even).
pub fn integrate_simpson(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n.max(2) } else { n + 1 };
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        let c = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += c * f(lo + i as f64 * h);
    }
    acc * h / 3.0
}

/// Integrate over `[lo, hi]` split at the interior points of `cuts`.
///
/// `cuts` need not be sorted or inside the interval; only interior points
/// produce subdivisions. This keeps discontinuities and kinks on subinterval
/// boundaries where the rules converge at full order.
pub fn integrate_split(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    cuts: &[f64],
    rule: impl Fn(&dyn Fn(f64) -> f64, f64, f64) -> f64,
) -> f64 {
    let mut pts: Vec<f64> = cuts
        .iter()
        .copied()
        .filter(|c| *c > lo + 1e-15 && *c < hi - 1e-15)
        .collect();
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let mut acc = 0.0;
    let mut left = lo;
    for c in pts {
        acc += rule(f, left, c);
        left = c;
    }
    acc + rule(f, left, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        // 8 nodes are exact through degree 15.
        let val = integrate_gl(&|x| x.powi(15) + 3.0 * x.powi(4), 0.0, 1.0, 8);
        assert!((val - (1.0 / 16.0 + 3.0 / 5.0)).abs() < 1e-14);
    }

    #[test]
    fn gl_handles_single_node() {
        let val = integrate_gl(&|_| 2.0, -1.0, 3.0, 1);
        assert!((val - 8.0).abs() < 1e-14);
    }

    #[test]
    fn simpson_matches_smooth_integral() {
        let val = integrate_simpson(&|x: f64| x.sin(), 0.0, 1.0, 64);
        assert!((val - (1.0 - 1.0f64.cos())).abs() < 1e-9);
    }

    #[test]
    fn split_integration_handles_kinks() {
        // |x - 0.3| over [0, 1]: exact once split at the kink.
        let f = |x: f64| (x - 0.3).abs();
        let val = integrate_split(&f, 0.0, 1.0, &[0.3], |f, a, b| integrate_gl(f, a, b, 4));
        let exact = 0.5 * (0.3f64.powi(2) + 0.7f64.powi(2));
        assert!((val - exact).abs() < 1e-14);
    }
}
