//! Small numerical toolbox: Gauss-Legendre quadrature, bracketed root
//! refinement, golden-section minimization, parabolic peak interpolation.

use std::sync::OnceLock;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Cached 32-point rule (the workhorse of the field quadratures).
pub fn gauss_legendre_32() -> (&'static [f64], &'static [f64]) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (n, w) = CACHE.get_or_init(|| gauss_legendre(32));
    (n, w)
}

/// Integrate `f` over [a, b] with an n-point Gauss-Legendre rule.
pub fn integrate_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(m + c * x);
    }
    acc * c
}

/// Integrate `f` over consecutive panels given by `breaks`, 32 nodes each.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, breaks: &[f64]) -> f64 {
    let (nodes, weights) = gauss_legendre_32();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let c = 0.5 * (w[1] - w[0]);
        let m = 0.5 * (w[1] + w[0]);
        let mut acc = 0.0;
        for (x, wt) in nodes.iter().zip(weights.iter()) {
            acc += wt * f(m + c * x);
        }
        total += acc * c;
    }
    total
}

/// Bisection on a bracketing interval; `f(a)` and `f(b)` must differ in sign.
pub fn bisect<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64, String> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(format!("bisect: no sign change on [{a}, {b}]"));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= xtol || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// A couple of secant steps to polish a bisection root; falls back to the
/// input when the secant leaves the bracket.
pub fn secant_polish<F: Fn(f64) -> f64>(f: F, x: f64, lo: f64, hi: f64, steps: usize) -> f64 {
    let h = (hi - lo).max(f64::EPSILON * x.abs()) * 1e-3;
    let mut x0 = (x - h).max(lo);
    let mut x1 = (x + h).min(hi);
    let mut f0 = f(x0);
    let mut f1 = f(x1);
    let mut best = x;
    let mut best_f = f(x).abs();
    for _ in 0..steps {
        if (f1 - f0).abs() < f64::MIN_POSITIVE {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !x2.is_finite() || x2 <= lo || x2 >= hi {
            break;
        }
        let f2 = f(x2);
        if f2.abs() < best_f {
            best = x2;
            best_f = f2.abs();
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if f2 == 0.0 {
            break;
        }
    }
    best
}

/// Golden-section minimizer of a unimodal function on [a, b].
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Sub-bin peak position from three samples around a local maximum.
///
/// Returns the offset (in bin units, within [-0.5, 0.5]) of the parabola
/// vertex through (-1, ym), (0, y0), (1, yp).
pub fn parabolic_peak_offset(ym: f64, y0: f64, yp: f64) -> f64 {
    let denom = ym - 2.0 * y0 + yp;
    if denom.abs() < f64::MIN_POSITIVE {
        return 0.0;
    }
    let off = 0.5 * (ym - yp) / denom;
    off.clamp(-0.5, 0.5)
}
