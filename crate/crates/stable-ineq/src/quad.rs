//! Double-exponential quadrature.
//!
//! Two transformations cover everything the crate needs:
//!
//! * tanh-sinh on a finite interval: `x = m + r·tanh((π/2)·sinh t)`.
//!   Nodes cluster double-exponentially at the endpoints, so integrable
//!   endpoint singularities like `(x-a)^{-1/4}` converge at machine speed.
//! * exp-sinh on a half line: `x = a + exp((π/2)·sinh t)`.
//!   Handles algebraic tails `x^{-p}` for any `p > 1` as well as a
//!   singularity at the finite endpoint.
//!
//! Both refine by halving the step in `t` and reusing previous nodes;
//! the error estimate is the difference between the last two levels.
//!
//! Integrands that are singular at an endpoint `a ≠ 0` lose half their
//! digits if they reconstruct `x - a` from `x` (the node `x = a + δ`
//! rounds). The `_sided` variants hand the integrand the exact endpoint
//! distances so it can form the singular factor without cancellation.

/// Relative tolerance used when callers do not have a specific need.
pub const DEFAULT_TOL: f64 = 1e-11;

const MAX_LEVEL: usize = 11;
const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// Outcome of a quadrature: value, error estimate, evaluation count.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub evals: usize,
}

impl QuadResult {
    fn zero() -> Self {
        QuadResult { value: 0.0, abs_err: 0.0, evals: 0 }
    }
}

fn finite_or_zero(v: f64) -> f64 {
    // Singular endpoint evaluations may produce inf/NaN on the last
    // representable node; the integral is assumed integrable there.
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Integrate `f(x, d_from_a, d_from_b)` over `[a, b]`; the distance
/// arguments are exact even when `x` rounds to an endpoint.
pub fn tanh_sinh_sided<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    if a == b {
        return QuadResult::zero();
    }
    if a > b {
        let mut r = tanh_sinh_core(&|x, da, db| f(x, db, da), b, a, tol);
        r.value = -r.value;
        return r;
    }
    tanh_sinh_core(&f, a, b, tol)
}

fn tanh_sinh_core(f: &dyn Fn(f64, f64, f64) -> f64, a: f64, b: f64, tol: f64) -> QuadResult {
    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let len = b - a;
    let t_max = 6.11;

    let mut evals = 1usize;
    let mut sum = FRAC_PI_2 * r * finite_or_zero(f(m, r, r));
    let mut value = 0.0;
    let mut abs_err = f64::INFINITY;
    let mut h = 1.0;

    for level in 0..=MAX_LEVEL {
        if level > 0 {
            h *= 0.5;
        }
        // at level 0 take all multiples of h, afterwards only the odd ones
        let stride = if level == 0 { 1 } else { 2 };
        let kmax = (t_max / h) as usize;
        let mut k = 1;
        while k <= kmax {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            // delta = r·(1 - tanh u) = 2r / (1 + e^{2u}): distance to the endpoint
            let e2u = (2.0 * u).exp();
            let delta = 2.0 * r / (1.0 + e2u);
            if delta == 0.0 {
                break;
            }
            let sech = 2.0 / (u.exp() + (-u).exp());
            let w = FRAC_PI_2 * t.cosh() * r * sech * sech;
            if w == 0.0 {
                break;
            }
            let fp = finite_or_zero(f(b - delta, len - delta, delta));
            let fm = finite_or_zero(f(a + delta, delta, len - delta));
            evals += 2;
            sum += w * (fp + fm);
            k += stride;
        }
        let new_value = sum * h;
        if level > 0 {
            abs_err = (new_value - value).abs();
            value = new_value;
            if abs_err <= tol * value.abs().max(1e-300) && level >= 3 {
                break;
            }
        } else {
            value = new_value;
        }
    }
    QuadResult { value, abs_err, evals }
}

/// Integrate `f` over the finite interval `[a, b]` (endpoints may be singular).
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    tanh_sinh_sided(|x, _, _| f(x), a, b, tol)
}

/// Integrate `f(x, d_from_a)` over `[a, +inf)`; `d_from_a` is exact near `a`.
pub fn exp_sinh_sided<F: Fn(f64, f64) -> f64>(f: F, a: f64, tol: f64) -> QuadResult {
    half_line(|offset| f(a + offset, offset), tol)
}

/// Integrate `f` over `[a, +inf)`. The integrand must decay faster than
/// `x^{-1}` at infinity; a singularity at `a` is fine.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> QuadResult {
    half_line(|offset| f(a + offset), tol)
}

/// Integrate `f` over `(-inf, b]`.
pub fn exp_sinh_down<F: Fn(f64) -> f64>(f: F, b: f64, tol: f64) -> QuadResult {
    half_line(|offset| f(b - offset), tol)
}

/// Core exp-sinh rule: integrates g(s) ds over s in (0, inf) with
/// s = exp((π/2) sinh t).
fn half_line<G: Fn(f64) -> f64>(g: G, tol: f64) -> QuadResult {
    let t_max = 6.8;
    let mut evals = 1usize;
    let mut sum = FRAC_PI_2 * finite_or_zero(g(1.0));
    let mut value = 0.0;
    let mut abs_err = f64::INFINITY;
    let mut h = 1.0;

    for level in 0..=MAX_LEVEL {
        if level > 0 {
            h *= 0.5;
        }
        let stride = if level == 0 { 1 } else { 2 };
        let kmax = (t_max / h) as usize;
        let mut k = 1;
        while k <= kmax {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let cosh_t = t.cosh();
            // outward node: s = e^u
            if u < 700.0 {
                let s = u.exp();
                let w = FRAC_PI_2 * cosh_t * s;
                if w.is_finite() {
                    evals += 1;
                    sum += finite_or_zero(finite_or_zero(g(s)) * w);
                }
            }
            // inward node: s = e^{-u}
            let s = (-u).exp();
            if s > 0.0 {
                let w = FRAC_PI_2 * cosh_t * s;
                evals += 1;
                sum += finite_or_zero(finite_or_zero(g(s)) * w);
            }
            k += stride;
        }
        let new_value = sum * h;
        if level > 0 {
            abs_err = (new_value - value).abs();
            value = new_value;
            if abs_err <= tol * value.abs().max(1e-300) && level >= 3 {
                break;
            }
        } else {
            value = new_value;
        }
    }
    QuadResult { value, abs_err, evals }
}

/// Integrate `f` over the whole line, splitting at the supplied breakpoints
/// (kinks, support edges, discontinuities). Breakpoints need not be sorted.
pub fn line<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> QuadResult {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    if pts.is_empty() {
        pts.push(0.0);
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();

    let mut total = QuadResult::zero();
    accumulate(&mut total, exp_sinh_down(&f, pts[0], tol));
    for w in pts.windows(2) {
        accumulate(&mut total, tanh_sinh(&f, w[0], w[1], tol));
    }
    accumulate(&mut total, exp_sinh(&f, *pts.last().unwrap(), tol));
    total
}

/// Integrate `f` over `[a, b]` with interior breakpoints.
pub fn interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> QuadResult {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > a && *x < b)
        .collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let mut total = QuadResult::zero();
    for w in pts.windows(2) {
        accumulate(&mut total, tanh_sinh(&f, w[0], w[1], tol));
    }
    total
}

fn accumulate(total: &mut QuadResult, part: QuadResult) {
    total.value += part.value;
    total.abs_err += part.abs_err;
    total.evals += part.evals;
}

/// Sum with pairwise reduction: deterministic and O(log n) error growth.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}
