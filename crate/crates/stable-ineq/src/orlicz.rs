//! N-functions, complementary pairs, gauge and Orlicz norms, and δ(Φ).
//!
//! An N-function is an even convex Φ with Φ(0) = 0, Φ(x)/x → 0 at 0 and
//! → ∞ at ∞. Built-in families:
//!
//! * `Power(r)`:   Φ(x) = |x|^r / r (r > 1), conjugate |y|^{r'}/r';
//! * `XLog`:       Φ(x) = |x|·log(1+|x|)  (the log-Sobolev choice);
//! * `XLogXi(ξ)`:  Φ(x) = |x|·log^ξ(1+|x|), ξ ∈ (0,1].
//!
//! Norms over a weighted measure μ:
//!
//! * gauge (Luxemburg): ‖f‖_(Φ) = inf{ k > 0 : ∫ Φ(f/k) dμ ≤ 1 };
//! * Orlicz: taken here as inf_k (1 + ∫Φ(kf)dμ)/k, the one-parameter
//!   formula equal to the duality norm; only the sandwich
//!   ‖f‖_(Φ) ≤ ‖f‖_Φ ≤ 2‖f‖_(Φ) is relied on, and it is tested.
//!
//! δ(Φ) = sup |x|^{α-1} / Φ^{-1}(1/T(x)) is the Orlicz-Poincaré
//! criterion; its finiteness verdict comes from the same tail-exponent
//! arithmetic as the classical criteria via the Φ^{-1} sandwiches.

use std::sync::Arc;

use crate::criteria::{assemble_supremum, classify_exponents, fit_trend, log_grid, SupremumResult};
use crate::error::{Error, Result};
use crate::measure::Weight;
use crate::special::StableIndex;

#[derive(Clone)]
pub enum NFamily {
    Power { r: f64 },
    XLog,
    XLogXi { xi: f64 },
    Custom {
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        /// left derivative φ on x ≥ 0; numerical differentiation
        /// (≈1e-6 accuracy) is used when absent
        deriv: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    },
}

impl std::fmt::Debug for NFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NFamily::Power { r } => write!(f, "Power {{ r: {r} }}"),
            NFamily::XLog => write!(f, "XLog"),
            NFamily::XLogXi { xi } => write!(f, "XLogXi {{ xi: {xi} }}"),
            NFamily::Custom { deriv, .. } => {
                write!(f, "Custom {{ deriv: {} }}", deriv.is_some())
            }
        }
    }
}

/// A nice Young function with its left derivative and Δ₂ flag.
#[derive(Clone, Debug)]
pub struct NFunction {
    pub family: NFamily,
    /// sampled Δ₂ condition sup Φ(2x)/Φ(x) < ∞; recorded, not enforced
    pub delta2: bool,
}

impl NFunction {
    pub fn power(r: f64) -> Result<Self> {
        if !(r > 1.0) {
            return Err(Error::InvalidParam(format!("Power needs r > 1, got {r}")));
        }
        Ok(Self::finish(NFamily::Power { r }))
    }

    pub fn xlog() -> Self {
        Self::finish(NFamily::XLog)
    }

    pub fn xlogxi(xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi <= 1.0) {
            return Err(Error::InvalidParam(format!("XLogXi needs xi in (0,1], got {xi}")));
        }
        Ok(Self::finish(NFamily::XLogXi { xi }))
    }

    pub fn custom(
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        deriv: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    ) -> Result<Self> {
        let nf = Self::finish(NFamily::Custom { eval, deriv });
        nf.validate()?;
        Ok(nf)
    }

    fn finish(family: NFamily) -> Self {
        let mut nf = NFunction { family, delta2: false };
        nf.delta2 = nf.sample_delta2();
        nf
    }

    /// Φ(x); even in x.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        match &self.family {
            NFamily::Power { r } => x.powf(*r) / r,
            NFamily::XLog => x * x.ln_1p(),
            NFamily::XLogXi { xi } => x * x.ln_1p().powf(*xi),
            NFamily::Custom { eval, .. } => eval(x),
        }
    }

    /// Left derivative φ(x) for x ≥ 0 (non-decreasing by convexity).
    pub fn left_derivative(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match &self.family {
            NFamily::Power { r } => x.powf(r - 1.0),
            NFamily::XLog => x.ln_1p() + x / (1.0 + x),
            NFamily::XLogXi { xi } => {
                let l = x.ln_1p();
                if x == 0.0 {
                    0.0
                } else {
                    l.powf(*xi) + xi * x * l.powf(xi - 1.0) / (1.0 + x)
                }
            }
            NFamily::Custom { eval, deriv } => match deriv {
                Some(d) => d(x),
                None => {
                    let h = 1e-6 * x.max(1e-6);
                    (eval(x + h) - eval((x - h).max(0.0))) / (h + h.min(x))
                }
            },
        }
    }

    /// N-function invariants: value at 0, positivity, the two Φ(x)/x
    /// limits (probed at 1e-8 and 1e8) and midpoint convexity.
    pub fn validate(&self) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::InvalidParam("N-function must vanish at 0".into()));
        }
        if self.eval(1e-8) / 1e-8 > 1e-3 {
            return Err(Error::InvalidParam("Φ(x)/x must tend to 0 at 0".into()));
        }
        if self.eval(1e8) / 1e8 < 1e3 {
            return Err(Error::InvalidParam("Φ(x)/x must tend to ∞".into()));
        }
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..64 {
            let x = 10f64.powf(-4.0 + 8.0 * next());
            let y = 10f64.powf(-4.0 + 8.0 * next());
            if self.eval(x) <= 0.0 {
                return Err(Error::InvalidParam(format!("Φ({x}) must be positive")));
            }
            let mid = self.eval(0.5 * (x + y));
            let avg = 0.5 * (self.eval(x) + self.eval(y));
            if mid > avg * (1.0 + 1e-9) {
                return Err(Error::InvalidParam(format!(
                    "midpoint convexity fails at ({x}, {y})"
                )));
            }
        }
        Ok(())
    }

    fn sample_delta2(&self) -> bool {
        let ratios: Vec<f64> =
            [1e1, 1e3, 1e6, 1e9].iter().map(|&x| self.eval(2.0 * x) / self.eval(x)).collect();
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        max.is_finite() && max < 100.0 && max / min < 2.0
    }

    /// Complementary N-function Φ_c(y) = sup{ x|y| - Φ(x) : x ≥ 0 },
    /// by root-finding on φ(x) = |y| (grid-sup fallback for custom Φ
    /// without a derivative).
    pub fn complementary(&self, y: f64) -> f64 {
        let ay = y.abs();
        if ay == 0.0 {
            return 0.0;
        }
        let has_deriv =
            !matches!(&self.family, NFamily::Custom { deriv: None, .. });
        if has_deriv {
            // bracket the root of the non-decreasing φ
            let mut hi = 1.0;
            let mut grow = 0;
            while self.left_derivative(hi) < ay && grow < 600 {
                hi *= 2.0;
                grow += 1;
            }
            let mut lo = 0.0;
            for _ in 0..90 {
                let mid = 0.5 * (lo + hi);
                if self.left_derivative(mid) < ay {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let x = 0.5 * (lo + hi);
            return x * ay - self.eval(x);
        }
        // coarse log grid then golden polish
        let mut best_x = 0.0;
        let mut best = 0.0f64;
        for i in 0..=480 {
            let x = 10f64.powf(-12.0 + i as f64 * 0.05);
            let v = x * ay - self.eval(x);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        let (mut a, mut b) = (best_x / 10f64.powf(0.05), best_x * 10f64.powf(0.05));
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            let fc = c * ay - self.eval(c);
            let fd = d * ay - self.eval(d);
            if fc > fd {
                b = d;
            } else {
                a = c;
            }
        }
        let x = 0.5 * (a + b);
        (x * ay - self.eval(x)).max(best)
    }

    /// The complementary function packaged as an N-function: its left
    /// derivative is the generalized inverse ψ(s) = inf{t : φ(t) > s}.
    pub fn complementary_fn(&self) -> NFunction {
        let me = self.clone();
        let me2 = self.clone();
        NFunction::finish(NFamily::Custom {
            eval: Arc::new(move |y| me.complementary(y)),
            deriv: Some(Arc::new(move |s| {
                if s <= 0.0 {
                    return 0.0;
                }
                let mut hi = 1.0;
                let mut grow = 0;
                while me2.left_derivative(hi) <= s && grow < 600 {
                    hi *= 2.0;
                    grow += 1;
                }
                let mut lo = 0.0;
                for _ in 0..90 {
                    let mid = 0.5 * (lo + hi);
                    if me2.left_derivative(mid) <= s {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })),
        })
    }

    /// The unique x ≥ 0 with Φ(x) = t, by bracketing bisection.
    pub fn inverse(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        let mut grow = 0;
        while self.eval(hi) < t && grow < 2200 {
            hi *= 2.0;
            grow += 1;
        }
        let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
        while self.eval(lo) > t {
            lo /= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < t {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-11 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Parse `power(r=3)`, `xlog`, `xlogxi(xi=0.5)`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = match spec.find('(') {
            Some(i) => {
                let rest = spec[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("missing ')' in '{spec}'")))?;
                (spec[..i].trim(), rest.trim())
            }
            None => (spec, ""),
        };
        let param = |key: &str| -> Result<f64> {
            let (k, v) = args
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected {key}=<value> in '{spec}'")))?;
            if k.trim() != key {
                return Err(Error::Parse(format!("expected key '{key}', got '{}'", k.trim())));
            }
            v.trim().parse().map_err(|_| Error::Parse(format!("bad value '{v}'")))
        };
        match name {
            "power" => NFunction::power(param("r")?),
            "xlog" => Ok(NFunction::xlog()),
            "xlogxi" => NFunction::xlogxi(param("xi")?),
            other => Err(Error::Parse(format!("unknown N-function '{other}'"))),
        }
    }

    pub fn label(&self) -> String {
        match &self.family {
            NFamily::Power { r } => format!("power(r={r})"),
            NFamily::XLog => "xlog".into(),
            NFamily::XLogXi { xi } => format!("xlogxi(xi={xi})"),
            NFamily::Custom { .. } => "custom".into(),
        }
    }
}

fn modular<F: Fn(f64) -> f64>(phi: &NFunction, f: &F, k: f64, w: &Weight, breaks: &[f64]) -> f64 {
    w.integrate(|x| phi.eval(f(x) / k), breaks)
}

/// Gauge (Luxemburg) norm inf{k > 0 : ∫Φ(f/k)dμ ≤ 1}.
pub fn gauge_norm<F: Fn(f64) -> f64>(
    phi: &NFunction,
    f: F,
    w: &Weight,
    breaks: &[f64],
) -> Result<f64> {
    let mut hi = 1.0;
    let mut grow = 0;
    while modular(phi, &f, hi, w, breaks) > 1.0 {
        hi *= 4.0;
        grow += 1;
        if grow > 300 {
            return Err(Error::NotInOrliczSpace);
        }
    }
    let mut lo = hi;
    loop {
        lo /= 4.0;
        if lo < 1e-300 {
            // modular stayed ≤ 1 down to k ≈ 0: f vanishes μ-a.e.
            return Ok(0.0);
        }
        if modular(phi, &f, lo, w, breaks) > 1.0 {
            break;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if modular(phi, &f, mid, w, breaks) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-11 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Orlicz norm by the one-parameter formula inf_k (1 + ∫Φ(k·f)dμ)/k
/// (golden-section on log k after a coarse bracket).
pub fn orlicz_norm<F: Fn(f64) -> f64>(
    phi: &NFunction,
    f: F,
    w: &Weight,
    breaks: &[f64],
) -> Result<f64> {
    let gauge = gauge_norm(phi, &f, w, breaks)?;
    if gauge == 0.0 {
        return Ok(0.0);
    }
    let objective = |k: f64| {
        let m = modular(phi, &f, 1.0 / k, w, breaks);
        if m.is_finite() {
            (1.0 + m) / k
        } else {
            f64::INFINITY
        }
    };
    // the minimizer sits near k* with ∫Φ(k*f) ≈ 1, i.e. k* ≈ 1/gauge
    let center = 1.0 / gauge;
    let mut best = f64::INFINITY;
    let mut best_i = 0;
    let grid: Vec<f64> = (-20..=20).map(|i| center * 10f64.powf(i as f64 * 0.1)).collect();
    for (i, &k) in grid.iter().enumerate() {
        let v = objective(k);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = (
        grid[best_i.saturating_sub(1)].ln(),
        grid[(best_i + 1).min(grid.len() - 1)].ln(),
    );
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - ratio * (b - a);
        let d = a + ratio * (b - a);
        if objective(c.exp()) < objective(d.exp()) {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(best.min(objective((0.5 * (a + b)).exp())))
}

/// δ(Φ) = sup_x |x|^{α-1} / Φ^{-1}(1/μ((-|x|,|x|)^c)).
pub fn delta_phi(phi: &NFunction, alpha: StableIndex, w: &Weight) -> Result<SupremumResult> {
    let mass = w.total_mass()?;
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidParam(format!(
            "δ(Φ) requires a probability measure, total mass = {mass}"
        )));
    }
    let a = alpha.get();
    let xs = log_grid(1e-4, 1e8, 512);
    let tails = w.tail_table(&xs)?;
    let mut best = f64::NEG_INFINITY;
    let mut arg = xs[0];
    let mut gs = Vec::with_capacity(xs.len());
    for (&x, &t) in xs.iter().zip(&tails) {
        let g = if t < 1e-280 { 0.0 } else { x.powf(a - 1.0) / phi.inverse(1.0 / t) };
        gs.push(g);
        if g > best {
            best = g;
            arg = x;
        }
    }
    // verdict via the equivalent classical criterion of the family
    let (trend, limit) = match &phi.family {
        NFamily::Power { r } => {
            let (tr, lim) = classify_exponents(a, w.tail_asymptotics(), 1.0 / r, 0.0);
            (tr, lim.map(|l| l * r.powf(-1.0 / r)))
        }
        NFamily::XLog => classify_exponents(a, w.tail_asymptotics(), 1.0, 1.0),
        NFamily::XLogXi { xi } => classify_exponents(a, w.tail_asymptotics(), 1.0, *xi),
        NFamily::Custom { .. } => (fit_trend(&xs, &gs), None),
    };
    Ok(assemble_supremum(best, arg, trend, limit))
}
