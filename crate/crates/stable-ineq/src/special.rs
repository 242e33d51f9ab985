//! Gamma function and the named constants of the stable operator.
//!
//! Everything downstream is parametrised by the stability exponent
//! α ∈ (1, 2). The constants bundled in [`ConstantSet`]:
//!
//! * `levy_kernel` — C_α = α·2^{α-1}·Γ((α+1)/2) / (√π · Γ(1-α/2)),
//!   the jump-kernel constant of the fractional Laplacian;
//! * `green` — c_α = 2^{1-α} / Γ(α/2)², the Green-function constant;
//! * `omega` — ω_α = -1 / (cos(πα/2)·Γ(α)), entering the spectral-gap bound;
//! * `kappa` — κ = 2^α·Γ((1+α)/4)·Γ((1-α)/4)^{-2}, the Hardy-Rellich constant;
//! * `green_limit` — K_α = lim_{y→∞} G^{[-1,1]}(x,y)/h(x), evaluated by
//!   quadrature of the tail constant of h (see [`constants`]); its
//!   gamma closed form is (α-1)·ω_α/2.

use crate::error::{Error, Result};
use crate::quad;

/// Default guard band: α is accepted in [1 + guard, 2 - guard].
/// Near α = 1 the constants ω_α and K_α degenerate; we refuse rather
/// than silently lose precision.
pub const ALPHA_GUARD: f64 = 1e-3;

/// The stability exponent α, validated to lie in the open interval (1, 2).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct StableIndex(f64);

impl StableIndex {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_guard(alpha, ALPHA_GUARD)
    }

    pub fn with_guard(alpha: f64, guard: f64) -> Result<Self> {
        if alpha.is_finite() && alpha >= 1.0 + guard && alpha <= 2.0 - guard {
            Ok(StableIndex(alpha))
        } else {
            Err(Error::InvalidAlpha(alpha))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for StableIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Lanczos approximation, based on Pugh's analysis; ~16 digits.
const GAMMA_R: f64 = 10.900511;
const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x) = π / (sin(πx) Γ(1-x))
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, &dk)| s + dk / (i as f64 - x));
        std::f64::consts::PI
            / ((std::f64::consts::PI * x).sin()
                * s
                * TWO_SQRT_E_OVER_PI
                * ((0.5 - x + GAMMA_R) / std::f64::consts::E).powf(0.5 - x))
    } else {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0));
        s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + GAMMA_R) / std::f64::consts::E).powf(x - 0.5)
    }
}

/// Γ(x) for real x, to ~1e-14 relative accuracy. Negative non-integer
/// arguments go through the reflection formula inside [`lanczos`].
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || (x <= 0.0 && x == x.floor()) {
        return Err(Error::GammaPole(x));
    }
    Ok(lanczos(x))
}

/// The constants attached to one stability exponent.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct ConstantSet {
    /// C_α, the Lévy jump-kernel constant.
    pub levy_kernel: f64,
    /// c_α, the Green-function prefactor.
    pub green: f64,
    /// ω_α, the spectral-gap constant.
    pub omega: f64,
    /// κ, the Hardy-Rellich constant.
    pub kappa: f64,
    /// K_α, the large-argument limit of G(x,·)/h(x); by quadrature.
    pub green_limit: f64,
}

/// Evaluate all constants for `alpha`. K_α comes from quadrature of the
/// tail constant of h,
///
/// ```text
/// C∞ = lim_{v→∞} [h(v) - v^{α-1}/(α-1)]
///    = -1/(α-1) + ∫_1^∞ [(z²-1)^{α/2-1} - z^{α-2}] dz,
/// K_α = -c_α·(α-1)·C∞,
/// ```
///
/// with the endpoint singularity at z = 1 handled by tanh-sinh.
pub fn constants(alpha: StableIndex) -> ConstantSet {
    let a = alpha.get();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let levy_kernel =
        a * 2f64.powf(a - 1.0) * lanczos((a + 1.0) / 2.0) / (sqrt_pi * lanczos(1.0 - a / 2.0));
    let green = 2f64.powf(1.0 - a) / lanczos(a / 2.0).powi(2);
    let omega = -1.0 / ((std::f64::consts::PI * a / 2.0).cos() * lanczos(a));
    let kappa = 2f64.powf(a) * lanczos((1.0 + a) / 4.0) / lanczos((1.0 - a) / 4.0).powi(2);
    let green_limit = -green * (a - 1.0) * h_tail_constant(a);
    ConstantSet { levy_kernel, green, omega, kappa, green_limit }
}

/// Gamma closed form of K_α: (α-1)·ω_α/2. Used as the independent
/// cross-check of the quadrature route in `constants`.
pub fn green_limit_closed(alpha: StableIndex) -> f64 {
    let a = alpha.get();
    let omega = -1.0 / ((std::f64::consts::PI * a / 2.0).cos() * lanczos(a));
    (a - 1.0) * omega / 2.0
}

/// C∞ = lim h(v) - v^{α-1}/(α-1), by quadrature.
pub(crate) fn h_tail_constant(a: f64) -> f64 {
    // head: (z²-1)^{α/2-1} built from the exact distance to the
    // singular endpoint z = 1
    let head = quad::tanh_sinh_sided(
        |z, d1, _| (d1 * (z + 1.0)).powf(a / 2.0 - 1.0) - z.powf(a - 2.0),
        1.0,
        2.0,
        1e-13,
    );
    // tail: z^{α-2}·[(1-z^{-2})^{α/2-1} - 1]; series once z² would lose
    // the cancellation (the difference is O(z^{α-4}))
    let beta = a / 2.0 - 1.0;
    let tail = quad::exp_sinh(
        |z: f64| {
            if z > 1e6 {
                let u = 1.0 / (z * z);
                z.powf(a - 2.0) * (-beta * u) * (1.0 - (beta - 1.0) * 0.5 * u)
            } else {
                (z * z - 1.0).powf(beta) - z.powf(a - 2.0)
            }
        },
        2.0,
        1e-13,
    );
    -1.0 / (a - 1.0) + head.value + tail.value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(a: f64) -> StableIndex {
        StableIndex::new(a).unwrap()
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-11);
        // Γ(-0.125) = Γ(0.875)/(-0.125); reference from a 40-digit oracle
        let g = gamma(-0.125).unwrap();
        assert!((g - (-8.717218859383176)).abs() / 8.717218859383176 < 1e-13, "got {g}");
    }

    #[test]
    fn gamma_poles_rejected() {
        assert!(matches!(gamma(0.0), Err(Error::GammaPole(_))));
        assert!(matches!(gamma(-3.0), Err(Error::GammaPole(_))));
        assert!(gamma(-3.0001).is_ok());
    }

    #[test]
    fn gamma_recurrence() {
        // Γ(x+1) = x Γ(x) on a grid avoiding poles
        let mut x = -4.85f64;
        while x < 20.0 {
            if (x - x.round()).abs() > 1e-3 && (x + 1.0 - (x + 1.0).round()).abs() > 1e-3 {
                let lhs = gamma(x + 1.0).unwrap();
                let rhs = x * gamma(x).unwrap();
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()),
                    "recurrence off at x={x}: {lhs} vs {rhs}"
                );
            }
            x += 0.37;
        }
    }

    #[test]
    fn alpha_guard_band() {
        assert!(StableIndex::new(1.0005).is_err());
        assert!(StableIndex::new(1.9999).is_err());
        assert!(StableIndex::new(1.001).is_ok());
        assert!(StableIndex::new(1.999).is_ok());
    }

    #[test]
    fn constants_at_three_halves() {
        // all five frozen from the 40-digit oracle
        let c = constants(alpha(1.5));
        assert!((c.levy_kernel - 0.2992067103010745).abs() < 1e-13);
        assert!((c.green - 0.47088777022187447).abs() < 1e-13);
        assert!((c.omega - 1.5957691216057307).abs() < 1e-13);
        assert!((c.kappa - 0.05339435600022891).abs() < 1e-13);
        assert!(
            (c.green_limit - 0.3989422804014327).abs() < 1e-10,
            "K quadrature drifted: {}",
            c.green_limit
        );
    }

    #[test]
    fn constants_positive_across_range() {
        let mut a = 1.001;
        while a <= 1.999 {
            let c = constants(alpha(a));
            assert!(c.levy_kernel > 0.0 && c.green > 0.0, "alpha={a}");
            assert!(c.omega > 0.0, "omega must be positive, alpha={a}");
            assert!(c.kappa > 0.0, "kappa must be positive, alpha={a}");
            assert!(c.green_limit > 0.0, "K must be positive, alpha={a}");
            a += 0.0499;
        }
    }

    #[test]
    fn green_limit_quadrature_vs_closed_form() {
        let mut a = 1.001;
        while a <= 1.999 {
            let idx = alpha(a);
            let q = constants(idx).green_limit;
            let c = green_limit_closed(idx);
            assert!(
                ((q - c) / c).abs() < 1e-9,
                "K routes disagree at alpha={a}: quad={q} closed={c}"
            );
            a += 0.0239;
        }
    }
}
