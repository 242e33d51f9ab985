//! Seeded randomized property suites.
//!
//! These are the checks the CLI `verify` subcommand runs and the
//! acceptance tests assert on: the Green-function suite, the Orlicz
//! suite and the nonlocal-operator suite. Each produces a
//! [`SuiteReport`] with one line per property; a fixed seed makes the
//! sampled functions reproducible.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::green::{self, GreenEvaluator, GreenSampleSpec, PropertyCheck};
use crate::measure::Weight;
use crate::nonlocal::{self, TestFunction};
use crate::orlicz::{self, NFunction};
use crate::quad;
use crate::special::{constants, StableIndex};

/// Outcome of one suite: named checks with counts and worst violations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub checks: Vec<PropertyCheck>,
    pub passed: bool,
}

impl SuiteReport {
    fn finish(name: &str, seed: u64, checks: Vec<PropertyCheck>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { name: name.into(), seed, checks, passed }
    }

    /// One pass/fail line per check, for terminal output.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {} — {}/{} cases, worst excess {:.3e} (tol {:.1e})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.cases - c.violations,
                c.cases,
                c.max_violation,
                c.tolerance,
            ));
        }
        out
    }
}

/// Green-function property suite at α = 3/2 scale (the worked-example
/// index used throughout); wraps [`green::verify_properties`] plus the
/// Theorem-3.2 ratio bound for the Poly and Log families.
pub fn green_suite(alpha: StableIndex, seed: u64) -> crate::Result<SuiteReport> {
    let spec = GreenSampleSpec { pairs: 1000, monotonicity_triples: 10_000, seed };
    let base = green::verify_properties(alpha, &spec)?;
    let mut checks = base.checks;

    // Green operator upper bound: G^{[-n,n]} f_n / f_n ≤ 4 c_α δ_n/(α-1)
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
    let mut ratio_check = PropertyCheck::new("Green operator ratio ≤ 4c_α·δ_n/(α-1)", 1e-6);
    let weights = [Weight::poly(alpha, 2.0), Weight::log(alpha, 1.0)?];
    for w in &weights {
        for n in [1.0, 2.0, 5.0] {
            let ev = GreenEvaluator::new(alpha, n)?;
            let dn = green::delta_n(alpha, w, n)?.value;
            let bound = 4.0 * ev.consts.green * dn / (alpha.get() - 1.0);
            let f = move |y: f64| green::f_profile(alpha, n, y).unwrap_or(0.0);
            for _ in 0..8 {
                let x = n * (1.0 + 10f64.powf(rng.gen_range(-2.0..1.5)));
                let ratio = ev.apply(w, &f, Some((alpha.get() - 1.0) / 2.0), x)?
                    / green::f_profile(alpha, n, x)?;
                ratio_check.record(ratio - bound - ratio_check.tolerance);
            }
        }
    }
    checks.push(ratio_check);
    Ok(SuiteReport::finish("green", seed, checks))
}

fn random_bump(rng: &mut ChaCha8Rng) -> TestFunction {
    let center = rng.gen_range(-2.0..2.0);
    let hw = rng.gen_range(0.4..2.5);
    let amp = rng.gen_range(0.3..3.0);
    TestFunction::bump(center, hw, amp)
}

/// Orlicz-machinery suite: norm sandwich, the ‖f²‖ = ‖f‖² identity,
/// the indicator-norm identity, Φ^{-1} sandwiches and double conjugacy.
pub fn orlicz_suite(alpha: StableIndex, seed: u64) -> crate::Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let phis = [
        NFunction::power(2.0)?,
        NFunction::power(3.0)?,
        NFunction::xlog(),
        NFunction::xlogxi(0.5)?,
    ];
    let weights = [
        Weight::poly(alpha, 2.0),
        Weight::poly(alpha, 3.0),
        Weight::log(alpha, 1.0)?,
    ];

    // ‖f‖_(Φ) ≤ ‖f‖_Φ ≤ 2‖f‖_(Φ) over 50 random (Φ, f, w) triples
    let mut sandwich = PropertyCheck::new("norm sandwich gauge ≤ orlicz ≤ 2·gauge", 1e-8);
    for _ in 0..50 {
        let phi = &phis[rng.gen_range(0..phis.len())];
        let w = &weights[rng.gen_range(0..weights.len())];
        let b = random_bump(&mut rng);
        let f = |x: f64| b.eval(x);
        let breaks = [b.support.0, b.support.1];
        let g = orlicz::gauge_norm(phi, f, w, &breaks)?;
        let o = orlicz::orlicz_norm(phi, f, w, &breaks)?;
        let scale = g.max(1e-12);
        sandwich.record((g - o) / scale - sandwich.tolerance);
        sandwich.record((o - 2.0 * g) / scale - sandwich.tolerance);
    }
    checks.push(sandwich);

    // ‖f²‖_(Φ) = ‖f‖²_(Ψ) with Ψ = Φ(x²)
    let mut square = PropertyCheck::new("square identity ‖f²‖_(Φ) = ‖f‖²_(Ψ)", 1e-6);
    for _ in 0..12 {
        let phi = phis[rng.gen_range(0..phis.len())].clone();
        let w = &weights[rng.gen_range(0..weights.len())];
        let b = random_bump(&mut rng);
        let breaks = [b.support.0, b.support.1];
        let phi_inner = phi.clone();
        let psi = NFunction::custom(Arc::new(move |x: f64| phi_inner.eval(x * x)), None)?;
        let lhs = orlicz::gauge_norm(&phi, |x| b.eval(x) * b.eval(x), w, &breaks)?;
        let rhs = orlicz::gauge_norm(&psi, |x| b.eval(x), w, &breaks)?.powi(2);
        square.record(((lhs - rhs) / rhs.max(1e-12)).abs() - square.tolerance);
    }
    checks.push(square);

    // ‖1_{(-x,x)^c}‖_(Φ) = 1/Φ^{-1}(1/T(x)) across x ∈ [0.1, 100]
    let mut indicator = PropertyCheck::new("indicator norm = 1/Φ^{-1}(1/T)", 1e-6);
    for phi in &phis {
        for &x in &[0.1, 1.0, 10.0, 100.0] {
            let w = &weights[0];
            let ind = move |y: f64| if y.abs() > x { 1.0 } else { 0.0 };
            let gauge = orlicz::gauge_norm(phi, ind, w, &[-x, x])?;
            let want = 1.0 / phi.inverse(1.0 / w.tail(x)?);
            indicator.record(((gauge - want) / want).abs() - indicator.tolerance);
        }
    }
    checks.push(indicator);

    // Φ^{-1} sandwiches: t/(2log^ξ t) ≤ Φ^{-1}(t) ≤ 2t/log^ξ t on [2, 1e12]
    let mut inv = PropertyCheck::new("Φ^{-1} sandwich (log families)", 1e-9);
    for &xi in &[0.25, 0.5, 1.0] {
        let phi = NFunction::xlogxi(xi)?;
        let mut t = 2.0f64;
        while t <= 1e12 {
            let v = phi.inverse(t);
            let l = t.ln().powf(xi);
            inv.record(t / (2.0 * l) / v - 1.0 - inv.tolerance);
            inv.record(v / (2.0 * t / l) - 1.0 - inv.tolerance);
            t *= 3.7;
        }
    }
    checks.push(inv);

    // double conjugacy Φ** = Φ on [0.01, 100]
    let mut conj = PropertyCheck::new("double conjugacy Φ** = Φ", 1e-6);
    for phi in &phis[..3] {
        let cc = phi.complementary_fn().complementary_fn();
        let mut x = 0.01;
        while x <= 100.0 {
            let orig = phi.eval(x);
            conj.record(((cc.eval(x) - orig) / (1.0 + orig)).abs() - conj.tolerance);
            x *= 2.9;
        }
    }
    checks.push(conj);

    Ok(SuiteReport::finish("orlicz", seed, checks))
}

/// Nonlocal-operator suite: symmetry defect with and without drift,
/// Hardy-Rellich, the part-form bound and the form/operator cross-check.
pub fn nonlocal_suite(alpha: StableIndex, seed: u64) -> crate::Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let a = alpha.get();

    // b ≡ 0: defect within the quadrature noise floor, 20 random triples
    let mut sym = PropertyCheck::new("symmetry defect ≈ 0 for b ≡ 0", 1e-6);
    let mut noise_floor = 0.0f64;
    for _ in 0..20 {
        let gamma = rng.gen_range(1.2..3.0);
        let w = Weight::poly(alpha, gamma);
        let wa = w.clone();
        let a_fun = move |x: f64| wa.a(x);
        let f = random_bump(&mut rng);
        let g = random_bump(&mut rng);
        let d = nonlocal::symmetry_defect(&a_fun, &|_| 0.0, alpha, &f, &g);
        let rel = d.defect.abs() / d.scale.max(1e-12);
        noise_floor = noise_floor.max(rel);
        sym.record(rel - sym.tolerance);
    }
    checks.push(sym);

    // b ≡ 1 with overlapping bumps, f centered left of g: the defect is
    // the pure drift asymmetry ∫b(f'g - fg')dμ (the nonlocal parts
    // cancel); must sit well above the noise floor and match the
    // drift-only quadrature oracle
    let mut drift = PropertyCheck::new("drift defect ≥ 10× noise floor and matches oracle", 1e-6);
    for _ in 0..10 {
        let gamma = rng.gen_range(1.2..3.0);
        let w = Weight::poly(alpha, gamma);
        let wa = w.clone();
        let a_fun = move |x: f64| wa.a(x);
        let f = TestFunction::bump(rng.gen_range(-1.2..-0.4), rng.gen_range(1.0..1.8), 1.0);
        let g = TestFunction::bump(rng.gen_range(0.4..1.2), rng.gen_range(1.0..1.8), 1.0);
        let d = nonlocal::symmetry_defect(&a_fun, &|_| 1.0, alpha, &f, &g);
        let lo = f.support.0.min(g.support.0);
        let hi = f.support.1.max(g.support.1);
        let oracle = quad::interval(
            |x| (f.deriv(x) * g.eval(x) - g.deriv(x) * f.eval(x)) * w.density(x),
            lo,
            hi,
            &[f.support.1, g.support.0],
            1e-11,
        )
        .value;
        let rel = d.defect.abs() / d.scale.max(1e-12);
        // must exceed 10× the b≡0 noise floor
        drift.record(10.0 * noise_floor - rel);
        drift.record(
            ((d.defect - oracle) / oracle.abs().max(1e-12)).abs() - drift.tolerance.max(1e-5),
        );
    }
    checks.push(drift);

    // Hardy-Rellich over a randomized 50-function bump suite
    let mut hardy = PropertyCheck::new("Hardy-Rellich κ∫g²|x|^{-α} ≤ E(g,g)", 1e-6);
    for k in 0..50 {
        let g = if k % 2 == 0 {
            // bump away from the origin
            let c = rng.gen_range(1.5..6.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            TestFunction::bump(c, rng.gen_range(0.3..1.2), rng.gen_range(0.5..2.0))
        } else {
            // odd-type profile through the origin
            TestFunction::linear_times_bump(0.0, rng.gen_range(0.8..3.0))
        };
        let h = nonlocal::hardy_rellich_check(&g, alpha)?;
        hardy.record(h.lhs - h.rhs - hardy.tolerance);
    }
    checks.push(hardy);

    // part form ≤ (6C_α/(κα)+1)·E(f,f) over 20 annulus bumps
    let cs = constants(alpha);
    let c0 = 6.0 * cs.levy_kernel / (cs.kappa * a) + 1.0;
    let mut part = PropertyCheck::new("part form ≤ (6C_α/(κα)+1)·E(f,f)", 1e-6);
    for k in 0..20 {
        let (n, nn) = if k % 2 == 0 { (1.0, 4.0) } else { (2.0, 8.0) };
        let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mid = side * rng.gen_range(n + 0.3 * (nn - n)..n + 0.7 * (nn - n));
        let hw = rng.gen_range(0.2..0.28) * (nn - n);
        let f = TestFunction::bump(mid, hw, rng.gen_range(0.5..2.0));
        let pf = nonlocal::part_form(&f, alpha, n, nn)?;
        let eff = nonlocal::dirichlet_form(&f, &f, alpha);
        part.record(pf - c0 * eff - part.tolerance);
    }
    checks.push(part);

    // E(f,f) vs -⟨Δ^{α/2}f, f⟩ cross-check
    let mut cross = PropertyCheck::new("Dirichlet form vs operator pairing", 1e-4);
    for _ in 0..5 {
        let f = random_bump(&mut rng);
        let eff = nonlocal::dirichlet_form(&f, &f, alpha);
        let pairing = -quad::interval(
            |x| nonlocal::frac_laplacian(&f, alpha, x) * f.eval(x),
            f.support.0,
            f.support.1,
            &[],
            1e-10,
        )
        .value;
        cross.record(((eff - pairing) / pairing).abs() - cross.tolerance);
    }
    checks.push(cross);

    Ok(SuiteReport::finish("nonlocal", seed, checks))
}
