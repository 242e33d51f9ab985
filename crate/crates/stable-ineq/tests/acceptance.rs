//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them). Tolerances are pinned in
//! the constants below.

use stable_ineq::criteria::{self, ClassifyOptions, Hold};
use stable_ineq::green;
use stable_ineq::measure::Weight;
use stable_ineq::simulate::{ensemble_occupation, small_time_kernel_check, PathConfig};
use stable_ineq::special::{constants, green_limit_closed, gamma};
use stable_ineq::suites;
use stable_ineq::StableIndex;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id}: {name} — {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn alpha(a: f64) -> StableIndex {
    StableIndex::new(a).unwrap()
}

/// Expected verdicts for the polynomial family.
fn poly_expect(a: f64, g: f64) -> (bool, bool, bool, bool) {
    let ergodic = a * g > 1.0;
    let poincare = ergodic && g >= 1.0 - 1e-12;
    let spi = ergodic && g > 1.0 + 1e-12;
    (ergodic, poincare, spi, spi) // (ergodic, poincare, spi, lsi=interp)
}

#[test]
fn criterion_1_poly_example_table() {
    let opts = ClassifyOptions { epsilons: vec![4.0], xis: vec![0.3, 0.5, 1.0] };
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for &a in &[1.2, 1.5, 1.8] {
        let idx = alpha(a);
        for &g in &[0.8, 1.0, 1.2, 4.0 / 3.0, 1.5, 2.0] {
            let rep = criteria::classify(idx, &Weight::poly(idx, g), &opts).unwrap();
            let (_, poincare, spi, lsi) = poly_expect(a, g);
            let want = |b: bool| if b { Hold::Holds } else { Hold::Fails };
            let mut check = |name: &str, got: Hold, expect: bool| {
                cases += 1;
                if got != want(expect) {
                    mismatches.push(format!("α={a} γ={g} {name}: {got:?}, expected {expect}"));
                }
            };
            check("poincare", rep.poincare.hold, poincare);
            check("super-poincare", rep.super_poincare.hold, spi);
            check("log-sobolev", rep.log_sobolev.hold, lsi);
            for (xi, e) in &rep.interpolation {
                check(&format!("interpolation(ξ={xi})"), e.hold, lsi);
            }
            // Nash(4) flips exactly at γ* = (αε-2)/(α(ε-2))
            let gamma_star = (4.0 * a - 2.0) / (2.0 * a);
            check("nash(4)", rep.nash[0].1.hold, a * g > 1.0 && g >= gamma_star - 1e-12);
        }
        // the flip point itself: holds at γ*, fails just below
        let gamma_star = (4.0 * a - 2.0) / (2.0 * a);
        for (g, expect) in [(gamma_star, true), (gamma_star - 1e-6, false)] {
            cases += 1;
            let r = criteria::nash_criterion(idx, &Weight::poly(idx, g), 4.0).unwrap();
            let holds = r.verdict == criteria::Verdict::Finite;
            if holds != expect {
                mismatches.push(format!("α={a} Nash flip at γ={g}: {holds} vs {expect}"));
            }
        }
    }
    report(
        1,
        "Poly example-table reproduction",
        mismatches.is_empty(),
        &format!("{cases} verdicts, mismatches: {mismatches:?}"),
    );
}

#[test]
fn criterion_2_log_example_table() {
    let opts = ClassifyOptions { epsilons: vec![4.0], xis: vec![0.3, 0.5, 1.0] };
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for &a in &[1.2, 1.5, 1.8] {
        let idx = alpha(a);
        for &g in &[-1.0, 0.0, 0.3, 0.5, 1.0, 2.0] {
            let rep = criteria::classify(idx, &Weight::log(idx, g).unwrap(), &opts).unwrap();
            let want = |b: bool| if b { Hold::Holds } else { Hold::Fails };
            let mut check = |name: &str, got: Hold, expect: bool| {
                cases += 1;
                if got != want(expect) {
                    mismatches.push(format!("α={a} γ={g} {name}: {got:?}, expected {expect}"));
                }
            };
            check("poincare", rep.poincare.hold, g >= -1e-12);
            check("super-poincare", rep.super_poincare.hold, g > 1e-12);
            check("log-sobolev", rep.log_sobolev.hold, g >= 1.0 - 1e-12);
            for (xi, e) in &rep.interpolation {
                check(&format!("interpolation(ξ={xi})"), e.hold, g >= xi - 1e-12);
            }
            check("nash(4)", rep.nash[0].1.hold, false);
        }
    }
    report(
        2,
        "Log example-table reproduction",
        mismatches.is_empty(),
        &format!("{cases} verdicts, mismatches: {mismatches:?}"),
    );
}

#[test]
fn criterion_3_constants() {
    // K_α: quadrature route vs gamma closed form at 200 α values
    let mut worst_k = 0.0f64;
    for i in 0..200 {
        let a = 1.001 + (1.999 - 1.001) * i as f64 / 199.0;
        let idx = alpha(a);
        let q = constants(idx).green_limit;
        let c = green_limit_closed(idx);
        worst_k = worst_k.max(((q - c) / c).abs());
    }
    // gamma recurrence on a pole-avoiding grid
    let mut worst_g = 0.0f64;
    let mut x = -4.85f64;
    while x < 25.0 {
        if (x - x.round()).abs() > 1e-3 && (x + 1.0 - (x + 1.0).round()).abs() > 1e-3 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            worst_g = worst_g.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
        }
        x += 0.137;
    }
    report(
        3,
        "constants: K_α and Γ recurrence",
        worst_k <= 1e-8 && worst_g <= 1e-12,
        &format!("K_α worst rel {worst_k:.2e} (tol 1e-8), Γ recurrence worst {worst_g:.2e} (tol 1e-12)"),
    );
}

#[test]
fn criterion_4_green_suite() {
    let rep = suites::green_suite(alpha(1.5), 42).unwrap();
    print!("{}", rep.render());
    let zero_violations = rep.checks.iter().all(|c| c.violations == 0);
    report(
        4,
        "Green suite (symmetry, monotonicity, limit, bound, diagonal, ratio)",
        rep.passed && zero_violations,
        &format!("{} checks, all zero-violation: {zero_violations}", rep.checks.len()),
    );
}

#[test]
fn criterion_5_orlicz_suite() {
    let rep = suites::orlicz_suite(alpha(1.5), 42).unwrap();
    print!("{}", rep.render());
    let zero_violations = rep.checks.iter().all(|c| c.violations == 0);
    report(
        5,
        "Orlicz suite (sandwich, square identity, indicator, Φ^{-1} sandwiches)",
        rep.passed && zero_violations,
        &format!("{} checks", rep.checks.len()),
    );
}

#[test]
fn criterion_6_nonlocal_suite() {
    let rep = suites::nonlocal_suite(alpha(1.5), 42).unwrap();
    print!("{}", rep.render());
    let zero_violations = rep.checks.iter().all(|c| c.violations == 0);
    report(
        6,
        "nonlocal suite (symmetry defect, Hardy-Rellich, part form, cross-check)",
        rep.passed && zero_violations,
        &format!("{} checks", rep.checks.len()),
    );
}

#[test]
fn criterion_7_bounds_plumbing() {
    let idx = alpha(1.5);
    // oracle ω_α = 1.5957691216057307
    let omega = 1.5957691216057307f64;
    let gap = criteria::spectral_gap_lower(1.0, idx).unwrap();
    let (l32, l8) = criteria::orlicz_poincare_lower(1.0, idx).unwrap();
    let e1 = (gap - 1.0 / (4.0 * omega)).abs();
    let e2 = (l32 - 1.0 / (32.0 * omega)).abs();
    let e3 = (l8 - 1.0 / (8.0 * omega)).abs();

    // β(r) non-increasing on a 60-point log grid for Poly(γ=2)
    let w = Weight::poly(idx, 2.0);
    let rate = criteria::super_poincare_rate(idx, &w, 1.0).unwrap();
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    for i in 0..60 {
        let r = 10f64.powf(-3.0 + 6.0 * i as f64 / 59.0);
        let b = rate.beta(r).unwrap();
        if !(b > 0.0) || b > prev * (1.0 + 1e-12) {
            monotone = false;
        }
        prev = b;
    }
    report(
        7,
        "bounds plumbing and β(r) monotonicity",
        e1 < 1e-10 && e2 < 1e-10 && e3 < 1e-10 && monotone,
        &format!("bound errors {e1:.1e}/{e2:.1e}/{e3:.1e} (tol 1e-10), β monotone: {monotone}"),
    );
}

#[test]
fn criterion_8_simulation() {
    let start = std::time::Instant::now();
    let idx = alpha(1.5);

    // occupation tail at x = 1 for Poly(γ=2): 0.25 within 3 binomial σ
    // over the 64 independent paths (the criterion is explicitly loose;
    // the across-path width and the Euler bias are reported alongside)
    let paths = 64;
    let cfg = PathConfig {
        alpha: idx,
        weight: Weight::poly(idx, 2.0),
        y0: 0.0,
        dt: 0.01,
        steps: 1_000_000, // horizon 10⁴
        seed: 42,
    };
    let stats = ensemble_occupation(&cfg, paths, &[1.0], &[], 0.1).unwrap();
    let est = stats.tail_estimate[0];
    let sigma_binom = (0.25f64 * 0.75 / paths as f64).sqrt();
    let occ_ok = (est - 0.25).abs() <= 3.0 * sigma_binom;
    println!(
        "  occupation tail at 1: {est:.5} (target 0.25, binomial 3σ {:.4}, across-path 3σ {:.5}, overflowed {})",
        3.0 * sigma_binom,
        stats.half_width[0],
        stats.overflowed_paths
    );

    // small-time kernel: ratio within ±10% at t = 0.01 with 10⁶ paths
    let kr = small_time_kernel_check(&|_| 1.0, idx, (1.0, 2.0), &[0.1, 0.03, 0.01], 1_000_000, 0.01, 42)
        .unwrap();
    let last = kr.rows.last().unwrap();
    let kernel_ok = (last.ratio - 1.0).abs() <= 0.10 && !last.low_statistics;
    for r in &kr.rows {
        println!("  kernel ratio at t={}: {:.4} ± {:.4}", r.t, r.ratio, r.half_width);
    }

    let elapsed = start.elapsed();
    report(
        8,
        "simulation: occupation tail and small-time kernel",
        occ_ok && kernel_ok && elapsed.as_secs() < 600,
        &format!(
            "tail dev {:+.5} vs 3σ {:.4}; ratio {:.4}; runtime {:.1?}",
            est - 0.25,
            3.0 * sigma_binom,
            last.ratio,
            elapsed
        ),
    );
}

/// Occupation-measure χ² against μ over 20 equal-probability bins
/// (module invariant; dt small enough that the Euler bias sits inside
/// the noise, horizon 10⁴ as required).
#[test]
fn occupation_chi_squared() {
    let idx = alpha(1.5);
    let w = Weight::poly(idx, 2.0);
    let paths = 16;
    let cfg = PathConfig {
        alpha: idx,
        weight: w.clone(),
        y0: 0.0,
        dt: 0.00125,
        steps: 8_000_000, // horizon 10⁴
        seed: 43,
    };
    // equal-probability bin edges from the closed-form tail
    let bins = 20usize;
    let mut edges = Vec::with_capacity(bins + 1);
    for k in 0..=bins {
        let u = k as f64 / bins as f64;
        if u == 0.0 {
            edges.push(-1e9);
        } else if u == 1.0 {
            edges.push(1e9);
        } else {
            // T(x) = (1+x)^{-2} ⇒ quantile x(u) = (2·min(u,1-u))^{-1/2} - 1
            let t = 2.0 * u.min(1.0 - u);
            let x = t.powf(-0.5) - 1.0;
            edges.push(if u >= 0.5 { x } else { -x });
        }
    }
    let stats = ensemble_occupation(&cfg, paths, &[], &edges, 0.1).unwrap();
    let mut chi2 = 0.0;
    for k in 0..bins {
        let se = stats.bin_se[k].max(1e-12);
        let dev = (stats.bin_occupation[k] - 0.05) / se;
        chi2 += dev * dev;
    }
    // 0.1% critical value of χ²_20
    let crit = 45.31;
    println!("  occupation χ² over 20 bins: {chi2:.1} (critical {crit} at the 0.1% level)");
    assert!(chi2 <= crit, "χ² = {chi2} exceeds {crit}");
}
