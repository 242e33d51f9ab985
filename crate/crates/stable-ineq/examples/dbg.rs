use stable_ineq::measure::Weight;
use stable_ineq::simulate::*;
use stable_ineq::StableIndex;

fn main() {
    let idx = StableIndex::new(1.5).unwrap();
    let w = Weight::poly(idx, 2.0);
    let bins = 20usize;
    let mut edges = Vec::new();
    for k in 0..=bins {
        let u = k as f64 / bins as f64;
        if u == 0.0 { edges.push(-1e9); }
        else if u == 1.0 { edges.push(1e9); }
        else {
            let t = 2.0 * u.min(1.0 - u);
            let x = t.powf(-0.5) - 1.0;
            edges.push(if u >= 0.5 { x } else { -x });
        }
    }
    for dt in [0.01, 0.0025] {
        let cfg = PathConfig { alpha: idx, weight: w.clone(), y0: 0.0, dt,
            steps: (2000.0/dt) as usize, seed: 43 };
        let stats = ensemble_occupation(&cfg, 32, &[], &edges, 0.1).unwrap();
        println!("dt={dt}:");
        for k in 0..bins {
            println!("  bin {:2} [{:8.3},{:8.3}): occ {:.5} (want 0.05) se {:.5}  dev/se {:+.1}",
                k, edges[k].max(-99.0), edges[k+1].min(99.0),
                stats.bin_occupation[k], stats.bin_se[k],
                (stats.bin_occupation[k]-0.05)/stats.bin_se[k].max(1e-12));
        }
    }
}
