use kfss::experiment_harness::{run_campaign, GeneratorConfig};
use std::time::Instant;

#[test]
#[ignore]
fn probe_max_trend_regimes() {
    let regimes: Vec<(&str, (f64, f64), f64, (f64, f64))> = vec![
        ("hi-rho", (0.7, 0.98), 0.5, (0.5, 1.5)),
        ("hi-rho-wideV", (0.7, 0.98), 0.5, (0.05, 5.0)),
    ];
    for (name, rr, wreg, vr) in regimes {
        for sensors in [10usize, 20, 30] {
            let cfg = GeneratorConfig {
                n: 5,
                sensors,
                budget: 4,
                spectral_radius_range: rr,
                w_regularizer: wreg,
                v_range: vr,
                seed: 1,
            };
            let t = Instant::now();
            let out = run_campaign(&cfg, 150, 2).unwrap();
            let s = &out.stats;
            eprintln!(
                "{name} |Q|={sensors}: mean={:.5} max={:.3} a10={} in {:?}",
                s.mean_ratio, s.max_ratio, s.cumulative.a10, t.elapsed()
            );
        }
    }
}
