use kfss::experiment_harness::{run_campaign, GeneratorConfig};
use std::time::Instant;

#[test]
#[ignore]
fn probe_extreme_regimes() {
    let grid: Vec<(&str, (f64, f64), f64, (f64, f64))> = vec![
        ("rho995", (0.9, 0.995), 0.5, (0.5, 1.5)),
        ("rho995-wild", (0.9, 0.995), 1e-3, (1e-3, 10.0)),
        ("wildV", (0.3, 0.9), 0.5, (1e-4, 10.0)),
        ("rho999", (0.95, 0.999), 0.5, (0.5, 1.5)),
    ];
    for (name, rr, wreg, vr) in grid {
        let cfg = GeneratorConfig {
            n: 5,
            sensors: 10,
            budget: 4,
            spectral_radius_range: rr,
            w_regularizer: wreg,
            v_range: vr,
            seed: 777,
        };
        let t = Instant::now();
        let out = run_campaign(&cfg, 100, 2).unwrap();
        let s = &out.stats;
        eprintln!(
            "{name:12} |Q|=10: mean={:.3} cv={:.3} max={:.2} a10={} b2={} failed={} in {:?}",
            s.mean_ratio, s.cv_ratio, s.max_ratio, s.cumulative.a10, s.cumulative.b2, s.failed,
            t.elapsed()
        );
    }
}
