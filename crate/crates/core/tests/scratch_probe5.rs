use kfss::experiment_harness::GeneratorConfig;
use std::time::Instant;

#[test]
#[ignore]
fn probe_quantiles() {
    let grid: Vec<(&str, (f64, f64), f64, (f64, f64))> = vec![
        ("A-rho995", (0.9, 0.995), 0.5, (0.5, 1.5)),
        ("B-rho995-wild", (0.9, 0.995), 1e-3, (1e-3, 10.0)),
        ("C-wildV", (0.3, 0.9), 0.5, (1e-4, 10.0)),
        ("D-rho98", (0.5, 0.98), 0.5, (0.5, 1.5)),
        ("E-rho98-wideV", (0.9, 0.98), 0.5, (0.05, 5.0)),
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
        let mut ratios = Vec::new();
        let mut errors = 0usize;
        for index in 0..150u64 {
            let rec = kfss::experiment_harness::evaluate_system(&cfg, index);
            match rec.r {
                Some(r) => ratios.push(r),
                None => errors += 1,
            }
        }
        ratios.sort_by(f64::total_cmp);
        let q = |p: f64| ratios[((ratios.len() - 1) as f64 * p) as usize];
        eprintln!(
            "{name:15} p50={:.3} p90={:.3} p99={:.3} max={:.2} errors={errors} in {:?}",
            q(0.5),
            q(0.9),
            q(0.99),
            ratios.last().unwrap(),
            t.elapsed()
        );
    }
}
