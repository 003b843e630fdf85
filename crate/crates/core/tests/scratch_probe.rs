use kfss::bound_engine::{improved_ratio_bound, MTraceMode};
use kfss::experiment_harness::{generate_random_system, performance_ratio, GeneratorConfig};
use std::time::Instant;

#[test]
#[ignore]
fn probe_c_sign_and_timing() {
    let cfg = GeneratorConfig {
        n: 5,
        sensors: 8,
        budget: 3,
        seed: 12345,
        ..GeneratorConfig::default()
    };
    let mut c_neg = 0usize;
    let mut rold_viol = 0usize;
    let mut rnew_viol = 0usize;
    let mut c_min = f64::INFINITY;
    let started = Instant::now();
    for index in 0..500u64 {
        let model = generate_random_system(&cfg, index).unwrap();
        let outcome = performance_ratio(&model, cfg.budget).unwrap();
        let report = improved_ratio_bound(&model, cfg.budget, MTraceMode::Lyapunov).unwrap();
        if let Some(c) = report.c {
            c_min = c_min.min(c);
            if c < 0.0 {
                c_neg += 1;
            }
        }
        if outcome.r > report.r_old + 1e-6 {
            rold_viol += 1;
        }
        if let Some(rn) = report.r_new {
            if outcome.r > rn + 1e-6 {
                rnew_viol += 1;
            }
        }
    }
    eprintln!(
        "500 systems in {:?}; c_neg={c_neg} c_min={c_min:.3e} rold_viol={rold_viol} rnew_viol={rnew_viol}",
        started.elapsed()
    );

    // timing of the big cell shape: one system at |Q|=30, q=4
    let big = GeneratorConfig {
        n: 5,
        sensors: 30,
        budget: 4,
        seed: 7,
        ..GeneratorConfig::default()
    };
    let t0 = Instant::now();
    let model = generate_random_system(&big, 0).unwrap();
    let outcome = performance_ratio(&model, 4).unwrap();
    let t_ratio = t0.elapsed();
    let t1 = Instant::now();
    let report = improved_ratio_bound(&model, 4, MTraceMode::Lyapunov).unwrap();
    let t_bounds = t1.elapsed();
    eprintln!(
        "one |Q|=30 system: ratio {:?} (r={:.3}), bounds {:?} (lambda1_max exact={})",
        t_ratio, outcome.r, t_bounds, report.lambda1_max_exact
    );
}
