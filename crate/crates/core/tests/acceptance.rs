//! Acceptance criteria, one line of output per criterion.
//!
//! Runs without the libtest harness so the result lines are always printed.
//! Criterion 9 is directional: its outcome is reported but does not fail
//! the run.

use std::path::Path;
use std::time::{Duration, Instant};

use irregcast::adversarial::{
    build_discriminator, build_forecaster, discriminator_update, generator_loss, train, train_supervised, ModelConfig,
    NetKind,
};
use irregcast::bench::{emit_report, run_bench, run_pathology_suite, BenchConfig, DataSource, REPORT_FILES};
use irregcast::data::{gen_synthetic, GenSpec, SizeDist};
use irregcast::metrics::{
    mape, mstd, population_std, rmse, smape, spec, v_f1, v_precision, v_recall, void_confusion, ForecastSet,
    MetricParams,
};
use irregcast::nn::{gradient_check, sigmoid, Adam, Linear, Lstm, ParamStore, Rng, Tensor2};
use irregcast::series::{classify_sbc, split_windows};
use irregcast::{SbcKind, WindowPair};

const METRIC_TOL: f64 = 1e-9;
const GRAD_TOL: f64 = 1e-4;
const GRAD_SAMPLES: usize = 100;
const GRAD_EPS: f64 = 1e-5;
const OPTIMUM_TOL: f64 = 0.05;
const EQUIVALENCE_TOL: f64 = 1e-12;
const ADI_REL_TOL: f64 = 0.05;
const LUMPY_SHARE: f64 = 0.95;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn one(y: &[f64], f: &[f64]) -> ForecastSet {
    ForecastSet::single(y, f).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= METRIC_TOL
}

fn check(failures: &mut Vec<String>, name: &str, got: f64, want: f64) {
    if !close(got, want) {
        failures.push(format!("{name}: got {got}, want {want}"));
    }
}

fn c1_metric_oracles() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    check(
        &mut failures,
        "mape [2,0,4]",
        mape(&one(&[2.0, 0.0, 4.0], &[1.0, 1.0, 2.0])).unwrap(),
        0.5,
    );
    check(
        &mut failures,
        "mape [1,2]",
        mape(&one(&[1.0, 2.0], &[2.0, 4.0])).unwrap(),
        1.0,
    );
    check(
        &mut failures,
        "smape [2,0]",
        smape(&one(&[2.0, 0.0], &[0.0, 0.0])).unwrap(),
        2.0,
    );
    check(
        &mut failures,
        "smape [0,3]",
        smape(&one(&[0.0, 3.0], &[1.0, 3.0])).unwrap(),
        1.0,
    );
    check(
        &mut failures,
        "rmse [3,0]",
        rmse(&one(&[3.0, 0.0], &[0.0, 0.0])),
        4.5f64.sqrt(),
    );
    check(
        &mut failures,
        "spec [1,0]",
        spec(&one(&[1.0, 0.0], &[0.0, 1.0]), 0.5, 0.5),
        0.25,
    );
    check(
        &mut failures,
        "mstd [0,4]",
        mstd(&one(&[0.0, 4.0], &[2.0, 2.0])).unwrap(),
        2.0,
    );

    let early = spec(&one(&[0.0, 0.0, 4.0], &[4.0, 0.0, 0.0]), 0.5, 0.5);
    let zero = spec(&one(&[0.0, 0.0, 4.0], &[0.0, 0.0, 0.0]), 0.5, 0.5);
    if early <= zero {
        failures.push(format!("spec early overstock {early} <= understock {zero}"));
    }

    let c = void_confusion(&one(&[0.0, 3.0, 0.0], &[0.2, 2.7, 1.4]), 0.5);
    if (c.tp, c.fn_, c.fp, c.tn) != (1, 1, 0, 1) {
        failures.push(format!("void counts {c:?}"));
    }
    check(&mut failures, "v_recall", v_recall(&c), 0.5);
    check(&mut failures, "v_precision", v_precision(&c), 1.0);
    check(&mut failures, "v_f1", v_f1(&c), 2.0 / 3.0);

    let elapsed = start.elapsed();
    let pass = failures.is_empty() && within(elapsed, 1);
    outcome(
        pass,
        format!(
            "{} failures, {:.3}s {}",
            failures.len(),
            elapsed.as_secs_f64(),
            failures.join("; ")
        ),
    )
}

fn c2_spec_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = Rng::new(2);
    let mut nonzero = 0;
    for _ in 0..1000 {
        let l = 1 + rng.below(16);
        let y: Vec<f64> = (0..l)
            .map(|_| {
                if rng.bernoulli(0.4) {
                    0.0
                } else {
                    rng.uniform_range(0.0, 50.0)
                }
            })
            .collect();
        if spec(&one(&y, &y), 0.5, 0.5) != 0.0 {
            nonzero += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        nonzero == 0 && within(elapsed, 5),
        format!("{nonzero} of 1000 non-zero, {:.3}s", elapsed.as_secs_f64()),
    )
}

fn c3_flat_mstd() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (seed, q, size) in [
        (0, 0.3, SizeDist::LogNormal { mu: 1.0, sigma: 1.2 }),
        (1, 0.15, SizeDist::UniformInt(1, 8)),
        (2, 0.5, SizeDist::Constant(3.0)),
    ] {
        let mut cfg = BenchConfig::new(DataSource::Generated(GenSpec {
            m: 200,
            t: 80,
            q,
            size,
            seed,
        }));
        cfg.p = 12;
        cfg.l = 8;
        cfg.methods = vec!["croston".into(), "adida".into()];
        let report = run_bench(&cfg).unwrap();
        let a = report.metrics("croston").unwrap().mstd.value().unwrap();
        let b = report.metrics("adida").unwrap().mstd.value().unwrap();
        let mean_std = report.actuals.iter().map(|y| population_std(y)).sum::<f64>() / report.actuals.len() as f64;
        let ok = a.to_bits() == b.to_bits() && (a - mean_std).abs() <= METRIC_TOL;
        pass &= ok;
        details.push(format!("seed {seed}: {a} vs {b}, mean std {mean_std}"));
    }
    outcome(pass, details.join("; "))
}

/// `sum(R * out)` with a fixed random projection `R`, so `d/d out = R`.
fn projection(rows: usize, cols: usize, rng: &mut Rng) -> Tensor2 {
    Tensor2::new(
        rows,
        cols,
        (0..rows * cols).map(|_| rng.uniform_range(-1.0, 1.0)).collect(),
    )
}

fn project(out: &Tensor2, r: &Tensor2) -> f64 {
    out.data().iter().zip(r.data()).map(|(a, b)| a * b).sum()
}

fn random_input(rows: usize, cols: usize, rng: &mut Rng) -> Tensor2 {
    Tensor2::new(
        rows,
        cols,
        (0..rows * cols).map(|_| rng.uniform_range(0.0, 2.0)).collect(),
    )
}

fn c4_gradient_gate() -> Outcome {
    let start = Instant::now();
    let mut rng = Rng::new(4);
    let mut results: Vec<(String, f64, usize)> = Vec::new();

    {
        let mut store = ParamStore::new();
        let layer = Linear::new(&mut store, "lin", 8, 6, &mut rng);
        let x = random_input(5, 8, &mut rng);
        let r = projection(5, 6, &mut rng);
        let rep = gradient_check(
            &mut store,
            |s| {
                let (y, cache) = layer.forward(s, &x);
                layer.backward(s, &cache, &r);
                project(&y, &r)
            },
            GRAD_SAMPLES,
            GRAD_EPS,
            &mut rng,
        );
        results.push(("linear".into(), rep.max_rel_error, rep.checked));
    }

    for steps in [1usize, 6] {
        let mut store = ParamStore::new();
        let layer = Lstm::new(&mut store, "lstm", 2, 3, &mut rng);
        let xs: Vec<Tensor2> = (0..steps).map(|_| random_input(4, 2, &mut rng)).collect();
        let rs: Vec<Tensor2> = (0..steps).map(|_| projection(4, 3, &mut rng)).collect();
        let rep = gradient_check(
            &mut store,
            |s| {
                let (hs, cache) = layer.forward_seq(s, &xs);
                layer.backward_seq(s, &cache, &rs);
                hs.iter().zip(&rs).map(|(h, r)| project(h, r)).sum()
            },
            GRAD_SAMPLES,
            GRAD_EPS,
            &mut rng,
        );
        results.push((format!("lstm {steps} step"), rep.max_rel_error, rep.checked));
    }

    for kind in [NetKind::Mlp, NetKind::Lstm] {
        let cfg = ModelConfig {
            forecaster: kind,
            discriminator: kind,
            p: 6,
            l: 4,
            hidden: 5,
            ..ModelConfig::default()
        };
        let mut f = build_forecaster(&cfg, &mut rng);
        let x = random_input(3, 6, &mut rng);
        let r = projection(3, 4, &mut rng);
        let (net, store) = f.parts_mut();
        let rep = gradient_check(
            store,
            |s| {
                let (y, cache) = net.forward(s, &x);
                net.backward(s, &cache, &r);
                project(&y, &r)
            },
            GRAD_SAMPLES,
            GRAD_EPS,
            &mut rng,
        );
        results.push((format!("{kind} forecaster"), rep.max_rel_error, rep.checked));

        let mut d = build_discriminator(&cfg, &mut rng);
        let y = random_input(3, 4, &mut rng);
        let r = projection(3, 1, &mut rng);
        let (net, store) = d.parts_mut();
        let rep = gradient_check(
            store,
            |s| {
                let (z, cache) = net.forward(s, &y);
                net.backward(s, &cache, &r);
                project(&z, &r)
            },
            GRAD_SAMPLES,
            GRAD_EPS,
            &mut rng,
        );
        results.push((format!("{kind} discriminator"), rep.max_rel_error, rep.checked));
    }

    for (fk, dk) in [
        (NetKind::Lstm, NetKind::Lstm),
        (NetKind::Lstm, NetKind::Mlp),
        (NetKind::Mlp, NetKind::Lstm),
        (NetKind::Mlp, NetKind::Mlp),
    ] {
        let cfg = ModelConfig {
            forecaster: fk,
            discriminator: dk,
            p: 6,
            l: 4,
            hidden: 4,
            ..ModelConfig::default()
        };
        let mut f = build_forecaster(&cfg, &mut rng);
        let mut d = build_discriminator(&cfg, &mut rng);
        let x = random_input(3, 6, &mut rng);
        let y = random_input(3, 4, &mut rng);
        let (net, store) = f.parts_mut();
        let rep = gradient_check(
            store,
            |s| generator_loss(net, s, &mut d, &x, &y, 1.0, 0.5).total,
            GRAD_SAMPLES,
            GRAD_EPS,
            &mut rng,
        );
        results.push((
            format!("generator loss {}", cfg.cell_name()),
            rep.max_rel_error,
            rep.checked,
        ));
    }

    let elapsed = start.elapsed();
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let min_checked = results.iter().map(|r| r.2).min().unwrap();
    let failing: Vec<String> = results
        .iter()
        .filter(|r| r.1 >= GRAD_TOL)
        .map(|r| format!("{} {:.2e}", r.0, r.1))
        .collect();
    outcome(
        failing.is_empty() && min_checked >= 50 && within(elapsed, 30),
        format!(
            "{} checks, worst rel error {worst:.2e}, min coordinates {min_checked}, {:.2}s {}",
            results.len(),
            elapsed.as_secs_f64(),
            failing.join("; ")
        ),
    )
}

fn c5_discriminator_optimum() -> Outcome {
    let start = Instant::now();
    // two points u = [1, 0], v = [0, 1]; real mass 0.8/0.2, fake mass 0.3/0.7
    let u = [1.0, 0.0];
    let v = [0.0, 1.0];
    let batch = |nu: usize, nv: usize| {
        let rows: Vec<[f64; 2]> = std::iter::repeat_n(u, nu).chain(std::iter::repeat_n(v, nv)).collect();
        Tensor2::from_rows(&rows)
    };
    let real = batch(8, 2);
    let fake = batch(3, 7);
    let cfg = ModelConfig {
        discriminator: NetKind::Mlp,
        l: 2,
        hidden: 16,
        ..ModelConfig::default()
    };
    let mut d = build_discriminator(&cfg, &mut Rng::new(5));
    let mut opt = Adam::new(d.params(), 1e-3);
    for _ in 0..2000 {
        discriminator_update(&mut d, &mut opt, &real, &fake).unwrap();
    }
    let probe = Tensor2::from_rows(&[u, v]);
    let logits = d.logits(&probe);
    let (du, dv) = (sigmoid(logits.get(0, 0)), sigmoid(logits.get(1, 0)));
    let (tu, tv) = (0.8 / (0.8 + 0.3), 0.2 / (0.2 + 0.7));
    let elapsed = start.elapsed();
    outcome(
        (du - tu).abs() <= OPTIMUM_TOL && (dv - tv).abs() <= OPTIMUM_TOL && within(elapsed, 30),
        format!(
            "D(u) {du:.4} vs {tu:.4}, D(v) {dv:.4} vs {tv:.4}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn windows(seed: u64, m: usize, t: usize, p: usize, l: usize) -> (Vec<WindowPair>, Vec<WindowPair>) {
    let spec = GenSpec {
        m,
        t,
        q: 0.3,
        size: SizeDist::UniformInt(1, 6),
        seed,
    };
    let d = gen_synthetic(&spec, p, l).unwrap();
    let mut train_w = Vec::new();
    let mut val = Vec::new();
    for s in &d.series {
        let split = split_windows(s, p, l).unwrap();
        train_w.extend(split.train);
        val.extend(split.validation);
    }
    (train_w, val)
}

fn c6_supervised_equivalence() -> Outcome {
    let (train_w, _) = windows(6, 64, 40, 8, 4);
    let mut details = Vec::new();
    let mut pass = true;
    for kind in [NetKind::Mlp, NetKind::Lstm] {
        let cfg = ModelConfig {
            forecaster: kind,
            discriminator: NetKind::Lstm,
            p: 8,
            l: 4,
            hidden: 8,
            epochs: 3,
            batch_size: 32,
            lambda_adv: 0.0,
            ..ModelConfig::default()
        };
        let (_, history) = train(&train_w, &[], &cfg).unwrap();
        let (_, sup) = train_supervised(&train_w, &cfg).unwrap();
        let adv: Vec<f64> = history.steps.iter().map(|s| s.total).collect();
        let worst = adv.iter().zip(&sup).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let ok = adv.len() == sup.len() && !adv.is_empty() && worst <= EQUIVALENCE_TOL;
        pass &= ok;
        details.push(format!("{kind}: {} steps, max gap {worst:e}", adv.len()));
    }
    outcome(pass, details.join("; "))
}

/// Neural settings for the full-size bench runs.
fn bench_model(cfg: &mut BenchConfig) {
    cfg.model.hidden = 16;
    cfg.model.epochs = 3;
    cfg.model.batch_size = 256;
}

fn c7_determinism() -> Outcome {
    let start = Instant::now();
    let mut cfg = BenchConfig::new(DataSource::Generated(GenSpec {
        m: 500,
        t: 96,
        seed: 0,
        ..GenSpec::default()
    }));
    cfg.p = 18;
    cfg.l = 6;
    cfg.seed = 0;
    bench_model(&mut cfg);
    let dir = tempfile::tempdir().unwrap();
    let mut failed_methods = 0;
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let report = run_bench(&cfg).unwrap();
        failed_methods += report.rows.iter().filter(|r| r.outcome.is_err()).count();
        let written = emit_report(&report, dir.path().join(run)).unwrap();
        files = written
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .filter(|n| n.starts_with("forecasts_") || REPORT_FILES.contains(&n.as_str()))
            .collect();
    }
    let read = |run: &str, f: &str| std::fs::read(Path::new(&dir.path().join(run)).join(f)).unwrap();
    let differing: Vec<&String> = files.iter().filter(|f| read("a", f) != read("b", f)).collect();
    let elapsed = start.elapsed();
    outcome(
        differing.is_empty() && failed_methods == 0 && files.len() == 3 + 9 && within(elapsed, 600),
        format!(
            "{} files compared, {} differ, {failed_methods} method failures, {:.1}s",
            files.len(),
            differing.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn c8_pathology() -> Outcome {
    let report = run_pathology_suite(&MetricParams::default());
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.claim.as_str())
        .collect();
    let m = |n: &str| report.variant(n).metrics.clone();
    outcome(
        report.passed(),
        format!(
            "MAPE flat/shift/plausible {}/{}/{}, MSTD flat/plausible/shift {}/{}/{}, V-F1 flat/plausible {:.3}/{:.3} {}",
            m("flat").mape,
            m("shift").mape,
            m("plausible").mape,
            m("flat").mstd,
            m("plausible").mstd,
            m("shift").mstd,
            m("flat").v_f1,
            m("plausible").v_f1,
            failed.join("; ")
        ),
    )
}

fn c9_direction() -> Outcome {
    let mut recall_wins = 0;
    let mut mstd_wins = 0;
    let mut details = Vec::new();
    for seed in 0..3 {
        let mut cfg = BenchConfig::new(DataSource::Generated(GenSpec {
            m: 1000,
            t: 96,
            q: 0.2,
            size: SizeDist::UniformInt(1, 4),
            seed,
        }));
        cfg.p = 18;
        cfg.l = 6;
        cfg.seed = seed;
        cfg.model.seed = seed;
        bench_model(&mut cfg);
        cfg.methods = vec!["mlp".into(), "NR-R".into(), "R-NR".into()];
        let report = run_bench(&cfg).unwrap();
        let get = |n: &str| report.metrics(n).cloned();
        let (Some(mlp), Some(nrr), Some(rnr)) = (get("mlp"), get("NR-R"), get("R-NR")) else {
            details.push(format!("seed {seed}: a method failed"));
            continue;
        };
        let (m_nrr, m_rnr) = (nrr.mstd.value().unwrap(), rnr.mstd.value().unwrap());
        recall_wins += usize::from(nrr.v_recall >= mlp.v_recall);
        mstd_wins += usize::from(m_rnr <= m_nrr);
        details.push(format!(
            "seed {seed}: V-Recall NR-R {:.3} vs mlp {:.3}, MSTD R-NR {m_rnr:.4} vs NR-R {m_nrr:.4}",
            nrr.v_recall, mlp.v_recall
        ));
    }
    outcome(
        recall_wins >= 2 && mstd_wins >= 2,
        format!("recall {recall_wins}/3, mstd {mstd_wins}/3; {}", details.join("; ")),
    )
}

fn c10_generator_consistency() -> Outcome {
    let interval = gen_synthetic(
        &GenSpec {
            m: 1000,
            t: 182,
            q: 0.25,
            size: SizeDist::Constant(1.0),
            seed: 10,
        },
        1,
        1,
    )
    .unwrap();
    let adi = interval.stats().mean_adi.unwrap();
    let lumpy_set = gen_synthetic(
        &GenSpec {
            m: 1000,
            t: 182,
            q: 0.1,
            size: SizeDist::LogNormal { mu: 1.0, sigma: 1.2 },
            seed: 11,
        },
        1,
        1,
    )
    .unwrap();
    let lumpy = lumpy_set
        .series
        .iter()
        .filter(|s| classify_sbc(s).kind == SbcKind::Lumpy)
        .count();
    let share = lumpy as f64 / lumpy_set.len() as f64;
    outcome(
        (adi - 4.0).abs() / 4.0 <= ADI_REL_TOL && share >= LUMPY_SHARE,
        format!("mean ADI {adi:.4}, lumpy share {share:.3}"),
    )
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome, bool);
    let criteria: [Criterion; 10] = [
        (1, "metric oracles", c1_metric_oracles, true),
        (2, "SPEC identity", c2_spec_identity, true),
        (3, "flat-forecaster MSTD equality", c3_flat_mstd, true),
        (4, "gradient gate", c4_gradient_gate, true),
        (5, "discriminator optimum", c5_discriminator_optimum, true),
        (6, "supervised equivalence", c6_supervised_equivalence, true),
        (7, "bench determinism", c7_determinism, true),
        (8, "pathology suite", c8_pathology, true),
        (9, "direction check (soft)", c9_direction, false),
        (10, "SBC/generator consistency", c10_generator_consistency, true),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut hard_failures = 0;
    for (n, name, run, hard) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let o = run();
        let status = match (o.pass, hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (soft, not gating)",
        };
        println!("criterion {n:>2} [{name}]: {status}: {}", o.detail);
        if !o.pass && hard {
            hard_failures += 1;
        }
    }
    if hard_failures > 0 {
        eprintln!("{hard_failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
