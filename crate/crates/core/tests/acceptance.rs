//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed:
//! `cargo test --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use causal_core::data::{Dataset, RandomSeed};
use causal_core::estimate::logistic::{gradient, log_likelihood, logistic_fit};
use causal_core::estimate::{estimate_iv_wald, ols_fit};
use causal_core::identify::{find_backdoor_sets, AdjustmentSearch, Estimand, IdentifyError};
use causal_core::refute::{
    refute_bootstrap, refute_data_subset, refute_dummy_outcome, refute_placebo_treatment,
    refute_simulated_outcome, sensitivity_unobserved_confounder, PlaceboMode, RefuteSettings,
    SensitivityGrid,
};
use causal_core::simulate::{
    dgp_example1, dgp_example2, replicate_figure1, summarize_figure, EXAMPLE1_GRAPH, EXAMPLE2_GRAPH,
};
use common::{
    backdoor_pipeline, normal_equations, regression_pipeline, ConstantEstimator, RawDag,
    EXAMPLE2_FAULTY_GRAPH,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn within(elapsed: Duration, limit: u64, what: &str) -> Result<(), String> {
    ensure(
        elapsed.as_secs_f64() < limit as f64,
        format!("{what} took {:.1}s, limit {limit}s", elapsed.as_secs_f64()),
    )
}

fn instrument_adjustment() -> Outcome {
    let start = Instant::now();
    let rows = replicate_figure1(1, 100, 10_000, RandomSeed(2024)).map_err(|e| e.to_string())?;
    let s = summarize_figure(1, &rows).map_err(|e| e.to_string())?;
    within(start.elapsed(), 60, "replication")?;
    ensure(
        (9.5..=10.5).contains(&s.correct_mean),
        format!("correct mean {:.3} outside [9.5, 10.5]", s.correct_mean),
    )?;
    ensure(
        s.std_ratio >= 2.0,
        format!("std ratio {:.3} < 2", s.std_ratio),
    )?;
    Ok(format!(
        "correct mean {:.3} (std {:.3}), faulty std {:.3}, ratio {:.2}, {:.1}s",
        s.correct_mean,
        s.correct_std,
        s.faulty_std,
        s.std_ratio,
        start.elapsed().as_secs_f64()
    ))
}

fn mediator_adjustment() -> Outcome {
    let start = Instant::now();
    let rows = replicate_figure1(2, 100, 10_000, RandomSeed(2024)).map_err(|e| e.to_string())?;
    let s = summarize_figure(2, &rows).map_err(|e| e.to_string())?;
    within(start.elapsed(), 30, "replication")?;
    ensure(
        s.faulty_mean.abs() < 0.1,
        format!("faulty mean {:.4}, |.| not < 0.1", s.faulty_mean),
    )?;
    ensure(
        (8.8..=9.2).contains(&s.correct_mean),
        format!("correct mean {:.3} outside [8.8, 9.2]", s.correct_mean),
    )?;
    Ok(format!(
        "faulty mean {:.4}, correct mean {:.4}, {:.1}s",
        s.faulty_mean,
        s.correct_mean,
        start.elapsed().as_secs_f64()
    ))
}

fn identification_oracle() -> Outcome {
    let start = Instant::now();
    let mut dsep_checks = 0usize;
    let mut pair_checks = 0usize;
    for seed in 0..500u64 {
        let dag = RawDag::random(seed, 8);
        let g = dag.to_graph();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD5E9);
        let n = dag.n();
        for _ in 0..10 {
            // random disjoint X, Y, Z with X and Y non-empty
            let mut part = vec![3u8; n];
            for p in part.iter_mut() {
                *p = rng.random_range(0..4);
            }
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n);
            if a == b {
                b = (a + 1) % n;
            }
            part[a] = 0;
            part[b] = 1;
            let pick = |k: u8| -> BTreeSet<usize> { (0..n).filter(|&i| part[i] == k).collect() };
            let (x, y, z) = (pick(0), pick(1), pick(2));
            let got = g
                .d_separated(&dag.names_of(&x), &dag.names_of(&y), &dag.names_of(&z))
                .map_err(|e| e.to_string())?;
            let want = dag.d_separated(&x, &y, &z);
            ensure(
                got == want,
                format!("dag {seed}: d_separated({x:?}, {y:?} | {z:?}) = {got}, oracle {want}"),
            )?;
            dsep_checks += 1;
        }
        for t in 0..n {
            for y in 0..n {
                if t == y || !dag.observed[t] || !dag.observed[y] {
                    continue;
                }
                let (tn, yn) = (&dag.names[t], &dag.names[y]);
                let minimal = find_backdoor_sets(&g, tn, yn, AdjustmentSearch::Minimal);
                if dag.descendants(y).contains(&t) {
                    ensure(
                        matches!(minimal, Err(IdentifyError::OutcomeCausesTreatment { .. })),
                        format!("dag {seed}: {yn} causes {tn} but search returned {minimal:?}"),
                    )?;
                    continue;
                }
                let (all_want, min_want) = dag.backdoor_sets(t, y);
                let min_got = minimal.map_err(|e| e.to_string())?;
                ensure(
                    min_got == min_want,
                    format!("dag {seed} ({tn}, {yn}): minimal {min_got:?}, oracle {min_want:?}"),
                )?;
                let all_got = find_backdoor_sets(&g, tn, yn, AdjustmentSearch::All)
                    .map_err(|e| e.to_string())?;
                ensure(
                    all_got == all_want,
                    format!("dag {seed} ({tn}, {yn}): all sets differ from oracle"),
                )?;
                pair_checks += 1;
            }
        }
    }
    within(start.elapsed(), 120, "oracle comparison")?;
    Ok(format!(
        "500 DAGs, {dsep_checks} d-separation queries, {pair_checks} treatment/outcome pairs, 0 mismatches, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den.max(f64::MIN_POSITIVE)
}

fn numerical_kernels() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut worst_ols = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(50..400);
        let k = rng.random_range(1..6);
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let shift: f64 = rng.random_range(-3.0..3.0);
                (0..n)
                    .map(|_| {
                        shift + {
                            let v: f64 = StandardNormal.sample(&mut rng);
                            v
                        }
                    })
                    .collect::<Vec<f64>>()
            })
            .collect();
        let y: Vec<f64> = (0..n)
            .map(|i| {
                1.5 + cols
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (j as f64 - 1.0) * c[i])
                    .sum::<f64>()
                    + {
                        let v: f64 = StandardNormal.sample(&mut rng);
                        v
                    }
            })
            .collect();
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        let fit = ols_fit(&refs, &y).map_err(|e| e.to_string())?;
        worst_ols = worst_ols.max(rel_diff(&fit.coefficients, &normal_equations(&refs, &y)));
    }
    ensure(
        worst_ols <= 1e-8,
        format!("OLS relative error {worst_ols:e}"),
    )?;

    let mut worst_grad = 0.0f64;
    let mut monotone = 0;
    let mut p = 0;
    while monotone < 100 {
        p += 1;
        let n = rng.random_range(30..300);
        let k = rng.random_range(1..5);
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        let truth: Vec<f64> = (0..=k).map(|_| rng.random_range(-1.5..1.5)).collect();
        let separable = p % 10 == 0;
        let t: Vec<f64> = (0..n)
            .map(|i| {
                let eta = truth[k] + (0..k).map(|j| truth[j] * cols[j][i]).sum::<f64>();
                let hit = if separable {
                    eta > 0.0
                } else {
                    rng.random::<f64>() < 1.0 / (1.0 + (-eta).exp())
                };
                if hit {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let beta: Vec<f64> = (0..=k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let analytic = gradient(&refs, &t, &beta);
        let h = 1e-5;
        let numeric: Vec<f64> = (0..=k)
            .map(|j| {
                let mut up = beta.clone();
                let mut dn = beta.clone();
                up[j] += h;
                dn[j] -= h;
                (log_likelihood(&refs, &t, &up) - log_likelihood(&refs, &t, &dn)) / (2.0 * h)
            })
            .collect();
        worst_grad = worst_grad.max(rel_diff(&numeric, &analytic));
        let ones = t.iter().filter(|&&v| v == 1.0).count();
        if ones == 0 || ones == n {
            continue;
        }
        let fit = logistic_fit(&refs, &t).map_err(|e| e.to_string())?;
        ensure(
            fit.objective_trace.windows(2).all(|w| w[1] >= w[0]),
            format!(
                "problem {p}: objective decreased: {:?}",
                fit.objective_trace
            ),
        )?;
        monotone += 1;
    }
    ensure(
        worst_grad <= 1e-4,
        format!("gradient relative error {worst_grad:e}"),
    )?;
    Ok(format!(
        "OLS max rel err {worst_ols:.1e}, gradient max rel err {worst_grad:.1e}, {monotone} monotone Newton traces"
    ))
}

fn iv_consistency() -> Outcome {
    let sim = dgp_example1(1_000_000, RandomSeed(5)).map_err(|e| e.to_string())?;
    let e = estimate_iv_wald(&sim.data, &Estimand::iv("t", "y", ["z".to_string()].into()))
        .map_err(|e| e.to_string())?;
    ensure(
        (9.8..=10.2).contains(&e.ate),
        format!("Wald ATE {:.4} outside [9.8, 10.2]", e.ate),
    )?;
    Ok(format!(
        "Wald ATE {:.4} (se {:.4}) at n = 10^6",
        e.ate, e.std_error
    ))
}

fn count_passes(
    dot: &str,
    make: fn(usize, RandomSeed) -> Dataset,
    placebo: bool,
) -> Result<usize, String> {
    let p = regression_pipeline(dot);
    let settings = RefuteSettings::default();
    let mut passes = 0;
    for s in 0..100u64 {
        let data = make(2000, RandomSeed(10_000 + s));
        let r = if placebo {
            refute_placebo_treatment(&p, &data, &settings, PlaceboMode::Bernoulli, RandomSeed(s))
        } else {
            refute_dummy_outcome(&p, &data, &settings, RandomSeed(s))
        }
        .map_err(|e| e.to_string())?;
        passes += usize::from(r.passed);
    }
    Ok(passes)
}

fn ex1(n: usize, seed: RandomSeed) -> Dataset {
    dgp_example1(n, seed).unwrap().data
}

fn ex2(n: usize, seed: RandomSeed) -> Dataset {
    dgp_example2(n, seed).unwrap().data
}

fn refuter_calibration() -> Outcome {
    let mut detail = Vec::new();
    for (label, dot, make) in [
        (
            "ex1",
            EXAMPLE1_GRAPH,
            ex1 as fn(usize, RandomSeed) -> Dataset,
        ),
        ("ex2", EXAMPLE2_GRAPH, ex2),
    ] {
        for placebo in [true, false] {
            let passes = count_passes(dot, make, placebo)?;
            let name = if placebo { "placebo" } else { "dummy" };
            ensure(
                passes >= 90,
                format!("{name} on {label} passed {passes}/100 seeds"),
            )?;
            detail.push(format!("{name}/{label} {passes}/100"));
        }
    }

    let data = ex1(2000, RandomSeed(77));
    let bug = backdoor_pipeline(EXAMPLE1_GRAPH, Arc::new(ConstantEstimator(10.0)));
    let s = RefuteSettings::default();
    let pl = refute_placebo_treatment(&bug, &data, &s, PlaceboMode::Bernoulli, RandomSeed(1))
        .map_err(|e| e.to_string())?;
    let du = refute_dummy_outcome(&bug, &data, &s, RandomSeed(1)).map_err(|e| e.to_string())?;
    for r in [&pl, &du] {
        ensure(
            !r.passed && r.p_value < 0.01,
            format!(
                "{} did not reject the constant estimator (p = {})",
                r.refuter, r.p_value
            ),
        )?;
    }
    detail.push(format!(
        "constant bug rejected (p = {}, {})",
        pl.p_value, du.p_value
    ));

    let data = ex1(10_000, RandomSeed(78));
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    for effect in [0.0, 5.0, 10.0] {
        let r = refute_simulated_outcome(&p, &data, effect, &s, RandomSeed(3))
            .map_err(|e| e.to_string())?;
        ensure(
            (r.refuted_mean - effect).abs() <= 0.5,
            format!("simulated outcome {effect}: mean {:.4}", r.refuted_mean),
        )?;
        detail.push(format!("sim {effect} -> {:.3}", r.refuted_mean));
    }
    Ok(detail.join(", "))
}

fn negative_result() -> Outcome {
    let faulty = regression_pipeline(EXAMPLE2_FAULTY_GRAPH);
    let s = RefuteSettings::default();
    let mut lines = Vec::new();
    for seed in 0..5u64 {
        let data = ex2(10_000, RandomSeed(500 + seed));
        let est = faulty
            .run(&data, RandomSeed(seed))
            .map_err(|e| e.to_string())?;
        ensure(
            est.ate.abs() < 0.5 && !(est.ci_low..=est.ci_high).contains(&9.0),
            format!("faulty estimate {est} is not a precise zero"),
        )?;
        let b =
            refute_bootstrap(&faulty, &data, &s, RandomSeed(seed)).map_err(|e| e.to_string())?;
        let d = refute_data_subset(&faulty, &data, 0.8, &s, RandomSeed(seed))
            .map_err(|e| e.to_string())?;
        let ci = b.ci.expect("bootstrap publishes an interval");
        ensure(
            b.passed && d.passed,
            format!(
                "seed {seed}: bootstrap passed {} (p {}), subset passed {} (p {})",
                b.passed, b.p_value, d.passed, d.p_value
            ),
        )?;
        ensure(
            !(ci[0]..=ci[1]).contains(&9.0),
            format!("bootstrap interval {ci:?} covers 9.0"),
        )?;
        lines.push(format!(
            "ate {:.3} ci [{:.3}, {:.3}]",
            est.ate, ci[0], ci[1]
        ));
    }
    Ok(format!(
        "biased adjustment for m passes bootstrap and subset refuters on 5 datasets: {}",
        lines.join("; ")
    ))
}

fn sensitivity() -> Outcome {
    let data = ex1(10_000, RandomSeed(90));
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    let grid = SensitivityGrid {
        kappa_t: vec![0.0, 1.0],
        kappa_y: vec![0.0, 1.0, 2.0, 5.0],
        replications: 20,
    };
    let s = sensitivity_unobserved_confounder(&p, &data, &grid, RandomSeed(91))
        .map_err(|e| e.to_string())?;
    let origin = s.cell(0.0, 0.0).unwrap();
    ensure(
        (origin.adjusted_ate - s.original_ate).abs() <= 2.0 * origin.std_error,
        format!(
            "(0,0) cell {} vs original {} (se {})",
            origin.adjusted_ate, s.original_ate, origin.std_error
        ),
    )?;
    let path: Vec<f64> = grid
        .kappa_y
        .iter()
        .map(|&ky| s.cell(1.0, ky).unwrap().adjusted_ate)
        .collect();
    ensure(
        path.windows(2).all(|w| w[1] > w[0]),
        format!("not monotone in kappa_y at kappa_t = 1: {path:?}"),
    )?;
    Ok(format!(
        "(0,0) = original = {:.4}; kappa_t = 1 path {:?}",
        s.original_ate,
        path.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_causal");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(bin)
            .args(args)
            .current_dir(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        ensure(
            out.status.success(),
            format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)),
        )?;
        Ok(out.stdout)
    };
    run(&[
        "simulate",
        "--dgp",
        "example1",
        "--n",
        "5000",
        "--seed",
        "11",
        "--output",
        "ex1.csv",
        "--graph-output",
        "ex1.dot",
    ])?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let tag = format!("run{k}");
        let ident = run(&[
            "identify",
            "--graph",
            "ex1.dot",
            "--treatment",
            "t",
            "--outcome",
            "y",
        ])?;
        let common = [
            "--data",
            "ex1.csv",
            "--graph",
            "ex1.dot",
            "--treatment",
            "t",
            "--outcome",
            "y",
            "--estimand-kind",
            "backdoor",
            "--seed",
            "7",
        ];
        let est_path = format!("{tag}_estimate.json");
        let mut est_args = vec!["estimate"];
        est_args.extend(common);
        est_args.extend(["--output", &est_path]);
        run(&est_args)?;
        let ref_path = format!("{tag}_refute.json");
        let mut ref_args = vec!["refute"];
        ref_args.extend(common);
        for r in causal_core::refute::REFUTER_NAMES {
            ref_args.extend(["--refuter", r]);
        }
        ref_args.extend(["--output", &ref_path]);
        run(&ref_args)?;
        let est = std::fs::read(dir.path().join(&est_path)).map_err(|e| e.to_string())?;
        let rep = std::fs::read(dir.path().join(&ref_path)).map_err(|e| e.to_string())?;
        let parsed: serde_json::Value = serde_json::from_slice(&rep).map_err(|e| e.to_string())?;
        ensure(
            parsed["refutations"].as_array().map(Vec::len) == Some(7),
            "refute output does not hold seven reports".into(),
        )?;
        outputs.push((ident, est, rep));
    }
    ensure(
        outputs[0] == outputs[1],
        "outputs differ between runs".into(),
    )?;
    Ok(format!(
        "identify/estimate/refute JSON identical across two runs ({} bytes of refute JSON)",
        outputs[0].2.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("instrument adjustment variance", instrument_adjustment),
        ("mediator adjustment bias", mediator_adjustment),
        ("identification oracle equivalence", identification_oracle),
        ("numerical kernels", numerical_kernels),
        ("iv consistency", iv_consistency),
        ("refuter calibration", refuter_calibration),
        ("negative result preserved", negative_result),
        ("sensitivity surface", sensitivity),
        ("end-to-end determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let label = format!("criterion {} ({name})", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("{label}: PASS: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{label}: FAIL: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
