mod common;

use std::sync::Arc;

use causal_core::data::{Dataset, RandomSeed};
use causal_core::refute::{
    refute_bootstrap, refute_data_subset, refute_dummy_outcome, refute_placebo_treatment,
    refute_random_common_cause, refute_simulated_outcome, sensitivity_unobserved_confounder,
    PlaceboMode, RefuteError, RefuteSettings, RefuterSpec, SensitivityGrid,
};
use causal_core::simulate::{dgp_example1, dgp_example2, EXAMPLE1_GRAPH, EXAMPLE2_GRAPH};
use common::{backdoor_pipeline, regression_pipeline, MeanOfCoefficients};

fn settings(r: usize) -> RefuteSettings {
    RefuteSettings::with_replications(r)
}

#[test]
fn dummy_outcome_with_constant_outcome() {
    let sim = dgp_example1(500, RandomSeed(1)).unwrap();
    let n = sim.data.row_count();
    let data = sim.data.replace_column("y", vec![3.0; n]).unwrap();
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    let r = refute_dummy_outcome(&p, &data, &settings(10), RandomSeed(0)).unwrap();
    assert!(r.original_ate.abs() < 1e-9);
    assert!(r.refuted_ates.iter().all(|a| a.abs() < 1e-9));
    assert!(r.passed);
}

#[test]
fn random_common_cause_passes_on_correct_pipeline() {
    let sim = dgp_example1(5000, RandomSeed(2)).unwrap();
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    let r = refute_random_common_cause(&p, &sim.data, &settings(50), RandomSeed(3)).unwrap();
    assert!(r.passed, "{r:?}");
    let se = r.refuted_std / (r.replications as f64).sqrt();
    assert!((r.refuted_mean - r.original_ate).abs() < 2.0 * se + 1e-6);
}

#[test]
fn random_common_cause_catches_coefficient_averaging() {
    let sim = dgp_example1(5000, RandomSeed(2)).unwrap();
    let p = backdoor_pipeline(EXAMPLE1_GRAPH, Arc::new(MeanOfCoefficients));
    let r = refute_random_common_cause(&p, &sim.data, &settings(50), RandomSeed(3)).unwrap();
    assert!(!r.passed, "{r:?}");
}

#[test]
fn full_subset_reproduces_original() {
    let sim = dgp_example1(800, RandomSeed(4)).unwrap();
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    let r = refute_data_subset(&p, &sim.data, 1.0, &settings(5), RandomSeed(0)).unwrap();
    assert!(r.refuted_ates.iter().all(|&a| a == r.original_ate));
    assert!(r.passed);
}

#[test]
fn bootstrap_interval_covers_example2_effect() {
    let sim = dgp_example2(5000, RandomSeed(5)).unwrap();
    let p = regression_pipeline(EXAMPLE2_GRAPH);
    let r = refute_bootstrap(&p, &sim.data, &settings(200), RandomSeed(6)).unwrap();
    let [lo, hi] = r.ci.unwrap();
    assert!(lo <= 9.0 && 9.0 <= hi, "[{lo}, {hi}]");
    assert!(r.passed);
}

#[test]
fn replication_count_edge_cases() {
    let sim = dgp_example1(300, RandomSeed(7)).unwrap();
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    let one = refute_placebo_treatment(
        &p,
        &sim.data,
        &settings(1),
        PlaceboMode::Bernoulli,
        RandomSeed(0),
    )
    .unwrap();
    assert_eq!(one.refuted_ates.len(), 1);
    assert_eq!(one.p_value, 1.0);
    let zero = refute_bootstrap(&p, &sim.data, &settings(0), RandomSeed(0));
    assert!(matches!(zero, Err(RefuteError::InvalidArgument(_))));
}

#[test]
fn refuters_leave_input_untouched_and_are_deterministic() {
    let sim = dgp_example1(600, RandomSeed(8)).unwrap();
    let before: Dataset = sim.data.clone();
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    for name in causal_core::refute::REFUTER_NAMES {
        let spec = RefuterSpec::from_name(name).unwrap();
        let spec = match spec {
            RefuterSpec::UnobservedCommonCause { .. } => RefuterSpec::UnobservedCommonCause {
                grid: SensitivityGrid {
                    replications: 3,
                    ..Default::default()
                },
            },
            s => s,
        };
        let a = spec
            .run(&p, &sim.data, &settings(8), RandomSeed(11))
            .unwrap();
        let b = spec
            .run(&p, &sim.data, &settings(8), RandomSeed(11))
            .unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "{name}"
        );
        assert_eq!(sim.data, before, "{name} mutated its input");
    }
}

#[test]
fn permuted_placebo_keeps_treatment_count() {
    let sim = dgp_example1(2000, RandomSeed(9)).unwrap();
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    let r = refute_placebo_treatment(
        &p,
        &sim.data,
        &settings(40),
        PlaceboMode::Permute,
        RandomSeed(1),
    )
    .unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.refuted_mean.abs() < 0.5);
}

#[test]
fn simulated_outcome_on_iv_and_frontdoor() {
    use causal_core::estimate::{FrontdoorTwoStage, IvWald};
    use causal_core::pipeline::{EstimandChoice, Pipeline};
    use causal_core::EstimandKind;

    let sim = dgp_example1(5000, RandomSeed(10)).unwrap();
    let iv = Pipeline::new(
        sim.graph.clone(),
        "t",
        "y",
        EstimandChoice::new(EstimandKind::Iv, 0),
        Arc::new(IvWald),
    )
    .unwrap();
    let r = refute_simulated_outcome(&iv, &sim.data, 3.0, &settings(30), RandomSeed(2)).unwrap();
    assert!((r.refuted_mean - 3.0).abs() < 0.3, "{r:?}");

    let sim2 = dgp_example2(1000, RandomSeed(11)).unwrap();
    let fd = Pipeline::new(
        sim2.graph.clone(),
        "t",
        "y",
        EstimandChoice::new(EstimandKind::Frontdoor, 0),
        Arc::new(FrontdoorTwoStage::default()),
    )
    .unwrap();
    assert!(matches!(
        refute_simulated_outcome(&fd, &sim2.data, 1.0, &settings(5), RandomSeed(0)),
        Err(RefuteError::Unsupported { .. })
    ));
}

#[test]
fn outcome_only_confounding_barely_moves_the_estimate() {
    let sim = dgp_example1(5000, RandomSeed(12)).unwrap();
    let p = regression_pipeline(EXAMPLE1_GRAPH);
    let s = sensitivity_unobserved_confounder(
        &p,
        &sim.data,
        &SensitivityGrid::default(),
        RandomSeed(4),
    )
    .unwrap();
    for &ky in &[1.0, 2.0, 5.0] {
        let c = s.cell(0.0, ky).unwrap();
        assert!((c.adjusted_ate - s.original_ate).abs() < 0.15, "{c:?}");
    }
    assert_eq!(s.cell(0.0, 0.0).unwrap().adjusted_ate, s.original_ate);
}
