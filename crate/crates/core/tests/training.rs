mod common;

use common::{
    direct_objective, integer_features, pair_sum, rng, utilities, weights, WRegime, YRegime,
};
use rand::Rng;
use ranksvm_core::bmrm::{objective, ModelSolution};
use ranksvm_core::data::{SyntheticConfig, SyntheticKind};
use ranksvm_core::{train, Backend, Bmrm, CuttingPlane, CuttingPlaneModel, TrainConfig};

fn cfg(lambda: f64, backend: Backend) -> TrainConfig {
    TrainConfig {
        lambda,
        backend,
        ..Default::default()
    }
}

#[test]
fn planes_lower_bound_the_risk() {
    let mut r = rng(11);
    let dense = integer_features(&mut r, 40, 4, 0.7);
    let y = utilities(&mut r, 40, YRegime::Tied);
    let data = common::dataset(&dense, &y);
    let risk = data.risk().unwrap();
    let mut b = Bmrm::new(&risk, cfg(0.01, Backend::Tree), None).unwrap();
    for _ in 0..10 {
        b.step().unwrap();
    }
    for _ in 0..20 {
        let w: Vec<f64> = (0..4).map(|_| r.random_range(-3.0..3.0)).collect();
        let truth = pair_sum(&dense, &y, &w).loss;
        for plane in b.model().planes() {
            assert!(plane.value(&w) <= truth + 1e-12, "plane above the risk");
        }
    }
}

#[test]
fn dual_stays_on_the_simplex() {
    let data = SyntheticConfig::new(SyntheticKind::DenseRegression, 80, 6, 1.0, 3)
        .with_noise(0.3)
        .generate()
        .unwrap();
    let risk = data.risk().unwrap();
    let mut b = Bmrm::new(&risk, cfg(1e-3, Backend::Tree), None).unwrap();
    for _ in 0..30 {
        b.step().unwrap();
        let alpha = b.model().alpha();
        assert!(alpha.iter().all(|a| *a >= 0.0));
        assert!((alpha.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn model_minimum_matches_its_primal() {
    let mut model = CuttingPlaneModel::new();
    let mut r = rng(5);
    for _ in 0..25 {
        let a: Vec<f64> = (0..3).map(|_| r.random_range(-2.0..2.0)).collect();
        model
            .push(CuttingPlane {
                a,
                b: r.random_range(0.0..1.0),
            })
            .unwrap();
    }
    let lambda = 0.05;
    let ModelSolution { w, value, .. } = model.solve(lambda).unwrap();
    let primal = model.lower_bound(&w) + lambda * common::dot(&w, &w);
    assert!((primal - value).abs() <= 1e-9 * primal.abs().max(1.0));
    // No probe point beats the solution.
    for _ in 0..200 {
        let v: Vec<f64> = w.iter().map(|x| x + r.random_range(-0.1..0.1)).collect();
        assert!(model.lower_bound(&v) + lambda * common::dot(&v, &v) >= primal - 1e-12);
    }
}

#[test]
fn backends_produce_identical_iterates() {
    let mut r = rng(21);
    for _ in 0..5 {
        let dense = integer_features(&mut r, 60, 5, 0.6);
        let y = utilities(&mut r, 60, YRegime::Distinct);
        let data = common::dataset(&dense, &y);
        let tree = train(&data, cfg(0.01, Backend::Tree), None).unwrap();
        let brute = train(&data, cfg(0.01, Backend::Brute), None).unwrap();
        assert_eq!(tree.iterations(), brute.iterations());
        // Losses are summed in different orders, so offsets may differ in
        // the last bit.
        let scale = tree.w.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for (a, b) in tree.w.iter().zip(&brute.w) {
            assert!((a - b).abs() <= 1e-9 * scale);
        }
    }
}

#[test]
fn converges_to_the_requested_gap() {
    let mut r = rng(8);
    let dense = integer_features(&mut r, 50, 3, 0.8);
    let y = utilities(&mut r, 50, YRegime::TwoLevel);
    let data = common::dataset(&dense, &y);
    let model = train(&data, cfg(0.1, Backend::Tree), None).unwrap();
    assert!(model.converged);
    let gap = model.final_gap().unwrap();
    assert!((0.0..1e-3).contains(&gap) || gap.abs() < 1e-12);
    let j = direct_objective(&dense, &y, &model.w, 0.1);
    let risk = data.risk().unwrap();
    let reported = objective(&risk, &model.w, 0.1, Backend::Brute).unwrap();
    assert!((j - reported).abs() <= 1e-12 * j.max(1.0));
    assert!((model.objective().unwrap() - j).abs() <= 1e-12 * j.max(1.0));
}

#[test]
fn warm_start_is_respected() {
    let mut r = rng(2);
    let dense = integer_features(&mut r, 30, 3, 0.9);
    let y = utilities(&mut r, 30, YRegime::Distinct);
    let data = common::dataset(&dense, &y);
    let w0 = weights(&mut r, 3, WRegime::Random);
    let model = train(&data, cfg(0.1, Backend::Tree), Some(&w0)).unwrap();
    assert!(model.converged);
    assert!(train(&data, cfg(0.1, Backend::Tree), Some(&[1.0])).is_err());
}

#[test]
fn one_dimensional_optimum_matches_grid() {
    let dense = vec![vec![0.0], vec![1.0], vec![0.5], vec![2.0], vec![-1.0]];
    let y = vec![0.0, 3.0, 1.0, 2.0, 4.0];
    let data = common::dataset(&dense, &y);
    let lambda = 0.05;
    let model = train(
        &data,
        TrainConfig {
            epsilon: 1e-8,
            ..cfg(lambda, Backend::Tree)
        },
        None,
    )
    .unwrap();
    let grid_min = (-100_000..=100_000)
        .map(|k| direct_objective(&dense, &y, &[k as f64 * 1e-4], lambda))
        .fold(f64::INFINITY, f64::min);
    let j = direct_objective(&dense, &y, &model.w, lambda);
    assert!((j - grid_min).abs() <= 1e-3, "J = {j}, grid = {grid_min}");
}
