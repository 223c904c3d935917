mod common;

use reservoir_topo::geostat::{
    axis_variogram, krige, sgs_realize, ConditioningPoint, KrigingMode, MarginalTransform,
    SgsConfig, VariogramModel,
};
use reservoir_topo::grid::{GridGeometry, ValueKind};

#[test]
fn kriging_ignores_point_order() {
    let model = VariogramModel::gaussian(3.0).unwrap();
    let pts = vec![
        ([0.0, 0.0, 0.0], 1.0),
        ([2.0, 1.0, 0.0], -0.5),
        ([1.0, 3.0, 1.0], 0.25),
        ([4.0, 0.5, 2.0], 2.0),
    ];
    let mut rev = pts.clone();
    rev.reverse();
    for mode in [KrigingMode::Ordinary, KrigingMode::Simple] {
        let a = krige(&model, &pts, [1.5, 1.0, 0.5], mode).unwrap();
        let b = krige(&model, &rev, [1.5, 1.0, 0.5], mode).unwrap();
        assert!((a.estimate - b.estimate).abs() < 1e-10);
        assert!((a.variance - b.variance).abs() < 1e-10);
        for (wa, wb) in a.weights.iter().zip(b.weights.iter().rev()) {
            assert!((wa - wb).abs() < 1e-10);
        }
    }
}

#[test]
fn realizations_are_seeded() {
    let a = common::sgs_field(8, 3.0, false, 42);
    let b = common::sgs_field(8, 3.0, false, 42);
    let c = common::sgs_field(8, 3.0, false, 43);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.kind(), ValueKind::Alpha);
    assert!(a.values().iter().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn conditioning_values_are_honoured() {
    let g = GridGeometry::unit([10, 10, 4]).unwrap();
    let model = VariogramModel::exponential(4.0).unwrap();
    let cond = vec![
        ConditioningPoint {
            cell: g.index([0, 0, 0]),
            value: 1.5,
        },
        ConditioningPoint {
            cell: g.index([9, 4, 3]),
            value: -0.7,
        },
    ];
    let config = SgsConfig {
        marginal_transform: MarginalTransform::None,
        ..SgsConfig::with_seed(1)
    };
    let f = sgs_realize(&g, &model, &cond, &config).unwrap();
    assert_eq!(f.kind(), ValueKind::ZValue);
    assert_eq!(f.value(cond[0].cell), 1.5);
    assert_eq!(f.value(cond[1].cell), -0.7);
}

#[test]
fn monte_carlo_mean_is_centred() {
    // Per-cell averages over 50 realizations fluctuate with sd near 0.041, so
    // individual cells are held to a 4.5 sd band and the grand mean to 0.05.
    let n = 50;
    let mut sum = vec![0.0; 6 * 6 * 6];
    for seed in 0..n {
        let f = common::sgs_field(6, 2.0, false, 1000 + seed);
        for (s, v) in sum.iter_mut().zip(f.values()) {
            *s += v;
        }
    }
    let means: Vec<f64> = sum.iter().map(|s| s / n as f64).collect();
    let grand = means.iter().sum::<f64>() / means.len() as f64;
    assert!((grand - 0.5).abs() < 0.05, "grand mean {grand}");
    let sd = (1.0 / 12.0f64 / n as f64).sqrt();
    assert!(means.iter().all(|m| (m - 0.5).abs() < 4.5 * sd));
}

#[test]
fn experimental_variogram_follows_model() {
    let range = 4.0;
    let g = GridGeometry::unit([24, 24, 24]).unwrap();
    let model = VariogramModel::exponential(range).unwrap();
    let config = SgsConfig {
        marginal_transform: MarginalTransform::None,
        ..SgsConfig::with_seed(5)
    };
    let mut acc = vec![0.0; 4];
    let seeds = 3;
    for seed in 0..seeds {
        let f = sgs_realize(
            &g,
            &model,
            &[],
            &SgsConfig {
                seed,
                ..config.clone()
            },
        )
        .unwrap();
        for axis in 0..3 {
            for (i, (_, gamma)) in axis_variogram(&f, axis, 4).into_iter().enumerate() {
                acc[i] += gamma / (3 * seeds) as f64;
            }
        }
    }
    for (i, gamma) in acc.iter().enumerate() {
        let h = (i + 1) as f64;
        let expect = model.variogram(h).unwrap();
        assert!(
            (gamma - expect).abs() <= 0.25 * expect,
            "lag {h}: {gamma} vs {expect}"
        );
    }
}
