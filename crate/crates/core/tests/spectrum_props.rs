use proptest::prelude::*;

use codeball::code::gv_distance;
use codeball::spectrum::{
    barrier_weight, fidelity, ideal_weight_distribution, model_step_weight, p_down, region_map, total_variation,
    BarrierParams, RegionClass, WeightHistogram,
};

fn histogram(raw: &[f64]) -> WeightHistogram {
    let total: f64 = raw.iter().sum();
    WeightHistogram::from_probabilities(raw.iter().map(|x| x / total).collect()).unwrap()
}

proptest! {
    #[test]
    fn p_down_is_monotone_in_weight((n, f) in (1usize..=200).prop_flat_map(|n| (Just(n), 1..=n))) {
        let params = BarrierParams::new(n, f, 1e-6).unwrap();
        let mut prev = 0.0;
        for h in 0..=n {
            let p = p_down(&params, h).unwrap();
            prop_assert!(p >= prev - 1e-12 && p <= 1.0 + 1e-12);
            prev = p;
        }
    }

    #[test]
    fn barrier_is_the_first_weight_above_threshold((n, f) in (2usize..=200).prop_flat_map(|n| (Just(n), 1..=n)), e in 2i32..=8) {
        let eps = 10f64.powi(-e);
        let params = BarrierParams::new(n, f, eps).unwrap();
        let h = barrier_weight(&params).unwrap();
        prop_assert!(p_down(&params, h).unwrap() >= eps);
        if h > 0 {
            prop_assert!(p_down(&params, h - 1).unwrap() < eps);
        }
    }

    #[test]
    fn fidelity_and_distance_are_symmetric(raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..40)) {
        let (a, b): (Vec<f64>, Vec<f64>) = raw.into_iter().map(|(x, y)| (x + 1e-3, y + 1e-3)).unzip();
        let (p, q) = (histogram(&a), histogram(&b));
        let f = fidelity(&p, &q).unwrap();
        prop_assert!((f - fidelity(&q, &p).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&f));
        let tv = total_variation(&p, &q).unwrap();
        prop_assert!((tv - total_variation(&q, &p).unwrap()).abs() < 1e-12);
        // Fuchs–van de Graaf: 1 - F ≤ TV ≤ √(1 - F²).
        prop_assert!(1.0 - f <= tv + 1e-12);
        prop_assert!(tv <= (1.0 - f * f).max(0.0).sqrt() + 1e-12);
    }
}

fn grid() -> (Vec<usize>, Vec<usize>) {
    ((10..1000).step_by(10).collect(), (0..=500).step_by(10).collect())
}

/// Largest convergent `b` per `k`, in grid cells.
fn boundary(eps: f64) -> Vec<Option<usize>> {
    let (ks, bs) = grid();
    let map = region_map(1000, &ks, &bs, eps).unwrap();
    ks.iter()
        .map(|&k| {
            map.iter()
                .filter(|(kk, _, c)| *kk == k && *c == RegionClass::Convergent)
                .map(|(_, b, _)| b / 10)
                .max()
        })
        .collect()
}

fn boundary_shifts(skip: Option<std::ops::RangeInclusive<usize>>) -> Vec<(usize, f64, usize)> {
    let base = boundary(1e-6);
    let mut out = Vec::new();
    for eps in [1e-5, 1e-7] {
        for (k, (a, c)) in grid().0.iter().zip(base.iter().zip(boundary(eps))) {
            if !skip.as_ref().is_some_and(|r| r.contains(k)) {
                out.push((*k, eps, a.unwrap_or(0).abs_diff(c.unwrap_or(0))));
            }
        }
    }
    out
}

#[test]
fn region_boundary_is_insensitive_to_epsilon_outside_small_k() {
    for (k, eps, moved) in boundary_shifts(Some(50..=140)) {
        assert!(moved < 2, "k = {k}, eps = {eps}: moved {moved} cells");
    }
}

#[test]
#[ignore = "for k in 50..=140 the boundary moves 2 to 3 cells per decade of epsilon; see README"]
fn region_boundary_is_insensitive_to_epsilon_everywhere() {
    for (k, eps, moved) in boundary_shifts(None) {
        assert!(moved < 2, "k = {k}, eps = {eps}: moved {moved} cells");
    }
}

#[test]
fn sweep_points_keep_their_class_across_epsilon() {
    let ks: Vec<usize> = (1..=7).map(|i| 50 * i).collect();
    let bs: Vec<usize> = (1..=7).map(|i| 10 * i).collect();
    let classes = |eps| -> Vec<RegionClass> {
        let map = region_map(1000, &ks, &bs, eps).unwrap();
        ks.iter()
            .zip(&bs)
            .map(|(&k, &b)| map.iter().find(|(kk, bb, _)| *kk == k && *bb == b).unwrap().2)
            .collect()
    };
    let base = classes(1e-6);
    assert_eq!(&base[..4], &[RegionClass::Convergent; 4]);
    assert_eq!(&base[4..], &[RegionClass::CutOff; 3]);
    assert_eq!(classes(1e-5), base);
    assert_eq!(classes(1e-7), base);
}

#[test]
fn overlapping_balls_exactly_where_2b_exceeds_gv() {
    let (ks, bs) = grid();
    for (k, b, class) in region_map(1000, &ks, &bs, 1e-6).unwrap() {
        assert_eq!(class == RegionClass::OverlappingBalls, 2 * b > gv_distance(1000, k), "({k}, {b})");
    }
}

#[test]
fn convergent_targets_carry_little_mass_below_the_barrier() {
    for (k, b) in [(50, 10), (100, 20), (150, 30), (200, 40)] {
        let ideal = ideal_weight_distribution(1000, k, b).unwrap();
        let barrier = barrier_weight(&BarrierParams::new(1000, model_step_weight(k), 1e-6).unwrap()).unwrap();
        let below: f64 = (0..barrier).map(|h| ideal.get(h)).sum();
        assert!(below < 1e-3, "(k, b) = ({k}, {b}): {below}");
    }
}
