use marc_core::region::region_general;
use marc_core::search::{self, SearchConfig};
use marc_core::{fixtures, random, MarcSizes, MarcoSplit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small(seed: u64, restarts: usize) -> SearchConfig {
    SearchConfig {
        samples: 4,
        restarts,
        max_iters: 60,
        seed,
        ..SearchConfig::default()
    }
}

#[test]
fn more_restarts_never_lose_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let marc = random::marc(&mut rng, MarcSizes::new(2, 2, 2, 2, 2));
    let mut last = f64::NEG_INFINITY;
    for restarts in 1..=4 {
        let v = search::maximize(&marc, &small(5, restarts)).unwrap().value;
        assert!(v >= last - 1e-12, "{restarts} restarts: {v} < {last}");
        last = v;
    }
}

#[test]
fn bottleneck_frontier_respects_the_relay_link() {
    let (marc, _) = fixtures::bottleneck();
    let points = search::frontier_along(&marc, &small(1, 3), &search::fan(5, true)).unwrap();
    assert!(!points.is_empty());
    for p in &points {
        assert!(p.point.r1 + p.point.r2 <= 1.0 + 1e-9, "{:?}", p.point);
        // Each reported point is achievable at its own input law.
        assert!(region_general(&marc, &p.input).unwrap().contains(p.point));
    }
}

#[test]
fn orthogonal_frontier_points_lie_in_their_regions() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let split = MarcoSplit::new(2, 1, 1, 2).unwrap();
    let marc = random::orthogonal_marc(&mut rng, split, 2, 2, 2);
    let points = search::frontier_along(&marc, &small(2, 2), &search::fan(3, false)).unwrap();
    for p in &points {
        let r = region_general(&marc, &p.input).unwrap();
        assert!(r.contains(p.point));
        assert!((r.support(p.weights).0 - p.value).abs() <= 1e-12);
    }
}
