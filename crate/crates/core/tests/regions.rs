use marc_core::channel::{ClassTag, MarcSizes};
use marc_core::input::KwInput;
use marc_core::region::{
    region_general, region_kw, region_madrc, region_mardrc, Constraint, RatePoint, RateRegion, RateSet,
};
use marc_core::{fixtures, random};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = Ratio<i128>;

const SUBSETS: [&[usize]; 7] = [&[0], &[1], &[2], &[1, 2], &[0, 1, 2], &[0, 1], &[0, 2]];

/// Exact vertices by rational elimination over every triple of planes.
fn rational_vertices(cs: &[(Vec<usize>, Q)]) -> Vec<[Q; 3]> {
    let zero = Q::from_integer(0);
    let one = Q::from_integer(1);
    let mut planes: Vec<([Q; 3], Q)> = (0..3)
        .map(|i| {
            let mut a = [zero; 3];
            a[i] = one;
            (a, zero)
        })
        .collect();
    for (s, b) in cs {
        let mut a = [zero; 3];
        for &i in s {
            a[i] = one;
        }
        planes.push((a, *b));
    }
    let feasible = |x: &[Q; 3]| {
        x.iter().all(|v| *v >= zero)
            && cs.iter().all(|(s, b)| s.iter().map(|&i| x[i]).fold(zero, |acc, v| acc + v) <= *b)
    };
    let mut out: Vec<[Q; 3]> = Vec::new();
    let n = planes.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut m: Vec<[Q; 4]> = [planes[i], planes[j], planes[k]]
                    .iter()
                    .map(|(a, b)| [a[0], a[1], a[2], *b])
                    .collect();
                let mut singular = false;
                for col in 0..3 {
                    let Some(p) = (col..3).find(|&r| m[r][col] != zero) else {
                        singular = true;
                        break;
                    };
                    m.swap(col, p);
                    let piv = m[col][col];
                    for c in 0..4 {
                        m[col][c] = m[col][c] / piv;
                    }
                    for r in 0..3 {
                        if r != col && m[r][col] != zero {
                            let f = m[r][col];
                            for c in 0..4 {
                                let v = m[col][c];
                                m[r][c] = m[r][c] - f * v;
                            }
                        }
                    }
                }
                if singular {
                    continue;
                }
                let x = [m[0][3], m[1][3], m[2][3]];
                if feasible(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out
}

fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn vertices_match_rational_oracle(
        picks in prop::collection::vec((0usize..7, 0i128..=16), 1..=6)
    ) {
        let cs: Vec<(Vec<usize>, Q)> = picks
            .iter()
            .map(|&(s, b)| (SUBSETS[s].to_vec(), Q::new(b, 8)))
            .collect();
        let region = RateRegion::new(
            picks.iter().map(|&(s, b)| Constraint { subset: RateSet::new(SUBSETS[s]).unwrap(), bound: b as f64 / 8.0 }).collect(),
        ).unwrap();
        let want = rational_vertices(&cs);
        let got = region.vertices();
        prop_assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            let g = g.to_array();
            for d in 0..3 {
                prop_assert!((g[d] - to_f64(w[d])).abs() <= 1e-12);
            }
        }
        for v in &got {
            prop_assert!(region.contains(*v));
        }
        prop_assert!(region.includes(&region));
        let w = [0.0, 1.0, 1.0];
        if region.is_bounded() {
            let oracle = want.iter().map(|x| to_f64(x[1] + x[2])).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((region.support(w).0 - oracle).abs() <= 1e-12);
        }
    }

    #[test]
    fn kw_and_degraded_formulas_coincide(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let marc = random::degraded_marc(&mut rng, MarcSizes::new(2, 2, 2, 2, 2));
        let kw: KwInput = random::kw_input(&mut rng, 2, 2, 2);
        let a = region_kw(&marc, &kw).unwrap();
        let b = region_madrc(&marc, &kw.law()).unwrap();
        prop_assert_eq!(a.constraints().len(), b.constraints().len());
        for (x, y) in a.constraints().iter().zip(b.constraints()) {
            prop_assert_eq!(x.subset, y.subset);
            prop_assert!((x.bound - y.bound).abs() <= 1e-12);
        }
    }

    #[test]
    fn reversely_degraded_specialization_matches(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let marc = random::reversely_degraded_marc(&mut rng, MarcSizes::new(2, 2, 2, 2, 2));
        let input = random::relay_conditioned_input(&mut rng, 2, 2, 2);
        let s = marc_core::region::specialize_general(&marc, &input, &ClassTag::Mardrc).unwrap();
        prop_assert!(s.max_diff <= 1e-9, "{}", s.max_diff);
        let direct = region_mardrc(&marc, &input.law()).unwrap();
        prop_assert_eq!(direct.constraints(), s.specialized.constraints());
    }

    #[test]
    fn general_bounds_are_nonnegative_and_origin_feasible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let marc = random::marc(&mut rng, MarcSizes::new(2, 2, 2, 2, 2));
        let sizes = marc_core::input::InputSizes {
            aux: marc_core::input::AuxSizes { u0: 2, u1: 2, u2: 2 },
            x1: 2,
            x2: 2,
            xr: 2,
        };
        let input = random::factorized_input(&mut rng, sizes);
        let r = region_general(&marc, &input).unwrap();
        prop_assert!(r.constraints().iter().all(|c| c.bound >= 0.0));
        prop_assert!(r.contains(RatePoint::default()));
    }
}

#[test]
fn bottleneck_regions_coincide() {
    let (marc, rc) = fixtures::bottleneck();
    let general = region_general(&marc, &rc.inputs_as_auxiliaries()).unwrap();
    let madrc = region_madrc(&marc, &rc.law()).unwrap();
    for s in [RateSet::R1, RateSet::R2, RateSet::R12] {
        assert!((general.bound(s).unwrap() - 1.0).abs() < 1e-12);
        assert!((madrc.bound(s).unwrap() - 1.0).abs() < 1e-12);
    }
    assert!(general.includes(&madrc));
    assert_eq!(general.support([0.0, 1.0, 1.0]).0, 1.0);
}

#[test]
fn constant_relay_output_collapses_the_general_region() {
    // With Y_R constant and X_R singleton, every relay-side term vanishes,
    // so the singleton bounds are zero whatever the destination sees.
    let (mac_marc, mac_in) = fixtures::noiseless_mac();
    let s = mac_marc.sizes();
    let collapsed = marc_core::DiscreteMarc::from_fn(MarcSizes::new(s.x1, s.x2, 1, 1, s.yd), |x1, x2, _, _, yd| {
        mac_marc.dest_prob(x1, x2, 0, yd)
    })
    .unwrap();
    let r = region_general(&collapsed, &mac_in.to_factorized()).unwrap();
    assert_eq!(r.bound(RateSet::R1), Some(0.0));
    let genie = region_general(&mac_marc, &mac_in.to_factorized()).unwrap();
    assert!((genie.bound(RateSet::R1).unwrap() - 1.0).abs() < 1e-12);
}
