use marc_core::prob::{AlphabetSpec, ProbTensor};
use marc_core::random;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;
const NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];

/// Random joint with some entries forced to zero.
fn sparse_joint(sizes: &[usize], seed: u64) -> ProbTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axes: Vec<(&str, usize)> = NAMES.iter().copied().zip(sizes.iter().copied()).collect();
    let spec = AlphabetSpec::new(&axes).unwrap();
    let mut v: Vec<f64> = (0..spec.total())
        .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() })
        .collect();
    if v.iter().all(|&x| x == 0.0) {
        v[0] = 1.0;
    }
    let z: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= z);
    ProbTensor::joint(spec, v).unwrap()
}

/// `I(A;B|C)` summed term by term over the full joint, with no entropy
/// identities.
fn direct_cmi(p: &ProbTensor, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
    let sizes = p.sizes().to_vec();
    let total: usize = sizes.iter().product();
    let unravel = |mut f: usize| {
        let mut idx = vec![0; sizes.len()];
        for d in (0..sizes.len()).rev() {
            idx[d] = f % sizes[d];
            f /= sizes[d];
        }
        idx
    };
    let key = |idx: &[usize], vars: &[usize]| vars.iter().map(|&d| idx[d]).collect::<Vec<_>>();
    let marg = |vars: &[usize], target: &[usize]| -> f64 {
        (0..total)
            .map(unravel)
            .filter(|idx| key(idx, vars) == target)
            .map(|idx| p.get(&idx))
            .sum()
    };
    let ac: Vec<usize> = a.iter().chain(c).copied().collect();
    let bc: Vec<usize> = b.iter().chain(c).copied().collect();
    let abc: Vec<usize> = a.iter().chain(b).chain(c).copied().collect();
    let mut seen = std::collections::HashSet::new();
    let mut acc = 0.0;
    for f in 0..total {
        let idx = unravel(f);
        let k = key(&idx, &abc);
        if !seen.insert(k.clone()) {
            continue;
        }
        let pabc = marg(&abc, &k);
        if pabc == 0.0 {
            continue;
        }
        let pc = marg(c, &key(&idx, c));
        let pac = marg(&ac, &key(&idx, &ac));
        let pbc = marg(&bc, &key(&idx, &bc));
        acc += pabc * (pabc * pc / (pac * pbc)).log2();
    }
    acc
}

fn names(ix: &[usize]) -> Vec<&'static str> {
    ix.iter().map(|&i| NAMES[i]).collect()
}

#[test]
fn entropy_route_matches_direct_summation() {
    let cases: [(&[usize], &[usize], &[usize]); 4] = [
        (&[0], &[1], &[]),
        (&[0], &[1], &[2]),
        (&[0, 3], &[1], &[2]),
        (&[1], &[2, 0], &[3]),
    ];
    for seed in 0..20 {
        let p = sparse_joint(&[2, 3, 2, 3], seed);
        let m = p.measures().unwrap();
        for (a, b, c) in cases {
            let got = m.cmi(&names(a), &names(b), &names(c)).unwrap();
            let want = direct_cmi(&p, a, b, c).max(0.0);
            assert!((got - want).abs() < 1e-10, "seed {seed}: {got} vs {want}");
        }
    }
}

#[test]
fn hand_values() {
    // X uniform on 4 symbols, Y = X mod 2.
    let spec = AlphabetSpec::new(&[("X", 4), ("Y", 2)]).unwrap();
    let p = ProbTensor::joint_from_fn(spec, |i| if i[1] == i[0] % 2 { 0.25 } else { 0.0 }).unwrap();
    assert!((p.entropy(&["X"]).unwrap() - 2.0).abs() < TOL);
    assert!((p.mutual_information(&["X"], &["Y"]).unwrap() - 1.0).abs() < TOL);
    assert!((p.conditional_entropy(&["X"], &["Y"]).unwrap() - 1.0).abs() < TOL);
}

fn sizes_and_seed() -> impl Strategy<Value = (Vec<usize>, u64)> {
    (prop::collection::vec(1usize..=4, 3..=5), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chain_rules((sizes, seed) in sizes_and_seed()) {
        let p = sparse_joint(&sizes, seed);
        let m = p.measures().unwrap();
        let hab = m.cond_entropy(&["A", "B"], &[]).unwrap();
        let ha = m.cond_entropy(&["A"], &[]).unwrap();
        let hb_a = m.cond_entropy(&["B"], &["A"]).unwrap();
        prop_assert!((hab - ha - hb_a).abs() <= TOL);
        let i_a_bc = m.cmi(&["A"], &["B", "C"], &[]).unwrap();
        let i_ab = m.cmi(&["A"], &["B"], &[]).unwrap();
        let i_ac_b = m.cmi(&["A"], &["C"], &["B"]).unwrap();
        prop_assert!((i_a_bc - i_ab - i_ac_b).abs() <= TOL);
    }

    #[test]
    fn nonnegativity_and_conditioning((sizes, seed) in sizes_and_seed()) {
        let p = sparse_joint(&sizes, seed);
        let m = p.measures().unwrap();
        prop_assert!(m.cmi(&["A"], &["B"], &["C"]).unwrap() >= 0.0);
        prop_assert!(m.cond_entropy(&["A"], &["B"]).unwrap() >= 0.0);
        let h = m.cond_entropy(&["A"], &[]).unwrap();
        let hc = m.cond_entropy(&["A"], &["B", "C"]).unwrap();
        prop_assert!(hc <= h + TOL);
    }

    #[test]
    fn marginals_are_consistent((sizes, seed) in sizes_and_seed()) {
        let p = sparse_joint(&sizes, seed);
        let ab = p.marginalize(&["A", "B"]).unwrap();
        let a_direct = p.marginalize(&["A"]).unwrap();
        let a_nested = ab.marginalize(&["A"]).unwrap();
        for (x, y) in a_direct.values().iter().zip(a_nested.values()) {
            prop_assert!((x - y).abs() <= TOL);
        }
        prop_assert!(ab.normalization_residual() <= 1e-12);
    }

    #[test]
    fn dense_random_joints_keep_mi_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::joint(&mut rng, &[("A", 3), ("B", 2), ("C", 4)]);
        let m = p.measures().unwrap();
        let ab = m.cmi(&["A"], &["B"], &["C"]).unwrap();
        let ba = m.cmi(&["B"], &["A"], &["C"]).unwrap();
        prop_assert!((ab - ba).abs() <= TOL);
    }
}
