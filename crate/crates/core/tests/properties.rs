use num_bigint::BigUint;
use orbital_ssp::ihm::{self, SolveOptions};
use orbital_ssp::ndp::{self, CurveKind};
use orbital_ssp::{oracle, Instance};
use proptest::prelude::*;

fn small_instance() -> impl Strategy<Value = Instance> {
    (prop::collection::vec(1u64..2000, 1..13), any::<u64>()).prop_map(|(a, pick)| {
        let total: u64 = a.iter().sum();
        Instance::from_u64(&a, 1 + pick % total).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma_complement(a in prop::collection::vec(1u64..1_000_000, 1..30), r in any::<u64>()) {
        let inst = Instance::from_u64(&a, 1).unwrap();
        let n = a.len();
        let full = (BigUint::from(1u32) << n) - 1u32;
        let r = BigUint::from(r) % (&full + 1u32);
        let s = inst.sigma(&r).unwrap() + inst.sigma(&(&full - &r)).unwrap();
        prop_assert_eq!(&s, inst.total());
    }

    #[test]
    fn pipeline_counts_exactly(inst in small_instance()) {
        let sol = ihm::solve(&inst, &SolveOptions::default()).unwrap();
        let e = oracle::count_enum(&inst).unwrap();
        prop_assert_eq!(&sol.count, &e.count);
        prop_assert_eq!(sol.indices.len() as u64, u64::try_from(&sol.count).unwrap());
        let mut seen = sol.indices.clone();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), sol.indices.len());
        for r in &sol.indices {
            prop_assert_eq!(&inst.sigma_user(r).unwrap(), inst.target());
        }
    }

    #[test]
    fn curves_stay_inside_their_block(j in 1u32..40, k in any::<u64>()) {
        let nn = ndp::tri(j as u64);
        let k = k % (nn + 1);
        let p = ndp::phi(j, k).unwrap();
        prop_assert!(p < BigUint::from(1u32) << j);
        if k < nn {
            prop_assert!(ndp::phi(j, k + 1).unwrap() > p);
            prop_assert!(ndp::varphi(j, k + 1).unwrap() > ndp::varphi(j, k).unwrap());
        }
    }

    #[test]
    fn tau_paths_are_non_decreasing(ks in prop::collection::btree_set(1u32..12, 0..6), q in any::<bool>()) {
        let mut ks: Vec<u32> = ks.into_iter().collect();
        ks.reverse();
        let start = if q { CurveKind::Q } else { CurveKind::P };
        if let Ok(ch) = ndp::apply_path(start, 11, &ks) {
            let mut links = ch.expand();
            prop_assert_eq!(links.len(), 66);
            links.sort();
            let mut want: Vec<u32> = (1..=11).flat_map(|b| 1..=b).collect();
            want.sort();
            prop_assert_eq!(links, want);
            let v = ch.vertex_indices();
            prop_assert!(v.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(*v.last().unwrap(), (1u64 << 11) - 1);
        }
    }
}
