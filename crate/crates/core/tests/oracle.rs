use num_bigint::BigUint;
use orbital_ssp::instance::parse_instance;
use orbital_ssp::oracle::{self, DiffConfig, Method};
use orbital_ssp::{Error, Family, Instance};

#[test]
fn three_oracles_agree() {
    for seed in 0..40u64 {
        let n = 4 + (seed as usize % 14);
        let inst = Family::Random { n, m: 10, seed }.generate(None).unwrap();
        let e = oracle::count_enum(&inst).unwrap();
        let m = oracle::count_mitm(&inst).unwrap();
        let d = oracle::count_dp(&inst).unwrap();
        assert_eq!(e.count, m.count);
        assert_eq!(e.count, d.count);
        for r in e.sample.iter().chain(&m.sample) {
            assert_eq!(&inst.sigma_user(r).unwrap(), inst.target());
        }
    }
}

#[test]
fn example_one_by_mitm() {
    let inst = parse_instance(include_str!("../data/example1.txt")).unwrap();
    let m = oracle::count_mitm(&inst).unwrap();
    assert_eq!(m.count, BigUint::from(47_187u32));
    assert_eq!(m.method, Method::Mitm);
}

#[test]
fn dp_widens_past_u64() {
    let inst = Instance::from_u64(&vec![1; 80], 40).unwrap();
    assert_eq!(oracle::count_dp(&inst).unwrap().count.to_string(), "107507208733336176461620");
}

#[test]
fn guards() {
    let big = Instance::from_u64(&vec![3; 30], 9).unwrap();
    assert!(matches!(oracle::count_enum(&big), Err(Error::Guard(_))));
    let wide = Instance::from_u64(&[1 << 40, 1 << 41], 1 << 40).unwrap();
    assert!(matches!(oracle::count_dp(&wide), Err(Error::Guard(_))));
}

#[test]
fn affine_count_matches_enumeration() {
    for (n, c, d) in [(10usize, 7u32, 3u32), (12, 1, 1), (9, 100, 0), (14, 13, 5)] {
        let inst = Family::Ap { n, k1: c.into(), k2: d.into() }.generate(None).unwrap();
        let total: u64 = inst.total().try_into().unwrap();
        for t in (1..=total).step_by(7) {
            let e = oracle::count_enum(&inst.with_target(t.into()).unwrap()).unwrap();
            assert_eq!(oracle::count_affine(n, &c.into(), &d.into(), &t.into()), e.count, "n={n} c={c} d={d} t={t}");
        }
    }
}

#[test]
fn unique_sums() {
    let inst = Family::Dissociated { n: 10 }.generate(None).unwrap();
    let us = oracle::unique_sum_stats(&inst).unwrap();
    assert_eq!(us.u, 1024);
    assert_eq!(us.n_lo, BigUint::from(1u32));
    let cp = Instance::from_u64(&[2; 6], 4).unwrap();
    let us = oracle::unique_sum_stats(&cp).unwrap();
    assert_eq!(us.u, 7);
    assert_eq!(us.n_lo, BigUint::from(20u32));
}

#[test]
fn differential_is_reproducible() {
    let cfg = DiffConfig {
        families: ["random", "cp", "ap", "gp", "dissociated"].map(String::from).to_vec(),
        trials: 40,
        seed: 11,
        n_max: 12,
        ..DiffConfig::default()
    };
    let a = oracle::differential_report(&cfg).unwrap();
    let b = oracle::differential_report(&cfg).unwrap();
    assert_eq!(a.len(), 40);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.instance, y.instance);
        assert!(x.agree && x.unsound == 0 && x.structure.is_none(), "trial {}", x.trial);
        assert_eq!(x.csv_row().split(',').count(), oracle::BENCH_HEADER.split(',').count());
    }
    let bad = DiffConfig { families: vec!["nope".into()], ..DiffConfig::default() };
    assert!(oracle::differential_report(&bad).is_err());
}
