use num_bigint::BigUint;
use orbital_ssp::ihm::{self, SolveOptions};
use orbital_ssp::instance::parse_instance;
use orbital_ssp::orbital::DestinationPolicy;
use orbital_ssp::{oracle, Error, Family, Instance};

const MAIN: &str = include_str!("../data/main.txt");

fn opts() -> SolveOptions {
    SolveOptions::default()
}

#[test]
fn main_example() {
    let inst = parse_instance(MAIN).unwrap();
    let sol = ihm::solve(&inst, &opts()).unwrap();
    assert_eq!(sol.count, BigUint::from(1u32));
    assert_eq!(sol.indices, [BigUint::from(365u32)]);
    assert_eq!(sol.backend, "i128");
    assert_eq!(sol.metrics.rows[0].iter, 0);
    assert!(sol.metrics.settled_at().is_some());
}

#[test]
fn doc_instance_and_edge_targets() {
    let inst = Instance::from_u64(&[1, 2, 3, 4], 5).unwrap();
    let sol = ihm::solve(&inst, &opts()).unwrap();
    let mut idx = sol.indices.clone();
    idx.sort();
    assert_eq!(idx, [BigUint::from(6u32), BigUint::from(9u32)]);

    let all = inst.with_target(10u32.into()).unwrap();
    let sol = ihm::solve(&all, &opts()).unwrap();
    assert_eq!(sol.indices, [BigUint::from(15u32)]);

    let none = Instance::from_u64(&[3, 5, 6, 7], 4).unwrap();
    let sol = ihm::solve(&none, &opts()).unwrap();
    assert_eq!(sol.count, BigUint::default());
    assert!(sol.indices.is_empty());

    assert!(matches!(inst.with_target(0u32.into()).and_then(|i| ihm::solve(&i, &opts())), Err(Error::OutOfRange(_))));
    assert!(inst.with_target(11u32.into()).and_then(|i| ihm::solve(&i, &opts())).is_err());
}

#[test]
fn constant_sequence_counts_binomials() {
    for n in 1..=16usize {
        for k in 1..=n as u64 {
            let inst = Instance::from_u64(&vec![1; n], k).unwrap();
            let sol = ihm::solve(&inst, &SolveOptions { count_only: true, ..opts() }).unwrap();
            assert_eq!(sol.count, orbital_ssp::hgraph::binomial(n as u64, k), "C({n},{k})");
        }
    }
}

#[test]
fn indices_cap_truncates() {
    let inst = Instance::from_u64(&[1; 10], 5).unwrap();
    let sol = ihm::solve(&inst, &SolveOptions { indices_cap: 7, ..opts() }).unwrap();
    assert_eq!(sol.count, BigUint::from(252u32));
    assert_eq!(sol.indices.len(), 7);
    assert!(sol.truncated);
}

#[test]
fn bigint_backend_agrees_with_mitm() {
    let a: Vec<BigUint> = (0..12u32).map(|i| (BigUint::from(1u32) << 110) + BigUint::from(1_000_003u64 * (i as u64 * i as u64 + 7))).collect();
    let t: BigUint = a.iter().step_by(2).sum();
    let inst = Instance::new(a, t, None).unwrap();
    assert!(!inst.fits_i128());
    let sol = ihm::solve(&inst, &opts()).unwrap();
    assert_eq!(sol.backend, "bigint");
    let m = oracle::count_mitm(&inst).unwrap();
    assert_eq!(sol.count, m.count);
    for r in &sol.indices {
        assert_eq!(&inst.sigma_user(r).unwrap(), inst.target());
    }
}

#[test]
fn manual_loop_matches_driver() {
    let inst = Family::Random { n: 14, m: 12, seed: 4 }.generate(None).unwrap();
    let mut g = ihm::reachable_graph::<i128>(&inst, DestinationPolicy::Canonical).unwrap();
    let rounds = ihm::rounds_needed(&g);
    ihm::filter(&mut g, 14);
    for _ in 0..rounds {
        ihm::refine(&mut g);
        ihm::filter(&mut g, 14);
    }
    if !g.nodes.is_empty() {
        ihm::check_final_graph(&g).unwrap();
    }
    let sol = ihm::solve(&inst, &opts()).unwrap();
    assert_eq!(sol.final_nodes, g.nodes.len());
    assert_eq!(sol.count, oracle::count_enum(&inst).unwrap().count);
}

#[test]
fn all_true_policy_over_counts() {
    let inst = parse_instance(MAIN).unwrap();
    let canon = ihm::solve(&inst, &opts()).unwrap();
    let loose = ihm::solve(&inst, &SolveOptions { policy: DestinationPolicy::AllTrue, ..opts() }).unwrap();
    assert!(loose.count >= canon.count);
}

#[test]
fn metrics_csv_shape() {
    let inst = parse_instance(MAIN).unwrap();
    let sol = ihm::solve(&inst, &opts()).unwrap();
    let csv = sol.metrics.to_csv();
    assert!(csv.starts_with("iter,nodes,arcs,eta_nodes,eta_arcs\n"));
    assert_eq!(csv.lines().count(), sol.metrics.rows.len() + 1);
    assert!(sol.metrics.eta_peak > 0.0);
}

#[test]
fn final_graph_dump() {
    let inst = parse_instance(MAIN).unwrap();
    let sol = ihm::solve_dump(&inst, &opts(), true).unwrap();
    let dump = sol.dump.unwrap();
    assert!(!dump.is_empty());
    for line in dump {
        serde_json::from_str::<serde_json::Value>(&line).unwrap();
    }
}

#[test]
fn arithmetic_progression_against_affine_count() {
    let c: BigUint = "19329079171151820605874590".parse().unwrap();
    let d: BigUint = "5835760507709645161289732".parse().unwrap();
    for n in [12usize, 25, 40] {
        let inst = Family::Ap { n, k1: c.clone(), k2: d.clone() }.generate(None).unwrap();
        let sol = ihm::solve(&inst, &SolveOptions { count_only: true, ..opts() }).unwrap();
        assert_eq!(sol.count, oracle::count_affine(n, &c, &d, inst.target()), "n = {n}");
    }
}
