use orbital_ssp::analysis::{self, GrowthSample};
use orbital_ssp::instance::parse_instance;
use orbital_ssp::{ihm, Family, Instance};

const MAIN: &str = include_str!("../data/main.txt");

#[test]
fn mu0_closed_form() {
    for n in 3..=200u64 {
        assert_eq!(analysis::mu0(n), analysis::mu0_by_sum(n), "n = {n}");
    }
    assert_eq!(analysis::mu0(9), 287.into());
    assert_eq!(analysis::mu_bound(9, 2), analysis::mu0(7));
}

#[test]
fn main_example_config_graph() {
    let inst = parse_instance(MAIN).unwrap();
    let cg = analysis::build_config_graph(&inst, 1_000_000).unwrap();
    assert!(!cg.truncated);
    // Frozen from this implementation.
    assert_eq!(cg.gamma, [1, 3, 11, 14, 20, 13, 7, 4]);
    assert_eq!(cg.gamma, cg.levels.iter().map(|l| l.len() as u64).collect::<Vec<_>>());
    // One solution: a single zero path, with one point per level.
    assert_eq!(cg.zero.len(), 1);
    assert!(analysis::zero_profile_ok(&cg));
    let au = analysis::product_inequality_audit(&cg);
    assert!(au.gamma0_ok && au.growth_violations.is_empty() && au.max_gamma_ok);
    assert!(au.rows.iter().all(|r| r.holds));
    assert!(au.continuing_sandwich_violations.is_empty());
    let csv = au.to_csv();
    assert!(csv.starts_with("r,gamma,mu_r,Gamma_r,bound\n"));
}

#[test]
fn growth_law_on_small_graphs() {
    for n in 3..=9usize {
        for seed in 0..4 {
            let inst = Family::Random { n, m: 10, seed }.generate(None).unwrap();
            let cg = analysis::build_config_graph(&inst, 1_000_000).unwrap();
            for r in 0..cg.gamma.len().saturating_sub(1) {
                assert!(cg.gamma[r + 1] <= cg.gamma[r] * cg.mu[r]);
                assert!(cg.gamma[r + 1] <= cg.arcs[r]);
            }
            assert_eq!(cg.gamma[0], 1);
        }
    }
}

#[test]
fn constant_sequences_have_one_point_per_level() {
    for n in 2..=10usize {
        let cg = analysis::build_config_graph(&Instance::from_u64(&vec![9; n], 9 * (n as u64 / 2)).unwrap(), 100_000)
            .unwrap();
        assert!(cg.gamma.iter().all(|&g| g == 1), "n = {n}: {:?}", cg.gamma);
    }
}

#[test]
fn state_cap_truncates() {
    let inst = Family::Random { n: 12, m: 16, seed: 1 }.generate(None).unwrap();
    let cg = analysis::build_config_graph(&inst, 50).unwrap();
    assert!(cg.truncated);
}

#[test]
fn growth_table() {
    assert_eq!(analysis::log_curve(7.0, 40), 38);
    assert_eq!(analysis::log_curve(3.0, 40), 16);
    let runs = [
        GrowthSample { n: 10, k_peak: 3, eta_peak: 0.5 },
        GrowthSample { n: 10, k_peak: 5, eta_peak: 0.25 },
        GrowthSample { n: 12, k_peak: 4, eta_peak: 1.5 },
    ];
    let rows = analysis::growth_summary(&runs).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0].kpeak_max, rows[0].eta_peak_max, rows[0].trials), (5, 0.5, 2));
    let csv = analysis::growth_csv(&rows);
    assert_eq!(csv.lines().next(), Some("n,kpeak_max,eta_peak_max"));
    assert!(analysis::growth_summary(&[]).is_err());
}

#[test]
fn vm_bound() {
    let inst = parse_instance(MAIN).unwrap();
    let sol = ihm::solve(&inst, &Default::default()).unwrap();
    let b = analysis::vm_bound_check(&inst, &sol).unwrap();
    assert_eq!(b.unique_sums, 512);
    assert!(b.holds);
    let s = GrowthSample::from_metrics(9, &sol.metrics);
    assert_eq!(s.k_peak, sol.metrics.k_peak);
}
