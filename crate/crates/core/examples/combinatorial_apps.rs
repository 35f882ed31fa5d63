//! Counting problems phrased as subset sums: binomial coefficients,
//! partitions into distinct parts, and sums of distinct cubes.

use orbital_ssp::{cli, ihm, oracle};

fn main() -> orbital_ssp::Result<()> {
    use cli::AppsCmd::*;
    for app in [Binomial { n: 80, k: 40 }, Partitions { n: 915, k: 60 }, Cubes { n: 12345, k: 50 }] {
        let inst = cli::app_instance(app)?;
        let sol = ihm::solve(&inst, &ihm::SolveOptions { indices_cap: 100, ..Default::default() })?;
        let dp = oracle::count_dp(&inst)?;
        println!("{app:?}: pipeline {} dp {}", sol.count, dp.count);
        if let Cubes { .. } = app {
            for r in &sol.indices {
                let parts: Vec<String> = cli::index_parts(r, inst.n()).iter().map(|i| format!("{i}^3")).collect();
                println!("  12345 = {}", parts.join(" + "));
            }
        }
    }
    Ok(())
}
