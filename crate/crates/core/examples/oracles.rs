//! Brute-force references: exhaustive enumeration, meet in the middle and the
//! dynamic program, on the same instance.

use orbital_ssp::{instance::parse_instance, oracle};

fn main() -> orbital_ssp::Result<()> {
    let inst = parse_instance(include_str!("../data/main.txt"))?;
    for rep in [oracle::count_enum(&inst)?, oracle::count_mitm(&inst)?, oracle::count_dp(&inst)?] {
        println!("{:>5}: count {} sample {:?} ({} ms)", rep.method, rep.count, rep.sample, rep.millis);
    }

    let big = parse_instance(include_str!("../data/example1.txt"))?;
    let rep = oracle::count_mitm(&big)?;
    println!("n=40 instance: {} solutions in {} ms", rep.count, rep.millis);

    let us = oracle::unique_sum_stats(&inst)?;
    println!("unique sums U={} largest bin N_LO={}", us.u, us.n_lo);
    Ok(())
}
