//! A small differential run of the pipeline against the oracles over several
//! instance families, printed as CSV.

use orbital_ssp::oracle::{self, DiffConfig, BENCH_HEADER};

fn main() -> orbital_ssp::Result<()> {
    let cfg = DiffConfig {
        families: ["random", "cp", "ap", "gp", "dissociated"].map(String::from).to_vec(),
        trials: 25,
        seed: 7,
        n_max: 14,
        ..DiffConfig::default()
    };
    let recs = oracle::differential_report(&cfg)?;
    println!("{BENCH_HEADER}");
    for r in &recs {
        println!("{}", r.csv_row());
    }
    let agree = recs.iter().filter(|r| r.agree).count();
    let unsound: usize = recs.iter().map(|r| r.unsound).sum();
    eprintln!("{agree}/{} agree, {unsound} unsound indices", recs.len());
    Ok(())
}
