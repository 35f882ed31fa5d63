//! Graph size per iteration for the two 40-element instances. The first
//! takes about a minute, the second about two, in a release build.
//!
//! ```text
//! cargo run --release --example growth_curve -- 2
//! ```

use orbital_ssp::{ihm, instance::parse_instance};

fn main() -> orbital_ssp::Result<()> {
    let text = match std::env::args().nth(1).as_deref() {
        Some("2") => include_str!("../data/example2.txt"),
        _ => include_str!("../data/example1.txt"),
    };
    let inst = parse_instance(text)?;
    let opts = ihm::SolveOptions { count_only: inst.target().bits() > 40, indices_cap: 10, ..Default::default() };
    let sol = ihm::solve(&inst, &opts)?;
    print!("{}", sol.metrics.to_csv());
    let m = &sol.metrics;
    eprintln!(
        "count {} k_peak {} eta_peak {:.3} settled at {:?} monotone {}",
        sol.count,
        m.k_peak,
        m.eta_peak,
        m.settled_at(),
        m.monotone_after_peak()
    );
    if !sol.indices.is_empty() {
        eprintln!("indices {:?}", sol.indices);
    }
    Ok(())
}
