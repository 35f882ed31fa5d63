//! Counts and lists the solutions of the nine-element running instance.
//!
//! ```text
//! cargo run --release --example solve_main
//! ```

use orbital_ssp::{ihm, instance::parse_instance};

fn main() -> orbital_ssp::Result<()> {
    let inst = parse_instance(include_str!("../data/main.txt"))?;
    let sol = ihm::solve(&inst, &ihm::SolveOptions::default())?;
    println!("n={} T={} count={}", inst.n(), inst.target(), sol.count);
    for r in &sol.indices {
        let parts: Vec<String> = (0..inst.n())
            .filter(|&i| r.bit(i as u64))
            .map(|i| inst.user_a()[i].to_string())
            .collect();
        println!("index {r} = {:b}: {}", r, parts.join(" + "));
        assert_eq!(&inst.sigma_user(r)?, inst.target());
    }
    println!("iter  nodes  arcs  eta");
    for row in &sol.metrics.rows {
        println!("{:>4} {:>6} {:>5}  {:.3}", row.iter, row.nodes, row.arcs, row.eta_nodes);
    }
    println!("final graph: {} nodes, {} arcs", sol.final_nodes, sol.final_arcs);
    Ok(())
}
