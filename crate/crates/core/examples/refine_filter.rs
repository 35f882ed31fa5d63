//! Drives the refine and filter steps by hand and prints the graph size after
//! each, then counts and extracts the zero paths.

use orbital_ssp::{ihm, instance::parse_instance, orbital::DestinationPolicy};

fn main() -> orbital_ssp::Result<()> {
    let inst = parse_instance(include_str!("../data/main.txt"))?;
    let mut g = ihm::reachable_graph::<i128>(&inst, DestinationPolicy::Canonical)?;
    println!("reachable build: {} nodes {} arcs", g.nodes.len(), g.arcs.len());
    let rounds = ihm::rounds_needed(&g);
    let st = ihm::filter(&mut g, inst.n());
    println!("filter: {} nodes {} arcs ({} sweeps)", g.nodes.len(), g.arcs.len(), st.sweeps);
    for k in 1..=rounds {
        ihm::refine(&mut g);
        let refined = g.nodes.len();
        let st = ihm::filter(&mut g, inst.n());
        println!("round {k:>2}: refined {refined:>5}, filtered {:>4} nodes, settled {}", g.nodes.len(), st.settled);
    }
    ihm::check_final_graph(&g).map_err(orbital_ssp::Error::Internal)?;

    // The packaged driver does the same thing.
    let run = ihm::ihm_run(ihm::reachable_graph::<i128>(&inst, DestinationPolicy::Canonical)?, &Default::default());
    let ex = ihm::extract_indices(&run.solution, 10);
    let user: Vec<_> = ex.indices.iter().map(|r| inst.to_user_index(r)).collect();
    println!("count {} indices {:?}", run.solution.count, user);
    Ok(())
}
