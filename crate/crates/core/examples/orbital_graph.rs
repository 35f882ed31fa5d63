//! Builds the initial orbital graph, checks its size against the closed form
//! and counts interacting edge pairs on structured sequences.

use orbital_ssp::{orbital, Family, Instance};

fn main() -> orbital_ssp::Result<()> {
    for n in [5u64, 10, 20, 40] {
        let inst = Family::Random { n: n as usize, m: 20, seed: n }.generate(None)?;
        let g = orbital::build_g0::<i128>(&inst)?;
        println!(
            "n={n:>2}: {} nodes (formula {}), {} arcs, depth {}",
            g.nodes.len(),
            orbital::g0_node_formula(n),
            g.arcs.len(),
            g.depth()
        );
    }

    let diss = Family::Dissociated { n: 12 }.generate(None)?;
    let cp = Instance::from_u64(&[7; 12], 42)?;
    println!(" k  J_k(diss)  J_k(cp)");
    for k in 3..=12u32 {
        let jd = orbital::pair_interactions(&diss, k)?.len();
        let jc = orbital::pair_interactions(&cp, k)?.len();
        println!("{k:>2} {jd:>9} {jc:>8}");
    }

    let small = Instance::from_u64(&[3, 5, 6, 7], 13)?;
    let g = orbital::build_g0::<i128>(&small)?;
    for line in g.dump_lines().iter().take(6) {
        println!("{line}");
    }
    Ok(())
}
