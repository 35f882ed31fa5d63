//! Transformation-graph counts and the wormhole of one path.

use orbital_ssp::{hgraph, instance::parse_instance};

fn main() -> orbital_ssp::Result<()> {
    let inst = parse_instance(include_str!("../data/main.txt"))?;
    let n = inst.n() as u64;
    for r in 1..=n {
        println!("beta({r}, {n}) = {}", hgraph::beta(r, n)?);
    }

    let path = hgraph::TransformPath::new(vec![9, 8, 7, 5, 4], n as u32)?;
    let wh = hgraph::wormhole(&inst, &path)?;
    for (i, (l, h)) in wh.lower.iter().zip(&wh.upper).enumerate() {
        println!("level {}: [{l}, {h}]", i + 1);
    }
    println!("holds T: {}", hgraph::wormhole_valid(&wh, inst.target()));

    for r in 1..=n as u32 {
        let c = hgraph::count_valid_wormholes(&inst, inst.target(), r)?;
        println!("r={r}: {} of {} valid, {} distinct", c.valid, c.total, c.distinct);
    }
    Ok(())
}
