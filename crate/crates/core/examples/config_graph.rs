//! Configuration graph of the running instance and the audit of its
//! product and sandwich inequalities.

use orbital_ssp::{analysis, instance::parse_instance, Instance};

fn main() -> orbital_ssp::Result<()> {
    let inst = parse_instance(include_str!("../data/main.txt"))?;
    let cg = analysis::build_config_graph(&inst, 2_000_000)?;
    println!("gamma = {:?}", cg.gamma);
    println!("mu    = {:?}", cg.mu);
    println!("zero-path profile = {:?}", cg.zero);
    let audit = analysis::product_inequality_audit(&cg);
    print!("{}", audit.to_csv());
    println!("growth violations {:?}", audit.growth_violations);
    println!("sandwich violations {:?} (continuing {:?})", audit.sandwich_violations, audit.continuing_sandwich_violations);
    println!("max gamma < mu0^4: {}", audit.max_gamma_ok);

    let cp = Instance::from_u64(&[5; 8], 20)?;
    let cg = analysis::build_config_graph(&cp, 100_000)?;
    println!("constant sequence gamma = {:?}", cg.gamma);
    Ok(())
}
